"""Pair relations and kernels: the separation oracles for base classes.

For a finite prevariety given by a canonical morphism eta, the pair
relation holds between s and t when the fibers of s and t cannot be
distinguished by any language recognized through eta; this reduces to a
reachability question in a product walk.

For the group classes, the kernel of a morphism alpha collects the
elements whose fiber is inseparable from the empty word:

  * mod: the stable monoid, via the stability index of alpha.
  * amt: elements reachable with all letter counts divisible by every
    modulus at once, via Parikh decompositions and integer lattices.
  * gr:  the type-II saturation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import InputError, ResourceLimitError
from .monoid import FiniteMonoid, Morphism


@dataclass(frozen=True)
class FinitePrevariety:
    """A finite base class, presented by its canonical morphism."""

    eta: Morphism


@dataclass(frozen=True)
class GroupClass:
    tag: str


MOD = GroupClass("mod")
AMT = GroupClass("amt")
GR = GroupClass("gr")

_GROUP_CLASSES = {"mod": MOD, "amt": AMT, "gr": GR}


def trivial_morphism(alphabet) -> Morphism:
    one = FiniteMonoid(1, 0, ((0,),))
    return Morphism(
        alphabet=alphabet,
        codomain=one,
        letter_images=(0,) * len(alphabet),
        image=frozenset({0}),
    )


def st_class(alphabet) -> FinitePrevariety:
    return FinitePrevariety(trivial_morphism(alphabet))


@dataclass(frozen=True)
class PairSet:
    pairs: frozenset[tuple[int, int]]

    def related(self, s: int, t: int) -> bool:
        return (s, t) in self.pairs


def c_pairs(c: FinitePrevariety, alpha: Morphism) -> PairSet:
    """All (s, t) whose fibers are inseparable inside the base class.

    Two elements are a pair exactly when some eta-image is reached jointly
    with both of them, so it suffices to walk the product of alpha and eta.
    """
    eta = c.eta
    if eta.alphabet != alpha.alphabet:
        raise InputError("the class morphism must use the language's alphabet")
    m, n = alpha.codomain, eta.codomain
    start = (m.identity, n.identity)
    seen = {start}
    queue = deque([start])
    width = len(alpha.alphabet)
    while queue:
        s, x = queue.popleft()
        for i in range(width):
            nxt = (m.mul[s][alpha.letter_images[i]], n.mul[x][eta.letter_images[i]])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    by_witness: dict[int, list[int]] = {}
    for s, x in seen:
        by_witness.setdefault(x, []).append(s)
    pairs = set()
    for group in by_witness.values():
        for s in group:
            for t in group:
                pairs.add((s, t))
    return PairSet(frozenset(pairs))


def c_orbit(pairs: PairSet, alpha: Morphism, e: int) -> frozenset[int]:
    """The orbit of an idempotent: all e*s*e where (e, s) is a pair."""
    m = alpha.codomain
    if not 0 <= e < m.size or m.mul[e][e] != e:
        raise InputError(f"element {e} is not an idempotent")
    orbit = set()
    for s, t in pairs.pairs:
        if s == e:
            orbit.add(m.mul[m.mul[e][t]][e])
    return frozenset(orbit)


# ---------------------------------------------------------------------------
# mod: the stable monoid


def _set_product(m: FiniteMonoid, xs, ys) -> frozenset[int]:
    return frozenset(m.mul[x][y] for x in xs for y in ys)


def mod_stability_index(alpha: Morphism) -> int:
    """Least d >= 1 with alpha(A^d) = alpha(A^2d)."""
    m = alpha.codomain
    letters = frozenset(alpha.letter_images)
    current = letters
    d = 1
    limit = 2 ** (min(len(alpha.image), 20) + 1)
    while _set_product(m, current, current) != current:
        current = _set_product(m, current, letters)
        d += 1
        if d > limit:
            raise ResourceLimitError("stability index search exceeded its bound")
    return d

def mod_kernel(alpha: Morphism) -> frozenset[int]:
    """The stable monoid: identity plus the images of words of length d."""
    m = alpha.codomain
    letters = frozenset(alpha.letter_images)
    current = letters
    for _ in range(mod_stability_index(alpha) - 1):
        current = _set_product(m, current, letters)
    return frozenset({m.identity}) | current


# ---------------------------------------------------------------------------
# amt: counting letters modulo every integer at once
#
# An element s belongs to the kernel when for every q >= 1 some word with
# all letter counts divisible by q maps to s.  Walk the right Cayley graph
# of the image submonoid: the Parikh vectors of the walks from the
# identity to s form a finite union of linear sets, one per set Q of
# visited vertices, with base walks of length at most |Q|^2 and periods
# the simple cycles inside Q.  For a linear set b + N-span(P), divisible
# vectors exist for every modulus exactly when b lies in the integer span
# of P: reducing modulo q = n! for growing n kills the free part of
# Z^dim / span(P) and then its torsion, and conversely integer
# coefficients can be shifted upward by multiples of q into N.  So s is in
# the kernel iff some walk of length at most |image|^2 reaches s with a
# Parikh vector inside the lattice of the cycles it could have grafted.


class IntegerLattice:
    """The integer span of a list of vectors, in Hermite row form.

    reduce() maps a vector to the canonical representative of its coset,
    so membership is reduce(v) == 0 and representatives can be used as
    dictionary keys.
    """

    def __init__(self, dim: int, vectors=()) -> None:
        self.dim = dim
        self.rows: list[tuple[int, list[int]]] = []  # (pivot column, row)
        for v in vectors:
            self.add(v)

    def add(self, vector) -> bool:
        """Insert a vector; returns True when the lattice grew."""
        v = list(vector)
        if len(v) != self.dim:
            raise InputError("vector dimension mismatch")
        work = [v]
        grew = False
        while work:
            v = work.pop()
            v = self._partial_reduce(v)
            col = next((i for i, c in enumerate(v) if c), None)
            if col is None:
                continue
            grew = True
            if v[col] < 0:
                v = [-c for c in v]
            slot = next(
                (k for k, (pc, _) in enumerate(self.rows) if pc == col), None
            )
            if slot is None:
                self.rows.append((col, v))
                self.rows.sort(key=lambda item: item[0])
            else:
                # same pivot column: keep the gcd row, requeue the remainder
                pc, row = self.rows[slot]
                while v[col]:
                    q = row[col] // v[col]
                    row = [a - q * b for a, b in zip(row, v)]
                    row, v = v, row
                self.rows[slot] = (col, row)
                work.append(v)
        if grew:
            self._normalize()
        return grew

    def _partial_reduce(self, v: list[int]) -> list[int]:
        for col, row in self.rows:
            if v[col]:
                q = v[col] // row[col]
                if q:
                    v = [a - q * b for a, b in zip(v, row)]
        return v

    def _normalize(self) -> None:
        # entries above each pivot reduced into [0, pivot)
        for k in range(len(self.rows) - 1, -1, -1):
            col, row = self.rows[k]
            for j in range(k):
                cj, rj = self.rows[j]
                q = rj[col] // row[col]
                if q:
                    self.rows[j] = (cj, [a - q * b for a, b in zip(rj, row)])

    def reduce(self, vector) -> tuple[int, ...]:
        v = list(vector)
        for col, row in self.rows:
            q = v[col] // row[col]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, vector) -> bool:
        return all(c == 0 for c in self.reduce(vector))


def _image_cayley(alpha: Morphism):
    """Vertices (sorted image elements) and letter-indexed successor rows."""
    m = alpha.codomain
    vertices = sorted(alpha.image)
    pos = {s: k for k, s in enumerate(vertices)}
    succ = [
        [pos[m.mul[s][g]] for g in alpha.letter_images] for s in vertices
    ]
    return vertices, pos, succ


def _simple_cycles(succ, width: int):
    """Parikh vector and vertex set of every simple cycle in the graph."""
    size = len(succ)
    cycles: list[tuple[int, tuple[int, ...]]] = []  # (vertex mask, parikh)
    for root in range(size):
        # cycles whose least vertex is the root: DFS through larger vertices
        stack = [(root, 1 << root, (0,) * width)]
        while stack:
            v, mask, parikh = stack.pop()
            for i in range(width):
                nxt = succ[v][i]
                counted = list(parikh)
                counted[i] += 1
                if nxt == root:
                    cycles.append((mask, tuple(counted)))
                elif nxt > root and not (mask >> nxt) & 1:
                    stack.append((nxt, mask | (1 << nxt), tuple(counted)))
    return cycles


def amt_kernel(
    alpha: Morphism, alphabet_cap: int = 3, monoid_cap: int = 10
) -> frozenset[int]:
    width = len(alpha.alphabet)
    if width > alphabet_cap:
        raise ResourceLimitError(
            f"alphabet of size {width} exceeds the counting cap of {alphabet_cap}"
        )
    if len(alpha.image) > monoid_cap:
        raise ResourceLimitError(
            f"image of size {len(alpha.image)} exceeds the counting cap of {monoid_cap}"
        )
    vertices, pos, succ = _image_cayley(alpha)
    cycles = _simple_cycles(succ, width)

    lattices: dict[int, IntegerLattice] = {}

    def lattice_for(mask: int) -> IntegerLattice:
        lat = lattices.get(mask)
        if lat is None:
            lat = IntegerLattice(
                width,
                (parikh for cmask, parikh in cycles if cmask & ~mask == 0),
            )
            lattices[mask] = lat
        return lat

    m = alpha.codomain
    start = pos[m.identity]
    zero = (0,) * width
    initial = (start, 1 << start, lattice_for(1 << start).reduce(zero))
    seen = {initial}
    frontier = [initial]
    hits = {start}
    for _ in range(len(vertices) ** 2):
        if not frontier:
            break
        fresh = []
        for v, mask, residue in frontier:
            for i in range(width):
                nxt = succ[v][i]
                nmask = mask | (1 << nxt)
                stepped = list(residue)
                stepped[i] += 1
                state = (nxt, nmask, lattice_for(nmask).reduce(stepped))
                if state not in seen:
                    seen.add(state)
                    fresh.append(state)
                    if state[2] == zero:
                        hits.add(nxt)
        frontier = fresh
    return frozenset(vertices[v] for v in hits)


# ---------------------------------------------------------------------------
# gr: type-II saturation


def gr_kernel(alpha: Morphism) -> frozenset[int]:
    """Least submonoid T with s*T*t and t*T*s inside T whenever s*t*s = s."""
    m = alpha.codomain
    elems = sorted(alpha.image)
    weak_inverses = [
        (s, t)
        for s in elems
        for t in elems
        if m.mul[m.mul[s][t]][s] == s
    ]
    kernel = {m.identity}
    changed = True
    while changed:
        changed = False
        snapshot = sorted(kernel)
        for x in snapshot:
            for y in snapshot:
                p = m.mul[x][y]
                if p not in kernel:
                    kernel.add(p)
                    changed = True
        for s, t in weak_inverses:
            for x in snapshot:
                sx = m.mul[s][x]
                tx = m.mul[t][x]
                for p in (m.mul[sx][t], m.mul[tx][s]):
                    if p not in kernel:
                        kernel.add(p)
                        changed = True
    return frozenset(kernel)


def group_kernel(cls: GroupClass, alpha: Morphism, config=None) -> frozenset[int]:
    if not isinstance(cls, GroupClass):
        raise InputError(f"kernels are defined for group classes, not {cls!r}")
    if cls.tag == "mod":
        return mod_kernel(alpha)
    if cls.tag == "amt":
        if config is not None:
            return amt_kernel(
                alpha,
                alphabet_cap=config.amt_alphabet_cap,
                monoid_cap=config.amt_monoid_cap,
            )
        return amt_kernel(alpha)
    if cls.tag == "gr":
        return gr_kernel(alpha)
    raise InputError(f"unknown group class {cls.tag!r}")
