"""Covering and separation for star-free closures.

Both solvers compute the optimal set of rating-map values reachable by
covers ("imprints") as a least fixpoint.  Sets of semiring values that
are closed downward are represented by their maximal elements only; this
is sound because multiplication distributes over the idempotent addition
and is therefore monotone, and the closure rule r -> r^w + r^(w+1) is
monotone as well.

Finite base class, with canonical morphism eta into N: the pointed
saturation is the least subset of N x R containing the letter pairs
(eta(a), rho(a)) and the identity pair, closed under componentwise
product, downward closure on R, and, for idempotent e in N, the jump
(e, r) -> (e, r^w + r^(w+1)).

Group base class: the saturation is the least downward closed subset S
of R closed under product, the jump above, and the group step: build the
map sending a letter to {s rho(a) s' : s, s' in S}, take the kernel of
its image monoid for the base class, and pour the union of the kernel
members back into S.  The optimal imprint additionally absorbs the
values rho(w) of single words and closes under product again.

A covering instance (L0, L1..Ln) is reduced to the product of the
canonical rating maps of all the languages; it is coverable exactly when
no optimal value meets every accepting set at once.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .config import DEFAULT, Config
from .errors import InputError, ResourceLimitError
from .monoid import FiniteMonoid, Morphism, RecognizedLanguage, syntactic_morphism
from .oracles import FinitePrevariety, GroupClass, group_kernel
from .semiring import (
    RatingMap,
    Semiring,
    downset,
    product_rating_map,
    rho_alpha,
)


class Antichain:
    """Maximal elements of a downward closed set of semiring values."""

    def __init__(self, sr: Semiring) -> None:
        self.sr = sr
        self.elems: list = []

    def covers(self, x) -> bool:
        return any(self.sr.leq(x, y) for y in self.elems)

    def insert(self, x) -> bool:
        """Add x; returns True when the represented set grows."""
        if self.covers(x):
            return False
        self.elems = [y for y in self.elems if not self.sr.leq(y, x)]
        self.elems.append(x)
        return True

    def snapshot(self) -> list:
        return sorted(self.elems)

    def __len__(self) -> int:
        return len(self.elems)


def _trace_add(trace, rule, value, sr, n=None):
    if trace is not None:
        entry = {"rule": rule, "value": sr.element_to_json(value)}
        if n is not None:
            entry["class_element"] = n
        trace.append(entry)


@dataclass
class FiniteSaturation:
    rho: RatingMap
    eta: Morphism
    chains: dict[int, Antichain]
    rounds: int
    trace: list | None

    def contains(self, n: int, r) -> bool:
        chain = self.chains.get(n)
        return chain is not None and chain.covers(r)

    def projection_max(self) -> list:
        merged = Antichain(self.rho.semiring)
        for n in sorted(self.chains):
            for r in self.chains[n].snapshot():
                merged.insert(r)
        return merged.snapshot()

    def opt_contains(self, r) -> bool:
        return any(self.chains[n].covers(r) for n in self.chains)


def saturate_finite(
    c: FinitePrevariety, rho: RatingMap, want_trace: bool = False
) -> FiniteSaturation:
    eta = c.eta
    if eta.alphabet != rho.alphabet:
        raise InputError("the class morphism must use the rating map's alphabet")
    sr = rho.semiring
    n_monoid = eta.codomain
    trace = [] if want_trace else None
    chains: dict[int, Antichain] = {}

    def insert(n: int, r, rule: str) -> bool:
        chain = chains.get(n)
        if chain is None:
            chain = chains[n] = Antichain(sr)
        if chain.insert(r):
            _trace_add(trace, rule, r, sr, n=n)
            return True
        return False

    insert(n_monoid.identity, sr.one, "seed")
    for i in range(len(rho.alphabet)):
        insert(eta.letter_images[i], rho.letter_images[i], "letter")

    idem = {e for e in range(n_monoid.size) if n_monoid.mul[e][e] == e}
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        snapshot = [
            (n, r) for n in sorted(chains) for r in chains[n].snapshot()
        ]
        for n1, r1 in snapshot:
            for n2, r2 in snapshot:
                if insert(n_monoid.mul[n1][n2], sr.mul(r1, r2), "product"):
                    changed = True
        for n, r in snapshot:
            if n in idem:
                if insert(n, sr.sf_closure_of(r), "closure"):
                    changed = True
    return FiniteSaturation(rho, eta, chains, rounds, trace)


def opt_finite(c: FinitePrevariety, rho: RatingMap) -> list:
    """The optimal imprint, fully materialized.  Meant for small carriers;
    decision procedures use the maximal elements instead."""
    sat = saturate_finite(c, rho)
    return sorted(downset(rho.semiring, sat.projection_max()))


@dataclass
class GroupSaturation:
    rho: RatingMap
    chain: Antichain
    rounds: int
    trace: list | None

    def contains(self, r) -> bool:
        return self.chain.covers(r)


def _max_reduce(sr: Semiring, values) -> tuple:
    chain = Antichain(sr)
    for v in sorted(set(values)):
        chain.insert(v)
    return tuple(chain.snapshot())


def _mu_image_monoid(
    rho: RatingMap, letter_sets: list[tuple], cap: int
) -> Morphism:
    """Image monoid of the set-valued map a -> letter_sets[a].

    Elements are antichains of semiring values; the product is the
    setwise product reduced to its maxima, which tracks the downward
    closure of the honest setwise product.
    """
    sr = rho.semiring
    one = (sr.one,)

    def amul(xs: tuple, ys: tuple) -> tuple:
        return _max_reduce(sr, (sr.mul(x, y) for x in xs for y in ys))

    index: dict[tuple, int] = {one: 0}
    order: list[tuple] = [one]
    queue = deque([one])
    while queue:
        xs = queue.popleft()
        for g in letter_sets:
            ys = amul(xs, g)
            if ys not in index:
                if len(order) >= cap:
                    raise ResourceLimitError(
                        f"group step exceeded the cap of {cap} set values"
                    )
                index[ys] = len(order)
                order.append(ys)
                queue.append(ys)
    mul = tuple(tuple(index[amul(x, y)] for y in order) for x in order)
    monoid = FiniteMonoid(len(order), 0, mul)
    return Morphism(
        alphabet=rho.alphabet,
        codomain=monoid,
        letter_images=tuple(index[amul(one, g)] for g in letter_sets),
        image=frozenset(range(len(order))),
        labels=tuple(order),
    )


def _group_step(
    g: GroupClass, rho: RatingMap, chain: Antichain, config: Config
) -> list:
    """Values contributed by the group rule for the current set."""
    sr = rho.semiring
    maxima = chain.snapshot()
    letter_sets = []
    for img in rho.letter_images:
        prods = [sr.mul(sr.mul(s, img), t) for s in maxima for t in maxima]
        letter_sets.append(_max_reduce(sr, prods))
    mu = _mu_image_monoid(rho, letter_sets, cap=config.powerset2_cap)
    kernel = group_kernel(g, mu, config=config)
    values = set()
    for k in sorted(kernel):
        values.update(mu.labels[k])
    return sorted(values)


def saturate_group(
    g: GroupClass, rho: RatingMap, config: Config = DEFAULT, want_trace: bool = False
) -> GroupSaturation:
    sr = rho.semiring
    trace = [] if want_trace else None
    chain = Antichain(sr)

    def insert(r, rule: str) -> bool:
        if chain.insert(r):
            _trace_add(trace, rule, r, sr)
            return True
        return False

    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        for r in _group_step(g, rho, chain, config):
            if insert(r, "group"):
                changed = True
        inner = True
        while inner:
            inner = False
            snapshot = chain.snapshot()
            for r1 in snapshot:
                for r2 in snapshot:
                    if insert(sr.mul(r1, r2), "product"):
                        inner = changed = True
            for r in snapshot:
                if insert(sr.sf_closure_of(r), "closure"):
                    inner = changed = True
    return GroupSaturation(rho, chain, rounds, trace)


def _opt_chain_group(
    g: GroupClass, rho: RatingMap, config: Config, want_trace: bool = False
) -> GroupSaturation:
    """Saturation extended with word values and product closure: the
    maximal elements of the optimal imprint."""
    sat = saturate_group(g, rho, config=config, want_trace=want_trace)
    sr = rho.semiring

    def insert(r, rule: str) -> bool:
        if sat.chain.insert(r):
            _trace_add(sat.trace, rule, r, sr)
            return True
        return False

    insert(sr.one, "word")
    for img in rho.letter_images:
        insert(img, "word")
    inner = True
    while inner:
        inner = False
        snapshot = sat.chain.snapshot()
        for r1 in snapshot:
            for r2 in snapshot:
                if insert(sr.mul(r1, r2), "product"):
                    inner = True
    return sat


def opt_group(g: GroupClass, rho: RatingMap, config: Config = DEFAULT) -> list:
    sat = _opt_chain_group(g, rho, config)
    return sorted(downset(rho.semiring, sat.chain.snapshot()))


# ---------------------------------------------------------------------------
# Covering instances


@dataclass
class CoverInstance:
    rho: RatingMap
    languages: list[RecognizedLanguage]

    def is_bad(self, value: tuple) -> bool:
        """True when the value meets the accepting set of every language;
        such a value defeats every candidate cover."""
        for part, lang in zip(value, self.languages):
            mask = 0
            for s in lang.accepting:
                mask |= 1 << s
            if not part & mask:
                return False
        return True


def reduce_cover_instance(
    l0, others, monoid_cap: int = 4096, powerset_cap: int = 16
) -> CoverInstance:
    dfas = [l0, *others]
    if not others:
        raise InputError("a covering instance needs at least one avoided language")
    languages = [syntactic_morphism(d, cap=monoid_cap) for d in dfas]
    maps = [rho_alpha(lang, cap=powerset_cap) for lang in languages]
    return CoverInstance(product_rating_map(maps), languages)


@dataclass
class CoverReport:
    answer: bool
    opt_size: int
    rounds: int
    trace: list | None

    def to_json(self) -> dict:
        doc = {"answer": self.answer, "opt_size": self.opt_size, "rounds": self.rounds}
        if self.trace is not None:
            doc["trace"] = self.trace
        return doc


def is_coverable(cls, l0, others, config: Config = DEFAULT) -> CoverReport:
    instance = reduce_cover_instance(
        l0, others, monoid_cap=config.monoid_cap, powerset_cap=config.powerset_cap
    )
    if isinstance(cls, FinitePrevariety):
        sat = saturate_finite(cls, instance.rho, want_trace=config.trace)
        maxima = sat.projection_max()
        rounds = sat.rounds
        trace = sat.trace
    elif isinstance(cls, GroupClass):
        sat = _opt_chain_group(cls, instance.rho, config, want_trace=config.trace)
        maxima = sat.chain.snapshot()
        rounds = sat.rounds
        trace = sat.trace
    else:
        raise InputError(f"unsupported class object {cls!r}")
    answer = not any(instance.is_bad(v) for v in maxima)
    return CoverReport(answer, len(maxima), rounds, trace)


def is_separable(cls, left, right, config: Config = DEFAULT) -> CoverReport:
    """Separation of the left language from the right one, reduced to
    covering: a separator exists iff ({left}, {right}) is coverable."""
    return is_coverable(cls, left, [right], config=config)
