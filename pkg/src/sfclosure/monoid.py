"""Finite monoids, morphisms from free monoids, and syntactic morphisms.

A monoid is a multiplication table over 0..size-1.  The syntactic
morphism of a regular language is computed as the transition monoid of
its minimal complete DFA; elements are numbered breadth-first from the
identity transformation, generators in alphabet order, so the numbering
is canonical for a canonical input DFA.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from .automata import Alphabet, Dfa, minimize
from .errors import InputError, ResourceLimitError


@dataclass(frozen=True)
class FiniteMonoid:
    size: int
    identity: int
    mul: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.size < 1:
            raise InputError("monoid must have at least one element")
        if not 0 <= self.identity < self.size:
            raise InputError("identity out of range")
        if len(self.mul) != self.size or any(len(row) != self.size for row in self.mul):
            raise InputError("multiplication table must be size x size")
        for row in self.mul:
            for entry in row:
                if not 0 <= entry < self.size:
                    raise InputError(f"multiplication entry {entry} out of range")


def validate_monoid(m: FiniteMonoid) -> None:
    """Raise InputError on the first broken identity or associativity law."""
    e = m.identity
    for s in range(m.size):
        if m.mul[e][s] != s or m.mul[s][e] != s:
            raise InputError(f"element {e} is not an identity at {s}")
    for x in range(m.size):
        for y in range(m.size):
            xy = m.mul[x][y]
            for z in range(m.size):
                if m.mul[xy][z] != m.mul[x][m.mul[y][z]]:
                    raise InputError(f"associativity fails at ({x}, {y}, {z})")


def idempotent_power(m: FiniteMonoid, s: int) -> int:
    """The unique idempotent in the cyclic subsemigroup generated by s."""
    seen = {s: 1}
    power = s
    exp = 1
    while True:
        power = m.mul[power][s]
        exp += 1
        if power in seen:
            start = seen[power]
            period = exp - start
            # lift the exponent into the cycle and make it divisible by the period
            omega = start + (-start) % period
            result = s
            for _ in range(omega - 1):
                result = m.mul[result][s]
            return result
        seen[power] = exp


def idempotents(m: FiniteMonoid) -> tuple[int, ...]:
    return tuple(s for s in range(m.size) if m.mul[s][s] == s)


def is_aperiodic(m: FiniteMonoid, subset=None) -> bool:
    """True when s^(w+1) = s^w for every s in the subset (default: all).

    The subset must be closed under multiplication, otherwise the question
    is not well posed and we raise InputError.
    """
    if subset is None:
        elems = range(m.size)
    else:
        elems = sorted(set(subset))
        for s in elems:
            if not 0 <= s < m.size:
                raise InputError(f"subset element {s} out of range")
        member = set(elems)
        for s in elems:
            for t in elems:
                if m.mul[s][t] not in member:
                    raise InputError(
                        f"subset is not closed under multiplication: {s}*{t} escapes"
                    )
    for s in elems:
        w = idempotent_power(m, s)
        if m.mul[w][s] != w:
            return False
    return True


def aperiodicity_witness(m: FiniteMonoid, subset) -> int | None:
    """An element with s^(w+1) != s^w, or None if the subset is aperiodic."""
    for s in sorted(set(subset)):
        w = idempotent_power(m, s)
        if m.mul[w][s] != w:
            return s
    return None


def is_group(m: FiniteMonoid) -> bool:
    e = m.identity
    for s in range(m.size):
        if not any(
            m.mul[s][t] == e and m.mul[t][s] == e for t in range(m.size)
        ):
            return False
    return True


@dataclass(frozen=True)
class Morphism:
    """A morphism from the free monoid over `alphabet` into `codomain`.

    `letter_images` is aligned with the alphabet.  `labels`, when present,
    carries an underlying value per codomain element (for monoids derived
    from transformations, tuples or sets).
    """

    alphabet: Alphabet
    codomain: FiniteMonoid
    letter_images: tuple[int, ...]
    image: frozenset[int]
    labels: tuple | None = None

    def __post_init__(self) -> None:
        if len(self.letter_images) != len(self.alphabet):
            raise InputError("one letter image per alphabet symbol required")
        for s in self.letter_images:
            if not 0 <= s < self.codomain.size:
                raise InputError(f"letter image {s} out of range")

    def of_letter(self, sym: str) -> int:
        return self.letter_images[self.alphabet.index(sym)]

    def of_word(self, word: str) -> int:
        result = self.codomain.identity
        for sym in word:
            result = self.codomain.mul[result][self.of_letter(sym)]
        return result


def generated_image(monoid: FiniteMonoid, letter_images) -> frozenset[int]:
    seen = {monoid.identity}
    queue = deque([monoid.identity])
    while queue:
        s = queue.popleft()
        for g in letter_images:
            t = monoid.mul[s][g]
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return frozenset(seen)


@dataclass(frozen=True)
class RecognizedLanguage:
    """A language given by a morphism and an accepting subset of the image."""

    morphism: Morphism
    accepting: frozenset[int]

    def member(self, word: str) -> bool:
        return self.morphism.of_word(word) in self.accepting


def syntactic_morphism(dfa: Dfa, cap: int = 4096) -> RecognizedLanguage:
    """Transition monoid of the minimal DFA, with the accepting element set.

    Element i is a transformation of the state set; composition is in
    diagram order, so mul[x][y] means "apply x, then y".  Raises
    ResourceLimitError when more than `cap` transformations appear.
    """
    dfa = minimize(dfa)
    identity = tuple(range(dfa.states))
    generators = [
        tuple(dfa.delta[q][i] for q in range(dfa.states)) for i in range(len(dfa.alphabet))
    ]
    index: dict[tuple[int, ...], int] = {identity: 0}
    order = [identity]
    queue = deque([identity])
    while queue:
        t = queue.popleft()
        for g in generators:
            composed = tuple(g[t[q]] for q in range(dfa.states))
            if composed not in index:
                if len(order) >= cap:
                    raise ResourceLimitError(
                        f"syntactic monoid exceeds the cap of {cap} elements"
                    )
                index[composed] = len(order)
                order.append(composed)
                queue.append(composed)
    size = len(order)
    mul = tuple(
        tuple(
            index[tuple(y[x[q]] for q in range(dfa.states))] for y in order
        )
        for x in order
    )
    monoid = FiniteMonoid(size, 0, mul)
    letter_images = tuple(index[g] for g in generators)
    morphism = Morphism(
        alphabet=dfa.alphabet,
        codomain=monoid,
        letter_images=letter_images,
        image=frozenset(range(size)),
        labels=tuple(order),
    )
    accepting = frozenset(
        i for i, t in enumerate(order) if t[dfa.initial] in dfa.finals
    )
    return RecognizedLanguage(morphism, accepting)


def product_morphism(morphisms, alphabet: Alphabet | None = None) -> Morphism:
    """Componentwise product morphism into the direct product monoid.

    Only the submonoid generated by the letter tuples is materialized.
    For an empty list the target is the trivial monoid, and an alphabet
    must be supplied.
    """
    morphisms = list(morphisms)
    if not morphisms:
        if alphabet is None:
            raise InputError("empty product needs an explicit alphabet")
        trivial = FiniteMonoid(1, 0, ((0,),))
        return Morphism(
            alphabet=alphabet,
            codomain=trivial,
            letter_images=(0,) * len(alphabet),
            image=frozenset({0}),
            labels=((),),
        )
    first = morphisms[0].alphabet
    for m in morphisms[1:]:
        if m.alphabet != first:
            raise InputError("all factors must share one alphabet")
    if alphabet is not None and alphabet != first:
        raise InputError("alphabet does not match the factors")
    identity = tuple(m.codomain.identity for m in morphisms)
    letter_tuples = [
        tuple(m.letter_images[i] for m in morphisms) for i in range(len(first))
    ]

    def mul_tuples(x, y):
        return tuple(m.codomain.mul[a][b] for m, a, b in zip(morphisms, x, y))

    index = {identity: 0}
    order = [identity]
    queue = deque([identity])
    while queue:
        t = queue.popleft()
        for g in letter_tuples:
            composed = mul_tuples(t, g)
            if composed not in index:
                index[composed] = len(order)
                order.append(composed)
                queue.append(composed)
    # products of generated elements are images of concatenated words,
    # so the reachable set is closed under multiplication
    mul = tuple(
        tuple(index[mul_tuples(x, y)] for y in order) for x in order
    )
    monoid = FiniteMonoid(len(order), 0, mul)
    return Morphism(
        alphabet=first,
        codomain=monoid,
        letter_images=tuple(index[g] for g in letter_tuples),
        image=frozenset(range(len(order))),
        labels=tuple(order),
    )


# ---------------------------------------------------------------------------
# Serialization


def morphism_to_json(lang_or_morphism) -> dict:
    if isinstance(lang_or_morphism, RecognizedLanguage):
        morphism = lang_or_morphism.morphism
        accepting = sorted(lang_or_morphism.accepting)
    else:
        morphism = lang_or_morphism
        accepting = None
    doc = {
        "size": morphism.codomain.size,
        "identity": morphism.codomain.identity,
        "mul": [list(row) for row in morphism.codomain.mul],
        "letters": {
            sym: morphism.letter_images[i]
            for i, sym in enumerate(morphism.alphabet)
        },
    }
    if accepting is not None:
        doc["accepting"] = accepting
    return doc


def morphism_from_json(data: dict) -> Morphism | RecognizedLanguage:
    if not isinstance(data, dict):
        raise InputError("morphism document must be a JSON object")
    try:
        size = int(data["size"])
        identity = int(data["identity"])
        mul = tuple(tuple(int(v) for v in row) for row in data["mul"])
        letters = dict(data["letters"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed morphism document: {exc}") from exc
    monoid = FiniteMonoid(size, identity, mul)
    validate_monoid(monoid)
    alphabet = Alphabet(tuple(sorted(letters)))
    letter_images = tuple(int(letters[sym]) for sym in alphabet)
    morphism = Morphism(
        alphabet=alphabet,
        codomain=monoid,
        letter_images=letter_images,
        image=generated_image(monoid, letter_images),
    )
    if "accepting" in data:
        accepting = frozenset(int(v) for v in data["accepting"])
        for s in accepting:
            if not 0 <= s < size:
                raise InputError(f"accepting element {s} out of range")
        return RecognizedLanguage(morphism, accepting)
    return morphism


def load_morphism(path: str):
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    return morphism_from_json(data)
