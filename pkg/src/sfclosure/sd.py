"""Prefix codes, synchronization delay, and checked language expressions.

An expression built from empty, single letters, disjoint unions,
unambiguous concatenations, class intersections and stars of prefix
codes with bounded synchronization delay denotes a language in the
star-free closure by construction.  The validator compiles every node
and checks each structural side condition, reporting violations as data
with witness words.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .automata import (
    Alphabet,
    Dfa,
    accepts,
    compile_pattern,
    concat,
    is_empty,
    minimize,
    parse_regex,
    product,
    shortest_word,
    star,
)
from .errors import InputError


def _a_plus(alphabet: Alphabet) -> Dfa:
    width = len(alphabet)
    return Dfa(alphabet, 2, 0, frozenset({1}), ((1,) * width, (1,) * width))


def _epsilon_language(alphabet: Alphabet) -> Dfa:
    width = len(alphabet)
    return Dfa(alphabet, 2, 0, frozenset({0}), ((1,) * width, (1,) * width))


def prefix_code_violation(k: Dfa) -> str | None:
    """A witness that k is not a prefix code: the empty word if present,
    else a word of k that extends a shorter word of k."""
    if accepts(k, ""):
        return ""
    proper_extensions = concat(k, _a_plus(k.alphabet))
    return shortest_word(product(k, proper_extensions, "intersection"))


def is_prefix_code(k: Dfa) -> bool:
    return prefix_code_violation(k) is None


def _power(k: Dfa, d: int) -> Dfa:
    result = _epsilon_language(k.alphabet)
    for _ in range(d):
        result = minimize(concat(result, k))
    return result


def _plus(k: Dfa) -> Dfa:
    return minimize(concat(k, star(k)))


def sync_delay_witness(k: Dfa, d: int) -> tuple[str, str, str] | None:
    """A triple (u, v, w) with v in k^d, uvw in k+ but uv not in k+,
    or None when the delay bound d holds.  Requires a prefix code."""
    if d < 1:
        raise InputError("synchronization delay must be at least 1")
    bad = prefix_code_violation(k)
    if bad is not None:
        raise InputError(f"not a prefix code, witness {bad!r}")
    plus = _plus(k)
    block = _power(k, d)
    width = len(k.alphabet)

    # shortest completion into a final state, per state of k+
    suffix: dict[int, str] = {q: "" for q in plus.finals}
    queue = deque(sorted(plus.finals))
    while queue:
        target = queue.popleft()
        for q in range(plus.states):
            for i in range(width):
                if plus.delta[q][i] == target and q not in suffix:
                    suffix[q] = k.alphabet.symbols[i] + suffix[target]
                    queue.append(q)
    # breadth-first shortest prefixes u
    prefix = {plus.initial: ""}
    order = [plus.initial]
    queue = deque(order)
    while queue:
        q = queue.popleft()
        for i in range(width):
            nxt = plus.delta[q][i]
            if nxt not in prefix:
                prefix[nxt] = prefix[q] + k.alphabet.symbols[i]
                order.append(nxt)
                queue.append(nxt)

    for p1 in order:
        # shortest v per (state of k+, state of k^d) from (p1, start)
        start = (p1, block.initial)
        mids = {start: ""}
        frontier = deque([start])
        while frontier:
            p, b = frontier.popleft()
            if b in block.finals and p not in plus.finals and p in suffix:
                return (prefix[p1], mids[(p, b)], suffix[p])
            for i in range(width):
                nxt = (plus.delta[p][i], block.delta[b][i])
                if nxt not in mids:
                    mids[nxt] = mids[(p, b)] + k.alphabet.symbols[i]
                    frontier.append(nxt)
    return None


def has_sync_delay(k: Dfa, d: int) -> bool:
    return sync_delay_witness(k, d) is None


def min_sync_delay(k: Dfa, dmax: int = 8) -> int | None:
    """Least delay bound up to dmax, or None.  Requires a prefix code."""
    for d in range(1, dmax + 1):
        if has_sync_delay(k, d):
            return d
    return None


def disjointness_witness(k: Dfa, l: Dfa) -> str | None:
    return shortest_word(product(k, l, "intersection"))


def are_disjoint(k: Dfa, l: Dfa) -> bool:
    return disjointness_witness(k, l) is None


def ambiguity_witness(k: Dfa, l: Dfa) -> str | None:
    """A word of k l with two different split points, or None.

    Breadth-first search over three phases: scanning the word inside k,
    scanning after a first chosen split, and after a second, later split.
    Spawning the next phase is an epsilon move available whenever the
    prefix read so far lies in k.
    """
    if k.alphabet != l.alphabet:
        raise InputError("concatenation requires identical alphabets")
    width = len(k.alphabet)

    def closure(node):
        spawned = []
        kind = node[0]
        if kind == 0:
            _, p = node
            if p in k.finals:
                spawned.append((1, p, l.initial, False))
        elif kind == 1:
            _, p, q1, moved = node
            if moved and p in k.finals:
                spawned.append((2, q1, l.initial))
        return spawned

    root = (0, k.initial)
    parent: dict[tuple, tuple] = {root: (None, None)}
    queue = deque([root])
    pending = closure(root)
    for extra in pending:
        parent[extra] = (root, None)
        queue.append(extra)

    def build(node) -> str:
        chunks = []
        while node is not None:
            prev, sym = parent[node]
            if sym is not None:
                chunks.append(sym)
            node = prev
        return "".join(reversed(chunks))

    while queue:
        node = queue.popleft()
        if node[0] == 2 and node[1] in l.finals and node[2] in l.finals:
            return build(node)
        for i in range(width):
            sym = k.alphabet.symbols[i]
            kind = node[0]
            if kind == 0:
                nxt = (0, k.delta[node[1]][i])
            elif kind == 1:
                nxt = (1, k.delta[node[1]][i], l.delta[node[2]][i], True)
            else:
                nxt = (2, l.delta[node[1]][i], l.delta[node[2]][i])
            if nxt not in parent:
                parent[nxt] = (node, sym)
                queue.append(nxt)
                for spawn in closure(nxt):
                    if spawn not in parent:
                        parent[spawn] = (nxt, None)
                        queue.append(spawn)
    return None


def is_unambiguous_concat(k: Dfa, l: Dfa) -> bool:
    return ambiguity_witness(k, l) is None


# ---------------------------------------------------------------------------
# Checked expressions


class SdExpr:
    __slots__ = ()


@dataclass(frozen=True)
class SdEmpty(SdExpr):
    pass


@dataclass(frozen=True)
class SdLetter(SdExpr):
    symbol: str


@dataclass(frozen=True)
class SdUnion(SdExpr):
    left: SdExpr
    right: SdExpr


@dataclass(frozen=True)
class SdConcat(SdExpr):
    left: SdExpr
    right: SdExpr


@dataclass(frozen=True)
class SdCap(SdExpr):
    child: SdExpr
    pattern: str


@dataclass(frozen=True)
class SdStar(SdExpr):
    child: SdExpr
    delay: int


class _SdParser:
    """Syntax: `%`, letters, `dunion(E,F)`, `uconcat(E,F)`,
    `capC(E, "<regex>")` and `star(E, d=<int>)`."""

    def __init__(self, text: str, alphabet: Alphabet) -> None:
        self.text = text
        self.pos = 0
        self.alphabet = alphabet

    def fail(self, message: str):
        raise InputError(f"expression syntax error at offset {self.pos}: {message}")

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str | None:
        self.skip_ws()
        if self.pos < len(self.text):
            return self.text[self.pos]
        return None

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.pos += 1

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        return self.text[start:self.pos]

    def parse(self) -> SdExpr:
        node = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.fail(f"unexpected {self.text[self.pos]!r}")
        return node

    def expr(self) -> SdExpr:
        if self.peek() == "%":
            self.pos += 1
            return SdEmpty()
        mark = self.pos
        name = self.ident()
        if name in ("dunion", "uconcat"):
            self.expect("(")
            left = self.expr()
            self.expect(",")
            right = self.expr()
            self.expect(")")
            return SdUnion(left, right) if name == "dunion" else SdConcat(left, right)
        if name == "capC":
            self.expect("(")
            child = self.expr()
            self.expect(",")
            self.expect('"')
            end = self.text.find('"', self.pos)
            if end < 0:
                self.fail("unterminated pattern string")
            pattern = self.text[self.pos:end]
            self.pos = end + 1
            self.expect(")")
            return SdCap(child, pattern)
        if name == "star":
            self.expect("(")
            child = self.expr()
            self.expect(",")
            key = self.ident()
            if key != "d":
                self.fail("expected d=<int>")
            self.expect("=")
            self.skip_ws()
            digits = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if digits == self.pos:
                self.fail("expected a delay bound")
            delay = int(self.text[digits:self.pos])
            self.expect(")")
            return SdStar(child, delay)
        if len(name) == 1 and name in self.alphabet:
            return SdLetter(name)
        self.pos = mark
        self.fail(f"expected an expression, found {name!r}" if name else "expected an expression")
        raise AssertionError


def parse_sd_expression(text: str, alphabet: Alphabet) -> SdExpr:
    return _SdParser(text, alphabet).parse()


@dataclass(frozen=True)
class SdViolation:
    path: str
    rule: str
    witness: object

    def to_json(self) -> dict:
        return {"path": self.path, "rule": self.rule, "witness": self.witness}


def validate_sd_expression(
    expr: SdExpr, alphabet: Alphabet, dmax: int | None = None
) -> tuple[Dfa | None, list[SdViolation]]:
    """Compile an expression, checking every side condition.

    Returns (dfa, []) on success and (None, violations) otherwise; each
    violation names a node path, the broken rule, and a witness.  With a
    dmax, star delays above the bound are rejected as input errors.
    """
    violations: list[SdViolation] = []

    def walk(node: SdExpr, path: str) -> Dfa:
        if isinstance(node, SdEmpty):
            return _dfa_empty_cached(alphabet)
        if isinstance(node, SdLetter):
            return compile_pattern(node.symbol, alphabet)
        if isinstance(node, SdUnion):
            left = walk(node.left, path + ".left")
            right = walk(node.right, path + ".right")
            witness = disjointness_witness(left, right)
            if witness is not None:
                violations.append(SdViolation(path, "disjoint", witness))
            return minimize(product(left, right, "union"))
        if isinstance(node, SdConcat):
            left = walk(node.left, path + ".left")
            right = walk(node.right, path + ".right")
            witness = ambiguity_witness(left, right)
            if witness is not None:
                violations.append(SdViolation(path, "unambiguous", witness))
            return minimize(concat(left, right))
        if isinstance(node, SdCap):
            child = walk(node.child, path + ".child")
            other = compile_pattern(node.pattern, alphabet)
            return minimize(product(child, other, "intersection"))
        if isinstance(node, SdStar):
            child = walk(node.child, path + ".child")
            if node.delay < 1:
                raise InputError("star delay must be at least 1")
            if dmax is not None and node.delay > dmax:
                raise InputError(
                    f"star delay {node.delay} exceeds the bound {dmax}"
                )
            bad = prefix_code_violation(child)
            if bad is not None:
                violations.append(SdViolation(path, "prefix-code", bad))
            else:
                triple = sync_delay_witness(child, node.delay)
                if triple is not None:
                    violations.append(SdViolation(path, "sync-delay", list(triple)))
            return minimize(star(child))
        raise InputError(f"unknown expression node {node!r}")

    dfa = walk(expr, "root")
    if violations:
        return None, violations
    return dfa, []


def _dfa_empty_cached(alphabet: Alphabet) -> Dfa:
    width = len(alphabet)
    return Dfa(alphabet, 1, 0, frozenset(), ((0,) * width,))
