"""Linear temporal logic with language-bounded until/since over finite words.

Formulas are evaluated at positions 0..n+1 of a word of length n.  Position 0
is an artificial minimum, position n+1 an artificial maximum, and positions
1..n carry the letters.  The bounded until U[L](p, q) holds at i when some
j > i satisfies q, every position strictly between satisfies p, and the infix
of the word strictly between positions i and j belongs to L.  Since is the
mirror image.  The plain until/since default L to the full language, and the
derived forms X, F[L] and F are expanded at parse time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .automata import Alphabet, Dfa, compile_pattern
from .errors import InputError


class Formula:
    """Base class for formula nodes."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Top(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Min(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Max(Formula):
    pass


@dataclass(frozen=True, slots=True)
class LetterAt(Formula):
    symbol: str


@dataclass(frozen=True, slots=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Until(Formula):
    bound: Dfa
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Since(Formula):
    bound: Dfa
    left: Formula
    right: Formula


class _FormulaParser:
    """Recursive descent parser.

    Grammar, loosest binding first:

        formula := conj ('|' conj)*
        conj    := unary ('&' unary)*
        unary   := '!' unary | primary
        primary := 'top' | 'min' | 'max' | letter
                 | 'U' ['[' regex ']'] '(' formula ',' formula ')'
                 | 'S' ['[' regex ']'] '(' formula ',' formula ')'
                 | 'F' ['[' regex ']'] '(' formula ')'
                 | 'X' '(' formula ')'
                 | '(' formula ')'

    X(p) abbreviates U[_](!top, p) where _ is the empty-word language, and
    F[L](p) abbreviates U[L](top, p); omitted bounds default to the full
    language.
    """

    def __init__(self, text: str, alphabet: Alphabet) -> None:
        self.text = text
        self.pos = 0
        self.alphabet = alphabet

    def fail(self, message: str) -> InputError:
        return InputError(f"formula syntax error at offset {self.pos}: {message}")

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, token: str) -> None:
        self.skip_ws()
        if not self.text.startswith(token, self.pos):
            raise self.fail(f"expected {token!r}")
        self.pos += len(token)

    def parse(self) -> Formula:
        node = self.formula()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.fail("trailing input")
        return node

    def formula(self) -> Formula:
        node = self.conj()
        while self.peek() == "|":
            self.eat("|")
            node = Or(node, self.conj())
        return node

    def conj(self) -> Formula:
        node = self.unary()
        while self.peek() == "&":
            self.eat("&")
            node = And(node, self.unary())
        return node

    def unary(self) -> Formula:
        if self.peek() == "!":
            self.eat("!")
            return Not(self.unary())
        return self.primary()

    def bound_dfa(self, default: str) -> Dfa:
        pattern = default
        if self.peek() == "[":
            self.eat("[")
            depth = 1
            start = self.pos
            while self.pos < len(self.text) and depth:
                ch = self.text[self.pos]
                if ch == "[":
                    depth += 1
                elif ch == "]":
                    depth -= 1
                    if not depth:
                        break
                self.pos += 1
            if depth:
                raise self.fail("unterminated '['")
            pattern = self.text[start:self.pos]
            self.eat("]")
        try:
            return compile_pattern(pattern, self.alphabet)
        except InputError as exc:
            raise self.fail(f"bad bound language: {exc}") from exc

    def pair(self) -> tuple[Formula, Formula]:
        self.eat("(")
        left = self.formula()
        self.eat(",")
        right = self.formula()
        self.eat(")")
        return left, right

    def primary(self) -> Formula:
        self.skip_ws()
        rest = self.text[self.pos:]
        if rest.startswith("top"):
            self.pos += 3
            return Top()
        if rest.startswith("min"):
            self.pos += 3
            return Min()
        if rest.startswith("max"):
            self.pos += 3
            return Max()
        if rest.startswith("U"):
            self.pos += 1
            bound = self.bound_dfa("~%")
            left, right = self.pair()
            return Until(bound, left, right)
        if rest.startswith("S"):
            self.pos += 1
            bound = self.bound_dfa("~%")
            left, right = self.pair()
            return Since(bound, left, right)
        if rest.startswith("F"):
            self.pos += 1
            bound = self.bound_dfa("~%")
            self.eat("(")
            child = self.formula()
            self.eat(")")
            return Until(bound, Top(), child)
        if rest.startswith("X"):
            self.pos += 1
            self.eat("(")
            child = self.formula()
            self.eat(")")
            empty_word = compile_pattern("_", self.alphabet)
            return Until(empty_word, Not(Top()), child)
        if rest.startswith("("):
            self.eat("(")
            node = self.formula()
            self.eat(")")
            return node
        ch = self.peek()
        if ch in self.alphabet:
            self.pos += 1
            return LetterAt(ch)
        raise self.fail("expected a formula")


def parse_formula(text: str, alphabet: Alphabet) -> Formula:
    return _FormulaParser(text, alphabet).parse()


@dataclass
class _Evaluator:
    word: str
    runs: dict[int, list[list[int]]] = field(default_factory=dict)
    memo: dict[tuple[int, int], bool] = field(default_factory=dict)

    def run_table(self, dfa: Dfa) -> list[list[int]]:
        # rows[i][j] = state reached from the initial state on word[i:j],
        # indexed so the infix between positions i and j is word[i:j-1].
        table = self.runs.get(id(dfa))
        if table is None:
            n = len(self.word)
            table = []
            for i in range(n + 1):
                row = [0] * (n + 1)
                state = dfa.initial
                row[i] = state
                for j in range(i, n):
                    state = dfa.step(state, self.word[j])
                    row[j + 1] = state
                table.append(row)
            self.runs[id(dfa)] = table
        return table

    def infix_in(self, dfa: Dfa, i: int, j: int) -> bool:
        # Positions i < j bound the open interval; its content is word[i:j-1].
        lo = min(i, len(self.word))
        hi = max(lo, j - 1)
        return self.run_table(dfa)[lo][hi] in dfa.finals

    def holds(self, node: Formula, i: int) -> bool:
        key = (id(node), i)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        value = self.compute(node, i)
        self.memo[key] = value
        return value

    def compute(self, node: Formula, i: int) -> bool:
        n = len(self.word)
        if isinstance(node, Top):
            return True
        if isinstance(node, Min):
            return i == 0
        if isinstance(node, Max):
            return i == n + 1
        if isinstance(node, LetterAt):
            return 1 <= i <= n and self.word[i - 1] == node.symbol
        if isinstance(node, Not):
            return not self.holds(node.child, i)
        if isinstance(node, Or):
            return self.holds(node.left, i) or self.holds(node.right, i)
        if isinstance(node, And):
            return self.holds(node.left, i) and self.holds(node.right, i)
        if isinstance(node, Until):
            for j in range(i + 1, n + 2):
                if j > i + 1 and not self.holds(node.left, j - 1):
                    return False
                if self.holds(node.right, j) and self.infix_in(node.bound, i, j):
                    return True
            return False
        if isinstance(node, Since):
            for j in range(i - 1, -1, -1):
                if j < i - 1 and not self.holds(node.left, j + 1):
                    return False
                if self.holds(node.right, j) and self.infix_in(node.bound, j, i):
                    return True
            return False
        raise TypeError(f"unknown formula node {type(node).__name__}")


def eval_at(formula: Formula, word: str, position: int) -> bool:
    """Truth value of the formula at the given position of the word."""
    if not 0 <= position <= len(word) + 1:
        raise InputError(
            f"position {position} out of range for a word of length {len(word)}"
        )
    return _Evaluator(word).holds(formula, position)


def eval_word(formula: Formula, word: str) -> bool:
    """Truth value at the artificial minimum position."""
    return eval_at(formula, word, 0)


def _words_by_length(alphabet: Alphabet, max_length: int):
    frontier = [""]
    yield ""
    for _ in range(max_length):
        frontier = [w + sym for w in frontier for sym in alphabet]
        yield from frontier


def compare_sampled(
    formula: Formula, dfa: Dfa, alphabet: Alphabet, max_length: int = 8
) -> list[str]:
    """Words up to the length bound where formula and automaton disagree."""
    from .automata import accepts

    mismatches = []
    for word in _words_by_length(alphabet, max_length):
        if eval_word(formula, word) != accepts(dfa, word):
            mismatches.append(word)
    return mismatches
