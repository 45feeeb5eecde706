import pytest
from hypothesis import given, strategies as st

from bruteforce import accepted_slice, nerode_class_count, words_up_to
from sfclosure.automata import (
    accepts,
    compile_pattern,
    complement,
    concat,
    dfa_from_json,
    dfa_to_json,
    is_empty,
    make_alphabet,
    minimize,
    parse_regex,
    product,
    shortest_word,
    star,
)
from sfclosure.errors import InputError

AB = make_alphabet("ab")
A = make_alphabet("a")


def in_ab_star(w):
    return len(w) % 2 == 0 and all(
        w[i] == "ab"[i % 2] for i in range(len(w))
    )


def has_a(w):
    return "a" in w


def even_a_only(w):
    return len(w) % 2 == 0 and all(c == "a" for c in w)


def in_pair_star(w):
    return len(w) % 2 == 0 and all(w[i] == w[i + 1] for i in range(0, len(w), 2))


# Minimal state counts were frozen from the quotient count of hand-written
# membership predicates before the subset construction existed.
GOLDENS = [
    ("(ab)*", AB, in_ab_star, 3),
    ("~%a~%", AB, has_a, 2),
    ("(aa)*", A, lambda w: len(w) % 2 == 0, 2),
    ("(aa)*", AB, even_a_only, 3),
    ("(aa+bb)*", AB, in_pair_star, 4),
]


@pytest.mark.parametrize("pattern, alphabet, predicate, states", GOLDENS)
def test_minimal_state_goldens(pattern, alphabet, predicate, states):
    assert nerode_class_count(predicate, alphabet, 6, 5) == states
    dfa = compile_pattern(pattern, alphabet)
    assert dfa.states == states


@pytest.mark.parametrize("pattern, alphabet, predicate, states", GOLDENS)
def test_compiled_language_matches_predicate(pattern, alphabet, predicate, states):
    dfa = compile_pattern(pattern, alphabet)
    for w in words_up_to(alphabet, 8):
        assert accepts(dfa, w) == predicate(w), w


def test_empty_and_epsilon_and_letter():
    assert is_empty(compile_pattern("%", AB))
    assert accepted_slice(compile_pattern("_", AB), 2) == {""}
    assert accepted_slice(compile_pattern("b", AB), 2) == {"b"}


def test_union_intersection_complement_difference():
    l1 = compile_pattern("(ab)*", AB)
    l2 = compile_pattern("~%a~%", AB)
    s1, s2 = accepted_slice(l1, 6), accepted_slice(l2, 6)
    univ = set(words_up_to(AB, 6))
    assert accepted_slice(product(l1, l2, "union"), 6) == s1 | s2
    assert accepted_slice(product(l1, l2, "intersection"), 6) == s1 & s2
    assert accepted_slice(product(l1, l2, "difference"), 6) == s1 - s2
    assert accepted_slice(complement(l1), 6) == univ - s1


def test_product_mode_validation():
    l1 = compile_pattern("a", AB)
    with pytest.raises(InputError):
        product(l1, l1, "xor")
    with pytest.raises(InputError):
        product(l1, compile_pattern("a", A), "union")


def test_concat_and_star_against_slices():
    k = compile_pattern("a+ab", AB)
    l = compile_pattern("b+%", AB)
    ks, ls = accepted_slice(k, 4), accepted_slice(l, 4)
    want = {u + v for u in ks for v in ls if len(u + v) <= 4}
    assert {w for w in accepted_slice(concat(k, l), 4)} == want

    base = accepted_slice(k, 6)
    closure = {""}
    for _ in range(6):
        closure |= {u + v for u in closure for v in base if len(u + v) <= 6}
    assert accepted_slice(star(k), 6) == closure


def test_intersect_and_nested_complement_patterns():
    # even-length words containing ab as an infix
    dfa = compile_pattern("~%ab~% & ((a+b)(a+b))*", AB)
    for w in words_up_to(AB, 6):
        assert accepts(dfa, w) == ("ab" in w and len(w) % 2 == 0)


def test_shortest_word():
    assert shortest_word(compile_pattern("%", AB)) is None
    assert shortest_word(compile_pattern("_", AB)) == ""
    assert shortest_word(compile_pattern("a(aa)*", A)) == "a"
    assert shortest_word(compile_pattern("(aab)*ab", AB)) == "ab"


def test_parse_errors_carry_offsets():
    with pytest.raises(InputError, match="offset 3"):
        parse_regex("(ab", AB)
    with pytest.raises(InputError, match="offset 0"):
        parse_regex(")", AB)
    with pytest.raises(InputError):
        parse_regex("c", AB)


def test_alphabet_validation():
    with pytest.raises(InputError):
        make_alphabet("")
    with pytest.raises(InputError):
        make_alphabet("aa")
    with pytest.raises(InputError):
        make_alphabet("a!")


def test_dfa_json_round_trip(corpus):
    for dfa in corpus[:40]:
        assert dfa_from_json(dfa_to_json(dfa)) == dfa


def test_dfa_json_rejects_malformed():
    doc = dfa_to_json(compile_pattern("(ab)*", AB))
    doc["delta"][0][0] = 99
    with pytest.raises(InputError):
        dfa_from_json(doc)


def test_minimize_is_idempotent_and_canonical(corpus):
    for dfa in corpus[:60]:
        again = minimize(dfa)
        assert again == dfa  # corpus members are already minimal
        assert minimize(complement(complement(dfa))) == dfa


_pattern = st.deferred(
    lambda: st.one_of(
        st.sampled_from(["a", "b", "_", "%"]),
        st.tuples(_pattern, _pattern).map(lambda t: f"({t[0]}+{t[1]})"),
        st.tuples(_pattern, _pattern).map(lambda t: f"({t[0]}{t[1]})"),
        _pattern.map(lambda p: f"({p})*"),
        _pattern.map(lambda p: f"(~{p})"),
    )
)


@given(_pattern)
def test_compile_agrees_with_minimized_self(pattern):
    dfa = compile_pattern(pattern, AB)
    assert minimize(dfa) == dfa
    comp = complement(complement(dfa))
    assert minimize(comp) == dfa


@given(_pattern, st.integers(0, 4))
def test_complement_flips_acceptance(pattern, n):
    dfa = compile_pattern(pattern, AB)
    comp = complement(dfa)
    for w in words_up_to(AB, n):
        assert accepts(dfa, w) != accepts(comp, w)
