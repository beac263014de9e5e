"""
Tests for rewriting, critical pairs, the avoidance automaton and the verifier
"""

import random

import pytest

from crsynth.algebra import MonoidHom, cyclic_group
from crsynth.errors import InvalidInputError, PreconditionError, ResourceCapError
from crsynth.rewriting import (
    AvoidanceAutomaton,
    SemiThueSystem,
    critical_pairs,
    enumerate_irr,
    irr_is_finite,
    is_locally_confluent,
    is_weight_reducing,
    normalize,
    normalize_randomized,
    normalize_trace,
    quotient_monoid,
    rule_invariance,
    stats,
    verify_crs,
)
from crsynth.words import WeightedAlphabet, Word, enumerate_codes


def system(alphabet, *rules):
    return SemiThueSystem.from_strings(alphabet, rules)


@pytest.fixture
def c3(unary):
    return system(unary, ("ccc", "eps"))


@pytest.fixture
def free_group_like(ab):
    return system(ab, ("ab", "eps"), ("ba", "eps"))


def test_duplicate_rules_rejected(ab):
    with pytest.raises(InvalidInputError):
        system(ab, ("ab", "a"), ("ab", "a"))


def test_is_weight_reducing(c3, ab):
    assert is_weight_reducing(c3) == (True, None)
    ok, witness = is_weight_reducing(system(ab, ("ab", "ba")))
    assert not ok
    assert str(witness) == "a b -> b a"

    light_a = WeightedAlphabet.from_pairs([("a", 1), ("b", 3)])
    assert is_weight_reducing(system(light_a, ("ab", "aa")))[0]
    heavy_a = WeightedAlphabet.from_pairs([("a", 2), ("b", 1)])
    assert not is_weight_reducing(system(heavy_a, ("ab", "aa")))[0]


def test_normalize_unary(c3, unary):
    normal_form, steps = normalize(c3, unary.parse("ccccccc"))
    assert normal_form == unary.parse("c")
    assert steps == 2

    normal_form, steps = normalize(c3, unary.parse("cc"))
    assert (normal_form, steps) == (unary.parse("cc"), 0)


def test_normalize_trace_is_leftmost(free_group_like, ab):
    normal_form, trace = normalize_trace(free_group_like, ab.parse("aba"))
    assert normal_form == ab.parse("a")
    assert trace == [(0, 0)]

    normal_form, trace = normalize_trace(free_group_like, ab.parse("bbaa"))
    assert normal_form == ab.empty()
    assert trace == [(1, 1), (0, 1)]


def test_normalize_prefers_shortest_left_side(ab):
    rules = system(ab, ("aab", "b"), ("aa", "a"))
    _, trace = normalize_trace(rules, ab.parse("aab"))
    assert trace[0] == (0, 1)


def test_normalize_needs_weight_reduction(ab):
    with pytest.raises(PreconditionError):
        normalize(system(ab, ("ab", "ba")), ab.parse("ab"))


def test_normalize_rejects_foreign_word(c3, ab):
    with pytest.raises(InvalidInputError):
        normalize(c3, ab.parse("ab"))


def test_critical_pairs(free_group_like, c3, ab):
    peaks = {(pair.peak.compact(), pair.left_result.compact(), pair.right_result.compact())
             for pair in critical_pairs(free_group_like)}
    assert ("aba", "a", "a") in peaks
    assert ("bab", "b", "b") in peaks

    unary_peaks = {pair.peak.compact() for pair in critical_pairs(c3)}
    assert unary_peaks == {"cccc", "ccccc"}
    for pair in critical_pairs(c3):
        assert normalize(c3, pair.left_result)[0] == normalize(c3, pair.right_result)[0]

    assert critical_pairs(system(WeightedAlphabet.uniform("abcd"), ("ab", "a"), ("cd", "c"))) == []


def test_is_locally_confluent(c3, free_group_like, ab):
    assert is_locally_confluent(c3) == (True, None)
    assert is_locally_confluent(free_group_like)[0]

    ok, witness = is_locally_confluent(system(ab, ("ab", "a"), ("ab", "b")))
    assert not ok
    assert witness.peak == ab.parse("ab")
    assert witness.kind == "containment"


def test_concurrent_joining_matches_sequential(ab):
    rules = system(ab, ("aa", "a"), ("bb", "b"), ("ab", "a"), ("ba", "b"))
    assert is_locally_confluent(rules, workers=4) == is_locally_confluent(rules)

    broken = system(ab, ("aa", "a"), ("bb", "b"), ("ab", "a"), ("ab", "b"), ("ba", "b"))
    sequential = is_locally_confluent(broken)
    concurrent = is_locally_confluent(broken, workers=3)
    assert not sequential[0]
    assert concurrent == sequential


def test_irr_is_finite(ab):
    a = WeightedAlphabet.uniform("a")
    assert irr_is_finite(system(a, ("aa", "a")))
    assert not irr_is_finite(SemiThueSystem(a))
    alternating = system(ab, ("aa", "eps"), ("bb", "eps"))
    assert not irr_is_finite(alternating)
    assert alternating.is_irreducible_code((chr(0) + chr(1)) * 5)


def test_enumerate_irr(c3):
    assert [word.compact() for word in enumerate_irr(c3)] == ["eps", "c", "cc"]
    a = WeightedAlphabet.uniform("a")
    assert [word.compact() for word in enumerate_irr(system(a, ("aa", "a")))] == ["eps", "a"]
    with pytest.raises(ResourceCapError) as caught:
        enumerate_irr(c3, cap=2)
    assert caught.value.stage == "enumerate_irr"
    with pytest.raises(PreconditionError):
        enumerate_irr(SemiThueSystem(a))


def test_avoidance_automaton_counts_and_weights():
    automaton = AvoidanceAutomaton([chr(0) * 3], 1)
    assert automaton.is_finite()
    assert automaton.count_words() == 3
    assert automaton.heaviest_word([2]) == 4
    assert AvoidanceAutomaton([chr(0)], 1).count_words() == 1
    assert AvoidanceAutomaton([""], 1).count_words() == 0
    assert AvoidanceAutomaton([], 2).count_words() is None


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_quotient_of_cyclic_system(unary, n):
    rules = SemiThueSystem.from_codes(unary, [(chr(0) * n, "")])
    quotient = quotient_monoid(rules)
    assert quotient.index == n
    generator = quotient.class_of(unary.parse("c"))
    assert quotient.monoid.power(generator, n) == quotient.monoid.identity


def test_quotient_of_idempotent():
    a = WeightedAlphabet.uniform("a")
    quotient = quotient_monoid(system(a, ("aa", "a")))
    assert quotient.index == 2
    assert quotient.monoid.mul(1, 1) == 1


def test_rule_invariance(c3, unary):
    assert rule_invariance(c3, MonoidHom(unary, cyclic_group(3), {"c": 1})) == (True, None)
    ok, witness = rule_invariance(c3, MonoidHom(unary, cyclic_group(2), {"c": 1}))
    assert not ok
    assert str(witness) == "c c c -> eps"


def test_verify_crs(unary, ab):
    c2 = SemiThueSystem.from_codes(unary, [(chr(0) * 2, "")])
    report = verify_crs(c2, MonoidHom(unary, cyclic_group(2), {"c": 1}))
    assert report.passed
    assert report.index == 2
    assert "verdict: pass" in report.to_lines()

    report = verify_crs(system(ab, ("ab", "a"), ("ab", "b")))
    assert not report.passed
    assert report.confluent is False
    assert report.first_failure().startswith("locally confluent")
    assert "verdict: fail" in report.to_lines()

    report = verify_crs(SemiThueSystem(unary))
    assert not report.finite_index
    assert report.invariant is None
    assert "index: infinite" in report.to_lines()


def test_verify_crs_reports_invariance_failure(c3, unary):
    report = verify_crs(c3, MonoidHom(unary, cyclic_group(2), {"c": 1}))
    assert not report.passed
    assert report.weight_reducing and report.confluent and report.finite_index
    assert "c c c -> eps" in report.first_failure()


def test_stats(c3, unary):
    values = stats(c3)
    assert values["rules"] == 1
    assert values["index"] == 3
    assert values["max-lhs-weight"] == 3
    empty = stats(SemiThueSystem(WeightedAlphabet.uniform("a")))
    assert empty["rules"] == 0
    assert empty["irr-finite"] is False


def test_randomized_normal_forms_agree(ab):
    rules = system(ab, ("aa", "a"), ("bb", "b"), ("ab", "a"), ("ba", "b"))
    seed = random.randrange(1 << 30)
    print(f"seed {seed}")
    rng = random.Random(seed)
    for code in enumerate_codes(ab.weights, 8):
        word = Word(ab, code)
        expected, steps = normalize(rules, word)
        assert steps <= word.weight
        assert normalize_randomized(rules, word, rng)[0] == expected
