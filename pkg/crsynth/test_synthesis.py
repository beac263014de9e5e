"""
Tests for the group and monoid constructions and for recognition of regular
languages
"""

import random

import pytest

from crsynth.algebra import MonoidHom, cyclic_group
from crsynth.config import SynthesisOptions
from crsynth.conftest import (
    MOD3_ALPHABET_TEXT,
    MOD3_DFA_TEXT,
    S3_ALPHABET_TEXT,
    S3_DFA_TEXT,
    ab_star_dfa,
    contains_a_dfa,
    make_dfa,
    zero_one_monoid,
)
from crsynth.errors import GcdObstructionError, PreconditionError, ResourceCapError, VerificationError
from crsynth.formats import parse_alphabet, parse_dfa
from crsynth.rewriting import (
    SemiThueSystem,
    irreducible_length_bound,
    normalize,
    normalize_randomized,
    quotient_monoid,
    verify_crs,
)
from crsynth.synthesis import (
    RecognizedLanguage,
    balanced_representatives,
    construct,
    cross_check,
    group_system,
    irreducible_bound,
    monoid_system,
    recognize,
    simple_group_system,
    simple_path_open,
)
from crsynth.systems import ExtendedAlphabet
from crsynth.words import WeightedAlphabet, Word


def rule_set(system):
    return {(rule.lhs.compact(), rule.rhs.compact()) for rule in system.rules}


def test_s3_with_explicit_representatives(s3_hom, rt):
    words = [rt.parse(x) for x in ("rrr", "rtt", "trt", "ttt", "rrt", "trr")]
    representatives = {s3_hom.apply_code(word.code): word for word in words}
    assert len(representatives) == 6

    system = simple_group_system(s3_hom, representatives=representatives)
    assert len(system) == 16
    assert {rule.lhs.code for rule in system.rules} == {w.code for w in _words_of_length(rt, 4)}
    for rule in system.rules:
        assert representatives[s3_hom.apply_code(rule.lhs.code)] == rule.rhs
    report = verify_crs(system, s3_hom)
    assert report.passed
    assert report.index == 15


def _words_of_length(alphabet, length):
    codes = [""]
    for _ in range(length):
        codes = [code + chr(i) for code in codes for i in range(len(alphabet))]
    return [Word(alphabet, code) for code in codes]


def test_s3_auto_picks_weight_three(s3_hom):
    d, chosen = balanced_representatives(s3_hom, 10)
    assert d == 3
    assert len(chosen) == 6
    assert all(len(code) == 3 for code in chosen.values())

    path = []
    system = monoid_system(s3_hom, path=path)
    assert path == ["simple"]
    assert len(system) == 16
    assert verify_crs(system, s3_hom).index == 15


def test_representatives_must_share_weight(s3_hom, rt):
    words = [rt.parse(x) for x in ("rrr", "rtt", "trt", "ttt", "rrt", "trr")]
    representatives = {s3_hom.apply_code(word.code): word for word in words}
    identity = s3_hom.apply_code("")
    representatives[identity] = rt.empty()
    with pytest.raises(PreconditionError):
        simple_group_system(s3_hom, representatives=representatives)
    with pytest.raises(PreconditionError):
        simple_group_system(s3_hom, representatives={identity: rt.parse("rrr")})


def test_gcd_obstruction():
    abc = WeightedAlphabet.uniform("abc")
    hom = MonoidHom(abc, cyclic_group(3), {"a": 1, "b": 1, "c": 1})
    assert not simple_path_open(hom)
    with pytest.raises(GcdObstructionError) as caught:
        simple_group_system(hom)
    assert caught.value.gcd == 3
    assert caught.value.prime == 3


def test_trivial_group_needs_no_padding(ab):
    hom = MonoidHom(ab, cyclic_group(1), {"a": 0, "b": 0})
    assert balanced_representatives(hom, 10) == (0, {0: ""})
    system = simple_group_system(hom)
    assert rule_set(system) == {("a", "eps"), ("b", "eps")}
    assert verify_crs(system, hom).index == 1


def test_weighted_parity_takes_the_simple_path():
    alphabet = WeightedAlphabet.from_pairs([("a", 1), ("c", 2)])
    hom = MonoidHom(alphabet, cyclic_group(2), {"a": 1, "c": 1})
    assert simple_path_open(hom)
    assert balanced_representatives(hom, 10)[0] == 2

    system = monoid_system(hom)
    assert len(system) == 8
    assert all(rule.lhs.weight in (3, 4) and rule.rhs.weight == 2 for rule in system.rules)
    report = verify_crs(system, hom)
    assert report.passed
    assert report.index == 4


@pytest.mark.parametrize("n", range(1, 7))
def test_group_system_single_letter(unary, n):
    hom = MonoidHom(unary, cyclic_group(n), {"c": 1 % n})
    path = []
    system = group_system(hom, path=path)
    assert path == ["base"]
    assert rule_set(system) == {("c" * n, "eps")}
    assert verify_crs(system, hom).index == n


def test_monoid_system_zero_one(ab):
    hom = MonoidHom(ab, zero_one_monoid(), {"a": 1, "b": 0})
    path = []
    system = monoid_system(hom, path=path)
    assert path == ["local-divisor(a)", "base", "base"]
    assert rule_set(system) == {("b", "eps"), ("aa", "a")}
    report = verify_crs(system, hom)
    assert report.passed
    assert report.index == 2
    assert irreducible_length_bound(system) == 1


def test_monoid_system_empty_alphabet():
    empty = WeightedAlphabet((), ())
    hom = MonoidHom(empty, cyclic_group(2), {})
    assert len(monoid_system(hom)) == 0


def test_construct_dispatch(ab):
    hom = MonoidHom(ab, zero_one_monoid(), {"a": 1, "b": 0})
    with pytest.raises(PreconditionError):
        construct(hom, SynthesisOptions(strategy="simple"))
    with pytest.raises(PreconditionError):
        construct(hom, SynthesisOptions(strategy="group"))
    assert rule_set(construct(hom)) == {("b", "eps"), ("aa", "a")}


def test_recognize_contains_a(ab):
    language = recognize(contains_a_dfa(ab))
    assert [(r.lhs.compact(), r.rhs.compact()) for r in language.system.rules] == [("b", "eps"), ("aa", "a")]
    assert language.quotient.index == 2
    assert [w.compact() for w in language.accepting_words] == ["a"]
    normal_form, steps, accepted = language.classify(ab.parse("babba"))
    assert normal_form == ab.parse("a")
    assert accepted
    assert steps <= ab.parse("babba").weight
    assert not language.accepts(ab.parse("bbb"))


def test_recognize_ab_star(ab):
    language = recognize(ab_star_dfa(ab), SynthesisOptions(check_length=10))
    assert language.quotient.index >= 6
    for text, expected in [("", True), ("ab", True), ("abab", True), ("aba", False), ("ba", False), ("abb", False)]:
        assert language.accepts(ab.parse(text)) is expected
    assert cross_check(language, 8) == 2 ** 9 - 1


def test_recognize_mod3():
    alphabet = parse_alphabet(MOD3_ALPHABET_TEXT)
    language = recognize(parse_dfa(MOD3_DFA_TEXT, alphabet))
    assert language.quotient.index == 3
    assert [w.compact() for w in language.accepting_words] == ["eps"]
    assert language.accepts(alphabet.parse("cccccc"))
    assert not language.accepts(alphabet.parse("ccccccc"))


def test_recognize_s3():
    alphabet = parse_alphabet(S3_ALPHABET_TEXT)
    language = recognize(parse_dfa(S3_DFA_TEXT, alphabet))
    assert len(language.system) == 16
    assert language.quotient.index == 15


def test_recognize_accept_all(ab):
    dfa = make_dfa(ab, ["only"], ["only"], {("only", "a"): "only", ("only", "b"): "only"})
    language = recognize(dfa)
    assert language.quotient.index == 1
    assert [w.compact() for w in language.accepting_words] == ["eps"]


def test_cross_check_catches_wrong_classes(unary):
    dfa = parse_dfa(MOD3_DFA_TEXT, unary)
    system = SemiThueSystem.from_codes(unary, [(chr(0) * 3, "")])
    quotient = quotient_monoid(system)
    wrong = RecognizedLanguage(system, quotient, frozenset({1}), dfa)
    with pytest.raises(VerificationError):
        cross_check(wrong, 4)


def test_rewriting_takes_at_most_weight_many_steps(s3_hom, rt):
    system = monoid_system(s3_hom)
    seed = random.randrange(1 << 30)
    print(f"seed {seed}")
    rng = random.Random(seed)
    for _ in range(200):
        word = Word(rt, "".join(chr(rng.randrange(2)) for _ in range(rng.randrange(31))))
        normal_form, steps = normalize(system, word)
        assert steps <= word.weight
        assert len(normal_form) <= 3
        assert s3_hom.apply_code(normal_form.code) == s3_hom.apply_code(word.code)
        assert normalize_randomized(system, word, rng)[0] == normal_form


def test_marker_construction_beyond_two_letters_hits_a_cap():
    abc = WeightedAlphabet.uniform("abc")
    hom = MonoidHom(abc, cyclic_group(3), {"a": 1, "b": 1, "c": 1})
    with pytest.raises((ResourceCapError, VerificationError)):
        group_system(hom, SynthesisOptions(strategy="group", max_irr=500, retries=0))


def test_irreducible_bound_uses_the_longest_extended_letter(ab):
    b_only = ab.restrict(["b"])
    extended = ExtendedAlphabet.build(ab, 0, SemiThueSystem.from_strings(b_only, [("b", "eps")]))
    assert extended.alphabet.tokens == ("a",)
    inner = SemiThueSystem.from_strings(extended.alphabet, [("a", "eps")])
    assert irreducible_bound(inner, extended) == 2

    extended = ExtendedAlphabet.build(ab, 0, SemiThueSystem.from_strings(b_only, [("b b", "eps")]))
    assert extended.alphabet.tokens == ("a", "ba")
    inner = SemiThueSystem.from_strings(extended.alphabet, [("a", "eps"), ("ba ba", "ba")])
    assert irreducible_length_bound(inner) == 1
    assert irreducible_bound(inner, extended) == 6

    assert irreducible_bound(SemiThueSystem(extended.alphabet), extended) is None

