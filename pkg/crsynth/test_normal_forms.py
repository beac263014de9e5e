"""
Normal forms of every system the constructions produce for small inputs,
checked against independent oracles: rewriting random words, choosing redexes
at random, closing a finite set of words under single rewrites, and scanning
words for left sides letter by letter.
"""

import random
from typing import Dict, List

import pytest

from crsynth.algebra import MonoidHom, cyclic_group, permutation_group, transition_monoid
from crsynth.conftest import RHO, TAU, ab_star_dfa, contains_a_dfa, zero_one_monoid
from crsynth.rewriting import enumerate_irr, normalize, normalize_randomized
from crsynth.synthesis import monoid_system, recognize
from crsynth.systems import base_single_letter
from crsynth.words import WeightedAlphabet, Word

RANDOM_WORDS = 10_000
RANDOMIZED_TRIALS = 1_000
CLOSURE_LENGTH = 6


def _base(n):
    unary = WeightedAlphabet.uniform("c")
    hom = MonoidHom(unary, cyclic_group(n), {"c": 1 % n})
    return base_single_letter(hom), hom


def _s3():
    rt = WeightedAlphabet.uniform("rt")
    group, (rho, tau) = permutation_group([RHO, TAU])
    hom = MonoidHom(rt, group, {"r": rho, "t": tau})
    return monoid_system(hom), hom


def _weighted_parity():
    alphabet = WeightedAlphabet.from_pairs([("a", 1), ("c", 2)])
    hom = MonoidHom(alphabet, cyclic_group(2), {"a": 1, "c": 1})
    return monoid_system(hom), hom


def _zero_one():
    ab = WeightedAlphabet.uniform("ab")
    hom = MonoidHom(ab, zero_one_monoid(), {"a": 1, "b": 0})
    return monoid_system(hom), hom


def _recognized(make_dfa):
    dfa = make_dfa(WeightedAlphabet.uniform("ab"))
    return recognize(dfa).system, transition_monoid(dfa)[1]


BUILDERS = {
    **{f"base-{n}": (lambda n=n: _base(n)) for n in range(1, 7)},
    "s3": _s3,
    "weighted-parity": _weighted_parity,
    "zero-one": _zero_one,
    "contains-a": lambda: _recognized(contains_a_dfa),
    "ab-star": lambda: _recognized(ab_star_dfa),
}


@pytest.fixture(scope="module", params=sorted(BUILDERS))
def built(request):
    return BUILDERS[request.param]()


@pytest.fixture
def rng():
    seed = random.randrange(1 << 30)
    print(f"seed {seed}")
    return random.Random(seed)


def _random_word(alphabet, rng, longest=30):
    return Word(alphabet, "".join(chr(rng.randrange(len(alphabet))) for _ in range(rng.randrange(longest + 1))))


def _all_codes(letters, longest):
    codes = [""]
    level = [""]
    for _ in range(longest):
        level = [code + chr(letter) for code in level for letter in range(letters)]
        codes.extend(level)
    return codes


def test_random_words_reach_irreducible_normal_forms(built, rng):
    system, hom = built
    for _ in range(RANDOM_WORDS):
        word = _random_word(system.alphabet, rng)
        normal_form, steps = normalize(system, word)
        assert steps <= word.weight
        assert system.is_irreducible_code(normal_form.code)
        assert hom.apply_code(normal_form.code) == hom.apply_code(word.code)


def test_random_redex_choice_changes_nothing(built, rng):
    system, _ = built
    for _ in range(RANDOMIZED_TRIALS):
        word = _random_word(system.alphabet, rng)
        normal_form, steps = normalize_randomized(system, word, rng)
        assert steps <= word.weight
        assert normal_form == normalize(system, word)[0]


def test_classes_of_single_rewrites_match_normal_forms(built):
    system, _ = built
    parent: Dict[str, str] = {}

    def find(code):
        while parent[code] != code:
            parent[code] = parent[parent[code]]
            code = parent[code]
        return code

    pending: List[str] = _all_codes(len(system.alphabet), CLOSURE_LENGTH)
    for code in pending:
        parent[code] = code
    while pending:
        code = pending.pop()
        for position, index in system.redexes(code):
            rule = system.rules[index]
            rewritten = code[:position] + rule.rhs.code + code[position + len(rule.lhs.code):]
            if rewritten not in parent:
                parent[rewritten] = rewritten
                pending.append(rewritten)
            parent[find(code)] = find(rewritten)

    normal_forms: Dict[str, str] = {}
    for code in parent:
        normal_forms.setdefault(find(code), system.normal_form_code(code))
        assert system.normal_form_code(code) == normal_forms[find(code)]
    assert len(set(normal_forms.values())) == len(normal_forms)


def test_enumerated_irreducible_words_match_a_factor_scan(built):
    system, _ = built
    left_sides = system.lhs_codes
    expected: List[str] = []
    level = [""]
    while level:
        level = [code for code in level if not any(lhs in code for lhs in left_sides)]
        expected.extend(level)
        level = [code + chr(letter) for code in level for letter in range(len(system.alphabet))]
    assert [word.code for word in enumerate_irr(system)] == expected
