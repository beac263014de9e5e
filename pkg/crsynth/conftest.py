"""
Shared fixtures: the standard alphabets, homomorphisms and automata the test
modules keep coming back to
"""

from typing import Dict, Sequence, Tuple

import pytest

from crsynth.algebra import Dfa, FiniteMonoid, MonoidHom, cyclic_group, permutation_group
from crsynth.words import WeightedAlphabet

RHO = (1, 2, 0)
TAU = (0, 2, 1)

S3_ALPHABET_TEXT = "r 1\nt 1\n"

S3_DFA_TEXT = """\
states: q0 q1 q2
initial: q0
accepting: q0
trans: q0 r q1
trans: q1 r q2
trans: q2 r q0
trans: q0 t q0
trans: q1 t q2
trans: q2 t q1
"""

MOD3_ALPHABET_TEXT = "# unary\nc 1\n"

MOD3_DFA_TEXT = """\
states: z0 z1 z2
initial: z0
accepting: z0
trans: z0 c z1
trans: z1 c z2
trans: z2 c z0
"""


def zero_one_monoid() -> FiniteMonoid:
    """{1, 0} with 0 absorbing; element 0 is the identity, element 1 the zero"""
    return FiniteMonoid([[0, 1], [1, 1]], 0, ["1", "0"])


def make_dfa(
    alphabet: WeightedAlphabet,
    states: Sequence[str],
    accepting: Sequence[str],
    table: Dict[Tuple[str, str], str],
) -> Dfa:
    return Dfa(alphabet, states, states[0], accepting, table)


def ab_star_dfa(alphabet: WeightedAlphabet) -> Dfa:
    return make_dfa(
        alphabet,
        ["p0", "p1", "sink"],
        ["p0"],
        {
            ("p0", "a"): "p1",
            ("p0", "b"): "sink",
            ("p1", "a"): "sink",
            ("p1", "b"): "p0",
            ("sink", "a"): "sink",
            ("sink", "b"): "sink",
        },
    )


def contains_a_dfa(alphabet: WeightedAlphabet) -> Dfa:
    return make_dfa(
        alphabet,
        ["none", "seen"],
        ["seen"],
        {
            ("none", "a"): "seen",
            ("none", "b"): "none",
            ("seen", "a"): "seen",
            ("seen", "b"): "seen",
        },
    )


def parity_dfa(alphabet: WeightedAlphabet) -> Dfa:
    table = {}
    for token in alphabet.tokens:
        table[("even", token)] = "odd"
        table[("odd", token)] = "even"
    return make_dfa(alphabet, ["even", "odd"], ["even"], table)


@pytest.fixture
def unary() -> WeightedAlphabet:
    return WeightedAlphabet.uniform("c")


@pytest.fixture
def ab() -> WeightedAlphabet:
    return WeightedAlphabet.uniform("ab")


@pytest.fixture
def rt() -> WeightedAlphabet:
    return WeightedAlphabet.uniform("rt")


@pytest.fixture
def s3_hom(rt) -> MonoidHom:
    group, (rho, tau) = permutation_group([RHO, TAU])
    return MonoidHom(rt, group, {"r": rho, "t": tau})


@pytest.fixture
def parity_hom() -> MonoidHom:
    alphabet = WeightedAlphabet.uniform("ac")
    return MonoidHom(alphabet, cyclic_group(2), {"a": 1, "c": 1})
