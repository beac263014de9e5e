"""
Tests for the alphabet, DFA, system and class file formats
"""

import pytest

from crsynth.conftest import MOD3_ALPHABET_TEXT, MOD3_DFA_TEXT, S3_ALPHABET_TEXT, S3_DFA_TEXT
from crsynth.errors import InvalidInputError
from crsynth.formats import (
    emit_alphabet,
    emit_classes,
    emit_report,
    emit_system,
    load_alphabet,
    load_classes,
    load_dfa,
    load_system,
    parse_alphabet,
    parse_classes,
    parse_dfa,
    parse_system,
)
from crsynth.rewriting import SemiThueSystem
from crsynth.words import WeightedAlphabet

C3_TEXT = "alphabet:\nc 1\nrules:\nc c c -> eps\n"


def test_parse_alphabet_skips_comments():
    alphabet = parse_alphabet(MOD3_ALPHABET_TEXT)
    assert alphabet.tokens == ("c",)
    assert alphabet.weights == (1,)
    weighted = parse_alphabet("rho 2\n\n# rotation\ntau 3\n")
    assert weighted.tokens == ("rho", "tau")
    assert emit_alphabet(weighted) == "rho 2\ntau 3\n"


@pytest.mark.parametrize("text", ["c\n", "c one\n", "c 1 2\n", "c 0\n", "c 1\nc 2\n", "eps 1\n"])
def test_parse_alphabet_errors(text):
    with pytest.raises(InvalidInputError):
        parse_alphabet(text)


def test_parse_dfa():
    alphabet = parse_alphabet(S3_ALPHABET_TEXT)
    dfa = parse_dfa(S3_DFA_TEXT, alphabet)
    assert dfa.states == ("q0", "q1", "q2")
    assert dfa.accepts(alphabet.parse("rrr"))
    assert dfa.accepts(alphabet.parse("tt"))
    assert not dfa.accepts(alphabet.parse("rt"))


@pytest.mark.parametrize("text,message", [
    ("initial: z0\naccepting: z0\ntrans: z0 c z0\n", "states"),
    ("states: z0\naccepting: z0\ntrans: z0 c z0\n", "initial"),
    ("states: z0\ninitial: z0\nfinal: z0\n", "unknown directive"),
    ("states: z0\ninitial: z0\ntrans: z0 c\n", "trans"),
    ("states: z0\ninitial: z0\ntrans: z0 c z0\ntrans: z0 c z0\n", "duplicate"),
    ("states: z0 z1\ninitial: z0\ntrans: z0 c z1\n", "missing transition"),
    ("states: z0\ninitial: z0\ntrans: z0 d z0\n", "unknown token"),
    ("states: z0\ninitial: z0 z1\ntrans: z0 c z0\n", "initial"),
])
def test_parse_dfa_errors(text, message):
    alphabet = parse_alphabet(MOD3_ALPHABET_TEXT)
    with pytest.raises(InvalidInputError, match=message):
        parse_dfa(text, alphabet)


def test_parse_and_emit_system():
    system = parse_system(C3_TEXT)
    assert len(system) == 1
    assert system.rules[0].lhs.compact() == "ccc"
    assert system.rules[0].rhs.code == ""
    assert emit_system(system) == C3_TEXT


def test_emit_system_is_canonical():
    ab = WeightedAlphabet.uniform("ab")
    system = SemiThueSystem.from_strings(ab, [("ba", "b"), ("aa", "a"), ("b b", "b")])
    text = emit_system(system)
    assert text.splitlines()[-3:] == ["a a -> a", "b a -> b", "b b -> b"]
    reparsed = parse_system(text)
    assert reparsed == system.canonical()
    assert emit_system(reparsed) == text


def test_parse_system_with_multi_character_tokens():
    text = "# rotations\nalphabet:\nrho 1\ntau 2\nrules:\nrho rho rho -> eps\ntau tau -> eps\n"
    system = parse_system(text)
    assert [str(rule) for rule in system.rules] == ["rho rho rho -> eps", "tau tau -> eps"]
    assert system.rules[1].lhs.weight == 4


def test_system_round_trip_with_reserved_looking_tokens():
    alphabet = WeightedAlphabet.uniform(["x-y", "a>b", "q#", "rules"])
    system = SemiThueSystem.from_strings(alphabet, [("x-y a>b", "q#"), ("rules rules", "eps"), ("q# q#", "rules")])
    text = emit_system(system)
    assert "rules 1" in text.splitlines()
    assert parse_system(text) == system.canonical()

    symbols = WeightedAlphabet.uniform(["-", ">", "c"])
    system = SemiThueSystem.from_strings(symbols, [("- >", "c"), ("> -", "eps"), ("c c", "-")])
    text = emit_system(system)
    assert "- > -> c" in text.splitlines()
    assert parse_system(text) == system.canonical()


@pytest.mark.parametrize("text", [
    "rules:\nc -> eps\n",
    "c 1\nrules:\nc -> eps\n",
    "alphabet:\nc 1\nrules:\nc c\n",
    "alphabet:\nc 1\nrules:\neps -> c\n",
    "alphabet:\nc 1\nrules:\n -> eps\n",
    "alphabet:\nc 1\nrules:\nc d -> eps\n",
    "alphabet:\nc 1\nrules:\nc c -> eps\nc c -> eps\n",
])
def test_parse_system_errors(text):
    with pytest.raises(InvalidInputError):
        parse_system(text)


def test_classes():
    alphabet = parse_alphabet(MOD3_ALPHABET_TEXT)
    words = parse_classes("eps\nc c\n", alphabet)
    assert [w.compact() for w in words] == ["eps", "cc"]
    assert emit_classes(words) == "eps\nc c\n"
    assert parse_classes("", alphabet) == []


def test_emit_report():
    assert emit_report({"rules": 1, "index": 3}) == "rules: 1\nindex: 3\n"


def test_loaders(tmp_path):
    (tmp_path / "unary.alpha").write_text(MOD3_ALPHABET_TEXT)
    (tmp_path / "mod3.dfa").write_text(MOD3_DFA_TEXT)
    (tmp_path / "mod3.sys").write_text(C3_TEXT)
    (tmp_path / "mod3.sys.classes").write_text("eps\n")

    alphabet = load_alphabet(str(tmp_path / "unary.alpha"))
    dfa = load_dfa(str(tmp_path / "mod3.dfa"), alphabet)
    assert dfa.accepts(alphabet.parse("ccc"))
    system = load_system(str(tmp_path / "mod3.sys"))
    assert system.alphabet == alphabet
    assert load_classes(str(tmp_path / "mod3.sys.classes"), alphabet) == [alphabet.empty()]

    with pytest.raises(InvalidInputError, match="cannot read"):
        load_system(str(tmp_path / "missing.sys"))
