"""
Text formats: alphabet files, DFA files, system files, accepting-class files
and key/value reports
"""

from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .algebra import Dfa
from .errors import InvalidInputError
from .rewriting import Rule, SemiThueSystem
from .utils import content_lines, read_text
from .words import ARROW, EMPTY_TOKEN, WeightedAlphabet, Word


def _weight(text: str, line: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise InvalidInputError(f"weight must be an integer in line {line!r}") from None


def parse_alphabet_lines(lines: Sequence[str]) -> WeightedAlphabet:
    pairs: List[Tuple[str, int]] = []
    for line in lines:
        parts = line.split()
        if len(parts) != 2:
            raise InvalidInputError(f"expected '<token> <weight>', got {line!r}")
        pairs.append((parts[0], _weight(parts[1], line)))
    return WeightedAlphabet.from_pairs(pairs)


def parse_alphabet(text: str) -> WeightedAlphabet:
    """One `<token> <weight>` pair per line; `#` lines are comments"""
    return parse_alphabet_lines(content_lines(text))


def emit_alphabet(alphabet: WeightedAlphabet) -> str:
    return "".join(f"{token} {weight}\n" for token, weight in zip(alphabet.tokens, alphabet.weights))


def parse_dfa(text: str, alphabet: WeightedAlphabet) -> Dfa:
    """
    Parse a DFA from directive lines.

    Example:
        states: even odd
        initial: even
        accepting: even
        trans: even c odd
        trans: odd c even
    """
    states: Optional[List[str]] = None
    initial: Optional[str] = None
    accepting: List[str] = []
    transitions: Dict[Tuple[str, str], str] = {}
    for line in content_lines(text):
        directive, _, rest = line.partition(":")
        directive = directive.strip().lower()
        values = rest.split()
        if directive == "states":
            states = values
        elif directive == "initial":
            if len(values) != 1:
                raise InvalidInputError(f"exactly one initial state expected, got {line!r}")
            initial = values[0]
        elif directive == "accepting":
            accepting.extend(values)
        elif directive == "trans":
            if len(values) != 3:
                raise InvalidInputError(f"expected 'trans: <state> <token> <state>', got {line!r}")
            source, token, target = values
            if (source, token) in transitions:
                raise InvalidInputError(f"duplicate transition for state {source!r} and token {token!r}")
            transitions[(source, token)] = target
        else:
            raise InvalidInputError(f"unknown directive in line {line!r}")
    if states is None:
        raise InvalidInputError("missing 'states:' line")
    if initial is None:
        raise InvalidInputError("missing 'initial:' line")
    return Dfa(alphabet, states, initial, accepting, transitions)


def parse_system(text: str) -> SemiThueSystem:
    """
    Parse a system file: an `alphabet:` section of `<token> <weight>` lines,
    then a `rules:` section of `<lhs tokens> -> <rhs tokens>` lines
    """
    section = None
    alphabet_lines: List[str] = []
    rule_lines: List[str] = []
    for line in content_lines(text):
        header = line.lower()
        if header == "alphabet:":
            section = "alphabet"
        elif header == "rules:":
            section = "rules"
        elif section == "alphabet":
            alphabet_lines.append(line)
        elif section == "rules":
            rule_lines.append(line)
        else:
            raise InvalidInputError(f"content outside a section: {line!r}")
    if section is None:
        raise InvalidInputError("system file has no 'alphabet:' section")
    alphabet = parse_alphabet_lines(alphabet_lines)
    rules = []
    for line in rule_lines:
        lhs, arrow, rhs = line.partition(ARROW)
        if not arrow:
            raise InvalidInputError(f"rule without '{ARROW}': {line!r}")
        left = _tokens(lhs, alphabet, line)
        right = _tokens(rhs, alphabet, line)
        if not left.code:
            raise InvalidInputError(f"empty left side in {line!r}")
        rules.append(Rule(left, right))
    return SemiThueSystem(alphabet, rules)


def _tokens(text: str, alphabet: WeightedAlphabet, line: str) -> Word:
    tokens = text.split()
    if not tokens:
        raise InvalidInputError(f"missing side in rule {line!r}; use {EMPTY_TOKEN} for the empty word")
    if tokens == [EMPTY_TOKEN]:
        return alphabet.empty()
    return alphabet.word(tokens)


def emit_system(system: SemiThueSystem) -> str:
    """Canonical text: rules sorted by left side, then right side"""
    lines = ["alphabet:"]
    lines.extend(emit_alphabet(system.alphabet).splitlines())
    lines.append("rules:")
    lines.extend(f"{rule.lhs} {ARROW} {rule.rhs}" for rule in system.canonical().rules)
    return "\n".join(lines) + "\n"


def parse_classes(text: str, alphabet: WeightedAlphabet) -> List[Word]:
    """One accepted normal form per line, `eps` for the empty word"""
    return [alphabet.parse(line) for line in content_lines(text)]


def emit_classes(words: Iterable[Word]) -> str:
    return "".join(f"{word}\n" for word in words)


def emit_report(values: Mapping[str, object]) -> str:
    return "".join(f"{key}: {value}\n" for key, value in values.items())


def load_alphabet(path: str) -> WeightedAlphabet:
    return parse_alphabet(read_text(path))


def load_dfa(path: str, alphabet: WeightedAlphabet) -> Dfa:
    return parse_dfa(read_text(path), alphabet)


def load_system(path: str) -> SemiThueSystem:
    return parse_system(read_text(path))


def load_classes(path: str, alphabet: WeightedAlphabet) -> List[Word]:
    return parse_classes(read_text(path), alphabet)
