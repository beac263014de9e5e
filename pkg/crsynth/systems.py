"""
Elementary system builders: the single-letter base case, padding, power
rules, extended alphabets K = IRR_R(B*)c and lifting of rules over K back
to the base alphabet
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .algebra import MonoidHom, corestrict, exponent, is_group
from .errors import InvalidInputError, PreconditionError, ResourceCapError, VerificationError
from .rewriting import DEFAULT_IRR_CAP, Rule, SemiThueSystem, enumerate_irr, is_locally_confluent, irr_is_finite
from .utils import log
from .words import WeightedAlphabet, Word, code_is_primitive, length_lex_key, token_problem


def base_single_letter(hom: MonoidHom) -> SemiThueSystem:
    """{c^n -> eps} where n is the exponent of the image group of a one-letter alphabet"""
    alphabet = hom.source
    if len(alphabet) != 1:
        raise PreconditionError(f"base case needs a one-letter alphabet, got {len(alphabet)} letters")
    image_hom, _ = corestrict(hom)
    if not is_group(image_hom.target):
        raise PreconditionError("base case needs a group image")
    n = exponent(image_hom.target)
    return SemiThueSystem.from_codes(alphabet, [(chr(0) * n, "")])


def pad_system(system: SemiThueSystem, d: int, max_rules: Optional[int] = None) -> SemiThueSystem:
    """
    Surround every rule with all pairs of words of length d.

    Words of length at most 2d are irreducible in the result and its classes
    map onto the classes of the input.
    """
    if d < 0:
        raise PreconditionError(f"padding length must be nonnegative, got {d}")
    if system.weight_reducing_witness is not None:
        raise PreconditionError(f"padding needs a weight-reducing system; {system.weight_reducing_witness} is not")
    ok, pair = is_locally_confluent(system)
    if not ok:
        raise PreconditionError(f"padding needs a confluent system; {pair.describe()}")
    if not irr_is_finite(system):
        raise PreconditionError("padding needs finitely many irreducible words")
    if d == 0:
        return system
    letters = len(system.alphabet)
    count = len(system) * letters ** (2 * d)
    if max_rules is not None and count > max_rules:
        raise ResourceCapError("pad_system", max_rules, count, {"d": d})
    paddings = [""]
    for _ in range(d):
        paddings = [p + chr(letter) for p in paddings for letter in range(letters)]
    pairs = [(u + rule.lhs.code + v, u + rule.rhs.code + v) for rule in system.rules for u in paddings for v in paddings]
    return SemiThueSystem.from_codes(system.alphabet, pairs)


def power_rules(
    deltas: Iterable[Word], t: int, n: int, alphabet: Optional[WeightedAlphabet] = None
) -> SemiThueSystem:
    """Rules delta^(t+n) -> delta^t for the primitive members of deltas, in length-lexicographic order"""
    if n < 1:
        raise PreconditionError(f"n must be positive, got {n}")
    codes = set()
    for delta in deltas:
        if alphabet is None:
            alphabet = delta.alphabet
        elif delta.alphabet != alphabet:
            raise InvalidInputError("deltas over different alphabets")
        if not delta.code:
            raise PreconditionError("deltas must be nonempty")
        if len(delta) > t:
            raise PreconditionError(f"delta {delta.compact()} is longer than t = {t}")
        codes.add(delta.code)
    if alphabet is None:
        raise PreconditionError("an empty set of deltas needs an explicit alphabet")
    primitive = sorted((code for code in codes if code_is_primitive(code)), key=length_lex_key)
    return SemiThueSystem.from_codes(alphabet, [(code * (t + n), code * t) for code in primitive])


def token_name(parts: Sequence[str]) -> str:
    """Name of an extended letter spelled by base tokens"""
    if all(len(part) == 1 for part in parts):
        name = "".join(parts)
        if token_problem(name) is None:
            return name
    return "(" + ".".join(parts) + ")"


def translation(source: WeightedAlphabet, target: WeightedAlphabet) -> Dict[int, str]:
    """str.translate table sending letters of source to the same tokens in target"""
    return {i: chr(target.index(token)) for i, token in enumerate(source.tokens)}


def embed_system(system: SemiThueSystem, alphabet: WeightedAlphabet) -> SemiThueSystem:
    """The same rules read over a larger alphabet containing every token"""
    table = translation(system.alphabet, alphabet)
    for token in system.alphabet.tokens:
        if alphabet.weight_of(token) != system.alphabet.weight_of(token):
            raise InvalidInputError(f"token {token!r} changes weight when embedded")
    return SemiThueSystem.from_codes(
        alphabet, [(rule.lhs.code.translate(table), rule.rhs.code.translate(table)) for rule in system.rules]
    )


@dataclass(frozen=True)
class ExtendedAlphabet:
    """
    The prefix code K = IRR_R(B*)c read as an alphabet.

    Letters are ordered length-lexicographically by their B-part and weigh what
    they weigh as words over the base alphabet.
    """

    base: WeightedAlphabet
    c: int
    alphabet: WeightedAlphabet
    words: Tuple[str, ...]

    @classmethod
    def build(
        cls, base: WeightedAlphabet, c: int, system: SemiThueSystem, cap: int = DEFAULT_IRR_CAP
    ) -> "ExtendedAlphabet":
        """K for a system over the alphabet B = base without c"""
        if c < 0 or c >= len(base):
            raise PreconditionError(f"letter {c} is not in the base alphabet")
        if base.tokens[c] in system.alphabet:
            raise PreconditionError("the system must not use the distinguished letter")
        table = translation(system.alphabet, base)
        irreducibles = enumerate_irr(system, cap)
        words = tuple(u.code.translate(table) + chr(c) for u in irreducibles)
        tokens = [token_name([base.tokens[ord(ch)] for ch in word]) for word in words]
        weights = [base.code_weight(word) for word in words]
        return cls(base, c, WeightedAlphabet(tuple(tokens), tuple(weights)), words)

    def __len__(self) -> int:
        return len(self.words)

    def letter_of(self, base_code: str) -> int:
        try:
            return self.words.index(base_code)
        except ValueError:
            raise PreconditionError("word is not a letter of the extended alphabet") from None

    def expand(self, code: str) -> str:
        """Base-alphabet spelling of a word over K"""
        words = self.words
        return "".join(words[ord(ch)] for ch in code)

    def naming(self) -> Dict[str, Word]:
        return {token: Word(self.base, word) for token, word in zip(self.alphabet.tokens, self.words)}

    def restrict_hom(self, hom: MonoidHom) -> MonoidHom:
        """hom read on K: each extended letter maps to the image of its spelling"""
        return MonoidHom(
            self.alphabet, hom.target, {token: hom.apply_code(word) for token, word in zip(self.alphabet.tokens, self.words)}
        )


def lift_rules(system: SemiThueSystem, c: Word, naming: Mapping[str, Word]) -> SemiThueSystem:
    """{c l -> c r} over the base alphabet for every rule l -> r over K"""
    if len(c) != 1:
        raise PreconditionError("the shielding prefix must be a single letter")
    base = c.alphabet
    spelled: List[str] = []
    for token in system.alphabet.tokens:
        word = naming.get(token)
        if word is None:
            raise InvalidInputError(f"no spelling for extended letter {token!r}")
        if word.alphabet != base or not word.code.endswith(c.code):
            raise PreconditionError(f"extended letter {token!r} must spell a base word ending in {c.compact()}")
        spelled.append(word.code)

    def expand(code: str) -> str:
        return "".join(spelled[ord(ch)] for ch in code)

    return SemiThueSystem.from_codes(
        base, [(c.code + expand(rule.lhs.code), c.code + expand(rule.rhs.code)) for rule in system.rules]
    )


def assert_no_cross_overlap(first: SemiThueSystem, second: SemiThueSystem) -> None:
    """Raise if a left side of one system overlaps or contains a left side of the other"""
    for left in first.rules:
        a = left.lhs.code
        for right in second.rules:
            b = right.lhs.code
            if a in b or b in a:
                raise VerificationError(f"left sides {left.lhs.compact()} and {right.lhs.compact()} are nested")
            for k in range(1, min(len(a), len(b))):
                if a[-k:] == b[:k] or b[-k:] == a[:k]:
                    raise VerificationError(f"left sides {left.lhs.compact()} and {right.lhs.compact()} overlap")
    log(f"no overlaps between {len(first)} and {len(second)} rules", "DEBUG")


def union_rules(parts: Iterable[SemiThueSystem], alphabet: WeightedAlphabet) -> SemiThueSystem:
    rules: List[Rule] = []
    for part in parts:
        rules.extend(part.rules)
    return SemiThueSystem(alphabet, rules)
