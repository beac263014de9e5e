"""
Words over weighted alphabets and the combinatorics on words used by the
constructions: weights, primitivity, conjugacy, periods, factors of powers
and minimal non-factors.

A word stores its letters as a string of code points, one per letter, where
the code point is the letter's position in the alphabet. Factor search,
slicing, concatenation and hashing then run on plain strings, and comparing
codes is exactly the order induced by the alphabet's declaration order.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

from typing_extensions import Self

from .errors import InvalidInputError, PreconditionError

EMPTY_TOKEN = "eps"
ARROW = "->"
SECTION_HEADERS = ("alphabet:", "rules:")


def token_problem(token: str) -> Optional[str]:
    """Why a token cannot be written to and read back from the text formats, None if it can"""
    if not token or any(ch.isspace() for ch in token):
        return f"invalid token {token!r}"
    if token == EMPTY_TOKEN:
        return f"{EMPTY_TOKEN!r} is reserved for the empty word"
    if ARROW in token:
        return f"token {token!r} contains {ARROW!r}"
    if token.startswith("#"):
        return f"token {token!r} would read as a comment"
    if token.lower() in SECTION_HEADERS:
        return f"token {token!r} is a section header"
    return None


def encode(indices: Iterable[int]) -> str:
    """Pack letter indices into a word code"""
    return "".join(map(chr, indices))


def length_lex_key(code: str) -> Tuple[int, str]:
    return (len(code), code)


@dataclass(frozen=True, eq=False)
class WeightedAlphabet:
    """
    Finite ordered set of opaque tokens with positive integer weights.

    The declaration order is the letter order used by length-lexicographic
    comparisons.
    """

    tokens: Tuple[str, ...]
    weights: Tuple[int, ...]
    _index: Dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        tokens = tuple(self.tokens)
        weights = tuple(int(w) for w in self.weights)
        if len(tokens) != len(weights):
            raise InvalidInputError("every token needs exactly one weight")
        index: Dict[str, int] = {}
        for position, (token, weight) in enumerate(zip(tokens, weights)):
            problem = token_problem(token)
            if problem is not None:
                raise InvalidInputError(problem)
            if token in index:
                raise InvalidInputError(f"duplicate token {token!r}")
            if weight < 1:
                raise InvalidInputError(f"weight of {token!r} must be at least 1, got {weight}")
            index[token] = position
        object.__setattr__(self, "tokens", tokens)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, int]]) -> Self:
        pairs = list(pairs)
        return cls(tuple(token for token, _ in pairs), tuple(weight for _, weight in pairs))

    @classmethod
    def uniform(cls, tokens: Iterable[str], weight: int = 1) -> Self:
        tokens = tuple(tokens)
        return cls(tokens, tuple(weight for _ in tokens))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, WeightedAlphabet):
            return NotImplemented
        return self.tokens == other.tokens and self.weights == other.weights

    def __hash__(self) -> int:
        return hash((self.tokens, self.weights))

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[str]:
        return iter(self.tokens)

    def __contains__(self, token: object) -> bool:
        return token in self._index

    def index(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise InvalidInputError(f"unknown token {token!r}") from None

    def weight_of(self, token: str) -> int:
        return self.weights[self.index(token)]

    def code_weight(self, code: str) -> int:
        weights = self.weights
        return sum(weights[ord(ch)] for ch in code)

    @property
    def max_weight(self) -> int:
        return max(self.weights, default=0)

    @property
    def min_weight(self) -> int:
        return min(self.weights, default=0)

    @property
    def single_char(self) -> bool:
        """True when every token is one character, enabling compact word syntax"""
        return all(len(token) == 1 for token in self.tokens)

    def restrict(self, tokens: Sequence[str]) -> "WeightedAlphabet":
        """Sub-alphabet with the given tokens, in the given order"""
        return WeightedAlphabet(tuple(tokens), tuple(self.weight_of(token) for token in tokens))

    def letter(self, token: str) -> "Word":
        return Word(self, chr(self.index(token)))

    def word(self, tokens: Iterable[str]) -> "Word":
        return Word(self, encode(self.index(token) for token in tokens))

    def empty(self) -> "Word":
        return Word(self, "")

    def parse(self, text: str) -> "Word":
        """
        Parse a word from text.

        Tokens are whitespace-delimited and `eps` denotes the empty word. Over an
        alphabet of single-character tokens a word may also be written without
        spaces, e.g. `abba`.
        """
        parts = text.split()
        if not parts or parts == [EMPTY_TOKEN]:
            return self.empty()
        if len(parts) == 1 and parts[0] not in self._index and self.single_char:
            parts = list(parts[0])
        return self.word(parts)


@dataclass(frozen=True, eq=False)
class Word:
    """Finite sequence of letters of one weighted alphabet"""

    alphabet: WeightedAlphabet
    code: str = ""

    def __post_init__(self):
        if self.code and max(map(ord, self.code)) >= len(self.alphabet):
            raise InvalidInputError("word contains a letter outside its alphabet")

    def __len__(self) -> int:
        return len(self.code)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.code == other.code and self.alphabet == other.alphabet

    def __hash__(self) -> int:
        return hash(self.code)

    def __lt__(self, other: "Word") -> bool:
        return self.sort_key < other.sort_key

    def __add__(self, other: "Word") -> "Word":
        self._same_alphabet(other)
        return Word(self.alphabet, self.code + other.code)

    def __mul__(self, exponent: int) -> "Word":
        return Word(self.alphabet, self.code * exponent)

    __pow__ = __mul__

    def __getitem__(self, item: Union[int, slice]) -> "Word":
        if isinstance(item, int):
            return Word(self.alphabet, self.code[item])
        return Word(self.alphabet, self.code[item])

    def __str__(self) -> str:
        if not self.code:
            return EMPTY_TOKEN
        return " ".join(self.tokens)

    def __repr__(self) -> str:
        return f"Word({self.compact()!r})"

    def compact(self) -> str:
        """Spaceless rendering over single-character alphabets, spaced otherwise"""
        if not self.code:
            return EMPTY_TOKEN
        if self.alphabet.single_char:
            return "".join(self.tokens)
        return str(self)

    def _same_alphabet(self, other: "Word") -> None:
        if other.alphabet != self.alphabet:
            raise InvalidInputError("words over different alphabets")

    @property
    def letters(self) -> Tuple[int, ...]:
        return tuple(map(ord, self.code))

    @property
    def tokens(self) -> Tuple[str, ...]:
        tokens = self.alphabet.tokens
        return tuple(tokens[ord(ch)] for ch in self.code)

    @property
    def weight(self) -> int:
        return self.alphabet.code_weight(self.code)

    @property
    def sort_key(self) -> Tuple[int, str]:
        return length_lex_key(self.code)

    def is_factor_of(self, other: "Word") -> bool:
        return self.code in other.code

    def is_prefix_of(self, other: "Word") -> bool:
        return other.code.startswith(self.code)

    def is_suffix_of(self, other: "Word") -> bool:
        return other.code.endswith(self.code)


def weight(w: Word) -> int:
    """Sum of letter weights; 0 for the empty word"""
    return w.weight


# Code-level helpers shared with the rewriting and synthesis modules


def root_of(code: str) -> Tuple[str, int]:
    """Primitive root and exponent of a nonempty code"""
    length = len(code)
    for size in range(1, length + 1):
        if length % size == 0 and code[:size] * (length // size) == code:
            return code[:size], length // size
    raise PreconditionError("the empty word has no primitive root")


def code_is_primitive(code: str) -> bool:
    # a nonempty word is primitive iff it occurs in its square only at the trivial offsets
    return (code + code).find(code, 1) == len(code)


def occurs_in_power(code: str, delta: str) -> bool:
    repeats = -(-len(code) // len(delta)) + 1
    return code in delta * repeats


def factors_of_powers(deltas: Iterable[str], max_length: int) -> Set[str]:
    """All factors of length <= max_length of some delta^k"""
    factors: Set[str] = {""}
    for delta in deltas:
        power = delta * (max_length // len(delta) + 2)
        for start in range(len(delta)):
            for end in range(start + 1, start + max_length + 1):
                factors.add(power[start:end])
    return factors


def enumerate_codes(weights: Sequence[int], max_weight: int) -> List[str]:
    """Codes of weight <= max_weight in length-lexicographic order"""
    result = [""]
    level = [("", 0)]
    while level:
        following = []
        for code, total in level:
            for letter, letter_weight in enumerate(weights):
                extended = total + letter_weight
                if extended <= max_weight:
                    following.append((code + chr(letter), extended))
        result.extend(code for code, _ in following)
        level = following
    return result


def _require_nonempty(w: Word, what: str) -> None:
    if not w.code:
        raise PreconditionError(f"{what} is undefined for the empty word")


def is_primitive(w: Word) -> bool:
    """True iff w is not a proper power of a shorter word"""
    _require_nonempty(w, "primitivity")
    return code_is_primitive(w.code)


def primitive_root(w: Word) -> Tuple[Word, int]:
    """Primitive root r and maximal exponent e with r^e = w"""
    _require_nonempty(w, "the primitive root")
    root, exponent = root_of(w.code)
    return Word(w.alphabet, root), exponent


def are_conjugate(u: Word, v: Word) -> bool:
    """True iff u = pq and v = qp for some words p, q"""
    return len(u) == len(v) and v.code in u.code + u.code


def has_period(w: Word, m: int) -> bool:
    """True iff letters at distance m agree; vacuous when m >= |w|"""
    if m < 1:
        raise PreconditionError(f"period must be positive, got {m}")
    if m >= len(w):
        return True
    return w.code[m:] == w.code[:-m]


def is_factor_of_power(u: Word, delta: Word) -> bool:
    """True iff u is a factor of delta^k for some k"""
    if not delta.code:
        raise PreconditionError("factor of a power of the empty word")
    return occurs_in_power(u.code, delta.code)


def minimal_nonfactors(deltas: Iterable[Word], alphabet: WeightedAlphabet, n: int) -> List[Word]:
    """
    Minimal words that are not a factor of any delta^+.

    Every word avoiding all delta-powers contains one of the returned words, and
    none of them is a proper factor of another. With all deltas of length at most
    n the minimal non-factors have length at most 2n, so extending factor words of
    length < 2n by one letter finds all of them.

    Returns:
        The minimal non-factors in length-lexicographic order
    """
    codes = []
    for delta in deltas:
        if not delta.code:
            raise PreconditionError("deltas must be nonempty")
        if len(delta) > n:
            raise PreconditionError(f"delta {delta.compact()} is longer than the bound {n}")
        codes.append(delta.code)
    bound = 2 * n
    factors = factors_of_powers(codes, bound)
    found = set()
    for factor in factors:
        if len(factor) >= bound:
            continue
        for letter in range(len(alphabet)):
            candidate = factor + chr(letter)
            if candidate not in factors and candidate[1:] in factors:
                found.add(candidate)
    return [Word(alphabet, code) for code in sorted(found, key=length_lex_key)]


def enumerate_words(alphabet: WeightedAlphabet, max_weight: int) -> List[Word]:
    """All words of weight <= max_weight in length-lexicographic order"""
    return [Word(alphabet, code) for code in enumerate_codes(alphabet.weights, max_weight)]
