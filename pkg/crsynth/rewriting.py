"""
Semi-Thue systems: rewriting to normal form, critical pairs, the factor
avoidance automaton, quotient monoids and the Church-Rosser verifier
"""

import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import anyio
import anyio.to_thread
from typing_extensions import Literal

from .algebra import FiniteMonoid, MonoidHom
from .errors import InvalidInputError, PreconditionError, ResourceCapError
from .utils import log
from .words import WeightedAlphabet, Word

DEFAULT_IRR_CAP = 1_000_000

RewriteStep = Tuple[int, int]


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: Word

    def __post_init__(self):
        if not self.lhs.code:
            raise InvalidInputError("rule left sides must be nonempty")
        if self.lhs.alphabet != self.rhs.alphabet:
            raise InvalidInputError("rule sides are over different alphabets")

    @property
    def weight_drop(self) -> int:
        return self.lhs.weight - self.rhs.weight

    @property
    def sort_key(self) -> Tuple[Tuple[int, str], Tuple[int, str]]:
        return (self.lhs.sort_key, self.rhs.sort_key)

    def __str__(self) -> str:
        return f"{self.lhs} -> {self.rhs}"


class SemiThueSystem:
    """Finite ordered rule set over a weighted alphabet"""

    def __init__(self, alphabet: WeightedAlphabet, rules: Iterable[Rule] = ()):
        self.alphabet = alphabet
        self.rules: Tuple[Rule, ...] = tuple(rules)
        seen = set()
        for rule in self.rules:
            if rule.lhs.alphabet != alphabet:
                raise InvalidInputError(f"rule {rule} is not over the system's alphabet")
            key = (rule.lhs.code, rule.rhs.code)
            if key in seen:
                raise InvalidInputError(f"duplicate rule {rule}")
            seen.add(key)

    @classmethod
    def from_strings(cls, alphabet: WeightedAlphabet, pairs: Iterable[Tuple[str, str]]) -> "SemiThueSystem":
        return cls(alphabet, [Rule(alphabet.parse(lhs), alphabet.parse(rhs)) for lhs, rhs in pairs])

    @classmethod
    def from_codes(cls, alphabet: WeightedAlphabet, pairs: Iterable[Tuple[str, str]]) -> "SemiThueSystem":
        return cls(alphabet, [Rule(Word(alphabet, lhs), Word(alphabet, rhs)) for lhs, rhs in pairs])

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SemiThueSystem):
            return NotImplemented
        return self.alphabet == other.alphabet and self.rules == other.rules

    def __repr__(self) -> str:
        return f"SemiThueSystem(letters={len(self.alphabet)}, rules={len(self.rules)})"

    def canonical(self) -> "SemiThueSystem":
        """Rules sorted by left side, then right side, both length-lexicographic"""
        return SemiThueSystem(self.alphabet, sorted(self.rules, key=lambda rule: rule.sort_key))

    def union(self, other: "SemiThueSystem") -> "SemiThueSystem":
        present = {(rule.lhs.code, rule.rhs.code) for rule in self.rules}
        extra = [rule for rule in other.rules if (rule.lhs.code, rule.rhs.code) not in present]
        return SemiThueSystem(self.alphabet, self.rules + tuple(extra))

    @property
    def lhs_codes(self) -> List[str]:
        return [rule.lhs.code for rule in self.rules]

    @property
    def max_lhs_length(self) -> int:
        return max((len(rule.lhs) for rule in self.rules), default=0)

    @cached_property
    def _trie(self) -> Tuple[List[Dict[str, int]], List[Optional[int]]]:
        # terminal[node] is the lowest index of a rule whose left side spells node
        children: List[Dict[str, int]] = [{}]
        terminal: List[Optional[int]] = [None]
        for index, rule in enumerate(self.rules):
            node = 0
            for ch in rule.lhs.code:
                following = children[node].get(ch)
                if following is None:
                    following = len(children)
                    children[node][ch] = following
                    children.append({})
                    terminal.append(None)
                node = following
            if terminal[node] is None:
                terminal[node] = index
        return children, terminal

    @cached_property
    def weight_reducing_witness(self) -> Optional[Rule]:
        for rule in self.rules:
            if rule.weight_drop <= 0:
                return rule
        return None

    def redex_at(self, code: str, position: int) -> Optional[int]:
        """Rule index of the shortest left side starting at position"""
        children, terminal = self._trie
        node = 0
        for ch in code[position:]:
            node = children[node].get(ch, -1)
            if node < 0:
                return None
            if terminal[node] is not None:
                return terminal[node]
        return None

    def redexes(self, code: str) -> List[RewriteStep]:
        """Every (position, rule index) at which a left side occurs"""
        found = []
        for index, rule in enumerate(self.rules):
            lhs = rule.lhs.code
            start = code.find(lhs)
            while start >= 0:
                found.append((start, index))
                start = code.find(lhs, start + 1)
        return found

    def is_irreducible_code(self, code: str) -> bool:
        return all(self.redex_at(code, p) is None for p in range(len(code)))

    def normal_form_code(self, code: str, trace: Optional[List[RewriteStep]] = None) -> str:
        """Leftmost redex first, then the shortest left side, then the lowest rule index"""
        if self.weight_reducing_witness is not None:
            raise PreconditionError(f"system is not weight-reducing: {self.weight_reducing_witness}")
        rules = self.rules
        longest = self.max_lhs_length
        position = 0
        while position < len(code):
            index = self.redex_at(code, position)
            if index is None:
                position += 1
                continue
            rule = rules[index]
            code = code[:position] + rule.rhs.code + code[position + len(rule.lhs.code):]
            if trace is not None:
                trace.append((position, index))
            position = max(0, position - longest + 1)
        return code


def is_weight_reducing(system: SemiThueSystem) -> Tuple[bool, Optional[Rule]]:
    """True iff every rule strictly drops weight; otherwise the first offending rule"""
    witness = system.weight_reducing_witness
    return witness is None, witness


def _require_word(system: SemiThueSystem, word: Word) -> None:
    if word.alphabet != system.alphabet:
        raise InvalidInputError("word is not over the system's alphabet")


def normalize(system: SemiThueSystem, word: Word) -> Tuple[Word, int]:
    """Deterministic normal form and the number of rewrite steps"""
    _require_word(system, word)
    trace: List[RewriteStep] = []
    code = system.normal_form_code(word.code, trace)
    return Word(system.alphabet, code), len(trace)


def normalize_trace(system: SemiThueSystem, word: Word) -> Tuple[Word, List[RewriteStep]]:
    """Normal form with the (position, rule index) of every applied rewrite"""
    _require_word(system, word)
    trace: List[RewriteStep] = []
    code = system.normal_form_code(word.code, trace)
    return Word(system.alphabet, code), trace


def normalize_randomized(system: SemiThueSystem, word: Word, rng: random.Random) -> Tuple[Word, int]:
    """Normal form reached by rewriting a uniformly chosen redex at every step"""
    _require_word(system, word)
    if system.weight_reducing_witness is not None:
        raise PreconditionError(f"system is not weight-reducing: {system.weight_reducing_witness}")
    code = word.code
    steps = 0
    while True:
        found = system.redexes(code)
        if not found:
            return Word(system.alphabet, code), steps
        position, index = rng.choice(found)
        rule = system.rules[index]
        code = code[:position] + rule.rhs.code + code[position + len(rule.lhs.code):]
        steps += 1


@dataclass(frozen=True)
class CriticalPair:
    peak: Word
    left_result: Word
    right_result: Word
    first: int
    second: int
    offset: int
    kind: Literal["overlap", "containment"]

    def describe(self) -> str:
        return (
            f"peak {self.peak.compact()} ({self.kind} of rules {self.first} and {self.second} at {self.offset}) "
            f"-> {self.left_result.compact()} | {self.right_result.compact()}"
        )


def _critical_codes(system: SemiThueSystem) -> Iterator[Tuple[str, str, str, int, int, int, str]]:
    rules = system.rules
    for i, first in enumerate(rules):
        l1, r1 = first.lhs.code, first.rhs.code
        for j, second in enumerate(rules):
            l2, r2 = second.lhs.code, second.rhs.code
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    yield l1 + l2[k:], r1 + l2[k:], l1[:-k] + r2, i, j, len(l1) - k, "overlap"
            if i != j and len(l2) <= len(l1):
                start = l1.find(l2)
                while start >= 0:
                    yield l1, r1, l1[:start] + r2 + l1[start + len(l2):], i, j, start, "containment"
                    start = l1.find(l2, start + 1)


def critical_pairs(system: SemiThueSystem) -> List[CriticalPair]:
    """
    All proper overlaps (self-overlaps included) and containments
    (equal left sides of distinct rules included) between left sides
    """
    alphabet = system.alphabet
    return [
        CriticalPair(Word(alphabet, peak), Word(alphabet, left), Word(alphabet, right), i, j, offset, kind)
        for peak, left, right, i, j, offset, kind in _critical_codes(system)
    ]


def _first_failure(system: SemiThueSystem, pairs: Sequence[CriticalPair]) -> Optional[CriticalPair]:
    for pair in pairs:
        if system.normal_form_code(pair.left_result.code) != system.normal_form_code(pair.right_result.code):
            return pair
    return None


async def _join_concurrently(
    system: SemiThueSystem, pairs: List[CriticalPair], workers: int
) -> List[Optional[CriticalPair]]:
    limiter = anyio.CapacityLimiter(workers)
    size = max(1, -(-len(pairs) // (workers * 4)))
    chunks = [pairs[i:i + size] for i in range(0, len(pairs), size)]
    results: List[Optional[CriticalPair]] = [None] * len(chunks)

    async def join_chunk(position: int, chunk: List[CriticalPair]) -> None:
        results[position] = await anyio.to_thread.run_sync(_first_failure, system, chunk, limiter=limiter)

    async with anyio.create_task_group() as tg:
        for position, chunk in enumerate(chunks):
            tg.start_soon(join_chunk, position, chunk)
    return results


def is_locally_confluent(system: SemiThueSystem, workers: int = 1) -> Tuple[bool, Optional[CriticalPair]]:
    """
    True iff every critical pair joins.

    With workers > 1 the pairs are joined on worker threads; the witness is the
    first non-joinable pair in enumeration order either way.
    """
    if system.weight_reducing_witness is not None:
        raise PreconditionError(f"system is not weight-reducing: {system.weight_reducing_witness}")
    pairs = critical_pairs(system)
    if workers > 1 and len(pairs) > 1:
        failures = anyio.run(_join_concurrently, system, pairs, workers)
        witness = next((pair for pair in failures if pair is not None), None)
    else:
        witness = _first_failure(system, pairs)
    return witness is None, witness


class AvoidanceAutomaton:
    """
    Deterministic automaton reading words that avoid every given factor.

    States are the longest suffixes of the input read so far that are proper
    prefixes of some forbidden factor; completing a factor leads to a dead state.
    """

    def __init__(self, factors: Iterable[str], letters: int):
        self.letters = letters
        children: List[Dict[int, int]] = [{}]
        dead: List[bool] = [False]
        for factor in factors:
            node = 0
            for ch in factor:
                letter = ord(ch)
                following = children[node].get(letter)
                if following is None:
                    following = len(children)
                    children[node][letter] = following
                    children.append({})
                    dead.append(False)
                node = following
            dead[node] = True

        delta: List[List[int]] = [[0] * letters for _ in children]
        fail = [0] * len(children)
        queue = deque()
        for letter in range(letters):
            child = children[0].get(letter)
            if child is not None:
                delta[0][letter] = child
                queue.append(child)
        while queue:
            node = queue.popleft()
            dead[node] = dead[node] or dead[fail[node]]
            for letter in range(letters):
                child = children[node].get(letter)
                if child is not None:
                    fail[child] = delta[fail[node]][letter]
                    delta[node][letter] = child
                    queue.append(child)
                else:
                    delta[node][letter] = delta[fail[node]][letter]
        self.delta = delta
        self.dead = dead

    @classmethod
    def for_system(cls, system: SemiThueSystem) -> "AvoidanceAutomaton":
        return cls(system.lhs_codes, len(system.alphabet))

    @property
    def size(self) -> int:
        return len(self.delta)

    def run(self, code: str) -> Optional[int]:
        """State after reading code, None once a factor has been completed"""
        state = 0
        if self.dead[state]:
            return None
        for ch in code:
            state = self.delta[state][ord(ch)]
            if self.dead[state]:
                return None
        return state

    def live_successors(self, state: int) -> Iterator[Tuple[int, int]]:
        for letter, following in enumerate(self.delta[state]):
            if not self.dead[following]:
                yield letter, following

    def topological_order(self) -> Optional[List[int]]:
        """Live states reachable from the start in topological order, or None on a cycle"""
        if self.dead[0]:
            return []
        order: List[int] = []
        colour: Dict[int, int] = {0: 1}
        stack = [(0, self.live_successors(0))]
        while stack:
            state, successors = stack[-1]
            advanced = False
            for _, following in successors:
                seen = colour.get(following, 0)
                if seen == 1:
                    return None
                if seen == 0:
                    colour[following] = 1
                    stack.append((following, self.live_successors(following)))
                    advanced = True
                    break
            if not advanced:
                colour[state] = 2
                order.append(state)
                stack.pop()
        order.reverse()
        return order

    def is_finite(self) -> bool:
        return self.topological_order() is not None

    def count_words(self) -> Optional[int]:
        """Number of avoiding words, None if infinite"""
        order = self.topological_order()
        if order is None:
            return None
        if not order:
            return 0
        paths = {state: 0 for state in order}
        paths[0] = 1
        total = 0
        for state in order:
            total += paths[state]
            for _, following in self.live_successors(state):
                paths[following] += paths[state]
        return total

    def heaviest_word(self, weights: Sequence[int]) -> Optional[int]:
        """Largest weight of an avoiding word, None if infinite"""
        order = self.topological_order()
        if order is None:
            return None
        if not order:
            return 0
        best: Dict[int, int] = {0: 0}
        for state in order:
            if state not in best:
                continue
            for letter, following in self.live_successors(state):
                candidate = best[state] + weights[letter]
                if candidate > best.get(following, -1):
                    best[following] = candidate
        return max(best.values())

    def words(self, cap: int, stage: str = "enumerate_irr") -> List[str]:
        """Avoiding words in length-lexicographic order; the caller ensures finiteness"""
        if self.dead[0]:
            return []
        result = [""]
        level = [("", 0)]
        while level:
            following_level = []
            for code, state in level:
                for letter, following in self.live_successors(state):
                    following_level.append((code + chr(letter), following))
            result.extend(code for code, _ in following_level)
            if len(result) > cap:
                raise ResourceCapError(stage, cap, len(result), {"length": len(following_level[0][0])})
            level = following_level
        return result


def irr_is_finite(system: SemiThueSystem) -> bool:
    """True iff only finitely many words avoid every left side"""
    return AvoidanceAutomaton.for_system(system).is_finite()


def enumerate_irr(system: SemiThueSystem, cap: int = DEFAULT_IRR_CAP) -> List[Word]:
    """Irreducible words in length-lexicographic order"""
    automaton = AvoidanceAutomaton.for_system(system)
    if not automaton.is_finite():
        raise PreconditionError("the system has infinitely many irreducible words")
    return [Word(system.alphabet, code) for code in automaton.words(cap)]


@dataclass
class QuotientMonoid:
    """The monoid A*/S on the irreducible words of a Church-Rosser system"""

    system: SemiThueSystem
    irreducibles: Tuple[Word, ...]
    monoid: FiniteMonoid
    position: Dict[str, int] = field(repr=False)

    @property
    def index(self) -> int:
        return len(self.irreducibles)

    def class_of(self, word: Word) -> int:
        normal_form, _ = normalize(self.system, word)
        return self.position[normal_form.code]


def quotient_monoid(system: SemiThueSystem, cap: int = DEFAULT_IRR_CAP) -> QuotientMonoid:
    ok, rule = is_weight_reducing(system)
    if not ok:
        raise PreconditionError(f"quotient requires a weight-reducing system; {rule} is not")
    ok, pair = is_locally_confluent(system)
    if not ok:
        raise PreconditionError(f"quotient requires a confluent system; {pair.describe()}")
    irreducibles = enumerate_irr(system, cap)
    position = {word.code: i for i, word in enumerate(irreducibles)}
    codes = [word.code for word in irreducibles]
    table = [[position[system.normal_form_code(x + y)] for y in codes] for x in codes]
    # associative: concatenation is, and normal forms are unique
    monoid = FiniteMonoid(table, 0, [word.compact() for word in irreducibles], check=False)
    return QuotientMonoid(system, tuple(irreducibles), monoid, position)


def rule_invariance(system: SemiThueSystem, hom: MonoidHom) -> Tuple[bool, Optional[Rule]]:
    """True iff hom maps both sides of every rule to the same element"""
    if hom.source != system.alphabet:
        raise InvalidInputError("system and homomorphism have different alphabets")
    for rule in system.rules:
        if hom.apply_code(rule.lhs.code) != hom.apply_code(rule.rhs.code):
            return False, rule
    return True, None


@dataclass
class CrsReport:
    """Verdicts of the four Church-Rosser conjuncts with failure witnesses"""

    weight_reducing: bool
    confluent: Optional[bool]
    finite_index: bool
    invariant: Optional[bool]
    index: Optional[int] = None
    rule_count: int = 0
    index_cap: int = DEFAULT_IRR_CAP
    weight_witness: Optional[Rule] = None
    confluence_witness: Optional[CriticalPair] = None
    invariance_witness: Optional[Rule] = None

    @property
    def passed(self) -> bool:
        return bool(self.weight_reducing and self.confluent and self.finite_index and self.invariant is not False)

    def first_failure(self) -> Optional[str]:
        if not self.weight_reducing:
            return f"weight-reducing: rule {self.weight_witness} does not drop weight"
        if not self.confluent:
            return f"locally confluent: {self.confluence_witness.describe()}"
        if not self.finite_index:
            return "finite index: infinitely many irreducible words"
        if self.invariant is False:
            return f"invariant: rule {self.invariance_witness} changes the image"
        return None

    def to_lines(self) -> List[str]:
        def verdict(value: Optional[bool]) -> str:
            return "skipped" if value is None else ("yes" if value else "no")

        lines = [
            f"rules: {self.rule_count}",
            f"weight-reducing: {verdict(self.weight_reducing)}",
            f"locally-confluent: {verdict(self.confluent)}",
            f"finite-index: {verdict(self.finite_index)}",
            f"invariant: {verdict(self.invariant)}",
            f"index: {self.index if self.index is not None else 'infinite'}",
        ]
        if self.index is not None and self.index > self.index_cap:
            lines.append(f"index-over-cap: {self.index_cap}")
        failure = self.first_failure()
        lines.append(f"verdict: {'pass' if failure is None else 'fail'}")
        if failure is not None:
            lines.append(f"witness: {failure}")
        return lines


def verify_crs(
    system: SemiThueSystem, hom: Optional[MonoidHom] = None, cap: int = DEFAULT_IRR_CAP, workers: int = 1
) -> CrsReport:
    """
    Check weight reduction, local confluence, finite index and, when a
    homomorphism is given, invariance of every rule under it.

    The index is counted on the avoidance automaton, so it is exact even past
    the enumeration cap.
    """
    weight_ok, weight_witness = is_weight_reducing(system)
    confluent: Optional[bool] = None
    confluence_witness = None
    if weight_ok:
        confluent, confluence_witness = is_locally_confluent(system, workers)
    index = AvoidanceAutomaton.for_system(system).count_words()
    invariant: Optional[bool] = None
    invariance_witness = None
    if hom is not None:
        invariant, invariance_witness = rule_invariance(system, hom)
    report = CrsReport(
        weight_reducing=weight_ok,
        confluent=confluent,
        finite_index=index is not None,
        invariant=invariant,
        index=index,
        rule_count=len(system),
        index_cap=cap,
        weight_witness=weight_witness,
        confluence_witness=confluence_witness,
        invariance_witness=invariance_witness,
    )
    log(f"verify: {len(system)} rules, index {index}, {'pass' if report.passed else 'fail'}", "DEBUG")
    return report


def irreducible_length_bound(system: SemiThueSystem) -> Optional[int]:
    """Length of the longest irreducible word, None if unbounded"""
    automaton = AvoidanceAutomaton.for_system(system)
    return automaton.heaviest_word([1] * len(system.alphabet))


def stats(system: SemiThueSystem) -> Dict[str, object]:
    lhs_weights = [rule.lhs.weight for rule in system.rules]
    index = AvoidanceAutomaton.for_system(system).count_words()
    return {
        "rules": len(system),
        "alphabet": len(system.alphabet),
        "max-lhs-weight": max(lhs_weights, default=0),
        "min-lhs-weight": min(lhs_weights, default=0),
        "irr-finite": index is not None,
        "index": index,
    }
