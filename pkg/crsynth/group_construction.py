"""
Church-Rosser systems for homomorphisms onto finite groups over two or more
letters.

One letter c is split off. Over the extended alphabet K = IRR_R(B*)c two rule
sets are built: power rules that cut long repetitions of short words, and
marker rules omega u omega -> omega v omega that replace long stretches between
two occurrences of a marker omega by a fixed normal form v of the same group
element. The markers are the minimal words that are no factor of a power of a
short word.
"""

import time
from dataclasses import dataclass
from math import ceil
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import MonoidHom, exponent, is_group
from .config import SynthesisOptions
from .errors import PreconditionError, ResourceCapError, VerificationError
from .rewriting import AvoidanceAutomaton, CrsReport, SemiThueSystem, verify_crs
from .systems import (
    ExtendedAlphabet,
    assert_no_cross_overlap,
    embed_system,
    lift_rules,
    pad_system,
    power_rules,
    union_rules,
)
from .utils import log
from .words import WeightedAlphabet, Word, enumerate_codes, length_lex_key, minimal_nonfactors


@dataclass
class NormalForm:
    """v_g = gamma_0^e_0 ... gamma_m^e_m gamma_0"""

    element: int
    exponents: List[int]
    weight: int


class GroupConstruction:
    """
    State of one group construction step.

    `prepare()` computes everything up to the marker order and runs the
    combinatorial checks; `build()` adds the marker rules, verifies over K and
    lifts the result to the base alphabet.
    """

    def __init__(self, hom: MonoidHom, c: int, recursive: SemiThueSystem, options: Optional[SynthesisOptions] = None):
        """
        Args:
            hom: Homomorphism onto its image group (already corestricted)
            c: Letter index of the distinguished letter in hom.source
            recursive: Church-Rosser system for hom restricted to the other
                letters, over the alphabet with the minimal-weight letter first
            options: Caps and retry budget
        """
        self.hom = hom
        self.group = hom.target
        if not is_group(self.group):
            raise PreconditionError("group construction needs a group image")
        self.base = hom.source
        self.c = c
        self.recursive = recursive
        self.options = options or SynthesisOptions()
        self.b_alphabet = recursive.alphabet
        if len(self.b_alphabet) + 1 != len(self.base):
            raise PreconditionError("the recursive system must cover every letter except c")
        self.n = exponent(self.group)
        self.a0_weight = self.b_alphabet.weights[0]
        if self.a0_weight != self.b_alphabet.min_weight:
            raise PreconditionError("the recursive alphabet must start with a minimal-weight letter")
        self.s = len(self.b_alphabet) - 1

        self.gamma_parts: List[Tuple[int, int]] = []
        self.normal_forms: Dict[int, NormalForm] = {}
        self.padding = 0
        self.padded: Optional[SemiThueSystem] = None
        self.extended: Optional[ExtendedAlphabet] = None
        self.psi: Optional[MonoidHom] = None
        self.gammas: List[int] = []
        self.v_codes: Dict[int, str] = {}
        self.deltas: List[str] = []
        self.t = 0
        self.t_delta: Optional[SemiThueSystem] = None
        self.markers: List[str] = []
        self.omega: List[str] = []
        self.rank: Dict[str, int] = {}
        self.t_prime = 0
        self.t_omega = 0
        self.heaviest_unmarked: Optional[int] = None
        self.visited = 0
        self.prepared = False

    # Generators and normal forms

    def gamma_weight(self, index: int) -> int:
        letter, power = self.gamma_parts[index]
        return power * self.b_alphabet.weights[letter] + self.base.weights[self.c]

    def gamma_element(self, index: int) -> int:
        letter, power = self.gamma_parts[index]
        b_token = self.b_alphabet.tokens[letter]
        code = chr(self.base.index(b_token)) * power + chr(self.c)
        return self.hom.apply_code(code)

    def make_gammas(self, count: int) -> List[Tuple[int, int]]:
        """gamma_i = a_(i mod (s+1))^(n + i div (s+1)) c as (letter, power) pairs"""
        if not self.b_alphabet.tokens:
            raise PreconditionError("generators need at least one letter besides c")
        width = self.s + 1
        self.gamma_parts = [(i % width, self.n + i // width) for i in range(count)]
        return self.gamma_parts

    def _cheapest_forms(self) -> Optional[Dict[int, NormalForm]]:
        table = self.group.table
        m = len(self.gamma_parts) - 1
        elements = [self.gamma_element(i) for i in range(m + 1)]
        weights = [self.gamma_weight(i) for i in range(m + 1)]
        best: Dict[int, Tuple[int, Tuple[int, ...]]] = {self.group.identity: (0, ())}
        for i in range(m + 1):
            following: Dict[int, Tuple[int, Tuple[int, ...]]] = {}
            for element, (weight, exponents) in best.items():
                current = element
                for power in range(1, self.n + 1):
                    current = table[current][elements[i]]
                    candidate = (weight + power * weights[i], exponents + (power,))
                    if current not in following or candidate < following[current]:
                        following[current] = candidate
            best = following
        forms: Dict[int, NormalForm] = {}
        for element, (weight, exponents) in best.items():
            final = table[element][elements[0]]
            candidate = NormalForm(final, list(exponents), weight + weights[0])
            known = forms.get(final)
            if known is None or (candidate.weight, candidate.exponents) < (known.weight, known.exponents):
                forms[final] = candidate
        if len(forms) < self.group.size:
            return None
        return forms

    def make_normal_forms(self) -> Dict[int, NormalForm]:
        """
        Cheapest v_g over the fewest generators, then weight balancing with
        gamma_0^n and gamma_(s+1)^n until all weights differ by less than n|a_0|
        """
        width = self.s + 1
        count = 2 * width
        limit = width * (self.group.size + 2)
        while True:
            self.make_gammas(count)
            forms = self._cheapest_forms()
            if forms is not None:
                break
            count += 1
            if count > limit:
                raise ResourceCapError("normal forms", limit, count, {"group": self.group.size})

        g0 = self.gamma_weight(0)
        g1 = self.gamma_weight(width)
        if g0 + self.a0_weight != g1:
            raise VerificationError("balancing generators do not differ by the weight of a_0")
        rounds = 0
        while True:
            weights = [form.weight for form in forms.values()]
            heaviest, lightest = max(weights), min(weights)
            if heaviest - lightest < self.n * self.a0_weight:
                break
            for form in forms.values():
                if form.weight == heaviest:
                    form.exponents[0] += self.n
                    form.weight += self.n * g0
                else:
                    form.exponents[width] += self.n
                    form.weight += self.n * g1
            rounds += 1
        log(f"normal forms: {len(self.gamma_parts)} generators, {rounds} balancing rounds")
        self.normal_forms = forms
        return forms

    # Extended alphabet

    def _pad(self) -> None:
        """Smallest padding making every generator's B-part irreducible"""
        longest = max(power for _, power in self.gamma_parts)
        for d in range(0, longest // 2 + 2):
            padded = pad_system(self.recursive, d, self.options.max_rules)
            if all(padded.is_irreducible_code(chr(letter) * power) for letter, power in self.gamma_parts):
                self.padding = d
                self.padded = padded
                return
        raise VerificationError("padding did not make the generators irreducible")

    def _extend(self) -> None:
        extended = ExtendedAlphabet.build(self.base, self.c, self.padded, self.options.max_irr)
        self.extended = extended
        self.psi = extended.restrict_hom(self.hom)
        b_to_base = {i: chr(self.base.index(token)) for i, token in enumerate(self.b_alphabet.tokens)}
        self.gammas = []
        for letter, power in self.gamma_parts:
            self.gammas.append(extended.letter_of(b_to_base[letter] * power + chr(self.c)))
        self.v_codes = {
            element: "".join(chr(self.gammas[i]) * e for i, e in enumerate(form.exponents)) + chr(self.gammas[0])
            for element, form in self.normal_forms.items()
        }

    @property
    def k_alphabet(self) -> WeightedAlphabet:
        return self.extended.alphabet

    def k_weight(self, code: str) -> int:
        return self.k_alphabet.code_weight(code)

    # Short words, power rules and markers

    def make_deltas(self) -> List[str]:
        """Single extended letters and every K-word of weight at most n|a_0|"""
        letters = [chr(i) for i in range(len(self.k_alphabet))]
        short = [code for code in enumerate_codes(self.k_alphabet.weights, self.n * self.a0_weight) if code]
        self.deltas = sorted(set(letters) | set(short), key=length_lex_key)
        return self.deltas

    def choose_t(self) -> int:
        k_max = self.k_alphabet.max_weight
        c_weight = self.base.weights[self.c]
        v_max = max(form.weight for form in self.normal_forms.values())
        self.t = max(self.n, ceil(2 * self.n * k_max / c_weight), v_max + 1)
        return self.t

    def build_omega(self) -> Tuple[List[str], Dict[str, int]]:
        """Markers and their order: gamma_m gamma_0 first, then markers ending in gamma_0, then the rest"""
        k = self.k_alphabet
        bound = max(self.n, max(len(delta) for delta in self.deltas))
        self.markers = [w.code for w in minimal_nonfactors([Word(k, d) for d in self.deltas], k, bound)]
        gamma_set = set(self.gammas)
        first_gamma = chr(self.gammas[0])

        def admissible(code: str) -> bool:
            head = ord(code[0])
            if head not in gamma_set:
                return True
            return len(code) == 2 and ord(code[1]) in gamma_set and head > ord(code[1])

        omega = [code for code in self.markers if admissible(code)]
        smallest = chr(self.gammas[-1]) + first_gamma
        if smallest not in omega:
            raise VerificationError(f"{Word(k, smallest).compact()} is not a marker")
        ending = sorted((w for w in omega if w != smallest and w.endswith(first_gamma)), key=length_lex_key)
        rest = sorted((w for w in omega if not w.endswith(first_gamma)), key=length_lex_key)
        self.omega = [smallest] + ending + rest
        self.rank = {code: i for i, code in enumerate(self.omega)}
        return self.omega, self.rank

    def marker_factors(self, code: str) -> List[str]:
        return [w for w in self.omega if w in code]

    def check_normal_forms(self) -> None:
        """Every structural property the marker rules rely on"""
        k_weights = self.k_alphabet.weights
        first = self.gammas[0]
        weights = []
        for element, code in self.v_codes.items():
            if self.psi.apply_code(code) != element:
                raise VerificationError(f"normal form of {self.group.label(element)} maps elsewhere")
            if ord(code[0]) != first or code[-2:] != chr(self.gammas[-1]) + chr(first):
                raise VerificationError(f"normal form of {self.group.label(element)} has the wrong ends")
            body = [ord(ch) for ch in code[:-1]]
            if any(x > y for x, y in zip(body, body[1:])):
                raise VerificationError(f"normal form of {self.group.label(element)} is not non-decreasing")
            if set(body) != set(self.gammas):
                raise VerificationError(f"normal form of {self.group.label(element)} skips a generator")
            if any(k_weights[ord(ch)] <= self.n * self.a0_weight for ch in code):
                raise VerificationError(f"normal form of {self.group.label(element)} uses a light letter")
            for delta in self.deltas:
                if delta * (self.t + self.n) in code:
                    raise VerificationError(f"normal form of {self.group.label(element)} repeats a short word")
            weights.append(self.k_weight(code))
        if max(weights) - min(weights) >= self.n * self.a0_weight:
            raise VerificationError("normal form weights are not balanced")
        c_power = self.t * self.base.weights[self.c]
        if c_power < 2 * self.n * self.k_alphabet.max_weight:
            raise VerificationError("c^t is lighter than some word of 2n extended letters")

    def check_marker_order(self) -> None:
        """For every marker and group element, markers inside omega v omega do not exceed omega"""
        for marker in self.omega:
            for element, code in self.v_codes.items():
                for found in self.marker_factors(marker + code + marker):
                    if self.rank[found] > self.rank[marker]:
                        raise VerificationError(
                            f"marker {Word(self.k_alphabet, found).compact()} exceeds "
                            f"{Word(self.k_alphabet, marker).compact()} around the normal form of "
                            f"{self.group.label(element)}"
                        )

    def choose_t_omega(self) -> int:
        """Start value for the marker window from the unmarked-word bound"""
        k_max = self.k_alphabet.max_weight
        t_second = (self.t + self.n + 2) * k_max
        gamma_max = max(self.k_alphabet.weights[g] for g in self.gammas)
        self.t_prime = (self.t + self.n - 1) * len(set(self.gammas)) * gamma_max + 1 + t_second
        v_max = max(form.weight for form in self.normal_forms.values())
        self.t_omega = self.t_prime * (2 + ceil((v_max + 1) / self.k_alphabet.min_weight))
        return self.t_omega

    def check_unmarked_bound(self) -> int:
        """Heaviest K-word without markers and long repetitions stays below t'"""
        forbidden = self.omega + self.t_delta.lhs_codes
        automaton = AvoidanceAutomaton(forbidden, len(self.k_alphabet))
        heaviest = automaton.heaviest_word(self.k_alphabet.weights)
        if heaviest is None:
            raise VerificationError("arbitrarily heavy words avoid every marker and long repetition")
        if heaviest >= self.t_prime:
            raise VerificationError(f"a word of weight {heaviest} avoids markers and repetitions, bound {self.t_prime}")
        self.heaviest_unmarked = heaviest
        return heaviest

    def prepare(self) -> "GroupConstruction":
        self.make_normal_forms()
        self._pad()
        self._extend()
        self.make_deltas()
        self.choose_t()
        self.t_delta = power_rules([Word(self.k_alphabet, d) for d in self.deltas], self.t, self.n, self.k_alphabet)
        self.build_omega()
        self.check_normal_forms()
        self.check_marker_order()
        self.choose_t_omega()
        self.check_unmarked_bound()
        self.prepared = True
        log(
            f"group construction: |K|={len(self.k_alphabet)} |Delta|={len(self.deltas)} t={self.t} "
            f"|Omega|={len(self.omega)} t_Omega={self.t_omega}"
        )
        return self

    # Marker rules

    def marker_rules_for(self, marker: str, t_omega: int, avoid: Sequence[str] = ()) -> List[Tuple[str, str]]:
        """
        Rules marker u marker -> marker v marker for one marker.

        Depth-first from the marker over extensions avoiding the power rules'
        left sides, every marker ranked above this one and the left sides in
        avoid. A branch ends at its first closing marker that gives a rule, or
        once u can no longer stay within t_omega.
        """
        rank = self.rank[marker]
        higher = [w for w in self.omega if self.rank[w] > rank]
        automaton = AvoidanceAutomaton(self.t_delta.lhs_codes + higher + list(avoid), len(self.k_alphabet))
        state = automaton.run(marker)
        if state is None:
            return []
        weights = self.k_alphabet.weights
        width = len(marker)
        marker_weight = self.k_weight(marker)
        bound = t_omega + marker_weight
        rules: List[Tuple[str, str]] = []
        stack: List[Tuple[str, int, int]] = [(marker, state, 0)]
        while stack:
            code, state, weight = stack.pop()
            for letter, following in automaton.live_successors(state):
                total = weight + weights[letter]
                if total > bound:
                    continue
                extended = code + chr(letter)
                if len(extended) >= 2 * width and extended.endswith(marker):
                    target = self.v_codes[self.psi.apply_code(extended[width:-width])]
                    if self.k_weight(target) < total - marker_weight:
                        rules.append((extended, marker + target + marker))
                        continue
                stack.append((extended, following, total))
                self.visited += 1
                if self.visited > self.options.max_irr:
                    raise ResourceCapError(
                        "marker rules",
                        self.options.max_irr,
                        self.visited,
                        {"t_Omega": t_omega, "marker": Word(self.k_alphabet, marker).compact(), "rules": len(rules)},
                    )
        return rules

    def build_marker_rules(self, t_omega: int) -> SemiThueSystem:
        """
        Minimal marker rules: one search per marker in ascending order, each
        avoiding the left sides found for the markers before it, then every
        left side that properly contains another is dropped
        """
        if not self.prepared:
            raise PreconditionError("prepare() must run before the marker rules are built")
        started = time.time()
        self.visited = 0
        candidates: List[Tuple[str, str]] = []
        for marker in self.omega:
            found = self.marker_rules_for(marker, t_omega, [lhs for lhs, _ in candidates])
            candidates.extend(found)
            log(f"marker {Word(self.k_alphabet, marker).compact()}: {len(found)} rules", "DEBUG")
            if len(candidates) > self.options.max_rules:
                raise ResourceCapError("marker rules", self.options.max_rules, len(candidates), {"t_Omega": t_omega})
        pairs = minimal_rules(candidates, len(self.k_alphabet))
        log(f"marker rules: {len(pairs)} rules from {self.visited} words in {time.time() - started:.1f}s")
        return SemiThueSystem.from_codes(self.k_alphabet, pairs)

    def lift(self, system: SemiThueSystem) -> SemiThueSystem:
        """The padded recursive system plus {c l -> c r}, scanned for overlaps between the two"""
        lifted = lift_rules(system, Word(self.base, chr(self.c)), self.extended.naming())
        padded = embed_system(self.padded, self.base)
        assert_no_cross_overlap(padded, lifted)
        return union_rules([padded, lifted], self.base)

    def build(self) -> Tuple[SemiThueSystem, CrsReport]:
        """
        T = power rules + marker rules over K, verified against psi and lifted.

        Returns:
            The lifted rules over the base alphabet together with the padded
            recursive system, and the verification report over K
        """
        if not self.prepared:
            self.prepare()
        t_omega = self.t_omega
        report: Optional[CrsReport] = None
        for attempt in range(self.options.retries + 1):
            marker_rules = self.build_marker_rules(t_omega)
            system = union_rules([self.t_delta, marker_rules], self.k_alphabet)
            report = verify_crs(system, self.psi, self.options.max_irr, self.options.workers)
            if report.passed:
                self.t_omega = t_omega
                return self.lift(system), report
            log(f"attempt {attempt + 1}: {report.first_failure()}; doubling t_Omega", "WARN")
            t_omega *= 2
        raise VerificationError(f"extended system failed after {self.options.retries} retries", report)

    def summary(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "padding": self.padding,
            "extended-letters": len(self.k_alphabet) if self.extended else 0,
            "generators": len(self.gamma_parts),
            "deltas": len(self.deltas),
            "t": self.t,
            "markers": len(self.omega),
            "t-prime": self.t_prime,
            "t-omega": self.t_omega,
        }


def minimal_rules(pairs: Sequence[Tuple[str, str]], letters: int) -> List[Tuple[str, str]]:
    """Rules whose left side has no other left side as a proper factor"""
    automaton = AvoidanceAutomaton([lhs for lhs, _ in pairs], letters)
    return [
        (lhs, rhs)
        for lhs, rhs in pairs
        if automaton.run(lhs[:-1]) is not None and automaton.run(lhs[1:]) is not None
    ]


def split_letter(alphabet: WeightedAlphabet) -> Tuple[int, WeightedAlphabet]:
    """
    The distinguished letter c (the last one) and the remaining alphabet with a
    minimal-weight letter first
    """
    c = len(alphabet) - 1
    rest = list(alphabet.tokens[:c])
    if rest:
        lightest = min(rest, key=lambda token: (alphabet.weight_of(token), alphabet.index(token)))
        rest.remove(lightest)
        rest.insert(0, lightest)
    return c, alphabet.restrict(rest)
