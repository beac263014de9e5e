"""
Synthesis of weighted Church-Rosser systems of finite index through which a
given homomorphism factorizes, and recognition of regular languages as unions
of congruence classes
"""

from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

from .algebra import (
    Dfa,
    MonoidHom,
    corestrict,
    is_group,
    is_unit,
    kernel_weight_gcd,
    local_divisor,
    transition_monoid,
)
from .config import SynthesisOptions
from .errors import GcdObstructionError, PreconditionError, ResourceCapError, VerificationError
from .group_construction import GroupConstruction, split_letter
from .rewriting import (
    CrsReport,
    QuotientMonoid,
    SemiThueSystem,
    irreducible_length_bound,
    normalize,
    quotient_monoid,
    verify_crs,
)
from .systems import (
    ExtendedAlphabet,
    assert_no_cross_overlap,
    base_single_letter,
    embed_system,
    lift_rules,
    pad_system,
    power_rules,
    union_rules,
)
from .utils import log
from .words import Word, enumerate_codes

__all__ = [
    "RecognizedLanguage",
    "balanced_representatives",
    "base_single_letter",
    "construct",
    "group_system",
    "irreducible_bound",
    "lift_rules",
    "monoid_system",
    "pad_system",
    "power_rules",
    "prepare_group_construction",
    "recognize",
    "simple_group_system",
    "simple_path_open",
]


def _options(options: Optional[SynthesisOptions]) -> SynthesisOptions:
    return options if options is not None else SynthesisOptions()


def _record(path: Optional[List[str]], step: str) -> None:
    if path is not None:
        path.append(step)


def require_verified(system: SemiThueSystem, hom: MonoidHom, options: SynthesisOptions, stage: str) -> CrsReport:
    report = verify_crs(system, hom, options.max_irr, options.workers)
    if not report.passed:
        raise VerificationError(f"{stage}: {report.first_failure()}", report)
    return report


def _smallest_prime(value: int) -> int:
    candidate = 2
    while candidate * candidate <= value:
        if value % candidate == 0:
            return candidate
        candidate += 1
    return value


def simple_path_open(hom: MonoidHom) -> bool:
    """
    True when every image element has representatives of one common exact
    weight: the kernel weight gcd divides every letter weight
    """
    p = kernel_weight_gcd(hom)
    return p is None or all(weight % p == 0 for weight in hom.source.weights)


def balanced_representatives(hom: MonoidHom, max_weight: int) -> Tuple[int, Dict[int, str]]:
    """
    Least d such that every element of the image group is the image of a word
    of weight exactly d, and the length-lexicographically first such word per
    element.

    Returns:
        d and a map from image element (in the corestricted group) to code
    """
    image_hom, _ = corestrict(hom)
    group = image_hom.target
    weights = hom.source.weights
    table = group.table
    best: List[Dict[int, str]] = [{group.identity: ""}]
    if group.size == 1:
        return 0, best[0]
    for total in range(1, max_weight + 1):
        layer: Dict[int, str] = {}
        for letter, weight in enumerate(weights):
            if weight > total:
                continue
            image = image_hom.images[letter]
            for element, code in best[total - weight].items():
                following = table[element][image]
                candidate = code + chr(letter)
                known = layer.get(following)
                if known is None or (len(candidate), candidate) < (len(known), known):
                    layer[following] = candidate
        best.append(layer)
        if len(layer) == group.size:
            return total, layer
    raise ResourceCapError("balanced representatives", max_weight, max_weight, {"group": group.size})


def _window_size(weights: Tuple[int, ...], low: int, high: int) -> int:
    counts = [1] + [0] * high
    for total in range(1, high + 1):
        counts[total] = sum(counts[total - w] for w in weights if w <= total)
    return sum(counts[low + 1:high + 1])


def simple_group_system(
    hom: MonoidHom,
    options: Optional[SynthesisOptions] = None,
    representatives: Optional[Mapping[int, Word]] = None,
) -> SemiThueSystem:
    """
    S = {w -> v_phi(w) | d < |w| <= d + max letter weight} with one
    representative v_g of exact weight d per image element.

    Args:
        hom: Homomorphism whose image is a group
        options: Caps
        representatives: Optional explicit representatives keyed by target
            element; all must share one weight

    Raises:
        GcdObstructionError: the kernel weights share a prime that does not
            divide every letter weight
    """
    options = _options(options)
    alphabet = hom.source
    image_hom, embedding = corestrict(hom)
    group = image_hom.target
    if not is_group(group):
        raise PreconditionError("the simple construction needs a group image")
    p = kernel_weight_gcd(hom)
    if p is not None and any(weight % p for weight in alphabet.weights):
        raise GcdObstructionError(p, _smallest_prime(p))

    if representatives is not None:
        position = {element: i for i, element in enumerate(embedding)}
        chosen: Dict[int, str] = {}
        for element, word in representatives.items():
            if word.alphabet != alphabet:
                raise PreconditionError("representatives must be over the source alphabet")
            if hom.apply_code(word.code) != element:
                raise PreconditionError(f"representative {word.compact()} does not map to {element}")
            if element not in position:
                raise PreconditionError(f"element {element} is not in the image")
            chosen[position[element]] = word.code
        if len(chosen) != group.size:
            raise PreconditionError("one representative per image element is required")
        weights = {alphabet.code_weight(code) for code in chosen.values()}
        if len(weights) != 1:
            raise PreconditionError("representatives must share one weight")
        d = weights.pop()
    else:
        d, chosen = balanced_representatives(hom, options.max_balance_weight)

    top = d + alphabet.max_weight
    size = _window_size(alphabet.weights, d, top)
    if size > options.max_rules:
        raise ResourceCapError("simple_group_system", options.max_rules, size, {"d": d})
    pairs = [
        (code, chosen[image_hom.apply_code(code)])
        for code in enumerate_codes(alphabet.weights, top)
        if alphabet.code_weight(code) > d
    ]
    system = SemiThueSystem.from_codes(alphabet, pairs)
    require_verified(system, hom, options, "simple_group_system")
    log(f"simple group system: d={d}, {len(system)} rules")
    return system


def prepare_group_construction(
    hom: MonoidHom, options: Optional[SynthesisOptions] = None, path: Optional[List[str]] = None
) -> GroupConstruction:
    """Group construction state for an alphabet of two or more letters, checks included"""
    options = _options(options)
    alphabet = hom.source
    if len(alphabet) < 2:
        raise PreconditionError("the extended construction needs at least two letters")
    image_hom, _ = corestrict(hom)
    if not is_group(image_hom.target):
        raise PreconditionError("the group construction needs a group image")
    c, b_alphabet = split_letter(alphabet)
    recursive = group_system(hom.restrict(b_alphabet), options, path)
    return GroupConstruction(image_hom, c, recursive, options).prepare()


def group_system(
    hom: MonoidHom, options: Optional[SynthesisOptions] = None, path: Optional[List[str]] = None
) -> SemiThueSystem:
    """
    Church-Rosser system of finite index for a homomorphism onto a finite group.

    Each construction used is appended to path, outermost first.
    """
    options = _options(options)
    alphabet = hom.source
    image_hom, _ = corestrict(hom)
    if not is_group(image_hom.target):
        raise PreconditionError("group_system needs a group image")
    if len(alphabet) == 0:
        return SemiThueSystem(alphabet)
    if len(alphabet) == 1:
        _record(path, "base")
        system = base_single_letter(hom)
    else:
        _record(path, "marker")
        construction = prepare_group_construction(hom, options, path)
        system, _ = construction.build()
    require_verified(system, hom, options, "group_system")
    log(f"group system over {len(alphabet)} letters: {len(system)} rules")
    return system


def _group_case(hom: MonoidHom, options: SynthesisOptions, path: Optional[List[str]]) -> SemiThueSystem:
    if options.strategy == "auto" and len(hom.source) > 1 and simple_path_open(hom):
        _record(path, "simple")
        return simple_group_system(hom, options)
    return group_system(hom, options, path)


def irreducible_bound(inner: SemiThueSystem, extended: ExtendedAlphabet) -> Optional[int]:
    """
    (k + 2) m, where every irreducible word of the inner system has at most k
    letters and m is the length of the longest extended letter over the base
    alphabet
    """
    k = irreducible_length_bound(inner)
    if k is None:
        return None
    return (k + 2) * max(len(word) for word in extended.words)


def monoid_system(
    hom: MonoidHom, options: Optional[SynthesisOptions] = None, path: Optional[List[str]] = None
) -> SemiThueSystem:
    """
    Church-Rosser system of finite index for any homomorphism to a finite
    monoid, recursing on the alphabet size and on local divisors
    """
    options = _options(options)
    alphabet = hom.source
    if len(alphabet) == 0:
        return SemiThueSystem(alphabet)
    image_hom, _ = corestrict(hom)
    image = image_hom.target
    if is_group(image):
        return _group_case(hom, options, path)

    c = max(i for i, element in enumerate(image_hom.images) if not is_unit(image, element))
    _record(path, f"local-divisor({alphabet.tokens[c]})")
    rest = alphabet.restrict([token for i, token in enumerate(alphabet.tokens) if i != c])
    recursive = monoid_system(hom.restrict(rest), options, path)
    extended = ExtendedAlphabet.build(alphabet, c, recursive, options.max_irr)
    divisor = local_divisor(image, image_hom.images[c])
    c_code = chr(c)
    psi = MonoidHom(
        extended.alphabet,
        divisor.divisor,
        {
            token: divisor.position(image_hom.apply_code(c_code + word))
            for token, word in zip(extended.alphabet.tokens, extended.words)
        },
    )
    log(f"local divisor at {alphabet.tokens[c]}: {divisor.divisor.size} of {image.size} elements, |K|={len(extended)}")
    inner = monoid_system(psi, options, path)
    lifted = lift_rules(inner, Word(alphabet, c_code), extended.naming())
    embedded = embed_system(recursive, alphabet)
    assert_no_cross_overlap(embedded, lifted)
    system = union_rules([embedded, lifted], alphabet)
    require_verified(system, hom, options, "monoid_system")

    bound = irreducible_bound(inner, extended)
    longest = irreducible_length_bound(system)
    if bound is None or longest is None or longest > bound:
        raise VerificationError(f"irreducible words of length {longest} exceed the bound {bound}")
    return system


def construct(
    hom: MonoidHom, options: Optional[SynthesisOptions] = None, path: Optional[List[str]] = None
) -> SemiThueSystem:
    """Dispatch on the configured strategy"""
    options = _options(options)
    if options.strategy == "simple":
        _record(path, "simple")
        return simple_group_system(hom, options)
    if options.strategy == "group":
        return group_system(hom, options, path)
    return monoid_system(hom, options, path)


@dataclass
class RecognizedLanguage:
    """A regular language as a union of congruence classes of a Church-Rosser system"""

    system: SemiThueSystem
    quotient: QuotientMonoid
    accepting_classes: FrozenSet[int]
    source: Dfa

    def classify(self, word: Word) -> Tuple[Word, int, bool]:
        """Normal form, rewrite steps and membership"""
        normal_form, steps = normalize(self.system, word)
        return normal_form, steps, self.quotient.position[normal_form.code] in self.accepting_classes

    def accepts(self, word: Word) -> bool:
        return self.classify(word)[2]

    @property
    def accepting_words(self) -> List[Word]:
        return [self.quotient.irreducibles[i] for i in sorted(self.accepting_classes)]


def cross_check(language: RecognizedLanguage, length: int) -> int:
    """Compare class membership with the automaton on every word up to length; returns the count checked"""
    dfa = language.source
    system = language.system
    position = language.quotient.position
    accepting = language.accepting_classes
    letters = [chr(i) for i in range(len(dfa.alphabet))]
    checked = 0
    for size in range(length + 1):
        for combination in product(letters, repeat=size):
            code = "".join(combination)
            expected = dfa.accepts_code(code)
            actual = position[system.normal_form_code(code)] in accepting
            if expected != actual:
                raise VerificationError(
                    f"class membership disagrees with the automaton on {Word(dfa.alphabet, code).compact()}"
                )
            checked += 1
    return checked


def recognize(dfa: Dfa, options: Optional[SynthesisOptions] = None) -> RecognizedLanguage:
    """Synthesize a system for the DFA's transition monoid and mark the accepting classes"""
    options = _options(options)
    _, hom, _ = transition_monoid(dfa)
    system = construct(hom, options).canonical()
    quotient = quotient_monoid(system, options.max_irr)
    accepting = frozenset(i for i, word in enumerate(quotient.irreducibles) if dfa.accepts_code(word.code))
    language = RecognizedLanguage(system, quotient, accepting, dfa)
    checked = cross_check(language, options.check_length)
    log(f"recognized: index {quotient.index}, {len(accepting)} accepting classes, {checked} words cross-checked")
    return language
