"""
Finite monoids as multiplication tables, homomorphisms from free monoids,
transition monoids of DFAs and local divisors
"""

from collections import deque
from dataclasses import dataclass
from functools import reduce
from math import gcd, lcm
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .errors import InvalidInputError, PreconditionError
from .words import WeightedAlphabet, Word

Transformation = Tuple[int, ...]


class FiniteMonoid:
    """
    Monoid on elements 0..N-1 given by its multiplication table.

    Closure, the identity laws and associativity are checked on construction.
    """

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        identity: int = 0,
        labels: Optional[Sequence[str]] = None,
        check: bool = True,
    ):
        self.table: Tuple[Tuple[int, ...], ...] = tuple(tuple(row) for row in table)
        self.identity = identity
        self.labels: Tuple[str, ...] = tuple(labels) if labels is not None else tuple(str(i) for i in range(len(self.table)))
        if check:
            self._validate()

    def _validate(self) -> None:
        size = self.size
        if size == 0:
            raise InvalidInputError("a monoid needs at least one element")
        if len(self.labels) != size:
            raise InvalidInputError("one label per element required")
        if not 0 <= self.identity < size:
            raise InvalidInputError(f"identity {self.identity} out of range")
        for i, row in enumerate(self.table):
            if len(row) != size or any(not 0 <= entry < size for entry in row):
                raise InvalidInputError(f"row {i} of the multiplication table is not closed")
        table = self.table
        e = self.identity
        for x in range(size):
            if table[e][x] != x or table[x][e] != x:
                raise InvalidInputError(f"{self.identity} is not an identity for element {x}")
        for x in range(size):
            row_x = table[x]
            for y in range(size):
                xy = row_x[y]
                row_xy = table[xy]
                row_y = table[y]
                for z in range(size):
                    if row_xy[z] != row_x[row_y[z]]:
                        raise InvalidInputError(f"multiplication is not associative on ({x}, {y}, {z})")

    @property
    def size(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"FiniteMonoid(size={self.size}, identity={self.identity})"

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def product(self, elements: Sequence[int]) -> int:
        table = self.table
        result = self.identity
        for element in elements:
            result = table[result][element]
        return result

    def power(self, x: int, k: int) -> int:
        result = self.identity
        for _ in range(k):
            result = self.table[result][x]
        return result

    def label(self, x: int) -> str:
        return self.labels[x]


class MonoidHom:
    """Homomorphism from the free monoid over `source` into `target`, fixed by letter images"""

    def __init__(self, source: WeightedAlphabet, target: FiniteMonoid, letter_image: Mapping[str, int]):
        missing = [token for token in source.tokens if token not in letter_image]
        if missing:
            raise InvalidInputError(f"no image for letters {', '.join(missing)}")
        images = tuple(letter_image[token] for token in source.tokens)
        for token, image in zip(source.tokens, images):
            if not 0 <= image < target.size:
                raise InvalidInputError(f"image of {token!r} is not an element of the target")
        self.source = source
        self.target = target
        self.images: Tuple[int, ...] = images

    def __repr__(self) -> str:
        return f"MonoidHom({list(self.source.tokens)} -> {self.target!r})"

    @property
    def letter_image(self) -> Dict[str, int]:
        return dict(zip(self.source.tokens, self.images))

    def apply_code(self, code: str) -> int:
        table = self.target.table
        images = self.images
        result = self.target.identity
        for ch in code:
            result = table[result][images[ord(ch)]]
        return result

    def restrict(self, alphabet: WeightedAlphabet) -> "MonoidHom":
        """The same map on a sub-alphabet"""
        image = self.letter_image
        return MonoidHom(alphabet, self.target, {token: image[token] for token in alphabet.tokens})


class Dfa:
    """Complete deterministic automaton over a weighted alphabet"""

    def __init__(
        self,
        alphabet: WeightedAlphabet,
        states: Sequence[str],
        initial: str,
        accepting: Sequence[str],
        transitions: Mapping[Tuple[str, str], str],
    ):
        self.alphabet = alphabet
        self.states: Tuple[str, ...] = tuple(states)
        position = {name: i for i, name in enumerate(self.states)}
        if len(position) != len(self.states):
            raise InvalidInputError("duplicate state names")
        if initial not in position:
            raise InvalidInputError(f"initial state {initial!r} is not declared")
        for name in accepting:
            if name not in position:
                raise InvalidInputError(f"accepting state {name!r} is not declared")
        for (source, token), target in transitions.items():
            if source not in position or target not in position:
                raise InvalidInputError(f"transition {source} {token} {target} uses an undeclared state")
            if token not in alphabet:
                raise InvalidInputError(f"transition {source} {token} {target} uses an unknown token")
        delta: List[Tuple[int, ...]] = []
        for state in self.states:
            row = []
            for token in alphabet.tokens:
                if (state, token) not in transitions:
                    raise InvalidInputError(f"missing transition for state {state!r} and token {token!r}")
                row.append(position[transitions[(state, token)]])
            delta.append(tuple(row))
        self.initial = position[initial]
        self.accepting: FrozenSet[int] = frozenset(position[name] for name in accepting)
        self.delta: Tuple[Tuple[int, ...], ...] = tuple(delta)

    def __repr__(self) -> str:
        return f"Dfa(states={len(self.states)}, letters={len(self.alphabet)})"

    def run(self, code: str, start: Optional[int] = None) -> int:
        state = self.initial if start is None else start
        delta = self.delta
        for ch in code:
            state = delta[state][ord(ch)]
        return state

    def accepts_code(self, code: str) -> bool:
        return self.run(code) in self.accepting

    def accepts(self, word: Word) -> bool:
        if word.alphabet != self.alphabet:
            raise InvalidInputError("word is not over the automaton's alphabet")
        return self.accepts_code(word.code)

    def letter_action(self, letter: int) -> Transformation:
        return tuple(row[letter] for row in self.delta)


@dataclass(frozen=True)
class LocalDivisor:
    """The monoid cM ∩ Mc with product xc ∘ cy = xcy"""

    base: FiniteMonoid
    c: int
    carrier: Tuple[int, ...]
    divisor: FiniteMonoid

    @property
    def embed(self) -> Tuple[int, ...]:
        return self.carrier

    def position(self, element: int) -> int:
        try:
            return self.carrier.index(element)
        except ValueError:
            raise PreconditionError(f"element {element} is not in the local divisor at {self.c}") from None


def hom_apply(hom: MonoidHom, w: Word) -> int:
    """Image of w under hom; the empty word maps to the identity"""
    if w.alphabet != hom.source:
        raise InvalidInputError("word is not over the homomorphism's source alphabet")
    return hom.apply_code(w.code)


def compose(first: Transformation, second: Transformation) -> Transformation:
    """Apply `first`, then `second`"""
    return tuple(second[q] for q in first)


def transformation_monoid(
    generators: Sequence[Transformation], degree: int
) -> Tuple[FiniteMonoid, Tuple[int, ...], Tuple[Transformation, ...]]:
    """
    Closure of transformations of {0..degree-1} under composition.

    Elements are numbered in breadth-first discovery order starting with the
    identity, and x*y means "apply x, then y".

    Returns:
        The monoid, the element index of each generator, and the
        transformation of each element
    """
    identity = tuple(range(degree))
    elements: List[Transformation] = [identity]
    index: Dict[Transformation, int] = {identity: 0}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for generator in generators:
            following = compose(current, generator)
            if following not in index:
                index[following] = len(elements)
                elements.append(following)
                queue.append(following)
    table = [[index[compose(x, y)] for y in elements] for x in elements]
    monoid = FiniteMonoid(table, 0, ["(" + " ".join(map(str, t)) + ")" for t in elements], check=False)
    return monoid, tuple(index[g] for g in generators), tuple(elements)


def transition_monoid(dfa: Dfa) -> Tuple[FiniteMonoid, MonoidHom, FrozenSet[int]]:
    """
    Transition monoid of a DFA, the letter-action homomorphism and the elements
    sending the initial state into an accepting state
    """
    actions = [dfa.letter_action(letter) for letter in range(len(dfa.alphabet))]
    monoid, generator_index, elements = transformation_monoid(actions, len(dfa.states))
    hom = MonoidHom(dfa.alphabet, monoid, dict(zip(dfa.alphabet.tokens, generator_index)))
    accepting = frozenset(i for i, t in enumerate(elements) if t[dfa.initial] in dfa.accepting)
    return monoid, hom, accepting


def cyclic_group(n: int) -> FiniteMonoid:
    """Z/nZ with element i standing for the residue i"""
    if n < 1:
        raise PreconditionError(f"cyclic group order must be positive, got {n}")
    return FiniteMonoid([[(i + j) % n for j in range(n)] for i in range(n)], 0, check=False)


def permutation_group(generators: Sequence[Transformation]) -> Tuple[FiniteMonoid, Tuple[int, ...]]:
    """Group generated by permutations, with the element index of each generator"""
    degree = len(generators[0]) if generators else 0
    for generator in generators:
        if sorted(generator) != list(range(degree)):
            raise PreconditionError(f"{generator} is not a permutation of {degree} points")
    monoid, generator_index, _ = transformation_monoid(generators, degree)
    return monoid, generator_index


def inverse(monoid: FiniteMonoid, x: int) -> Optional[int]:
    e = monoid.identity
    for y in range(monoid.size):
        if monoid.table[x][y] == e and monoid.table[y][x] == e:
            return y
    return None


def is_unit(monoid: FiniteMonoid, x: int) -> bool:
    return inverse(monoid, x) is not None


def is_group(monoid: FiniteMonoid) -> bool:
    return all(is_unit(monoid, x) for x in range(monoid.size))


def element_order(monoid: FiniteMonoid, x: int) -> int:
    """Least k >= 1 with x^k = 1"""
    current = x
    for k in range(1, monoid.size + 1):
        if current == monoid.identity:
            return k
        current = monoid.table[current][x]
    raise PreconditionError(f"element {x} has no finite order; it is not a unit")


def exponent(group: FiniteMonoid) -> int:
    """Least common multiple of all element orders"""
    if not is_group(group):
        raise PreconditionError("exponent is only defined for groups")
    return reduce(lcm, (element_order(group, x) for x in range(group.size)), 1)


def image_submonoid(hom: MonoidHom) -> Tuple[FiniteMonoid, Tuple[int, ...]]:
    """
    Submonoid generated by the letter images.

    Returns:
        The image as a monoid of its own (identity first) and the target
        element corresponding to each of its elements
    """
    target = hom.target
    generators = sorted(set(hom.images))
    elements = [target.identity]
    index = {target.identity: 0}
    queue = deque(elements)
    while queue:
        current = queue.popleft()
        for generator in generators:
            following = target.table[current][generator]
            if following not in index:
                index[following] = len(elements)
                elements.append(following)
                queue.append(following)
    table = [[index[target.table[x][y]] for y in elements] for x in elements]
    labels = [target.labels[x] for x in elements]
    return FiniteMonoid(table, 0, labels, check=False), tuple(elements)


def corestrict(hom: MonoidHom) -> Tuple[MonoidHom, Tuple[int, ...]]:
    """The homomorphism onto its own image, with the image-to-target embedding"""
    image, embedding = image_submonoid(hom)
    position = {element: i for i, element in enumerate(embedding)}
    letters = {token: position[element] for token, element in zip(hom.source.tokens, hom.images)}
    return MonoidHom(hom.source, image, letters), embedding


def local_divisor(monoid: FiniteMonoid, c: int) -> LocalDivisor:
    """
    Local divisor of `monoid` at `c`.

    Well-definedness of xc ∘ cy = xcy is checked over every decomposition and
    the resulting table goes through the associativity check of FiniteMonoid.
    """
    table = monoid.table
    elements = range(monoid.size)
    right_multiples = {table[c][x] for x in elements}
    left_multiples = {table[y][c] for y in elements}
    carrier = tuple(sorted(right_multiples & left_multiples))
    position = {element: i for i, element in enumerate(carrier)}
    left_factors: Dict[int, List[int]] = {u: [] for u in carrier}
    right_factors: Dict[int, List[int]] = {v: [] for v in carrier}
    for x in elements:
        if table[x][c] in left_factors:
            left_factors[table[x][c]].append(x)
        if table[c][x] in right_factors:
            right_factors[table[c][x]].append(x)

    divisor_table = []
    for u in carrier:
        row = []
        for v in carrier:
            products = {table[table[x][c]][y] for x in left_factors[u] for y in right_factors[v]}
            if len(products) != 1:
                raise InvalidInputError(f"local divisor product is not well defined on ({u}, {v})")
            product = products.pop()
            if product not in position:
                raise InvalidInputError(f"local divisor product leaves the carrier on ({u}, {v})")
            row.append(position[product])
        divisor_table.append(row)
    divisor = FiniteMonoid(divisor_table, position[c], [monoid.labels[u] for u in carrier])
    return LocalDivisor(monoid, c, carrier, divisor)


def kernel_weight_gcd(hom: MonoidHom) -> Optional[int]:
    """
    Gcd of the weights of all nonempty words mapping to the identity.

    Works on the weighted Cayley graph of the image: a spanning tree from the
    identity assigns potentials, and the gcd over all edges u -a-> v of
    pot(u) + |a| - pot(v) equals the gcd of all closed-walk weights.

    Returns:
        The gcd, or None when the kernel holds only the empty word
    """
    image_hom, _ = corestrict(hom)
    image = image_hom.target
    if not is_group(image):
        raise PreconditionError("kernel weight gcd requires a group image")
    weights = hom.source.weights
    potential: Dict[int, int] = {image.identity: 0}
    queue = deque([image.identity])
    result = 0
    while queue:
        current = queue.popleft()
        for letter, element in enumerate(image_hom.images):
            following = image.table[current][element]
            candidate = potential[current] + weights[letter]
            if following not in potential:
                potential[following] = candidate
                queue.append(following)
            else:
                result = gcd(result, abs(candidate - potential[following]))
    return result or None
