"""
Module to define groups with left-invariant metrics.

A GroupSpace pairs generator names with a MetricBackend. The backend owns
normal forms (so equality of group elements is equality of normal-form
words) and the length function g -> d(g, e). Distances follow from left
invariance: d(g, h) = d(g^-1 h, e).

Supported backends:
- FreeWordBackend, the word metric on a free group
- FreeAbelianL1Backend, the l1 metric on exponent vectors of Z^n
- FiniteCayleyBackend, a finite group closed from permutation generators
- OracleBackend, caller supplied normal forms and lengths
"""
from __future__ import annotations

import abc
import collections
import dataclasses
import functools
import logging
from fractions import Fraction
from typing import Callable, ClassVar, Iterator, Optional, Sequence, Union

from .config import get_max_ball
from .exceptions import DomainError, ResourceError
from .words import (Presentation, Word, exponent_vector, generator, identity,
                    invert, multiply, power, reduce)

logger = logging.getLogger(__name__)

Radius = Union[int, Fraction]


class MetricBackend(abc.ABC):
    """
    Normal forms and lengths for one group.

    Subclasses set the class flags:
    - finite: the group is finite and can be listed
    - geodesic: the length is the word length in the Cayley graph of the
      generators, every element has an exponent-sum readable normal form,
      and the group is infinite, so global suprema of finitely supported
      data reduce to finite scans
    """
    name: ClassVar[str] = 'abstract'
    finite: ClassVar[bool] = False
    geodesic: ClassVar[bool] = False
    pseudometric: bool = False

    def __init__(self, rank: int):
        if rank < 1:
            raise DomainError(f'Need at least one generator, got {rank}')
        self.rank = rank

    @abc.abstractmethod
    def normal_form(self, w: Word) -> Word:
        """The canonical word for the element w represents."""

    @abc.abstractmethod
    def length(self, w: Word) -> Fraction:
        """d(w, e) for a word already in normal form."""

    def order(self) -> Optional[int]:
        """Number of elements, or None for infinite groups."""
        return None

    def __repr__(self) -> str:
        return f'{type(self).__name__}(rank={self.rank})'


class FreeWordBackend(MetricBackend):
    """Word metric on the free group: the length of the reduced word."""
    name = 'free'
    geodesic = True

    def normal_form(self, w: Word) -> Word:
        return reduce(w.letters, self.rank)

    def length(self, w: Word) -> Fraction:
        return Fraction(len(w))


class FreeAbelianL1Backend(MetricBackend):
    """
    Z^n with the word metric of the standard generators.

    Normal forms list the generators in index order, so a b a^-1 becomes b.
    """
    name = 'free_abelian'
    geodesic = True

    def normal_form(self, w: Word) -> Word:
        letters = []
        for index, count in enumerate(exponent_vector(w)):
            sign = 1 if count > 0 else -1
            letters.extend([(index, sign)] * abs(count))
        return Word(tuple(letters), self.rank)

    def length(self, w: Word) -> Fraction:
        return Fraction(sum(abs(c) for c in exponent_vector(w)))


Permutation = tuple[int, ...]


class FiniteCayleyBackend(MetricBackend):
    """
    A finite group given by permutations of its generators.

    The group is closed under right multiplication by generators with a
    breadth-first search, which also records a shortlex geodesic word for
    every element and its word length. The right multiplication table by
    letters is the Cayley graph; general products fold a word through it.

    Parameters
    ----------
    generator_perms : sequence of tuple of int
        Image lists, one per generator, all on the same points 0..n-1.
    cap : int, optional
        Largest number of elements to enumerate before giving up.
        Defaults to the configured ball cap.
    """
    name = 'finite_cayley'
    finite = True

    def __init__(self, generator_perms: Sequence[Sequence[int]], cap: Optional[int] = None):
        super().__init__(len(generator_perms))
        perms = [tuple(int(v) for v in perm) for perm in generator_perms]
        degree = len(perms[0])
        for perm in perms:
            if sorted(perm) != list(range(degree)):
                raise DomainError(f'Not a permutation of 0..{degree - 1}: {perm}')
        cap = cap or get_max_ball()
        self._letters: list[tuple[int, int]] = []
        letter_perms: list[Permutation] = []
        for index, perm in enumerate(perms):
            inverse = [0] * degree
            for point, image in enumerate(perm):
                inverse[image] = point
            self._letters.extend([(index, 1), (index, -1)])
            letter_perms.extend([perm, tuple(inverse)])
        self._letter_pos = {letter: pos for pos, letter in enumerate(self._letters)}

        start = tuple(range(degree))
        self.perms: list[Permutation] = [start]
        self.words: list[Word] = [Word((), self.rank)]
        self.dist: list[int] = [0]
        self._index: dict[Permutation, int] = {start: 0}
        self.right: list[list[int]] = []
        queue = collections.deque([0])
        while queue:
            current = queue.popleft()
            row = []
            for pos, letter_perm in enumerate(letter_perms):
                product = tuple(self.perms[current][p] for p in letter_perm)
                found = self._index.get(product)
                if found is None:
                    found = len(self.perms)
                    if found >= cap:
                        raise ResourceError('Finite Cayley closure too large', cap)
                    self._index[product] = found
                    self.perms.append(product)
                    self.words.append(Word(self.words[current].letters + (self._letters[pos],), self.rank))
                    self.dist.append(self.dist[current] + 1)
                    queue.append(found)
                row.append(found)
            self.right.append(row)
        self._word_index = {word: i for i, word in enumerate(self.words)}
        logger.debug('FiniteCayleyBackend closed with %d elements', len(self.words))

    @classmethod
    def cyclic(cls, n: int) -> FiniteCayleyBackend:
        """Z_n as rotation of n points."""
        return cls([tuple((i + 1) % n for i in range(n))])

    @classmethod
    def symmetric3(cls) -> FiniteCayleyBackend:
        """S_3 generated by the transposition (0 1) and the 3-cycle (0 1 2)."""
        return cls([(1, 0, 2), (1, 2, 0)])

    def element_index(self, w: Word) -> int:
        found = self._word_index.get(w)
        if found is not None:
            return found
        current = 0
        for letter in w.letters:
            current = self.right[current][self._letter_pos[letter]]
        return current

    def normal_form(self, w: Word) -> Word:
        return self.words[self.element_index(w)]

    def length(self, w: Word) -> Fraction:
        return Fraction(self.dist[self.element_index(w)])

    def order(self) -> int:
        return len(self.words)


class OracleBackend(MetricBackend):
    """
    Normal forms and lengths from caller supplied functions.

    Errors raised by the callables propagate unchanged. The length must be
    nondecreasing along Cayley-graph geodesics so that breadth-first ball
    enumeration can prune at the radius.

    Parameters
    ----------
    rank : int
        Number of generators.
    normal_form : callable
        Word to canonical Word.
    length : callable
        Canonical Word to its distance from the identity.
    pseudometric : bool, optional
        Allow distinct elements at distance zero.
    order : int, optional
        Group order when known to be finite.
    """
    name = 'oracle'

    def __init__(
        self,
        rank: int,
        normal_form: Callable[[Word], Word],
        length: Callable[[Word], Fraction],
        pseudometric: bool = False,
        order: Optional[int] = None,
    ):
        super().__init__(rank)
        self._normal_form = normal_form
        self._length = length
        self.pseudometric = pseudometric
        self._order = order

    @property
    def finite(self) -> bool:
        return self._order is not None

    def normal_form(self, w: Word) -> Word:
        return self._normal_form(w)

    def length(self, w: Word) -> Fraction:
        return Fraction(self._length(w))

    def order(self) -> Optional[int]:
        return self._order


@dataclasses.dataclass(frozen=True)
class Scope:
    """Where a supremum was taken: over the whole group, or over a ball."""
    radius: Optional[Fraction] = None

    @property
    def exact(self) -> bool:
        return self.radius is None

    def __str__(self) -> str:
        return 'exact' if self.exact else f'ball({self.radius})'

    @classmethod
    def from_str(cls, text: str) -> Scope:
        if text == 'exact':
            return cls()
        if text.startswith('ball(') and text.endswith(')'):
            return cls(Fraction(text[5:-1]))
        raise ValueError(f'Unknown scope {text!r}')


EXACT = Scope()


@dataclasses.dataclass(frozen=True)
class Ball:
    """
    All elements within a radius of the identity.

    elements holds (normal form, distance to e) pairs sorted by distance and
    then shortlex, the identity first.
    """
    radius: Fraction
    elements: tuple[tuple[Word, Fraction], ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Word]:
        return (word for word, _ in self.elements)

    def __contains__(self, w: Word) -> bool:
        return w in self.distances

    @functools.cached_property
    def words(self) -> tuple[Word, ...]:
        return tuple(word for word, _ in self.elements)

    @functools.cached_property
    def distances(self) -> dict[Word, Fraction]:
        return dict(self.elements)


@dataclasses.dataclass(frozen=True, eq=False)
class GroupSpace:
    """
    A group acting on itself by left translation, with basepoint e.

    Parameters
    ----------
    backend : MetricBackend
        Normal forms and the length function.
    generator_names : tuple of str
        Display names, one per generator.
    presentation : Presentation, optional
        The relators the backend realizes, when the group is a quotient.
    """
    backend: MetricBackend
    generator_names: tuple[str, ...]
    presentation: Optional[Presentation] = None

    def __post_init__(self):
        if len(self.generator_names) != self.backend.rank:
            raise DomainError(
                f'{len(self.generator_names)} generator names for a backend of rank {self.backend.rank}'
            )

    def __repr__(self) -> str:
        return f'GroupSpace({self.backend.name}, {",".join(self.generator_names)})'

    @classmethod
    def free(cls, names: Sequence[str]) -> GroupSpace:
        return cls(FreeWordBackend(len(names)), tuple(names))

    @classmethod
    def free_abelian(cls, names: Sequence[str]) -> GroupSpace:
        names = tuple(names)
        relators = [
            f'{a} {b} {a}^-1 {b}^-1'
            for i, a in enumerate(names) for b in names[i + 1:]
        ]
        presentation = Presentation.from_strs(names, *relators) if relators else None
        return cls(FreeAbelianL1Backend(len(names)), names, presentation)

    @classmethod
    def cyclic(cls, n: int, name: str = 's') -> GroupSpace:
        return cls(
            FiniteCayleyBackend.cyclic(n),
            (name,),
            Presentation.from_strs((name,), f'{name}^{n}'),
        )

    @classmethod
    def symmetric3(cls) -> GroupSpace:
        return cls(
            FiniteCayleyBackend.symmetric3(),
            ('a', 'b'),
            Presentation.from_strs(('a', 'b'), 'a^2', 'b^3', 'abab'),
        )

    @property
    def rank(self) -> int:
        return self.backend.rank

    @property
    def identity(self) -> Word:
        return identity(self.rank)

    @property
    def is_finite(self) -> bool:
        return self.backend.finite

    @property
    def is_geodesic(self) -> bool:
        """True where global suprema of finitely supported data are computable."""
        return self.backend.geodesic

    @property
    def pseudometric(self) -> bool:
        return self.backend.pseudometric

    def order(self) -> Optional[int]:
        return self.backend.order()

    def generator(self, index: int, sign: int = 1) -> Word:
        return self.normal_form(generator(index, self.rank, sign))

    def letters(self) -> list[Word]:
        """The symmetric generating set, a before a^-1 before b."""
        return [
            self.generator(index, sign)
            for index in range(self.rank) for sign in (1, -1)
        ]

    def normal_form(self, w: Word) -> Word:
        if w.rank != self.rank:
            raise DomainError(f'Word over {w.rank} letters in a group with {self.rank} generators')
        return self.backend.normal_form(w)

    def multiply(self, *words: Word) -> Word:
        product = self.identity
        for w in words:
            product = multiply(product, w)
        return self.normal_form(product)

    def invert(self, w: Word) -> Word:
        return self.normal_form(invert(w))

    def power(self, w: Word, n: int) -> Word:
        return self.normal_form(power(w, n))

    def length(self, w: Word) -> Fraction:
        return self.backend.length(self.normal_form(w))

    def distance(self, g: Word, h: Word) -> Fraction:
        """d(g, h) = d(g^-1 h, e)."""
        return self.backend.length(self.normal_form(multiply(invert(g), h)))

    def parse(self, text: str) -> Word:
        return self.normal_form(Word.parse(text, self.generator_names))

    def format(self, w: Word) -> str:
        return w.format(self.generator_names)

    def ball(self, radius: Radius) -> Ball:
        """
        Enumerate every element at distance at most radius from e.

        Raises ResourceError when the configured element cap is reached.
        """
        return _enumerate_ball(self, Fraction(radius), get_max_ball())

    def elements(self) -> Ball:
        """All elements of a finite group, as a ball covering it."""
        if not self.is_finite:
            raise DomainError(f'{self} is infinite')
        return _enumerate_ball(self, None, get_max_ball())

    def covers(self, ball: Ball) -> bool:
        """True if ball holds every element of a finite group."""
        return self.is_finite and len(ball) == self.order()

    def far_element(self, beyond: Radius) -> Word:
        """An element of a geodesic backend strictly farther than beyond from e."""
        if not self.is_geodesic:
            raise DomainError(f'{self} has no far elements to offer')
        steps = int(Fraction(beyond)) + 1
        return self.power(self.generator(0), steps)


@functools.lru_cache(maxsize=256)
def _enumerate_ball(space: GroupSpace, radius: Optional[Fraction], cap: int) -> Ball:
    """Breadth-first search from e; radius None walks a finite group to the end."""
    logger.debug('ball(%s, %s)', space, radius)
    if radius is not None and radius < 0:
        raise DomainError(f'Negative radius {radius}')
    start = space.identity
    found: dict[Word, Fraction] = {start: Fraction(0)}
    frontier = [start]
    letters = space.letters()
    while frontier:
        next_frontier = []
        for current in frontier:
            for letter in letters:
                candidate = space.normal_form(multiply(current, letter))
                if candidate in found:
                    continue
                dist = space.backend.length(candidate)
                if radius is not None and dist > radius:
                    continue
                found[candidate] = dist
                if len(found) > cap:
                    raise ResourceError(f'Ball of radius {radius} in {space} too large', cap)
                next_frontier.append(candidate)
        frontier = next_frontier
    elements = sorted(found.items(), key=lambda item: (item[1], item[0].sort_key()))
    if radius is None:
        radius = elements[-1][1]
    return Ball(radius=radius, elements=tuple(elements))
