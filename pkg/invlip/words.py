"""
Module to define words over a signed generator alphabet.

This includes:
- Word, a freely reduced word that also names an element of a free group
- reduce, multiply, invert and exponent_sum, the free group arithmetic
- Presentation, generators plus relators of a finitely presented group
- ExponentMatrix, the relator by generator table of exponent sums
"""
from __future__ import annotations

import dataclasses
import re
from typing import Iterable, Iterator, Sequence

from .exceptions import DomainError

Letter = tuple[int, int]


@dataclasses.dataclass(frozen=True)
class Word:
    """
    A freely reduced word.

    Each letter is a pair (generator index, sign) with sign +1 or -1.
    The empty word is the identity. rank is the size of the alphabet the
    word lives over, so words from different alphabets never compare equal.

    Build words with reduce (or the helpers below) rather than directly,
    the constructor only checks the invariants.
    """
    letters: tuple[Letter, ...] = ()
    rank: int = 1

    def __post_init__(self):
        for index, sign in self.letters:
            _check_letter(index, sign, self.rank)
        for (i, a), (j, b) in zip(self.letters, self.letters[1:]):
            if i == j and a == -b:
                raise DomainError(f'Word is not freely reduced: {self.letters}')

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: Word) -> Word:
        return multiply(self, other)

    def __invert__(self) -> Word:
        return invert(self)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def sort_key(self) -> tuple:
        """Shortlex order with a before a^-1 before b."""
        return (len(self.letters), [(i, -s) for i, s in self.letters])

    def format(self, names: Sequence[str]) -> str:
        """Render as e.g. a^2 b a^-1, or e for the identity."""
        if not self.letters:
            return 'e'
        parts = []
        for index, sign in self.letters:
            if parts and parts[-1][0] == index:
                parts[-1][1] += sign
            else:
                parts.append([index, sign])
        return ' '.join(
            names[index] if power == 1 else f'{names[index]}^{power}'
            for index, power in parts
        )

    def to_json(self) -> list[list[int]]:
        return [[index, sign] for index, sign in self.letters]

    @classmethod
    def from_json(cls, data: Iterable[Sequence[int]], rank: int) -> Word:
        try:
            letters = [(int(index), int(sign)) for index, sign in data]
        except (TypeError, ValueError) as exc:
            raise DomainError(f'Malformed word {data!r}: {exc}') from exc
        return reduce(letters, rank)

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> Word:
        """
        Parse text such as "a b a^-1", "aba^-1" or "e" into a reduced word.

        Whitespace, "*" and "." separate tokens. A generator name may be
        followed by ^n for any nonzero integer n.
        """
        rank = len(names)
        cleaned = re.sub(r'[\s*.]', '', text)
        if cleaned in ('', '1') or (cleaned == 'e' and 'e' not in names):
            return cls((), rank)
        lookup = {name: index for index, name in enumerate(names)}
        alternatives = '|'.join(
            re.escape(name) for name in sorted(names, key=len, reverse=True)
        )
        token_re = re.compile(rf'({alternatives})(?:\^(-?\d+))?')
        letters: list[Letter] = []
        pos = 0
        while pos < len(cleaned):
            match = token_re.match(cleaned, pos)
            if match is None:
                raise DomainError(f'Cannot parse word {text!r} at {cleaned[pos:]!r}')
            index = lookup[match.group(1)]
            power = int(match.group(2)) if match.group(2) else 1
            sign = 1 if power > 0 else -1
            letters.extend([(index, sign)] * abs(power))
            pos = match.end()
        return reduce(letters, rank)


def _check_letter(index: int, sign: int, rank: int) -> None:
    if not 0 <= index < rank:
        raise DomainError(f'Generator index {index} outside alphabet of size {rank}')
    if sign not in (1, -1):
        raise DomainError(f'Letter sign must be +1 or -1, got {sign}')


def reduce(letters: Iterable[Letter], rank: int) -> Word:
    """
    Freely reduce a raw letter sequence.

    Parameters
    ----------
    letters : iterable of (int, int)
        Generator index and sign pairs, not necessarily reduced.
    rank : int
        Size of the alphabet.

    Returns
    -------
    word : Word
        The unique reduced word equal to the input in the free group.
    """
    stack: list[Letter] = []
    for index, sign in letters:
        _check_letter(index, sign, rank)
        if stack and stack[-1] == (index, -sign):
            stack.pop()
        else:
            stack.append((index, sign))
    return Word(tuple(stack), rank)


def identity(rank: int) -> Word:
    return Word((), rank)


def generator(index: int, rank: int, sign: int = 1) -> Word:
    return reduce([(index, sign)], rank)


def multiply(u: Word, v: Word) -> Word:
    if u.rank != v.rank:
        raise DomainError(f'Cannot multiply words over alphabets of size {u.rank} and {v.rank}')
    return reduce(u.letters + v.letters, u.rank)


def invert(w: Word) -> Word:
    return Word(tuple((index, -sign) for index, sign in reversed(w.letters)), w.rank)


def power(w: Word, n: int) -> Word:
    base = w if n >= 0 else invert(w)
    return reduce(base.letters * abs(n), w.rank)


def exponent_sum(w: Word, s: int) -> int:
    """Signed number of occurrences of generator s in w."""
    return sum(sign for index, sign in w.letters if index == s)


def exponent_vector(w: Word) -> tuple[int, ...]:
    """All exponent sums of w, in generator order."""
    vector = [0] * w.rank
    for index, sign in w.letters:
        vector[index] += sign
    return tuple(vector)


@dataclasses.dataclass(frozen=True)
class Presentation:
    """
    Generators and relators of a finitely presented group.

    Relators are kept exactly as given: freely reduced and nonempty, but not
    cyclically reduced, since exponent sums do not see cyclic permutation.
    """
    generator_names: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        if not self.generator_names:
            raise DomainError('A presentation needs at least one generator')
        if len(set(self.generator_names)) != len(self.generator_names):
            raise DomainError(f'Duplicate generator names in {self.generator_names}')
        for relator in self.relators:
            if relator.rank != self.generator_count:
                raise DomainError(
                    f'Relator {relator.letters} uses an alphabet of size {relator.rank}, '
                    f'expected {self.generator_count}'
                )
            if relator.is_identity:
                raise DomainError('Relators must be nonempty')

    @property
    def generator_count(self) -> int:
        return len(self.generator_names)

    @classmethod
    def from_strs(cls, names: Sequence[str], *relators: str) -> Presentation:
        """Build from generator names and relator text, e.g. ('a', 'b'), 'aba^-1b^-1'."""
        names = tuple(names)
        return cls(names, tuple(Word.parse(text, names) for text in relators))

    def format(self) -> str:
        gens = ','.join(self.generator_names)
        rels = ', '.join(r.format(self.generator_names) for r in self.relators)
        return f'<{gens} | {rels}>'


@dataclasses.dataclass(frozen=True)
class ExponentMatrix:
    """
    Integer matrix with one row per relator and one column per generator.

    Entry [r][s] is the exponent sum of generator s in relator r. Column
    order follows the generator index order of the presentation.
    """
    rows: tuple[tuple[int, ...], ...]
    generator_count: int

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.generator_count


def exponent_matrix(p: Presentation) -> ExponentMatrix:
    return ExponentMatrix(
        rows=tuple(exponent_vector(relator) for relator in p.relators),
        generator_count=p.generator_count,
    )
