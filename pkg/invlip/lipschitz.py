"""
Module to define Lipschitz functions on groups and their invariance defects.

Functions come in three shapes:
- Tabulated, a finite table of values
- Structured, a homomorphism plus a finitely supported perturbation
- Lifted, a function on a quotient pulled back to the free group

All values are Fractions. Group points are passed around as normal-form
words, and every public operation here normalizes its inputs through the
GroupSpace before evaluating.
"""
from __future__ import annotations

import dataclasses
import logging
import random
from fractions import Fraction
from typing import (Callable, Hashable, Iterable, Mapping, Optional, Sequence,
                    Union)

from .exceptions import DomainError, PreconditionError, ScopeError, UnboundedNormError
from .groups import EXACT, GroupSpace, Radius, Scope
from .words import Word, exponent_vector

logger = logging.getLogger(__name__)

Point = Hashable


def _frac(value: Union[int, str, Fraction]) -> Fraction:
    return Fraction(value)


@dataclasses.dataclass(frozen=True)
class Tabulated:
    """
    A function known only on a finite set of points.

    Parameters
    ----------
    values : mapping
        Point to value. Group points must be normal-form words.
    basepoint : hashable
        The distinguished point, the identity for group functions.
    pinned : bool, optional
        Require the value at the basepoint to be zero. Functions that
        are merely Lipschitz (not in Lip0) set this to False.
    """
    values: Mapping[Point, Fraction]
    basepoint: Point
    pinned: bool = True

    def __post_init__(self):
        object.__setattr__(
            self, 'values', {key: _frac(val) for key, val in self.values.items()}
        )
        if self.pinned and self.values.get(self.basepoint) != 0:
            raise DomainError(
                f'Tabulated function must be 0 at the basepoint, got {self.values.get(self.basepoint)}'
            )

    @classmethod
    def on_group(cls, space: GroupSpace, values: Mapping[Word, Fraction], pinned: bool = True) -> Tabulated:
        """Tabulate on group elements, normalizing keys and filling in f(e) = 0."""
        table = {space.normal_form(w): _frac(v) for w, v in values.items()}
        if pinned:
            table.setdefault(space.identity, Fraction(0))
        return cls(table, space.identity, pinned)

    @classmethod
    def from_callable(cls, func: Callable[[Point], Fraction], points: Iterable[Point], basepoint: Point) -> Tabulated:
        return cls({p: func(p) for p in points}, basepoint, pinned=False)

    def __call__(self, x: Point) -> Fraction:
        try:
            return self.values[x]
        except KeyError:
            raise DomainError(f'No tabulated value at {x!r}') from None

    def __contains__(self, x: Point) -> bool:
        return x in self.values

    def __sub__(self, other: Callable[[Point], Fraction]) -> Tabulated:
        return Tabulated(
            {x: val - other(x) for x, val in self.values.items()},
            self.basepoint,
            pinned=self.pinned,
        )


@dataclasses.dataclass(frozen=True)
class Structured:
    """
    f(g) = sum of hom[s] * exponent_sum(g, s) plus perturbation(g).

    The perturbation is zero off its support and zero at the identity.
    Zero entries are dropped so two equal functions compare equal.
    """
    hom: tuple[Fraction, ...]
    perturbation: Mapping[Word, Fraction] = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        hom = tuple(_frac(v) for v in self.hom)
        pert = {}
        for word, value in self.perturbation.items():
            value = _frac(value)
            if word.rank != len(hom):
                raise DomainError(f'Perturbation point over {word.rank} letters, expected {len(hom)}')
            if word.is_identity and value != 0:
                raise DomainError(f'Perturbation must vanish at e, got {value}')
            if value != 0:
                pert[word] = value
        object.__setattr__(self, 'hom', hom)
        object.__setattr__(self, 'perturbation', pert)

    @classmethod
    def homomorphism(cls, hom: Sequence[Fraction]) -> Structured:
        return cls(tuple(hom), {})

    @property
    def rank(self) -> int:
        return len(self.hom)

    @property
    def is_homomorphism(self) -> bool:
        return not self.perturbation

    def hom_value(self, w: Word) -> Fraction:
        """The homomorphism part at any word, reduced or not."""
        return sum(
            (h * n for h, n in zip(self.hom, exponent_vector(w))),
            Fraction(0),
        )

    def support_radius(self, space: GroupSpace) -> Fraction:
        return max((space.length(w) for w in self.perturbation), default=Fraction(0))

    def __call__(self, g: Word) -> Fraction:
        return self.hom_value(g) + self.perturbation.get(g, Fraction(0))

    def __sub__(self, other: Structured) -> Structured:
        pert = dict(self.perturbation)
        for word, value in other.perturbation.items():
            pert[word] = pert.get(word, Fraction(0)) - value
        return Structured(tuple(a - b for a, b in zip(self.hom, other.hom)), pert)

    def scaled(self, factor: Fraction) -> Structured:
        return Structured(
            tuple(h * factor for h in self.hom),
            {w: v * factor for w, v in self.perturbation.items()},
        )


@dataclasses.dataclass(frozen=True)
class Lifted:
    """F = f o q: a function on a quotient read as a function on the free group."""
    base: LipFn
    quotient: GroupSpace

    def __call__(self, w: Word) -> Fraction:
        return self.base(self.quotient.normal_form(w))

    @property
    def free_space(self) -> GroupSpace:
        return GroupSpace.free(self.quotient.generator_names)


LipFn = Union[Tabulated, Structured, Lifted]


def zero_function(space: GroupSpace) -> Structured:
    return Structured.homomorphism([Fraction(0)] * space.rank)


def evaluate(f: Callable[[Point], Fraction], g: Word, space: GroupSpace) -> Fraction:
    """f at the element represented by any word g."""
    return f(space.normal_form(g))


def _points(pts: Iterable[Point]) -> list[Point]:
    return list(dict.fromkeys(pts))


def lip_norm_witness(
    f: Callable[[Point], Fraction],
    pts: Iterable[Point],
    space,
) -> tuple[Fraction, Optional[tuple[Point, Point]]]:
    """
    Lipschitz number of f on a finite point set, with a pair attaining it.

    space only needs distance(x, y) and a pseudometric flag, so finite
    action spaces work here as well as GroupSpaces.
    """
    points = _points(pts)
    if len(points) < 2:
        raise PreconditionError(f'Need at least two points for a Lipschitz number, got {len(points)}')
    values = [f(p) for p in points]
    best = Fraction(0)
    witness = None
    for i, x in enumerate(points):
        for j in range(i + 1, len(points)):
            num = abs(values[i] - values[j])
            dist = space.distance(x, points[j])
            if dist == 0:
                if num != 0:
                    raise UnboundedNormError(
                        f'{x!r} and {points[j]!r} are at distance 0 with values '
                        f'{values[i]} != {values[j]}'
                    )
                if not space.pseudometric:
                    raise DomainError(f'Distinct points {x!r}, {points[j]!r} at distance 0')
                continue
            ratio = num / dist
            if ratio > best or witness is None:
                best = ratio
                witness = (x, points[j])
    return best, witness


def lip_norm(f: Callable[[Point], Fraction], pts: Iterable[Point], space) -> Fraction:
    """max |f(x) - f(y)| / d(x, y) over pairs of distinct points."""
    return lip_norm_witness(f, pts, space)[0]


def hom_norm(hom: Sequence[Fraction], space: GroupSpace, radius: Radius = 1) -> Fraction:
    """
    Lipschitz number of a homomorphism given by its generator values.

    On geodesic backends (free groups, Z^n with l1) the supremum is
    attained on a generator, so the answer is exact for any radius.
    Elsewhere it is a scan of the ball.
    """
    if Fraction(radius) < 1:
        raise PreconditionError(f'hom_norm needs radius >= 1, got {radius}')
    h = Structured.homomorphism(hom)
    if len(h.hom) != space.rank:
        raise DomainError(f'{len(h.hom)} homomorphism values for {space.rank} generators')
    if space.is_geodesic:
        return max(abs(v) for v in h.hom)
    ball = space.ball(radius)
    return max(
        (abs(h.hom_value(g)) / dist for g, dist in ball.elements if dist > 0),
        default=Fraction(0),
    )


def exact_lip_witness(f: Structured, space: GroupSpace) -> tuple[Fraction, tuple[Word, Word]]:
    """
    Global Lipschitz number of a Structured function on a geodesic backend.

    On a word metric the Lipschitz number is a maximum over Cayley-graph
    edges (y, yt). Edges not touching the perturbation support change f by
    exactly the homomorphism value of t, and at least one such edge exists.
    """
    if not isinstance(f, Structured):
        raise ScopeError(f'Exact Lipschitz numbers need a Structured function, got {type(f).__name__}')
    if not space.is_geodesic:
        raise ScopeError(f'No exact Lipschitz number on {space}')
    support = list(f.perturbation)
    far = space.far_element(f.support_radius(space) + 1)
    best = None
    witness = None
    for t in space.letters():
        t_inv = space.invert(t)
        candidates = [far] + support + [space.multiply(y, t_inv) for y in support]
        for y in dict.fromkeys(candidates):
            yt = space.multiply(y, t)
            value = abs(f(yt) - f(y))
            if best is None or value > best:
                best = value
                witness = (y, yt)
    return best, witness


def exact_lip_norm(f: Structured, space: GroupSpace) -> Fraction:
    return exact_lip_witness(f, space)[0]


@dataclasses.dataclass(frozen=True)
class DefectReport:
    """
    The invariance defect of f.

    delta_hat = |(f(gx) - f(x)) - (f(gy) - f(y))| / d(x, y) at the witness.
    """
    delta_hat: Fraction
    witness: Optional[tuple[Word, Word, Word]]
    scope: Scope


def defect_at(f: Callable[[Word], Fraction], space: GroupSpace, g: Word, x: Word, y: Word) -> Fraction:
    """Recompute the defect quotient for one (g, x, y) triple."""
    dist = space.distance(x, y)
    if dist == 0:
        raise DomainError(f'Witness points {x} and {y} coincide')
    gx = space.multiply(g, x)
    gy = space.multiply(g, y)
    return abs((f(gx) - f(space.normal_form(x))) - (f(gy) - f(space.normal_form(y)))) / dist


def translation_defect(
    f: Callable[[Point], Fraction],
    elements: Sequence,
    points: Sequence[Point],
    act: Callable[[object, Point], Point],
    distance: Callable[[Point, Point], Fraction],
    pseudometric: bool = False,
) -> tuple[Fraction, Optional[tuple]]:
    """
    max over g of the Lipschitz number of x -> f(act(g, x)) - f(x) on points.

    Shared by left translations, right translations and finite actions.
    Returns the maximum and a (g, x, y) triple attaining it.
    """
    points = list(points)
    base = [f(x) for x in points]
    dists = {}
    for i, x in enumerate(points):
        for j in range(i + 1, len(points)):
            dists[i, j] = distance(x, points[j])
    best = Fraction(0)
    witness = None
    for g in elements:
        phi = [f(act(g, x)) - base[i] for i, x in enumerate(points)]
        for (i, j), dist in dists.items():
            num = abs(phi[i] - phi[j])
            if num == 0:
                continue
            if dist == 0:
                if pseudometric:
                    raise UnboundedNormError(
                        f'Translation by {g!r} separates {points[i]!r} and {points[j]!r} at distance 0'
                    )
                raise DomainError(f'Distinct points {points[i]!r}, {points[j]!r} at distance 0')
            ratio = num / dist
            if ratio > best:
                best = ratio
                witness = (g, points[i], points[j])
    return best, witness


def delta_defect(f: LipFn, space: GroupSpace, radius: Optional[Radius] = None) -> DefectReport:
    """
    The invariance defect of f under left translation.

    Structured functions on geodesic backends get the exact global value:
    for each letter t, D_t(y) = f(yt) - f(y) equals the homomorphism value
    off a finite set, and the defect is the largest spread max D_t - min D_t.
    Finite groups are scanned in full. Anything else is scanned over
    ball(radius) and reported with that scope, a lower bound of the
    global value.
    """
    logger.debug('delta_defect(%s, %s, %s)', type(f).__name__, space, radius)
    if isinstance(f, Structured) and space.is_geodesic:
        return _exact_structured_defect(f, space)
    if space.is_finite:
        ball = space.elements()
        scope = EXACT
    else:
        if radius is None:
            raise ScopeError(f'delta_defect on {space} needs a radius')
        ball = space.ball(radius)
        scope = Scope(Fraction(radius))
    pts = ball.words
    value, witness = translation_defect(
        f, pts, pts, space.multiply, space.distance, space.pseudometric,
    )
    return DefectReport(value, witness, scope)


def _exact_structured_defect(f: Structured, space: GroupSpace) -> DefectReport:
    if f.is_homomorphism:
        return DefectReport(Fraction(0), None, EXACT)
    support = list(f.perturbation)
    far = space.far_element(f.support_radius(space) + 1)
    best = Fraction(0)
    witness = None
    for t in space.letters():
        t_inv = space.invert(t)
        candidates = dict.fromkeys(
            [far] + support + [space.multiply(y, t_inv) for y in support]
        )
        spread = {y: f(space.multiply(y, t)) - f(y) for y in candidates}
        high = max(spread, key=lambda y: (spread[y], y.sort_key()))
        low = min(spread, key=lambda y: (spread[y], y.sort_key()))
        gap = spread[high] - spread[low]
        if gap > best:
            best = gap
            # x = low, y = low t, g = high low^-1 gives gx = high, gy = high t
            witness = (space.multiply(high, space.invert(low)), low, space.multiply(low, t))
    return DefectReport(best, witness, EXACT)


def check_chain_inequality(
    f: Callable[[Word], Fraction],
    space: GroupSpace,
    gs: Sequence[Word],
    x: Word,
    y: Word,
    delta: Fraction,
) -> bool:
    """
    Check the iterated form of delta-invariance for one tuple.

    |f(g1...gn x) - f(x) - sum_i (f(gi y) - f(y))|
        <= delta * (n d(x, y) + sum_{i >= 2} d(gi x, x))
    """
    if not gs:
        raise PreconditionError('Need at least one group element')
    x = space.normal_form(x)
    y = space.normal_form(y)
    left = evaluate(f, space.multiply(*gs, x), space) - f(x)
    left -= sum((evaluate(f, space.multiply(g, y), space) - f(y) for g in gs), Fraction(0))
    right = len(gs) * space.distance(x, y)
    right += sum((space.distance(space.multiply(g, x), x) for g in gs[1:]), Fraction(0))
    return abs(left) <= Fraction(delta) * right


def detect_invariance(f: LipFn, space: GroupSpace, radius: Optional[Radius] = None) -> Optional[tuple[Fraction, ...]]:
    """
    Return H with f(gx) = f(x) + H(g), as generator values, or None.

    H exists exactly when the defect vanishes on the checked scope, and
    then H(g) = f(g e).
    """
    report = delta_defect(f, space, radius)
    if report.delta_hat != 0:
        logger.debug('Not invariant, defect %s at %s', report.delta_hat, report.witness)
        return None
    return tuple(f(space.generator(s)) for s in range(space.rank))


def dual_action(f: Callable[[Word], Fraction], g: Word, space: GroupSpace, radius: Radius) -> Tabulated:
    """
    gf(x) = f(g^-1 x) - f(g^-1), tabulated on ball(radius).

    Structured functions are not closed under this action (the shift by
    f(g^-1) is not finitely supported), so the result is always a table.
    """
    g_inv = space.invert(g)
    shift = f(g_inv)
    return Tabulated(
        {x: evaluate(f, space.multiply(g_inv, x), space) - shift for x in space.ball(radius)},
        space.identity,
    )


def invariance_distance(f: Callable[[Word], Fraction], g: Word, space: GroupSpace, radius: Radius) -> Fraction:
    """||gf - f|| on ball(radius)."""
    moved = dual_action(f, g, space, radius)
    return lip_norm(moved - f, moved.values, space)


def random_delta_invariant(
    space: GroupSpace,
    delta: Fraction,
    support_radius: Radius,
    seed: int,
) -> Structured:
    """
    A seeded random Structured function with defect at most delta.

    Homomorphism values are random on infinite backends and zero on finite
    groups, which have no nonzero homomorphisms to the reals. The
    perturbation is random on ball(support_radius) and rescaled so its
    Lipschitz number is at most delta / 2.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise PreconditionError(f'delta must be positive, got {delta}')
    rng = random.Random(seed)
    if space.is_finite:
        hom = [Fraction(0)] * space.rank
    else:
        hom = [Fraction(rng.randint(-12, 12), rng.choice((1, 2, 3, 4, 6))) for _ in range(space.rank)]
    pert = {
        w: Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3, 4)))
        for w in space.ball(support_radius) if not w.is_identity
    }
    p = Structured([Fraction(0)] * space.rank, pert)
    if p.perturbation:
        if space.is_geodesic:
            size = exact_lip_norm(p, space)
        elif space.is_finite:
            size = lip_norm(p, space.elements(), space)
        else:
            raise ScopeError(f'Cannot measure a perturbation on {space} exactly')
        if size > delta / 2:
            p = p.scaled(delta / (2 * size))
    logger.debug('random_delta_invariant seed=%s delta=%s support=%d', seed, delta, len(p.perturbation))
    return Structured(tuple(hom), p.perturbation)


def example_function(delta: Fraction, radius: int = 16) -> Structured:
    """
    The ramp on Z: 0 for x <= 0 and delta * x for 0 < x, near the origin.

    Encoded as the homomorphism delta/2 plus the tent perturbation
    (delta/2) min(|k|, radius - |k|) on |k| <= radius, so it agrees with
    the ramp for |k| <= radius / 2 and has slope delta / 2 far away.
    """
    delta = Fraction(delta)
    half = delta / 2
    pert = {}
    for k in range(-radius, radius + 1):
        if k == 0:
            continue
        sign = 1 if k > 0 else -1
        pert[Word(((0, sign),) * abs(k), 1)] = half * min(abs(k), radius - abs(k))
    return Structured((half,), pert)
