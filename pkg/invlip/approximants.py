"""
Module to build invariant approximants of almost-invariant functions.

Each builder returns the approximant together with an ApproximationReport
that compares the achieved distance ||f - fbar|| against the bound the
corresponding result promises, stated against the measured defect.

This includes:
- free_approximant and adjusted_approximant on free groups
- lift_to_free and presented_approximant for finitely presented quotients
- orbit_collapse_approximant for finite actions with a fundamental domain
- shrink_norm_check and restrict_to_orbit for finite and cyclic groups
"""
from __future__ import annotations

import dataclasses
import functools
import logging
import random
from fractions import Fraction
from typing import Any, Optional, Sequence

from .exceptions import (CertificationError, DomainError, PreconditionError,
                         ScopeError, ValidationError)
from .groups import EXACT, GroupSpace, OracleBackend, Radius, Scope
from .kernel import RationalMatrix, linf_kernel_project, norm_inf
from .lipschitz import (LipFn, Lifted, Structured, Tabulated, delta_defect,
                        exact_lip_witness, lip_norm_witness,
                        translation_defect)
from .mean_growth import mean_growth
from .words import Presentation, Word, exponent_matrix

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class ApproximationReport:
    """
    How close an invariant approximant came to its promised bound.

    achieved_ball is ||f - fbar|| over the scanned points, achieved_exact
    the global value when it can be computed. passed compares the exact
    value when present and the ball value otherwise.
    """
    kind: str
    delta_hat: Fraction
    bound: Fraction
    achieved_ball: Fraction
    achieved_exact: Optional[Fraction]
    radius: Optional[Fraction]
    passed: bool
    scope: Scope
    witness: Optional[tuple] = None
    defect_witness: Optional[tuple] = None
    seed: Optional[int] = None
    extras: dict[str, Any] = dataclasses.field(default_factory=dict)

    @property
    def achieved(self) -> Fraction:
        return self.achieved_ball if self.achieved_exact is None else self.achieved_exact

    def with_seed(self, seed: int) -> ApproximationReport:
        return dataclasses.replace(self, seed=seed)


def _distance_report(
    kind: str,
    difference,
    space: GroupSpace,
    radius: Optional[Radius],
    defect,
    bound: Fraction,
    extras: Optional[dict] = None,
) -> ApproximationReport:
    """Measure ||f - fbar|| on the ball and exactly when possible."""
    if space.is_finite:
        pts = space.elements()
        scan_radius = None
    else:
        scan_radius = Fraction(radius)
        pts = space.ball(scan_radius)
    achieved_ball, witness = lip_norm_witness(difference, pts, space)
    achieved_exact = None
    scope = Scope(scan_radius) if scan_radius is not None else EXACT
    if isinstance(difference, Structured) and space.is_geodesic:
        achieved_exact, witness = exact_lip_witness(difference, space)
        scope = EXACT
    elif space.is_finite:
        achieved_exact = achieved_ball
    achieved = achieved_ball if achieved_exact is None else achieved_exact
    passed = achieved <= bound
    if not passed:
        logger.error('%s bound failed: %s > %s at %s', kind, achieved, bound, witness)
    return ApproximationReport(
        kind=kind,
        delta_hat=defect.delta_hat,
        bound=bound,
        achieved_ball=achieved_ball,
        achieved_exact=achieved_exact,
        radius=scan_radius,
        passed=passed,
        scope=scope if defect.scope.exact else defect.scope,
        witness=witness,
        defect_witness=defect.witness,
        extras=extras or {},
    )


def _require_free(space: GroupSpace) -> None:
    if space.backend.name != 'free':
        raise DomainError(f'Free-group approximants need a free backend, got {space.backend.name}')


def _difference(f: LipFn, fbar: Structured):
    if isinstance(f, Structured):
        return f - fbar
    return _Difference(f, fbar)


@dataclasses.dataclass(frozen=True)
class _Difference:
    left: Any
    right: Any

    def __call__(self, g):
        return self.left(g) - self.right(g)


def growth_vector(f: LipFn, space: GroupSpace, radius: Optional[Radius]) -> tuple[Fraction, ...]:
    """c(s, e) for every generator s."""
    return tuple(
        mean_growth(f, space, space.generator(s), radius=radius).c
        for s in range(space.rank)
    )


def free_approximant(f: LipFn, space: GroupSpace, radius: Radius) -> tuple[Structured, ApproximationReport]:
    """
    The homomorphism with generator values c(s, e), and its distance to f.

    The promised bound is delta/2, and no other homomorphism is closer.
    """
    _require_free(space)
    defect = delta_defect(f, space, radius)
    c = growth_vector(f, space, radius)
    fbar = Structured.homomorphism(c)
    logger.info('Free approximant with generator values %s', ', '.join(str(v) for v in c))
    report = _distance_report(
        'free', _difference(f, fbar), space, radius, defect, defect.delta_hat / 2,
        extras={'generator_values': c},
    )
    return fbar, report


def optimality_check(
    f: LipFn,
    fbar: Structured,
    candidates: Sequence[Structured],
    space: GroupSpace,
) -> bool:
    """True if no candidate homomorphism is closer to f than fbar."""
    if not isinstance(f, Structured) or not space.is_geodesic:
        raise ScopeError('Exact optimality comparison needs a Structured function on a geodesic backend')
    reference, _ = exact_lip_witness(f - fbar, space)
    for candidate in candidates:
        other, witness = exact_lip_witness(f - candidate, space)
        if other < reference:
            logger.error('Candidate %s beats the approximant: %s < %s', candidate.hom, other, reference)
            return False
    return True


def random_homomorphism(space: GroupSpace, rng: random.Random) -> Structured:
    return Structured.homomorphism([
        Fraction(rng.randint(-24, 24), rng.choice((1, 2, 3, 4, 8)))
        for _ in range(space.rank)
    ])


def adjusted_approximant(
    f: LipFn,
    space: GroupSpace,
    u: Sequence[Fraction],
    eta: Fraction,
    radius: Radius,
) -> tuple[Structured, ApproximationReport]:
    """
    The homomorphism with generator values u, allowed when each is within
    eta of c(s, e). The bound loosens to delta/2 + eta.
    """
    _require_free(space)
    u = tuple(Fraction(v) for v in u)
    eta = Fraction(eta)
    if len(u) != space.rank:
        raise DomainError(f'{len(u)} values for {space.rank} generators')
    c = growth_vector(f, space, radius)
    for index, (target, value) in enumerate(zip(c, u)):
        if abs(target - value) > eta:
            raise PreconditionError(
                f'Generator {space.generator_names[index]}: |{target} - {value}| exceeds eta={eta}'
            )
    defect = delta_defect(f, space, radius)
    fbar = Structured.homomorphism(u)
    report = _distance_report(
        'adjusted', _difference(f, fbar), space, radius, defect, defect.delta_hat / 2 + eta,
        extras={'generator_values': u, 'eta': eta},
    )
    return fbar, report


def round_to_denominator(values: Sequence[Fraction], denominator: int) -> tuple[Fraction, ...]:
    """Nearest multiples of 1/denominator, each within 1/(2 denominator)."""
    return tuple(Fraction(round(v * denominator), denominator) for v in values)


def lift_to_free(f: LipFn, presentation: Presentation, quotient: GroupSpace) -> Lifted:
    """F = f o q, a function on the free group over the same generators."""
    if quotient.rank != presentation.generator_count:
        raise DomainError(
            f'Quotient has {quotient.rank} generators, presentation has {presentation.generator_count}'
        )
    return Lifted(f, quotient)


def presented_approximant(
    f: LipFn,
    presentation: Presentation,
    quotient: GroupSpace,
    radius: Radius,
) -> tuple[Structured, ApproximationReport, dict[str, Fraction]]:
    """
    An invariant approximant on a finitely presented group.

    The generator values x = c(s, e) of the lifted function nearly satisfy
    the relators: |A x| <= C_R delta with C_R half the longest relator.
    Projecting x onto ker A in the sup norm gives values u that define a
    homomorphism on the quotient, within (1/2 + C_R D) delta of f where D
    is the measured ratio ||x - u|| / ||A x||.
    """
    lifted = lift_to_free(f, presentation, quotient)
    defect = delta_defect(f, quotient, radius)
    x = growth_vector(lifted, lifted.free_space, radius)
    relators = presentation.relators
    c_r = max((Fraction(len(r), 2) for r in relators), default=Fraction(0))
    if relators:
        matrix = RationalMatrix.from_exponent_matrix(exponent_matrix(presentation))
        residual = norm_inf(matrix.apply(x))
        if residual > c_r * defect.delta_hat:
            raise CertificationError(
                f'Relator residual {residual} exceeds C_R * delta = {c_r * defect.delta_hat}'
            )
        projection = linf_kernel_project(matrix, x)
        u, t = projection.u, projection.t
    else:
        residual = Fraction(0)
        u, t = x, Fraction(0)
    d_emp = t / residual if residual else Fraction(0)
    fbar = Structured.homomorphism(u)
    constants = {'C_R': c_r, 'D_emp': d_emp}
    logger.info('Presented approximant: C_R=%s D_emp=%s t=%s', c_r, d_emp, t)
    bound = (Fraction(1, 2) + c_r * d_emp) * defect.delta_hat
    report = _distance_report(
        'presented', _difference(f, fbar), quotient, radius, defect, bound,
        extras={
            'C_R': c_r,
            'D_emp': d_emp,
            'generator_values': x,
            'projected_values': u,
            'relator_residual': residual,
            'projection_distance': t,
            'well_defined': well_defined(fbar, presentation, quotient, min(Fraction(radius), 2)),
        },
    )
    if not report.extras['well_defined']:
        report = dataclasses.replace(report, passed=False)
    return fbar, report, constants


def well_defined(fbar: Structured, presentation: Presentation, quotient: GroupSpace, radius: Radius) -> bool:
    """
    Check fbar takes one value on all free words naming the same element.

    Free words are grouped by their normal form in quotient, so the check
    rests on the quotient's word problem and not on the relator list. The
    free ball reaches at least half the longest relator: a relator
    r = u v^-1 puts u and v in the same group.
    """
    longest = max((len(relator) for relator in presentation.relators), default=0)
    free = GroupSpace.free(quotient.generator_names)
    first_seen = {}
    for w in free.ball(max(Fraction(radius), (longest + 1) // 2)):
        value = fbar.hom_value(w)
        v, seen = first_seen.setdefault(quotient.normal_form(w), (w, value))
        if seen != value:
            logger.error(
                'Homomorphism is %s on %s but %s on %s in the same element of %s',
                value, free.format(w), seen, free.format(v), quotient,
            )
            return False
    return True


@dataclasses.dataclass(frozen=True, eq=False)
class FiniteActionSpace:
    """
    A finite pointed metric space with a finite group acting on it.

    Points are indices 0..n-1, with 0 the basepoint; labels are only for
    display. Each generator of the group acts by a permutation of the
    indices, and an element acts through its normal-form word, rightmost
    letter first.

    Parameters
    ----------
    labels : tuple
        Display labels of the points.
    dist : tuple of tuple of Fraction
        The distance matrix.
    group : GroupSpace
        A finite group.
    generator_actions : tuple of tuple of int
        One permutation of the point indices per generator.
    domain : tuple of int
        The fundamental domain D, containing 0.
    alpha : Fraction
        Constant with d(x, y) <= alpha d(Gx, Gy) on D.
    """
    labels: tuple
    dist: tuple[tuple[Fraction, ...], ...]
    group: GroupSpace
    generator_actions: tuple[tuple[int, ...], ...]
    domain: tuple[int, ...]
    alpha: Fraction = Fraction(1)
    pseudometric: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'dist', tuple(tuple(Fraction(v) for v in row) for row in self.dist))
        object.__setattr__(self, 'alpha', Fraction(self.alpha))
        if len(self.generator_actions) != self.group.rank:
            raise DomainError(
                f'{len(self.generator_actions)} generator actions for {self.group.rank} generators'
            )

    @property
    def points(self) -> range:
        return range(len(self.labels))

    @functools.cached_property
    def _inverse_actions(self) -> tuple[tuple[int, ...], ...]:
        inverses = []
        for perm in self.generator_actions:
            inverse = [0] * len(perm)
            for point, image in enumerate(perm):
                inverse[image] = point
            inverses.append(tuple(inverse))
        return tuple(inverses)

    def act(self, g: Word, x: int) -> int:
        for index, sign in reversed(self.group.normal_form(g).letters):
            perm = self.generator_actions[index] if sign > 0 else self._inverse_actions[index]
            x = perm[x]
        return x

    def distance(self, x: int, y: int) -> Fraction:
        return self.dist[x][y]

    def orbit(self, x: int) -> frozenset[int]:
        return frozenset(self.act(g, x) for g in self.group.elements())

    def orbit_distance(self, x: int, y: int) -> Fraction:
        return min(self.dist[x][gy] for gy in self.orbit(y))

    @functools.cached_property
    def representative(self) -> dict[int, int]:
        """Each point's unique D-point in its orbit."""
        rep = {}
        for x in self.domain:
            for y in self.orbit(x):
                rep.setdefault(y, x)
        return rep

    def validate(self) -> list[str]:
        """Names of every violated axiom, empty when the instance is sound."""
        failed = []
        size = len(self.labels)
        dist = self.dist
        if len(dist) != size or any(len(row) != size for row in dist):
            return ['metric: distance matrix shape']
        if any(dist[i][i] != 0 for i in range(size)) or any(
            dist[i][j] != dist[j][i] or dist[i][j] <= 0
            for i in range(size) for j in range(size) if i != j
        ):
            failed.append('metric: symmetry, zero diagonal or positivity')
        elif any(
            dist[i][k] > dist[i][j] + dist[j][k]
            for i in range(size) for j in range(size) for k in range(size)
        ):
            failed.append('metric: triangle inequality')
        for index, perm in enumerate(self.generator_actions):
            if sorted(perm) != list(range(size)):
                failed.append(f'action: generator {self.group.generator_names[index]} is not a permutation')
                return failed
            if any(dist[perm[i]][perm[j]] != dist[i][j] for i in range(size) for j in range(size)):
                failed.append(f'isometry: generator {self.group.generator_names[index]}')
        for g in self.group.elements():
            for t in self.group.letters():
                gt = self.group.multiply(g, t)
                if any(self.act(gt, x) != self.act(g, self.act(t, x)) for x in self.points):
                    failed.append(f'homomorphism: {self.group.format(g)} * {self.group.format(t)}')
                    break
            else:
                continue
            break
        if 0 not in self.domain:
            failed.append('domain: basepoint missing')
        seen: set[int] = set()
        for x in self.domain:
            orbit = self.orbit(x)
            if seen & orbit:
                failed.append(f'domain: orbit of {self.labels[x]} meets another domain orbit')
            seen |= orbit
        if seen != set(self.points):
            failed.append('domain: orbits do not cover the space')
        if self.alpha < 1:
            failed.append('alpha: must be at least 1')
        for i, x in enumerate(self.domain):
            for y in self.domain[i + 1:]:
                if dist[x][y] > self.alpha * self.orbit_distance(x, y):
                    failed.append(f'alpha: d({self.labels[x]}, {self.labels[y]}) exceeds alpha times orbit distance')
        return failed

    def ensure_valid(self) -> None:
        failed = self.validate()
        if failed:
            raise ValidationError(failed)

    @classmethod
    def flip_ladder(cls, rungs: int = 4) -> FiniteActionSpace:
        """
        Points (i, side) for i < rungs, d = |i - j| + [side differs], with Z_2
        swapping the sides. D is side 0 and alpha is 1.
        """
        labels = tuple((i, side) for i in range(rungs) for side in (0, 1))
        dist = tuple(
            tuple(Fraction(abs(i - j) + (a != b)) for j, b in labels)
            for i, a in labels
        )
        flip = tuple(labels.index((i, 1 - side)) for i, side in labels)
        return cls(
            labels=labels,
            dist=dist,
            group=GroupSpace.cyclic(2),
            generator_actions=(flip,),
            domain=tuple(labels.index((i, 0)) for i in range(rungs)),
            alpha=Fraction(1),
        )


def action_defect(f, fa: FiniteActionSpace) -> tuple[Fraction, Optional[tuple]]:
    return translation_defect(f, fa.group.elements().words, list(fa.points), fa.act, fa.distance)


def random_action_function(fa: FiniteActionSpace, seed: int) -> Tabulated:
    rng = random.Random(seed)
    values = {x: Fraction(rng.randint(-20, 20), rng.choice((1, 2, 3, 4))) for x in fa.points}
    values[0] = Fraction(0)
    return Tabulated(values, 0)


def orbit_collapse_approximant(fa: FiniteActionSpace, f: Tabulated) -> tuple[Tabulated, ApproximationReport]:
    """
    fbar(y) = f(x) for y in the orbit of x in D.

    fbar is invariant, within (2 alpha + 1) delta of f, and has Lipschitz
    number at most alpha times that of f.
    """
    fa.ensure_valid()
    delta_hat, defect_witness = action_defect(f, fa)
    fbar = Tabulated({y: f(x) for y, x in fa.representative.items()}, 0)
    achieved, witness = lip_norm_witness(f - fbar, fa.points, fa)
    bar_defect, _ = action_defect(fbar, fa)
    invariant = bar_defect == 0 and all(
        fbar(fa.act(fa.group.generator(s), 0)) == 0 for s in range(fa.group.rank)
    )
    norm_f, _ = lip_norm_witness(f, fa.points, fa)
    norm_bar, _ = lip_norm_witness(fbar, fa.points, fa)
    bound = (2 * fa.alpha + 1) * delta_hat
    passed = achieved <= bound and invariant and norm_bar <= fa.alpha * norm_f
    if not passed:
        logger.error('Orbit collapse failed: achieved %s, bound %s, invariant %s', achieved, bound, invariant)
    report = ApproximationReport(
        kind='orbit',
        delta_hat=delta_hat,
        bound=bound,
        achieved_ball=achieved,
        achieved_exact=achieved,
        radius=None,
        passed=passed,
        scope=EXACT,
        witness=witness,
        defect_witness=defect_witness,
        extras={
            'alpha': fa.alpha,
            'invariant': invariant,
            'lip_f': norm_f,
            'lip_fbar': norm_bar,
        },
    )
    return fbar, report


def shrink_norm_check(space: GroupSpace, f: LipFn, delta: Fraction) -> bool:
    """
    On a finite group a delta-invariant function has norm at most delta.

    A False result means a defect computation went wrong somewhere.
    """
    if not space.is_finite:
        raise ScopeError(f'{space} is infinite, only finite groups are covered')
    defect = delta_defect(f, space)
    if defect.delta_hat > Fraction(delta):
        raise PreconditionError(f'Function has defect {defect.delta_hat} > {delta}')
    norm, witness = lip_norm_witness(f, space.elements(), space)
    if norm > Fraction(delta):
        logger.error('Norm %s exceeds delta %s at %s', norm, delta, witness)
        return False
    return True


def _element_order(space: GroupSpace, h: Word) -> Optional[int]:
    if not space.is_finite:
        return None
    power = h
    for k in range(1, (space.order() or 0) + 1):
        if power == space.identity:
            return k
        power = space.multiply(power, h)
    raise DomainError(f'{h} has no finite order in {space}')


def restrict_to_orbit(
    f: LipFn,
    space: GroupSpace,
    g: Word,
    y: Word,
    h: Word,
    radius: Radius = 4,
) -> tuple[Tabulated, GroupSpace]:
    """
    Restrict f to the orbit of y under the cyclic group generated by h.

    f'(h^k) = f(g h^k y) - f(g y) on H = <h>, with the pseudometric
    d'(h^k, h^j) = d(h^k y, h^j y). Finite H is tabulated in full,
    infinite H on exponents of d' at most radius.
    """
    g, y, h = space.normal_form(g), space.normal_form(y), space.normal_form(h)
    order = _element_order(space, h)

    def orbit_point(k: int) -> Word:
        return space.multiply(space.power(h, k), y)

    def normal_form(w: Word) -> Word:
        k = sum(sign for _, sign in w.letters)
        if order is not None:
            k %= order
        return Word(((0, 1 if k > 0 else -1),) * abs(k), 1)

    def length(w: Word) -> Fraction:
        return space.distance(orbit_point(_exponent(w)), y)

    cyclic = GroupSpace(
        OracleBackend(1, normal_form, length, pseudometric=True, order=order),
        ('h',),
    )
    base = space.multiply(g, y)
    points = cyclic.elements() if order is not None else cyclic.ball(radius)
    restricted = Tabulated(
        {
            w: f(space.multiply(g, orbit_point(_exponent(w)))) - f(base)
            for w in points
        },
        cyclic.identity,
    )
    return restricted, cyclic


def _exponent(w: Word) -> int:
    return sum(sign for _, sign in w.letters)
