"""
Module for quasimorphism defects of functions on groups.

A quasimorphism has |f(gh) - f(g) - f(h)| bounded; a partial quasimorphism
has it bounded by D min(d(g, e), d(h, e)). The comparison with invariance
assumes a metric that is both left and right invariant. Word metrics on
abelian groups are, word metrics on nonabelian free groups are not, so
the metric is checked on the ball first.
"""
from __future__ import annotations

import dataclasses
import logging
from fractions import Fraction
from typing import Optional

from .exceptions import BiInvarianceError, CertificationError, DomainError
from .groups import EXACT, GroupSpace, Radius, Scope
from .lipschitz import (LipFn, Structured, exact_lip_norm, lip_norm,
                        translation_defect)

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class QmReport:
    defect_D: Fraction
    partial_D: Fraction
    left_defect: Fraction
    right_defect: Fraction
    scope: Scope
    bi_invariant: bool
    defect_witness: Optional[tuple] = None
    partial_witness: Optional[tuple] = None
    left_witness: Optional[tuple] = None
    right_witness: Optional[tuple] = None

    @property
    def two_sided_defect(self) -> Fraction:
        return max(self.left_defect, self.right_defect)


@dataclasses.dataclass(frozen=True)
class PqmCheck:
    """
    Truth values of the three statements for one delta.

    i:   f is a delta/2 partial quasimorphism (pairs from the doubled ball)
    ii:  both translation defects are at most delta
    iii: f is a delta partial quasimorphism

    i_covers_products is False when (i) was scanned on a ball smaller than
    the doubled one, in which case (i) => (ii) is not expected to hold.
    """
    i: bool
    ii: bool
    iii: bool
    ii_left: bool
    bi_invariant: bool
    report: QmReport
    i_covers_products: bool = True

    def as_tuple(self) -> tuple[bool, bool, bool]:
        return self.i, self.ii, self.iii

    @property
    def consistent(self) -> bool:
        # without right invariance only the left half of (ii) follows from (i)
        middle = self.ii if self.bi_invariant else self.ii_left
        if self.i_covers_products and self.i and not middle:
            return False
        return not (self.ii and not self.iii)


def _points(space: GroupSpace, radius: Radius) -> tuple[list, Scope]:
    if space.is_finite:
        ball = space.elements()
        if Fraction(radius) >= ball.radius:
            return list(ball.words), EXACT
    return list(space.ball(radius).words), Scope(Fraction(radius))


def bi_invariance_witness(space: GroupSpace, points: list) -> Optional[tuple]:
    """A triple (g, h, k) with d(gk, hk) != d(g, h), or None."""
    for z in points:
        size = space.length(z)
        for k in points:
            if space.length(space.multiply(space.invert(k), z, k)) != size:
                return (z, space.identity, k)
    return None


def pair_defects(f: LipFn, space: GroupSpace, points: list) -> tuple[Fraction, Fraction, tuple, tuple]:
    """
    Scan |f(gh) - f(g) - f(h)| over pairs of points.

    Returns the plain maximum, the maximum after dividing by
    min(d(g, e), d(h, e)), and a witness pair for each.
    """
    lengths = {g: space.length(g) for g in points}
    values = {g: f(g) for g in points}
    plain = Fraction(0)
    partial = Fraction(0)
    plain_witness = partial_witness = None
    for g in points:
        for h in points:
            gap = abs(f(space.multiply(g, h)) - values[g] - values[h])
            if plain_witness is None or gap > plain:
                plain, plain_witness = gap, (g, h)
            scale = min(lengths[g], lengths[h])
            if scale == 0:
                continue
            ratio = gap / scale
            if partial_witness is None or ratio > partial:
                partial, partial_witness = ratio, (g, h)
    return plain, partial, plain_witness, partial_witness


def qm_defects(f: LipFn, space: GroupSpace, radius: Radius, strict: bool = True) -> QmReport:
    """
    Quasimorphism, partial quasimorphism and translation defects on ball(radius).

    Parameters
    ----------
    f : LipFn
        The function.
    space : GroupSpace
        The group.
    radius : int or Fraction
        Scan radius.
    strict : bool, optional
        Raise BiInvarianceError when the metric is not right invariant on
        the ball. Otherwise the report is marked bi_invariant=False.
    """
    logger.debug('qm_defects(%s, %s, %s)', type(f).__name__, space, radius)
    points, scope = _points(space, radius)
    witness = bi_invariance_witness(space, points)
    if witness is not None:
        g, h, k = witness
        message = (
            f'Metric on {space} is not bi-invariant: '
            f'd({space.format(g)} * {space.format(k)}, {space.format(h)} * {space.format(k)}) '
            f'!= d({space.format(g)}, {space.format(h)})'
        )
        if strict:
            raise BiInvarianceError(message, witness)
        logger.warning(message)
    plain, partial, plain_witness, partial_witness = pair_defects(f, space, points)
    left, left_witness = translation_defect(f, points, points, space.multiply, space.distance)
    right, right_witness = translation_defect(
        f, points, points,
        lambda g, x: space.multiply(x, space.invert(g)),
        space.distance,
    )
    return QmReport(
        defect_D=plain,
        partial_D=partial,
        left_defect=left,
        right_defect=right,
        scope=scope,
        bi_invariant=witness is None,
        defect_witness=plain_witness,
        partial_witness=partial_witness,
        left_witness=left_witness,
        right_witness=right_witness,
    )


def check_pqm_implications(
    f: LipFn,
    space: GroupSpace,
    delta: Fraction,
    radius: Radius,
    strict: bool = True,
    doubled_radius: Optional[Radius] = None,
) -> PqmCheck:
    """
    Evaluate the partial quasimorphism statements at delta on ball(radius).

    Statement (i) is checked on ball(2 radius) since it gets applied to
    products of two ball elements, which makes (i) => (ii) an exact
    implication on the scanned scope. A smaller doubled_radius bounds
    that scan; (i) => (ii) is then reported but not enforced.
    """
    report = qm_defects(f, space, radius, strict=strict)
    doubled, covers = doubled_partial_defect(f, space, radius, doubled_radius)
    return pqm_statements(report, doubled, delta, covers_products=covers)


def doubled_partial_defect(
    f: LipFn,
    space: GroupSpace,
    radius: Radius,
    doubled_radius: Optional[Radius] = None,
) -> tuple[Fraction, bool]:
    """
    The partial quasimorphism defect over pairs from the doubled ball.

    Parameters
    ----------
    f : LipFn
        The function.
    space : GroupSpace
        The group.
    radius : int or Fraction
        Radius of the ball the translation defects were taken on.
    doubled_radius : int or Fraction, optional
        Radius of the pair scan. Defaults to 2 radius and may not be
        below radius.

    Returns
    -------
    defect, covers_products : Fraction, bool
        The defect, and whether the scan reached every product of two
        elements of ball(radius).
    """
    radius = Fraction(radius)
    limit = 2 * radius if doubled_radius is None else Fraction(doubled_radius)
    if limit < radius:
        raise DomainError(f'Doubled radius {limit} is below the scan radius {radius}')
    doubled, scope = _points(space, limit)
    return pair_defects(f, space, doubled)[1], scope.exact or limit >= 2 * radius


def pqm_statements(
    report: QmReport,
    doubled_partial: Fraction,
    delta: Fraction,
    covers_products: bool = True,
) -> PqmCheck:
    """Evaluate the three statements at delta from already computed defects."""
    delta = Fraction(delta)
    check = PqmCheck(
        i=doubled_partial <= delta / 2,
        ii=report.two_sided_defect <= delta,
        iii=report.partial_D <= delta,
        ii_left=report.left_defect <= delta,
        bi_invariant=report.bi_invariant,
        report=report,
        i_covers_products=covers_products,
    )
    if not check.consistent:
        logger.error('Implication violated at delta=%s: %s', delta, check.as_tuple())
    return check


def pqm_constant_from_lipschitz(
    f: LipFn,
    space: GroupSpace,
    A: Fraction,
    radius: Radius,
    strict: bool = True,
) -> Fraction:
    """
    The partial quasimorphism constant 2 L(f) + |f(e)| / A of a Lipschitz f.

    A is a lower bound for d(g, e) over g != e. The constant is checked
    against the scanned pairs, with min(d(g, e), d(h, e)) as the scale on
    bi-invariant metrics and d(h, e) otherwise. f need not vanish at e.

    L(f) is the exact global constant for Structured f on geodesic
    backends and the norm over ball(2 radius) otherwise.
    """
    A = Fraction(A)
    if A <= 0:
        raise DomainError(f'Discreteness bound must be positive, got {A}')
    points, _ = _points(space, radius)
    for g in points:
        if g != space.identity and space.length(g) < A:
            raise DomainError(f'd({space.format(g)}, e) = {space.length(g)} is below A = {A}')
    if isinstance(f, Structured) and space.is_geodesic:
        lip = exact_lip_norm(f, space)
    else:
        doubled, _ = _points(space, 2 * Fraction(radius))
        lip = lip_norm(f, doubled, space)
    at_e = abs(f(space.identity))
    constant = 2 * lip + at_e / A
    for s in space.letters():
        if abs(f(s)) > lip * space.length(s) + at_e:
            raise CertificationError(f'|f({space.format(s)})| = {abs(f(s))} exceeds L(f) d(s, e) + |f(e)|')
    bi_invariant = bi_invariance_witness(space, points) is None
    if strict and not bi_invariant:
        raise BiInvarianceError(f'Metric on {space} is not bi-invariant', None)
    for g in points:
        for h in points:
            scale = space.length(h)
            if bi_invariant:
                scale = min(scale, space.length(g))
            if scale == 0:
                continue
            gap = abs(f(space.multiply(g, h)) - f(g) - f(h))
            if gap > constant * scale:
                raise CertificationError(
                    f'Pair ({space.format(g)}, {space.format(h)}) has defect {gap} '
                    f'above {constant} * {scale}'
                )
    return constant
