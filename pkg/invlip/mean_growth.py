"""
Module for the mean growth of a function along a direction.

For a direction s and base point x,
    c_plus  = sup_g f(gsx) - f(gx)
    c_minus = inf_g f(gsx) - f(gx)
    c       = (c_plus + c_minus) / 2
"""
from __future__ import annotations

import dataclasses
import logging
from fractions import Fraction
from typing import Iterable, Optional

from .exceptions import ScopeError
from .groups import EXACT, GroupSpace, Radius, Scope
from .lipschitz import LipFn, Lifted, Structured

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class MeanGrowth:
    direction: object
    base: object
    c_plus: Fraction
    c_minus: Fraction
    scope: Scope
    witness_plus: object = None
    witness_minus: object = None

    @property
    def c(self) -> Fraction:
        return (self.c_plus + self.c_minus) / 2

    @property
    def gap(self) -> Fraction:
        return self.c_plus - self.c_minus


def _extremes(f, space: GroupSpace, s, x, gs: Iterable) -> tuple:
    diffs = {}
    for g in gs:
        diffs[g] = f(space.multiply(g, s, x)) - f(space.multiply(g, x))
    high = max(diffs, key=lambda g: (diffs[g], _neg_key(g)))
    low = min(diffs, key=lambda g: (diffs[g], g.sort_key()))
    return diffs[high], diffs[low], high, low


def _neg_key(g):
    # ties go to the shortlex-smallest element for both extremes
    length, key = g.sort_key()
    return (-length, [(-a, -b) for a, b in key])


def mean_growth(
    f: LipFn,
    space: GroupSpace,
    s,
    x=None,
    radius: Optional[Radius] = None,
) -> MeanGrowth:
    """
    Compute c_plus, c_minus and c for f along s at x.

    Structured functions on geodesic backends are exact: f(gsx) - f(gx)
    differs from the homomorphism value of s only when gsx or gx lands
    on the perturbation support, so the candidates are those g plus one
    element far from everything. Finite groups are scanned in full, a
    Lifted function defers to its quotient, and the rest is scanned over
    ball(radius).

    Parameters
    ----------
    f : LipFn
        The function.
    space : GroupSpace
        The group f lives on.
    s : Word
        The direction.
    x : Word, optional
        The base point, e when omitted.
    radius : int or Fraction, optional
        Ball radius for the truncated scan.
    """
    logger.debug('mean_growth(%s, %s, %s, %s)', type(f).__name__, space, s, radius)
    s = space.normal_form(s)
    x = space.identity if x is None else space.normal_form(x)
    if isinstance(f, Lifted):
        quotient = f.quotient
        inner = mean_growth(
            f.base, quotient, quotient.normal_form(s), quotient.normal_form(x), radius,
        )
        return dataclasses.replace(inner, direction=s, base=x)
    if s == space.identity:
        zero = Fraction(0)
        return MeanGrowth(s, x, zero, zero, EXACT, space.identity, space.identity)
    if isinstance(f, Structured) and space.is_geodesic:
        x_inv = space.invert(x)
        s_inv = space.invert(s)
        beyond = f.support_radius(space) + space.length(s) + space.length(x) + 1
        gs = [space.far_element(beyond)]
        for y in f.perturbation:
            gs.append(space.multiply(y, x_inv, s_inv))
            gs.append(space.multiply(y, x_inv))
        scope = EXACT
    elif space.is_finite:
        gs = space.elements().words
        scope = EXACT
    else:
        if radius is None:
            raise ScopeError(f'mean_growth on {space} needs a radius')
        gs = space.ball(radius).words
        scope = Scope(Fraction(radius))
    c_plus, c_minus, high, low = _extremes(f, space, s, x, dict.fromkeys(gs))
    return MeanGrowth(s, x, c_plus, c_minus, scope, high, low)


def check_gap(mg: MeanGrowth, delta: Fraction, space: GroupSpace) -> bool:
    """c_plus - c_minus <= delta * d(sx, x)."""
    sx = space.multiply(mg.direction, mg.base)
    return mg.gap <= Fraction(delta) * space.distance(sx, mg.base)


def check_sandwich(
    mg: MeanGrowth,
    delta_hat: Fraction,
    space: GroupSpace,
    norm: Optional[Fraction] = None,
) -> bool:
    """
    c - (delta/2) d <= c_minus <= c <= c_plus <= c + (delta/2) d, d = d(sx, x).

    With the Lipschitz number of f also check |c_plus| <= (delta + ||f||) d.
    """
    dist = space.distance(space.multiply(mg.direction, mg.base), mg.base)
    slack = Fraction(delta_hat) / 2 * dist
    ok = mg.c - slack <= mg.c_minus <= mg.c <= mg.c_plus <= mg.c + slack
    if norm is not None:
        ok = ok and abs(mg.c_plus) <= (Fraction(delta_hat) + Fraction(norm)) * dist
    return ok


def gap_characterization(f: LipFn, space: GroupSpace, radius: Radius) -> Fraction:
    """
    max over s != e in ball(radius) of (c_plus(s, e) - c_minus(s, e)) / d(s, e).

    A function is delta-invariant exactly when this never exceeds delta, so
    on exact scopes it equals the defect. Letters alone attain the maximum
    on word metrics, so any radius >= 1 gives the global value there.
    """
    best = Fraction(0)
    for s, dist in space.ball(radius).elements:
        if dist == 0:
            continue
        mg = mean_growth(f, space, s, radius=radius)
        best = max(best, mg.gap / dist)
    return best
