"""
Command-line tool to re-evaluate the witnesses stored in a report.

Every supremum in a report comes with the points attaining it. This
recomputes the quotient at those points from the instance alone and
compares it with the stored value, exactly.
"""
from __future__ import annotations

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Optional

from prettytable import PrettyTable

from ..exceptions import InstanceError, InvlipError
from ..groups import GroupSpace
from ..instances import Instance, load_instance
from ..lipschitz import defect_at
from ..words import Word
from .approx_tools import approximate
from .run_config import RunConfig

logger = logging.getLogger(__name__)

Check = tuple[str, str, str, bool]


def _word(data: Any, space: GroupSpace, field: str) -> Word:
    try:
        return space.normal_form(Word.from_json(data, space.rank))
    except (InvlipError, TypeError, ValueError) as exc:
        raise InstanceError(f'not a word: {data!r}', field) from exc


def _compare(name: str, stored: Any, recompute: Callable[[], Fraction]) -> Check:
    expected = Fraction(stored)
    value = recompute()
    return name, str(expected), str(value), value == expected


def _group_witnesses(f, space: GroupSpace, fbar, report: dict) -> list[Check]:
    checks = []
    witness = report.get('witness')
    if witness is not None:
        x, y = (_word(w, space, 'witness') for w in witness)

        def achieved() -> Fraction:
            gap = (f(x) - fbar(x)) - (f(y) - fbar(y))
            return abs(gap) / space.distance(x, y)
        checks.append(_compare('||f - fbar||', report['achieved'], achieved))
    checks.extend(_defect_witness(f, space, report.get('defect_witness'), report['delta_hat']))
    return checks


def _defect_witness(f, space: GroupSpace, witness: Optional[list], stored: Any) -> list[Check]:
    if witness is None:
        return []
    g, x, y = (_word(w, space, 'defect_witness') for w in witness)
    return [_compare('delta_hat', stored, lambda: defect_at(f, space, g, x, y))]


def _orbit_witnesses(instance: Instance, fbar, report: dict) -> list[Check]:
    fa = instance.action
    f = instance.function
    checks = []
    if report.get('witness') is not None:
        x, y = report['witness']
        checks.append(_compare(
            '||f - fbar||', report['achieved'],
            lambda: abs((f(x) - fbar(x)) - (f(y) - fbar(y))) / fa.distance(x, y),
        ))
    if report.get('defect_witness') is not None:
        g_data, x, y = report['defect_witness']
        g = _word(g_data, fa.group, 'defect_witness')

        def defect() -> Fraction:
            gap = (f(fa.act(g, x)) - f(x)) - (f(fa.act(g, y)) - f(y))
            return abs(gap) / fa.distance(x, y)
        checks.append(_compare('delta_hat', report['delta_hat'], defect))
    return checks


def check_approximation(instance: Instance, report: dict) -> list[Check]:
    """Rebuild the approximant the report describes and evaluate its witnesses."""
    seed = report.get('seed')
    if seed is not None:
        instance = instance.reseeded(seed)
    kind = report['kind']
    extras = report.get('extras') or {}
    values = extras.get('generator_values') if kind == 'adjusted' else None
    radius = int(Fraction(report['radius'])) if report.get('radius') is not None else 1
    fbar, rebuilt = approximate(
        instance, kind, radius,
        values=None if values is None else [Fraction(v) for v in values],
        eta=Fraction(extras.get('eta', 0)),
    )
    checks = [('achieved (rebuilt)', report['achieved'], str(rebuilt.achieved),
               str(rebuilt.achieved) == report['achieved'])]
    if kind == 'orbit':
        return checks + _orbit_witnesses(instance, fbar, report)
    return checks + _group_witnesses(instance.function, instance.group, fbar, report)


def check_mean_growth(instance: Instance, report: dict) -> list[Check]:
    space = instance.group
    f = instance.function
    s = _word(report['direction'], space, 'direction')
    x = _word(report['base'], space, 'base')

    def growth(g: Word) -> Fraction:
        return f(space.multiply(g, s, x)) - f(space.multiply(g, x))
    checks = []
    for side in ('plus', 'minus'):
        if report.get(f'witness_{side}') is not None:
            g = _word(report[f'witness_{side}'], space, f'witness_{side}')
            checks.append(_compare(f'c_{side}', report[f'c_{side}'], lambda g=g: growth(g)))
    defect = report.get('defect')
    if defect:
        checks.extend(_defect_witness(f, space, defect.get('witness'), defect['delta_hat']))
    return checks


def check_quasimorphism(instance: Instance, report: dict) -> list[Check]:
    space = instance.group
    f = instance.function

    def pair(field: str) -> tuple[Word, Word]:
        g, h = (_word(w, space, field) for w in report[field])
        return g, h

    def gap(g: Word, h: Word) -> Fraction:
        return abs(f(space.multiply(g, h)) - f(g) - f(h))
    checks = []
    if report.get('defect_witness') is not None:
        g, h = pair('defect_witness')
        checks.append(_compare('D', report['defect_D'], lambda: gap(g, h)))
    if report.get('partial_witness') is not None:
        g2, h2 = pair('partial_witness')
        checks.append(_compare(
            'partial D', report['partial_D'],
            lambda: gap(g2, h2) / min(space.length(g2), space.length(h2)),
        ))
    checks.extend(_defect_witness(f, space, report.get('left_witness'), report['left_defect']))
    if report.get('right_witness') is not None:
        g3, x, y = (_word(w, space, 'right_witness') for w in report['right_witness'])
        g3_inv = space.invert(g3)

        def right() -> Fraction:
            moved = (f(space.multiply(x, g3_inv)) - f(x)) - (f(space.multiply(y, g3_inv)) - f(y))
            return abs(moved) / space.distance(x, y)
        checks.append(_compare('right defect', report['right_defect'], right))
    return checks


def _check(report_path: Path, instance_path: Path) -> list[Check]:
    """
    Re-evaluate every witness in a report.

    Parameters
    ----------
    report_path : Path
        A report from approx, mean-growth or qm.
    instance_path : Path
        The instance the report was computed from.

    Returns
    -------
    checks : list of (name, stored, recomputed, ok)
    """
    try:
        with open(report_path) as fd:
            report = json.load(fd)
    except json.JSONDecodeError as exc:
        raise InstanceError(
            f'invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}', str(report_path),
        ) from exc
    instance = load_instance(instance_path)
    if instance.function is None:
        raise InstanceError('missing', 'function')
    if 'kind' in report:
        return check_approximation(instance, report)
    if 'c_plus' in report:
        return check_mean_growth(instance, report)
    if 'partial_D' in report:
        return check_quasimorphism(instance, report)
    raise InstanceError('not an approx, mean-growth or qm report', str(report_path))


def run_check(config: RunConfig) -> int:
    checks = _check(config.report_path, config.instance_path)
    table = PrettyTable()
    table.field_names = ['Value', 'Stored', 'Recomputed', 'Match']
    for name, stored, value, ok in checks:
        table.add_row([name, stored, value, 'Yes' if ok else 'No'])
        if not ok:
            logger.error('%s: stored %s, recomputed %s', name, stored, value)
    print(table.get_string())
    return 0 if checks and all(ok for *_, ok in checks) else 1
