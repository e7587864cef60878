"""
Command-line tools for mean growth and quasimorphism defects.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from pathlib import Path
from typing import Optional

from prettytable import PrettyTable

from ..exceptions import InstanceError, InvlipError
from ..instances import load_instance
from ..lipschitz import delta_defect
from ..mean_growth import MeanGrowth, mean_growth
from ..quasimorphism import PqmCheck, check_pqm_implications, qm_defects
from ..reports import (defect_report_to_dict, mean_growth_to_dict,
                       pqm_check_to_dict, write_json)
from .run_config import RunConfig

logger = logging.getLogger(__name__)


def _mean_growth(instance_path: Path, direction: str, base: str, radius: int) -> tuple[MeanGrowth, dict]:
    """
    Compute c+, c- and c for f along direction from base.

    Parameters
    ----------
    instance_path : Path
        The instance file, which must hold a function on the group.
    direction : str
        The direction s as a word in the generator names.
    base : str
        The base point x as a word.
    radius : int
        Scan radius where the constants cannot be computed exactly.
    """
    instance = load_instance(instance_path)
    if instance.function is None or instance.action is not None:
        raise InstanceError('mean growth needs a function on the group', 'function')
    space = instance.group
    try:
        s = space.normal_form(space.parse(direction))
        x = space.normal_form(space.parse(base))
    except InvlipError as exc:
        raise InstanceError(str(exc), '--direction') from exc
    mg = mean_growth(instance.function, space, s, x, radius=radius)
    data = mean_growth_to_dict(mg, space)
    data['defect'] = defect_report_to_dict(delta_defect(instance.function, space, radius), space)
    return mg, data


def run_mean_growth(config: RunConfig) -> int:
    mg, data = _mean_growth(config.instance_path, config.direction, config.base, config.radius)
    write_json(data, config.out_path)
    if config.table:
        table = PrettyTable()
        table.field_names = ['c+', 'c-', 'c', 'Gap', 'Scope']
        table.add_row([mg.c_plus, mg.c_minus, mg.c, mg.gap, mg.scope])
        print(table.get_string())
    return 0


def _qm(instance_path: Path, radius: int, delta: Optional[Fraction], strict: bool) -> PqmCheck:
    """
    Check the partial quasimorphism statements for an instance.

    Parameters
    ----------
    instance_path : Path
        The instance file.
    radius : int
        Radius of the scanned ball.
    delta : Fraction, optional
        The delta to evaluate the statements at. Defaults to the instance
        delta, then to the measured two-sided translation defect.
    strict : bool
        Refuse metrics that are not right invariant.
    """
    instance = load_instance(instance_path)
    if instance.function is None or instance.action is not None:
        raise InstanceError('quasimorphism defects need a function on the group', 'function')
    if delta is None:
        delta = instance.delta
    if delta is None:
        delta = qm_defects(instance.function, instance.group, radius, strict=strict).two_sided_defect
        logger.info('Using the measured defect delta=%s', delta)
    return check_pqm_implications(instance.function, instance.group, delta, radius, strict=strict)


def run_qm(config: RunConfig) -> int:
    check = _qm(config.instance_path, config.radius, config.delta, config.strict)
    space = load_instance(config.instance_path).group
    write_json(pqm_check_to_dict(check, space), config.out_path)
    if config.table:
        table = PrettyTable()
        table.field_names = ['D', 'Partial D', 'Left', 'Right', 'i', 'ii', 'iii', 'Consistent']
        report = check.report
        table.add_row([
            report.defect_D,
            report.partial_D,
            report.left_defect,
            report.right_defect,
            *('Yes' if value else 'No' for value in (*check.as_tuple(), check.consistent)),
        ])
        print(table.get_string())
    return 0 if check.consistent else 1
