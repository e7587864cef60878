"""
Command-line tools to build invariant approximants from instance files.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from ..approximants import (ApproximationReport, adjusted_approximant,
                            free_approximant, orbit_collapse_approximant,
                            presented_approximant)
from ..exceptions import InstanceError
from ..instances import Instance, load_instance
from ..reports import (approximation_report_to_dict, emit_curve,
                       summarize_reports, write_json)
from ..suite import sweep
from ..words import Presentation
from .run_config import RunConfig

logger = logging.getLogger(__name__)


def approximate(
    instance: Instance,
    kind: str,
    radius: int,
    values: Optional[Sequence[Fraction]] = None,
    eta: Fraction = Fraction(0),
) -> tuple[Any, ApproximationReport]:
    """
    Build the approximant of the given kind for an instance.

    Parameters
    ----------
    instance : Instance
        A loaded instance with a function.
    kind : str
        One of free, adjusted, presented, orbit.
    radius : int
        Scan radius where results are not exact.
    values : sequence of Fraction, optional
        Generator values for the adjusted approximant.
    eta : Fraction, optional
        Allowed distance of values from the mean growth constants.

    Returns
    -------
    fbar : Structured or Tabulated
        The invariant approximant.
    report : ApproximationReport
    """
    if instance.function is None:
        raise InstanceError('missing', 'function')
    if kind == 'orbit':
        if instance.action is None:
            raise InstanceError('the orbit approximant needs an action', 'action')
        return orbit_collapse_approximant(instance.action, instance.function)
    space = instance.group
    if kind == 'free':
        fbar, report = free_approximant(instance.function, space, radius)
    elif kind == 'adjusted':
        if values is None:
            raise InstanceError('the adjusted approximant needs generator values', '--values')
        fbar, report = adjusted_approximant(instance.function, space, values, eta, radius)
    elif kind == 'presented':
        presentation = space.presentation or Presentation(space.generator_names, ())
        fbar, report, _ = presented_approximant(instance.function, presentation, space, radius)
    else:
        raise InstanceError(f'unknown approximant {kind!r}', 'kind')
    return fbar, report


def _seed_of(instance: Instance) -> Optional[int]:
    if instance.is_random:
        return int(instance.function_data.get('seed', 0))
    return None


def approx_case(args: tuple) -> tuple[ApproximationReport, dict]:
    """One seed of a sweep, from picklable arguments."""
    path, kind, radius, seed, values, eta = args
    instance = load_instance(path)
    if seed is not None:
        instance = instance.reseeded(seed)
    else:
        seed = _seed_of(instance)
    _, report = approximate(instance, kind, radius, values, eta)
    if seed is not None:
        report = report.with_seed(seed)
    space = None if kind == 'orbit' else instance.group
    return report, approximation_report_to_dict(report, space)


def _approx(
    instance_path: Path,
    kind: str,
    radius: int,
    seeds: Optional[Sequence[int]] = None,
    values: Optional[Sequence[Fraction]] = None,
    eta: Fraction = Fraction(0),
) -> list[tuple[ApproximationReport, dict]]:
    """
    Run one approximant per seed.

    Parameters
    ----------
    instance_path : Path
        The instance file.
    kind : str
        One of free, adjusted, presented, orbit.
    radius : int
        Scan radius.
    seeds : sequence of int, optional
        Seeds to redraw a random function with. A single run otherwise.
    values, eta : optional
        Passed to the adjusted approximant.
    """
    if seeds and len(seeds) > 1 and not load_instance(instance_path).is_random:
        raise InstanceError('only instances with a random function can be swept', '--seeds')
    args = [
        (instance_path, kind, radius, seed, values, eta)
        for seed in (seeds or [None])
    ]
    return sweep(approx_case, args)


def run_approx(config: RunConfig) -> int:
    kind = config.command.partition('-')[2]
    if config.instance_path is None:
        raise InstanceError('missing', '--instance')
    results = _approx(
        config.instance_path,
        kind,
        config.radius,
        seeds=config.seeds,
        values=config.values,
        eta=config.eta,
    )
    reports = [report for report, _ in results]
    data = [data for _, data in results]
    if len(data) == 1:
        write_json(data[0], config.out_path)
    else:
        write_json({'reports': data}, config.out_path)
    if config.csv_path is not None:
        emit_curve(reports, config.csv_path)
    if config.table:
        print(summarize_reports(reports))
    failed = [report for report in reports if not report.passed]
    for report in failed:
        logger.error(
            'Seed %s: achieved %s exceeds bound %s, witness %s',
            report.seed, report.achieved, report.bound, report.witness,
        )
    return 1 if failed else 0
