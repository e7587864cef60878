"""
Module to serialize results.

This includes:
- to_jsonable and the *_to_dict helpers, which turn results into plain
  JSON data with every rational written as a "p/q" string
- dumps and write_json, deterministic JSON output
- emit_curve, the CSV of a seed sweep
- summarize_reports and summarize_suite, prettytable summaries
"""
from __future__ import annotations

import csv
import dataclasses
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

from prettytable import PrettyTable

from .approximants import ApproximationReport
from .exceptions import PreconditionError
from .groups import GroupSpace, Scope
from .kernel import KernelProjection
from .lipschitz import DefectReport
from .mean_growth import MeanGrowth
from .quasimorphism import PqmCheck, QmReport
from .words import Word

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ['seed', 'delta_hat', 'bound', 'achieved', 'pass']


def to_jsonable(value: Any) -> Any:
    """Recursively convert results to JSON-compatible data."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return value
    if isinstance(value, Word):
        return value.to_json()
    if isinstance(value, Scope):
        return str(value)
    if isinstance(value, dict):
        return {str(key): to_jsonable(val) for key, val in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    return str(value)


def _text(space: Optional[GroupSpace], value: Any) -> Any:
    """Human readable companion of a witness, using generator names."""
    if space is None or value is None:
        return None
    if isinstance(value, Word):
        return space.format(value)
    if isinstance(value, (list, tuple)):
        return [_text(space, item) for item in value]
    return str(value)


def approximation_report_to_dict(report: ApproximationReport, space: Optional[GroupSpace] = None) -> dict:
    data = {
        'kind': report.kind,
        'delta_hat': report.delta_hat,
        'bound': report.bound,
        'achieved_ball': report.achieved_ball,
        'achieved_exact': report.achieved_exact,
        'achieved': report.achieved,
        'radius': report.radius,
        'pass': report.passed,
        'scope': report.scope,
        'seed': report.seed,
        'witness': report.witness,
        'defect_witness': report.defect_witness,
        'extras': report.extras,
    }
    if space is not None:
        data['generators'] = list(space.generator_names)
        data['witness_text'] = _text(space, report.witness)
    return to_jsonable(data)


def defect_report_to_dict(report: DefectReport, space: Optional[GroupSpace] = None) -> dict:
    return to_jsonable({
        'delta_hat': report.delta_hat,
        'scope': report.scope,
        'witness': report.witness,
        'witness_text': _text(space, report.witness),
    })


def mean_growth_to_dict(mg: MeanGrowth, space: Optional[GroupSpace] = None) -> dict:
    return to_jsonable({
        'direction': mg.direction,
        'base': mg.base,
        'c_plus': mg.c_plus,
        'c_minus': mg.c_minus,
        'c': mg.c,
        'scope': mg.scope,
        'witness_plus': mg.witness_plus,
        'witness_minus': mg.witness_minus,
        'witness_text': _text(space, (mg.witness_plus, mg.witness_minus)),
    })


def kernel_projection_to_dict(projection: KernelProjection) -> dict:
    return to_jsonable({
        'u': projection.u,
        't': projection.t,
        'basis_certificate': projection.basis_certificate,
    })


def qm_report_to_dict(report: QmReport, space: Optional[GroupSpace] = None) -> dict:
    data = {
        field.name: getattr(report, field.name)
        for field in dataclasses.fields(report)
    }
    data['two_sided_defect'] = report.two_sided_defect
    if space is not None:
        data['partial_witness_text'] = _text(space, report.partial_witness)
    return to_jsonable(data)


def pqm_check_to_dict(check: PqmCheck, space: Optional[GroupSpace] = None) -> dict:
    data = qm_report_to_dict(check.report, space)
    data['implications'] = {
        'i': check.i,
        'ii': check.ii,
        'iii': check.iii,
        'ii_left': check.ii_left,
        'i_covers_products': check.i_covers_products,
        'consistent': check.consistent,
    }
    return data


def dumps(data: Any) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_jsonable(data), sort_keys=True, indent=2) + '\n'


def write_json(data: Any, path: Union[str, Path, None] = None) -> None:
    """Write to path, or to stdout when path is None."""
    text = dumps(data)
    if path is None:
        sys.stdout.write(text)
        return
    logger.debug('write_json(%s)', path)
    with open(path, 'w') as fd:
        fd.write(text)


def emit_curve(reports: Sequence[ApproximationReport], path: Union[str, Path]) -> None:
    """
    Write one CSV row per report, ordered by seed.

    Columns are seed, delta_hat, bound, achieved and pass.
    """
    if not reports:
        raise PreconditionError('No reports to write')
    rows = sorted(reports, key=lambda report: (report.seed is None, report.seed or 0))
    with open(path, 'w', newline='') as fd:
        writer = csv.writer(fd, lineterminator='\n')
        writer.writerow(CURVE_COLUMNS)
        for report in rows:
            writer.writerow([
                '' if report.seed is None else report.seed,
                str(report.delta_hat),
                str(report.bound),
                str(report.achieved),
                'true' if report.passed else 'false',
            ])


def summarize_reports(reports: Iterable[ApproximationReport]) -> str:
    """Creates a table with one row per report."""
    table = PrettyTable()
    table.field_names = ['Seed', 'Kind', 'delta', 'Bound', 'Achieved', 'Scope', 'Pass']
    for report in reports:
        table.add_row([
            '-' if report.seed is None else report.seed,
            report.kind,
            report.delta_hat,
            report.bound,
            report.achieved,
            report.scope,
            'Yes' if report.passed else 'No',
        ])
    return table.get_string()


def summarize_suite(results: Iterable[Any]) -> str:
    """Creates a table with one row per acceptance criterion."""
    table = PrettyTable()
    table.field_names = ['Criterion', 'Cases', 'Failures', 'Seconds', 'Pass']
    table.align['Criterion'] = 'l'
    for result in results:
        table.add_row([
            result.name,
            result.cases,
            len(result.failures),
            f'{result.seconds:.2f}',
            'Yes' if result.passed else 'No',
        ])
    return table.get_string()
