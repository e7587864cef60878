"""
Command-line tool for sup-norm kernel projections.
"""
from __future__ import annotations

import logging
from pathlib import Path

from prettytable import PrettyTable

from ..instances import load_matrix, load_vector
from ..kernel import (KernelProjection, kernel_project_oracle,
                      linf_kernel_project)
from ..reports import kernel_projection_to_dict, write_json
from .run_config import RunConfig

logger = logging.getLogger(__name__)


def _kernel_project(matrix_path: Path, vector_path: Path, oracle: bool) -> tuple[KernelProjection, dict, bool]:
    """
    Project the vector onto ker A and optionally confirm by vertex enumeration.

    Returns the projection, its report data, and whether the oracle agreed
    (always True when it was not asked for).
    """
    A = load_matrix(matrix_path)
    x = load_vector(vector_path)
    projection = linf_kernel_project(A, x)
    data = kernel_projection_to_dict(projection)
    agreed = True
    if oracle:
        expected = kernel_project_oracle(A, x)
        agreed = expected == projection.t
        data['oracle_t'] = str(expected)
        data['oracle_agrees'] = agreed
        if not agreed:
            logger.error('Simplex optimum %s differs from the oracle %s', projection.t, expected)
    return projection, data, agreed


def run_kernel_project(config: RunConfig) -> int:
    projection, data, agreed = _kernel_project(config.matrix_path, config.vector_path, config.oracle)
    write_json(data, config.out_path)
    if config.table:
        table = PrettyTable()
        table.field_names = ['Index', 'u', 'Active']
        active = dict(projection.basis_certificate)
        for index, value in enumerate(projection.u):
            table.add_row([index, value, {1: '+t', -1: '-t'}.get(active.get(index), '')])
        print(table.get_string())
    return 0 if agreed else 1
