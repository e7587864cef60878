"""
Command-line tool to run the acceptance suite.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional, Sequence

from ..config import get_workers, load_suite_config
from ..exceptions import InstanceError
from ..reports import dumps, summarize_suite, write_json
from ..suite import CRITERIA, CriterionResult, run_suite
from .run_config import RunConfig

logger = logging.getLogger(__name__)


def _suite(
    config_path: Optional[Path] = None,
    only: Sequence[str] = (),
    seeds: Optional[str] = None,
    workers: Optional[int] = None,
) -> list[CriterionResult]:
    """
    Run the acceptance checks.

    Parameters
    ----------
    config_path : Path, optional
        YAML overrides for the packaged suite configuration.
    only : sequence of str, optional
        Names of the checks to run. All of them if empty.
    seeds : str, optional
        A seed selection such as 1..100 used by every check.
    workers : int, optional
        Number of processes. Defaults to the --workers setting.
    """
    unknown = [name for name in only if name not in CRITERIA]
    if unknown:
        raise InstanceError(f'unknown checks {unknown}, expected some of {list(CRITERIA)}', '--only')
    config = load_suite_config(config_path)
    return run_suite(config, only=only or None, seeds=seeds, workers=workers)


def results_text(results: Sequence[CriterionResult]) -> str:
    """Deterministic JSON of suite results, without timings."""
    return dumps([result.to_dict() for result in results])


def run_suite_command(config: RunConfig) -> int:
    results = _suite(config.config_path, config.only, config.seeds_text)
    data = {'results': [result.to_dict() for result in results]}
    passed = all(result.passed for result in results)
    if config.determinism:
        workers = get_workers()
        if workers == 1:
            logger.warning('Comparing a single-worker run with itself, pass --workers to compare')
        serial = _suite(config.config_path, config.only, config.seeds_text, workers=1)
        identical = results_text(serial) == results_text(results)
        data['deterministic'] = identical
        if not identical:
            logger.error('Results differ between 1 and %d workers', workers)
            passed = False
    print(summarize_suite(results))
    for result in results:
        for failure in result.failures:
            logger.error('%s: %s', result.name, failure)
    if config.out_path is not None:
        write_json(data, config.out_path)
    return 0 if passed else 1
