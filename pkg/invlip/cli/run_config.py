"""
The validated settings of one command-line run, and the dispatcher.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
from fractions import Fraction
from pathlib import Path
from typing import Optional

from ..config import parse_seeds
from ..exceptions import InstanceError

logger = logging.getLogger(__name__)

COMMANDS = (
    'approx-free', 'approx-adjusted', 'approx-presented', 'approx-orbit',
    'mean-growth', 'kernel-project', 'qm', 'check', 'suite',
)
SWEEP_COMMANDS = ('approx-free', 'approx-adjusted', 'approx-presented', 'approx-orbit', 'suite')


def _fraction_arg(text: Optional[str], flag: str) -> Optional[Fraction]:
    if text is None:
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InstanceError(f'not a rational: {text!r}', flag) from None


@dataclasses.dataclass(frozen=True)
class RunConfig:
    command: str
    instance_path: Optional[Path] = None
    radius: int = 4
    delta: Optional[Fraction] = None
    seeds: Optional[tuple[int, ...]] = None
    seeds_text: Optional[str] = None
    out_path: Optional[Path] = None
    csv_path: Optional[Path] = None
    table: bool = False
    # command specific
    direction: Optional[str] = None
    base: str = 'e'
    values: Optional[tuple[Fraction, ...]] = None
    eta: Fraction = Fraction(0)
    matrix_path: Optional[Path] = None
    vector_path: Optional[Path] = None
    oracle: bool = False
    strict: bool = True
    report_path: Optional[Path] = None
    config_path: Optional[Path] = None
    only: tuple[str, ...] = ()
    determinism: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InstanceError(f'unknown command {self.command!r}', 'command')
        if self.radius < 1:
            raise InstanceError(f'must be at least 1, got {self.radius}', '--radius')
        if self.command in SWEEP_COMMANDS and self.seeds is not None and not self.seeds:
            raise InstanceError('empty seed range', '--seeds')

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        """Validate parsed arguments into a RunConfig."""
        command = args.subparser
        if command == 'approx':
            command = f'approx-{args.kind}'
        seeds = None
        seeds_text = getattr(args, 'seeds', None)
        if seeds_text is not None:
            try:
                seeds = tuple(parse_seeds(seeds_text))
            except ValueError as exc:
                raise InstanceError(str(exc), '--seeds') from exc
        elif getattr(args, 'seed', None) is not None:
            seeds = (args.seed,)
        values = getattr(args, 'values', None)
        if values is not None:
            values = tuple(_fraction_arg(v.strip(), '--values') for v in values.split(','))

        def path(name: str) -> Optional[Path]:
            value = getattr(args, name, None)
            return None if value is None else Path(value)

        return cls(
            command=command,
            instance_path=path('instance'),
            radius=getattr(args, 'radius', 4),
            delta=_fraction_arg(getattr(args, 'delta', None), '--delta'),
            seeds=seeds,
            seeds_text=seeds_text,
            out_path=path('out'),
            csv_path=path('csv'),
            table=getattr(args, 'table', False),
            direction=getattr(args, 'direction', None),
            base=getattr(args, 'base', 'e'),
            values=values,
            eta=_fraction_arg(getattr(args, 'eta', None), '--eta') or Fraction(0),
            matrix_path=path('matrix'),
            vector_path=path('vector'),
            oracle=getattr(args, 'oracle', False),
            strict=not getattr(args, 'lenient', False),
            report_path=path('report'),
            config_path=path('config'),
            only=tuple(getattr(args, 'only', None) or ()),
            determinism=getattr(args, 'determinism', False),
        )


def run(config: RunConfig) -> int:
    """
    Run one command and return its exit status.

    0 means every certified bound passed, 1 that one failed.
    """
    logger.debug('run(%s)', config)
    if config.command.startswith('approx-'):
        from .approx_tools import run_approx
        return run_approx(config)
    if config.command == 'mean-growth':
        from .analysis_tools import run_mean_growth
        return run_mean_growth(config)
    if config.command == 'qm':
        from .analysis_tools import run_qm
        return run_qm(config)
    if config.command == 'kernel-project':
        from .kernel_tools import run_kernel_project
        return run_kernel_project(config)
    if config.command == 'check':
        from .check_tools import run_check
        return run_check(config)
    if config.command == 'suite':
        from .suite_tools import run_suite_command
        return run_suite_command(config)
    return 1
