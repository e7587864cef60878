"""
Module-level settings shared by the library and the CLI.

This includes:
- the element cap for ball enumeration and finite Cayley closures
- the worker count used by seed sweeps
- seed range parsing and loading of the YAML suite configuration
"""
from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any, Optional, Union

import yaml

logger = logging.getLogger(__name__)

DEFAULT_MAX_BALL = 10**6
MAX_BALL_ENV = 'INVLIP_MAX_BALL'
DEFAULT_SUITE_CONFIG = Path(__file__).parent / 'invlip_suite.yml'
_max_ball: Optional[int] = None
_workers: int = 1


def get_max_ball() -> int:
    """The element cap: explicit setting, then environment, then default."""
    if _max_ball is not None:
        return _max_ball
    env = os.environ.get(MAX_BALL_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            logger.warning('Ignoring non-integer %s=%s', MAX_BALL_ENV, env)
    return DEFAULT_MAX_BALL


def set_max_ball(cap: Optional[int]) -> None:
    global _max_ball
    if cap is not None and cap < 1:
        raise ValueError(f'Element cap must be positive, got {cap}')
    _max_ball = cap


def get_workers() -> int:
    return _workers


def set_workers(workers: int) -> None:
    global _workers
    _workers = max(1, int(workers))


def parse_seeds(text: Union[str, int]) -> list[int]:
    """
    Parse a seed selection such as "1..100", "7" or "1,4,9".

    Ranges are inclusive at both ends.
    """
    seeds: list[int] = []
    for part in str(text).split(','):
        part = part.strip()
        if not part:
            continue
        if '..' in part:
            start, _, stop = part.partition('..')
            first, last = int(start), int(stop)
            if last < first:
                raise ValueError(f'Empty seed range {part}')
            seeds.extend(range(first, last + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise ValueError(f'No seeds in {text!r}')
    return seeds


def load_suite_config(path: Union[str, Path, None] = None) -> dict[str, Any]:
    """
    Load the acceptance suite settings.

    The packaged defaults are always read first. If path is given, the
    mapping found there is merged on top, one criterion section at a time.

    Parameters
    ----------
    path : str or Path, optional
        A YAML file with overrides.

    Returns
    -------
    config : dict
        Criterion name to settings mapping.
    """
    with open(DEFAULT_SUITE_CONFIG) as fd:
        config = yaml.safe_load(fd) or {}
    if path is not None:
        logger.debug('load_suite_config(%s)', path)
        with open(path) as fd:
            overrides = yaml.safe_load(fd) or {}
        for key, value in overrides.items():
            if isinstance(value, dict) and isinstance(config.get(key), dict):
                config[key].update(value)
            else:
                config[key] = value
    return config
