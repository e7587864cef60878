"""
Module to load instance files.

An instance is a JSON object with a "group", optionally a "function", an
"action" for finite action spaces, and a default "delta". Rationals are
strings such as "-1/3" or integers, words are arrays of [index, sign]
pairs or strings such as "a b^-1". See docs/formats.md for the schemas.

Everything wrong with a file is raised as InstanceError naming the field.
"""
from __future__ import annotations

import dataclasses
import importlib
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

from .approximants import FiniteActionSpace, random_action_function
from .exceptions import InstanceError, InvlipError
from .groups import FiniteCayleyBackend, GroupSpace, MetricBackend
from .kernel import RationalMatrix
from .lipschitz import (LipFn, Structured, Tabulated, example_function,
                        random_delta_invariant)
from .words import Presentation, Word

logger = logging.getLogger(__name__)

BACKENDS = ('free', 'free_abelian', 'finite_cayley', 'oracle')
FUNCTION_KINDS = ('structured', 'tabulated', 'random', 'example')


@dataclasses.dataclass(frozen=True)
class Instance:
    group: GroupSpace
    function: Optional[Any] = None
    action: Optional[FiniteActionSpace] = None
    delta: Optional[Fraction] = None
    path: Optional[Path] = None
    function_data: Optional[dict] = None

    @property
    def is_random(self) -> bool:
        return bool(self.function_data) and self.function_data.get('kind') == 'random'

    def reseeded(self, seed: int) -> Instance:
        """The same instance with a random function drawn from another seed."""
        if not self.is_random:
            return self
        data = dict(self.function_data, seed=seed)
        if self.action is not None:
            function = load_action_function(data, self.action)
        else:
            function = load_function(data, self.group)
        return dataclasses.replace(self, function=function, function_data=data)


def parse_fraction(value: Any, field: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise InstanceError(f'expected an integer or a "p/q" string, got {value!r}', field)
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InstanceError(f'not a rational: {value!r}', field) from None


def parse_index(value: Any, field: str) -> int:
    if isinstance(value, bool) or isinstance(value, float):
        raise InstanceError(f'expected an integer, got {value!r}', field)
    try:
        return int(value)
    except (TypeError, ValueError):
        raise InstanceError(f'not an integer: {value!r}', field) from None


def _indices(value: Any, field: str) -> tuple[int, ...]:
    if not isinstance(value, list):
        raise InstanceError('expected a list of integers', field)
    return tuple(parse_index(v, f'{field}[{i}]') for i, v in enumerate(value))


def parse_word(value: Any, names: tuple[str, ...], field: str) -> Word:
    try:
        if isinstance(value, str):
            return Word.parse(value, names)
        return Word.from_json(value, len(names))
    except InvlipError as exc:
        raise InstanceError(str(exc), field) from exc


def _require(data: dict, key: str, field: str) -> Any:
    if not isinstance(data, dict):
        raise InstanceError('expected an object', field)
    if key not in data:
        raise InstanceError('missing', f'{field}.{key}')
    return data[key]


def load_group(data: dict, field: str = 'group') -> GroupSpace:
    """Build a GroupSpace from its JSON description."""
    names = _require(data, 'generators', field)
    if not isinstance(names, list) or not names or not all(isinstance(n, str) for n in names):
        raise InstanceError('expected a nonempty list of names', f'{field}.generators')
    names = tuple(names)
    backend_name = data.get('backend', 'free')
    relator_data = data.get('relators', [])
    relators = tuple(
        parse_word(rel, names, f'{field}.relators[{i}]') for i, rel in enumerate(relator_data)
    )
    try:
        presentation = Presentation(names, relators) if relators else None
        if backend_name == 'free':
            if relators:
                raise InstanceError('a free group has no relators', f'{field}.relators')
            return GroupSpace.free(names)
        if backend_name == 'free_abelian':
            space = GroupSpace.free_abelian(names)
            if presentation is not None:
                space = dataclasses.replace(space, presentation=presentation)
            return space
        if backend_name == 'finite_cayley':
            perm_data = _require(data, 'permutations', field)
            if not isinstance(perm_data, list):
                raise InstanceError('expected a list of permutations', f'{field}.permutations')
            perms = [_indices(p, f'{field}.permutations[{i}]') for i, p in enumerate(perm_data)]
            backend = FiniteCayleyBackend(perms)
            return GroupSpace(backend, names, presentation)
        if backend_name == 'oracle':
            backend = _load_oracle(_require(data, 'oracle', field), len(names), f'{field}.oracle')
            return GroupSpace(backend, names, presentation)
    except InstanceError:
        raise
    except InvlipError as exc:
        raise InstanceError(str(exc), field) from exc
    raise InstanceError(f'unknown backend {backend_name!r}, expected one of {BACKENDS}', f'{field}.backend')


def _load_oracle(spec: str, rank: int, field: str) -> MetricBackend:
    """Import module:callable and call it with the rank to get a backend."""
    module_name, _, attr = str(spec).partition(':')
    try:
        factory = getattr(importlib.import_module(module_name), attr)
    except (ImportError, AttributeError, ValueError) as exc:
        raise InstanceError(f'cannot import {spec!r}: {exc}', field) from exc
    backend = factory(rank)
    if not isinstance(backend, MetricBackend):
        raise InstanceError(f'{spec} returned {type(backend).__name__}, not a MetricBackend', field)
    return backend


def _pairs(data: Any, field: str) -> list:
    if not isinstance(data, list) or not all(isinstance(p, list) and len(p) == 2 for p in data):
        raise InstanceError('expected a list of [point, value] pairs', field)
    return data


def load_function(data: dict, space: GroupSpace, field: str = 'function') -> LipFn:
    """Build a function on the group from its JSON description."""
    kind = _require(data, 'kind', field)
    names = space.generator_names
    try:
        if kind == 'structured':
            hom = data.get('hom', ['0'] * space.rank)
            if not isinstance(hom, list) or len(hom) != space.rank:
                raise InstanceError(f'expected {space.rank} values', f'{field}.hom')
            support = {}
            for i, (point, value) in enumerate(_pairs(data.get('support', []), f'{field}.support')):
                word = space.normal_form(parse_word(point, names, f'{field}.support[{i}]'))
                support[word] = parse_fraction(value, f'{field}.support[{i}]')
            return Structured(
                tuple(parse_fraction(v, f'{field}.hom[{i}]') for i, v in enumerate(hom)),
                support,
            )
        if kind == 'tabulated':
            values = {}
            for i, (point, value) in enumerate(_pairs(_require(data, 'values', field), f'{field}.values')):
                word = parse_word(point, names, f'{field}.values[{i}]')
                values[word] = parse_fraction(value, f'{field}.values[{i}]')
            return Tabulated.on_group(space, values, pinned=data.get('pinned', True))
        if kind == 'random':
            return random_delta_invariant(
                space,
                parse_fraction(_require(data, 'delta', field), f'{field}.delta'),
                parse_fraction(data.get('support_radius', 3), f'{field}.support_radius'),
                parse_index(data.get('seed', 0), f'{field}.seed'),
            )
        if kind == 'example':
            if space.rank != 1 or space.backend.name != 'free':
                raise InstanceError('the ramp example lives on the free group of rank 1', field)
            return example_function(
                parse_fraction(data.get('delta', 1), f'{field}.delta'),
                parse_index(data.get('radius', 16), f'{field}.radius'),
            )
    except InstanceError:
        raise
    except InvlipError as exc:
        raise InstanceError(str(exc), field) from exc
    raise InstanceError(f'unknown kind {kind!r}, expected one of {FUNCTION_KINDS}', f'{field}.kind')


def load_action(data: dict, group: GroupSpace, field: str = 'action') -> FiniteActionSpace:
    """Build a FiniteActionSpace; {"preset": "flip_ladder"} gives the standard ladder."""
    if data.get('preset') == 'flip_ladder':
        return FiniteActionSpace.flip_ladder(parse_index(data.get('rungs', 4), f'{field}.rungs'))
    dist = _require(data, 'dist', field)
    if not isinstance(dist, list):
        raise InstanceError('expected a matrix', f'{field}.dist')
    labels = tuple(data.get('labels', range(len(dist))))
    matrix = tuple(
        tuple(parse_fraction(v, f'{field}.dist[{i}][{j}]') for j, v in enumerate(row))
        for i, row in enumerate(dist)
    )
    perms = _require(data, 'generator_actions', field)
    if not isinstance(perms, list):
        raise InstanceError('expected a list of permutations', f'{field}.generator_actions')
    actions = tuple(_indices(perm, f'{field}.generator_actions[{i}]') for i, perm in enumerate(perms))
    try:
        return FiniteActionSpace(
            labels=labels,
            dist=matrix,
            group=group,
            generator_actions=actions,
            domain=_indices(_require(data, 'domain', field), f'{field}.domain'),
            alpha=parse_fraction(data.get('alpha', 1), f'{field}.alpha'),
        )
    except InstanceError:
        raise
    except InvlipError as exc:
        raise InstanceError(str(exc), field) from exc


def load_action_function(data: dict, action: FiniteActionSpace, field: str = 'function') -> Tabulated:
    kind = _require(data, 'kind', field)
    if kind == 'random':
        return random_action_function(action, parse_index(data.get('seed', 0), f'{field}.seed'))
    if kind != 'tabulated':
        raise InstanceError('action functions are tabulated or random', f'{field}.kind')
    values = {}
    for i, (point, value) in enumerate(_pairs(_require(data, 'values', field), f'{field}.values')):
        values[parse_index(point, f'{field}.values[{i}]')] = parse_fraction(value, f'{field}.values[{i}]')
    try:
        return Tabulated(values, 0)
    except InvlipError as exc:
        raise InstanceError(str(exc), field) from exc


def _read_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    try:
        with open(path) as fd:
            return json.load(fd)
    except json.JSONDecodeError as exc:
        raise InstanceError(f'invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}', str(path)) from exc
    except OSError as exc:
        raise InstanceError(str(exc), str(path)) from exc


def parse_instance(data: dict, path: Optional[Path] = None) -> Instance:
    action_data = data.get('action')
    if isinstance(action_data, dict) and 'preset' in action_data:
        action = load_action(action_data, GroupSpace.cyclic(2))
        group = action.group
    else:
        group = load_group(_require(data, 'group', 'instance'))
        action = load_action(action_data, group) if action_data is not None else None
    function = None
    if 'function' in data:
        if action is not None:
            function = load_action_function(data['function'], action)
        else:
            function = load_function(data['function'], group)
    delta = parse_fraction(data['delta'], 'delta') if 'delta' in data else None
    return Instance(
        group=group,
        function=function,
        action=action,
        delta=delta,
        path=path,
        function_data=data.get('function'),
    )


def load_instance(path: Union[str, Path]) -> Instance:
    """Read and validate an instance file."""
    logger.debug('load_instance(%s)', path)
    data = _read_json(path)
    if not isinstance(data, dict):
        raise InstanceError('expected a JSON object', str(path))
    return parse_instance(data, Path(path))


def load_matrix(path: Union[str, Path]) -> RationalMatrix:
    """A matrix file is [[...], ...] or {"rows": [[...], ...]}."""
    data = _read_json(path)
    rows = data.get('rows') if isinstance(data, dict) else data
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InstanceError('expected a list of rows', 'matrix')
    try:
        return RationalMatrix.from_rows([
            [parse_fraction(v, f'matrix[{i}][{j}]') for j, v in enumerate(row)]
            for i, row in enumerate(rows)
        ])
    except InstanceError:
        raise
    except InvlipError as exc:
        raise InstanceError(str(exc), 'matrix') from exc


def load_vector(path: Union[str, Path]) -> tuple[Fraction, ...]:
    """A vector file is [...] or {"values": [...]}."""
    data = _read_json(path)
    values = data.get('values') if isinstance(data, dict) else data
    if not isinstance(values, list):
        raise InstanceError('expected a list', 'vector')
    return tuple(parse_fraction(v, f'vector[{i}]') for i, v in enumerate(values))
