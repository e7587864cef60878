"""
Module to run the acceptance checks as seeded sweeps.

Each criterion reads its section of the suite configuration, runs one
case per seed (or per generated instance) and collects failures. Cases
are plain top-level functions of picklable arguments so that sweeps can
fan out over a process pool; results come back in submission order, so
the outcome does not depend on the worker count.
"""
from __future__ import annotations

import dataclasses
import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional, Sequence

from .approximants import (FiniteActionSpace, free_approximant,
                           optimality_check, orbit_collapse_approximant,
                           presented_approximant, random_action_function,
                           random_homomorphism, shrink_norm_check)
from .config import get_workers, parse_seeds
from .exceptions import InvlipError
from .groups import GroupSpace
from .kernel import (RationalMatrix, kernel_project_oracle,
                     linf_kernel_project)
from .lipschitz import (delta_defect, example_function, exact_lip_norm,
                        random_delta_invariant)
from .mean_growth import (check_gap, check_sandwich, gap_characterization,
                          mean_growth)
from .quasimorphism import (doubled_partial_defect, pqm_constant_from_lipschitz,
                            pqm_statements, qm_defects)
from .reports import approximation_report_to_dict, to_jsonable

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class CriterionResult:
    name: str
    cases: int = 0
    failures: list[str] = dataclasses.field(default_factory=list)
    details: list[Any] = dataclasses.field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures

    def to_dict(self) -> dict:
        """Everything except the timing, which is not reproducible."""
        return to_jsonable({
            'name': self.name,
            'cases': self.cases,
            'failures': self.failures,
            'details': self.details,
            'pass': self.passed,
        })


def sweep(func: Callable, args: Sequence, workers: Optional[int] = None) -> list:
    """Map func over args, in parallel when more than one worker is configured."""
    workers = workers or get_workers()
    if workers <= 1 or len(args) <= 1:
        return [func(arg) for arg in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, args, chunksize=max(1, len(args) // (4 * workers))))


def _seeds(section: dict) -> list[int]:
    return parse_seeds(section.get('seeds', '1..10'))


def _delta_for(section: dict, seed: int) -> Fraction:
    deltas = section.get('deltas') or [section.get('delta', 1)]
    return Fraction(str(deltas[seed % len(deltas)]))


def _free2() -> GroupSpace:
    return GroupSpace.free(('a', 'b'))


def example_case(section: dict) -> tuple[list[str], dict]:
    delta = Fraction(str(section.get('delta', 1)))
    radius = int(section.get('radius', 16))
    space = GroupSpace.free(('a',))
    f = example_function(delta, radius)
    failures = []
    mg = mean_growth(f, space, space.generator(0))
    if (mg.c_plus, mg.c_minus, mg.c) != (delta, 0, delta / 2):
        failures.append(f'mean growth {mg.c_plus}, {mg.c_minus}, {mg.c}')
    fbar, report = free_approximant(f, space, radius)
    if fbar.hom != (delta / 2,):
        failures.append(f'approximant slope {fbar.hom[0]}')
    if report.achieved_exact != delta / 2 or not report.passed:
        failures.append(f'error {report.achieved_exact} against bound {report.bound}')
    return failures, approximation_report_to_dict(report, space)


def free_bound_case(args: tuple) -> tuple[Optional[str], dict]:
    seed, delta, support_radius, radius = args
    space = _free2()
    f = random_delta_invariant(space, delta, support_radius, seed)
    _, report = free_approximant(f, space, radius)
    report = report.with_seed(seed)
    failure = None
    if not report.passed or report.achieved_exact > report.delta_hat / 2:
        failure = f'seed {seed}: {report.achieved_exact} > {report.delta_hat}/2'
    return failure, approximation_report_to_dict(report)


def optimality_case(args: tuple) -> Optional[str]:
    seed, delta, support_radius, candidates = args
    space = _free2()
    f = random_delta_invariant(space, delta, support_radius, seed)
    fbar, _ = free_approximant(f, space, 1)
    rng = random.Random(seed)
    pool = [random_homomorphism(space, rng) for _ in range(candidates)]
    if not optimality_check(f, fbar, pool, space):
        return f'seed {seed}: a candidate homomorphism is closer'
    return None


def mean_growth_case(args: tuple) -> Optional[str]:
    seed, delta, support_radius, radius = args
    space = _free2()
    f = random_delta_invariant(space, delta, support_radius, seed)
    delta_hat = delta_defect(f, space).delta_hat
    norm = exact_lip_norm(f, space)
    for s in space.ball(radius):
        if s.is_identity:
            continue
        mg = mean_growth(f, space, s)
        back = mean_growth(f, space, space.invert(s))
        if mg.c != -back.c:
            return f'seed {seed}: c({space.format(s)}) = {mg.c} but c(s^-1) = {back.c}'
        if not check_gap(mg, delta_hat, space):
            return f'seed {seed}: gap {mg.gap} along {space.format(s)}'
        if not check_sandwich(mg, delta_hat, space, norm):
            return f'seed {seed}: sandwich fails along {space.format(s)}'
    characterized = gap_characterization(f, space, radius)
    if characterized != delta_hat:
        return f'seed {seed}: gap characterization {characterized} != defect {delta_hat}'
    return None


def random_kernel_instance(seed: int, max_rows: int, max_cols: int, max_entry: int):
    rng = random.Random(seed)
    m = rng.randint(1, max_rows)
    n = rng.randint(1, max_cols)
    rows = [[rng.randint(-max_entry, max_entry) for _ in range(n)] for _ in range(m)]
    x = [Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(n)]
    return RationalMatrix.from_rows(rows), x


def kernel_case(args: tuple) -> Optional[str]:
    seed, max_rows, max_cols, max_entry = args
    A, x = random_kernel_instance(seed, max_rows, max_cols, max_entry)
    projection = linf_kernel_project(A, x)
    oracle = kernel_project_oracle(A, x)
    if any(A.apply(projection.u)):
        return f'instance {seed}: residual {A.apply(projection.u)}'
    if projection.t != oracle:
        return f'instance {seed}: solver {projection.t} != oracle {oracle}'
    return None


def presented_case(args: tuple) -> Optional[str]:
    kind, seed, delta, support_radius, radius, order = args
    if kind == 'abelian':
        space = GroupSpace.free_abelian(('a', 'b'))
    else:
        space = GroupSpace.cyclic(order)
    f = random_delta_invariant(space, delta, support_radius, seed)
    fbar, report, constants = presented_approximant(f, space.presentation, space, radius)
    if not report.passed:
        return f'{kind} seed {seed}: {report.achieved} > {report.bound}'
    if kind == 'abelian' and constants['C_R'] != 2:
        return f'{kind} seed {seed}: C_R = {constants["C_R"]}'
    if kind == 'cyclic':
        if any(fbar.hom) or report.achieved > report.delta_hat:
            return f'{kind} seed {seed}: u = {fbar.hom}, norm {report.achieved}'
    return None


def _finite_group(name: str) -> GroupSpace:
    if name == 'S3':
        return GroupSpace.symmetric3()
    return GroupSpace.cyclic(int(name.lstrip('Z')))


def norm_collapse_case(args: tuple) -> Optional[str]:
    group, seed, delta = args
    space = _finite_group(group)
    f = random_delta_invariant(space, delta, space.elements().radius, seed)
    delta_hat = delta_defect(f, space).delta_hat
    if not shrink_norm_check(space, f, delta_hat):
        return f'{group} seed {seed}: norm exceeds defect {delta_hat}'
    return None


def orbit_case(args: tuple) -> tuple[Optional[str], dict]:
    seed, rungs = args
    fa = FiniteActionSpace.flip_ladder(rungs)
    f = random_action_function(fa, seed)
    _, report = orbit_collapse_approximant(fa, f)
    report = report.with_seed(seed)
    failure = None if report.passed else f'seed {seed}: {report.achieved} > {report.bound}'
    return failure, approximation_report_to_dict(report)


def quasimorphism_case(args: tuple) -> Optional[str]:
    kind, seed, delta, support_radius, radius, doubled_radius = args
    space = _free2() if kind == 'free' else GroupSpace.free_abelian(('a', 'b'))
    f = random_delta_invariant(space, delta, support_radius, seed)
    report = qm_defects(f, space, radius, strict=False)
    doubled, covers = doubled_partial_defect(f, space, radius, doubled_radius)
    deltas = {delta, report.two_sided_defect, report.left_defect, report.partial_D, 2 * doubled}
    for value in sorted(d for d in deltas if d > 0):
        check = pqm_statements(report, doubled, value, covers_products=covers)
        if not check.consistent:
            return f'{kind} seed {seed}: implications fail at delta={value}: {check.as_tuple()}'
    try:
        pqm_constant_from_lipschitz(f, space, 1, radius, strict=report.bi_invariant)
    except InvlipError as exc:
        return f'{kind} seed {seed}: {exc}'
    return None


def _collect(result: CriterionResult, outcomes: Iterable) -> None:
    for outcome in outcomes:
        result.cases += 1
        if isinstance(outcome, tuple):
            failure, detail = outcome
            result.details.append(detail)
        else:
            failure = outcome
        if failure:
            result.failures.append(failure)


def run_criterion(name: str, section: dict, workers: Optional[int] = None) -> CriterionResult:
    """Run one named criterion and time it."""
    logger.info('Running %s', name)
    start = time.monotonic()
    result = CriterionResult(name)
    if name == 'example':
        failures, detail = example_case(section)
        result.cases = 1
        result.failures.extend(failures)
        result.details.append(detail)
    elif name == 'free_bound':
        args = [
            (seed, _delta_for(section, seed), section.get('support_radius', 3), section.get('radius', 3))
            for seed in _seeds(section)
        ]
        _collect(result, sweep(free_bound_case, args, workers))
    elif name == 'optimality':
        args = [
            (seed, _delta_for(section, seed), section.get('support_radius', 3), section.get('candidates', 20))
            for seed in _seeds(section)
        ]
        _collect(result, sweep(optimality_case, args, workers))
    elif name == 'mean_growth':
        args = [
            (seed, _delta_for(section, seed), section.get('support_radius', 3), section.get('radius', 2))
            for seed in _seeds(section)
        ]
        _collect(result, sweep(mean_growth_case, args, workers))
    elif name == 'kernel':
        args = [
            (seed, section.get('max_rows', 3), section.get('max_cols', 5), section.get('max_entry', 9))
            for seed in range(1, int(section.get('instances', 200)) + 1)
        ]
        _collect(result, sweep(kernel_case, args, workers))
    elif name == 'presented':
        common = (section.get('support_radius', 2), section.get('radius', 3), section.get('cyclic_order', 5))
        args = [
            (kind, seed, _delta_for(section, seed)) + common
            for kind in ('abelian', 'cyclic') for seed in _seeds(section)
        ]
        _collect(result, sweep(presented_case, args, workers))
    elif name == 'norm_collapse':
        args = [
            (str(group), seed, _delta_for(section, seed))
            for group in section.get('groups', ['Z2', 'Z3', 'Z5', 'Z8', 'S3'])
            for seed in _seeds(section)
        ]
        _collect(result, sweep(norm_collapse_case, args, workers))
    elif name == 'orbit':
        args = [(seed, section.get('rungs', 4)) for seed in _seeds(section)]
        _collect(result, sweep(orbit_case, args, workers))
    elif name == 'quasimorphism':
        args = [
            (
                kind, seed, _delta_for(section, seed), section.get('support_radius', 2),
                section.get(f'{kind}_radius', 4), section.get(f'{kind}_doubled_radius'),
            )
            for kind in ('free', 'abelian') for seed in _seeds(section)
        ]
        _collect(result, sweep(quasimorphism_case, args, workers))
    else:
        raise KeyError(f'Unknown criterion {name}')
    result.seconds = time.monotonic() - start
    if result.failures:
        logger.error('%s: %d of %d cases failed', name, len(result.failures), result.cases)
    return result


CRITERIA = (
    'example', 'free_bound', 'optimality', 'mean_growth', 'kernel',
    'presented', 'norm_collapse', 'orbit', 'quasimorphism',
)


def run_suite(
    config: dict,
    only: Optional[Sequence[str]] = None,
    seeds: Optional[str] = None,
    workers: Optional[int] = None,
) -> list[CriterionResult]:
    """
    Run the configured criteria in order.

    seeds, when given, replaces the seed selection of every section.
    """
    results = []
    for name in CRITERIA:
        if only and name not in only:
            continue
        section = dict(config.get(name) or {})
        if seeds is not None:
            section['seeds'] = seeds
        results.append(run_criterion(name, section, workers))
    return results
