"""
Module for the l-infinity nearest point in the kernel of a rational matrix.

linf_kernel_project solves

    minimize t  subject to  A u = 0,  -t <= x_i - u_i <= t

exactly with a two-phase tableau simplex over Fractions, using Bland's
rule so it cannot cycle. kernel_project_oracle solves the same problem by
enumerating vertices and is only meant for checking the solver.
"""
from __future__ import annotations

import dataclasses
import itertools
import logging
from fractions import Fraction
from typing import Optional, Sequence

from .exceptions import DomainError, PreconditionError, ResourceError, ScopeError
from .words import ExponentMatrix

logger = logging.getLogger(__name__)

ORACLE_BUDGET = 14

Vector = tuple[Fraction, ...]


@dataclasses.dataclass(frozen=True)
class RationalMatrix:
    rows: tuple[Vector, ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.rows)
        if not rows or not rows[0]:
            raise DomainError('Matrix dimensions must be positive')
        if any(len(row) != len(rows[0]) for row in rows):
            raise DomainError('Matrix rows have different lengths')
        object.__setattr__(self, 'rows', rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> RationalMatrix:
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def from_exponent_matrix(cls, matrix: ExponentMatrix) -> RationalMatrix:
        return cls(matrix.rows)

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    def apply(self, x: Sequence[Fraction]) -> Vector:
        if len(x) != self.n:
            raise DomainError(f'Vector of length {len(x)} for a matrix with {self.n} columns')
        return tuple(sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in self.rows)


def norm_inf(x: Sequence[Fraction]) -> Fraction:
    return max((abs(v) for v in x), default=Fraction(0))


@dataclasses.dataclass(frozen=True)
class KernelProjection:
    """
    A nearest kernel point.

    basis_certificate lists the active bounds (i, sign) at the optimum:
    sign +1 when u_i - x_i = t, -1 when x_i - u_i = t.
    """
    u: Vector
    t: Fraction
    basis_certificate: tuple[tuple[int, int], ...]


class _Tableau:
    """Dense simplex tableau, one row per constraint plus a reduced-cost row."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int]):
        self.rows = rows
        self.basis = basis
        self.cost: list[Fraction] = []

    def set_objective(self, costs: Sequence[Fraction]) -> None:
        width = len(self.rows[0])
        cost = [Fraction(0)] * width
        for j in range(width - 1):
            cost[j] = costs[j] if j < len(costs) else Fraction(0)
        for row, var in zip(self.rows, self.basis):
            weight = costs[var] if var < len(costs) else Fraction(0)
            if weight:
                for j in range(width):
                    cost[j] -= weight * row[j]
        self.cost = cost

    def pivot(self, r: int, j: int) -> None:
        row = self.rows[r]
        pivot = row[j]
        self.rows[r] = row = [v / pivot for v in row]
        for k, other in enumerate(self.rows):
            if k != r and other[j] != 0:
                factor = other[j]
                self.rows[k] = [a - factor * b for a, b in zip(other, row)]
        if self.cost and self.cost[j] != 0:
            factor = self.cost[j]
            self.cost = [a - factor * b for a, b in zip(self.cost, row)]
        self.basis[r] = j

    def run(self, allowed: int) -> None:
        """Bland's rule on columns below allowed until no reduced cost is negative."""
        while True:
            entering = next((j for j in range(allowed) if self.cost[j] < 0), None)
            if entering is None:
                return
            leaving = None
            best = None
            for r, row in enumerate(self.rows):
                if row[entering] > 0:
                    ratio = row[-1] / row[entering]
                    key = (ratio, self.basis[r])
                    if best is None or key < best:
                        best = key
                        leaving = r
            if leaving is None:
                raise RuntimeError('Unbounded linear program')
            self.pivot(leaving, entering)

    def solution(self, size: int) -> list[Fraction]:
        values = [Fraction(0)] * size
        for row, var in zip(self.rows, self.basis):
            if var < size:
                values[var] = row[-1]
        return values


def _solve_standard_form(
    matrix: list[list[Fraction]],
    rhs: list[Fraction],
    costs: list[Fraction],
) -> list[Fraction]:
    """Minimize costs . z subject to matrix z = rhs, z >= 0, assuming feasibility."""
    size = len(costs)
    count = len(matrix)
    rows = []
    for i, (row, b) in enumerate(zip(matrix, rhs)):
        sign = -1 if b < 0 else 1
        art = [Fraction(0)] * count
        art[i] = Fraction(1)
        rows.append([sign * v for v in row] + art + [sign * b])
    tableau = _Tableau(rows, [size + i for i in range(count)])
    tableau.set_objective([Fraction(0)] * size + [Fraction(1)] * count)
    tableau.run(size + count)
    if tableau.cost[-1] != 0:
        raise RuntimeError('Linear program is infeasible')
    # drive leftover artificials out of the basis, dropping redundant rows
    r = 0
    while r < len(tableau.rows):
        if tableau.basis[r] >= size:
            column = next((j for j in range(size) if tableau.rows[r][j] != 0), None)
            if column is None:
                del tableau.rows[r]
                del tableau.basis[r]
                continue
            tableau.pivot(r, column)
        r += 1
    tableau.set_objective(costs)
    tableau.run(size)
    return tableau.solution(size)


def linf_kernel_project(A: RationalMatrix, x: Sequence[Fraction]) -> KernelProjection:
    """
    Find u with A u = 0 minimizing max_i |x_i - u_i|.

    Variables are u+ and u- (u = u+ - u-), t, and one slack per bound.
    The terminating vertex is returned when the minimizer is not unique.
    """
    x = tuple(Fraction(v) for v in x)
    n = A.n
    if len(x) != n:
        raise DomainError(f'Vector of length {len(x)} for a matrix with {n} columns')
    logger.debug('linf_kernel_project(%dx%d)', A.m, n)
    size = 4 * n + 1
    t_col = 2 * n
    zero = Fraction(0)
    matrix = []
    rhs = []
    for row in A.rows:
        line = [zero] * size
        for j, a in enumerate(row):
            line[j] = a
            line[n + j] = -a
        matrix.append(line)
        rhs.append(zero)
    for i in range(n):
        upper = [zero] * size
        upper[i], upper[n + i], upper[t_col], upper[t_col + 1 + i] = 1, -1, -1, 1
        matrix.append([Fraction(v) for v in upper])
        rhs.append(x[i])
        lower = [zero] * size
        lower[i], lower[n + i], lower[t_col], lower[t_col + 1 + n + i] = -1, 1, -1, 1
        matrix.append([Fraction(v) for v in lower])
        rhs.append(-x[i])
    costs = [zero] * size
    costs[t_col] = Fraction(1)
    z = _solve_standard_form(matrix, rhs, costs)
    u = tuple(z[i] - z[n + i] for i in range(n))
    t = norm_inf([a - b for a, b in zip(x, u)])
    certificate = []
    for i in range(n):
        if u[i] - x[i] == t:
            certificate.append((i, 1))
        if x[i] - u[i] == t:
            certificate.append((i, -1))
    if any(A.apply(u)):
        raise RuntimeError(f'Projection left a residual {A.apply(u)}')
    if t != z[t_col]:
        raise RuntimeError(f'Projection bound mismatch {t} != {z[t_col]}')
    return KernelProjection(u, t, tuple(certificate))


def _solve_square(rows: list[list[Fraction]], rhs: list[Fraction], width: int) -> Optional[list[Fraction]]:
    """
    Gaussian elimination on a consistent system of full column rank.

    Returns None if the columns are dependent or the system is inconsistent.
    """
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    pivot_row = 0
    for col in range(width):
        found = next((r for r in range(pivot_row, len(aug)) if aug[r][col] != 0), None)
        if found is None:
            return None
        aug[pivot_row], aug[found] = aug[found], aug[pivot_row]
        pivot = aug[pivot_row][col]
        aug[pivot_row] = [v / pivot for v in aug[pivot_row]]
        for r in range(len(aug)):
            if r != pivot_row and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[pivot_row])]
        pivot_row += 1
    if any(row[-1] != 0 for row in aug[pivot_row:]):
        return None
    return [aug[i][-1] for i in range(width)]


def kernel_project_oracle(A: RationalMatrix, x: Sequence[Fraction]) -> Fraction:
    """
    The optimal t by brute force over vertices of the feasible region.

    Unknowns are (u, t). The region is pointed and t is bounded below, so
    the optimum sits at a vertex where every equality row and enough bound
    rows are active to pin down all n + 1 unknowns.
    """
    x = [Fraction(v) for v in x]
    n = A.n
    if A.m + n > ORACLE_BUDGET:
        raise ResourceError(f'Oracle enumeration needs m + n <= {ORACLE_BUDGET}', ORACLE_BUDGET)
    if len(x) != n:
        raise DomainError(f'Vector of length {len(x)} for a matrix with {n} columns')
    width = n + 1
    equalities = [list(row) + [Fraction(0)] for row in A.rows]
    bounds = []
    for i in range(n):
        upper = [Fraction(0)] * width
        upper[i], upper[n] = Fraction(1), Fraction(-1)
        bounds.append((upper, x[i]))
        lower = [Fraction(0)] * width
        lower[i], lower[n] = Fraction(-1), Fraction(-1)
        bounds.append((lower, -x[i]))
    best = None
    count = width - _rank(equalities, width)
    for chosen in itertools.combinations(bounds, count):
        rows = equalities + [row for row, _ in chosen]
        rhs = [Fraction(0)] * len(equalities) + [b for _, b in chosen]
        point = _solve_square(rows, rhs, width)
        if point is None:
            continue
        if all(
            sum((a * v for a, v in zip(row, point)), Fraction(0)) <= b
            for row, b in bounds
        ):
            if best is None or point[n] < best:
                best = point[n]
    return best


def _rank(rows: list[list[Fraction]], width: int) -> int:
    work = [list(row) for row in rows]
    rank = 0
    for col in range(width):
        found = next((r for r in range(rank, len(work)) if work[r][col] != 0), None)
        if found is None:
            continue
        work[rank], work[found] = work[found], work[rank]
        for r in range(rank + 1, len(work)):
            if work[r][col] != 0:
                factor = work[r][col] / work[rank][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[rank])]
        rank += 1
    return rank


def empirical_constant(A: RationalMatrix, samples: Sequence[Sequence[Fraction]]) -> Fraction:
    """max over samples with A x != 0 of ||x - u(x)|| / ||A x||."""
    best = None
    for x in samples:
        image = norm_inf(A.apply(x))
        if image == 0:
            continue
        ratio = linf_kernel_project(A, x).t / image
        best = ratio if best is None else max(best, ratio)
    if best is None:
        raise PreconditionError('Every sample lies in the kernel, the constant is undefined')
    return best


def injective_constant(A: RationalMatrix) -> Fraction:
    """
    ||A^-1|| in the l-infinity operator norm for a square nonsingular A.

    With a trivial kernel u = 0 and ||x|| <= ||A^-1|| ||A x||, so this is
    the kernel approximation constant exactly.
    """
    if A.m != A.n:
        raise ScopeError(f'Need a square matrix, got {A.m}x{A.n}')
    n = A.n
    columns = []
    for k in range(n):
        unit = [Fraction(int(i == k)) for i in range(n)]
        column = _solve_square([list(r) for r in A.rows], unit, n)
        if column is None:
            raise ScopeError('Matrix is singular')
        columns.append(column)
    return max(sum(abs(columns[k][i]) for k in range(n)) for i in range(n))
