from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invlip.exceptions import DomainError, PreconditionError, ResourceError, ScopeError
from invlip.kernel import (RationalMatrix, empirical_constant, injective_constant,
                           kernel_project_oracle, linf_kernel_project, norm_inf)
from invlip.words import Presentation, exponent_matrix


@pytest.mark.parametrize(
    'rows,x,t,u',
    [
        ([[2, -3]], [1, 0], Fraction(2, 5), (Fraction(3, 5), Fraction(2, 5))),
        ([[1, 1]], [1, 0], Fraction(1, 2), (Fraction(1, 2), Fraction(-1, 2))),
        ([[2, -2]], [1, 0], Fraction(1, 2), (Fraction(1, 2), Fraction(1, 2))),
        ([[0, 0]], ['1/3', -2], 0, (Fraction(1, 3), Fraction(-2))),
        ([[5]], [1], 1, (Fraction(0),)),
    ]
)
def test_known_projections(rows, x, t, u):
    A = RationalMatrix.from_rows(rows)
    projection = linf_kernel_project(A, x)
    assert projection.t == t
    assert projection.u == u
    assert not any(A.apply(projection.u))
    assert kernel_project_oracle(A, x) == t


def test_certificate_names_active_bounds():
    A = RationalMatrix.from_rows([[2, -3]])
    projection = linf_kernel_project(A, [1, 0])
    # u = (3/5, 2/5): x_0 - u_0 = t and u_1 - x_1 = t
    assert set(projection.basis_certificate) == {(0, -1), (1, 1)}


def test_presentation_matrix():
    p = Presentation.from_strs(('a', 'b'), 'a^2 b^-2')
    A = RationalMatrix.from_exponent_matrix(exponent_matrix(p))
    assert A.rows == ((2, -2),)
    assert linf_kernel_project(A, [1, 0]).u == (Fraction(1, 2), Fraction(1, 2))


def test_length_mismatch():
    A = RationalMatrix.from_rows([[1, 2]])
    with pytest.raises(DomainError):
        linf_kernel_project(A, [1])


def test_oracle_budget():
    A = RationalMatrix.from_rows([[1] * 11] * 4)
    with pytest.raises(ResourceError):
        kernel_project_oracle(A, [0] * 11)


matrices = st.integers(1, 3).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.tuples(
            st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m),
            st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=n, max_size=n),
        )
    )
)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_solver_matches_oracle(case):
    rows, x = case
    A = RationalMatrix.from_rows(rows)
    projection = linf_kernel_project(A, x)
    assert not any(A.apply(projection.u))
    assert projection.t == norm_inf([a - b for a, b in zip(x, projection.u)])
    assert projection.t == kernel_project_oracle(A, x)


def test_injective_constant():
    A = RationalMatrix.from_rows([[5]])
    assert injective_constant(A) == Fraction(1, 5)
    assert empirical_constant(A, [[1], [-3]]) == Fraction(1, 5)
    with pytest.raises(ScopeError):
        injective_constant(RationalMatrix.from_rows([[1, 1]]))
    with pytest.raises(ScopeError):
        injective_constant(RationalMatrix.from_rows([[1, 1], [2, 2]]))


def test_empirical_constant_needs_samples_off_kernel():
    A = RationalMatrix.from_rows([[1, -1]])
    with pytest.raises(PreconditionError):
        empirical_constant(A, [[1, 1], [0, 0]])
    # x = (1, -1): ||A x|| = 2 and the nearest kernel point is 0 at distance 1
    assert empirical_constant(A, [[1, -1]]) == Fraction(1, 2)
