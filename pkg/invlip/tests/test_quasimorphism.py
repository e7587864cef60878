import dataclasses
from fractions import Fraction

import pytest

from invlip.exceptions import BiInvarianceError, DomainError
from invlip.groups import Scope
from invlip.lipschitz import (Structured, Tabulated, exact_lip_norm,
                              random_delta_invariant)
from invlip.quasimorphism import (QmReport, bi_invariance_witness,
                                  check_pqm_implications, doubled_partial_defect,
                                  pqm_constant_from_lipschitz, pqm_statements,
                                  qm_defects)


def test_homomorphism_has_no_defects(z2):
    h = Structured.homomorphism(['1/2', -2])
    report = qm_defects(h, z2, 2)
    assert report.bi_invariant
    assert (report.defect_D, report.partial_D) == (0, 0)
    assert report.two_sided_defect == 0


def test_free_group_is_not_bi_invariant(free2):
    witness = bi_invariance_witness(free2, list(free2.ball(1)))
    assert witness is not None
    f = random_delta_invariant(free2, 1, 1, 1)
    with pytest.raises(BiInvarianceError):
        qm_defects(f, free2, 1)
    report = qm_defects(f, free2, 1, strict=False)
    assert not report.bi_invariant


def test_defect_witness_reproduces(z2):
    f = random_delta_invariant(z2, 1, 2, 4)
    report = qm_defects(f, z2, 2)
    g, h = report.defect_witness
    assert abs(f(z2.multiply(g, h)) - f(g) - f(h)) == report.defect_D
    g, h = report.partial_witness
    gap = abs(f(z2.multiply(g, h)) - f(g) - f(h))
    assert gap / min(z2.length(g), z2.length(h)) == report.partial_D


@pytest.mark.parametrize('seed', range(1, 6))
def test_implications_on_free_abelian(z2, seed):
    f = random_delta_invariant(z2, 1, 2, seed)
    report = qm_defects(f, z2, 2)
    for delta in (Fraction(1, 2), Fraction(1), report.two_sided_defect, 2 * report.partial_D):
        if delta <= 0:
            continue
        check = check_pqm_implications(f, z2, delta, 2)
        assert check.consistent


def test_implications_on_free_group(free2):
    f = random_delta_invariant(free2, 1, 1, 8)
    check = check_pqm_implications(f, free2, 1, 1, strict=False)
    assert not check.bi_invariant
    assert check.consistent


@pytest.mark.parametrize('seed', range(1, 4))
def test_pqm_constant(z2, free2, seed):
    f = random_delta_invariant(z2, 1, 2, seed)
    constant = pqm_constant_from_lipschitz(f, z2, 1, 2)
    assert constant >= qm_defects(f, z2, 2).partial_D
    g = random_delta_invariant(free2, 1, 1, seed)
    assert pqm_constant_from_lipschitz(g, free2, 1, 1, strict=False) >= 0


def test_pqm_constant_with_offset(z2):
    """
    A constant function is not pinned and has constant |f(e)| / A.
    """
    f = Tabulated({w: 1 for w in z2.ball(4)}, z2.identity, pinned=False)
    assert pqm_constant_from_lipschitz(f, z2, 1, 2) == 1


def test_pqm_constant_checks_discreteness(z2):
    f = Structured.homomorphism([1, 1])
    with pytest.raises(DomainError):
        pqm_constant_from_lipschitz(f, z2, 0, 2)
    with pytest.raises(DomainError):
        pqm_constant_from_lipschitz(f, z2, 2, 2)


def test_doubled_scan_radius(free2, z2):
    f = random_delta_invariant(free2, 1, 1, 2)
    full, covers = doubled_partial_defect(f, free2, 1)
    assert covers
    _, covers = doubled_partial_defect(f, free2, 2, doubled_radius=2)
    assert not covers
    assert doubled_partial_defect(f, free2, 1, doubled_radius=2) == (full, True)
    with pytest.raises(DomainError):
        doubled_partial_defect(f, free2, 2, doubled_radius=1)
    g = random_delta_invariant(z2, 1, 1, 2)
    assert doubled_partial_defect(g, z2, 1)[1]


def test_bounded_scan_only_enforces_second_implication():
    report = QmReport(
        defect_D=Fraction(0),
        partial_D=Fraction(0),
        left_defect=Fraction(2),
        right_defect=Fraction(2),
        scope=Scope(Fraction(2)),
        bi_invariant=True,
    )
    assert not pqm_statements(report, Fraction(0), 1).consistent
    check = pqm_statements(report, Fraction(0), 1, covers_products=False)
    assert check.as_tuple() == (True, False, True)
    assert check.consistent
    broken = dataclasses.replace(report, partial_D=Fraction(3))
    assert not pqm_statements(broken, Fraction(0), 2, covers_products=False).consistent


def test_bounded_scan_on_free_group(free2):
    f = random_delta_invariant(free2, 1, 2, 5)
    check = check_pqm_implications(f, free2, 1, 2, strict=False, doubled_radius=2)
    assert not check.i_covers_products
    assert check.consistent


def test_pqm_constant_uses_global_lipschitz_number(free2):
    f = random_delta_invariant(free2, 1, 2, 3)
    assert pqm_constant_from_lipschitz(f, free2, 1, 4, strict=False) == 2 * exact_lip_norm(f, free2)
