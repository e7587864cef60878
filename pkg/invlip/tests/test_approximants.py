import dataclasses
import random
from fractions import Fraction

import pytest

from invlip.approximants import (FiniteActionSpace, adjusted_approximant,
                                 free_approximant, growth_vector, lift_to_free,
                                 optimality_check, orbit_collapse_approximant,
                                 presented_approximant, random_action_function,
                                 random_homomorphism, restrict_to_orbit,
                                 round_to_denominator, shrink_norm_check,
                                 well_defined)
from invlip.exceptions import (CertificationError, DomainError,
                               PreconditionError, ScopeError, ValidationError)
from invlip.groups import GroupSpace
from invlip.lipschitz import (Structured, Tabulated, delta_defect,
                              random_delta_invariant)
from invlip.words import Presentation, Word


def test_ramp_approximant(ramp, free1):
    """
    The best homomorphism for the ramp has slope 1/2 and misses by 1/2.
    """
    fbar, report = free_approximant(ramp, free1, 16)
    assert fbar.hom == (Fraction(1, 2),)
    assert report.achieved_exact == Fraction(1, 2)
    assert report.bound == Fraction(1, 2)
    assert report.passed
    assert report.scope.exact


@pytest.mark.parametrize('seed', range(1, 6))
@pytest.mark.parametrize('delta', [Fraction(1, 2), Fraction(3)])
def test_free_bound(free2, seed, delta):
    f = random_delta_invariant(free2, delta, 2, seed)
    fbar, report = free_approximant(f, free2, 2)
    assert fbar.is_homomorphism
    assert report.passed
    assert report.achieved_exact <= report.delta_hat / 2
    assert report.achieved_ball <= report.achieved_exact


@pytest.mark.parametrize('seed', range(1, 6))
def test_optimality(free2, seed):
    f = random_delta_invariant(free2, 1, 2, seed)
    fbar, _ = free_approximant(f, free2, 1)
    rng = random.Random(seed)
    candidates = [random_homomorphism(free2, rng) for _ in range(10)]
    assert optimality_check(f, fbar, candidates, free2)


def test_optimality_needs_exact_scope(free2):
    f = Tabulated.on_group(free2, {free2.parse('a'): 1})
    with pytest.raises(ScopeError):
        optimality_check(f, Structured.homomorphism([0, 0]), [], free2)


def test_free_approximant_needs_free_group():
    space = GroupSpace.cyclic(3)
    with pytest.raises(DomainError):
        free_approximant(random_delta_invariant(space, 1, 1, 1), space, 1)


def test_adjusted_approximant(free2):
    f = random_delta_invariant(free2, 1, 2, 9)
    c = growth_vector(f, free2, None)
    eta = Fraction(1, 4)
    u = round_to_denominator(c, 2)
    assert all(abs(a - b) <= eta for a, b in zip(u, c))
    fbar, report = adjusted_approximant(f, free2, u, eta, 1)
    assert fbar.hom == u
    assert report.bound == report.delta_hat / 2 + eta
    assert report.passed
    far_off = [v + 1 for v in c]
    with pytest.raises(PreconditionError, match='Generator a'):
        adjusted_approximant(f, free2, far_off, eta, 1)


def test_presented_free_abelian(z2):
    """
    The commutator has zero exponent sums, so nothing needs projecting.
    """
    f = random_delta_invariant(z2, 1, 2, 3)
    fbar, report, constants = presented_approximant(f, z2.presentation, z2, 2)
    assert constants['C_R'] == 2
    assert constants['D_emp'] == 0
    assert fbar.hom == growth_vector(lift_to_free(f, z2.presentation, z2), GroupSpace.free(('a', 'b')), 2)
    assert report.bound == report.delta_hat / 2
    assert report.passed
    assert report.extras['well_defined']


@pytest.mark.parametrize('seed', range(1, 6))
def test_presented_cyclic(seed):
    space = GroupSpace.cyclic(5)
    f = random_delta_invariant(space, 1, 2, seed)
    fbar, report, constants = presented_approximant(f, space.presentation, space, 2)
    assert fbar.hom == (0,)
    assert constants['C_R'] == Fraction(5, 2)
    assert constants['D_emp'] in (0, Fraction(1, 5))
    assert report.passed
    assert report.achieved <= report.delta_hat


def test_presented_two_generators():
    """
    A relator the homomorphism already kills needs no projection.
    """
    z2 = GroupSpace.free_abelian(('a', 'b'))
    f = Structured.homomorphism([1, 1])
    presentation = Presentation.from_strs(('a', 'b'), 'a^2 b^-2')
    space = dataclasses.replace(z2, presentation=presentation)
    fbar, report, constants = presented_approximant(f, presentation, space, 1)
    assert fbar.hom == (1, 1)
    assert constants['D_emp'] == 0
    assert report.passed


def test_relator_residual_too_large():
    """
    A homomorphism on Z^2 that does not kill the declared relator.
    """
    z2 = GroupSpace.free_abelian(('a', 'b'))
    presentation = Presentation.from_strs(('a', 'b'), 'a^2 b^-2')
    f = Structured.homomorphism([1, 0])
    with pytest.raises(CertificationError):
        presented_approximant(f, presentation, dataclasses.replace(z2, presentation=presentation), 1)


def test_well_defined():
    space = GroupSpace.cyclic(4)
    assert well_defined(Structured.homomorphism([0]), space.presentation, space, 2)
    assert not well_defined(Structured.homomorphism([1]), space.presentation, space, 2)


def test_well_defined_uses_the_quotient_word_problem():
    """
    With no relators listed, s^2 and s^-2 still name one element of Z_4.
    """
    space = GroupSpace.cyclic(4)
    bare = Presentation(('s',))
    assert not well_defined(Structured.homomorphism([1]), bare, space, 2)
    assert not well_defined(Structured.homomorphism([1]), space.presentation, space, 1)
    assert well_defined(Structured.homomorphism([0]), bare, space, 2)


def test_well_defined_on_free_abelian(z2):
    assert well_defined(Structured.homomorphism(['1/2', -3]), z2.presentation, z2, 1)


def test_flip_ladder_is_valid():
    fa = FiniteActionSpace.flip_ladder()
    assert fa.validate() == []
    assert len(fa.points) == 8
    assert fa.orbit(0) == {0, 1}


def test_validation_lists_failures():
    fa = dataclasses.replace(FiniteActionSpace.flip_ladder(), domain=(0,), alpha=Fraction(1, 2))
    failed = fa.validate()
    assert 'domain: orbits do not cover the space' in failed
    assert 'alpha: must be at least 1' in failed
    with pytest.raises(ValidationError):
        fa.ensure_valid()


def test_validation_catches_non_isometry():
    fa = FiniteActionSpace.flip_ladder(2)
    # swap the rungs on one side only
    broken = dataclasses.replace(fa, generator_actions=((2, 1, 0, 3),))
    assert any(item.startswith('isometry') for item in broken.validate())


@pytest.mark.parametrize('seed', range(1, 11))
def test_orbit_collapse(seed):
    fa = FiniteActionSpace.flip_ladder()
    f = random_action_function(fa, seed)
    fbar, report = orbit_collapse_approximant(fa, f)
    assert report.passed
    assert report.achieved <= 3 * report.delta_hat
    assert report.extras['invariant']
    for x in fa.points:
        assert fbar(x) == f(fa.representative[x])
        assert fbar(x) == fbar(fa.act(fa.group.generator(0), x))


def test_orbit_collapse_of_invariant_function():
    fa = FiniteActionSpace.flip_ladder()
    f = Tabulated({x: fa.labels[x][0] for x in fa.points}, 0)
    fbar, report = orbit_collapse_approximant(fa, f)
    assert report.delta_hat == 0
    assert report.achieved == 0
    assert fbar.values == f.values


@pytest.mark.parametrize('n', [2, 3, 5, 8])
def test_norm_collapse_on_cyclic(n):
    space = GroupSpace.cyclic(n)
    for seed in range(1, 6):
        f = random_delta_invariant(space, 1, space.elements().radius, seed)
        assert shrink_norm_check(space, f, delta_defect(f, space).delta_hat)


def test_norm_collapse_on_symmetric_group():
    space = GroupSpace.symmetric3()
    f = random_delta_invariant(space, 1, 3, 12)
    assert shrink_norm_check(space, f, delta_defect(f, space).delta_hat)


def test_norm_collapse_errors(free2):
    with pytest.raises(ScopeError):
        shrink_norm_check(free2, Structured.homomorphism([0, 0]), 1)
    space = GroupSpace.cyclic(5)
    f = random_delta_invariant(space, 1, 2, 1)
    with pytest.raises(PreconditionError):
        shrink_norm_check(space, f, delta_defect(f, space).delta_hat / 2)


def test_restrict_to_infinite_orbit(ramp, free1):
    a = free1.generator(0)
    restricted, cyclic = restrict_to_orbit(ramp, free1, free1.identity, free1.identity, a, radius=4)
    assert not cyclic.is_finite
    assert cyclic.pseudometric
    assert restricted(Word(((0, 1),) * 3, 1)) == 3
    assert restricted(Word(((0, -1),) * 2, 1)) == 0


def test_restrict_to_finite_orbit():
    space = GroupSpace.cyclic(6)
    f = random_delta_invariant(space, 1, 3, 2)
    s = space.generator(0)
    restricted, cyclic = restrict_to_orbit(f, space, s, space.identity, space.power(s, 2))
    assert cyclic.order() == 3
    assert len(restricted.values) == 3
    assert restricted(cyclic.identity) == 0
