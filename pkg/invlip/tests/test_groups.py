from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invlip.exceptions import DomainError, ResourceError
from invlip.groups import (EXACT, FiniteCayleyBackend, GroupSpace,
                           OracleBackend, Scope)
from invlip.words import Word, reduce


@pytest.mark.parametrize('radius,size', [(0, 1), (1, 5), (2, 17), (3, 53)])
def test_free_ball_sizes(free2, radius, size):
    assert len(free2.ball(radius)) == size


@pytest.mark.parametrize('radius,size', [(1, 5), (2, 13), (3, 25)])
def test_free_abelian_ball_sizes(z2, radius, size):
    assert len(z2.ball(radius)) == size


def test_ball_order(free2):
    """
    Balls list e first, then by distance and shortlex.
    """
    ball = free2.ball(1)
    assert [free2.format(w) for w in ball] == ['e', 'a', 'a^-1', 'b', 'b^-1']


def test_free_abelian_normal_form(z2):
    assert z2.parse('a b a^-1') == z2.parse('b')
    assert z2.length(z2.parse('a^2 b^-1')) == 3


SPACES = {
    'free': lambda: GroupSpace.free(('a', 'b')),
    'free_abelian': lambda: GroupSpace.free_abelian(('a', 'b')),
    'cyclic5': lambda: GroupSpace.cyclic(5),
    'symmetric3': GroupSpace.symmetric3,
}


@pytest.mark.parametrize('name', sorted(SPACES))
@settings(max_examples=50)
@given(data=st.data())
def test_left_invariance(name, data):
    space = SPACES[name]()
    letters = st.lists(
        st.tuples(st.integers(0, space.rank - 1), st.sampled_from([1, -1])),
        max_size=6,
    )
    g, h, k = (space.normal_form(reduce(data.draw(letters), space.rank)) for _ in range(3))
    assert space.distance(space.multiply(k, g), space.multiply(k, h)) == space.distance(g, h)


@pytest.mark.parametrize('name', sorted(SPACES))
def test_left_invariance_on_ball(name):
    space = SPACES[name]()
    ball = list(space.ball(2))
    for k in space.letters():
        for g in ball:
            for h in ball:
                assert space.distance(space.multiply(k, g), space.multiply(k, h)) == space.distance(g, h)


@pytest.mark.parametrize('name', sorted(SPACES))
def test_balls_are_nested(name):
    space = SPACES[name]()
    radii = [0, 1, Fraction(3, 2), 2, 3]
    balls = [set(space.ball(radius)) for radius in radii]
    for smaller, larger in zip(balls, balls[1:]):
        assert smaller <= larger
    assert all(space.length(w) <= 3 for w in balls[-1])


# a -> [[1, 2], [0, 1]], b -> [[1, 0], [2, 1]] generate a free subgroup of SL(2, Z)
SANOV = {
    (0, 1): (1, 2, 0, 1),
    (0, -1): (1, -2, 0, 1),
    (1, 1): (1, 0, 2, 1),
    (1, -1): (1, 0, -2, 1),
}


def _matmul(m, n):
    a, b, c, d = m
    p, q, r, s = n
    return (a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)


def _matrix(w):
    m = (1, 0, 0, 1)
    for letter in w:
        m = _matmul(m, SANOV[letter])
    return m


def _matinv(m):
    a, b, c, d = m
    return (d, -b, -c, a)


def test_free_distance_matches_cayley_graph(free2):
    """
    Breadth first search on the Cayley graph, with elements held as
    matrices rather than reduced words.
    """
    depth = {(1, 0, 0, 1): 0}
    frontier = [(1, 0, 0, 1)]
    for step in range(1, 9):
        following = []
        for m in frontier:
            for generator in SANOV.values():
                n = _matmul(m, generator)
                if n not in depth:
                    depth[n] = step
                    following.append(n)
        frontier = following
    assert len(depth) == 13121
    ball = list(free2.ball(4))
    matrices = {w: _matrix(w) for w in ball}
    for x in ball:
        inverse = _matinv(matrices[x])
        for y in ball:
            assert free2.distance(x, y) == depth[_matmul(inverse, matrices[y])]


def test_cyclic_group():
    space = GroupSpace.cyclic(5)
    assert space.is_finite
    assert space.order() == 5
    elements = space.elements()
    assert len(elements) == 5
    assert elements.radius == 2
    assert space.covers(elements)
    s = space.generator(0)
    assert space.power(s, 5) == space.identity
    assert space.length(space.power(s, 3)) == 2


def test_symmetric_group_relators():
    space = GroupSpace.symmetric3()
    assert space.order() == 6
    for relator in space.presentation.relators:
        assert space.normal_form(relator) == space.identity


def test_finite_cayley_cap():
    with pytest.raises(ResourceError):
        FiniteCayleyBackend([(1, 2, 3, 4, 0)], cap=3)


def test_ball_cap(free2, small_ball_cap):
    with pytest.raises(ResourceError):
        free2.ball(2)


def test_not_a_permutation():
    with pytest.raises(DomainError):
        FiniteCayleyBackend([(0, 0, 1)])


def test_elements_of_infinite_group(free2):
    with pytest.raises(DomainError):
        free2.elements()


def test_rank_mismatch(free2):
    with pytest.raises(DomainError):
        free2.normal_form(Word((), 3))


def test_far_element(free2):
    far = free2.far_element(Fraction(5, 2))
    assert free2.length(far) > Fraction(5, 2)


def test_scope_text():
    assert str(EXACT) == 'exact'
    assert str(Scope(Fraction(3))) == 'ball(3)'
    assert Scope.from_str('ball(3)') == Scope(Fraction(3))
    assert Scope.from_str('exact').exact


def test_oracle_backend():
    """
    A caller supplied Z_3 with the word metric.
    """
    def normal_form(w):
        k = sum(sign for _, sign in w.letters) % 3
        return Word(((0, 1),) * k, 1)

    def length(w):
        return min(len(w), 3 - len(w))

    space = GroupSpace(OracleBackend(1, normal_form, length, order=3), ('t',))
    assert space.is_finite
    assert len(space.elements()) == 3
    t = space.generator(0)
    assert space.distance(t, space.power(t, 2)) == 1
