import pytest
from hypothesis import given
from hypothesis import strategies as st

from invlip.exceptions import DomainError
from invlip.words import (Presentation, Word, exponent_matrix, exponent_sum,
                          generator, identity, invert, multiply, power, reduce)

NAMES = ('a', 'b')
letters = st.lists(st.tuples(st.integers(0, 1), st.sampled_from([1, -1])), max_size=12)


@pytest.mark.parametrize(
    'text,expected',
    [
        ('a b a^-1', 'a b a^-1'),
        ('aab', 'a^2 b'),
        ('a a^-1', 'e'),
        ('e', 'e'),
        ('b^-3 * a', 'b^-3 a'),
    ]
)
def test_parse_format(text, expected):
    """
    Text round trips through reduced words.
    """
    assert Word.parse(text, NAMES).format(NAMES) == expected


def test_parse_rejects_unknown_generator():
    with pytest.raises(DomainError):
        Word.parse('a c', NAMES)


def test_constructor_rejects_unreduced():
    with pytest.raises(DomainError):
        Word(((0, 1), (0, -1)), 2)


def test_reduce_cancels():
    assert reduce([(0, 1), (1, 1), (1, -1), (0, -1), (1, 1)], 2) == generator(1, 2)


@given(letters, letters, letters)
def test_multiply_is_associative(x, y, z):
    u, v, w = reduce(x, 2), reduce(y, 2), reduce(z, 2)
    assert multiply(multiply(u, v), w) == multiply(u, multiply(v, w))


@given(letters)
def test_inverse(x):
    w = reduce(x, 2)
    assert multiply(w, invert(w)) == identity(2)
    assert (w * ~w).is_identity


@given(letters, st.integers(-4, 4))
def test_power_exponent_sum(x, n):
    w = reduce(x, 2)
    assert exponent_sum(power(w, n), 0) == n * exponent_sum(w, 0)


def test_json_round_trip():
    w = Word.parse('a b^-1', NAMES)
    assert w.to_json() == [[0, 1], [1, -1]]
    assert Word.from_json(w.to_json(), 2) == w


def test_from_json_rejects_garbage():
    with pytest.raises(DomainError):
        Word.from_json([[0]], 2)


def test_sort_key_is_shortlex():
    words = [Word.parse(t, NAMES) for t in ('b', 'a^-1', 'a', 'e', 'a b')]
    ordered = sorted(words, key=Word.sort_key)
    assert [w.format(NAMES) for w in ordered] == ['e', 'a', 'a^-1', 'b', 'a b']


def test_exponent_matrix_commutator():
    p = Presentation.from_strs(NAMES, 'a b a^-1 b^-1')
    assert exponent_matrix(p).rows == ((0, 0),)
    assert exponent_matrix(p).shape == (1, 2)


def test_exponent_matrix_cyclic():
    p = Presentation.from_strs(('s',), 's^5')
    assert exponent_matrix(p).rows == ((5,),)


def test_presentation_checks():
    with pytest.raises(DomainError):
        Presentation(('a', 'a'))
    with pytest.raises(DomainError):
        Presentation(NAMES, (identity(2),))
    assert Presentation.from_strs(NAMES, 'a^2', 'b^2').format() == '<a,b | a^2, b^2>'
