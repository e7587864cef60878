from fractions import Fraction

import pytest

from invlip.exceptions import InstanceError
from invlip.instances import (load_instance, load_matrix, load_vector,
                              parse_fraction, parse_instance)
from invlip.lipschitz import Structured


def test_structured_instance(write_json):
    path = write_json('f2.json', {
        'group': {'backend': 'free', 'generators': ['a', 'b']},
        'function': {
            'kind': 'structured',
            'hom': ['1/2', '-1/3'],
            'support': [['a b', '1'], [[[1, -1]], '-2/3']],
        },
        'delta': '1',
    })
    instance = load_instance(path)
    space = instance.group
    assert space.generator_names == ('a', 'b')
    assert isinstance(instance.function, Structured)
    assert instance.function(space.parse('a b')) == Fraction(1, 2) - Fraction(1, 3) + 1
    assert instance.function(space.parse('b^-1')) == Fraction(1, 3) - Fraction(2, 3)
    assert instance.delta == 1
    assert not instance.is_random


def test_random_instance_reseeds(write_json):
    path = write_json('random.json', {
        'group': {'backend': 'free_abelian', 'generators': ['a', 'b']},
        'function': {'kind': 'random', 'delta': '1', 'support_radius': 2, 'seed': 1},
    })
    instance = load_instance(path)
    assert instance.is_random
    assert instance.group.presentation is not None
    other = instance.reseeded(2)
    assert other.function_data['seed'] == 2
    assert other.function != instance.function
    assert instance.reseeded(1).function == instance.function


def test_finite_cayley_instance():
    instance = parse_instance({
        'group': {
            'backend': 'finite_cayley',
            'generators': ['s'],
            'permutations': [[1, 2, 3, 0]],
            'relators': ['s^4'],
        },
        'function': {'kind': 'tabulated', 'values': [['s', '1'], ['s^2', '1/2'], ['s^-1', '0']]},
    })
    space = instance.group
    assert space.order() == 4
    assert space.presentation.relators[0].format(('s',)) == 's^4'
    assert instance.function(space.parse('s^3')) == 0


def test_example_instance():
    instance = parse_instance({
        'group': {'generators': ['x']},
        'function': {'kind': 'example', 'delta': '1', 'radius': 16},
    })
    assert instance.function(instance.group.parse('x^3')) == 3


def test_action_preset():
    instance = parse_instance({
        'action': {'preset': 'flip_ladder', 'rungs': 4},
        'function': {'kind': 'random', 'seed': 5},
    })
    assert instance.action is not None
    assert instance.group.order() == 2
    assert instance.function(0) == 0
    assert instance.reseeded(6).function != instance.function


SWAP = {'group': {'backend': 'finite_cayley', 'generators': ['s'], 'permutations': [[1, 0]]}}
SWAP_ACTION = {'dist': [[0, 1], [1, 0]], 'generator_actions': [[1, 0]], 'domain': [0]}


@pytest.mark.parametrize(
    'data,field',
    [
        ({'group': {'backend': 'free'}}, 'group.generators'),
        ({'group': {'backend': 'nope', 'generators': ['a']}}, 'group.backend'),
        ({'group': {'backend': 'free', 'generators': ['a'], 'relators': ['a^2']}}, 'group.relators'),
        ({'group': {'generators': ['a']}, 'function': {'kind': 'structured', 'hom': [0.5]}}, 'function.hom[0]'),
        ({'group': {'generators': ['a']}, 'function': {'kind': 'structured', 'hom': ['1', '2']}}, 'function.hom'),
        ({'group': {'generators': ['a']}, 'function': {'kind': 'wavy'}}, 'function.kind'),
        ({'group': {'generators': ['a']}, 'function': {'kind': 'tabulated', 'values': [['c', '1']]}},
         'function.values[0]'),
        ({'action': {'preset': 'flip_ladder'}, 'function': {'kind': 'tabulated', 'values': [['x', '1']]}},
         'function.values[0]'),
        ({'action': {'preset': 'flip_ladder'}, 'function': {'kind': 'random', 'seed': 1.5}}, 'function.seed'),
        ({'action': {'preset': 'flip_ladder', 'rungs': 'four'}}, 'action.rungs'),
        ({**SWAP, 'action': {**SWAP_ACTION, 'domain': ['a']}}, 'action.domain[0]'),
        ({**SWAP, 'action': {**SWAP_ACTION, 'generator_actions': [['x', 0]]}}, 'action.generator_actions[0][0]'),
        ({**SWAP, 'action': {**SWAP_ACTION, 'generator_actions': 1}}, 'action.generator_actions'),
        ({**SWAP, 'action': {**SWAP_ACTION, 'alpha': 'one'}}, 'action.alpha'),
        ({'group': {**SWAP['group'], 'permutations': [[1, 'b']]}}, 'group.permutations[0][1]'),
    ]
)
def test_errors_name_the_field(data, field):
    with pytest.raises(InstanceError) as excinfo:
        parse_instance(data)
    assert excinfo.value.field == field
    assert str(excinfo.value).startswith(f'{field}: ')


def test_invalid_json(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"group": {\n  "generators": [}\n')
    with pytest.raises(InstanceError, match='line 2'):
        load_instance(path)


def test_missing_file(tmp_path):
    with pytest.raises(InstanceError):
        load_instance(tmp_path / 'nothing.json')


def test_parse_fraction():
    assert parse_fraction('-3/6', 'x') == Fraction(-1, 2)
    assert parse_fraction(4, 'x') == 4
    for bad in (0.5, True, 'pi', '1/0'):
        with pytest.raises(InstanceError):
            parse_fraction(bad, 'x')


def test_matrix_and_vector(write_json):
    A = load_matrix(write_json('A.json', {'rows': [[2, '-3']]}))
    assert A.rows == ((2, -3),)
    assert load_vector(write_json('x.json', ['1', 0])) == (1, 0)
    assert load_vector(write_json('x2.json', {'values': ['1/2']})) == (Fraction(1, 2),)
    with pytest.raises(InstanceError):
        load_matrix(write_json('bad.json', {'rows': 3}))
