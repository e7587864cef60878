import json
from fractions import Fraction

import pytest

from invlip.config import set_max_ball
from invlip.groups import GroupSpace
from invlip.lipschitz import example_function


@pytest.fixture
def free2():
    return GroupSpace.free(('a', 'b'))


@pytest.fixture
def free1():
    return GroupSpace.free(('a',))


@pytest.fixture
def z2():
    return GroupSpace.free_abelian(('a', 'b'))


@pytest.fixture
def ramp():
    """The ramp on Z with delta = 1."""
    return example_function(Fraction(1))


@pytest.fixture
def small_ball_cap():
    set_max_ball(10)
    yield 10
    set_max_ball(None)


@pytest.fixture
def write_json(tmp_path):
    """Write data to a file under tmp_path and return the path."""
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return path
    return write
