import math

import pytest

from seqmeas import Coupling, JointSetup, make_direction, make_state


@pytest.fixture
def worked_setup():
    """The scenario worked through the module docs: alpha=pi/6, theta=pi/2, gamma^2=0.8."""
    return JointSetup(
        make_state(math.pi / 6, 0.0),
        make_direction(math.pi / 2, 0.0),
        Coupling(math.sqrt(0.8)),
    )
