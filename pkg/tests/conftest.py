import numpy as np
import pytest

from cyclone_ri.elman import TopologyT, init_weights

BDECK_TEXT = """\
SH, 05, 1995011000,   , BEST,   0, 141S, 1723E,  45, 990, TS
SH, 05, 1995011006,   , BEST,   0, 145S, 1720E,  50, 985, TS
SH, 05, 1995011006,   , BEST,   0, 146S, 1719E,  55, 984, TS
"""


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def bdeck_text():
    return BDECK_TEXT


@pytest.fixture
def small_net():
    return init_weights(TopologyT(hidden=3), seed=7)


@pytest.fixture
def spec_net():
    return init_weights(TopologyT(hidden=5), seed=0)
