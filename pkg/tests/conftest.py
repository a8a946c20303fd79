import numpy as np
import pytest

from unibandit import RankOneInstance

# the symmetric 4x4 instance used across the regret experiments
K4_FACTOR = (0.75, 0.25, 0.25, 0.25)
K4_LOWER_BOUND = 7.576279173120797
K4_FULL_SUM = 15.372810324642598


@pytest.fixture
def k4_instance() -> RankOneInstance:
    return RankOneInstance(K4_FACTOR, K4_FACTOR)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)
