import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "solver",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("solver")


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(12345))
