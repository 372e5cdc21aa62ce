import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(42)


seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=2, max_value=6)
angles = st.floats(min_value=-np.pi, max_value=np.pi, allow_nan=False)


def state_from_seed(seed, dim):
    r = np.random.default_rng(seed)
    v = r.normal(size=dim) + 1j * r.normal(size=dim)
    return v / np.linalg.norm(v)
