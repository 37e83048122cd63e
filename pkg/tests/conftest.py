import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from rcrm_ia.model.channels import gen_iid_channels
from rcrm_ia.schemas.system import CellularConfig, SystemConfig

settings.register_profile(
    "rcrm", max_examples=25, deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("rcrm")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def cfg_4x8_d1():
    return SystemConfig(K=3, M_t=8, M_r=4, d=1)


@pytest.fixture
def cfg_tiny():
    return SystemConfig(K=2, M_t=2, M_r=2, d=1)


@pytest.fixture
def cfg_cellular():
    return CellularConfig(K=3, M_t=6, M_r=4, d=2)


@pytest.fixture
def channels_4x8(cfg_4x8_d1, rng):
    return gen_iid_channels(cfg_4x8_d1, rng)
