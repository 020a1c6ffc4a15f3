import pytest

from swiptrelay.channel import Geometry
from swiptrelay.system import SystemParams


@pytest.fixture
def params():
    """Default scenario: relay halfway, shapes (2, 2, 1), k1 = k2 = 0.1."""
    return SystemParams.from_geometry(Geometry(), m_a=2, m_b=2, m_d=1)


@pytest.fixture
def relaying_params(params):
    """Scenario where the relayed links matter, cooperative regime."""
    return params.replace(rho=1e5, R_th=0.5)


@pytest.fixture
def asymmetric_params(relaying_params):
    return relaying_params.with_shapes(m_a=2, m_b=3)


@pytest.fixture
def ideal_params(params):
    return params.with_impairment(0.0)
