import numpy as np
import pytest

from tuberupture import InvariantModel, Params, integrate_coupled, integrate_y

# the standard parameter set used throughout
EPS = 0.08
Y0 = 1.0
Z0 = 0.25


@pytest.fixture(scope="session")
def params():
    return Params(epsilon=EPS, y0=Y0, z0=Z0)


@pytest.fixture(scope="session")
def exp_model(params):
    return InvariantModel.exponential(params)


@pytest.fixture(scope="session")
def y_trajectory_30pi(params):
    """Reference y-integration used by perturbation-quality checks."""
    return integrate_y(params, 30 * np.pi, 1e-12, 1e-12)


@pytest.fixture(scope="session")
def coupled_trajectory_20pi(params):
    """Coupled (y, z) trajectory at the conservation-oracle tolerance."""
    return integrate_coupled(params, 20 * np.pi, 1e-10, 1e-10)
