"""
Pytest configuration and shared fixtures for hamslab tests
"""

import logging

import pytest
import numpy as np

from hamslab.context.core import make_rng
from hamslab.context.targets import (
    CoxModel,
    DoubleWellTarget,
    GaussianTarget,
    SvModel,
    simulate_cox,
    simulate_sv,
)
from hamslab.models import HamsCoeffs


@pytest.fixture(scope="session")
def test_output_dir(tmp_path_factory):
    """Create temporary output directory for runs and tables"""
    output_dir = tmp_path_factory.mktemp("test_output")
    (output_dir / "runs").mkdir()
    (output_dir / "tables").mkdir()
    return output_dir


@pytest.fixture
def rng():
    """Seeded generator, fresh per test"""
    return make_rng(20240611, 0)


@pytest.fixture
def standard_gaussian():
    return GaussianTarget(1.0)


@pytest.fixture
def gaussian2():
    """Univariate N(0, 1/2)"""
    return GaussianTarget(2.0)


@pytest.fixture
def double_well():
    return DoubleWellTarget()


@pytest.fixture
def rotation_coeffs():
    """Noise-free coefficients (0.2, 0.6, 1.8, 1/3): a pure rotation at gamma = 1"""
    return HamsCoeffs(0.2, 0.6, 1.8, 1 / 3)


@pytest.fixture(scope="session")
def small_sv():
    """SV posterior with T_len = 50 on simulated data"""
    _, y = simulate_sv(50, 0.65, 0.15, 0.98, make_rng(11, 1))
    return SvModel(y, 0.65, 0.15, 0.98)


@pytest.fixture(scope="session")
def small_cox():
    """Cox posterior on a 4 x 4 grid"""
    mu = float(np.log(126) - 0.955)
    _, y = simulate_cox(4, 1.91, 1 / 33, mu, make_rng(11, 2))
    return CoxModel(y, 4, 1.91, 1 / 33, mu)


@pytest.fixture(autouse=True)
def reset_hamslab_logger():
    """CLI commands detach the package logger from the root; reattach it for caplog"""
    yield
    logger = logging.getLogger('hamslab')
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)
    logger.propagate = True
