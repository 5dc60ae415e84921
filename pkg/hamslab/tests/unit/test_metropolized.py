"""
Unit tests for Metropolis-adjusted BAOAB, ABOBA and BP
"""

import pytest
import numpy as np

from hamslab.context.metropolized import (
    MetropolizedKernel,
    ma_delta_g_crosscheck,
    ma_propose,
    ma_step,
)
from hamslab.errors import InvalidParams
from hamslab.models import PhaseState

KINDS = ['baoab', 'aboba', 'bp']
NOISE = {'baoab': 1, 'aboba': 1, 'bp': 2}


class TestDeltaG:
    """Closed-form Delta G against the reconstructed backward noise"""

    @pytest.mark.parametrize("kind", KINDS)
    def test_crosscheck_double_well(self, kind, double_well, rng):
        """Test 100 random double-well cases agree to 1e-9"""
        x0 = rng.uniform(-1.5, 1.5, (100, 1))
        u0 = rng.standard_normal((100, 1))
        noise = rng.standard_normal((NOISE[kind], 100, 1))
        closed, direct = ma_delta_g_crosscheck(kind, double_well, x0, u0, noise, 0.3, eta=1.0)
        assert np.max(np.abs(closed - direct)) <= 1e-9

    @pytest.mark.parametrize("kind", KINDS)
    def test_crosscheck_without_friction(self, kind, double_well, rng):
        """Test the crosscheck holds at c = 1 where the noise drops out"""
        x0 = rng.uniform(-1.5, 1.5, (20, 1))
        u0 = rng.standard_normal((20, 1))
        noise = rng.standard_normal((NOISE[kind], 20, 1))
        closed, direct = ma_delta_g_crosscheck(kind, double_well, x0, u0, noise, 0.3, c=1.0)
        assert np.max(np.abs(closed - direct)) <= 1e-9

    @pytest.mark.parametrize("kind", KINDS)
    def test_vanishes_with_step(self, kind, double_well):
        """Test Delta G -> 0 as eps -> 0 at a fixed state"""
        state = PhaseState(np.array([0.4]), np.array([0.9]))
        noise = np.full((NOISE[kind], 1), 0.5)
        coarse = ma_propose(kind, double_well, state, 0.1, 1.0, noise=noise).delta_g
        fine = ma_propose(kind, double_well, state, 1e-4, 1.0, noise=noise).delta_g
        assert abs(float(fine)) < 1e-6
        assert abs(float(fine)) < abs(float(coarse))

    def test_leapfrog_energy_error(self, gaussian2):
        """Test BAOAB at c = 1 reports the leapfrog Hamiltonian error"""
        eps = 0.3
        state = PhaseState(np.array([0.7]), np.array([-0.4]))
        outcome = ma_propose('baoab', gaussian2, state, eps, c=1.0, noise=np.zeros((1, 1)))
        g0 = gaussian2.gradient(state.x)
        x = state.x - eps ** 2 / 2 * g0 + eps * state.u
        u = state.u - eps / 2 * (g0 + gaussian2.gradient(x))
        energy = (gaussian2.potential(x) + 0.5 * np.sum(u ** 2)
                  - gaussian2.potential(state.x) - 0.5 * np.sum(state.u ** 2))
        np.testing.assert_allclose(outcome.proposed.x, x, atol=1e-14)
        assert float(outcome.delta_g) == pytest.approx(float(energy), abs=1e-12)


class TestStep:
    """Accept/reject"""

    @pytest.mark.parametrize("kind", KINDS)
    def test_forced_rejection(self, kind, double_well, rng):
        """Test a uniform draw of 1.0 returns (x0, -u0)"""
        state = PhaseState(np.array([0.3]), np.array([0.8]))
        result = ma_step(kind, double_well, state, 0.5, 1.0, rng, uniform=np.array(1.0))
        assert not bool(result.accepted)
        np.testing.assert_array_equal(result.state.x, [0.3])
        np.testing.assert_array_equal(result.state.u, [-0.8])

    def test_unsupported_kind(self, double_well, rng):
        """Test only BAOAB, ABOBA and BP have Metropolized forms"""
        with pytest.raises(InvalidParams):
            MetropolizedKernel(double_well, 'gjf', 0.2, eta=1.0)

    def test_carryover_range(self, double_well):
        """Test an explicit carryover must lie in (0, 1]"""
        with pytest.raises(InvalidParams):
            MetropolizedKernel(double_well, 'bp', 0.2, c=1.5)

    def test_kernel_chain(self, gaussian2, rng):
        """Test a batched BP chain mixes with high acceptance at a small step"""
        kernel = MetropolizedKernel(gaussian2, 'bp', 0.2, eta=1.0)
        state = kernel.prepare(PhaseState(rng.standard_normal((50, 1)), rng.standard_normal((50, 1))))
        accepted = []
        for _ in range(100):
            result = kernel.step(state, rng)
            accepted.append(result.accepted)
            state = result.state
        assert np.mean(accepted) > 0.99
        assert "bp" in repr(kernel)
