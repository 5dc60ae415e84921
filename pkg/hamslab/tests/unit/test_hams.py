"""
Unit tests for HAMS coefficients, proposal, Delta G and the kernel
"""

import pytest
import numpy as np

from hamslab.context.hams import (
    HamsKernel,
    coeffs_from_sde,
    default_phi,
    delta_g_default,
    delta_g_general,
    forward_map,
    hams_a_coeffs,
    hams_b_coeffs,
    hams_k_coeffs,
    implied_eta,
    propose,
    sde_moments,
    shifted_propose,
    step,
)
from hamslab.errors import Degenerate, InvalidParams, SingularCovariance
from hamslab.models import HamsCoeffs, NoisePair, PhaseState, SdeParams, ShiftedHamsCoeffs


def zero_noise(k=1):
    return NoisePair(np.zeros(k), np.zeros(k))


class TestCoefficients:
    """SDE parametrization of (a1, a2, a3, phi)"""

    @pytest.mark.parametrize("a1,a2,expected", [(0.2, 0.6, 1 / 3), (0.0, 0.0, 0.0), (1.0, 0.5, 0.5)])
    def test_default_phi(self, a1, a2, expected):
        """Test phi = a2 / (2 - a1)"""
        assert default_phi(a1, a2) == pytest.approx(expected)

    def test_default_phi_degenerate(self):
        """Test that a1 = 2 raises Degenerate"""
        with pytest.raises(Degenerate):
            default_phi(2.0, 0.0)

    def test_exact_rotation(self):
        """Test eps=0.6, c1=c2=1 gives (0.2, 0.6, 1.8, 1/3)"""
        c = coeffs_from_sde(SdeParams(0.6, 1.0, 1.0))
        np.testing.assert_allclose([c.a1, c.a2, c.a3, c.phi], [0.2, 0.6, 1.8, 1 / 3], atol=1e-12)

    def test_damped_momentum(self):
        """Test eps=0.6, c2=exp(-0.6) against high-precision values"""
        c = coeffs_from_sde(SdeParams(0.6, 1.0, float(np.exp(-0.6))))
        np.testing.assert_allclose([c.a1, c.a2, c.a3, c.phi],
                                   [0.2, 0.444491, 0.987862, 0.246939], atol=1e-6)
        assert c.phi == pytest.approx(0.6 * np.exp(-0.3) / 1.8, abs=1e-12)

    def test_small_step_limit(self):
        """Test (a1, a2, a3) -> (0, 0, 2) as eps -> 0"""
        c = coeffs_from_sde(SdeParams(1e-8, 1.0, 1.0))
        np.testing.assert_allclose([c.a1, c.a2, c.a3], [0.0, 0.0, 2.0], atol=1e-7)

    def test_hams_a_is_singular(self):
        """Test a1*a3 = a2^2 for HAMS-A at eta2 = 0 and eta2 = 2"""
        c = hams_a_coeffs(0.6)
        assert c.a1 * c.a3 == pytest.approx(0.36, abs=1e-12)
        c = hams_a_coeffs(0.6, eta2=2.0)
        assert c.a1 * c.a3 == pytest.approx(c.a2 ** 2, abs=1e-12)
        assert c.a2 ** 2 == pytest.approx(0.197573, abs=1e-6)

    def test_hams_b_complement_is_singular(self):
        """Test (2 - a1)(2 - a3) = a2^2 for HAMS-B"""
        c = hams_b_coeffs(0.6)
        np.testing.assert_allclose([c.a1, c.a2, c.a3], [0.2, 0.6, 1.8], atol=1e-12)
        assert (2 - c.a1) * (2 - c.a3) == pytest.approx(c.a2 ** 2, abs=1e-12)

    def test_hams_k_carryover(self):
        """Test eps=0.1, k=2 gives c1 = exp(-0.01)"""
        c = hams_k_coeffs(0.1, 2)
        s = np.sqrt(1 - 0.01)
        c1 = (2 - c.a1) / (1 + s)
        assert c1 == pytest.approx(0.990050, abs=1e-6)

    def test_hams_k_zero_is_hams_a(self):
        """Test k=0 leaves a1*a3 = a2^2"""
        c = hams_k_coeffs(0.6, 0)
        assert c.a1 * c.a3 == pytest.approx(c.a2 ** 2, abs=1e-12)

    def test_hams_k_rejects_bad_inputs(self):
        """Test k < 0 and eps = 1 are rejected"""
        with pytest.raises(InvalidParams):
            hams_k_coeffs(0.3, -1)
        with pytest.raises(InvalidParams):
            hams_k_coeffs(1.0, 1)

    def test_invalid_a_matrix(self):
        """Test that a1 > 2 fails the coefficient invariants"""
        with pytest.raises(InvalidParams):
            HamsCoeffs(2.5, 0.0, 1.0, 0.0)

    def test_implied_friction(self):
        """Test the spectral optimum implies eta = 2 + 5 eps^2 / 12 + O(eps^4)"""
        for eps in (0.1, 0.05):
            assert abs(implied_eta(eps) - (2 + 5 * eps ** 2 / 12)) < 10 * eps ** 4

    def test_sde_moments_leading_order(self):
        """Test D ~ eps [[-eta1, 1], [-1, -eta2]] and cov ~ 2 eps diag(eta1, eta2)"""
        eps = 1e-3
        drift, cov = sde_moments(SdeParams.from_friction(eps, 1.0, 2.0))
        np.testing.assert_allclose(drift / eps, [[-1, 1], [-1, -2]], atol=1e-2)
        np.testing.assert_allclose(cov.as_matrix() / eps, [[2, 0], [0, 4]], atol=1e-2)


class TestProposal:
    """Forward map and Delta G"""

    def test_zero_noise_rotation(self, standard_gaussian, rotation_coeffs):
        """Test the noiseless proposal from (1, 0) lands on (0.8, -0.6)"""
        state = PhaseState(np.array([1.0]), np.array([0.0]))
        outcome = propose(standard_gaussian, state, rotation_coeffs, noise=zero_noise())
        np.testing.assert_allclose(outcome.proposed.x, [0.8])
        np.testing.assert_allclose(outcome.proposed.u, [-0.6])
        assert float(outcome.delta_g) == pytest.approx(0.0, abs=1e-12)

    def test_standard_gaussian_is_rejection_free(self, standard_gaussian, rng):
        """Test Delta G = 0 for random states and noise under N(0, 1)"""
        coeffs = hams_a_coeffs(0.7, eta2=1.0)
        state = PhaseState(rng.standard_normal((200, 1)), rng.standard_normal((200, 1)))
        outcome = propose(standard_gaussian, state, coeffs, rng)
        assert np.max(np.abs(outcome.delta_g)) < 1e-10

    def test_delta_g_worked_case(self, gaussian2):
        """Test gamma=2, x0=1, u0=1, Z1=0.1 gives 0.076667"""
        a1, a2 = 0.2, 0.6
        x0, u0, z1 = np.array([1.0]), np.array([1.0]), np.array([0.1])
        g0 = gaussian2.gradient(x0)
        xstar = x0 - a1 * g0 + a2 * u0 + z1
        np.testing.assert_allclose(xstar, [1.3])
        dg = delta_g_default(gaussian2, x0, u0, z1, g0, xstar, gaussian2.gradient(xstar), a1, a2)
        assert float(dg) == pytest.approx(0.4 / 3.6 * 0.3 * 2.3, abs=1e-9)

    def test_delta_g_matches_propose(self, gaussian2, rotation_coeffs):
        """Test propose reports the same Delta G as the closed form"""
        state = PhaseState(np.array([1.0]), np.array([1.0]))
        outcome = propose(gaussian2, state, rotation_coeffs, noise=NoisePair([0.1], [0.0]))
        assert float(outcome.delta_g) == pytest.approx(0.076667, abs=1e-6)

    def test_delta_g_vanishing_factor(self, gaussian2):
        """Test a2*u0 + Z1 = a1*gamma*x0 gives Delta G = 0"""
        a1, a2 = 0.2, 0.6
        x0, u0, z1 = np.array([1.0]), np.array([0.5]), np.array([0.1])
        g0 = gaussian2.gradient(x0)
        xstar = x0 - a1 * g0 + a2 * u0 + z1
        dg = delta_g_default(gaussian2, x0, u0, z1, g0, xstar, gaussian2.gradient(xstar), a1, a2)
        assert float(dg) == pytest.approx(0.0, abs=1e-12)

    def test_general_agrees_with_default(self, gaussian2, rng):
        """Test the full G difference equals the closed form when phi is the default"""
        coeffs = coeffs_from_sde(SdeParams(0.5, 0.8, 0.9))
        state = PhaseState(rng.standard_normal((50, 1)), rng.standard_normal((50, 1)))
        outcome = propose(gaussian2, state, coeffs, rng)
        state = PhaseState(state.x, state.u, *gaussian2.evaluate(state.x))
        general = delta_g_general(gaussian2, state, outcome.proposed,
                                  outcome.z_forward, outcome.z_backward, coeffs)
        np.testing.assert_allclose(general, outcome.delta_g, atol=1e-9)

    def test_general_rejection_free(self, standard_gaussian, rng):
        """Test the general Delta G vanishes under N(0, 1) for nonsingular coefficients"""
        coeffs = coeffs_from_sde(SdeParams(0.5, 0.8, 0.9))
        x = rng.standard_normal((50, 1))
        state = PhaseState(x, rng.standard_normal((50, 1)), *standard_gaussian.evaluate(x))
        outcome = propose(standard_gaussian, state, coeffs, rng)
        general = delta_g_general(standard_gaussian, state, outcome.proposed,
                                  outcome.z_forward, outcome.z_backward, coeffs)
        assert np.max(np.abs(general)) < 1e-10

    def test_general_rejects_singular(self, standard_gaussian, rng):
        """Test HAMS-A coefficients make the general form raise"""
        coeffs = hams_a_coeffs(0.6, eta2=1.0)
        state = PhaseState(np.array([0.3]), np.array([0.1]))
        proposed, backward = forward_map(standard_gaussian, state, coeffs, zero_noise())
        with pytest.raises(SingularCovariance):
            delta_g_general(standard_gaussian, state, proposed, zero_noise(), backward, coeffs)

    def test_backward_noise_is_an_involution(self, gaussian2, rng):
        """Test that mapping (x*, -u*) with -Z* returns (x0, -u0)"""
        coeffs = coeffs_from_sde(SdeParams(0.5, 0.8, 0.9))
        state = PhaseState(rng.standard_normal((4, 1)), rng.standard_normal((4, 1)))
        noise = NoisePair(rng.standard_normal((4, 1)), rng.standard_normal((4, 1)))
        proposed, backward = forward_map(gaussian2, state, coeffs, noise)
        back, _ = forward_map(gaussian2, proposed.flipped(), coeffs, -backward)
        np.testing.assert_allclose(back.x, state.x, atol=1e-12)
        np.testing.assert_allclose(back.u, -state.u, atol=1e-12)

    def test_shifted_without_shift(self, gaussian2, rng):
        """Test b = 0 reproduces the phi = 0 forward map"""
        coeffs = hams_a_coeffs(0.6, eta2=1.0)
        sc = ShiftedHamsCoeffs(coeffs.a1, coeffs.a2, coeffs.a3, 0.0)
        state = PhaseState(rng.standard_normal((3, 1)), rng.standard_normal((3, 1)))
        noise = NoisePair(rng.standard_normal((3, 1)), rng.standard_normal((3, 1)))
        shifted = shifted_propose(gaussian2, state, sc, noise=noise)
        plain, _ = forward_map(gaussian2, state, HamsCoeffs(coeffs.a1, coeffs.a2, coeffs.a3, 0.0), noise)
        np.testing.assert_allclose(shifted.x, plain.x, atol=1e-12)
        np.testing.assert_allclose(shifted.u, plain.u, atol=1e-12)


class TestKernelStep:
    """Accept/reject with momentum negation"""

    def test_forced_rejection(self, gaussian2, rotation_coeffs, rng):
        """Test a uniform draw of 1.0 returns (x0, -u0)"""
        state = PhaseState(np.array([1.0]), np.array([1.0]))
        result = step(gaussian2, state, rotation_coeffs, rng, uniform=np.array(1.0))
        assert not bool(result.accepted)
        np.testing.assert_array_equal(result.state.x, [1.0])
        np.testing.assert_array_equal(result.state.u, [-1.0])

    def test_standard_gaussian_always_accepts(self, standard_gaussian, rng):
        """Test 10^4 transitions under N(0, 1) are all accepted"""
        kernel = HamsKernel(standard_gaussian, hams_a_coeffs(0.8, eta2=1.0))
        state = kernel.prepare(PhaseState(rng.standard_normal((100, 1)), rng.standard_normal((100, 1))))
        accepted = 0
        for _ in range(100):
            result = kernel.step(state, rng)
            accepted += int(np.sum(result.accepted))
            state = result.state
        assert accepted == 10_000

    def test_unmetropolized_keeps_proposals(self, gaussian2, rng):
        """Test metropolize=False flags every step as accepted"""
        kernel = HamsKernel(gaussian2, hams_a_coeffs(0.9), metropolize=False)
        result = kernel.step(PhaseState(np.ones((5, 1)), np.ones((5, 1))), rng)
        assert result.accepted.all()
        assert "HamsKernel" in repr(kernel)
