"""
Unit tests for Cholesky whitening
"""

import pytest
import numpy as np
from scipy.linalg import solve_triangular

from hamslab.context.core import metropolis_accept, select_state
from hamslab.context.hams import HamsKernel, hams_a_spectral, hams_b_spectral, propose
from hamslab.context.hams.kernel import with_cache
from hamslab.context.precondition import (
    WhitenedTarget,
    build_whitener,
    build_whitener_from_precision,
    whiten,
)
from hamslab.context.targets import GaussianTarget, preconditioner_matrix
from hamslab.errors import InvalidParams, NotPD
from hamslab.models import NoisePair, PhaseState


def spd_matrix(k, seed=3):
    A = np.random.default_rng(seed).standard_normal((k, k))
    return A @ A.T + k * np.eye(k)


class TestBuildWhitener:
    """L with L L^T = Sigma-hat^{-1}"""

    def test_identity(self):
        """Test Sigma-hat = I gives L = I"""
        np.testing.assert_allclose(build_whitener(np.eye(3)), np.eye(3), atol=1e-15)

    def test_diagonal(self):
        """Test Sigma-hat = diag(4, 1) gives L = diag(0.5, 1)"""
        np.testing.assert_allclose(build_whitener(np.diag([4.0, 1.0])), np.diag([0.5, 1.0]),
                                   atol=1e-15)

    def test_sv_residual(self, small_sv):
        """Test L L^T Sigma-hat = I to 1e-8 for the SV preconditioner at T = 50"""
        sigma_hat = preconditioner_matrix(small_sv)
        L = build_whitener(sigma_hat)
        assert np.max(np.abs(L @ L.T @ sigma_hat - np.eye(small_sv.dim))) <= 1e-8
        assert np.all(np.triu(L, 1) == 0)

    def test_read_only(self):
        """Test the returned factor cannot be modified in place"""
        L = build_whitener_from_precision(spd_matrix(3))
        with pytest.raises(ValueError):
            L[0, 0] = 1.0

    def test_not_positive_definite(self):
        """Test an indefinite Sigma-hat is refused"""
        with pytest.raises(NotPD):
            build_whitener(np.diag([1.0, -1.0]))


class TestWhitenedTarget:
    """Coordinates, potential and gradient after whitening"""

    def test_identity_whitener(self, rng):
        """Test L = I leaves potential and gradient unchanged"""
        model = GaussianTarget(precision=spd_matrix(3))
        wrapped = whiten(model, np.eye(3))
        x = rng.standard_normal((5, 3))
        np.testing.assert_allclose(wrapped.potential(x), model.potential(x), atol=1e-14)
        np.testing.assert_allclose(wrapped.gradient(x), model.gradient(x), atol=1e-14)

    def test_coordinate_maps_invert(self, rng):
        """Test to_original undoes to_whitened"""
        wrapped = whiten(GaussianTarget(precision=spd_matrix(4)),
                         build_whitener_from_precision(spd_matrix(4, seed=5)))
        x = rng.standard_normal((6, 4))
        np.testing.assert_allclose(wrapped.to_original(wrapped.to_whitened(x)), x, atol=1e-12)

    def test_gaussian_becomes_standard(self, rng):
        """Test whitening N(0, P^{-1}) with L L^T = P yields U(x_hat) = |x_hat|^2 / 2"""
        P = spd_matrix(3)
        wrapped = whiten(GaussianTarget(precision=P), build_whitener_from_precision(P))
        x_hat = rng.standard_normal((8, 3))
        np.testing.assert_allclose(wrapped.potential(x_hat), 0.5 * np.sum(x_hat ** 2, axis=-1),
                                   atol=1e-12)
        np.testing.assert_allclose(wrapped.gradient(x_hat), x_hat, atol=1e-12)

    def test_gaussian_chain_is_rejection_free(self, rng):
        """Test HAMS on the whitened Gaussian accepts every proposal"""
        P = spd_matrix(3)
        wrapped = whiten(GaussianTarget(precision=P), build_whitener(np.linalg.inv(P)))
        kernel = HamsKernel(wrapped, hams_a_spectral(0.6))
        state = kernel.prepare(PhaseState(rng.standard_normal((10, 3)), rng.standard_normal((10, 3))))
        for _ in range(50):
            result = kernel.step(state, rng)
            assert np.all(np.abs(result.delta_g) <= 1e-9)
            assert result.accepted.all()
            state = result.state

    def test_sv_gradient_finite_difference(self, small_sv, rng):
        """Test the whitened SV gradient against central differences"""
        wrapped = whiten(small_sv, build_whitener(preconditioner_matrix(small_sv)))
        x_hat = wrapped.to_whitened(0.3 * rng.standard_normal(small_sv.dim))
        h = 1e-6
        grad = wrapped.gradient(x_hat)
        for i in (0, 17, small_sv.dim - 1):
            e = np.zeros(small_sv.dim)
            e[i] = h
            fd = (wrapped.potential(x_hat + e) - wrapped.potential(x_hat - e)) / (2 * h)
            assert grad[i] == pytest.approx(float(fd), abs=1e-5)

    def test_evaluate_agrees(self, small_sv, rng):
        """Test evaluate returns the same pair as potential and gradient"""
        wrapped = whiten(small_sv, build_whitener(preconditioner_matrix(small_sv)))
        x_hat = 0.1 * rng.standard_normal((2, small_sv.dim))
        potential, grad = wrapped.evaluate(x_hat)
        np.testing.assert_allclose(potential, wrapped.potential(x_hat), rtol=1e-12)
        np.testing.assert_allclose(grad, wrapped.gradient(x_hat), rtol=1e-12, atol=1e-12)

    def test_shape_checked(self):
        """Test a whitener of the wrong size is refused"""
        with pytest.raises(InvalidParams):
            WhitenedTarget(GaussianTarget(dim=3), np.eye(2))

    def test_upper_triangle_refused(self):
        """Test a whitener with entries above the diagonal is refused"""
        with pytest.raises(InvalidParams):
            WhitenedTarget(GaussianTarget(dim=2), np.array([[1.0, 0.5], [0.0, 1.0]]))


def preconditioned_hams_step(model, L, x_t, u_t, grad_hat_t, a, b, zeta, w, variant):
    """One iteration of preconditioned HAMS-A/B written out line by line in (a, b) form"""
    xi = np.sqrt(a * b) * u_t + np.sqrt(a * (2 - a - b)) * zeta
    x_hat_star = L.T @ x_t - a * grad_hat_t + xi
    x_star = solve_triangular(L.T, x_hat_star, lower=False)
    grad_hat_star = solve_triangular(L, model.gradient(x_star), lower=True)
    xi_tilde = grad_hat_star + grad_hat_t
    rho = np.exp(model.potential(x_t) - model.potential(x_star)
                 + xi_tilde @ (xi - a / 2 * xi_tilde) / (2 - a))
    if w < min(1.0, rho):
        if variant == 'hams-a':
            u_next = ((2 * b / (2 - a) - 1) * u_t + 2 * np.sqrt(b * (2 - a - b)) / (2 - a) * zeta
                      - np.sqrt(a * b) / (2 - a) * xi_tilde)
        else:
            u_next = u_t - np.sqrt(a * b) / (2 - a) * xi_tilde
        return x_star, u_next, grad_hat_star, rho
    return x_t, -u_t, grad_hat_t, rho


class TestPreconditionedAlgorithm:
    """Kernel on the whitened target against the preconditioned HAMS-A/B iteration"""

    @pytest.mark.parametrize("variant,make_coeffs", [('hams-a', hams_a_spectral),
                                                     ('hams-b', hams_b_spectral)])
    def test_matches_written_out_iteration(self, small_sv, variant, make_coeffs):
        """Test 20 steps on whitened SV agree with the written-out iteration under shared noise"""
        coeffs = make_coeffs(0.5)
        a = coeffs.a1
        b = coeffs.a2 ** 2 / a
        L = build_whitener(preconditioner_matrix(small_sv))
        target = whiten(small_sv, L)
        draws = np.random.default_rng(8)

        x_t = 0.3 * draws.standard_normal(small_sv.dim)
        u_t = draws.standard_normal(small_sv.dim)
        grad_hat_t = solve_triangular(L, small_sv.gradient(x_t), lower=True)
        state = PhaseState(target.to_whitened(x_t), u_t.copy())
        n_accepted = 0
        for _ in range(20):
            zeta = draws.standard_normal(small_sv.dim)
            w = draws.random()
            z1 = np.sqrt(a * (2 - a - b)) * zeta
            if variant == 'hams-a':
                z2 = np.sqrt(b * (2 - a - b)) * zeta
            else:
                z2 = -coeffs.phi * z1
            outcome = propose(target, state, coeffs, noise=NoisePair(z1, z2))
            accepted, _ = metropolis_accept(outcome.delta_g, None, uniform=np.asarray(w))
            state = select_state(accepted, outcome.proposed, with_cache(target, state))

            x_t, u_t, grad_hat_t, rho = preconditioned_hams_step(
                small_sv, L, x_t, u_t, grad_hat_t, a, b, zeta, w, variant)
            assert float(outcome.delta_g) == pytest.approx(-np.log(rho), abs=1e-9)
            assert bool(accepted) == (w < min(1.0, rho))
            n_accepted += int(accepted)
            np.testing.assert_allclose(target.to_original(state.x), x_t, atol=1e-9)
            np.testing.assert_allclose(state.u, u_t, atol=1e-9)
            np.testing.assert_allclose(state.grad, grad_hat_t, atol=1e-9)
        assert 0 < n_accepted
