"""
Integration tests for analytic tables, validation suites and the public API
"""

import math

import pytest
import numpy as np

from hamslab.api import HamsLab, sample, theory
from hamslab.context.analytic import expected_acceptance, expected_acceptance_ma
from hamslab.context.hams import hams_k_coeffs
from hamslab.context.targets import GaussianTarget
from hamslab.services import match_table, run_suites, theory_table
from hamslab.services.theory import THEORY_COLUMNS, acceptance_slope
from hamslab.services.validation import SUITES

SLOPE_GRID = (0.05, 0.1, 0.15, 0.2)


class TestTheoryTable:
    """Analytic quantities over (eps, k, gamma)"""

    def test_single_a1(self):
        """Test a1 = 0.2 at gamma = 2 gives Var(x) = 0.5625 and E[alpha] = 0.97001"""
        frame = theory_table(gammas=(2.0,), a1=0.2)
        assert list(frame.columns) == THEORY_COLUMNS
        row = frame.iloc[0]
        assert row['var_x'] == pytest.approx(0.5625, abs=1e-9)
        assert row['var_x_lyapunov'] == pytest.approx(0.5625, abs=1e-9)
        assert row['expected_acceptance'] == pytest.approx(0.97001, abs=1e-5)
        assert row['rho_min'] == pytest.approx(0.367544, abs=1e-6)

    def test_default_grid(self):
        """Test the default grid covers 3 step sizes, 4 orders and 2 precisions"""
        frame = theory_table()
        assert len(frame) == 24
        finite = frame.dropna(subset=['var_x_lyapunov'])
        np.testing.assert_allclose(finite['var_x_lyapunov'], finite['var_x'], rtol=1e-8)

    def test_acceptance_deficit_order(self):
        """Test 1 - E[alpha] of HAMS-A scales like eps^3 at gamma = 2"""
        eps = np.array([0.05, 0.1, 0.2])
        deficits = [1 - theory_table(gammas=(2.0,), a1=float(1 - np.sqrt(1 - e ** 2)))
                    ['expected_acceptance'].iloc[0] for e in eps]
        assert acceptance_slope(eps, deficits) == pytest.approx(3.0, abs=0.3)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_hams_k_deficit_order(self, k):
        """Test 1 - E[alpha] of HAMS-k scales like eps^3 with the (1 + 2k)^1.5 prefactor"""
        gamma = 2.0
        deficits = [1 - expected_acceptance(hams_k_coeffs(e, k, eta2=1.0).a1, gamma) for e in SLOPE_GRID]
        assert acceptance_slope(SLOPE_GRID, deficits) == pytest.approx(3.0, abs=0.3)
        leading = (1 + 2 * k) ** 1.5 * math.sqrt(gamma * (gamma - 1) ** 2) * SLOPE_GRID[0] ** 3 / (4 * math.pi)
        assert deficits[0] == pytest.approx(leading, rel=0.15)

    @pytest.mark.parametrize("kind", ['baoab', 'aboba'])
    def test_ma_splitting_deficit_order(self, kind):
        """Test Metropolized BAOAB and ABOBA lose acceptance like eps^2.5"""
        deficits = [1 - expected_acceptance_ma(kind, e, 1.0, 2.0) for e in SLOPE_GRID]
        assert acceptance_slope(SLOPE_GRID, deficits) == pytest.approx(2.5, abs=0.3)

    def test_ma_bp_deficit_order(self):
        """Test Metropolized BP loses acceptance like gamma^1.5 eps^3 / (4 pi)"""
        gamma = 2.0
        deficits = [1 - expected_acceptance_ma('bp', e, 1.0, gamma) for e in SLOPE_GRID]
        assert acceptance_slope(SLOPE_GRID, deficits) == pytest.approx(3.0, abs=0.3)
        for e, deficit in zip(SLOPE_GRID, deficits):
            assert deficit == pytest.approx(gamma ** 1.5 * e ** 3 / (4 * math.pi), rel=0.15)

    def test_api_wrapper(self):
        """Test the quick theory function returns the same table"""
        assert theory(gammas=[2.0], a1=0.2)['var_x'].iloc[0] == pytest.approx(0.5625)


class TestMatchTable:
    """Integrator linearization gaps"""

    def test_all_kinds(self):
        """Test the default table has one row per integrator"""
        frame = match_table()
        assert set(frame['kind']) == {'gjf', 'baoab', 'il', 'bp', 'vec', 'aboba', 'spv', 'mannella'}

    def test_exact_kinds(self):
        """Test the modified GJF, BAOAB, IL and BP forms match exactly"""
        frame = match_table(['gjf', 'baoab', 'il', 'bp'], epsilons=(0.1, 0.3))
        assert len(frame) == 8
        assert (frame['drift_diff'] <= 1e-12).all()
        assert (frame['cov_diff'] <= 1e-12).all()


class TestValidationSuites:
    """Monte Carlo checks against the Gaussian closed forms"""

    @pytest.mark.parametrize("name", ['rejection-free', 'involution', 'one-step-acceptance'])
    def test_quick_suite_passes(self, name):
        """Test each fast suite passes at reduced size"""
        [result] = run_suites(7, [name], quick=True)
        assert result.passed, result.details
        assert result.to_dict()['name'] == name

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ['stationary-variance', 'acceptance-identity'])
    def test_long_suite_passes(self, name):
        """Test the long-run suites pass at reduced size"""
        [result] = run_suites(7, [name], quick=True)
        assert result.passed, result.details

    def test_registry(self):
        """Test all five suites are registered"""
        assert len(SUITES) == 5


class TestApi:
    """HamsLab facade"""

    def test_sample_fixed_step(self):
        """Test sampling a 3-d Gaussian with a fixed step size"""
        record = sample(GaussianTarget(2.0, dim=3), 'hams-1', epsilon=0.3, n_draws=500, seed=1,
                        n_burn=100)
        assert record.draws.shape == (500, 3)
        assert record.epsilon == 0.3
        assert np.all(HamsLab().ess(record, cutoff=50) > 0)

    def test_sample_autotuned(self):
        """Test sampling without a step size tunes one first"""
        lab = HamsLab(seed=2)
        record = lab.sample(GaussianTarget(1.0, dim=2), 'hams-a', n_draws=50, n_burn=100)
        assert record.epsilon == pytest.approx(0.999)
        assert record.acceptance_rate == 1.0

    def test_kernel_protocol(self):
        """Test the facade builds kernels under its own protocol"""
        lab = HamsLab(protocol='spectral')
        kernel = lab.kernel(GaussianTarget(2.0), 'hams-b', 0.5)
        assert math.isclose(kernel.coeffs.a3, 1 + math.sqrt(0.75))

    def test_run(self, tmp_path):
        """Test the facade runs an experiment from keyword settings"""
        rows = HamsLab(seed=1).run(tmp_path, target='double-well', sampler='ma-aboba',
                                   epsilon=0.2, n_reps=2, n_burn=0, n_draws=100, workers=1,
                                   ess_cutoff=20, chains='none')
        assert rows[0]['sampler'] == 'ma-aboba'
        assert (tmp_path / 'summary.json').exists()
