"""
Unit tests for the sampler factory, step-size autotuning and the chain runner
"""

import logging

import pytest
import numpy as np

from hamslab.context.analytic import expected_acceptance
from hamslab.context.core import make_rng
from hamslab.context.hams import HamsKernel, hams_a_coeffs, hams_a_spectral
from hamslab.context.metropolized import MetropolizedKernel
from hamslab.errors import InvalidParams, TuningFailed
from hamslab.models import PhaseState, Protocol, SamplerSpec, StepResult
from hamslab.protocols import Kernel
from hamslab.services.autotune import EPS_MAX, StepSizeAdapter, autotune_epsilon
from hamslab.services.chain_runner import advance, run_chain, run_chains
from hamslab.services.samplers import ROSTER, build_kernel, hams_coeffs, roster


class StuckKernel(Kernel):
    """Reports a 0.7 acceptance probability but never moves"""

    def __init__(self, target):
        self._target = target

    @property
    def target(self):
        return self._target

    def step(self, state, rng):
        shape = state.x.shape[:-1]
        return StepResult(state, np.zeros(shape, dtype=bool), np.zeros(shape), np.full(shape, 0.7))


class TestSamplerFactory:
    """Kernels for every sampler label"""

    def test_roster(self):
        """Test the eight compared samplers"""
        labels = [spec.label for spec in roster()]
        assert labels == list(ROSTER)
        assert len(labels) == 8

    @pytest.mark.parametrize("label", ROSTER)
    def test_builds_every_sampler(self, label, double_well):
        """Test every roster entry yields a kernel under both protocols"""
        for protocol in (Protocol.LANGEVIN, Protocol.SPECTRAL):
            kernel = build_kernel(label, double_well, 0.3, 1.0, protocol)
            expected = HamsKernel if label.startswith('hams') else MetropolizedKernel
            assert isinstance(kernel, expected)

    def test_langevin_hams_a(self):
        """Test the Langevin protocol passes eta to HAMS-A as eta2"""
        coeffs = hams_coeffs(SamplerSpec.parse('hams-a'), 0.4, 1.5, 'langevin')
        assert coeffs == hams_a_coeffs(0.4, eta2=1.5)

    def test_spectral_ignores_eta(self):
        """Test the spectral protocol does not depend on eta"""
        spec = SamplerSpec.parse('hams-a')
        assert hams_coeffs(spec, 0.4, 0.1, 'spectral') == hams_coeffs(spec, 0.4, 3.0, 'spectral')
        assert hams_coeffs(spec, 0.4, 0.1, 'spectral') == hams_a_spectral(0.4)

    def test_non_hams_coefficients(self):
        """Test asking an integrator for HAMS coefficients fails"""
        with pytest.raises(InvalidParams):
            hams_coeffs(SamplerSpec.parse('ma-bp'), 0.3, 1.0)


class TestAutotune:
    """Robbins-Monro step-size adaptation"""

    def test_adapter_moves_towards_target(self):
        """Test high acceptance grows eps and low acceptance shrinks it"""
        up, down = StepSizeAdapter(0.7, 0.5), StepSizeAdapter(0.7, 0.5)
        up.update(1.0)
        down.update(0.0)
        assert up.epsilon > 0.5 > down.epsilon

    def test_adapter_target_range(self):
        """Test the target rate must lie in (0, 1)"""
        with pytest.raises(InvalidParams):
            StepSizeAdapter(1.0)

    def test_clamps_on_rejection_free_target(self, standard_gaussian, rng, caplog):
        """Test HAMS-A on N(0, 1) drives eps to the upper clamp with a warning"""
        initial = PhaseState(rng.standard_normal((4, 1)), rng.standard_normal((4, 1)))
        with caplog.at_level(logging.WARNING, logger='hamslab.services.autotune'):
            result = autotune_epsilon(lambda eps: build_kernel('hams-a', standard_gaussian, eps),
                                      initial, rng, n_adapt=300, n_validate=50)
        assert result.epsilon == pytest.approx(EPS_MAX)
        assert result.at_clamp
        assert result.acceptance == 1.0
        assert "clamp" in caplog.text

    def test_hits_target_rate(self, gaussian2, rng):
        """Test HAMS-A at gamma = 2 tunes to eps near 0.966 with acceptance near 0.7"""
        initial = PhaseState(rng.standard_normal((20, 1)) / np.sqrt(2), rng.standard_normal((20, 1)))
        result = autotune_epsilon(lambda eps: build_kernel('hams-a', gaussian2, eps, 1.0),
                                  initial, rng, target_rate=0.7, n_adapt=4000, n_validate=1000)
        assert not result.at_clamp
        assert result.acceptance == pytest.approx(0.7, abs=0.05)
        assert result.epsilon == pytest.approx(0.966, abs=0.02)
        a1 = hams_a_coeffs(result.epsilon, eta2=1.0).a1
        assert expected_acceptance(a1, 2.0) == pytest.approx(0.7, abs=0.05)

    def test_failure(self, standard_gaussian, rng):
        """Test a kernel whose acceptance never matches raises TuningFailed"""
        initial = PhaseState(np.zeros(1), np.zeros(1))
        with pytest.raises(TuningFailed):
            autotune_epsilon(lambda eps: StuckKernel(standard_gaussian), initial, rng,
                             n_adapt=20, n_validate=20)

    def test_bad_lengths(self, standard_gaussian, rng):
        """Test too few adaptation or validation steps are refused"""
        with pytest.raises(InvalidParams):
            autotune_epsilon(lambda eps: StuckKernel(standard_gaussian),
                             PhaseState(np.zeros(1), np.zeros(1)), rng, n_adapt=0)


class TestChainRunner:
    """Burn-in and recording"""

    def test_single_chain(self, double_well, rng):
        """Test one chain yields draws, momenta and flags of the requested length"""
        kernel = build_kernel('ma-bp', double_well, 0.2)
        record = run_chain(kernel, PhaseState(np.zeros(1), np.ones(1)), 10, 200, rng, epsilon=0.2)
        assert record.draws.shape == (200, 1)
        assert record.momenta.shape == (200, 1)
        assert record.accepted.shape == (200,)
        assert record.epsilon == 0.2
        assert 0.9 < record.acceptance_rate <= 1.0

    def test_batched(self, double_well, rng):
        """Test a batch of R chains yields R records"""
        kernel = build_kernel('hams-2', double_well, 0.2)
        initial = PhaseState(rng.uniform(-1, 1, (3, 1)), rng.uniform(-1, 1, (3, 1)))
        records = run_chains(kernel, initial, 0, 50, rng, keep_momenta=False)
        assert len(records) == 3
        assert all(r.momenta is None and r.n_steps == 50 for r in records)
        assert not np.array_equal(records[0].draws, records[1].draws)

    def test_emit_maps_draws(self, standard_gaussian):
        """Test the emit hook transforms recorded positions"""
        kernel = build_kernel('hams-a', standard_gaussian, 0.5)
        start = PhaseState(np.zeros(1), np.ones(1))
        plain = run_chain(kernel, start, 0, 20, make_rng(5, 0))
        mapped = run_chain(kernel, start, 0, 20, make_rng(5, 0), emit=lambda x: 2 * x + 1)
        np.testing.assert_array_equal(mapped.draws, 2 * plain.draws + 1)
        np.testing.assert_array_equal(mapped.momenta, plain.momenta)

    def test_deterministic(self, double_well):
        """Test equal seeds give identical chains"""
        kernel = build_kernel('ma-baoab', double_well, 0.2)
        start = PhaseState(np.zeros(1), np.ones(1))
        a = run_chain(kernel, start, 5, 30, make_rng(3, 1))
        b = run_chain(kernel, start, 5, 30, make_rng(3, 1))
        np.testing.assert_array_equal(a.draws, b.draws)

    def test_advance_fills_cache(self, double_well, rng):
        """Test advance returns a state with cached potential and gradient"""
        kernel = build_kernel('hams-a', double_well, 0.2)
        assert advance(kernel, PhaseState(np.zeros(1), np.ones(1)), 3, rng).has_cache()

    def test_batched_state_refused(self, double_well, rng):
        """Test run_chain refuses a batched state"""
        kernel = build_kernel('hams-a', double_well, 0.2)
        with pytest.raises(InvalidParams):
            run_chain(kernel, PhaseState(np.zeros((2, 1)), np.ones((2, 1))), 0, 5, rng)

    def test_lengths_checked(self, double_well, rng):
        """Test n_draws < 1 is refused"""
        kernel = build_kernel('hams-a', double_well, 0.2)
        with pytest.raises(InvalidParams):
            run_chain(kernel, PhaseState(np.zeros(1), np.ones(1)), 0, 0, rng)
