import numpy as np
import pytest

from emoquant.flow import (
    FlowConfig,
    FlowError,
    cfm_loss,
    cosine_timestep,
    ot_interpolant,
    ot_target_field,
    sample_source,
)


class TestInterpolant:
    def test_t_zero_is_source(self):
        x0, x1 = np.ones((2, 3)), np.full((2, 3), 5.0)
        assert np.array_equal(ot_interpolant(x0, x1, 0.0, FlowConfig(sigma=0.1)), x0)

    def test_t_one_sigma_zero_is_target(self):
        x0, x1 = np.ones((2, 3)), np.full((2, 3), 5.0)
        assert np.array_equal(ot_interpolant(x0, x1, 1.0, FlowConfig(sigma=0.0)), x1)

    def test_t_one_general(self):
        x0, x1 = np.full((4,), 2.0), np.full((4,), 5.0)
        out = ot_interpolant(x0, x1, 1.0, FlowConfig(sigma=0.2))
        assert np.allclose(out, 0.2 * x0 + x1)

    def test_scalar_midpoint(self):
        out = ot_interpolant(np.array(0.0), np.array(2.0), 0.5, FlowConfig(sigma=0.0))
        assert float(out) == 1.0

    def test_shape_mismatch(self):
        with pytest.raises(FlowError):
            ot_interpolant(np.ones(3), np.ones(4), 0.5, FlowConfig())


class TestTargetField:
    def test_coefficient_vanishes_near_sigma_one(self):
        cfg = FlowConfig(sigma=0.999999)
        x0, x1 = np.ones(5), np.full(5, 3.0)
        assert np.allclose(ot_target_field(x0, x1, cfg), x1 - 1e-6 * x0)

    def test_equal_inputs_sigma_zero(self):
        c = np.full((3,), 2.5)
        assert np.allclose(ot_target_field(c, c, FlowConfig(sigma=0.0)), 0.0)

    def test_finite_difference_identity(self):
        rng = np.random.default_rng(5)
        x0 = rng.normal(size=(4, 6))
        x1 = rng.normal(size=(4, 6))
        cfg = FlowConfig(sigma=0.05)
        target = ot_target_field(x0, x1, cfg)
        h = 1e-6
        for t in np.linspace(0.1, 0.9, 9):
            fd = (ot_interpolant(x0, x1, t + h, cfg) - ot_interpolant(x0, x1, t - h, cfg)) / (2 * h)
            assert np.allclose(fd, target, atol=1e-6)


class TestCfmLoss:
    def test_exact_prediction_is_zero(self):
        rng = np.random.default_rng(6)
        x0, x1 = rng.normal(size=(3, 4)), rng.normal(size=(3, 4))
        cfg = FlowConfig(sigma=0.1)
        assert cfm_loss(ot_target_field(x0, x1, cfg), x0, x1, cfg) == 0.0

    def test_unit_perturbation_mean_convention(self):
        x0, x1 = np.zeros((2, 5)), np.zeros((2, 5))
        cfg = FlowConfig(sigma=0.0)
        pred = ot_target_field(x0, x1, cfg).copy()
        pred[0, 0] += 1.0
        assert cfm_loss(pred, x0, x1, cfg) == pytest.approx(1.0 / 10, abs=1e-15)

    def test_non_negative(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            x0, x1, pred = (rng.normal(size=(3, 3)) for _ in range(3))
            assert cfm_loss(pred, x0, x1, FlowConfig()) >= 0.0


class TestCosineTimestep:
    def test_endpoints(self):
        assert cosine_timestep(0.0) == 0.0
        assert cosine_timestep(1.0) == pytest.approx(1.0, abs=1e-15)

    def test_midpoint(self):
        assert cosine_timestep(0.5) == pytest.approx(1 - np.cos(np.pi / 4), abs=1e-12)
        assert cosine_timestep(0.5) == pytest.approx(0.2928932188, abs=1e-9)

    def test_strictly_increasing(self):
        us = np.linspace(0, 1, 101)
        ts = [cosine_timestep(float(u)) for u in us]
        assert all(t2 > t1 for t1, t2 in zip(ts, ts[1:]))

    def test_out_of_range(self):
        with pytest.raises(FlowError):
            cosine_timestep(1.5)


class TestSampleSource:
    def test_variance_tracks_inverse_tau(self):
        x = sample_source((100_000,), tau=1.0, seed=0)
        assert abs(float(np.var(x)) - 1.0) < 0.02
        x4 = sample_source((100_000,), tau=4.0, seed=1)
        assert abs(float(np.std(x4)) - 0.5) < 0.01

    def test_mean_within_clt_bound(self):
        n = 100_000
        x = sample_source((n,), tau=1.0, seed=2)
        assert abs(float(np.mean(x))) < 3.0 * float(np.std(x)) / np.sqrt(n)

    def test_deterministic_per_seed(self):
        assert np.array_equal(sample_source((10, 3), 2.0, 9), sample_source((10, 3), 2.0, 9))

    def test_invalid_tau(self):
        with pytest.raises(FlowError):
            sample_source((4,), tau=0.0, seed=0)
