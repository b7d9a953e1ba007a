import numpy as np
import pytest

from core.enum.init_kind import InitKind
from core.enum.optimized_mode import OptimizedMode
from core.exceptions.domain_exceptions import Diverged, InsufficientData, NotInterpolating
from core.services import landscape, trainer
from core.value_objects.dataset import Dataset
from core.value_objects.init_scheme import InitScheme
from core.value_objects.net_params import NetParams
from core.value_objects.train_config import TrainConfig
from core.value_objects.train_record import TrainRecord


def _config(**overrides):
    values = dict(k=6, eta=0.05, max_steps=40, log_every=10, seed=1, steady_window=2)
    values.update(overrides)
    return TrainConfig(**values)


def _record(step, loss, gn=None):
    return TrainRecord(
        step=step, loss=loss, grad_norm=0.0, weighted_tv=0.0, tv_plain=0.0,
        knot_count=0, diff_margin=1.0, lambda_max_gn=gn,
    )


class TestGdStep:
    def test_single_update_follows_the_gradient(self, small_params, hat_data):
        moved = trainer.gd_step(small_params, hat_data, 0.1)
        expected = small_params.flatten() - 0.1 * landscape.loss_gradient(small_params, hat_data)
        np.testing.assert_allclose(moved.flatten(), expected, rtol=0, atol=1e-15)


class TestTrain:
    def test_zero_budget_returns_the_initialization(self, hat_data):
        result = trainer.train(_config(max_steps=0, log_every=100), hat_data)
        assert [r.step for r in result.records] == [0]

    def test_records_every_log_step_and_the_last(self, hat_data):
        result = trainer.train(_config(), hat_data)
        assert [r.step for r in result.records] == [0, 10, 20, 30, 40]

    def test_last_step_is_logged_off_cadence(self, hat_data):
        result = trainer.train(_config(log_every=15), hat_data)
        assert [r.step for r in result.records] == [0, 15, 30, 40]

    def test_same_seed_same_trajectory(self, hat_data):
        first = trainer.train(_config(), hat_data)
        again = trainer.train(_config(), hat_data)
        np.testing.assert_array_equal(first.params.flatten(), again.params.flatten())
        assert [r.loss for r in first.records] == [r.loss for r in again.records]

    def test_small_steps_decrease_the_loss(self, hat_data):
        result = trainer.train(_config(max_steps=200, log_every=50), hat_data)
        assert result.records[-1].loss < result.records[0].loss

    def test_huge_step_diverges(self, hat_data):
        with pytest.raises(Diverged) as info:
            trainer.train(_config(eta=1e6, max_steps=500, log_every=100), hat_data)
        assert info.value.step > 0

    def test_divergence_carries_every_logged_record(self, hat_data):
        with pytest.raises(Diverged) as info:
            trainer.train(_config(eta=1e6, max_steps=500, log_every=1, spectrum_every=1000), hat_data)
        steps = [r.step for r in info.value.records]
        assert steps == list(range(len(steps)))
        assert len(steps) >= 1
        assert info.value.last_record is info.value.records[-1]

    def test_spectrum_only_on_due_records(self, hat_data):
        result = trainer.train(_config(spectrum_every=2), hat_data)
        assert [r.has_spectrum for r in result.records] == [True, False, True, False, True]

    def test_gradient_threshold_stops_immediately(self, hat_data):
        result = trainer.train(_config(stop_grad_norm=1e9), hat_data)
        assert len(result.records) == 1

    def test_single_point_raises(self):
        data = Dataset([0.1], [1.0], 0.5)
        with pytest.raises(InsufficientData):
            trainer.train(_config(), data)

    def test_summary_carries_verdicts(self, hat_data):
        summary = trainer.train(_config(), hat_data).summary
        assert summary.final_record.step == 40
        assert summary.stable is not None
        assert summary.ground_truth_loss == pytest.approx(0.5 * np.mean(hat_data.noises ** 2))
        assert summary.config["init"]["kind"] == "uniform_fanin"


class TestSteadyState:
    def test_first_step_of_the_quiet_tail(self):
        records = [_record(s, v) for s, v in zip((0, 10, 20, 30, 40), (5.0, 1.0, 1.0, 1.0, 1.0))]
        assert trainer.detect_steady_state(records, window=3, rel_tol=1e-3) == 10

    def test_moving_gauss_newton_sharpness_blocks_the_tail(self):
        records = [_record(s, 1.0, gn) for s, gn in zip((0, 10, 20, 30), (2.0, 2.0, 2.0, 9.0))]
        assert trainer.detect_steady_state(records, window=2, rel_tol=1e-3) is None

    def test_window_below_two_raises(self):
        with pytest.raises(ValueError):
            trainer.detect_steady_state([_record(0, 1.0)], window=1, rel_tol=1e-3)

    def test_too_few_records(self):
        assert trainer.detect_steady_state([_record(0, 1.0)], window=2, rel_tol=1e-3) is None


class TestMinNormInterpolant:
    def test_matches_the_pseudoinverse(self, hat_data):
        layer = trainer.FirstLayer(np.array([1.0, 1.0, -1.0]), np.array([0.1, 0.1, 0.2]))
        fit = trainer.min_norm_interpolant(layer, hat_data)
        features = np.column_stack([
            np.maximum(hat_data.xs + 0.1, 0.0),
            np.maximum(hat_data.xs + 0.1, 0.0),
            np.maximum(0.2 - hat_data.xs, 0.0),
            np.ones(hat_data.n),
        ])
        expected = np.linalg.pinv(features) @ hat_data.ys
        np.testing.assert_allclose(np.append(fit.params.w2, fit.params.b2), expected, atol=1e-10)
        assert fit.rank == 3

    def test_strict_mode_rejects_a_poor_fit(self, hat_data):
        layer = trainer.FirstLayer(np.array([1.0]), np.array([0.0]))
        with pytest.raises(NotInterpolating):
            trainer.min_norm_interpolant(layer, hat_data, strict=True)

    def test_wide_stratified_layer_interpolates(self, hat_data):
        from core.services import relu_net

        params = relu_net.init_params(16, InitScheme(kind=InitKind.STRATIFIED_KNOTS), seed=2)
        fit = trainer.min_norm_interpolant(trainer.FirstLayer.of(params), hat_data, strict=True)
        assert trainer.interpolates(fit)


class TestOptimized:
    def test_ground_truth_network_ties_with_ground_truth(self, hat_params, hat_data):
        assert trainer.check_optimized(hat_params, hat_data, OptimizedMode.VS_GROUND_TRUTH)

    def test_exact_fit_beats_zero_sigma(self, hat_params, noiseless_hat):
        assert trainer.check_optimized(hat_params, noiseless_hat, OptimizedMode.VS_SIGMA)

    def test_constant_network_is_not_optimized_on_clean_labels(self, noiseless_hat):
        flat = NetParams([1.0], [5.0], [0.0], 0.0)
        assert not trainer.check_optimized(flat, noiseless_hat, OptimizedMode.VS_SIGMA)

    def test_ground_truth_loss_uses_stored_noise(self, hat_data):
        assert trainer.ground_truth_loss(hat_data) == pytest.approx(0.5 * np.mean(hat_data.noises ** 2))
