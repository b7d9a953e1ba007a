import math

import numpy as np
import pytest

from core.enum.init_kind import InitKind
from core.exceptions.domain_exceptions import EmptyInterval, InsufficientData, InvalidConfig, MissingSigma
from core.value_objects.certificate_report import CertificateEntry, CertificateReport, CheckpointCertificate
from core.value_objects.curvature import Curvature
from core.value_objects.dataset import Dataset
from core.value_objects.empirical_weight import EmpiricalWeight
from core.value_objects.ground_truth import GroundTruth
from core.value_objects.init_scheme import InitScheme
from core.value_objects.interval_report import IntervalReport
from core.value_objects.net_params import NetParams
from core.value_objects.piecewise_linear import PiecewiseLinear
from core.value_objects.train_config import TrainConfig


class TestNetParams:
    def test_dimension_is_three_k_plus_one(self, small_params):
        assert small_params.k == 3
        assert small_params.dim == 10
        assert small_params.flatten().shape == (10,)

    def test_vector_order_is_w1_b1_w2_b2(self, small_params):
        theta = small_params.flatten()
        assert theta[0] == 1.0
        assert theta[3] == 0.2
        assert theta[6] == 0.7
        assert theta[9] == 0.1

    def test_from_vector_restores_the_layers(self, small_params):
        again = NetParams.from_vector(small_params.flatten())
        np.testing.assert_array_equal(again.w2, small_params.w2)
        assert again.b2 == small_params.b2

    def test_mismatched_widths_raise(self):
        with pytest.raises(InvalidConfig):
            NetParams([1.0, 2.0], [0.0], [1.0, 1.0], 0.0)

    def test_vector_of_wrong_length_raises(self):
        with pytest.raises(InvalidConfig):
            NetParams.from_vector([1.0, 2.0, 3.0])

    def test_non_finite_entries_raise(self):
        with pytest.raises(InvalidConfig):
            NetParams([np.nan], [0.0], [1.0], 0.0)

    def test_arrays_are_read_only(self, small_params):
        with pytest.raises(ValueError):
            small_params.w1[0] = 5.0

    def test_is_immutable(self, small_params):
        with pytest.raises((AttributeError, TypeError)):
            small_params.b2 = 3.0

    def test_inf_norm(self, small_params):
        assert small_params.inf_norm() == 2.0

    def test_from_dict_checks_declared_width(self, small_params):
        payload = small_params.to_dict()
        payload["k"] = 4
        with pytest.raises(InvalidConfig):
            NetParams.from_dict(payload)

    def test_from_dict_rejects_malformed_payload(self):
        with pytest.raises(InvalidConfig):
            NetParams.from_dict({"theta": [1.0, 0.0, 1.0, 0.0]})


class TestPiecewiseLinear:
    def test_evaluate_adds_hinges_right_of_each_knot(self):
        pwl = PiecewiseLinear(-1.0, 0.0, 1.0, [0.0, 0.5], [-2.0, 3.0])
        assert pwl.evaluate(-1.0) == 0.0
        assert pwl.evaluate(0.0) == pytest.approx(1.0)
        assert pwl.evaluate(0.5) == pytest.approx(0.5)
        assert pwl.evaluate(1.0) == pytest.approx(1.5)

    def test_evaluate_keeps_array_shape(self):
        pwl = PiecewiseLinear(0.0, 1.0, 0.0, [], [])
        assert pwl.evaluate(np.zeros((2, 3))).shape == (2, 3)

    def test_knots_must_increase(self):
        with pytest.raises(InvalidConfig):
            PiecewiseLinear(0.0, 0.0, 0.0, [0.5, 0.1], [1.0, 1.0])

    def test_knots_in_uses_closed_interval(self):
        pwl = PiecewiseLinear(-2.0, 0.0, 0.0, [-1.0, 0.0, 1.0], [1.0, 1.0, 1.0])
        assert pwl.knots_in(-1.0, 0.0).tolist() == [True, True, False]
        assert pwl.knot_count == 3


class TestDataset:
    def test_unsorted_inputs_raise(self):
        with pytest.raises(InvalidConfig):
            Dataset([0.2, 0.1], [0.0, 0.0], 0.5)

    def test_inputs_beyond_x_max_raise(self):
        with pytest.raises(InvalidConfig):
            Dataset([0.0, 0.7], [0.0, 0.0], 0.5)

    def test_labels_must_match_ground_truth_plus_noise(self):
        with pytest.raises(InvalidConfig):
            Dataset([0.0, 0.5], [1.0, 1.0], 0.5, ground_truth=GroundTruth.HAT, sigma=0.1, noises=[0.0, 0.0])

    def test_mask_of_empty_interval_raises(self, hat_data):
        with pytest.raises(EmptyInterval):
            hat_data.mask(0.01, 0.02)

    def test_count_in_closed_interval(self, hat_data):
        assert hat_data.count_in(-0.5, 0.5) == 8
        assert hat_data.count_in(0.0, 0.5) == 4

    def test_require_sigma_without_sigma_raises(self):
        with pytest.raises(MissingSigma):
            Dataset([0.0, 0.5], [1.0, 1.0], 0.5).require_sigma()


class TestEmpiricalWeight:
    def test_two_point_value_at_midpoint(self):
        weight = EmpiricalWeight.from_inputs([-1.0, 1.0])
        assert weight.evaluate(0.0) == pytest.approx(math.sqrt(2.0) / 4.0)

    def test_vanishes_outside_the_support(self):
        weight = EmpiricalWeight.from_inputs([-0.5, 0.0, 0.5])
        assert weight.evaluate(-0.6) == 0.0
        assert weight.evaluate(0.7) == 0.0

    def test_symmetric_design_gives_symmetric_weight(self):
        weight = EmpiricalWeight.from_inputs(np.linspace(-0.5, 0.5, 9))
        grid = np.linspace(-0.4, 0.4, 17)
        np.testing.assert_allclose(weight.evaluate(grid), weight.evaluate(-grid), atol=1e-15)

    def test_one_sided_limits_bracket_a_datum(self):
        weight = EmpiricalWeight.from_inputs([-1.0, 0.0, 1.0])
        left = weight.limit(0.0, "left")
        right = weight.limit(0.0, "right")
        assert left == pytest.approx(weight.evaluate(-1e-12), abs=1e-9)
        assert right == pytest.approx(weight.evaluate(1e-12), abs=1e-9)

    def test_needs_two_points(self):
        with pytest.raises(InsufficientData):
            EmpiricalWeight.from_inputs([0.0])


class TestCurvature:
    def test_eta_stands_for_two_over_eta(self):
        assert Curvature.from_eta(0.4).lambda_value == pytest.approx(5.0)

    def test_lambda_is_used_as_is(self):
        assert Curvature.from_lambda(3.5).lambda_value == 3.5

    def test_unknown_kind_raises(self):
        with pytest.raises(InvalidConfig):
            Curvature("sharpness", 1.0)

    def test_nonpositive_eta_raises(self):
        with pytest.raises(InvalidConfig):
            Curvature.from_eta(0.0)


class TestCertificates:
    def test_slack_is_bound_minus_value(self):
        entry = CertificateEntry("x", value=1.0, bound=1.5)
        assert entry.slack == 0.5
        assert entry.passed

    def test_rounding_sized_violation_still_passes(self):
        assert CertificateEntry("x", value=1.0 + 1e-9, bound=1.0).passed
        assert not CertificateEntry("x", value=1.0 + 1e-6, bound=1.0).passed

    def test_only_hard_entries_and_checkpoints_fail_a_report(self):
        report = CertificateReport(
            entries=(
                CertificateEntry("soft", 2.0, 1.0),
                CertificateEntry("hard", 2.0, 1.0, hard=True),
            ),
            stable=True,
            checkpoints=(CheckpointCertificate(10, -1.0, 0.0), CheckpointCertificate(20, 0.0, 0.0)),
        )
        assert report.hard_failures() == ["hard", "checkpoint@10"]
        assert not report.passed
        assert report.to_dict()["passed"] is False

    def test_entry_lookup_by_name(self):
        report = CertificateReport(entries=(CertificateEntry("a", 0.0, 1.0),), stable=False)
        assert report.entry("a").bound == 1.0
        with pytest.raises(KeyError):
            report.entry("b")


class TestSettingsObjects:
    def test_interval_needs_lo_below_hi(self):
        with pytest.raises(InvalidConfig):
            IntervalReport(0.2, 0.1, 0.0, 0)

    def test_init_scheme_rejects_nonpositive_ranges(self):
        with pytest.raises(InvalidConfig):
            InitScheme(kind=InitKind.UNIFORM_CUSTOM, a_w1=0.0)

    def test_init_scheme_accepts_kind_names(self):
        assert InitScheme(kind="stratified_knots").kind is InitKind.STRATIFIED_KNOTS

    def test_log_every_beyond_budget_raises(self):
        with pytest.raises(InvalidConfig):
            TrainConfig(max_steps=10, log_every=20)

    def test_zero_step_budget_is_allowed(self):
        assert TrainConfig(max_steps=0, log_every=100).max_steps == 0

    def test_nonpositive_eta_raises(self):
        with pytest.raises(InvalidConfig):
            TrainConfig(eta=0.0)
