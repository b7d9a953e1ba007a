import dataclasses
import math
from unittest.mock import MagicMock

import numpy as np
import pytest

from application.dtos.experiment_config import ExperimentConfig
from application.use_cases.build_report import REPORT_COLUMNS, BuildReportUseCase
from application.use_cases.counterexample_study import CounterexampleStudyUseCase, growth_ratio
from application.use_cases.eta_sweep import EtaSweepUseCase, count_increases, interior_argmin
from application.use_cases.experiment_cells import (
    COUNTEREXAMPLE_COLUMNS,
    ETA_COLUMNS,
    RATE_COLUMNS,
    CounterexampleCell,
    rate_eta,
    run_counterexample_cell,
)
from application.use_cases.export_basis import ExportBasisUseCase
from application.use_cases.interpolate import WIDTH_COLUMNS, InterpolateUseCase
from application.use_cases.rate_experiment import RateExperimentUseCase, loglog_slope
from application.use_cases.train_network import TrainNetworkUseCase
from application.use_cases.verify_params import VerifyParamsUseCase
from core.entities.run_entry import RunEntry
from core.enum.eta_schedule import EtaSchedule
from core.exceptions.domain_exceptions import Diverged, InsufficientData
from core.services import certificates, trainer


def _make_artifacts(payload=None):
    artifacts = MagicMock()
    artifacts.location = "/tmp/relu-out"
    if payload is not None:
        artifacts.read_json.return_value = payload
    return artifacts


def _written(mock, method="write_json"):
    return [c.args[0] for c in getattr(mock, method).call_args_list]


class TestTrainNetworkUseCase:
    def test_writes_artifacts_and_registers_the_run(self, tiny_config, catalog):
        artifacts = _make_artifacts()

        outcome = TrainNetworkUseCase(artifacts, catalog).execute(tiny_config)

        assert _written(artifacts, "write_records") == ["records.csv"]
        assert _written(artifacts, "write_table") == ["g_profile.csv"]
        assert set(_written(artifacts)) == {"params.json", "summary.json", "certificates.json"}
        assert outcome.report.hard_failures() == []
        assert outcome.summary.certificates["passed"] is True
        entries = catalog.list_all()
        assert len(entries) == 1
        assert entries[0].run_key == "train:hat:n=8:k=6:eta=0.1:seed=1"

    def test_summary_includes_the_selected_interval(self, tiny_config, catalog):
        artifacts = _make_artifacts()

        TrainNetworkUseCase(artifacts, catalog).execute(tiny_config)

        summary = next(c.args[1] for c in artifacts.write_json.call_args_list if c.args[0] == "summary.json")
        assert summary["interval"]["lo"] < 0.0 < summary["interval"]["hi"]

    def test_renders_figures_on_request(self, tiny_config, catalog):
        renderer = MagicMock()

        TrainNetworkUseCase(_make_artifacts(), catalog, renderer).execute(tiny_config, plot=True)

        renderer.render_fit.assert_called_once()
        renderer.render_learning_curves.assert_called_once()
        renderer.render_basis.assert_called_once()

    def test_divergence_writes_the_last_finite_record(self, tiny_config, catalog):
        artifacts = _make_artifacts()
        config = dataclasses.replace(tiny_config, eta=1e6, max_steps=400, log_every=100)

        with pytest.raises(Diverged):
            TrainNetworkUseCase(artifacts, catalog).execute(config)

        name, records = artifacts.write_records.call_args.args
        assert name == "records.csv"
        assert [r.step for r in records] == [0]
        assert catalog.list_all() == []

    def test_divergence_keeps_the_whole_learning_curve(self, tiny_config, catalog, monkeypatch):
        logged = [MagicMock(step=s) for s in (0, 10, 20)]

        def diverge(*args, **kwargs):
            raise Diverged(25, logged)

        monkeypatch.setattr(trainer, "train", diverge)
        artifacts = _make_artifacts()

        with pytest.raises(Diverged):
            TrainNetworkUseCase(artifacts, catalog).execute(tiny_config)

        name, records = artifacts.write_records.call_args.args
        assert name == "records.csv"
        assert [r.step for r in records] == [0, 10, 20]


class TestInterpolateUseCase:
    def test_wide_stratified_layer_interpolates_and_is_certified(self, tiny_config, catalog):
        artifacts = _make_artifacts()
        config = dataclasses.replace(tiny_config, k=16)

        outcome = InterpolateUseCase(artifacts, catalog).execute(config)

        assert outcome.summary["interpolates"] is True
        assert outcome.summary["rank"] == 8
        assert outcome.summary["lower_bound"] is not None
        assert outcome.report.entry(certificates.INTERPOLANT_LOWER_BOUND).passed
        assert set(_written(artifacts)) == {"params.json", "summary.json", "certificates.json"}
        assert catalog.get_by_key("interpolate:hat:n=8:k=16:eta=None:seed=1") is not None

    def test_width_grid_writes_one_row_per_width(self, tiny_config, catalog):
        artifacts = _make_artifacts()
        config = dataclasses.replace(tiny_config, k=16, k_grid=(2, 4, 16))

        InterpolateUseCase(artifacts, catalog).execute(config)

        name, columns, rows = artifacts.write_table.call_args.args
        assert name == "interpolate_k.csv"
        assert columns == WIDTH_COLUMNS
        by_width = [dict(zip(columns, row)) for row in rows]
        assert [row["k"] for row in by_width] == [2, 4, 16]
        assert by_width[0]["rank"] <= 3
        assert by_width[1]["rank"] <= 5
        assert by_width[2]["rank"] == 8
        assert by_width[-1]["interpolates"] is True
        assert all(row["grid_risk"] >= 0.0 for row in by_width)

    def test_no_width_grid_no_width_table(self, tiny_config, catalog):
        artifacts = _make_artifacts()

        InterpolateUseCase(artifacts, catalog).execute(dataclasses.replace(tiny_config, k=16))

        artifacts.write_table.assert_not_called()


class TestVerifyParamsUseCase:
    def test_reads_params_and_writes_certificates(self, tiny_config, small_params):
        artifacts = _make_artifacts(small_params.to_dict())

        report = VerifyParamsUseCase(artifacts).execute(tiny_config, "params.json")

        artifacts.read_json.assert_called_once_with("params.json")
        artifacts.write_json.assert_called_once_with("certificates.json", report.to_dict())
        assert report.hard_failures() == []


class TestExportBasisUseCase:
    def test_one_row_per_grid_point(self, tiny_config, hat_params):
        artifacts = _make_artifacts(hat_params.to_dict())

        sparsity = ExportBasisUseCase(artifacts).execute(tiny_config, "params.json")

        name, columns, rows = artifacts.write_table.call_args.args
        assert name == "basis.csv"
        assert columns == ["x", "neuron_0", "neuron_1"]
        assert len(rows) == tiny_config.basis_points
        assert rows[0][0] == -0.5
        assert sparsity["knot_count_total"] == 1
        artifacts.write_json.assert_called_once_with("sparsity.json", sparsity)

    def test_explicit_basis_range(self, tiny_config, hat_params):
        artifacts = _make_artifacts(hat_params.to_dict())
        config = dataclasses.replace(tiny_config, basis_lo=-0.25, basis_hi=0.25)

        ExportBasisUseCase(artifacts).execute(config, "params.json")

        rows = artifacts.write_table.call_args.args[2]
        assert rows[0][0] == -0.25
        assert rows[-1][0] == 0.25


class TestSweepHelpers:
    def test_count_increases_skips_missing(self):
        assert count_increases([3.0, None, 2.0, 4.0]) == 1

    def test_interior_argmin(self):
        assert interior_argmin([3.0, 1.0, 2.0]) is True
        assert interior_argmin([1.0, 2.0, 3.0]) is False
        assert interior_argmin([1.0, None, 2.0]) is None


class TestEtaSweepUseCase:
    def test_every_cell_is_run_and_summarized(self, tiny_config, runner, catalog):
        artifacts = _make_artifacts()

        table = EtaSweepUseCase(artifacts, runner, catalog).execute(tiny_config)

        assert len(table.rows) == 4
        assert [row["eta"] for row in table.medians] == [0.2, 0.1]
        assert table.verdicts["hard_failures"] == []
        assert table.verdicts["seeds"] == 2
        assert _written(artifacts, "write_table") == ["sweep.csv", "medians.csv"]
        assert len(catalog.list_all()) == 4

    def test_certificates_document_carries_the_verdicts(self, tiny_config, runner, catalog):
        artifacts = _make_artifacts()

        EtaSweepUseCase(artifacts, runner, catalog).execute(tiny_config)

        name, payload = artifacts.write_json.call_args.args
        assert name == "certificates.json"
        assert payload["passed"] is True
        assert len(payload["cells"]) == 4

    def test_diverged_cell_fails_the_sweep(self, tiny_config, catalog):
        rows = []
        for eta, status in ((0.2, "diverged"), (0.1, "ok")):
            row = {name: None for name in ETA_COLUMNS}
            row.update(eta=eta, seed=1, status=status, hard_failures=0, checkpoint_failures=0)
            rows.append(row)
        runner = MagicMock()
        runner.map.return_value = rows

        table = EtaSweepUseCase(_make_artifacts(), runner, catalog).execute(tiny_config)

        assert table.verdicts["hard_failures"] == ["diverged/eta=0.2/seed=1"]
        assert table.verdicts["failed_cells"] == 1

    def test_sweep_rows_carry_knot_sparsity(self, tiny_config, runner, catalog):
        artifacts = _make_artifacts()

        table = EtaSweepUseCase(artifacts, runner, catalog).execute(tiny_config)

        for row in table.rows:
            assert row["l1"] >= 0.0
            assert row["lp"] >= 0.0
            assert set(row) >= {"knot_q10", "knot_q50", "knot_q90", "min_knot_datum_distance"}
            if row["knot_q10"] is not None:
                assert row["knot_q10"] <= row["knot_q50"] <= row["knot_q90"]
        name, columns, _ = artifacts.write_table.call_args_list[0].args
        assert name == "sweep.csv"
        assert "min_knot_datum_distance" in columns


class TestRateExperimentUseCase:
    def test_needs_four_sample_sizes(self, tiny_config, runner, catalog):
        config = dataclasses.replace(tiny_config, n_grid=(8, 12, 16))
        with pytest.raises(InsufficientData):
            RateExperimentUseCase(_make_artifacts(), runner, catalog).execute(config)

    def test_fits_the_log_log_slope_of_the_medians(self, tiny_config, catalog):
        rows = []
        for n in tiny_config.n_grid:
            row = {name: None for name in RATE_COLUMNS}
            row.update(
                n=n, eta=0.1, seed=1, status="ok", n_in=n, optimized_on_interval=True,
                mse_interval=3.0 * n ** -0.8, mse_target=n ** -0.8,
            )
            rows.append(row)
        runner = MagicMock()
        runner.map.return_value = rows
        artifacts = _make_artifacts()

        outcome = RateExperimentUseCase(artifacts, runner, catalog).execute(tiny_config)

        assert outcome.slope == pytest.approx(-0.8)
        assert outcome.fit["target_slope"] == pytest.approx(-0.8)
        assert outcome.fit["sizes_used"] == [8, 12, 16, 20]
        assert "slope.json" in _written(artifacts)

    def test_unoptimized_rows_are_excluded_from_the_fit(self, tiny_config, catalog):
        rows = []
        for n in tiny_config.n_grid:
            row = {name: None for name in RATE_COLUMNS}
            row.update(n=n, seed=1, status="ok", n_in=n, optimized_on_interval=n != 8, mse_interval=0.1)
            rows.append(row)
        runner = MagicMock()
        runner.map.return_value = rows

        with pytest.raises(InsufficientData):
            RateExperimentUseCase(_make_artifacts(), runner, catalog).execute(tiny_config)

    def test_noiseless_control_skips_the_fit(self, tiny_config, runner, catalog):
        config = dataclasses.replace(tiny_config, sigma=0.0, reps=1)

        outcome = RateExperimentUseCase(_make_artifacts(), runner, catalog).execute(config)

        assert outcome.slope is None
        assert outcome.fit["noiseless_control"] is True
        assert len(outcome.table.rows) == 4

    def test_power_schedule_scales_eta_with_n(self, tiny_config):
        config = dataclasses.replace(tiny_config, eta_schedule=EtaSchedule.POWER, eta_exponent=-0.5)
        assert rate_eta(config, 8) == pytest.approx(0.1)
        assert rate_eta(config, 32) == pytest.approx(0.05)

    def test_loglog_slope(self):
        xs = np.array([10.0, 100.0, 1000.0])
        fit = loglog_slope(xs, 2.0 * xs ** -0.8)
        assert fit["slope"] == pytest.approx(-0.8)
        assert fit["intercept"] == pytest.approx(math.log(2.0))


class TestCounterexampleStudyUseCase:
    def test_cells_hold_the_interpolation_bounds(self, tiny_config, runner, catalog):
        artifacts = _make_artifacts()

        table = CounterexampleStudyUseCase(artifacts, runner, catalog).execute(tiny_config)

        assert [row["k"] for row in table.rows] == [12, 12, 18, 18]
        assert table.verdicts["hard_failures"] == []
        assert _written(artifacts, "write_table") == ["counterexample.csv", "medians.csv"]
        assert len(catalog.list_all()) == 4

    def test_unfinished_cells_are_hard_failures(self, tiny_config, catalog):
        rows = []
        for n, status in ((6, "ok"), (9, "not_twice_differentiable")):
            row = {name: None for name in COUNTEREXAMPLE_COLUMNS}
            row.update(n=n, seed=1, k=2 * n, status=status)
            if status == "ok":
                row.update(weighted_tv=1.0, lower_bound_passed=True, gauss_newton_passed=True, eta_ceiling=0.5)
            rows.append(row)
        runner = MagicMock()
        runner.map.return_value = rows
        artifacts = _make_artifacts()

        table = CounterexampleStudyUseCase(artifacts, runner, catalog).execute(tiny_config)

        assert table.verdicts["hard_failures"] == ["not_twice_differentiable/n=9/seed=1"]
        name, payload = artifacts.write_json.call_args.args
        assert payload["passed"] is False

    def test_default_design_cell_is_fully_certified(self):
        # seed 0 at n=40 draws a knot within 1e-8 of a datum unless it is re-drawn
        row = run_counterexample_cell(CounterexampleCell(ExperimentConfig(), 40, 0))
        assert row["status"] == "ok"
        assert row["lambda_max_full"] is not None
        assert row["gauss_newton_passed"] is True
        assert row["lower_bound_passed"] is True

    def test_growth_ratio(self):
        assert growth_ratio(2.0, 5.0) == 2.5
        assert growth_ratio(None, 5.0) is None
        assert growth_ratio(0.0, 5.0) is None


class TestBuildReportUseCase:
    def test_rows_follow_the_run_key_order(self, catalog):
        for seed in (2, 1):
            catalog.save(RunEntry(RunEntry.make_key("train", "hat", 30, 100, 0.4, seed), "train", "hat", 30, seed=seed))
        artifacts = _make_artifacts()

        entries = BuildReportUseCase(catalog, artifacts).execute()

        assert [e.seed for e in entries] == [1, 2]
        name, columns, rows = artifacts.write_table.call_args.args
        assert name == "report.csv"
        assert columns == REPORT_COLUMNS
        assert rows[0][REPORT_COLUMNS.index("seed")] == 1
