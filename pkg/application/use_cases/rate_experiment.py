# application/use_cases/rate_experiment.py
"""
Use case for the sample-size rate experiment: restricted MSE against n_I on
a log-log scale.
"""
import logging
import math
from typing import Any, Dict, NamedTuple, Optional

import numpy as np

from application.dtos.experiment_config import ExperimentConfig
from application.dtos.study_table import StudyTable
from application.mappers.summary_mapper import SummaryMapper
from application.use_cases.experiment_cells import RATE_COLUMNS, RateCell, rate_eta, run_rate_cell
from core.enum.cell_status import CellStatus
from core.exceptions.domain_exceptions import InsufficientData
from core.services.ports.artifact_store_port import ArtifactStore
from core.services.ports.job_runner_port import JobRunner
from core.services.ports.run_catalog_port import RunCatalog

logger = logging.getLogger(__name__)

MIN_SIZES = 4
MEDIAN_FIELDS = ("n_in", "mse_interval", "mse", "generalization_gap", "mse_target", "loss")


class RateOutcome(NamedTuple):
    slope: Optional[float]
    table: StudyTable
    fit: Dict[str, Any]


def loglog_slope(xs, ys) -> Dict[str, float]:
    slope, intercept = np.polyfit(np.log(np.asarray(xs, dtype=np.float64)), np.log(np.asarray(ys, dtype=np.float64)), 1)
    return {"slope": float(slope), "intercept": float(intercept)}


class RateExperimentUseCase:
    def __init__(self, artifacts: ArtifactStore, runner: JobRunner, catalog: RunCatalog):
        self.artifacts = artifacts
        self.runner = runner
        self.catalog = catalog

    def execute(self, config: ExperimentConfig) -> RateOutcome:
        """
        Rows failing the optimized-over-interval check are kept in rate.csv
        but excluded from the medians and the fit. With sigma = 0 the fit is
        skipped and the run is flagged as the noiseless control.

        Raises:
            InsufficientData: fewer than four sizes in n_grid, or fewer than
                four sizes with a usable median.
        """
        if len(config.n_grid) < MIN_SIZES:
            raise InsufficientData(len(config.n_grid), MIN_SIZES, "sample sizes")
        cells = [
            RateCell(config, n, rate_eta(config, n), rep)
            for n in config.n_grid
            for rep in range(config.reps)
        ]
        rows = self.runner.map(run_rate_cell, cells)
        table = StudyTable.build(
            RATE_COLUMNS, rows, "n", MEDIAN_FIELDS,
            include=lambda row: row["status"] == CellStatus.OK.value and bool(row["optimized_on_interval"]),
        )
        fit: Dict[str, Any] = {
            "eta_schedule": config.eta_schedule.value,
            "eta_exponent": config.eta_exponent,
            "noiseless_control": config.sigma == 0,
            "flagged_rows": sum(1 for row in rows if not row["optimized_on_interval"]),
            "slope": None,
            "intercept": None,
            "target_slope": None,
            "sizes_used": [],
        }
        if config.sigma > 0:
            usable = [
                row for row in table.medians
                if row["n_in"] and row["mse_interval"] is not None and row["mse_interval"] > 0
            ]
            if len(usable) < MIN_SIZES:
                raise InsufficientData(len(usable), MIN_SIZES, "sample sizes with an optimized fit")
            fit.update(loglog_slope([r["n_in"] for r in usable], [r["mse_interval"] for r in usable]))
            fit["target_slope"] = loglog_slope(
                [r["n_in"] for r in usable], [r["mse_target"] for r in usable]
            )["slope"]
            fit["sizes_used"] = [r["n"] for r in usable]
        else:
            worst = max((r["mse_interval"] for r in table.medians if r["mse_interval"] is not None), default=None)
            fit["max_median_mse_interval"] = worst
        table = table.with_verdicts(fit)

        self.artifacts.write_table("rate.csv", table.columns, table.row_values())
        self.artifacts.write_table("medians.csv", table.median_columns, table.median_values())
        self.artifacts.write_json("slope.json", fit)
        for row in rows:
            self.catalog.save(
                SummaryMapper.row_to_run_entry(
                    "rate", "hat", row["n"], config.k, row, self.artifacts.location
                )
            )
        if fit["slope"] is not None and not math.isnan(fit["slope"]):
            logger.info("rate experiment: log-log slope %.3f over n_I", fit["slope"])
        return RateOutcome(fit["slope"], table, fit)
