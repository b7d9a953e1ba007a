# application/use_cases/counterexample_study.py
"""
Use case for the counter-example study: min-norm interpolants of pure-noise
labels and how their curvature and weighted TV grow with n.
"""
import logging
from typing import Any, Dict, Optional

from application.dtos.experiment_config import ExperimentConfig
from application.dtos.study_table import StudyTable
from application.mappers.summary_mapper import SummaryMapper
from application.use_cases.experiment_cells import (
    COUNTEREXAMPLE_COLUMNS,
    CounterexampleCell,
    run_counterexample_cell,
)
from core.enum.cell_status import CellStatus
from core.services.ports.artifact_store_port import ArtifactStore
from core.services.ports.job_runner_port import JobRunner
from core.services.ports.run_catalog_port import RunCatalog

logger = logging.getLogger(__name__)

MEDIAN_FIELDS = ("weighted_tv", "tv_middle", "lower_bound", "lambda_max_full", "eta_ceiling", "residual_rms")
SUPERLINEAR_RATIO = 2.0


def growth_ratio(first: Optional[float], second: Optional[float]) -> Optional[float]:
    if first is None or second is None or first <= 0:
        return None
    return second / first


class CounterexampleStudyUseCase:
    def __init__(self, artifacts: ArtifactStore, runner: JobRunner, catalog: RunCatalog):
        self.artifacts = artifacts
        self.runner = runner
        self.catalog = catalog

    def execute(self, config: ExperimentConfig) -> StudyTable:
        """
        One cell per (n, seed) with width k = k_factor * n. Cells that do not
        finish (no interpolation, a knot on a datum) stay out of the medians
        and count as hard failures.
        """
        cells = [
            CounterexampleCell(config, n, rep)
            for n in config.counterexample_n_grid
            for rep in range(config.reps)
        ]
        rows = self.runner.map(run_counterexample_cell, cells)
        table = StudyTable.build(
            COUNTEREXAMPLE_COLUMNS, rows, "n", MEDIAN_FIELDS,
            include=lambda row: row["status"] == CellStatus.OK.value,
        )
        table = table.with_verdicts(self._verdicts(table))

        self.artifacts.write_table("counterexample.csv", table.columns, table.row_values())
        self.artifacts.write_table("medians.csv", table.median_columns, table.median_values())
        self.artifacts.write_json("certificates.json", self._certificates(table))
        for row in rows:
            self.catalog.save(
                SummaryMapper.row_to_run_entry(
                    "counterexample", "counterexample", row["n"], row["k"], row, self.artifacts.location
                )
            )
        logger.info("counterexample study over %d cells written to %s", len(rows), self.artifacts.location)
        return table

    @staticmethod
    def _verdicts(table: StudyTable) -> Dict[str, Any]:
        by_n = sorted(table.medians, key=lambda row: row["n"])
        wtv = [row["weighted_tv"] for row in by_n]
        ceilings = [row["eta_ceiling"] for row in by_n if row["eta_ceiling"] is not None]
        ratio = growth_ratio(wtv[-2], wtv[-1]) if len(wtv) >= 2 else None
        failures = []
        for row in table.rows:
            if row["status"] != CellStatus.OK.value:
                failures.append(f"{row['status']}/n={row['n']}/seed={row['seed']}")
            if row["lower_bound_passed"] is False:
                failures.append(f"interpolant_lower_bound/n={row['n']}/seed={row['seed']}")
            if row["gauss_newton_passed"] is False:
                failures.append(f"gauss_newton_tv/n={row['n']}/seed={row['seed']}")
        return {
            "hard_failures": failures,
            "weighted_tv_ratio_last_step": ratio,
            "superlinear": ratio is not None and ratio >= SUPERLINEAR_RATIO,
            "eta_ceiling_decreasing": all(b < a for a, b in zip(ceilings, ceilings[1:])),
            "lower_bound_failures": sum(1 for row in table.rows if row["lower_bound_passed"] is False),
            "gauss_newton_failures": sum(1 for row in table.rows if row["gauss_newton_passed"] is False),
            "failed_cells": sum(1 for row in table.rows if row["status"] != CellStatus.OK.value),
        }

    @staticmethod
    def _certificates(table: StudyTable) -> Dict[str, Any]:
        failures = table.verdicts["hard_failures"]
        return {
            "passed": not failures,
            "hard_failures": failures,
            "verdicts": table.verdicts,
        }
