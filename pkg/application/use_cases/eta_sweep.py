# application/use_cases/eta_sweep.py
"""
Use case for the step-size sweep: eta x seed cells, medians per eta and the
smoothness / bias-variance trend verdicts.
"""
import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from application.dtos.experiment_config import ExperimentConfig
from application.dtos.study_table import StudyTable
from application.mappers.summary_mapper import SummaryMapper
from application.use_cases.experiment_cells import ETA_COLUMNS, EtaCell, run_eta_cell
from core.enum.cell_status import CellStatus
from core.services.ports.artifact_store_port import ArtifactStore
from core.services.ports.figure_renderer_port import FigureRenderer
from core.services.ports.job_runner_port import JobRunner
from core.services.ports.run_catalog_port import RunCatalog

logger = logging.getLogger(__name__)

MEDIAN_FIELDS = (
    "weighted_tv", "tv_plain", "loss", "mse", "lambda_max_full", "lambda_max_gn",
    "knot_count", "flatness_bound", "l1", "lp", "knot_q50",
)


def count_increases(values: Sequence[Optional[float]]) -> int:
    """Adjacent increases in a sequence, skipping missing entries."""
    present = [v for v in values if v is not None]
    return int(sum(1 for a, b in zip(present, present[1:]) if b > a))


def interior_argmin(values: Sequence[Optional[float]]) -> Optional[bool]:
    present = [v for v in values if v is not None]
    if len(present) < 3 or len(present) != len(values):
        return None
    best = int(np.argmin(present))
    return 0 < best < len(present) - 1


class EtaSweepUseCase:
    def __init__(
        self,
        artifacts: ArtifactStore,
        runner: JobRunner,
        catalog: RunCatalog,
        renderer: Optional[FigureRenderer] = None,
    ):
        self.artifacts = artifacts
        self.runner = runner
        self.catalog = catalog
        self.renderer = renderer

    def execute(self, config: ExperimentConfig, plot: bool = False) -> StudyTable:
        """
        Runs every (eta, seed) cell. Cells that diverge or cannot be certified
        keep their status, stay out of the medians and count as hard failures.
        """
        cells = [EtaCell(config, eta, rep) for eta in config.eta_grid for rep in range(config.reps)]
        rows = self.runner.map(run_eta_cell, cells)
        table = StudyTable.build(
            ETA_COLUMNS, rows, "eta", MEDIAN_FIELDS,
            include=lambda row: row["status"] == CellStatus.OK.value,
        )
        table = table.with_verdicts(self._verdicts(table))

        self.artifacts.write_table("sweep.csv", table.columns, table.row_values())
        self.artifacts.write_table("medians.csv", table.median_columns, table.median_values())
        self.artifacts.write_json("certificates.json", self._certificates(table))
        for row in rows:
            self.catalog.save(
                SummaryMapper.row_to_run_entry(
                    "sweep", config.design.value, config.n, config.k, row, self.artifacts.location
                )
            )
        if plot and self.renderer is not None:
            self.renderer.render_sweep(
                "sweep.svg",
                [row["eta"] for row in table.medians],
                {name: table.series(name) for name in ("weighted_tv", "flatness_bound", "mse")},
            )
        logger.info("sweep over %d cells written to %s", len(rows), self.artifacts.location)
        return table

    def _verdicts(self, table: StudyTable) -> Dict[str, object]:
        by_eta = sorted(table.medians, key=lambda row: row["eta"])
        wtv = [row["weighted_tv"] for row in by_eta]
        mse = [row["mse"] for row in by_eta]
        seeds: Dict[int, List[dict]] = {}
        for row in table.rows:
            seeds.setdefault(row["seed"], []).append(row)
        per_seed = [
            interior_argmin([r["mse"] for r in sorted(group, key=lambda r: r["eta"])])
            for group in seeds.values()
        ]
        inversions = count_increases(wtv)
        failures = []
        for row in table.rows:
            if row["status"] != CellStatus.OK.value:
                failures.append(f"{row['status']}/eta={row['eta']!r}/seed={row['seed']}")
            elif (row["hard_failures"] or 0) > 0 or (row["checkpoint_failures"] or 0) > 0:
                failures.append(f"eta={row['eta']!r}/seed={row['seed']}")
        return {
            "hard_failures": failures,
            "weighted_tv_increases": inversions,
            "weighted_tv_monotone": inversions <= 1,
            "mse_interior_minimum": interior_argmin(mse),
            "mse_interior_minimum_seeds": sum(1 for v in per_seed if v),
            "seeds": len(per_seed),
            "failed_cells": sum(1 for row in table.rows if row["status"] != CellStatus.OK.value),
        }

    @staticmethod
    def _certificates(table: StudyTable) -> Dict[str, object]:
        failures = table.verdicts["hard_failures"]
        return {
            "passed": not failures,
            "hard_failures": failures,
            "cells": [
                {
                    "eta": row["eta"],
                    "seed": row["seed"],
                    "status": row["status"],
                    "flatness_slack": row["flatness_slack"],
                    "gauss_newton_slack": row["gauss_newton_slack"],
                    "checkpoint_failures": row["checkpoint_failures"],
                    "hard_failures": row["hard_failures"],
                }
                for row in table.rows
            ],
            "verdicts": table.verdicts,
        }
