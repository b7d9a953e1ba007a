# application/use_cases/build_report.py
"""
Use case for exporting the run catalog as a flat table.
"""
from typing import List

from core.entities.run_entry import RunEntry
from core.services.ports.artifact_store_port import ArtifactStore
from core.services.ports.run_catalog_port import RunCatalog

REPORT_COLUMNS = (
    "run_key", "command", "design", "n", "k", "eta", "seed", "status", "final_loss", "final_mse",
    "lambda_max_full", "weighted_tv", "knot_count", "stable", "optimized", "certificates_passed",
    "output_dir",
)


class BuildReportUseCase:
    def __init__(self, catalog: RunCatalog, artifacts: ArtifactStore):
        self.catalog = catalog
        self.artifacts = artifacts

    def execute(self) -> List[RunEntry]:
        """Writes report.csv with one row per catalog entry, ordered by run_key."""
        entries = sorted(self.catalog.list_all(), key=lambda entry: entry.run_key)
        rows = []
        for entry in entries:
            payload = entry.to_dict()
            rows.append([payload[name] for name in REPORT_COLUMNS])
        self.artifacts.write_table("report.csv", REPORT_COLUMNS, rows)
        return entries
