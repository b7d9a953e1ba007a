# application/mappers/summary_mapper.py
"""
RunSummary -> JSON document and catalog entry.
"""
from typing import Any, Dict, Optional

from core.entities.run_entry import RunEntry
from core.value_objects.certificate_report import CertificateReport
from core.value_objects.dataset import Dataset
from core.value_objects.train_record import RunSummary


class SummaryMapper:
    @staticmethod
    def to_dict(summary: RunSummary) -> Dict[str, Any]:
        return {
            "config": summary.config,
            "final": summary.final_record.to_dict(),
            "param_inf_norm": summary.param_inf_norm,
            "stable": summary.stable,
            "beos_step": summary.beos_step,
            "steady_step": summary.steady_step,
            "optimized": summary.optimized,
            "optimized_vs_sigma": summary.optimized_vs_sigma,
            "ground_truth_loss": summary.ground_truth_loss,
            "certificates": summary.certificates,
        }

    @staticmethod
    def to_run_entry(
        summary: RunSummary,
        command: str,
        design: str,
        data: Dataset,
        output_dir: Optional[str],
        report: Optional[CertificateReport] = None,
    ) -> RunEntry:
        config = summary.config
        entry = RunEntry(
            run_key=RunEntry.make_key(command, design, data.n, config["k"], config["eta"], config["seed"]),
            command=command,
            design=design,
            n=data.n,
            k=config["k"],
            eta=config["eta"],
            seed=config["seed"],
            output_dir=output_dir,
        )
        final = summary.final_record
        entry.final_loss = final.loss
        entry.final_mse = final.mse
        entry.lambda_max_full = final.lambda_max_full
        entry.weighted_tv = final.weighted_tv
        entry.knot_count = final.knot_count
        entry.stable = summary.stable
        entry.optimized = summary.optimized
        entry.certificates_passed = report.passed if report is not None else None
        return entry

    @staticmethod
    def row_to_run_entry(command: str, design: str, n: int, k: Optional[int], row: Dict[str, Any], output_dir: Optional[str]) -> RunEntry:
        """Catalog entry of one study cell."""
        eta = row.get("eta")
        entry = RunEntry(
            run_key=RunEntry.make_key(command, design, n, k, eta, row.get("seed")),
            command=command,
            design=design,
            n=n,
            k=k,
            eta=eta,
            seed=row.get("seed"),
            output_dir=output_dir,
        )
        entry.status = row.get("status", "ok")
        entry.final_loss = row.get("loss")
        entry.final_mse = row.get("mse")
        entry.lambda_max_full = row.get("lambda_max_full")
        entry.weighted_tv = row.get("weighted_tv")
        entry.knot_count = row.get("knot_count")
        entry.stable = row.get("stable")
        entry.optimized = row.get("optimized")
        if row.get("hard_failures") is not None:
            entry.certificates_passed = row["hard_failures"] == 0
        return entry
