# application/use_cases/train_network.py
"""
Use case for training one network and certifying its final iterate.
"""
import dataclasses
import logging
from typing import List, NamedTuple, Optional

from application.dtos.experiment_config import ExperimentConfig
from application.mappers.summary_mapper import SummaryMapper
from core.exceptions.domain_exceptions import Diverged, NoInterval, NumericalError
from core.services import certificates, diagnostics, funcspace, trainer
from core.services.ports.artifact_store_port import ArtifactStore
from core.services.ports.figure_renderer_port import FigureRenderer
from core.services.ports.run_catalog_port import RunCatalog
from core.value_objects.certificate_report import CertificateReport
from core.value_objects.dataset import Dataset
from core.value_objects.interval_report import IntervalReport
from core.value_objects.net_params import NetParams
from core.value_objects.train_record import RunSummary, TrainRecord

logger = logging.getLogger(__name__)


class TrainOutcome(NamedTuple):
    params: NetParams
    records: List[TrainRecord]
    summary: RunSummary
    report: CertificateReport


class TrainNetworkUseCase:
    """
    Orchestrates a training run:
    1) builds the dataset and runs gradient descent;
    2) writes records, parameters and the g profile;
    3) verifies every bound at the final iterate and writes the summary;
    4) registers the run in the catalog and renders figures on request.
    """
    def __init__(
        self,
        artifacts: ArtifactStore,
        catalog: RunCatalog,
        renderer: Optional[FigureRenderer] = None,
    ):
        self.artifacts = artifacts
        self.catalog = catalog
        self.renderer = renderer

    def execute(self, config: ExperimentConfig, plot: bool = False) -> TrainOutcome:
        """
        Raises:
            Diverged: the records logged up to the divergence are written first.
            NotTwiceDifferentiable: the final iterate sits on a kink; the
                summary is written without certificates.
        """
        data = config.dataset()
        train_config = config.train_config()
        try:
            result = trainer.train(train_config, data)
        except Diverged as exc:
            if exc.records:
                self.artifacts.write_records("records.csv", exc.records)
            raise

        self.artifacts.write_records("records.csv", result.records)
        self.artifacts.write_json("params.json", result.params.to_dict())
        weight = funcspace.weight_g(data)
        self.artifacts.write_table(
            "g_profile.csv", ("x", "g"), funcspace.g_profile(weight, -data.x_max, data.x_max, config.basis_points)
        )
        interval = self._interval(config, data)

        try:
            report = certificates.verify_bounds(
                result.params,
                data,
                config.eta,
                config.delta,
                result.records,
                interval=(interval.lo, interval.hi) if interval is not None else None,
                method=config.spectrum_method,
                diff_tol=config.diff_tol,
                eos_eps=config.eos_eps,
                samples=config.certificate_samples,
                seed=config.seed,
                interp_tol=config.interp_tol,
            )
        except NumericalError:
            self._write_summary(result.summary, interval)
            raise

        summary = dataclasses.replace(result.summary, certificates=report.to_dict())
        self._write_summary(summary, interval)
        self.artifacts.write_json("certificates.json", report.to_dict())
        self.catalog.save(
            SummaryMapper.to_run_entry(
                summary, "train", config.design.value, data, self.artifacts.location, report
            )
        )
        if plot and self.renderer is not None:
            self.renderer.render_fit("fit.svg", data, result.params)
            self.renderer.render_learning_curves("learning_curves.svg", result.records, config.eta)
            grid, matrix = diagnostics.export_basis(result.params, -data.x_max, data.x_max, config.basis_points)
            self.renderer.render_basis("basis.svg", grid, matrix)
        logger.info("train run written to %s (certificates passed: %s)", self.artifacts.location, report.passed)
        return TrainOutcome(result.params, result.records, summary, report)

    def _interval(self, config: ExperimentConfig, data: Dataset) -> Optional[IntervalReport]:
        if config.explicit_interval is not None:
            lo, hi = config.explicit_interval
            weight = funcspace.weight_g(data)
            return IntervalReport(lo, hi, funcspace.infimum_on(weight, lo, hi), data.count_in(lo, hi))
        try:
            return funcspace.select_interval(funcspace.weight_g(data), config.interval_c, data.x_max)
        except NoInterval as exc:
            logger.warning("no interval selected: %s", exc)
            return None

    def _write_summary(self, summary: RunSummary, interval: Optional[IntervalReport]) -> None:
        payload = SummaryMapper.to_dict(summary)
        payload["interval"] = interval.to_dict() if interval is not None else None
        self.artifacts.write_json("summary.json", payload)
