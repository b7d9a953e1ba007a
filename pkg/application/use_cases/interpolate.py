# application/use_cases/interpolate.py
"""
Use case for the second-layer min-norm interpolant on a frozen random
first layer.
"""
import logging
from typing import Any, Dict, List, NamedTuple

import numpy as np

from application.dtos.experiment_config import ExperimentConfig
from core.entities.run_entry import RunEntry
from core.enum.lower_bound_mode import LowerBoundMode
from core.exceptions.domain_exceptions import InsufficientData, NotEquispaced
from core.services import certificates, funcspace, landscape, metrics, relu_net, trainer
from core.services.ports.artifact_store_port import ArtifactStore
from core.services.ports.run_catalog_port import RunCatalog
from core.value_objects.certificate_report import CertificateReport

logger = logging.getLogger(__name__)

WIDTH_COLUMNS = (
    "k", "rank", "residual_rms", "interpolates", "weighted_tv", "tv_plain", "knot_count",
    "param_inf_norm", "grid_risk",
)


class InterpolationOutcome(NamedTuple):
    fit: trainer.InterpolationResult
    summary: dict
    report: CertificateReport


class InterpolateUseCase:
    def __init__(self, artifacts: ArtifactStore, catalog: RunCatalog):
        self.artifacts = artifacts
        self.catalog = catalog

    def execute(self, config: ExperimentConfig) -> InterpolationOutcome:
        """
        Fits (w2, b2) by minimum-norm least squares over the configured
        first layer (interp_init) and certifies the result.

        Raises:
            NotTwiceDifferentiable: a datum lies on a knot of the interpolant.
        """
        data = config.dataset()
        first = relu_net.init_params(
            config.k, config.init(config.interp_init), config.seed, avoid=data.xs, diff_tol=config.diff_tol
        )
        fit = trainer.min_norm_interpolant(trainer.FirstLayer.of(first), data, interp_tol=config.interp_tol)
        self.artifacts.write_json("params.json", fit.params.to_dict())

        weight = funcspace.weight_g(data)
        pwl = relu_net.extract_knots(fit.params)
        if config.k_grid:
            rows = self._width_sweep(config, data)
            self.artifacts.write_table(
                "interpolate_k.csv", WIDTH_COLUMNS, [[row[name] for name in WIDTH_COLUMNS] for row in rows]
            )

        summary = {
            "k": config.k,
            "n": data.n,
            "interp_init": config.interp_init.value,
            "residual_rms": fit.residual_rms,
            "rank": fit.rank,
            "interpolates": trainer.interpolates(fit, config.interp_tol),
            "loss": landscape.loss(fit.params, data),
            "weighted_tv": funcspace.weighted_tv(pwl, weight),
            "tv_plain": funcspace.tv_on_interval(pwl, float(data.xs[0]), float(data.xs[-1])),
            "param_inf_norm": fit.params.inf_norm(),
            "lower_bound": None,
            "lower_bound_weighted": None,
        }
        try:
            summary["lower_bound"] = funcspace.interpolant_tv_lower_bound(data, LowerBoundMode.PLAIN_MIDDLE)
            summary["lower_bound_weighted"] = funcspace.interpolant_tv_lower_bound(
                data, LowerBoundMode.WEIGHTED_MIDDLE, weight
            )
        except (InsufficientData, NotEquispaced) as exc:
            logger.info("no interpolant lower bound: %s", exc)

        report = certificates.verify_bounds(
            fit.params,
            data,
            config.eta,
            config.delta,
            method=config.spectrum_method,
            diff_tol=config.diff_tol,
            samples=config.certificate_samples,
            seed=config.seed,
            interp_tol=config.interp_tol,
        )
        summary["certificates"] = report.to_dict()
        self.artifacts.write_json("summary.json", summary)
        self.artifacts.write_json("certificates.json", report.to_dict())

        entry = RunEntry(
            run_key=RunEntry.make_key("interpolate", config.design.value, data.n, config.k, None, config.seed),
            command="interpolate",
            design=config.design.value,
            n=data.n,
            k=config.k,
            seed=config.seed,
            output_dir=self.artifacts.location,
        )
        entry.final_loss = summary["loss"]
        entry.weighted_tv = summary["weighted_tv"]
        entry.lambda_max_full = report.entry(certificates.STABILITY).value
        entry.certificates_passed = report.passed
        self.catalog.save(entry)
        logger.info("min-norm interpolant: residual rms %.3e, rank %d", fit.residual_rms, fit.rank)
        return InterpolationOutcome(fit, summary, report)

    @staticmethod
    def _width_sweep(config: ExperimentConfig, data) -> List[Dict[str, Any]]:
        """One min-norm interpolant per width in k_grid, all on the same seed."""
        weight = funcspace.weight_g(data)
        lo, hi = weight.support
        rows = []
        for k in config.k_grid:
            first = relu_net.init_params(
                k, config.init(config.interp_init), config.seed, avoid=data.xs, diff_tol=config.diff_tol
            )
            fit = trainer.min_norm_interpolant(trainer.FirstLayer.of(first), data, interp_tol=config.interp_tol)
            pwl = relu_net.extract_knots(fit.params)
            rows.append({
                "k": k,
                "rank": fit.rank,
                "residual_rms": fit.residual_rms,
                "interpolates": trainer.interpolates(fit, config.interp_tol),
                "weighted_tv": funcspace.weighted_tv(pwl, weight),
                "tv_plain": funcspace.tv_on_interval(pwl, lo, hi),
                "knot_count": int(np.count_nonzero(pwl.knots_in(lo, hi))),
                "param_inf_norm": fit.params.inf_norm(),
                "grid_risk": (
                    metrics.grid_risk(fit.params, data, config.gap_test_m) if data.ground_truth is not None else None
                ),
            })
            logger.info("width %d: residual rms %.3e, weighted TV %.4g", k, fit.residual_rms, rows[-1]["weighted_tv"])
        return rows
