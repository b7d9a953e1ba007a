# application/use_cases/experiment_cells.py
"""
Independent study cells. Each cell is a frozen, picklable description and a
top-level function returning one table row, so the job runner can ship
them to worker processes.
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict

from application.dtos.experiment_config import ExperimentConfig
from core.enum.cell_status import CellStatus
from core.enum.design import Design
from core.enum.eta_schedule import EtaSchedule
from core.enum.lower_bound_mode import LowerBoundMode
from core.enum.optimized_mode import OptimizedMode
from core.exceptions.domain_exceptions import (
    Diverged,
    NoConvergence,
    NoInterval,
    NotInterpolating,
    NotTwiceDifferentiable,
)
from core.services import bounds, certificates, diagnostics, funcspace, landscape, metrics, relu_net, trainer
from core.value_objects.certificate_report import CertificateEntry

logger = logging.getLogger(__name__)

ETA_COLUMNS = (
    "eta", "seed", "status", "steps", "loss", "mse", "lambda_max_full", "lambda_max_gn",
    "weighted_tv", "tv_plain", "knot_count", "flatness_bound", "flatness_slack",
    "gauss_newton_slack", "checkpoint_failures", "hard_failures", "stable", "beos_step",
    "optimized", "optimized_vs_sigma", "l1", "lp", "knot_q10", "knot_q25", "knot_q50", "knot_q75", "knot_q90",
    "min_knot_datum_distance",
)
RATE_COLUMNS = (
    "n", "eta", "seed", "status", "steps", "loss", "interval_lo", "interval_hi", "interval_c_inf",
    "n_in", "mse", "mse_interval", "optimized", "optimized_on_interval", "generalization_gap",
    "mse_target",
)
COUNTEREXAMPLE_COLUMNS = (
    "n", "seed", "k", "status", "residual_rms", "rank", "weighted_tv", "tv_middle", "lower_bound",
    "lower_bound_weighted", "lambda_max_full", "lambda_max_gn", "gauss_newton_bound", "eta_ceiling",
    "lower_bound_passed", "gauss_newton_passed",
)


def _status_of(exc: Exception) -> CellStatus:
    if isinstance(exc, Diverged):
        return CellStatus.DIVERGED
    if isinstance(exc, NotTwiceDifferentiable):
        return CellStatus.NOT_TWICE_DIFFERENTIABLE
    if isinstance(exc, NoConvergence):
        return CellStatus.NO_CONVERGENCE
    if isinstance(exc, NotInterpolating):
        return CellStatus.NOT_INTERPOLATING
    return CellStatus.NO_INTERVAL


def _blank(columns, **known) -> Dict[str, Any]:
    row = {name: None for name in columns}
    row.update(known)
    return row


@dataclass(frozen=True)
class EtaCell:
    config: ExperimentConfig
    eta: float
    rep: int

    @property
    def seed(self) -> int:
        return self.config.seed + self.rep


@dataclass(frozen=True)
class RateCell:
    config: ExperimentConfig
    n: int
    eta: float
    rep: int

    @property
    def seed(self) -> int:
        return self.config.seed + self.rep


@dataclass(frozen=True)
class CounterexampleCell:
    config: ExperimentConfig
    n: int
    rep: int

    @property
    def seed(self) -> int:
        return self.config.seed + self.rep


def run_eta_cell(cell: EtaCell) -> Dict[str, Any]:
    config = cell.config
    row = _blank(ETA_COLUMNS, eta=cell.eta, seed=cell.seed, status=CellStatus.OK.value)
    data = config.dataset(seed=config.resolved_data_seed + cell.rep)
    try:
        result = trainer.train(config.train_config(eta=cell.eta, seed=cell.seed), data)
    except Diverged as exc:
        logger.info("sweep cell eta=%g seed=%d diverged at step %d", cell.eta, cell.seed, exc.step)
        row.update(status=CellStatus.DIVERGED.value, steps=exc.step)
        return row

    final = result.summary.final_record
    row.update(
        steps=final.step,
        loss=final.loss,
        mse=final.mse,
        lambda_max_full=final.lambda_max_full,
        lambda_max_gn=final.lambda_max_gn,
        weighted_tv=final.weighted_tv,
        tv_plain=final.tv_plain,
        knot_count=final.knot_count,
        stable=result.summary.stable,
        beos_step=result.summary.beos_step,
        optimized=result.summary.optimized,
        optimized_vs_sigma=result.summary.optimized_vs_sigma,
    )
    sparsity = diagnostics.sparsity_metrics(result.params, config.dslope_tol, data, config.lp_norm_p)
    row.update(
        l1=sparsity["l1"],
        lp=sparsity["lp"],
        min_knot_datum_distance=sparsity["min_knot_datum_distance"],
        **{f"knot_{name}": value for name, value in sparsity["knot_quantiles"].items()},
    )
    try:
        report = certificates.verify_bounds(
            result.params, data, cell.eta, config.delta, result.records,
            method=config.spectrum_method, diff_tol=config.diff_tol, eos_eps=config.eos_eps,
            samples=config.certificate_samples, seed=cell.seed, interp_tol=config.interp_tol,
        )
    except (NotTwiceDifferentiable, NoConvergence) as exc:
        row["status"] = _status_of(exc).value
        logger.warning("sweep cell eta=%g seed=%d: %s", cell.eta, cell.seed, exc)
        return row
    flatness = report.entry(certificates.FLATNESS_TV)
    row.update(
        flatness_bound=flatness.bound,
        flatness_slack=flatness.slack,
        gauss_newton_slack=report.entry(certificates.GAUSS_NEWTON_TV).slack,
        checkpoint_failures=sum(1 for c in report.checkpoints if not c.passed),
        hard_failures=len(report.hard_failures()),
    )
    logger.info("sweep cell eta=%g seed=%d done: wtv=%.4g loss=%.4g", cell.eta, cell.seed, final.weighted_tv, final.loss)
    return row


def rate_eta(config: ExperimentConfig, n: int) -> float:
    """Step size used at sample size n under the configured schedule."""
    if config.eta_schedule is EtaSchedule.POWER:
        return config.eta * (n / config.n_grid[0]) ** config.eta_exponent
    return config.eta


def run_rate_cell(cell: RateCell) -> Dict[str, Any]:
    config = cell.config
    row = _blank(RATE_COLUMNS, n=cell.n, eta=cell.eta, seed=cell.seed, status=CellStatus.OK.value)
    data = config.dataset(n=cell.n, seed=config.resolved_data_seed + cell.rep, design=Design.HAT)
    try:
        result = trainer.train(config.train_config(eta=cell.eta, seed=cell.seed), data)
        if config.explicit_interval is not None:
            lo, hi = config.explicit_interval
        else:
            chosen = funcspace.select_interval(funcspace.weight_g(data), config.interval_c, data.x_max)
            lo, hi = chosen.lo, chosen.hi
            row["interval_c_inf"] = chosen.c_inf
    except (Diverged, NoInterval) as exc:
        row["status"] = _status_of(exc).value
        logger.warning("rate cell n=%d seed=%d: %s", cell.n, cell.seed, exc)
        return row

    n_in = data.count_in(lo, hi)
    row.update(
        steps=result.summary.final_record.step,
        loss=result.summary.final_record.loss,
        interval_lo=lo,
        interval_hi=hi,
        n_in=n_in,
        mse=metrics.mse(result.params, data),
        mse_interval=metrics.mse(result.params, data, (lo, hi)),
        optimized=trainer.check_optimized(result.params, data, OptimizedMode.VS_GROUND_TRUTH),
        optimized_on_interval=metrics.optimized_over_interval(result.params, data, lo, hi),
        generalization_gap=metrics.generalization_gap(result.params, data, (lo, hi), cell.seed, config.gap_test_m),
        mse_target=bounds.mse_rate_target(config.sigma, n_in, cell.eta, data.x_max),
    )
    logger.info("rate cell n=%d seed=%d done: mse_I=%.4g", cell.n, cell.seed, row["mse_interval"])
    return row


def run_counterexample_cell(cell: CounterexampleCell) -> Dict[str, Any]:
    config = cell.config
    k = config.k_factor * cell.n
    row = _blank(COUNTEREXAMPLE_COLUMNS, n=cell.n, seed=cell.seed, k=k, status=CellStatus.OK.value)
    data = config.dataset(n=cell.n, seed=config.resolved_data_seed + cell.rep, design=Design.COUNTEREXAMPLE)
    try:
        first = relu_net.init_params(
            k, config.init(config.interp_init), cell.seed, avoid=data.xs, diff_tol=config.diff_tol
        )
        fit = trainer.min_norm_interpolant(
            trainer.FirstLayer.of(first), data, strict=True, interp_tol=config.interp_tol
        )
    except NotInterpolating as exc:
        row.update(status=CellStatus.NOT_INTERPOLATING.value, residual_rms=exc.residual_rms)
        logger.warning("counterexample cell n=%d seed=%d: %s", cell.n, cell.seed, exc)
        return row
    except NotTwiceDifferentiable as exc:
        row["status"] = _status_of(exc).value
        logger.warning("counterexample cell n=%d seed=%d: %s", cell.n, cell.seed, exc)
        return row

    weight = funcspace.weight_g(data)
    pwl = relu_net.extract_knots(fit.params)
    middle = funcspace.middle_interval(data)
    wtv = funcspace.weighted_tv(pwl, weight)
    lower = funcspace.interpolant_tv_lower_bound(data, LowerBoundMode.PLAIN_MIDDLE)
    tv_middle = funcspace.tv_on_interval(pwl, middle.lo, middle.hi)
    row.update(
        residual_rms=fit.residual_rms,
        rank=fit.rank,
        weighted_tv=wtv,
        tv_middle=tv_middle,
        lower_bound=lower,
        lower_bound_weighted=funcspace.interpolant_tv_lower_bound(data, LowerBoundMode.WEIGHTED_MIDDLE, weight),
        lower_bound_passed=CertificateEntry(certificates.INTERPOLANT_LOWER_BOUND, lower, tv_middle).passed,
        gauss_newton_bound=1.0 + 2.0 * wtv,
    )
    try:
        spectrum = landscape.spectrum_report(fit.params, data, config.spectrum_method, config.diff_tol)
    except (NotTwiceDifferentiable, NoConvergence) as exc:
        row["status"] = _status_of(exc).value
        logger.warning("counterexample cell n=%d seed=%d: %s", cell.n, cell.seed, exc)
        return row
    row.update(
        lambda_max_full=spectrum.lambda_max_full,
        lambda_max_gn=spectrum.lambda_max_gn,
        eta_ceiling=2.0 / spectrum.lambda_max_full,
        gauss_newton_passed=CertificateEntry(
            certificates.GAUSS_NEWTON_TV, 1.0 + 2.0 * wtv, spectrum.lambda_max_full
        ).passed,
    )
    logger.info("counterexample cell n=%d seed=%d done: wtv=%.4g", cell.n, cell.seed, wtv)
    return row
