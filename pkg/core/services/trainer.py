"""
Full-batch gradient descent with metric logging, steady-state detection,
the optimized-assumption checks and the second-layer min-norm baseline.
"""
import dataclasses
import logging
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from core.enum.optimized_mode import OptimizedMode
from core.exceptions.domain_exceptions import (
    Diverged,
    InsufficientData,
    MissingGroundTruth,
    NoConvergence,
    NotInterpolating,
)
from core.services import funcspace, landscape, relu_net
from core.services.metrics import mse as mse_of, not_worse
from core.value_objects.dataset import Dataset
from core.value_objects.empirical_weight import EmpiricalWeight
from core.value_objects.net_params import NetParams
from core.value_objects.train_config import TrainConfig
from core.value_objects.train_record import RunSummary, TrainRecord

logger = logging.getLogger(__name__)

INTERP_TOL = 1e-8


class FirstLayer(NamedTuple):
    w1: np.ndarray
    b1: np.ndarray

    @property
    def k(self) -> int:
        return int(np.asarray(self.w1).size)

    @classmethod
    def of(cls, params: NetParams) -> "FirstLayer":
        return cls(params.w1, params.b1)


class InterpolationResult(NamedTuple):
    params: NetParams
    residual_rms: float
    rank: int


class TrainResult(NamedTuple):
    params: NetParams
    records: List[TrainRecord]
    summary: RunSummary


def _descend(
    theta: np.ndarray, gradient: np.ndarray, eta: float, step: int, records: Sequence[TrainRecord] = ()
) -> np.ndarray:
    updated = theta - eta * gradient
    if not np.all(np.isfinite(updated)):
        raise Diverged(step, records)
    return updated


def gd_step(params: NetParams, data: Dataset, eta: float) -> NetParams:
    """One exact full-batch update theta - eta * grad L(theta)."""
    gradient = landscape.loss_gradient(params, data)
    return NetParams.from_vector(_descend(params.flatten(), gradient, eta, step=1))


def _record(
    step: int,
    params: NetParams,
    data: Dataset,
    weight: EmpiricalWeight,
    grad_norm: float,
    config: TrainConfig,
    with_spectrum: bool,
) -> TrainRecord:
    lo, hi = weight.support
    pwl = relu_net.extract_knots(params)
    margin = relu_net.differentiability_margin(params, data)
    smooth = margin > config.diff_tol
    lam_full = lam_gn = None
    if with_spectrum and smooth:
        try:
            report = landscape.spectrum_report(params, data, config.spectrum_method, config.diff_tol)
            lam_full, lam_gn = report.lambda_max_full, report.lambda_max_gn
        except NoConvergence as exc:
            logger.warning("step %d: spectrum skipped, %s", step, exc)
    elif with_spectrum:
        logger.warning("step %d: iterate has a kink on a datum (margin %.3e), spectrum skipped", step, margin)
    return TrainRecord(
        step=step,
        loss=landscape.loss(params, data),
        grad_norm=grad_norm,
        weighted_tv=funcspace.weighted_tv(pwl, weight),
        tv_plain=funcspace.tv_on_interval(pwl, lo, hi),
        knot_count=int(np.count_nonzero(pwl.knots_in(lo, hi))),
        diff_margin=margin,
        mse=mse_of(params, data) if data.ground_truth is not None else None,
        lambda_max_full=lam_full,
        lambda_max_gn=lam_gn,
        twice_differentiable=smooth,
    )


def train(config: TrainConfig, data: Dataset, initial: Optional[NetParams] = None) -> TrainResult:
    """
    Runs gradient descent from init_params(k, init, seed) (or `initial`) until
    max_steps or ||grad L|| < stop_grad_norm. A record is logged every
    log_every steps and at the final step.

    Raises:
        Diverged: carrying every record logged before the failure.
    """
    if data.n < 2:
        raise InsufficientData(data.n, 2)
    params = initial if initial is not None else relu_net.init_params(
        config.k, config.init, config.seed, avoid=data.xs, diff_tol=config.diff_tol
    )
    weight = funcspace.weight_g(data)
    theta = params.flatten()
    records: List[TrainRecord] = []
    logged = 0
    step = 0

    while True:
        params = NetParams.from_vector(theta)
        gradient = landscape.loss_gradient(params, data)
        grad_norm = float(np.linalg.norm(gradient))
        if not np.isfinite(grad_norm):
            raise Diverged(step, records)
        finished = step >= config.max_steps or (
            config.stop_grad_norm > 0 and grad_norm < config.stop_grad_norm
        )
        if step % config.log_every == 0 or finished:
            with_spectrum = logged % config.spectrum_every == 0 or finished
            record = _record(step, params, data, weight, grad_norm, config, with_spectrum)
            records.append(record)
            logged += 1
            logger.debug(
                "step %d loss=%.6g grad=%.3e lambda=%s wtv=%.4g",
                step, record.loss, grad_norm, record.lambda_max_full, record.weighted_tv,
            )
        if finished:
            break
        theta = _descend(theta, gradient, config.eta, step + 1, records)
        step += 1

    summary = summarize(config, data, params, records)
    logger.info(
        "trained k=%d eta=%g for %d steps: loss=%.6g stable=%s",
        config.k, config.eta, step, records[-1].loss, summary.stable,
    )
    return TrainResult(params, records, summary)


def summarize(config: TrainConfig, data: Dataset, params: NetParams, records: Sequence[TrainRecord]) -> RunSummary:
    final = records[-1]
    trace = [r.lambda_max_full for r in records]
    beos = landscape.beos_first_index(trace, config.eta, config.eos_eps)
    stable = None
    if final.lambda_max_full is not None:
        stable = landscape.within_stability(final.lambda_max_full, config.eta)
    optimized = optimized_sigma = reference = None
    if data.ground_truth is not None:
        optimized = check_optimized(params, data, OptimizedMode.VS_GROUND_TRUTH)
        reference = ground_truth_loss(data)
    if data.sigma is not None:
        optimized_sigma = check_optimized(params, data, OptimizedMode.VS_SIGMA)
    return RunSummary(
        config=config_echo(config),
        params=params,
        final_record=final,
        param_inf_norm=params.inf_norm(),
        stable=stable,
        beos_step=records[beos].step if beos is not None else None,
        steady_step=detect_steady_state(records, config.steady_window, config.steady_rel_tol),
        optimized=optimized,
        optimized_vs_sigma=optimized_sigma,
        ground_truth_loss=reference,
    )


def config_echo(config: TrainConfig) -> dict:
    echo = dataclasses.asdict(config)
    echo["spectrum_method"] = config.spectrum_method.value
    echo["init"] = dict(echo["init"], kind=config.init.kind.value)
    return echo


def _relative_change(values: np.ndarray) -> float:
    return float((np.max(values) - np.min(values)) / (1.0 + np.max(np.abs(values))))


def detect_steady_state(records: Sequence[TrainRecord], window: int, rel_tol: float) -> Optional[int]:
    """
    Earliest logged step s such that every window of `window` consecutive
    records starting at or after s has relative change
    (max - min) / (1 + max |v|) <= rel_tol, for the loss and for
    lambda_max_gn (ignored when no record carries it).
    """
    if window < 2:
        raise ValueError(f"window must be >= 2, got {window!r}")
    if len(records) < window:
        return None
    losses = np.array([r.loss for r in records], dtype=np.float64)
    gn = [r.lambda_max_gn for r in records]
    use_gn = any(v is not None for v in gn)
    gn_values = np.array([np.nan if v is None else v for v in gn], dtype=np.float64)

    def quiet(start: int) -> bool:
        if _relative_change(losses[start:start + window]) > rel_tol:
            return False
        if use_gn:
            chunk = gn_values[start:start + window]
            chunk = chunk[np.isfinite(chunk)]
            if chunk.size >= 2 and _relative_change(chunk) > rel_tol:
                return False
        return True

    first = None
    for start in range(len(records) - window, -1, -1):
        if not quiet(start):
            break
        first = start
    return records[first].step if first is not None else None


def min_norm_interpolant(
    first_layer: FirstLayer,
    data: Dataset,
    strict: bool = False,
    interp_tol: float = INTERP_TOL,
) -> InterpolationResult:
    """
    Freezes (w1, b1) and solves min ||(w2, b2)|| among least-squares fits of
    [relu(w1 x + b1), 1] (w2, b2) = y through a complete orthogonal
    factorization.

    Raises:
        NotInterpolating: in strict mode, when the residual RMS exceeds interp_tol.
    """
    w1 = np.asarray(first_layer.w1, dtype=np.float64)
    b1 = np.asarray(first_layer.b1, dtype=np.float64)
    features = np.hstack([relu_net.relu(np.outer(data.xs, w1) + b1), np.ones((data.n, 1))])
    coefs, _, rank, _ = scipy.linalg.lstsq(features, data.ys, lapack_driver="gelsy")
    fitted = features @ coefs
    residual_rms = float(np.sqrt(np.mean((fitted - data.ys) ** 2)))
    if strict and residual_rms > interp_tol:
        raise NotInterpolating(residual_rms, interp_tol)
    params = NetParams(w1, b1, coefs[:-1], coefs[-1])
    return InterpolationResult(params, residual_rms, int(rank))


def ground_truth_loss(data: Dataset) -> float:
    """(1/2n) sum (f0(x_i) - y_i)^2, from the stored noises when available."""
    if data.noises is not None and data.ground_truth is not None:
        return float(0.5 * np.mean(data.noises ** 2))
    truth = data.f0_values()
    return float(0.5 * np.mean((truth - data.ys) ** 2))


def check_optimized(params: NetParams, data: Dataset, mode: OptimizedMode) -> bool:
    """
    vs_ground_truth: L(theta) <= (1/2n) sum (f0(x_i) - y_i)^2.
    vs_sigma: L(theta) <= sigma^2 / 2.

    Raises:
        MissingGroundTruth / MissingSigma.
    """
    value = landscape.loss(params, data)
    if mode is OptimizedMode.VS_GROUND_TRUTH:
        if data.ground_truth is None:
            raise MissingGroundTruth()
        return not_worse(value, ground_truth_loss(data))
    sigma = data.require_sigma()
    return not_worse(value, 0.5 * sigma * sigma)


def interpolates(result: InterpolationResult, interp_tol: float = INTERP_TOL) -> bool:
    return result.residual_rms <= interp_tol


def split_records(records: Sequence[TrainRecord]) -> Tuple[List[int], List[float]]:
    """Steps and lambda_max_full of the records that carry a spectrum."""
    pairs = [(r.step, r.lambda_max_full) for r in records if r.has_spectrum]
    return [s for s, _ in pairs], [v for _, v in pairs]
