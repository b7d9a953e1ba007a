"""
Bundles every checked inequality on one parameter vector into a
CertificateReport. Hard entries are deterministic statements; the others
are high-probability bounds whose failure is reported, not raised.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.enum.lower_bound_mode import LowerBoundMode
from core.enum.optimized_mode import OptimizedMode
from core.enum.spectrum_method import SpectrumMethod
from core.exceptions.domain_exceptions import InsufficientData, NotEquispaced
from core.services import bounds, funcspace, landscape, relu_net
from core.services.metrics import mse as mse_of, optimized_over_interval
from core.services.trainer import INTERP_TOL, check_optimized
from core.value_objects.certificate_report import (
    CertificateEntry,
    CertificateReport,
    CheckpointCertificate,
)
from core.value_objects.curvature import Curvature
from core.value_objects.dataset import Dataset
from core.value_objects.net_params import NetParams
from core.value_objects.train_record import TrainRecord

logger = logging.getLogger(__name__)

HESSIAN_NORM_SLACK = 1e-9
DEFAULT_SAMPLES = 1000

STABILITY = "stability"
FLATNESS_TV = "flatness_tv"
FLATNESS_TV_ETA = "flatness_tv_eta"
NOISY_TV = "noisy_tv"
HIGH_PROBABILITY_TV = "high_probability_tv"
GAUSS_NEWTON_TV = "gauss_newton_tv"
HESSIAN_NORM_SAMPLED = "hessian_norm_sampled"
HESSIAN_NORM_EXACT = "hessian_norm_exact"
INTERPOLANT_LOWER_BOUND = "interpolant_lower_bound"


def checkpoint_certificates(records: Sequence[TrainRecord], x_max: float) -> Tuple[CheckpointCertificate, ...]:
    """Flatness-to-TV and Gauss-Newton slacks at every record carrying a spectrum."""
    out = []
    for record in records:
        if not record.has_spectrum:
            continue
        bound = bounds.stability_tv_bound(Curvature.from_lambda(record.lambda_max_full), record.loss, x_max)
        out.append(
            CheckpointCertificate(
                step=record.step,
                flatness_tv_slack=bound - record.weighted_tv,
                gauss_newton_slack=record.lambda_max_gn - (1.0 + 2.0 * record.weighted_tv),
            )
        )
    return tuple(out)


def sampled_hessian_norm(params: NetParams, data: Dataset, samples: int, seed: int) -> float:
    """max |v^T Hess f(x_i) v| over random unit vectors v and every datum."""
    rng = np.random.Generator(np.random.PCG64(seed))
    vectors = rng.standard_normal((samples, params.dim))
    vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
    worst = 0.0
    for x in data.xs:
        worst = max(worst, float(np.max(np.abs(relu_net.hessian_quadforms(params, float(x), vectors)))))
    return worst


def exact_hessian_norm(params: NetParams, data: Dataset) -> float:
    return max(relu_net.hessian_operator_norm(params, float(x)) for x in data.xs)


def _interpolant_entry(params: NetParams, data: Dataset, interp_tol: float) -> Optional[CertificateEntry]:
    fitted = relu_net.forward_batch(params, data.xs)
    if float(np.sqrt(np.mean((fitted - data.ys) ** 2))) > interp_tol:
        return None
    try:
        lower = funcspace.interpolant_tv_lower_bound(data, LowerBoundMode.PLAIN_MIDDLE)
    except (InsufficientData, NotEquispaced):
        return None
    middle = funcspace.middle_interval(data)
    if not middle.lo < middle.hi:
        return None
    tv_middle = funcspace.tv_on_interval(relu_net.extract_knots(params), middle.lo, middle.hi)
    return CertificateEntry(INTERPOLANT_LOWER_BOUND, lower, tv_middle, hard=True)


def verify_bounds(
    params: NetParams,
    data: Dataset,
    eta: float,
    delta: float = 0.05,
    records: Optional[Sequence[TrainRecord]] = None,
    interval: Optional[Tuple[float, float]] = None,
    method: SpectrumMethod = SpectrumMethod.AUTO,
    diff_tol: float = relu_net.DIFF_TOL,
    eos_eps: float = 0.25,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    interp_tol: float = INTERP_TOL,
) -> CertificateReport:
    """
    Evaluates every inequality at params. Needs a twice-differentiable point.

    Args:
        records: training records; adds per-checkpoint slacks and the
            below-edge-of-stability step.
        interval: [lo, hi] for the optimized-over-interval check.

    Raises:
        NotTwiceDifferentiable: a datum sits on a kink of params.
    """
    spectrum = landscape.spectrum_report(params, data, method, diff_tol)
    lam = spectrum.lambda_max_full
    loss_value = landscape.loss(params, data)
    weight = funcspace.weight_g(data)
    wtv = funcspace.weighted_tv(relu_net.extract_knots(params), weight)
    curvature = Curvature.from_lambda(lam)
    scale = 2.0 * max(data.x_max, 1.0)
    stable = landscape.within_stability(lam, eta)

    entries: List[CertificateEntry] = [
        CertificateEntry(STABILITY, lam, landscape.stability_threshold(eta)),
        CertificateEntry(FLATNESS_TV, wtv, bounds.stability_tv_bound(curvature, loss_value, data.x_max), hard=True),
    ]
    if stable:
        entries.append(
            CertificateEntry(
                FLATNESS_TV_ETA, wtv, bounds.stability_tv_bound(Curvature.from_eta(eta), loss_value, data.x_max)
            )
        )
    if data.sigma is not None:
        if data.ground_truth is not None:
            noisy = bounds.noisy_tv_bound(
                curvature, mse_of(params, data), data.sigma, data.x_max, params.k, data.n, delta
            )
            entries.append(CertificateEntry(NOISY_TV, wtv, noisy))
        hp_bound = bounds.high_probability_tv_bound(curvature, data.sigma, data.x_max, params.k, data.n, delta)
        entries.append(CertificateEntry(HIGH_PROBABILITY_TV, wtv, hp_bound))
    entries += [
        CertificateEntry(GAUSS_NEWTON_TV, 1.0 + 2.0 * wtv, spectrum.lambda_max_gn, hard=True),
        CertificateEntry(
            HESSIAN_NORM_SAMPLED,
            sampled_hessian_norm(params, data, samples, seed),
            scale + HESSIAN_NORM_SLACK,
            hard=True,
        ),
        CertificateEntry(HESSIAN_NORM_EXACT, exact_hessian_norm(params, data), scale, hard=True),
    ]
    interpolant = _interpolant_entry(params, data, interp_tol)
    if interpolant is not None:
        entries.append(interpolant)

    beos_step = None
    checkpoints: Tuple[CheckpointCertificate, ...] = ()
    if records:
        checkpoints = checkpoint_certificates(records, data.x_max)
        beos = landscape.beos_first_index([r.lambda_max_full for r in records], eta, eos_eps)
        beos_step = records[beos].step if beos is not None else None

    optimized_gt = optimized_sigma = optimized_interval = None
    if data.ground_truth is not None:
        optimized_gt = check_optimized(params, data, OptimizedMode.VS_GROUND_TRUTH)
        if interval is not None:
            optimized_interval = optimized_over_interval(params, data, *interval)
    if data.sigma is not None:
        optimized_sigma = check_optimized(params, data, OptimizedMode.VS_SIGMA)

    report = CertificateReport(
        entries=tuple(entries),
        stable=stable,
        beos_step=beos_step,
        optimized_vs_ground_truth=optimized_gt,
        optimized_vs_sigma=optimized_sigma,
        optimized_on_interval=optimized_interval,
        checkpoints=checkpoints,
    )
    for name in report.hard_failures():
        logger.warning("hard certificate %s failed", name)
    return report
