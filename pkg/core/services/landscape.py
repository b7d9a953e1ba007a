"""
Square loss L(theta) = 1/(2n) sum (f(x_i) - y_i)^2, its gradient and Hessian.

The Hessian splits into a Gauss-Newton part (1/n) sum grad f grad f^T and a
residual part (1/n) sum r_i * Hess f(x_i). Spectra of both feed the
stability verdicts.
"""
import logging
import math
from typing import Callable, List, NamedTuple, Optional, Sequence

import numpy as np

from core.enum.spectrum_method import SpectrumMethod
from core.exceptions.domain_exceptions import NotTwiceDifferentiable
from core.services import relu_net
from core.services.eigensolver import POWER_MAX_ITERS, POWER_TOL, lambda_max, resolve_method
from core.value_objects.dataset import Dataset
from core.value_objects.net_params import NetParams
from core.value_objects.spectrum_report import SpectrumReport

logger = logging.getLogger(__name__)


class HessianDecomposition(NamedTuple):
    full: np.ndarray
    gn: np.ndarray
    residual: np.ndarray


class HessianOperator(NamedTuple):
    matvec: Callable[[np.ndarray], np.ndarray]
    dim: int
    norm_bound: float


class LinearizedDynamics(NamedTuple):
    norms: List[float]
    gradient_norm: float


def residuals(params: NetParams, data: Dataset) -> np.ndarray:
    return relu_net.forward_batch(params, data.xs) - data.ys


def loss(params: NetParams, data: Dataset) -> float:
    r = residuals(params, data)
    return float(0.5 * np.mean(r * r))


def loss_gradient(params: NetParams, data: Dataset) -> np.ndarray:
    jac = relu_net.gradient_matrix(params, data.xs)
    r = residuals(params, data)
    return jac.T @ r / data.n


def _admissible_pre(params: NetParams, data: Dataset, diff_tol: float) -> np.ndarray:
    pre = relu_net.pre_activations(params, data.xs)
    bad = np.argwhere(np.abs(pre) <= diff_tol)
    if bad.size:
        i, j = (int(v) for v in bad[0])
        raise NotTwiceDifferentiable(neuron=j, datum=i, margin=float(abs(pre[i, j])))
    return pre


def _residual_coefficients(params: NetParams, data: Dataset, pre: np.ndarray):
    """Per-neuron weights of the residual term: sum_i r_i x_i 1_ij / n and sum_i r_i 1_ij / n."""
    active = (pre > 0).astype(np.float64)
    r = residuals(params, data)
    coef_w1 = (r * data.xs) @ active / data.n
    coef_b1 = r @ active / data.n
    return coef_w1, coef_b1


def loss_hessian(params: NetParams, data: Dataset, diff_tol: float = relu_net.DIFF_TOL) -> HessianDecomposition:
    """
    Full loss Hessian with its Gauss-Newton and residual parts; full = gn + residual.

    Raises:
        NotTwiceDifferentiable: with the offending (datum, neuron).
    """
    k = params.k
    pre = _admissible_pre(params, data, diff_tol)
    jac = relu_net.gradient_matrix(params, data.xs)
    gn = jac.T @ jac / data.n

    coef_w1, coef_b1 = _residual_coefficients(params, data, pre)
    idx = np.arange(k)
    residual = np.zeros_like(gn)
    residual[idx, 2 * k + idx] = coef_w1
    residual[2 * k + idx, idx] = coef_w1
    residual[k + idx, 2 * k + idx] = coef_b1
    residual[2 * k + idx, k + idx] = coef_b1
    return HessianDecomposition(gn + residual, gn, residual)


def loss_hessian_operator(
    params: NetParams, data: Dataset, diff_tol: float = relu_net.DIFF_TOL, gauss_newton_only: bool = False
) -> HessianOperator:
    """
    Matrix-free Hessian. The norm bound is
    1 + trace(GN) + 2 max(x_max, 1) * mean |r_i| (the residual part is bounded
    through the per-point Hessian norm bound), which is what the power method
    shifts by.
    """
    k = params.k
    pre = _admissible_pre(params, data, diff_tol)
    jac = relu_net.gradient_matrix(params, data.xs)
    coef_w1, coef_b1 = _residual_coefficients(params, data, pre)
    n = data.n

    def matvec(v: np.ndarray) -> np.ndarray:
        out = jac.T @ (jac @ v) / n
        if not gauss_newton_only:
            out[:k] += coef_w1 * v[2 * k:3 * k]
            out[k:2 * k] += coef_b1 * v[2 * k:3 * k]
            out[2 * k:3 * k] += coef_w1 * v[:k] + coef_b1 * v[k:2 * k]
        return out

    bound = 1.0 + float(np.sum(jac * jac)) / n
    if not gauss_newton_only:
        bound += 2.0 * max(data.x_max, 1.0) * float(np.mean(np.abs(residuals(params, data))))
    return HessianOperator(matvec, 3 * k + 1, bound)


def spectrum_report(
    params: NetParams,
    data: Dataset,
    method: SpectrumMethod = SpectrumMethod.AUTO,
    diff_tol: float = relu_net.DIFF_TOL,
    tol: float = POWER_TOL,
    max_iters: int = POWER_MAX_ITERS,
) -> SpectrumReport:
    """
    Top eigenvalues of the full and Gauss-Newton Hessians, and the residual
    quadratic form at the Gauss-Newton top eigenvector v, so that
    lambda_max_full >= v^T H v = lambda_max_gn + residual_quadform.
    """
    dim = params.dim
    resolved = resolve_method(method, dim)
    if resolved is SpectrumMethod.DENSE:
        parts = loss_hessian(params, data, diff_tol)
        lam_full, vec_full = lambda_max(parts.full, dim, resolved)
        lam_gn, vec_gn = lambda_max(parts.gn, dim, resolved)
        quad = float(vec_gn @ parts.residual @ vec_gn)
    else:
        full_op = loss_hessian_operator(params, data, diff_tol)
        gn_op = loss_hessian_operator(params, data, diff_tol, gauss_newton_only=True)
        lam_full, vec_full = lambda_max(full_op.matvec, dim, resolved, tol, max_iters, full_op.norm_bound)
        lam_gn, vec_gn = lambda_max(gn_op.matvec, dim, resolved, tol, max_iters, gn_op.norm_bound)
        quad = float(vec_gn @ full_op.matvec(vec_gn) - vec_gn @ gn_op.matvec(vec_gn))
    return SpectrumReport(
        lambda_max_full=lam_full,
        lambda_max_gn=lam_gn,
        residual_quadform=quad,
        top_eigvec=vec_full,
        gn_eigvec=vec_gn,
        method=resolved,
        diff_margin=relu_net.differentiability_margin(params, data),
    )


def stability_threshold(eta: float) -> float:
    return 2.0 / eta


def within_stability(lambda_max_value: float, eta: float) -> bool:
    """lambda_max <= 2/eta, boundary included."""
    return lambda_max_value <= stability_threshold(eta)


def is_stable(
    params: NetParams,
    data: Dataset,
    eta: float,
    method: SpectrumMethod = SpectrumMethod.AUTO,
    diff_tol: float = relu_net.DIFF_TOL,
) -> bool:
    report = spectrum_report(params, data, method, diff_tol)
    return within_stability(report.lambda_max_full, eta)


def beos_first_index(trace: Sequence[Optional[float]], eta: float, eps: float) -> Optional[int]:
    """
    Smallest t such that every later entry stays <= 2 e^eps / eta.
    Missing entries (None) are skipped; returns None when no suffix qualifies
    or the qualifying suffix holds no measured value.
    """
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps!r}")
    threshold = 2.0 * math.exp(eps) / eta
    first = None
    for t in range(len(trace) - 1, -1, -1):
        value = trace[t]
        if value is None:
            continue
        if value > threshold:
            break
        first = t
    return first


def linearized_trajectory(
    gradient: np.ndarray,
    hessian_apply: Callable[[np.ndarray], np.ndarray],
    eta: float,
    delta0,
    steps: int,
) -> List[float]:
    """
    Iterates delta_{t+1} = delta_t - eta * (g + H delta_t) and returns
    ||delta_t|| for t = 0..steps.
    """
    delta = np.array(delta0, dtype=np.float64)
    norms = [float(np.linalg.norm(delta))]
    for _ in range(steps):
        delta = delta - eta * (gradient + hessian_apply(delta))
        norms.append(float(np.linalg.norm(delta)))
    return norms


def linearized_dynamics(
    params_star: NetParams,
    data: Dataset,
    eta: float,
    delta0,
    steps: int,
    diff_tol: float = relu_net.DIFF_TOL,
) -> LinearizedDynamics:
    """
    Linearized gradient descent around theta*, started at theta* + delta0.
    The gradient term is kept as in the recurrence; its norm is reported.
    """
    gradient = loss_gradient(params_star, data)
    hessian = loss_hessian(params_star, data, diff_tol).full
    grad_norm = float(np.linalg.norm(gradient))
    logger.info("linearized dynamics around a point with ||grad L|| = %.3e", grad_norm)
    norms = linearized_trajectory(gradient, hessian.__matmul__, eta, delta0, steps)
    return LinearizedDynamics(norms, grad_norm)
