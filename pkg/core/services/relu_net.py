"""
Two-layer univariate ReLU network: evaluation, closed-form parameter
derivatives, kink diagnostics and the linear-spline form.

Parameter order everywhere is (w1_1..w1_k, b1_1..b1_k, w2_1..w2_k, b2).
"""
import logging
import math

import numpy as np

from core.enum.init_kind import InitKind
from core.exceptions.domain_exceptions import InvalidConfig, NotTwiceDifferentiable
from core.value_objects.dataset import Dataset
from core.value_objects.init_scheme import InitScheme
from core.value_objects.net_params import NetParams
from core.value_objects.piecewise_linear import PiecewiseLinear

DIFF_TOL = 1e-8
KNOT_MERGE_TOL = 1e-9
DSLOPE_ZERO_TOL = 1e-12
MAX_KNOT_REDRAWS = 50

logger = logging.getLogger(__name__)


def relu(u):
    return np.maximum(u, 0.0)


def pre_activations(params: NetParams, xs) -> np.ndarray:
    """Matrix of w1_j * x_i + b1_j, shape (n, k)."""
    xs = np.asarray(xs, dtype=np.float64).reshape(-1)
    return np.outer(xs, params.w1) + params.b1


def forward(params: NetParams, x: float) -> float:
    pre = params.w1 * x + params.b1
    return float(np.dot(params.w2, relu(pre)) + params.b2)


def forward_batch(params: NetParams, xs) -> np.ndarray:
    return relu(pre_activations(params, xs)) @ params.w2 + params.b2


def param_gradient(params: NetParams, x: float) -> np.ndarray:
    """
    Closed-form gradient of f_theta(x) with respect to theta.
    The ReLU derivative is the strict indicator 1(pre > 0).
    """
    pre = params.w1 * x + params.b1
    active = (pre > 0).astype(np.float64)
    return np.concatenate([x * params.w2 * active, params.w2 * active, relu(pre), [1.0]])


def gradient_matrix(params: NetParams, xs) -> np.ndarray:
    """Rows are param_gradient at each input, shape (n, 3k + 1)."""
    xs = np.asarray(xs, dtype=np.float64).reshape(-1)
    pre = pre_activations(params, xs)
    active = (pre > 0).astype(np.float64)
    scaled = active * params.w2
    return np.hstack([xs[:, None] * scaled, scaled, relu(pre), np.ones((xs.size, 1))])


def _check_twice_differentiable(pre: np.ndarray, diff_tol: float, datum=None) -> None:
    bad = np.flatnonzero(np.abs(pre) <= diff_tol)
    if bad.size:
        j = int(bad[0])
        raise NotTwiceDifferentiable(neuron=j, datum=datum, margin=float(abs(pre[j])))


def param_hessian(params: NetParams, x: float, diff_tol: float = DIFF_TOL) -> np.ndarray:
    """
    Hessian of f_theta(x) in theta. The only nonzeros are
    H[w1_j, w2_j] = x * 1(pre_j > 0) and H[b1_j, w2_j] = 1(pre_j > 0), mirrored.
    """
    k = params.k
    pre = params.w1 * x + params.b1
    _check_twice_differentiable(pre, diff_tol)
    active = (pre > 0).astype(np.float64)
    idx = np.arange(k)
    hess = np.zeros((3 * k + 1, 3 * k + 1))
    hess[idx, 2 * k + idx] = x * active
    hess[k + idx, 2 * k + idx] = active
    hess[2 * k + idx, idx] = x * active
    hess[2 * k + idx, k + idx] = active
    return hess


def hessian_vector_product(params: NetParams, x: float, v, diff_tol: float = DIFF_TOL) -> np.ndarray:
    k = params.k
    v = np.asarray(v, dtype=np.float64)
    pre = params.w1 * x + params.b1
    _check_twice_differentiable(pre, diff_tol)
    active = (pre > 0).astype(np.float64)
    out = np.zeros(3 * k + 1)
    out[:k] = x * active * v[2 * k:3 * k]
    out[k:2 * k] = active * v[2 * k:3 * k]
    out[2 * k:3 * k] = x * active * v[:k] + active * v[k:2 * k]
    return out


def hessian_quadforms(params: NetParams, x: float, vectors, diff_tol: float = DIFF_TOL) -> np.ndarray:
    """v^T H(x) v for every row v of `vectors`, without forming H."""
    k = params.k
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    pre = params.w1 * x + params.b1
    _check_twice_differentiable(pre, diff_tol)
    active = (pre > 0).astype(np.float64)
    v_w1 = vectors[:, :k]
    v_b1 = vectors[:, k:2 * k]
    v_w2 = vectors[:, 2 * k:3 * k]
    return 2.0 * np.sum(active * v_w2 * (x * v_w1 + v_b1), axis=1)


def hessian_operator_norm(params: NetParams, x: float, diff_tol: float = DIFF_TOL) -> float:
    """
    Exact spectral norm of H(x). Each active neuron is a 3x3 block
    [[0, 0, x], [0, 0, 1], [x, 1, 0]] with eigenvalues +-sqrt(x^2 + 1) and 0.
    """
    pre = params.w1 * x + params.b1
    _check_twice_differentiable(pre, diff_tol)
    if not np.any(pre > 0):
        return 0.0
    return math.sqrt(x * x + 1.0)


def extract_knots(
    params: NetParams,
    merge_tol: float = KNOT_MERGE_TOL,
    zero_tol: float = DSLOPE_ZERO_TOL,
) -> PiecewiseLinear:
    """
    Linear-spline form of the network. Neuron j with w1_j != 0 puts a knot at
    -b1_j / w1_j with slope jump w2_j * |w1_j|; knots closer than merge_tol are
    merged by summing jumps and negligible jumps are dropped.
    """
    nonzero = params.w1 != 0
    raw_pos = -params.b1[nonzero] / params.w1[nonzero]
    raw_jump = params.w2[nonzero] * np.abs(params.w1[nonzero])
    order = np.argsort(raw_pos, kind="stable")
    raw_pos = raw_pos[order]
    raw_jump = raw_jump[order]

    positions = []
    dslopes = []
    for t, jump in zip(raw_pos, raw_jump):
        if positions and t - last_t <= merge_tol:
            dslopes[-1] += jump
        else:
            positions.append(float(t))
            dslopes.append(float(jump))
        last_t = t

    kept = [(t, d) for t, d in zip(positions, dslopes) if abs(d) > zero_tol]
    positions = np.array([t for t, _ in kept], dtype=np.float64)
    dslopes = np.array([d for _, d in kept], dtype=np.float64)

    lowest = [positions[0]] if positions.size else []
    if raw_pos.size:
        lowest.append(raw_pos[0])
    base_point = float(min(lowest)) - 1.0 if lowest else 0.0
    pre = params.w1 * base_point + params.b1
    base_slope = float(np.sum(params.w2 * params.w1 * (pre > 0)))
    base_value = forward(params, base_point)
    return PiecewiseLinear(base_point, base_value, base_slope, positions, dslopes)


def differentiability_margin(params: NetParams, data: Dataset) -> float:
    """min over data and neurons of |w1_j x_i + b1_j|."""
    pre = pre_activations(params, data.xs)
    if pre.size == 0:
        return float("inf")
    return float(np.min(np.abs(pre)))


def _draw_knot_offsets(scheme: InitScheme, rng: np.random.Generator, k: int, w1: np.ndarray, neurons: np.ndarray) -> np.ndarray:
    """Fresh first-layer biases for the given neurons, drawn as init_params draws them."""
    if scheme.kind is InitKind.UNIFORM_FANIN:
        return rng.uniform(-1.0, 1.0, neurons.size)
    if scheme.kind is InitKind.UNIFORM_CUSTOM:
        return rng.uniform(-scheme.a_b1, scheme.a_b1, neurons.size)
    span = scheme.knot_range
    knots = -span + 2.0 * span * (neurons + rng.uniform(0.0, 1.0, neurons.size)) / k
    return -w1[neurons] * knots


def init_params(
    k: int,
    scheme: InitScheme = None,
    seed: int = 0,
    avoid=None,
    diff_tol: float = DIFF_TOL,
) -> NetParams:
    """
    Draw a random network. Deterministic in (k, scheme, seed, avoid).

    With `avoid` (the design inputs), any neuron whose pre-activation at one
    of those inputs is within diff_tol of zero gets its knot re-drawn, so the
    network starts twice differentiable on the data.

    Raises:
        InvalidConfig: if k < 1.
        NotTwiceDifferentiable: if MAX_KNOT_REDRAWS rounds leave a knot on a datum.
    """
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidConfig(f"Network width must be a positive integer, got {k!r}.")
    scheme = scheme or InitScheme()
    rng = np.random.Generator(np.random.PCG64(seed))
    out_range = scheme.a_w2 if scheme.a_w2 is not None else 1.0 / math.sqrt(k)

    if scheme.kind is InitKind.UNIFORM_FANIN:
        w1 = rng.uniform(-1.0, 1.0, k)
        b1 = rng.uniform(-1.0, 1.0, k)
    elif scheme.kind is InitKind.UNIFORM_CUSTOM:
        w1 = rng.uniform(-scheme.a_w1, scheme.a_w1, k)
        b1 = rng.uniform(-scheme.a_b1, scheme.a_b1, k)
    else:
        span = scheme.knot_range
        knots = -span + 2.0 * span * (np.arange(k) + rng.uniform(0.0, 1.0, k)) / k
        signs = np.where(rng.uniform(0.0, 1.0, k) < 0.5, -1.0, 1.0)
        w1 = signs * rng.uniform(0.5, 1.0, k)
        b1 = -w1 * knots
    w2 = rng.uniform(-out_range, out_range, k)
    b2 = rng.uniform(-out_range, out_range)

    if avoid is not None:
        xs = np.asarray(avoid, dtype=np.float64).reshape(-1)
        for _ in range(MAX_KNOT_REDRAWS):
            close = np.abs(np.outer(xs, w1) + b1) <= diff_tol
            neurons = np.flatnonzero(np.any(close, axis=0))
            if neurons.size == 0:
                break
            logger.debug("re-drawing %d knots that sit on design points", neurons.size)
            b1[neurons] = _draw_knot_offsets(scheme, rng, k, w1, neurons)
        else:
            pre = np.abs(np.outer(xs, w1) + b1)
            datum, neuron = np.unravel_index(int(np.argmin(pre)), pre.shape)
            if pre[datum, neuron] <= diff_tol:
                raise NotTwiceDifferentiable(int(neuron), int(datum), float(pre[datum, neuron]))
    return NetParams(w1, b1, w2, b2)
