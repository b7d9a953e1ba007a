"""Knot sparsity statistics and the per-neuron basis functions of a network."""
from typing import Any, Dict, Optional, Tuple

import numpy as np

from core.exceptions.domain_exceptions import InvalidConfig
from core.services import relu_net
from core.value_objects.dataset import Dataset
from core.value_objects.net_params import NetParams

QUANTILES = (0.1, 0.25, 0.5, 0.75, 0.9)


def sparsity_metrics(
    params: NetParams,
    dslope_tol: float = relu_net.DSLOPE_ZERO_TOL,
    data: Optional[Dataset] = None,
    lp_norm_p: float = 0.5,
) -> Dict[str, Any]:
    """
    Effective knots are those with |dslope| > dslope_tol. With data, the
    in-range statistics only count knots inside [min x, max x].
    """
    if not 0 < lp_norm_p <= 1:
        raise InvalidConfig(f"lp_norm_p must lie in (0, 1], got {lp_norm_p!r}.")
    pwl = relu_net.extract_knots(params)
    keep = np.abs(pwl.dslopes) > dslope_tol
    positions, dslopes = pwl.positions[keep], pwl.dslopes[keep]
    in_range = np.ones(positions.size, dtype=bool)
    min_distance = None
    if data is not None:
        in_range = (positions >= data.xs[0]) & (positions <= data.xs[-1])
        if positions.size:
            min_distance = float(np.min(np.abs(positions[:, None] - data.xs[None, :])))
    inner = np.abs(dslopes[in_range])
    quantiles = {f"q{int(q * 100)}": None for q in QUANTILES}
    if positions[in_range].size:
        values = np.quantile(positions[in_range], QUANTILES)
        quantiles = {f"q{int(q * 100)}": float(v) for q, v in zip(QUANTILES, values)}
    return {
        "knot_count_total": int(positions.size),
        "knot_count_in_range": int(np.count_nonzero(in_range)),
        "l1": float(np.sum(inner)),
        "l1_total": float(np.sum(np.abs(dslopes))),
        "lp": float(np.sum(inner ** lp_norm_p) ** (1.0 / lp_norm_p)) if inner.size else 0.0,
        "lp_norm_p": lp_norm_p,
        "knot_quantiles": quantiles,
        "min_knot_datum_distance": min_distance,
    }


def export_basis(params: NetParams, grid_lo: float, grid_hi: float, m_points: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Row j samples w2_j * relu(w1_j x + b1_j) on a uniform grid of m_points.
    Rows plus b2 add up to the network output.
    """
    if m_points < 2:
        raise InvalidConfig(f"basis export needs m_points >= 2, got {m_points!r}.")
    if not grid_lo < grid_hi:
        raise InvalidConfig(f"basis grid needs lo < hi, got [{grid_lo!r}, {grid_hi!r}].")
    grid = np.linspace(grid_lo, grid_hi, m_points)
    matrix = (relu_net.relu(relu_net.pre_activations(params, grid)) * params.w2).T
    return grid, matrix
