"""
Function-space view of a trained network: the data weight g, weighted and
plain first-order total variation, interval selection and the data-only
TV lower bound for interpolants of an equispaced design.
"""
import math
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from core.enum.lower_bound_mode import LowerBoundMode
from core.exceptions.domain_exceptions import (
    InsufficientData,
    InvalidConfig,
    NoInterval,
    NotEquispaced,
)
from core.value_objects.dataset import Dataset
from core.value_objects.empirical_weight import EmpiricalWeight
from core.value_objects.interval_report import IntervalReport
from core.value_objects.piecewise_linear import PiecewiseLinear

EQUISPACED_TOL = 1e-9
GRID_DIVISIONS = 2000


class MiddleInterval(NamedTuple):
    lo: float
    hi: float
    start: int
    end: int


def weight_g(data: Dataset) -> EmpiricalWeight:
    return EmpiricalWeight.from_inputs(data.xs)


def eval_weight(weight: EmpiricalWeight, x):
    return weight.evaluate(x)


def weighted_tv(pwl: PiecewiseLinear, weight: EmpiricalWeight) -> float:
    """sum |dslope_j| g(t_j) over knots strictly inside (min x, max x)."""
    lo, hi = weight.support
    inside = (pwl.positions > lo) & (pwl.positions < hi)
    if not np.any(inside):
        return 0.0
    return float(np.sum(np.abs(pwl.dslopes[inside]) * weight.evaluate(pwl.positions[inside])))


def tv_on_interval(pwl: PiecewiseLinear, lo: float, hi: float) -> float:
    """sum |dslope_j| over knots in the closed interval [lo, hi]."""
    if not lo < hi:
        raise InvalidConfig(f"tv_on_interval needs lo < hi, got [{lo!r}, {hi!r}].")
    return float(np.sum(np.abs(pwl.dslopes[pwl.knots_in(lo, hi)])))


def _grid(lo: float, hi: float, grid_step: float) -> np.ndarray:
    if not grid_step > 0:
        raise InvalidConfig(f"grid_step must be positive, got {grid_step!r}.")
    divisions = max(1, int(math.ceil((hi - lo) / grid_step - 1e-9)))
    return np.linspace(lo, hi, divisions + 1)


def infimum_on(weight: EmpiricalWeight, lo: float, hi: float, grid_step: Optional[float] = None) -> float:
    """
    Infimum of g over [lo, hi]. Besides the grid, every datum inside the
    interval and its one-sided limits are candidates; g is concave between
    consecutive data, so the infimum is attained among them.
    """
    if not lo <= hi:
        raise InvalidConfig(f"infimum_on needs lo <= hi, got [{lo!r}, {hi!r}].")
    step = grid_step if grid_step is not None else max(hi - lo, 1e-12) / GRID_DIVISIONS
    candidates = [weight.evaluate(_grid(lo, hi, step)) if hi > lo else np.array([weight.evaluate(lo)])]
    inside = weight.xs[(weight.xs >= lo) & (weight.xs <= hi)]
    if inside.size:
        candidates.append(weight.evaluate(inside))
        left = inside[inside > lo]
        right = inside[inside < hi]
        if left.size:
            candidates.append(weight.limit(left, "left"))
        if right.size:
            candidates.append(weight.limit(right, "right"))
    return float(min(np.min(c) for c in candidates))


def select_interval(
    weight: EmpiricalWeight,
    c: float,
    x_max: float,
    grid_step: Optional[float] = None,
) -> IntervalReport:
    """
    Longest run of consecutive grid points on [-x_max, x_max] with g >= c.
    Ties go to the run containing the data median.

    Raises:
        NoInterval: when no run of at least two grid points qualifies.
    """
    if not c > 0:
        raise InvalidConfig(f"Interval level c must be positive, got {c!r}.")
    step = grid_step if grid_step is not None else x_max / GRID_DIVISIONS
    grid = _grid(-x_max, x_max, step)
    ok = weight.evaluate(grid) >= c

    runs: List[Tuple[int, int]] = []
    start = None
    for i, flag in enumerate(ok):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(grid) - 1))
    runs = [run for run in runs if run[1] > run[0]]
    if not runs:
        raise NoInterval(c)

    median = float(np.median(weight.xs))
    longest = max(end - begin for begin, end in runs)
    tied = [run for run in runs if run[1] - run[0] == longest]
    chosen = tied[0]
    for begin, end in tied:
        if grid[begin] <= median <= grid[end]:
            chosen = (begin, end)
            break

    lo, hi = float(grid[chosen[0]]), float(grid[chosen[1]])
    n_in = int(np.count_nonzero((weight.xs >= lo) & (weight.xs <= hi)))
    return IntervalReport(lo, hi, infimum_on(weight, lo, hi, step), n_in, float(step))


def g_profile(weight: EmpiricalWeight, lo: float, hi: float, m: int) -> List[Tuple[float, float]]:
    if m < 2:
        raise InvalidConfig(f"g profile needs at least 2 points, got {m!r}.")
    grid = np.linspace(lo, hi, m)
    return list(zip(grid.tolist(), eval_weight(weight, grid).tolist()))


def check_equispaced(data: Dataset) -> float:
    """Returns the common spacing h; raises NotEquispaced otherwise."""
    gaps = np.diff(data.xs)
    if gaps.size == 0:
        raise InsufficientData(data.n, 2)
    h = float(np.mean(gaps))
    deviation = float(np.max(np.abs(gaps - h)) / h)
    if deviation > EQUISPACED_TOL:
        raise NotEquispaced(deviation)
    return h


def middle_interval(data: Dataset) -> MiddleInterval:
    """
    Middle half of the design, 1-based indices ceil(n/4)..floor(3n/4).
    Designs with fewer than six points use every point.
    """
    n = data.n
    if n >= 6:
        start = int(math.ceil(n / 4)) - 1
        end = int(math.floor(3 * n / 4)) - 1
    else:
        start, end = 0, n - 1
    return MiddleInterval(float(data.xs[start]), float(data.xs[end]), start, end)


def interpolant_tv_lower_bound(
    data: Dataset,
    mode: LowerBoundMode = LowerBoundMode.PLAIN_MIDDLE,
    weight: Optional[EmpiricalWeight] = None,
) -> float:
    """
    Data-only lower bound on the middle-half TV of ANY interpolant:
    sum over disjoint triples (stride 3) of |y_{j+2} - 2 y_{j+1} + y_j| / h.
    The weighted mode multiplies by the infimum of g over the middle half.

    Raises:
        InsufficientData: fewer than three points.
        NotEquispaced: uneven design.
    """
    if data.n < 3:
        raise InsufficientData(data.n, 3)
    h = check_equispaced(data)
    middle = middle_interval(data)
    ys = data.ys
    total = 0.0
    j = middle.start
    while j + 2 <= middle.end:
        total += abs(ys[j + 2] - 2.0 * ys[j + 1] + ys[j]) / h
        j += 3
    if mode is LowerBoundMode.WEIGHTED_MIDDLE:
        weight = weight or weight_g(data)
        total *= infimum_on(weight, middle.lo, middle.hi)
    return float(total)
