from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from core.exceptions.domain_exceptions import InsufficientData

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True, eq=False)
class EmpiricalWeight:
    """
    Weight function g(x) = min{g-(x), g+(x)} of the empirical input law, with

        g-(x) = P(X<x)^2 * E[x - X | X<x] * sqrt(1 + E[X | X<x]^2)
        g+(x) = P(X>x)^2 * E[X - x | X>x] * sqrt(1 + E[X | X>x]^2)

    Conditional means come from prefix sums, so evaluation is exact and
    O(log n) per point. Strict inequalities are used as written, hence g is
    concave between consecutive data points and may jump at them.
    """
    xs: np.ndarray
    prefix: np.ndarray

    @classmethod
    def from_inputs(cls, xs) -> "EmpiricalWeight":
        xs = np.sort(np.asarray(xs, dtype=np.float64).reshape(-1))
        if xs.size < 2:
            raise InsufficientData(int(xs.size), 2)
        prefix = np.concatenate([[0.0], np.cumsum(xs)])
        xs.setflags(write=False)
        prefix.setflags(write=False)
        return cls(xs=xs, prefix=prefix)

    @property
    def n(self) -> int:
        return int(self.xs.size)

    @property
    def support(self) -> Tuple[float, float]:
        return float(self.xs[0]), float(self.xs[-1])

    def _from_counts(self, x: np.ndarray, n_lt: np.ndarray, n_gt: np.ndarray) -> np.ndarray:
        n = self.n
        total = self.prefix[-1]
        sum_lt = self.prefix[n_lt]
        sum_gt = total - self.prefix[n - n_gt]
        with np.errstate(divide="ignore", invalid="ignore"):
            mean_lt = np.where(n_lt > 0, sum_lt / np.maximum(n_lt, 1), 0.0)
            mean_gt = np.where(n_gt > 0, sum_gt / np.maximum(n_gt, 1), 0.0)
        p_lt = n_lt / n
        p_gt = n_gt / n
        g_minus = p_lt ** 2 * (x - mean_lt) * np.sqrt(1.0 + mean_lt ** 2)
        g_plus = p_gt ** 2 * (mean_gt - x) * np.sqrt(1.0 + mean_gt ** 2)
        g_minus = np.where(n_lt > 0, g_minus, 0.0)
        g_plus = np.where(n_gt > 0, g_plus, 0.0)
        return np.minimum(g_minus, g_plus)

    def evaluate(self, x: ArrayLike) -> ArrayLike:
        arr = np.asarray(x, dtype=np.float64)
        flat = arr.reshape(-1)
        n_lt = np.searchsorted(self.xs, flat, side="left")
        n_gt = self.n - np.searchsorted(self.xs, flat, side="right")
        values = self._from_counts(flat, n_lt, n_gt)
        if arr.ndim == 0:
            return float(values[0])
        return values.reshape(arr.shape)

    def limit(self, x: ArrayLike, side: str) -> ArrayLike:
        """One-sided limit of g at x; side is "left" or "right"."""
        if side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {side!r}")
        arr = np.asarray(x, dtype=np.float64)
        flat = arr.reshape(-1)
        if side == "left":
            # approaching from below: X < y counts points < x, X > y counts points >= x
            n_lt = np.searchsorted(self.xs, flat, side="left")
            n_gt = self.n - n_lt
        else:
            n_le = np.searchsorted(self.xs, flat, side="right")
            n_lt = n_le
            n_gt = self.n - n_le
        values = self._from_counts(flat, n_lt, n_gt)
        if arr.ndim == 0:
            return float(values[0])
        return values.reshape(arr.shape)
