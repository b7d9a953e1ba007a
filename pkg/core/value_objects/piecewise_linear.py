from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np

from core.exceptions.domain_exceptions import InvalidConfig

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True, eq=False)
class PiecewiseLinear:
    """
    Canonical linear-spline form of a network.

    f(x) = base_value + base_slope * (x - base_point) + sum_j dslope_j * relu(x - t_j)

    Attributes:
        base_point (float): reference point left of every knot.
        base_value (float): f(base_point).
        base_slope (float): slope of f left of the first knot.
        positions (np.ndarray): knot locations t_j, strictly increasing.
        dslopes (np.ndarray): slope jump at each knot, nonzero.
    """
    base_point: float
    base_value: float
    base_slope: float
    positions: np.ndarray
    dslopes: np.ndarray

    def __post_init__(self):
        positions = np.array(self.positions, dtype=np.float64).reshape(-1)
        dslopes = np.array(self.dslopes, dtype=np.float64).reshape(-1)
        if positions.size != dslopes.size:
            raise InvalidConfig("Knot positions and slope jumps differ in length.")
        if positions.size > 1 and not np.all(np.diff(positions) > 0):
            raise InvalidConfig("Knot positions must be strictly increasing.")
        positions.setflags(write=False)
        dslopes.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "dslopes", dslopes)
        object.__setattr__(self, "base_point", float(self.base_point))
        object.__setattr__(self, "base_value", float(self.base_value))
        object.__setattr__(self, "base_slope", float(self.base_slope))

    @property
    def knots(self) -> List[Tuple[float, float]]:
        return list(zip(self.positions.tolist(), self.dslopes.tolist()))

    @property
    def knot_count(self) -> int:
        return int(self.positions.size)

    def evaluate(self, x: ArrayLike) -> ArrayLike:
        xs = np.asarray(x, dtype=np.float64)
        flat = xs.reshape(-1)
        hinge = np.maximum(flat[:, None] - self.positions[None, :], 0.0)
        values = self.base_value + self.base_slope * (flat - self.base_point) + hinge @ self.dslopes
        if xs.ndim == 0:
            return float(values[0])
        return values.reshape(xs.shape)

    def knots_in(self, lo: float, hi: float) -> np.ndarray:
        """Boolean mask of knots inside the closed interval [lo, hi]."""
        return (self.positions >= lo) & (self.positions <= hi)
