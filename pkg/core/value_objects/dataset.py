from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.exceptions.domain_exceptions import (
    EmptyInterval,
    InvalidConfig,
    MissingGroundTruth,
    MissingSigma,
)
from core.value_objects.ground_truth import GroundTruth

_DOMAIN_SLACK = 1e-12


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Fixed-design regression sample y_i = f0(x_i) + eps_i.

    Attributes:
        xs (np.ndarray): inputs, sorted ascending and distinct, |x_i| <= x_max.
        ys (np.ndarray): labels.
        x_max (float): domain bound.
        ground_truth (GroundTruth | None): f0 when known.
        sigma (float | None): label noise standard deviation.
        noises (np.ndarray | None): realized eps_i when generated internally.
    """
    xs: np.ndarray
    ys: np.ndarray
    x_max: float
    ground_truth: Optional[GroundTruth] = None
    sigma: Optional[float] = None
    noises: Optional[np.ndarray] = None

    def __post_init__(self):
        xs = _frozen(self.xs)
        ys = _frozen(self.ys)
        x_max = float(self.x_max)
        if xs.size < 1:
            raise InvalidConfig("Dataset needs at least one point.")
        if xs.size != ys.size:
            raise InvalidConfig(f"Dataset has {xs.size} inputs but {ys.size} labels.")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise InvalidConfig("Dataset contains non-finite values.")
        if not x_max > 0:
            raise InvalidConfig(f"x_max must be positive, got {x_max!r}.")
        if xs.size > 1 and not np.all(np.diff(xs) > 0):
            raise InvalidConfig("Dataset inputs must be sorted ascending and distinct.")
        if np.max(np.abs(xs)) > x_max * (1.0 + _DOMAIN_SLACK):
            raise InvalidConfig(f"Dataset inputs exceed x_max={x_max!r}.")
        if self.sigma is not None and not float(self.sigma) >= 0:
            raise InvalidConfig(f"sigma must be non-negative, got {self.sigma!r}.")

        noises = None
        if self.noises is not None:
            noises = _frozen(self.noises)
            if noises.size != xs.size:
                raise InvalidConfig("Noise vector length differs from the number of points.")
            if self.ground_truth is not None and not np.array_equal(
                ys, self.ground_truth(xs) + noises
            ):
                raise InvalidConfig("Labels are not ground truth plus stored noises.")

        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "x_max", x_max)
        object.__setattr__(self, "noises", noises)
        if self.sigma is not None:
            object.__setattr__(self, "sigma", float(self.sigma))

    @property
    def n(self) -> int:
        return int(self.xs.size)

    def f0_values(self) -> np.ndarray:
        if self.ground_truth is None:
            raise MissingGroundTruth()
        return np.asarray(self.ground_truth(self.xs), dtype=np.float64)

    def require_sigma(self) -> float:
        if self.sigma is None:
            raise MissingSigma()
        return self.sigma

    def mask(self, lo: float, hi: float) -> np.ndarray:
        """Points inside the closed interval [lo, hi]; raises EmptyInterval if none."""
        inside = (self.xs >= lo) & (self.xs <= hi)
        if not np.any(inside):
            raise EmptyInterval(lo, hi)
        return inside

    def count_in(self, lo: float, hi: float) -> int:
        return int(np.count_nonzero((self.xs >= lo) & (self.xs <= hi)))
