from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from core.exceptions.domain_exceptions import InvalidConfig


def _frozen_array(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise InvalidConfig(f"NetParams.{name} contains non-finite entries.")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class NetParams:
    """
    Value Object holding the parameters of a width-k two-layer ReLU network
    f(x) = sum_j w2_j * relu(w1_j * x + b1_j) + b2.

    Attributes:
        w1 (np.ndarray): first-layer weights, shape (k,).
        b1 (np.ndarray): first-layer biases, shape (k,).
        w2 (np.ndarray): second-layer weights, shape (k,).
        b2 (float): output bias.

    The flattened order is (w1, b1, w2, b2), dimension 3k + 1.
    Arrays are copied and made read-only on construction.
    """
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: float

    def __post_init__(self):
        w1 = _frozen_array(self.w1, "w1")
        b1 = _frozen_array(self.b1, "b1")
        w2 = _frozen_array(self.w2, "w2")
        if not (w1.size == b1.size == w2.size):
            raise InvalidConfig(
                f"NetParams layers disagree on width: {w1.size}, {b1.size}, {w2.size}."
            )
        if w1.size < 1:
            raise InvalidConfig("NetParams needs k >= 1.")
        b2 = float(self.b2)
        if not np.isfinite(b2):
            raise InvalidConfig("NetParams.b2 is not finite.")
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "b1", b1)
        object.__setattr__(self, "w2", w2)
        object.__setattr__(self, "b2", b2)

    @property
    def k(self) -> int:
        return int(self.w1.size)

    @property
    def dim(self) -> int:
        return 3 * self.k + 1

    def flatten(self) -> np.ndarray:
        return np.concatenate([self.w1, self.b1, self.w2, [self.b2]])

    @classmethod
    def from_vector(cls, theta) -> "NetParams":
        theta = np.asarray(theta, dtype=np.float64).reshape(-1)
        if theta.size < 4 or (theta.size - 1) % 3 != 0:
            raise InvalidConfig(f"Parameter vector of length {theta.size} is not 3k+1.")
        k = (theta.size - 1) // 3
        return cls(theta[:k], theta[k:2 * k], theta[2 * k:3 * k], theta[3 * k])

    def inf_norm(self) -> float:
        """rho = max |theta_i|."""
        return float(np.max(np.abs(self.flatten())))

    def to_dict(self) -> Dict[str, Any]:
        return {"k": self.k, "theta": [float(v) for v in self.flatten()]}

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "NetParams":
        try:
            k = int(payload["k"])
            theta = payload["theta"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidConfig(f"Malformed parameter payload: {exc}") from exc
        params = cls.from_vector(theta)
        if params.k != k:
            raise InvalidConfig(f"Parameter payload declares k={k} but holds k={params.k}.")
        return params
