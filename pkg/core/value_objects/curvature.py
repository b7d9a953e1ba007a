from dataclasses import dataclass

from core.exceptions.domain_exceptions import InvalidConfig


@dataclass(frozen=True)
class Curvature:
    """
    Sharpness entering the flatness-to-TV bounds: either a measured
    lambda_max or a step size eta, which stands for lambda = 2/eta.
    """
    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in ("lambda", "eta"):
            raise InvalidConfig(f"Curvature kind must be 'lambda' or 'eta', got {self.kind!r}.")
        if self.kind == "eta" and not self.value > 0:
            raise InvalidConfig(f"eta must be positive, got {self.value!r}.")
        object.__setattr__(self, "value", float(self.value))

    @classmethod
    def from_lambda(cls, lambda_max: float) -> "Curvature":
        return cls("lambda", lambda_max)

    @classmethod
    def from_eta(cls, eta: float) -> "Curvature":
        return cls("eta", eta)

    @property
    def lambda_value(self) -> float:
        if self.kind == "eta":
            return 2.0 / self.value
        return self.value
