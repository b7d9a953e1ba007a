from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

PASS_SLACK = -1e-8


@dataclass(frozen=True)
class CertificateEntry:
    """
    One checked inequality, always written as value <= bound.

    slack = bound - value; the entry passes when slack >= -1e-8. Hard entries
    are deterministic statements whose failure is an error.
    """
    name: str
    value: float
    bound: float
    hard: bool = False

    @property
    def slack(self) -> float:
        return self.bound - self.value

    @property
    def passed(self) -> bool:
        return self.slack >= PASS_SLACK

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "value": self.value,
            "bound": self.bound,
            "slack": self.slack,
            "passed": self.passed,
            "hard": self.hard,
        }


@dataclass(frozen=True)
class CheckpointCertificate:
    step: int
    flatness_tv_slack: float
    gauss_newton_slack: float

    @property
    def passed(self) -> bool:
        return self.flatness_tv_slack >= PASS_SLACK and self.gauss_newton_slack >= PASS_SLACK


@dataclass(frozen=True)
class CertificateReport:
    """Every inequality checked on one parameter vector, plus verdict flags."""
    entries: Tuple[CertificateEntry, ...]
    stable: bool
    beos_step: Optional[int] = None
    optimized_vs_ground_truth: Optional[bool] = None
    optimized_vs_sigma: Optional[bool] = None
    optimized_on_interval: Optional[bool] = None
    checkpoints: Tuple[CheckpointCertificate, ...] = field(default_factory=tuple)

    def entry(self, name: str) -> CertificateEntry:
        for item in self.entries:
            if item.name == name:
                return item
        raise KeyError(name)

    def names(self) -> List[str]:
        return [item.name for item in self.entries]

    def hard_failures(self) -> List[str]:
        failed = [item.name for item in self.entries if item.hard and not item.passed]
        failed += [f"checkpoint@{c.step}" for c in self.checkpoints if not c.passed]
        return failed

    @property
    def passed(self) -> bool:
        return not self.hard_failures()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "stable": self.stable,
            "beos_step": self.beos_step,
            "optimized_vs_ground_truth": self.optimized_vs_ground_truth,
            "optimized_vs_sigma": self.optimized_vs_sigma,
            "optimized_on_interval": self.optimized_on_interval,
            "entries": [item.to_dict() for item in self.entries],
            "checkpoints": [
                {
                    "step": c.step,
                    "flatness_tv_slack": c.flatness_tv_slack,
                    "gauss_newton_slack": c.gauss_newton_slack,
                    "passed": c.passed,
                }
                for c in self.checkpoints
            ],
        }
