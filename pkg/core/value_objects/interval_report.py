from dataclasses import dataclass, asdict
from typing import Any, Dict, Optional

from core.exceptions.domain_exceptions import InvalidConfig


@dataclass(frozen=True)
class IntervalReport:
    """
    Interval I on which the weight g stays above a level.

    Attributes:
        lo (float), hi (float): endpoints of I.
        c_inf (float): infimum of g over I.
        n_in (int): number of data points in I (n_I).
        grid_step (float | None): resolution used to search for I; None for
            an interval given explicitly.
    """
    lo: float
    hi: float
    c_inf: float
    n_in: int
    grid_step: Optional[float] = None

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidConfig(f"Interval needs lo < hi, got [{self.lo!r}, {self.hi!r}].")
        if self.c_inf < 0 or self.n_in < 0:
            raise InvalidConfig("Interval report holds a negative infimum or count.")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
