from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from core.value_objects.net_params import NetParams

RECORD_COLUMNS: Tuple[str, ...] = (
    "step",
    "loss",
    "mse",
    "grad_norm",
    "lambda_max_full",
    "lambda_max_gn",
    "weighted_tv",
    "tv_plain",
    "knot_count",
    "diff_margin",
)


@dataclass(frozen=True)
class TrainRecord:
    """
    Metrics of one logged gradient-descent iterate. Spectrum fields are None
    when the spectrum was not due or the iterate sits on a kink.
    """
    step: int
    loss: float
    grad_norm: float
    weighted_tv: float
    tv_plain: float
    knot_count: int
    diff_margin: float
    mse: Optional[float] = None
    lambda_max_full: Optional[float] = None
    lambda_max_gn: Optional[float] = None
    twice_differentiable: bool = True

    @property
    def has_spectrum(self) -> bool:
        return self.lambda_max_full is not None

    def as_row(self) -> Tuple[Any, ...]:
        return tuple(getattr(self, name) for name in RECORD_COLUMNS)

    def to_dict(self) -> Dict[str, Any]:
        payload = {name: getattr(self, name) for name in RECORD_COLUMNS}
        payload["twice_differentiable"] = self.twice_differentiable
        return payload


@dataclass(frozen=True, eq=False)
class RunSummary:
    """
    Final verdicts of a training run.

    Attributes:
        config (dict): echo of the resolved settings.
        params (NetParams): final parameters.
        final_record (TrainRecord): metrics at the last iterate.
        param_inf_norm (float): rho = ||theta||_inf.
        stable (bool | None): lambda_max_full <= 2/eta at the last iterate.
        beos_step (int | None): first logged step after which the run stays
            below 2e^eps/eta.
        steady_step (int | None): first logged step of the steady state.
        optimized (bool | None): loss <= loss of f0 on the same labels.
        optimized_vs_sigma (bool | None): loss <= sigma^2 / 2.
        ground_truth_loss (float | None): loss of f0 on the labels.
        certificates (dict | None): certificate bundle of the final iterate.
    """
    config: Dict[str, Any]
    params: NetParams
    final_record: TrainRecord
    param_inf_norm: float
    stable: Optional[bool]
    beos_step: Optional[int]
    steady_step: Optional[int]
    optimized: Optional[bool]
    optimized_vs_sigma: Optional[bool]
    ground_truth_loss: Optional[float]
    certificates: Optional[Dict[str, Any]] = field(default=None)
