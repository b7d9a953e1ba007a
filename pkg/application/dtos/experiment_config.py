# application/dtos/experiment_config.py
"""
Resolved configuration of one CLI invocation, shared by every use case.
"""
import dataclasses
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from core.enum.design import Design
from core.enum.eta_schedule import EtaSchedule
from core.enum.init_kind import InitKind
from core.enum.spectrum_method import SpectrumMethod
from core.exceptions.domain_exceptions import InvalidConfig
from core.services.datasets import build_dataset
from core.value_objects.dataset import Dataset
from core.value_objects.init_scheme import InitScheme
from core.value_objects.train_config import TrainConfig


@dataclass(frozen=True)
class ExperimentConfig:
    # data
    design: Design = Design.HAT
    n: int = 30
    sigma: float = 0.5
    x_max: float = 0.5
    data_seed: Optional[int] = None
    data_path: Optional[str] = None
    # network
    k: int = 100
    k_grid: Tuple[int, ...] = ()
    init_scheme: InitKind = InitKind.UNIFORM_FANIN
    init_a_w1: float = 1.0
    init_a_b1: float = 1.0
    init_a_w2: Optional[float] = None
    knot_range: Optional[float] = None
    # train
    eta: float = 0.4
    max_steps: int = 200000
    log_every: int = 100
    seed: int = 0
    stop_grad_norm: float = 0.0
    steady_window: int = 10
    steady_rel_tol: float = 1e-2
    eos_eps: float = 0.25
    # spectrum
    spectrum_method: SpectrumMethod = SpectrumMethod.AUTO
    spectrum_every: int = 1
    diff_tol: float = 1e-8
    certificate_samples: int = 1000
    # bounds
    delta: float = 0.05
    # sweep
    reps: int = 5
    eta_grid: Tuple[float, ...] = (0.4, 0.2, 0.1, 0.05, 0.01)
    # rate
    n_grid: Tuple[int, ...] = (64, 128, 256, 512, 1024)
    eta_schedule: EtaSchedule = EtaSchedule.CONSTANT
    eta_exponent: float = 0.0
    gap_test_m: int = 10000
    # counterexample
    counterexample_n_grid: Tuple[int, ...] = (20, 40, 80, 160)
    k_factor: int = 2
    interp_tol: float = 1e-8
    interp_init: InitKind = InitKind.STRATIFIED_KNOTS
    # interval
    interval_lo: Optional[float] = None
    interval_hi: Optional[float] = None
    interval_c: float = 1.0 / 4320.0
    # basis
    basis_points: int = 200
    basis_lo: Optional[float] = None
    basis_hi: Optional[float] = None
    lp_norm_p: float = 0.5
    dslope_tol: float = 1e-12

    def __post_init__(self):
        for name in ("eta_grid", "n_grid", "counterexample_n_grid"):
            values = tuple(getattr(self, name))
            if not values:
                raise InvalidConfig(f"{name} must not be empty.")
            object.__setattr__(self, name, values)
        object.__setattr__(self, "k_grid", tuple(self.k_grid))
        if any(k < 1 for k in self.k_grid):
            raise InvalidConfig(f"k_grid entries must be >= 1, got {self.k_grid!r}.")
        if self.reps < 1:
            raise InvalidConfig(f"reps must be >= 1, got {self.reps!r}.")
        if (self.interval_lo is None) != (self.interval_hi is None):
            raise InvalidConfig("interval_lo and interval_hi must be given together.")

    @property
    def resolved_data_seed(self) -> int:
        return self.seed if self.data_seed is None else self.data_seed

    @property
    def explicit_interval(self) -> Optional[Tuple[float, float]]:
        if self.interval_lo is None:
            return None
        return (self.interval_lo, self.interval_hi)

    def init(self, kind: Optional[InitKind] = None) -> InitScheme:
        return InitScheme(
            kind=kind or self.init_scheme,
            a_w1=self.init_a_w1,
            a_b1=self.init_a_b1,
            a_w2=self.init_a_w2,
            knot_range=self.knot_range if self.knot_range is not None else self.x_max,
        )

    def train_config(self, eta: Optional[float] = None, seed: Optional[int] = None, k: Optional[int] = None) -> TrainConfig:
        return TrainConfig(
            k=self.k if k is None else k,
            eta=self.eta if eta is None else eta,
            max_steps=self.max_steps,
            log_every=self.log_every,
            seed=self.seed if seed is None else seed,
            init=self.init(),
            stop_grad_norm=self.stop_grad_norm,
            steady_window=self.steady_window,
            steady_rel_tol=self.steady_rel_tol,
            diff_tol=self.diff_tol,
            spectrum_method=self.spectrum_method,
            spectrum_every=self.spectrum_every,
            eos_eps=self.eos_eps,
        )

    def dataset(self, n: Optional[int] = None, seed: Optional[int] = None, design: Optional[Design] = None) -> Dataset:
        return build_dataset(
            design or self.design,
            self.n if n is None else n,
            self.sigma,
            self.resolved_data_seed if seed is None else seed,
            self.x_max,
            self.data_path,
        )

    def to_dict(self) -> Dict[str, Any]:
        payload = {}
        for item in dataclasses.fields(self):
            value = getattr(self, item.name)
            if isinstance(value, tuple):
                value = list(value)
            elif isinstance(value, Enum):
                value = value.value
            payload[item.name] = value
        payload["resolved_data_seed"] = self.resolved_data_seed
        return payload
