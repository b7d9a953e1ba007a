from dataclasses import dataclass, field

from core.enum.spectrum_method import SpectrumMethod
from core.exceptions.domain_exceptions import InvalidConfig
from core.value_objects.init_scheme import InitScheme


@dataclass(frozen=True)
class TrainConfig:
    """
    Full-batch gradient descent settings, theta_{t+1} = theta_t - eta * grad L(theta_t).

    Attributes:
        k (int): hidden width.
        eta (float): step size.
        max_steps (int): step budget; 0 returns the initialization.
        log_every (int): record cadence in steps.
        seed (int): initialization seed.
        init (InitScheme): initialization law.
        stop_grad_norm (float): stop once ||grad L|| < stop_grad_norm (0 disables).
        steady_window (int): window, in records, for steady-state detection.
        steady_rel_tol (float): relative change tolerated inside a steady window.
        diff_tol (float): pre-activation magnitude below which a point counts as a kink.
        spectrum_method (SpectrumMethod): eigensolver choice.
        spectrum_every (int): compute the spectrum on every n-th record.
        eos_eps (float): epsilon of the below-edge-of-stability threshold 2e^eps/eta.
    """
    k: int = 100
    eta: float = 0.4
    max_steps: int = 200000
    log_every: int = 100
    seed: int = 0
    init: InitScheme = field(default_factory=InitScheme)
    stop_grad_norm: float = 0.0
    steady_window: int = 10
    steady_rel_tol: float = 1e-2
    diff_tol: float = 1e-8
    spectrum_method: SpectrumMethod = SpectrumMethod.AUTO
    spectrum_every: int = 1
    eos_eps: float = 0.25

    def __post_init__(self):
        if self.k < 1:
            raise InvalidConfig(f"k must be >= 1, got {self.k!r}.")
        if not self.eta > 0:
            raise InvalidConfig(f"eta must be positive, got {self.eta!r}.")
        if self.max_steps < 0:
            raise InvalidConfig(f"max_steps must be >= 0, got {self.max_steps!r}.")
        if self.log_every < 1:
            raise InvalidConfig(f"log_every must be >= 1, got {self.log_every!r}.")
        if self.max_steps > 0 and self.log_every > self.max_steps:
            raise InvalidConfig("log_every must not exceed max_steps.")
        if self.stop_grad_norm < 0:
            raise InvalidConfig("stop_grad_norm must be >= 0.")
        if self.steady_window < 2:
            raise InvalidConfig("steady_window must be >= 2.")
        if not (self.steady_rel_tol > 0 and self.diff_tol > 0):
            raise InvalidConfig("Tolerances must be positive.")
        if self.spectrum_every < 1:
            raise InvalidConfig("spectrum_every must be >= 1.")
        if self.eos_eps < 0:
            raise InvalidConfig("eos_eps must be >= 0.")
        if not isinstance(self.spectrum_method, SpectrumMethod):
            object.__setattr__(self, "spectrum_method", SpectrumMethod(self.spectrum_method))
