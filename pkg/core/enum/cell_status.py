from enum import Enum

class CellStatus(Enum):
    OK                       = "ok"
    DIVERGED                 = "diverged"
    NOT_INTERPOLATING        = "not_interpolating"
    NOT_TWICE_DIFFERENTIABLE = "not_twice_differentiable"
    NO_CONVERGENCE           = "no_convergence"
    NO_INTERVAL              = "no_interval"
