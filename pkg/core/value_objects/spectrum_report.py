from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from core.enum.spectrum_method import SpectrumMethod


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    """
    Top of the loss-Hessian spectrum and its Gauss-Newton / residual split.

    Attributes:
        lambda_max_full (float): largest eigenvalue of the full Hessian.
        lambda_max_gn (float): largest eigenvalue of the Gauss-Newton term.
        residual_quadform (float): v^T R v at the Gauss-Newton top eigenvector v.
        top_eigvec (np.ndarray): unit top eigenvector of the full Hessian.
        gn_eigvec (np.ndarray): unit top eigenvector of the Gauss-Newton term.
        method (SpectrumMethod): dense or power.
        diff_margin (float): min |w1_j x_i + b1_j| over data and neurons.
    """
    lambda_max_full: float
    lambda_max_gn: float
    residual_quadform: float
    top_eigvec: np.ndarray
    gn_eigvec: np.ndarray
    method: SpectrumMethod
    diff_margin: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lambda_max_full": self.lambda_max_full,
            "lambda_max_gn": self.lambda_max_gn,
            "residual_quadform": self.residual_quadform,
            "method": self.method.value,
        }
