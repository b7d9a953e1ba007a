from abc import ABC, abstractmethod
from typing import Sequence

import numpy as np

from core.value_objects.dataset import Dataset
from core.value_objects.net_params import NetParams
from core.value_objects.train_record import TrainRecord


class FigureRenderer(ABC):
    """Static figures of a run; every method returns the file written."""

    @abstractmethod
    def render_fit(self, name: str, data: Dataset, params: NetParams) -> str:
        """Data, ground truth (when known) and the learned function."""
        pass

    @abstractmethod
    def render_learning_curves(self, name: str, records: Sequence[TrainRecord], eta: float) -> str:
        pass

    @abstractmethod
    def render_basis(self, name: str, grid: np.ndarray, matrix: np.ndarray) -> str:
        pass

    @abstractmethod
    def render_sweep(self, name: str, etas: Sequence[float], series: dict) -> str:
        """One curve per named median series against 1/eta."""
        pass
