from abc import ABC, abstractmethod
from typing import Any, Dict, Sequence

from core.value_objects.train_record import TrainRecord


class ArtifactStore(ABC):
    """Destination of the CSV/JSON artifacts of one output directory."""

    @property
    @abstractmethod
    def location(self) -> str:
        pass

    @abstractmethod
    def write_records(self, name: str, records: Sequence[TrainRecord]) -> str:
        """
        Writes the training records as CSV with the fixed record columns.
        Returns the path written.
        """
        pass

    @abstractmethod
    def write_table(self, name: str, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
        pass

    @abstractmethod
    def write_json(self, name: str, payload: Dict[str, Any]) -> str:
        pass

    @abstractmethod
    def read_json(self, path: str) -> Dict[str, Any]:
        """
        Reads a JSON document; raises MissingFile when absent.
        """
        pass
