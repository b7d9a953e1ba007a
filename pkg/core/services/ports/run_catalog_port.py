from abc import ABC, abstractmethod
from typing import List, Optional

from core.entities.run_entry import RunEntry


class RunCatalog(ABC):
    @abstractmethod
    def save(self, entry: RunEntry) -> None:
        """
        Persiste ou substitui a entrada pela run_key.
        """
        pass

    @abstractmethod
    def get_by_key(self, run_key: str) -> Optional[RunEntry]:
        pass

    @abstractmethod
    def list_all(self) -> List[RunEntry]:
        pass
