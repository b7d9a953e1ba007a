from abc import ABC, abstractmethod
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


class JobRunner(ABC):
    @abstractmethod
    def map(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        """
        Applies fn to every item and returns the results in input order,
        whatever the completion order. fn and items must be picklable.
        """
        pass
