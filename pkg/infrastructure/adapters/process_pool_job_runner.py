import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Callable, List, Sequence

from core.exceptions.domain_exceptions import InvalidConfig
from core.services.ports.job_runner_port import JobRunner

logger = logging.getLogger(__name__)


class ProcessPoolJobRunner(JobRunner):
    """Bounded process pool; a single worker runs the jobs in-process."""

    def __init__(self, workers: int = 1):
        if workers < 1:
            raise InvalidConfig(f"workers must be >= 1, got {workers!r}.")
        self.workers = workers

    def map(self, fn: Callable, items: Sequence) -> List:
        items = list(items)
        if self.workers == 1 or len(items) <= 1:
            return [fn(item) for item in items]

        results: List = [None] * len(items)
        with ProcessPoolExecutor(max_workers=min(self.workers, len(items))) as executor:
            futures = {executor.submit(fn, item): index for index, item in enumerate(items)}
            for done, future in enumerate(as_completed(futures), start=1):
                results[futures[future]] = future.result()
                logger.info("job %d/%d finished", done, len(items))
        return results
