from typing import Dict, List, Optional

import pytest

from application.dtos.experiment_config import ExperimentConfig
from core.entities.run_entry import RunEntry
from core.services.datasets import gen_hat_dataset
from core.services.ports.job_runner_port import JobRunner
from core.services.ports.run_catalog_port import RunCatalog
from core.value_objects.net_params import NetParams
from infrastructure.adapters.filesystem_artifact_store import FilesystemArtifactStore


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long acceptance experiments (deselect with -m 'not slow')")


class InMemoryRunCatalog(RunCatalog):
    def __init__(self):
        self._store: Dict[str, RunEntry] = {}

    def save(self, entry: RunEntry) -> None:
        self._store[entry.run_key] = entry

    def get_by_key(self, run_key: str) -> Optional[RunEntry]:
        return self._store.get(run_key)

    def list_all(self) -> List[RunEntry]:
        return [self._store[key] for key in sorted(self._store)]


class SerialJobRunner(JobRunner):
    def map(self, fn, items):
        return [fn(item) for item in items]


@pytest.fixture
def catalog():
    return InMemoryRunCatalog()


@pytest.fixture
def runner():
    return SerialJobRunner()


@pytest.fixture
def hat_data():
    return gen_hat_dataset(8, 0.5, seed=3)


@pytest.fixture
def noiseless_hat():
    return gen_hat_dataset(8, 0.0, seed=0)


@pytest.fixture
def hat_params():
    # f(x) = 1 - 2|x|, the hat function itself
    return NetParams([1.0, -1.0], [0.0, 0.0], [-2.0, -2.0], 1.0)


@pytest.fixture
def small_params():
    return NetParams([1.0, -0.5, 2.0], [0.2, 0.1, -0.3], [0.7, -1.2, 0.4], 0.1)


@pytest.fixture
def tiny_config():
    return ExperimentConfig(
        n=8,
        k=6,
        eta=0.1,
        max_steps=40,
        log_every=10,
        seed=1,
        steady_window=2,
        reps=2,
        eta_grid=(0.2, 0.1),
        n_grid=(8, 12, 16, 20),
        counterexample_n_grid=(6, 9),
        certificate_samples=50,
        basis_points=20,
        gap_test_m=200,
    )


@pytest.fixture
def artifacts(tmp_path):
    return FilesystemArtifactStore(str(tmp_path / "out"))
