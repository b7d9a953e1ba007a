# app/interfaces/controllers/experiment_controller.py
"""
Wires adapters for one output directory, dispatches a subcommand to its use
case and turns domain exceptions into process exit codes.
"""
import logging
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence

from app.config.settings import Settings
from app.interfaces.schemas.config_schema import parse_config
from application.dtos.experiment_config import ExperimentConfig
from application.use_cases.build_report import BuildReportUseCase
from application.use_cases.counterexample_study import CounterexampleStudyUseCase
from application.use_cases.eta_sweep import EtaSweepUseCase
from application.use_cases.export_basis import ExportBasisUseCase
from application.use_cases.interpolate import InterpolateUseCase
from application.use_cases.rate_experiment import RateExperimentUseCase
from application.use_cases.train_network import TrainNetworkUseCase
from application.use_cases.verify_params import VerifyParamsUseCase
from core.exceptions.domain_exceptions import CertificateFailure, DomainException, InvalidConfig
from infrastructure.adapters.filesystem_artifact_store import FilesystemArtifactStore
from infrastructure.adapters.matplotlib_figure_renderer import MatplotlibFigureRenderer
from infrastructure.adapters.process_pool_job_runner import ProcessPoolJobRunner
from infrastructure.adapters.run_catalog_sqlalchemy import RunCatalogSqlAlchemyAdapter
from infrastructure.persistence.db import default_catalog_url, make_session_factory

logger = logging.getLogger(__name__)

COMMANDS = ("train", "sweep", "rate", "counterexample", "interpolate", "verify", "basis", "report")


@dataclass(frozen=True)
class CliRequest:
    command: str
    out: str
    config_path: Optional[str] = None
    overrides: Sequence[str] = field(default_factory=tuple)
    plot: bool = False
    workers: Optional[int] = None
    params_path: Optional[str] = None


@dataclass
class _Wiring:
    artifacts: FilesystemArtifactStore
    catalog: RunCatalogSqlAlchemyAdapter
    runner: ProcessPoolJobRunner
    renderer: MatplotlibFigureRenderer


class ExperimentController:
    def __init__(self, settings: Settings):
        self.settings = settings
        self._handlers: Dict[str, Callable[[CliRequest, ExperimentConfig, _Wiring], List[str]]] = {
            "train": self._train,
            "sweep": self._sweep,
            "rate": self._rate,
            "counterexample": self._counterexample,
            "interpolate": self._interpolate,
            "verify": self._verify,
            "basis": self._basis,
            "report": self._report,
        }

    def run(self, request: CliRequest) -> int:
        """Returns 0 on success, otherwise the exit code of the raised error family."""
        try:
            self.dispatch(request)
        except DomainException as exc:
            logger.error("%s failed: %s", request.command, exc)
            return exc.exit_code
        return 0

    def dispatch(self, request: CliRequest) -> None:
        """
        Raises:
            CertificateFailure: after every artifact is written, when a hard
                certificate did not hold.
        """
        if request.command not in self._handlers:
            raise InvalidConfig(f"Unknown command {request.command!r}.")
        config = parse_config(request.config_path, request.overrides)
        with self._wiring(request) as wiring:
            wiring.artifacts.write_json("config.resolved.json", config.to_dict())
            failures = self._handlers[request.command](request, config, wiring)
        if failures:
            raise CertificateFailure(failures)
        logger.info("%s finished, artifacts in %s", request.command, request.out)

    @contextmanager
    def _wiring(self, request: CliRequest) -> Iterator[_Wiring]:
        artifacts = FilesystemArtifactStore(request.out)
        url = self.settings.catalog_url or default_catalog_url(request.out)
        session = make_session_factory(url)()
        try:
            yield _Wiring(
                artifacts=artifacts,
                catalog=RunCatalogSqlAlchemyAdapter(session),
                runner=ProcessPoolJobRunner(request.workers or self.settings.workers),
                renderer=MatplotlibFigureRenderer(request.out),
            )
        finally:
            session.close()

    @staticmethod
    def _params_path(request: CliRequest) -> str:
        if request.params_path is None:
            raise InvalidConfig(f"--params is required for {request.command}.")
        return request.params_path

    def _train(self, request, config, wiring) -> List[str]:
        outcome = TrainNetworkUseCase(wiring.artifacts, wiring.catalog, wiring.renderer).execute(config, request.plot)
        return outcome.report.hard_failures()

    def _sweep(self, request, config, wiring) -> List[str]:
        table = EtaSweepUseCase(wiring.artifacts, wiring.runner, wiring.catalog, wiring.renderer).execute(
            config, request.plot
        )
        return list(table.verdicts["hard_failures"])

    def _rate(self, request, config, wiring) -> List[str]:
        RateExperimentUseCase(wiring.artifacts, wiring.runner, wiring.catalog).execute(config)
        return []

    def _counterexample(self, request, config, wiring) -> List[str]:
        table = CounterexampleStudyUseCase(wiring.artifacts, wiring.runner, wiring.catalog).execute(config)
        return list(table.verdicts["hard_failures"])

    def _interpolate(self, request, config, wiring) -> List[str]:
        return InterpolateUseCase(wiring.artifacts, wiring.catalog).execute(config).report.hard_failures()

    def _verify(self, request, config, wiring) -> List[str]:
        return VerifyParamsUseCase(wiring.artifacts).execute(config, self._params_path(request)).hard_failures()

    def _basis(self, request, config, wiring) -> List[str]:
        ExportBasisUseCase(wiring.artifacts, wiring.renderer).execute(config, self._params_path(request), request.plot)
        return []

    def _report(self, request, config, wiring) -> List[str]:
        BuildReportUseCase(wiring.catalog, wiring.artifacts).execute()
        return []
