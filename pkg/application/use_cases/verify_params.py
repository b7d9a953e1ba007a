# application/use_cases/verify_params.py
"""
Use case for certifying a stored parameter vector against the configured data.
"""
from application.dtos.experiment_config import ExperimentConfig
from core.services import certificates
from core.services.ports.artifact_store_port import ArtifactStore
from core.value_objects.certificate_report import CertificateReport
from core.value_objects.net_params import NetParams


class VerifyParamsUseCase:
    def __init__(self, artifacts: ArtifactStore):
        self.artifacts = artifacts

    def execute(self, config: ExperimentConfig, params_path: str) -> CertificateReport:
        """
        Args:
            params_path (str): a params.json written by train or interpolate.

        Raises:
            MissingFile: params_path does not exist.
            NotTwiceDifferentiable: a datum sits on a kink of the network.
        """
        params = NetParams.from_dict(self.artifacts.read_json(params_path))
        data = config.dataset()
        report = certificates.verify_bounds(
            params,
            data,
            config.eta,
            config.delta,
            interval=config.explicit_interval,
            method=config.spectrum_method,
            diff_tol=config.diff_tol,
            samples=config.certificate_samples,
            seed=config.seed,
            interp_tol=config.interp_tol,
        )
        self.artifacts.write_json("certificates.json", report.to_dict())
        return report
