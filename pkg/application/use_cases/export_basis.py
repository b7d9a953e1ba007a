# application/use_cases/export_basis.py
"""
Use case for the per-neuron basis functions and knot sparsity of stored params.
"""
from typing import Any, Dict, Optional

from application.dtos.experiment_config import ExperimentConfig
from core.services import diagnostics
from core.services.ports.artifact_store_port import ArtifactStore
from core.services.ports.figure_renderer_port import FigureRenderer
from core.value_objects.net_params import NetParams


class ExportBasisUseCase:
    def __init__(self, artifacts: ArtifactStore, renderer: Optional[FigureRenderer] = None):
        self.artifacts = artifacts
        self.renderer = renderer

    def execute(self, config: ExperimentConfig, params_path: str, plot: bool = False) -> Dict[str, Any]:
        """
        Writes basis.csv (one row per grid point: x, then one column per
        neuron) and sparsity.json; returns the sparsity record.
        """
        params = NetParams.from_dict(self.artifacts.read_json(params_path))
        lo = config.basis_lo if config.basis_lo is not None else -config.x_max
        hi = config.basis_hi if config.basis_hi is not None else config.x_max
        grid, matrix = diagnostics.export_basis(params, lo, hi, config.basis_points)

        columns = ["x"] + [f"neuron_{j}" for j in range(params.k)]
        rows = [[float(x)] + matrix[:, i].tolist() for i, x in enumerate(grid)]
        self.artifacts.write_table("basis.csv", columns, rows)

        sparsity = diagnostics.sparsity_metrics(params, config.dslope_tol, config.dataset(), config.lp_norm_p)
        self.artifacts.write_json("sparsity.json", sparsity)
        if plot and self.renderer is not None:
            self.renderer.render_basis("basis.svg", grid, matrix)
        return sparsity
