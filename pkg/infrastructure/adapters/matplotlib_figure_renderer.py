"""
SVG figures rendered with matplotlib's Agg backend. The SVG hash salt is
fixed and the date metadata dropped, so a rerun writes the same bytes.
"""
import logging
from pathlib import Path
from typing import Dict, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from core.services import relu_net  # noqa: E402
from core.services.ports.figure_renderer_port import FigureRenderer  # noqa: E402
from core.value_objects.dataset import Dataset  # noqa: E402
from core.value_objects.net_params import NetParams  # noqa: E402
from core.value_objects.train_record import TrainRecord  # noqa: E402

logger = logging.getLogger(__name__)

HASH_SALT = "relu-stability"
FIT_POINTS = 1001


class MatplotlibFigureRenderer(FigureRenderer):
    def __init__(self, root: str):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _save(self, fig, name: str) -> str:
        path = self.root / name
        with matplotlib.rc_context({"svg.hashsalt": HASH_SALT, "svg.fonttype": "path"}):
            fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        logger.debug("rendered %s", path)
        return str(path)

    def render_fit(self, name: str, data: Dataset, params: NetParams) -> str:
        grid = np.linspace(-data.x_max, data.x_max, FIT_POINTS)
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.scatter(data.xs, data.ys, s=12, color="black", label="data", zorder=3)
        if data.ground_truth is not None:
            ax.plot(grid, data.ground_truth(grid), ls="--", color="grey", label="ground truth")
        ax.plot(grid, relu_net.forward_batch(params, grid), color="tab:blue", label="network")
        pwl = relu_net.extract_knots(params)
        inside = pwl.knots_in(-data.x_max, data.x_max)
        if np.any(inside):
            knots = pwl.positions[inside]
            ax.scatter(knots, pwl.evaluate(knots), marker="x", color="tab:red", s=18, label="knots")
        ax.set_xlabel("x")
        ax.set_ylabel("f(x)")
        ax.legend(fontsize=8)
        fig.tight_layout()
        return self._save(fig, name)

    def render_learning_curves(self, name: str, records: Sequence[TrainRecord], eta: float) -> str:
        steps = [r.step for r in records]
        fig, (ax_loss, ax_sharp) = plt.subplots(1, 2, figsize=(10, 4))
        ax_loss.semilogy(steps, [max(r.loss, 1e-300) for r in records], label="train loss")
        mses = [(r.step, r.mse) for r in records if r.mse is not None]
        if mses:
            ax_loss.semilogy([s for s, _ in mses], [max(v, 1e-300) for _, v in mses], label="MSE")
        ax_loss.set_xlabel("step")
        ax_loss.legend(fontsize=8)

        spectral = [(r.step, r.lambda_max_full, r.lambda_max_gn) for r in records if r.has_spectrum]
        if spectral:
            ax_sharp.plot([s for s, _, _ in spectral], [v for _, v, _ in spectral], label="lambda_max")
            ax_sharp.plot([s for s, _, _ in spectral], [v for _, _, v in spectral], label="lambda_max (GN)")
        ax_sharp.axhline(2.0 / eta, color="black", ls="--", lw=0.8, label="2/eta")
        ax_sharp.set_xlabel("step")
        ax_sharp.legend(fontsize=8)
        fig.tight_layout()
        return self._save(fig, name)

    def render_basis(self, name: str, grid: np.ndarray, matrix: np.ndarray) -> str:
        fig, ax = plt.subplots(figsize=(6, 4))
        for row in matrix:
            if np.any(row != 0):
                ax.plot(grid, row, lw=0.7)
        ax.set_xlabel("x")
        ax.set_ylabel("w2 relu(w1 x + b1)")
        fig.tight_layout()
        return self._save(fig, name)

    def render_sweep(self, name: str, etas: Sequence[float], series: Dict[str, Sequence]) -> str:
        inverse = 1.0 / np.asarray(etas, dtype=np.float64)
        order = np.argsort(inverse)
        fig, ax = plt.subplots(figsize=(6, 4))
        for label, values in series.items():
            points = [(inverse[i], values[i]) for i in order if values[i] is not None]
            if points:
                ax.plot([p for p, _ in points], [v for _, v in points], marker="o", label=label)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("1/eta")
        ax.legend(fontsize=8)
        fig.tight_layout()
        return self._save(fig, name)
