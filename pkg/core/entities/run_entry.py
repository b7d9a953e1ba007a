# core/entities/run_entry.py
"""
Catalog entry of one training run, interpolant or study cell.
"""
from datetime import datetime, timezone
from typing import Optional


class RunEntry:
    """
    Entidade de dominio: uma execucao registrada no catalogo.
    A run_key identifica a entrada; salvar uma chave existente a substitui.
    """
    def __init__(
        self,
        run_key: str,
        command: str,
        design: str,
        n: int,
        k: Optional[int] = None,
        eta: Optional[float] = None,
        seed: Optional[int] = None,
        output_dir: Optional[str] = None,
    ):
        self.run_key = run_key
        self.command = command
        self.design = design
        self.n = n
        self.k = k
        self.eta = eta
        self.seed = seed
        self.output_dir = output_dir
        self.final_loss: Optional[float] = None
        self.final_mse: Optional[float] = None
        self.lambda_max_full: Optional[float] = None
        self.weighted_tv: Optional[float] = None
        self.knot_count: Optional[int] = None
        self.stable: Optional[bool] = None
        self.optimized: Optional[bool] = None
        self.certificates_passed: Optional[bool] = None
        self.status: str = "ok"
        self.created_at: datetime = datetime.now(timezone.utc)

    @staticmethod
    def make_key(command: str, design: str, n: int, k=None, eta=None, seed=None) -> str:
        return f"{command}:{design}:n={n}:k={k}:eta={eta!r}:seed={seed}"

    def to_dict(self) -> dict:
        return {
            "run_key": self.run_key,
            "command": self.command,
            "design": self.design,
            "n": self.n,
            "k": self.k,
            "eta": self.eta,
            "seed": self.seed,
            "status": self.status,
            "final_loss": self.final_loss,
            "final_mse": self.final_mse,
            "lambda_max_full": self.lambda_max_full,
            "weighted_tv": self.weighted_tv,
            "knot_count": self.knot_count,
            "stable": self.stable,
            "optimized": self.optimized,
            "certificates_passed": self.certificates_passed,
            "output_dir": self.output_dir,
        }
