# app/config/settings.py
"""
Process-level settings read from the environment.
"""
import os
from dataclasses import dataclass
from typing import Mapping, Optional

from core.exceptions.domain_exceptions import InvalidValue

WORKERS_ENV = "RELU_STABILITY_WORKERS"
CATALOG_URL_ENV = "RELU_STABILITY_CATALOG_URL"


@dataclass(frozen=True)
class Settings:
    workers: int = 1
    catalog_url: Optional[str] = None

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Settings":
        environ = os.environ if environ is None else environ
        raw = environ.get(WORKERS_ENV, "1")
        try:
            workers = int(raw)
        except ValueError:
            raise InvalidValue(WORKERS_ENV, f"must be an integer, got {raw!r}") from None
        if workers < 1:
            raise InvalidValue(WORKERS_ENV, f"must be >= 1, got {workers}")
        return cls(workers=workers, catalog_url=environ.get(CATALOG_URL_ENV) or None)
