# application/mappers/config_mapper.py
"""
Validated key/value settings -> ExperimentConfig.
"""
from typing import Any, Mapping

from application.dtos.experiment_config import ExperimentConfig
from core.enum.design import Design
from core.enum.eta_schedule import EtaSchedule
from core.enum.init_kind import InitKind
from core.enum.spectrum_method import SpectrumMethod

_ENUMS = {
    "design": Design,
    "init_scheme": InitKind,
    "interp_init": InitKind,
    "spectrum_method": SpectrumMethod,
    "eta_schedule": EtaSchedule,
}
_GRIDS = ("eta_grid", "n_grid", "counterexample_n_grid", "k_grid")


class ConfigMapper:
    @staticmethod
    def to_domain(values: Mapping[str, Any]) -> ExperimentConfig:
        fields = dict(values)
        for name, enum_type in _ENUMS.items():
            if fields.get(name) is not None:
                fields[name] = enum_type(fields[name])
        for name in _GRIDS:
            if fields.get(name) is not None:
                fields[name] = tuple(fields[name])
        return ExperimentConfig(**fields)
