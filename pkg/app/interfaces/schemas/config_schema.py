# app/interfaces/schemas/config_schema.py
"""
YAML experiment configuration: sections are flattened, overrides applied and
every key validated by a pydantic model that rejects unknown keys.
"""
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, NoReturn, Optional, Sequence

import yaml
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, ValidationError, conint

from application.dtos.experiment_config import ExperimentConfig
from application.mappers.config_mapper import ConfigMapper
from core.exceptions.domain_exceptions import InvalidConfig, InvalidValue, MissingFile, UnknownKey

SECTIONS: Dict[str, frozenset] = {
    "data": frozenset({"design", "n", "sigma", "x_max", "data_seed", "data_path"}),
    "network": frozenset({"k", "k_grid", "init_scheme", "init_a_w1", "init_a_b1", "init_a_w2", "knot_range"}),
    "train": frozenset({
        "eta", "max_steps", "log_every", "seed", "stop_grad_norm", "steady_window",
        "steady_rel_tol", "eos_eps",
    }),
    "spectrum": frozenset({"spectrum_method", "spectrum_every", "diff_tol", "certificate_samples"}),
    "bounds": frozenset({"delta"}),
    "sweep": frozenset({"reps", "eta_grid"}),
    "rate": frozenset({"n_grid", "eta_schedule", "eta_exponent", "gap_test_m"}),
    "counterexample": frozenset({"counterexample_n_grid", "k_factor", "interp_tol", "interp_init"}),
    "interval": frozenset({"interval_lo", "interval_hi", "interval_c"}),
    "basis": frozenset({"basis_points", "basis_lo", "basis_hi", "lp_norm_p", "dslope_tol"}),
}

InitName = Literal["uniform_fanin", "uniform_custom", "stratified_knots"]


class ConfigSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    design: Literal["hat", "counterexample", "custom_file"] = "hat"
    n: int = Field(30, ge=1)
    sigma: float = Field(0.5, ge=0)
    x_max: float = Field(0.5, gt=0)
    data_seed: Optional[int] = Field(None, ge=0)
    data_path: Optional[str] = None

    k: int = Field(100, ge=1)
    k_grid: List[conint(ge=1)] = Field(default_factory=list)
    init_scheme: InitName = "uniform_fanin"
    init_a_w1: float = Field(1.0, gt=0)
    init_a_b1: float = Field(1.0, gt=0)
    init_a_w2: Optional[float] = Field(None, gt=0)
    knot_range: Optional[float] = Field(None, gt=0)

    eta: float = Field(0.4, gt=0)
    max_steps: int = Field(200000, ge=0)
    log_every: int = Field(100, ge=1)
    seed: int = Field(0, ge=0)
    stop_grad_norm: float = Field(0.0, ge=0)
    steady_window: int = Field(10, ge=2)
    steady_rel_tol: float = Field(1e-2, gt=0)
    eos_eps: float = Field(0.25, ge=0)

    spectrum_method: Literal["dense", "power", "auto"] = "auto"
    spectrum_every: int = Field(1, ge=1)
    diff_tol: float = Field(1e-8, gt=0)
    certificate_samples: int = Field(1000, ge=1)

    delta: float = Field(0.05, gt=0, lt=1)

    reps: int = Field(5, ge=1)
    eta_grid: List[PositiveFloat] = Field(default_factory=lambda: [0.4, 0.2, 0.1, 0.05, 0.01], min_length=1)

    n_grid: List[conint(ge=2)] = Field(default_factory=lambda: [64, 128, 256, 512, 1024], min_length=1)
    eta_schedule: Literal["constant", "power"] = "constant"
    eta_exponent: float = 0.0
    gap_test_m: int = Field(10000, ge=1)

    counterexample_n_grid: List[conint(ge=2)] = Field(default_factory=lambda: [20, 40, 80, 160], min_length=1)
    k_factor: int = Field(2, ge=1)
    interp_tol: float = Field(1e-8, gt=0)
    interp_init: InitName = "stratified_knots"

    interval_lo: Optional[float] = None
    interval_hi: Optional[float] = None
    interval_c: float = Field(1.0 / 4320.0, gt=0)

    basis_points: int = Field(200, ge=2)
    basis_lo: Optional[float] = None
    basis_hi: Optional[float] = None
    lp_norm_p: float = Field(0.5, gt=0, le=1)
    dslope_tol: float = Field(1e-12, ge=0)


def flatten_sections(raw: Mapping[str, Any]) -> Dict[str, Any]:
    """Merges per-module sections into one flat mapping; flat keys pass through."""
    flat: Dict[str, Any] = {}
    for key, value in raw.items():
        if key in SECTIONS:
            if value is None:
                continue
            if not isinstance(value, Mapping):
                raise InvalidValue(key, "section must be a mapping")
            for sub, sub_value in value.items():
                if sub not in SECTIONS[key]:
                    raise UnknownKey(f"{key}.{sub}")
                flat[sub] = sub_value
        else:
            flat[str(key)] = value
    return flat


def apply_overrides(flat: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    merged = dict(flat)
    for item in overrides:
        key, sep, text = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise InvalidValue(item, "override must be written key=value")
        if "." in key:
            section, _, name = key.partition(".")
            if section not in SECTIONS or name not in SECTIONS[section]:
                raise UnknownKey(key)
            key = name
        try:
            merged[key] = yaml.safe_load(text) if text.strip() else None
        except yaml.YAMLError:
            raise InvalidValue(key, f"cannot parse {text!r}") from None
    return merged


def _load_file(path: Optional[str]) -> Dict[str, Any]:
    if path is None:
        return {}
    source = Path(path)
    if not source.is_file():
        raise MissingFile(str(source))
    try:
        raw = yaml.safe_load(source.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise InvalidConfig(f"{source}: not valid YAML ({exc})") from None
    if raw is None:
        return {}
    if not isinstance(raw, Mapping):
        raise InvalidConfig(f"{source}: top level must be a mapping")
    return dict(raw)


def _raise_first(exc: ValidationError) -> NoReturn:
    errors = exc.errors()
    for error in errors:
        if error["type"] == "extra_forbidden":
            raise UnknownKey(str(error["loc"][0])) from None
    first = errors[0]
    key = ".".join(str(part) for part in first["loc"]) or "config"
    raise InvalidValue(key, first["msg"]) from None


def _check_pairs(values: ConfigSchema) -> None:
    for lo_name, hi_name in (("interval_lo", "interval_hi"), ("basis_lo", "basis_hi")):
        lo, hi = getattr(values, lo_name), getattr(values, hi_name)
        if lo is not None and hi is not None and not lo < hi:
            raise InvalidValue(hi_name, f"must exceed {lo_name} ({lo!r})")
    if (values.interval_lo is None) != (values.interval_hi is None):
        raise InvalidValue("interval_hi" if values.interval_hi is None else "interval_lo", "interval bounds go together")
    if values.design == "custom_file" and not values.data_path:
        raise InvalidValue("data_path", "required when design is custom_file")


def parse_config(path: Optional[str], overrides: Sequence[str] = ()) -> ExperimentConfig:
    """
    Loads the YAML file (defaults only when path is None), applies the
    key=value overrides and returns the resolved ExperimentConfig.

    Raises:
        MissingFile: path does not exist.
        UnknownKey: a key the schema does not know, named in the error.
        InvalidValue: a value outside its constraint, naming key and constraint.
    """
    flat = apply_overrides(flatten_sections(_load_file(path)), overrides)
    try:
        values = ConfigSchema(**flat)
    except ValidationError as exc:
        _raise_first(exc)
    _check_pairs(values)
    config = ConfigMapper.to_domain(values.model_dump())
    config.train_config()
    return config
