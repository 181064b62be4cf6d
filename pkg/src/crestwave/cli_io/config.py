"""Run configuration: schema, validation, file loading.

Configs are structured text (JSON or YAML, by extension) with an
explicit schema version. Unknown keys are rejected everywhere so typos
fail loudly instead of silently running defaults.
"""
from __future__ import annotations

import json
from typing import Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field as PField, field_validator

__all__ = ["RunConfig", "SolverSection", "InitialSection", "OutputsSection",
           "CompareSection", "MollifySection", "DispersionSection",
           "FieldsSection", "load_config", "ConfigError"]

MODES = ("simulate", "diagnose", "compare", "mollify-study", "dispersion", "fields")


class ConfigError(ValueError):
    pass


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SolverSection(_Model):
    n: int = 256
    dt: float = 2e-3
    t_final: float = 1.0
    snapshot_every: int = 1
    krasny_threshold: Optional[float] = None
    reports: bool = True
    report_method: Literal["spectral", "quadrature"] = "spectral"
    energy_max: float = 1e6
    taylor_tol: float = 1e-8
    defect_max: float = 1e-6

    @field_validator("n")
    @classmethod
    def _n_pow2(cls, v: int) -> int:
        if v < 8 or v & (v - 1):
            raise ValueError("n must be a power of two, at least 8")
        return v


class InitialSection(_Model):
    kind: Literal["rest", "linear_mode", "random_analytic", "near_crest", "checkpoint"]
    k: Optional[int] = None
    amplitude: Optional[float] = None
    seed: Optional[int] = None
    modes: Optional[int] = None
    decay: Optional[float] = None
    rho: Optional[float] = None
    path: Optional[str] = None

    def as_spec(self) -> dict:
        return {k: v for k, v in self.model_dump().items() if v is not None}


class OutputsSection(_Model):
    energy_csv: Optional[str] = "energy.csv"
    stability_csv: Optional[str] = "stability.csv"
    fields_csv: Optional[str] = "fields.csv"
    study_csv: Optional[str] = "study.csv"
    dispersion_csv: Optional[str] = "dispersion.csv"
    summary_json: Optional[str] = "summary.json"
    checkpoint_out: Optional[str] = None


class CompareSection(_Model):
    other_initial: InitialSection
    M: float = 4.0
    marker_count: int = 48
    stride: int = 1


class MollifySection(_Model):
    eps_list: list[float] = PField(default_factory=lambda: [0.2, 0.1, 0.05])
    M: float = 4.0
    marker_count: int = 48
    stride: int = 5


class DispersionSection(_Model):
    modes: list[int] = PField(default_factory=lambda: [1, 2, 4, 8])
    amplitude: float = 1e-5
    t_final: float = 2.0


class FieldsSection(_Model):
    depths: list[float] = PField(default_factory=lambda: [-0.1, -0.3, -1.0])


class RunConfig(_Model):
    schema_version: Literal[1] = 1
    mode: Optional[Literal["simulate", "diagnose", "compare",
                           "mollify-study", "dispersion", "fields"]] = None
    solver: SolverSection = PField(default_factory=SolverSection)
    initial: InitialSection
    outputs: OutputsSection = PField(default_factory=OutputsSection)
    compare: Optional[CompareSection] = None
    mollify: Optional[MollifySection] = None
    dispersion: Optional[DispersionSection] = None
    fields: Optional[FieldsSection] = None


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        if path.endswith((".yaml", ".yml")):
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config root must be a mapping, got {type(data).__name__}")
    try:
        return RunConfig.model_validate(data)
    except Exception as exc:
        raise ConfigError(f"invalid config {path}: {exc}") from exc
