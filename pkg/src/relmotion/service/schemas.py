"""Request/response models of the simulation service."""

from __future__ import annotations

import dataclasses
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..analysis import PerturbativeResult
from ..config import Config
from ..dynamics import SimResult
from ..harness import ExperimentReport


class SimSeries(BaseModel):
    times_ns: list[float]
    p_e: list[float]
    sigma_z: list[float]
    n_ph: list[float]
    purity: list[float]
    trace_dev: list[float]

    @classmethod
    def from_result(cls, res: SimResult) -> "SimSeries":
        return cls(times_ns=list(res.times), p_e=list(res.p_e),
                   sigma_z=list(res.sigma_z), n_ph=list(res.n_ph),
                   purity=list(res.purity), trace_dev=list(res.trace_dev))

    def to_result(self) -> SimResult:
        import numpy as np
        return SimResult(times=np.array(self.times_ns), p_e=np.array(self.p_e),
                         sigma_z=np.array(self.sigma_z), n_ph=np.array(self.n_ph),
                         purity=np.array(self.purity),
                         trace_dev=np.array(self.trace_dev))


class PerturbativeModel(BaseModel):
    r_em: float
    r_abs: float
    sigma_z_pert: float
    n_pert: float

    @classmethod
    def from_result(cls, res: PerturbativeResult) -> "PerturbativeModel":
        return cls(**dataclasses.asdict(res))


class CheckModel(BaseModel):
    name: str
    passed: bool
    detail: str


class ReportModel(BaseModel):
    scenario: str
    config: dict
    checks: list[CheckModel]
    results: dict[str, SimSeries]
    perturbative: dict[str, PerturbativeModel]
    extras: dict
    wall_seconds: float
    error: Optional[str] = None
    all_passed: bool

    @classmethod
    def from_report(cls, rep: ExperimentReport) -> "ReportModel":
        return cls(
            scenario=rep.scenario,
            config=rep.config,
            checks=[CheckModel(name=c.name, passed=bool(c.passed), detail=c.detail)
                    for c in rep.checks],
            results={k: SimSeries.from_result(v) for k, v in rep.results.items()},
            perturbative={k: PerturbativeModel.from_result(v)
                          for k, v in rep.perturbative.items()},
            extras=_plain(rep.extras),
            wall_seconds=rep.wall_seconds,
            error=rep.error,
            all_passed=bool(rep.all_passed),
        )


def _plain(obj):
    import numpy as np
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [float(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


class SimulateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    config: Config = Config()


class SimulateResponse(BaseModel):
    config: dict
    series: SimSeries


class PerturbativeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    config: Config = Config()


class PerturbativeResponse(BaseModel):
    config: dict
    result: PerturbativeModel


class Fig3Request(BaseModel):
    model_config = ConfigDict(extra="forbid")
    unitary: bool = True
    dissipative: bool = True


class Fig4Request(BaseModel):
    model_config = ConfigDict(extra="forbid")
    delta_f_rad: list[float] = Field(min_length=1)
    gamma_khz: float = Field(default=400.0, ge=0.0)
    n_max: int = Field(default=40, ge=1)
    check_truncation: bool = True


class AccelRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    accel_m_s2: float = Field(default=1e15, gt=0)
    duration_ns: float = Field(default=1.0, gt=0)


class SweepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    config: Config = Config()
    axis: str
    values: list[float]
    kind: Literal["simulate", "perturbative"] = "simulate"


class SweepResponse(BaseModel):
    rows: list[ReportModel]


class ConvergeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    config: Config = Config()
    n_max_list: list[int] = Field(min_length=2)
