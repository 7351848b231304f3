"""Configuration schema and conversion to internal simulation objects.

External units are GHz/ns/kHz; internally everything is dimensionless with
the cavity frequency omega = 1 (time unit 1/omega), which keeps integrator
tolerances scale-free.  The uniform-acceleration trajectory keeps SI inputs
and is bridged through the time-scale factor omega in rad/ns.
"""

from __future__ import annotations

import json
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .dynamics import TimeGrid
from .model import (GROUP_VELOCITY, AccelTrajectory, FluxProfile, HarmonicDrive,
                    SystemParams, accel_profile, constant_profile,
                    harmonic_profile)


class ConfigError(ValueError):
    """Configuration failed semantic validation."""


class SystemConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")
    omega_ghz: float = Field(default=4.0, gt=0)
    omega_q_ghz: float = Field(default=4.0, gt=0)
    g0_over_omega: float = Field(default=0.01, ge=0.0, le=0.2)
    gamma_khz: float = Field(default=0.0, ge=0.0)
    n_max: int = Field(default=5, ge=1)


class DriveConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")
    type: Literal["harmonic", "uniform_accel", "constant"] = "harmonic"
    f0_rad: float = np.pi / 2
    delta_f_rad: float = Field(default=np.pi / 2, ge=0.0)
    omega_d_over_omega: float = Field(default=2.0, gt=0)
    accel_m_s2: Optional[float] = Field(default=None, gt=0)
    c_sim_m_s: float = Field(default=GROUP_VELOCITY, gt=0)
    duration_ns: float = Field(default=1.0, gt=0)
    x_offset_m: float = 0.0

    @model_validator(mode="after")
    def _require_accel(self):
        if self.type == "uniform_accel" and self.accel_m_s2 is None:
            raise ValueError("accel_m_s2 is required when drive type is uniform_accel")
        return self


class GridConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")
    t_end_ns: float = Field(default=30.0, gt=0)
    steps_per_period: int = Field(default=400, ge=200)


class OutputConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")
    csv_path: Optional[str] = None
    json_path: Optional[str] = None


class Config(BaseModel):
    model_config = ConfigDict(extra="forbid")
    system: SystemConfig = SystemConfig()
    drive: DriveConfig = DriveConfig()
    grid: GridConfig = GridConfig()
    output: OutputConfig = OutputConfig()

    # -- unit conversion helpers -------------------------------------------

    @property
    def omega_rad_ns(self) -> float:
        """Physical cavity angular frequency in rad/ns (the internal time scale)."""
        return 2 * np.pi * self.system.omega_ghz

    def internal_params(self) -> SystemParams:
        """SystemParams in normalized units (omega = 1)."""
        s = self.system
        return SystemParams(
            omega=1.0,
            omega_q=s.omega_q_ghz / s.omega_ghz,
            g0=s.g0_over_omega,
            gamma=s.gamma_khz * 1e-6 / s.omega_ghz,
            n_max=s.n_max,
        )

    def physical_params(self) -> SystemParams:
        """SystemParams in rad/ns (for quadratures over physical time)."""
        s = self.system
        w = self.omega_rad_ns
        return SystemParams(
            omega=w,
            omega_q=2 * np.pi * s.omega_q_ghz,
            g0=s.g0_over_omega * w,
            gamma=2 * np.pi * s.gamma_khz * 1e-6,
            n_max=s.n_max,
        )

    def wave_vector(self) -> float:
        """Mode wave vector k = omega/v in rad/m (v the line group velocity)."""
        return self.omega_rad_ns * 1e9 / GROUP_VELOCITY

    def trajectory(self) -> AccelTrajectory:
        d = self.drive
        if d.type != "uniform_accel":
            raise ConfigError("trajectory is only defined for uniform_accel drives")
        half = d.duration_ns / 2
        return AccelTrajectory(accel=d.accel_m_s2, c_sim=d.c_sim_m_s,
                               k=self.wave_vector(), t_span=(-half, half),
                               x_offset=d.x_offset_m)

    def flux_profile(self, time_scale: float) -> FluxProfile:
        """Flux profile over a time axis with time_scale units per ns.

        time_scale = omega_rad_ns gives the normalized axis, 1.0 the ns axis.
        """
        d = self.drive
        if d.type == "harmonic":
            omega_d = d.omega_d_over_omega * self.omega_rad_ns / time_scale
            return harmonic_profile(HarmonicDrive(d.f0_rad, d.delta_f_rad, omega_d))
        if d.type == "constant":
            return constant_profile(d.f0_rad)
        return accel_profile(self.trajectory(), time_scale=time_scale)

    def internal_profile(self) -> FluxProfile:
        return self.flux_profile(self.omega_rad_ns)

    def physical_profile(self) -> FluxProfile:
        return self.flux_profile(1.0)

    def internal_grid(self) -> TimeGrid:
        """Integration grid on the normalized time axis."""
        p = self.internal_params()
        d = self.drive
        omega_d = d.omega_d_over_omega if d.type == "harmonic" else 0.0
        max_freq = max(p.omega, p.omega_q, omega_d)
        dt = (2 * np.pi / max_freq) / self.grid.steps_per_period
        w = self.omega_rad_ns
        if d.type == "uniform_accel":
            half = d.duration_ns / 2 * w
            t0, t1 = -half, half
        else:
            t0, t1 = 0.0, self.grid.t_end_ns * w
        sample_every = max(1, self.grid.steps_per_period // 20)
        return TimeGrid(t0=t0, t1=t1, dt=dt, sample_every=sample_every)

    def quadrature_window(self) -> tuple[float, float]:
        """Perturbation-theory window on the physical (ns) time axis."""
        if self.drive.type == "uniform_accel":
            half = self.drive.duration_ns / 2
            return (-half, half)
        return (0.0, self.grid.t_end_ns)


def parse_config(path: str) -> Config:
    """Load and validate a JSON config file; defaults fill missing fields."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    data = json.loads(text)
    return Config.model_validate(data)
