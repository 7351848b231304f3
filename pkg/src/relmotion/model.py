"""Physical parameters, flux-drive profiles and the driven Hamiltonian.

The qubit-cavity coupling is modulated through a frustration parameter f,
g(f) = g0*cos(f), and a flux profile f(t) mimics qubit motion via f = k*x_q.
All functions are unit-agnostic: frequencies and times only need to be
mutually consistent (the configuration layer works with omega = 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import qcore

#: group velocity of the field in the transmission line, m/s
GROUP_VELOCITY = 1.2e8


@dataclass(frozen=True)
class SystemParams:
    """Cavity frequency, qubit splitting, bare coupling, qubit decay, truncation."""
    omega: float
    omega_q: float
    g0: float
    gamma: float
    n_max: int

    def __post_init__(self):
        if self.omega <= 0 or self.omega_q <= 0:
            raise ValueError("frequencies must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        if self.g0 > 0.2 * self.omega:
            raise ValueError(
                f"g0 = {self.g0} exceeds the 0.2*omega cap (deep-ultrastrong regime)")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)


@dataclass(frozen=True)
class HarmonicDrive:
    """Flux oscillating around f0 with amplitude delta_f at frequency omega_d."""
    f0: float
    delta_f: float
    omega_d: float

    def __post_init__(self):
        if self.delta_f < 0:
            raise ValueError("delta_f must be non-negative")
        if self.omega_d <= 0:
            raise ValueError("omega_d must be positive")


@dataclass(frozen=True)
class AccelTrajectory:
    """Uniformly accelerated trajectory parameters (SI units, times in ns).

    The hyperbolic trajectory is shifted so that x(0) = x_offset; the default
    x_offset = 0 puts the closest approach where k*x = 0, i.e. at maximal
    coupling.
    """
    accel: float          # proper acceleration, m/s^2
    c_sim: float          # simulated light speed (defaults to the group velocity), m/s
    k: float              # mode wave vector, rad/m
    t_span: tuple[float, float]  # ns
    x_offset: float = 0.0  # m

    def __post_init__(self):
        if self.accel <= 0:
            raise ValueError("accel must be positive")
        if self.c_sim <= 0:
            raise ValueError("c_sim must be positive")
        if self.k <= 0:
            raise ValueError("k must be positive")
        if self.t_span[1] <= self.t_span[0]:
            raise ValueError("t_span must have t1 > t0")


FluxProfile = Callable[[float], float]


def flux_harmonic(t: float, d: HarmonicDrive) -> float:
    """f(t) = f0 + delta_f*cos(omega_d*t)."""
    return d.f0 + d.delta_f * np.cos(d.omega_d * t)


def trajectory_uniform_accel(t: float, tr: AccelTrajectory) -> float:
    """Position (m) at time t (ns) on the shifted hyperbolic trajectory.

    x(t) = x_offset + (c/A)*sqrt(c^2 + A^2 t^2) - c^2/A, so x(0) = x_offset.
    """
    t_s = t * 1e-9
    c, a = tr.c_sim, tr.accel
    return tr.x_offset + (c / a) * np.sqrt(c * c + a * a * t_s * t_s) - c * c / a


def flux_from_position(x: float, k: float) -> float:
    """f = k*x_q."""
    return k * x


def coupling_strength(f: float, g0: float) -> float:
    """g = g0*cos(f)."""
    return g0 * np.cos(f)


def harmonic_profile(d: HarmonicDrive) -> FluxProfile:
    def profile(t: float) -> float:
        return flux_harmonic(t, d)
    profile.omega_d = d.omega_d  # used for step-size validation
    return profile


def accel_profile(tr: AccelTrajectory, time_scale: float = 1.0) -> FluxProfile:
    """Flux profile of the accelerated trajectory.

    time_scale converts the caller's time variable to ns (t_ns = t / time_scale),
    so the same profile serves physical (ns) and normalized time axes.
    """
    def profile(t: float) -> float:
        return flux_from_position(trajectory_uniform_accel(t / time_scale, tr), tr.k)
    profile.omega_d = None
    return profile


def constant_profile(f: float) -> FluxProfile:
    def profile(t: float) -> float:
        return f
    profile.omega_d = None
    return profile


def hamiltonian_parts(p: SystemParams) -> tuple[np.ndarray, np.ndarray]:
    """Static part H0 = omega*a+a + (omega_q/2)*sigma_z and coupling part V = sigma_x*(a+a+).

    H(t) = H0 + g0*cos(f(t))*V.
    """
    a, adag = qcore.ladder_ops(p.n_max)
    sx, sz, _, _ = qcore.qubit_ops()
    eye_q = np.eye(2, dtype=complex)
    eye_f = np.eye(p.n_max + 1, dtype=complex)
    h0 = p.omega * qcore.tensor(eye_q, adag @ a) + 0.5 * p.omega_q * qcore.tensor(sz, eye_f)
    v = qcore.tensor(sx, a + adag)
    return h0, v


def hamiltonian(t: float, p: SystemParams, fp: FluxProfile) -> np.ndarray:
    """Time-dependent Hamiltonian H(t) of the flux-driven system."""
    h0, v = hamiltonian_parts(p)
    return h0 + coupling_strength(fp(t), p.g0) * v


def kinematics(d: HarmonicDrive, k: float, v: float) -> tuple[float, float]:
    """Peak simulated velocity and acceleration of the harmonic motion.

    k in rad/m, v in m/s; d.omega_d is interpreted in rad/ns.  With
    delta_x = delta_f/k: v_max = delta_x*omega_d, a_max = delta_x*omega_d^2.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    omega_d_si = d.omega_d * 1e9
    delta_x = d.delta_f / k
    return delta_x * omega_d_si, delta_x * omega_d_si ** 2
