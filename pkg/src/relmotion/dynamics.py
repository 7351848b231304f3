"""Time evolution of the flux-driven qubit-cavity system.

Fixed-step classical 4th-order Runge-Kutta integration, for both unitary
Schrodinger dynamics and Lindblad dynamics with qubit decay as the sole
collapse channel.  Integration defaults to the exact interaction picture of
the free Hamiltonian (diagonal phases, no approximation): the recorded
observables are frame-invariant, while the integrator only has to resolve
the slow coupling instead of the full n_max*omega spectral width.  Lab-frame
stepping is available for cross-checks.

A piecewise-exact midpoint-frozen propagator (matrix exponentials) serves as
an independent oracle in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import expm

from . import qcore
from .model import FluxProfile, SystemParams, coupling_strength, hamiltonian_parts

MIN_STEPS_PER_PERIOD = 200
NORM_ABORT = 1e-6
TRACE_ABORT = 1e-6
EIG_ABORT = -1e-6

HamiltonianEval = Callable[[float], np.ndarray]


class IntegrationError(RuntimeError):
    """Integration violated a conservation diagnostic."""


@dataclass(frozen=True)
class TimeGrid:
    """Uniform integration grid; observables are recorded every sample_every steps."""
    t0: float
    t1: float
    dt: float
    sample_every: int = 1

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t1 <= self.t0:
            raise ValueError("t1 must exceed t0")
        if self.sample_every < 1:
            raise ValueError("sample_every must be >= 1")

    def n_steps(self) -> int:
        return max(1, int(np.ceil((self.t1 - self.t0) / self.dt * (1 - 1e-12))))

    def effective_dt(self) -> float:
        return (self.t1 - self.t0) / self.n_steps()


@dataclass(frozen=True)
class SimResult:
    """Observable time series of one evolution."""
    times: np.ndarray
    p_e: np.ndarray
    sigma_z: np.ndarray
    n_ph: np.ndarray
    purity: np.ndarray
    trace_dev: np.ndarray


def _validate_grid(grid: TimeGrid, max_freq: float) -> None:
    if max_freq <= 0:
        return
    cap = (2 * np.pi / max_freq) / MIN_STEPS_PER_PERIOD
    if grid.dt > cap * (1 + 1e-9):
        raise ValueError(
            f"dt = {grid.dt:.3e} exceeds the resolution cap {cap:.3e} "
            f"(shortest period / {MIN_STEPS_PER_PERIOD})")


def _max_freq(p: SystemParams, fp: FluxProfile) -> float:
    omega_d = getattr(fp, "omega_d", None) or 0.0
    return max(p.omega, p.omega_q, omega_d)


def _diag_weights(dim: int) -> tuple[np.ndarray, np.ndarray]:
    m = dim // 2
    e_mask = np.zeros(dim)
    e_mask[m:] = 1.0
    n_diag = np.concatenate([np.arange(m), np.arange(m)]).astype(float)
    return e_mask, n_diag


def observables(state: np.ndarray) -> tuple[float, float, float, float, float]:
    """(p_e, sigma_z, n_ph, purity, trace_dev) for a vector or density matrix."""
    state = np.asarray(state, dtype=complex)
    dim = state.shape[0]
    e_mask, n_diag = _diag_weights(dim)
    if state.ndim == 1:
        probs = np.abs(state) ** 2
        norm2 = probs.sum()
        p_e = float(probs @ e_mask)
        return (p_e, 2 * p_e - norm2, float(probs @ n_diag), 1.0,
                abs(norm2 - 1.0))
    diag = np.real(np.diag(state))
    p_e = float(diag @ e_mask)
    tr = np.trace(state)
    purity = float(np.real(np.vdot(state, state)))
    return (p_e, 2 * p_e - float(tr.real), float(diag @ n_diag), purity,
            abs(float(tr.real) - 1.0) + abs(float(tr.imag)))


def _collect(samples: list[tuple[float, tuple]]) -> SimResult:
    times = np.array([t for t, _ in samples])
    obs = np.array([o for _, o in samples])
    return SimResult(times=times, p_e=obs[:, 0], sigma_z=obs[:, 1],
                     n_ph=obs[:, 2], purity=obs[:, 3], trace_dev=obs[:, 4])


def _lab_hamiltonian(h0: np.ndarray, v: np.ndarray,
                     g_of_t: Callable[[float], float]) -> HamiltonianEval:
    return lambda t: h0 + g_of_t(t) * v


def _interaction_hamiltonian(h0: np.ndarray, v: np.ndarray,
                             g_of_t: Callable[[float], float]) -> HamiltonianEval:
    """g(t) * exp(iH0 t) V exp(-iH0 t) for diagonal H0 (exact frame change)."""
    if np.max(np.abs(h0 - np.diag(np.diag(h0)))) > 0:
        raise ValueError("interaction frame requires a diagonal free Hamiltonian")
    energies = np.real(np.diag(h0))

    def h_of_t(t: float) -> np.ndarray:
        u = np.exp(1j * energies * t)
        return (g_of_t(t) * u[:, None] * v) * u.conj()[None, :]

    return h_of_t


def _build_hamiltonian_eval(h0: np.ndarray, v: np.ndarray,
                            g_of_t: Callable[[float], float],
                            frame: str) -> HamiltonianEval:
    if frame == "lab":
        return _lab_hamiltonian(h0, v, g_of_t)
    if frame == "interaction":
        return _interaction_hamiltonian(h0, v, g_of_t)
    raise ValueError(f"unknown frame {frame!r} (expected 'lab' or 'interaction')")


def integrate_schrodinger(h_of_t: HamiltonianEval, psi0: np.ndarray,
                          grid: TimeGrid) -> SimResult:
    """RK4 integration of i dpsi/dt = H(t) psi; no renormalization."""
    qcore.check_normalized(psi0)
    psi = psi0.astype(complex).copy()
    n_steps = grid.n_steps()
    dt = grid.effective_dt()

    def rhs(t, y):
        return -1j * (h_of_t(t) @ y)

    samples = [(grid.t0, observables(psi))]
    for i in range(n_steps):
        t = grid.t0 + i * dt
        k1 = rhs(t, psi)
        k2 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k2)
        k4 = rhs(t + dt, psi + dt * k3)
        psi += (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if (i + 1) % grid.sample_every == 0 or i == n_steps - 1:
            drift = abs(np.linalg.norm(psi) - 1.0)
            if drift > NORM_ABORT:
                raise IntegrationError(
                    f"norm drift {drift:.3e} at t = {t + dt:.6g}; reduce dt "
                    f"(current dt = {dt:.3e})")
            samples.append((t + dt, observables(psi)))
    return _collect(samples)


def _dissipator(rho: np.ndarray, gamma: float, m: int) -> np.ndarray:
    """gamma * (L rho L+ - {L+L, rho}/2) for L = (sigma- on the qubit) x 1.

    Uses the block structure of the qubit-major ordering: L rho L+ moves the
    ee block to the gg block and L+L projects on the e block.  The qubit
    phase picked up by L in the interaction picture cancels, so the same
    expression serves both frames.
    """
    out = np.zeros_like(rho)
    out[:m, :m] = gamma * rho[m:, m:]
    out[m:, :] -= 0.5 * gamma * rho[m:, :]
    out[:, m:] -= 0.5 * gamma * rho[:, m:]
    return out


def integrate_lindblad(h_of_t: HamiltonianEval, gamma: float,
                       rho0: np.ndarray, grid: TimeGrid,
                       check_positivity: bool = True,
                       n_ph_stop: float | None = None) -> SimResult:
    """RK4 integration of the Lindblad equation with qubit decay at rate gamma.

    n_ph_stop truncates the run at the first sample whose photon number
    reaches the threshold (used by long photon-growth scenarios).
    """
    qcore.check_density_matrix(rho0)
    rho = rho0.astype(complex).copy()
    m = rho.shape[0] // 2
    n_steps = grid.n_steps()
    dt = grid.effective_dt()

    def rhs(t, y):
        hy = h_of_t(t) @ y
        # y stays Hermitian along RK4 stages, so [H, y] = H y - (H y)^dagger
        out = -1j * (hy - hy.conj().T)
        if gamma > 0:
            out += _dissipator(y, gamma, m)
        return out

    samples = [(grid.t0, observables(rho))]
    for i in range(n_steps):
        t = grid.t0 + i * dt
        k1 = rhs(t, rho)
        k2 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k2)
        k4 = rhs(t + dt, rho + dt * k3)
        rho += (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if (i + 1) % grid.sample_every == 0 or i == n_steps - 1:
            tr = np.trace(rho)
            tr_dev = abs(tr.real - 1.0) + abs(tr.imag)
            if tr_dev > TRACE_ABORT:
                raise IntegrationError(
                    f"trace deviation {tr_dev:.3e} at t = {t + dt:.6g}")
            if check_positivity:
                min_eig = np.linalg.eigvalsh(rho).min()
                if min_eig < EIG_ABORT:
                    raise IntegrationError(
                        f"negative eigenvalue {min_eig:.3e} at t = {t + dt:.6g}")
            obs = observables(rho)
            samples.append((t + dt, obs))
            if n_ph_stop is not None and obs[2] >= n_ph_stop:
                break
    return _collect(samples)


def evolve_schrodinger(p: SystemParams, fp: FluxProfile, psi0: np.ndarray,
                       grid: TimeGrid, frame: str = "interaction") -> SimResult:
    """Unitary evolution of the driven system from a pure state."""
    _validate_grid(grid, _max_freq(p, fp))
    h0, v = hamiltonian_parts(p)
    h_of_t = _build_hamiltonian_eval(h0, v,
                                     lambda t: coupling_strength(fp(t), p.g0),
                                     frame)
    return integrate_schrodinger(h_of_t, psi0, grid)


def evolve_lindblad(p: SystemParams, fp: FluxProfile, rho0: np.ndarray,
                    grid: TimeGrid, frame: str = "interaction",
                    check_positivity: bool = True,
                    n_ph_stop: float | None = None) -> SimResult:
    """Dissipative evolution with qubit decay at rate p.gamma."""
    _validate_grid(grid, _max_freq(p, fp))
    h0, v = hamiltonian_parts(p)
    h_of_t = _build_hamiltonian_eval(h0, v,
                                     lambda t: coupling_strength(fp(t), p.g0),
                                     frame)
    return integrate_lindblad(h_of_t, p.gamma, rho0, grid,
                              check_positivity=check_positivity,
                              n_ph_stop=n_ph_stop)


def _lindblad_superop(h: np.ndarray, gamma: float) -> np.ndarray:
    """Column-stacking superoperator of -i[H, .] + gamma D[sigma- x 1]."""
    dim = h.shape[0]
    m = dim // 2
    eye = np.eye(dim, dtype=complex)
    low = np.zeros((dim, dim), dtype=complex)
    low[:m, m:] = np.eye(m)
    ldl = low.conj().T @ low
    sup = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    if gamma > 0:
        sup += gamma * (np.kron(low.conj(), low)
                        - 0.5 * np.kron(eye, ldl)
                        - 0.5 * np.kron(ldl.T, eye))
    return sup


def propagate_piecewise_exact(p: SystemParams, fp: FluxProfile,
                              state: np.ndarray, grid: TimeGrid,
                              substeps: int = 1) -> SimResult:
    """Oracle propagator: freeze H at each (sub)step midpoint, apply expm.

    Lab frame throughout; unitary exponential for vector states,
    superoperator exponential for density matrices.  Cost is dim^3 (dim^6
    for Lindblad) per step; intended for tests at small n_max.  The frozen
    midpoint is 2nd-order accurate, so substeps > 1 is needed for tight
    comparisons.
    """
    h0, v = hamiltonian_parts(p)
    state = np.asarray(state, dtype=complex).copy()
    n_steps = grid.n_steps()
    dt = grid.effective_dt()
    sub_dt = dt / substeps
    unitary = state.ndim == 1

    samples = [(grid.t0, observables(state))]
    for i in range(n_steps):
        t = grid.t0 + i * dt
        for j in range(substeps):
            tm = t + (j + 0.5) * sub_dt
            h = h0 + coupling_strength(fp(tm), p.g0) * v
            if unitary:
                state = expm(-1j * sub_dt * h) @ state
            else:
                sup = _lindblad_superop(h, p.gamma)
                state = (expm(sub_dt * sup) @ state.flatten(order="F")).reshape(
                    state.shape, order="F")
        if (i + 1) % grid.sample_every == 0 or i == n_steps - 1:
            samples.append((t + dt, observables(state)))
    return _collect(samples)
