"""Integrators: conservation laws, oracle equivalence, frame independence."""

import numpy as np
import pytest

from relmotion import qcore
from relmotion.dynamics import (IntegrationError, SimResult, TimeGrid,
                                evolve_lindblad, evolve_schrodinger,
                                integrate_lindblad, observables,
                                propagate_piecewise_exact)
from relmotion.model import (HarmonicDrive, SystemParams, constant_profile,
                             harmonic_profile)

FIG3_DRIVE = HarmonicDrive(f0=np.pi / 2, delta_f=np.pi / 2, omega_d=2.0)


def _params(**overrides):
    base = dict(omega=1.0, omega_q=1.0, g0=0.01, gamma=0.0, n_max=3)
    base.update(overrides)
    return SystemParams(**base)


def _grid(t_end, steps_per_period=400, sample_every=20):
    dt = (2 * np.pi / 2.0) / steps_per_period  # fastest frequency 2*omega
    return TimeGrid(t0=0.0, t1=t_end, dt=dt, sample_every=sample_every)


def test_time_grid_validation():
    with pytest.raises(ValueError):
        TimeGrid(0.0, 1.0, dt=-0.1)
    with pytest.raises(ValueError):
        TimeGrid(1.0, 0.0, dt=0.1)
    with pytest.raises(ValueError):
        TimeGrid(0.0, 1.0, dt=0.1, sample_every=0)
    grid = TimeGrid(0.0, 1.0, dt=0.3)
    assert grid.n_steps() == 4
    assert grid.n_steps() * grid.effective_dt() == pytest.approx(1.0)


def test_grid_resolution_cap_enforced():
    p = _params()
    coarse = TimeGrid(0.0, 10.0, dt=0.5)
    with pytest.raises(ValueError):
        evolve_schrodinger(p, harmonic_profile(FIG3_DRIVE),
                           qcore.basis_state(0, 0, p.n_max), coarse)


def test_observables_basis_states():
    psi_g0 = qcore.basis_state(0, 0, 3)
    assert observables(psi_g0) == pytest.approx((0.0, -1.0, 0.0, 1.0, 0.0))
    psi_e1 = qcore.basis_state(1, 1, 3)
    assert observables(psi_e1) == pytest.approx((1.0, 1.0, 1.0, 1.0, 0.0))


def test_observables_maximally_mixed_qubit():
    n_max = 3
    rho_q = 0.5 * np.eye(2, dtype=complex)
    vac = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    vac[0, 0] = 1.0
    rho = np.kron(rho_q, vac)
    p_e, sigma_z, n_ph, purity, trace_dev = observables(rho)
    assert p_e == pytest.approx(0.5)
    assert sigma_z == pytest.approx(0.0)
    assert n_ph == pytest.approx(0.0)
    assert purity == pytest.approx(0.5)
    assert trace_dev == pytest.approx(0.0)


def test_pure_decay_matches_exponential():
    gamma = 0.05
    n_max = 1
    rho0 = qcore.pure_density(qcore.basis_state(1, 0, n_max))
    grid = TimeGrid(0.0, 20.0, dt=0.01, sample_every=100)
    zero = np.zeros((2 * (n_max + 1),) * 2, dtype=complex)
    res = integrate_lindblad(lambda t: zero, gamma, rho0, grid)
    expected = np.exp(-gamma * res.times)
    assert np.abs(res.p_e - expected).max() <= 1e-9


def test_unitary_norm_conservation():
    p = _params(n_max=5)
    res = evolve_schrodinger(p, harmonic_profile(FIG3_DRIVE),
                             qcore.basis_state(0, 0, p.n_max), _grid(200.0))
    assert res.trace_dev.max() <= 1e-8
    assert res.purity.max() == 1.0


def test_oracle_equivalence_unitary():
    p = _params(n_max=3)
    fp = harmonic_profile(FIG3_DRIVE)
    psi0 = qcore.basis_state(0, 0, p.n_max)
    grid = _grid(60.0)
    for frame in ("interaction", "lab"):
        res = evolve_schrodinger(p, fp, psi0, grid, frame=frame)
        oracle = propagate_piecewise_exact(p, fp, psi0, grid, substeps=16)
        for field in ("p_e", "n_ph", "sigma_z"):
            gap = np.abs(getattr(res, field) - getattr(oracle, field)).max()
            assert gap <= 1e-6, f"{frame}/{field}: {gap:.3e}"


def test_oracle_equivalence_lindblad():
    p = _params(n_max=2, gamma=1e-4)
    fp = harmonic_profile(FIG3_DRIVE)
    rho0 = qcore.pure_density(qcore.basis_state(0, 0, p.n_max))
    grid = _grid(40.0)
    res = evolve_lindblad(p, fp, rho0, grid)
    oracle = propagate_piecewise_exact(p, fp, rho0, grid, substeps=8)
    for field in ("p_e", "n_ph", "purity"):
        gap = np.abs(getattr(res, field) - getattr(oracle, field)).max()
        assert gap <= 1e-6, f"{field}: {gap:.3e}"


def test_frame_independence():
    p = _params(n_max=3)
    fp = harmonic_profile(FIG3_DRIVE)
    psi0 = qcore.basis_state(0, 0, p.n_max)
    grid = _grid(100.0)
    lab = evolve_schrodinger(p, fp, psi0, grid, frame="lab")
    rot = evolve_schrodinger(p, fp, psi0, grid, frame="interaction")
    assert np.abs(lab.p_e - rot.p_e).max() <= 1e-7
    assert np.abs(lab.n_ph - rot.n_ph).max() <= 1e-7


def test_step_halving_convergence():
    p = _params(n_max=3)
    fp = harmonic_profile(FIG3_DRIVE)
    psi0 = qcore.basis_state(0, 0, p.n_max)
    # commensurate grids so coarse and fine sample times coincide exactly
    coarse = evolve_schrodinger(
        p, fp, psi0, TimeGrid(0.0, 100.0, dt=100.0 / 6400, sample_every=32))
    fine = evolve_schrodinger(
        p, fp, psi0, TimeGrid(0.0, 100.0, dt=100.0 / 12800, sample_every=64))
    assert np.allclose(coarse.times, fine.times)
    assert np.abs(coarse.p_e - fine.p_e).max() <= 1e-7


def test_first_order_perturbation_constant_drive():
    # fp = 0 constant: g = g0, emission phase omega_q + omega = 2.
    p = _params(n_max=1, g0=0.01)
    fp = constant_profile(0.0)
    psi0 = qcore.basis_state(0, 0, p.n_max)
    res = evolve_schrodinger(p, fp, psi0, _grid(30.0, sample_every=5))
    predicted = p.g0 ** 2 * np.abs(
        (np.exp(-2j * res.times) - 1.0) / (-2j)) ** 2
    # away from the zeros of the prediction, where higher orders dominate
    small = (predicted <= 1e-3) & (predicted >= 0.1 * predicted.max())
    assert small.any()
    rel = np.abs(res.p_e[small] - predicted[small]) / predicted[small]
    assert rel.max() <= 0.10


def test_lindblad_rejects_invalid_initial_state():
    rho0 = qcore.pure_density(qcore.basis_state(0, 0, 1))
    bad = rho0 * 1.0
    bad[0, 0] += 2e-6
    grid = TimeGrid(0.0, 1.0, dt=0.01)
    zero = np.zeros_like(rho0)
    with pytest.raises(qcore.StateError):
        integrate_lindblad(lambda t: zero, 0.0, bad, grid)


def test_lindblad_trace_abort():
    # a non-Hermitian generator inflates the trace as exp(0.2 t)
    rho0 = qcore.pure_density(qcore.basis_state(0, 0, 1))
    grid = TimeGrid(0.0, 5.0, dt=0.01)
    leak = 0.1j * np.eye(4, dtype=complex)
    with pytest.raises(IntegrationError):
        integrate_lindblad(lambda t: leak, 0.0, rho0, grid,
                           check_positivity=False)


def test_n_ph_stop_truncates_run():
    p = _params(n_max=2, gamma=1e-4)
    fp = harmonic_profile(FIG3_DRIVE)
    rho0 = qcore.pure_density(qcore.basis_state(0, 0, p.n_max))
    grid = _grid(300.0)
    res = evolve_lindblad(p, fp, rho0, grid, n_ph_stop=0.5)
    assert res.n_ph[-1] >= 0.5
    assert np.all(res.n_ph[:-1] < 0.5)
    assert res.times[-1] < 300.0


def test_sim_result_fields_aligned():
    res = SimResult(times=np.arange(3.0), p_e=np.zeros(3), sigma_z=-np.ones(3),
                    n_ph=np.zeros(3), purity=np.ones(3), trace_dev=np.zeros(3))
    assert len(res.times) == len(res.p_e) == len(res.n_ph) == 3
