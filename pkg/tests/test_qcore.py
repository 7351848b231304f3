"""Operator algebra and state checks."""

import numpy as np
import pytest

from relmotion import qcore


def test_ladder_commutator_truncated_identity():
    n_max = 3
    a, adag = qcore.ladder_ops(n_max)
    comm = a @ adag - adag @ a
    expected = np.eye(n_max + 1, dtype=complex)
    expected[n_max, n_max] = -n_max
    assert np.allclose(comm, expected)


def test_ladder_action_on_fock_states():
    a, adag = qcore.ladder_ops(4)
    for n in range(1, 5):
        vec = np.zeros(5, dtype=complex)
        vec[n] = 1.0
        lowered = a @ vec
        assert lowered[n - 1] == pytest.approx(np.sqrt(n))
    assert abs(adag @ np.eye(5)[4]).max() == 0.0  # top state truncated


def test_ladder_rejects_trivial_truncation():
    with pytest.raises(ValueError):
        qcore.ladder_ops(0)


def test_qubit_ops_conventions():
    sx, sz, sm, sp = qcore.qubit_ops()
    g = np.array([1, 0], dtype=complex)
    e = np.array([0, 1], dtype=complex)
    assert np.allclose(sz @ g, -g)
    assert np.allclose(sz @ e, e)
    assert np.allclose(sp @ g, e)
    assert np.allclose(sm @ e, g)
    assert np.allclose(sx, sm + sp)


def test_tensor_identity_is_identity():
    n_max = 4
    eye = qcore.tensor(np.eye(2), np.eye(n_max + 1))
    assert np.allclose(eye, np.eye(2 * (n_max + 1)))


def test_tensor_rejects_non_qubit_first_factor():
    with pytest.raises(qcore.DimensionError):
        qcore.tensor(np.eye(3), np.eye(4))
    with pytest.raises(qcore.DimensionError):
        qcore.tensor(np.ones((2, 3)), np.eye(4))


def test_basis_state_indexing():
    n_max = 5
    psi = qcore.basis_state(1, 2, n_max)
    assert psi[(n_max + 1) + 2] == 1.0
    assert np.linalg.norm(psi) == 1.0
    with pytest.raises(ValueError):
        qcore.basis_state(2, 0, n_max)
    with pytest.raises(ValueError):
        qcore.basis_state(0, n_max + 1, n_max)


def test_expectation_sigma_z_on_excited_state():
    n_max = 2
    sz_full = qcore.tensor(qcore.qubit_ops()[1], np.eye(n_max + 1))
    psi = qcore.basis_state(1, 1, n_max)
    assert qcore.expectation(sz_full, psi) == pytest.approx(1.0)
    assert qcore.expectation(sz_full, qcore.pure_density(psi)) == pytest.approx(1.0)


def test_expectation_rejects_non_hermitian():
    a, _ = qcore.ladder_ops(2)
    sx = qcore.qubit_ops()[0]
    with pytest.raises(ValueError):
        qcore.expectation(qcore.tensor(sx, a), qcore.basis_state(0, 0, 2))


def test_expectation_dimension_mismatch():
    with pytest.raises(qcore.DimensionError):
        qcore.expectation(np.eye(4), qcore.basis_state(0, 0, 2))


def test_check_normalized_and_density():
    psi = qcore.basis_state(0, 0, 1)
    qcore.check_normalized(psi)
    with pytest.raises(qcore.StateError):
        qcore.check_normalized(2 * psi)
    rho = qcore.pure_density(psi)
    qcore.check_density_matrix(rho)
    with pytest.raises(qcore.StateError):
        qcore.check_density_matrix(2 * rho)
    bad = rho.copy()
    bad[0, 1] = 0.5j
    with pytest.raises(qcore.StateError):
        qcore.check_density_matrix(bad)


def test_random_pure_density_is_valid():
    rng = np.random.default_rng(7)
    for _ in range(20):
        raw = rng.normal(size=8) + 1j * rng.normal(size=8)
        psi = raw / np.linalg.norm(raw)
        rho = qcore.pure_density(psi)
        qcore.check_density_matrix(rho)
        assert np.trace(rho @ rho).real == pytest.approx(1.0)
