"""Dense operators and states for a qubit coupled to a truncated bosonic mode.

Basis ordering is qubit-major: index = q*(n_max+1) + n with q=0 the qubit
ground state |g> and q=1 the excited state |e>.  The ground state is the
sigma_z = -1 eigenstate, so +omega_q/2 * sigma_z puts |e> higher in energy.
"""

from __future__ import annotations

import numpy as np

HERMITICITY_TOL = 1e-10
IMAG_RESIDUE_TOL = 1e-9
NORM_TOL = 1e-8
TRACE_TOL = 1e-7
EIG_FLOOR = -1e-8


class DimensionError(ValueError):
    """Operator/state dimensions do not match."""


class StateError(ValueError):
    """A state fails its normalization/positivity checks."""


def ladder_ops(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Annihilation and creation operators on the (n_max+1)-dim Fock space.

    a|n> = sqrt(n)|n-1>; the top row/column is truncated, so [a, a+] equals
    the identity except for the (n_max, n_max) entry.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1 to represent photon creation")
    off = np.sqrt(np.arange(1, n_max + 1))
    a = np.diag(off, k=1).astype(complex)
    return a, a.conj().T


def qubit_ops() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Pauli and ladder operators in the (|g>, |e>) basis.

    Returns (sigma_x, sigma_z, sigma_minus, sigma_plus) with sigma_z|g> = -|g>
    and sigma_plus|g> = |e>.
    """
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sz = np.array([[-1, 0], [0, 1]], dtype=complex)
    sm = np.array([[0, 1], [0, 0]], dtype=complex)
    sp = np.array([[0, 0], [1, 0]], dtype=complex)
    return sx, sz, sm, sp


def tensor(a_qubit: np.ndarray, b_field: np.ndarray) -> np.ndarray:
    """Kronecker product with the qubit slot leftmost (index-major)."""
    a_qubit = np.asarray(a_qubit, dtype=complex)
    b_field = np.asarray(b_field, dtype=complex)
    if a_qubit.shape[0] != a_qubit.shape[1] or b_field.shape[0] != b_field.shape[1]:
        raise DimensionError("tensor factors must be square")
    if a_qubit.shape[0] != 2:
        raise DimensionError(f"qubit factor must be 2x2, got {a_qubit.shape}")
    return np.kron(a_qubit, b_field)


def basis_state(q: int, n: int, n_max: int) -> np.ndarray:
    """Normalized product basis vector |q, n> (q=0 ground, q=1 excited)."""
    if q not in (0, 1):
        raise ValueError("qubit index must be 0 (g) or 1 (e)")
    if not 0 <= n <= n_max:
        raise ValueError(f"photon number {n} outside truncation 0..{n_max}")
    dim = 2 * (n_max + 1)
    psi = np.zeros(dim, dtype=complex)
    psi[q * (n_max + 1) + n] = 1.0
    return psi


def check_normalized(psi: np.ndarray, tol: float = NORM_TOL) -> None:
    dev = abs(np.linalg.norm(psi) - 1.0)
    if dev > tol:
        raise StateError(f"state norm deviates from 1 by {dev:.3e}")


def check_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> None:
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol:
        raise ValueError(f"operator is not Hermitian (max deviation {dev:.3e})")


def check_density_matrix(rho: np.ndarray, trace_tol: float = TRACE_TOL,
                         herm_tol: float = HERMITICITY_TOL,
                         eig_floor: float = EIG_FLOOR) -> None:
    """Validate trace, Hermiticity and positivity of a density matrix."""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError("density matrix must be square")
    tr_dev = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
    if tr_dev > trace_tol:
        raise StateError(f"trace deviates from 1 by {tr_dev:.3e}")
    herm_dev = np.max(np.abs(rho - rho.conj().T))
    if herm_dev > herm_tol:
        raise StateError(f"density matrix not Hermitian (deviation {herm_dev:.3e})")
    min_eig = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if min_eig < eig_floor:
        raise StateError(f"density matrix has negative eigenvalue {min_eig:.3e}")


def pure_density(psi: np.ndarray) -> np.ndarray:
    """|psi><psi| for a normalized pure state."""
    check_normalized(psi)
    return np.outer(psi, psi.conj())


def expectation(a: np.ndarray, state: np.ndarray) -> float:
    """<psi|A|psi> for a vector state or Tr(A rho) for a density matrix.

    A must be Hermitian; an imaginary residue above 1e-9 is an error.
    """
    a = np.asarray(a, dtype=complex)
    check_hermitian(a)
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        if a.shape[0] != state.shape[0]:
            raise DimensionError(
                f"operator dim {a.shape[0]} != state dim {state.shape[0]}")
        val = np.vdot(state, a @ state)
    elif state.ndim == 2:
        if a.shape[0] != state.shape[0]:
            raise DimensionError(
                f"operator dim {a.shape[0]} != state dim {state.shape[0]}")
        val = np.trace(a @ state)
    else:
        raise DimensionError("state must be a vector or a square matrix")
    if abs(val.imag) > IMAG_RESIDUE_TOL:
        raise ValueError(f"expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)
