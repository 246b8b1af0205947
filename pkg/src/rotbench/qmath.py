"""Small complex linear algebra shared by every module.

Everything is a plain ``numpy.ndarray`` with ``complex128`` entries; there are
no wrapper classes. Single-qubit density matrices are 2x2, Choi matrices are
4x4 in the unnormalized (trace d = 2) column-stacking convention
``|v> = sum_i |i> (x) U|i>``, so that the process-fidelity overlap
``Tr[C_U C_E] / 4`` needs no extra normalization.

Qubit 0 is the least significant bit of every basis-state index.
"""

from __future__ import annotations

import numpy as np

ATOL_EXACT = 1e-12   # tolerance for exact algebraic identities
ATOL_PRODUCT = 1e-10  # tolerance for accumulated products

MAX_DIM = 1 << 16  # kron/embedding guard

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=complex)
SDG = np.array([[1, 0], [0, -1j]], dtype=complex)
T = np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex)

PAULIS = {"I": I2, "X": X, "Y": Y, "Z": Z}

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_PLUS_I = np.array([1, 1j], dtype=complex) / np.sqrt(2)

#: named single-qubit preparations used throughout the 12-circuit protocol
STATES = {"0": KET0, "1": KET1, "+": KET_PLUS, "+i": KET_PLUS_I}


def rz(theta: float) -> np.ndarray:
    """z-axis rotation diag(1, e^{i theta}); global phase fixed like T, Z."""
    return np.diag([1.0, np.exp(1j * theta)]).astype(complex)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with a dimension guard (2^16 max)."""
    out_rows = a.shape[0] * b.shape[0]
    out_cols = a.shape[-1] * b.shape[-1] if a.ndim > 1 else 1
    if max(out_rows, out_cols) > MAX_DIM:
        raise ValueError(
            f"kron result dimension {out_rows}x{out_cols} exceeds {MAX_DIM}"
        )
    return np.kron(a, b)


def is_unitary(u: np.ndarray, atol: float = ATOL_EXACT) -> bool:
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    d = u.shape[0]
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(d))) <= atol)


def check_finite(m: np.ndarray) -> None:
    if not np.all(np.isfinite(m.view(float) if m.dtype == complex else m)):
        raise ValueError("matrix has non-finite entries")


def check_density_matrix(rho: np.ndarray, atol: float = ATOL_EXACT) -> None:
    """Hermitian, unit trace. Positivity is deliberately NOT enforced:
    linear-inversion tomography may produce slightly nonphysical matrices."""
    check_finite(rho)
    if rho.shape != (2, 2):
        raise ValueError(f"expected 2x2 density matrix, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise ValueError("density matrix not Hermitian")
    if abs(np.trace(rho) - 1.0) > atol:
        raise ValueError("density matrix trace != 1")


def check_choi(choi: np.ndarray, atol: float = ATOL_PRODUCT,
               trace_preserving: bool = True) -> None:
    check_finite(choi)
    if choi.shape != (4, 4):
        raise ValueError(f"expected 4x4 Choi matrix, got {choi.shape}")
    if np.max(np.abs(choi - choi.conj().T)) > atol:
        raise ValueError("Choi matrix not Hermitian")
    if trace_preserving and abs(np.trace(choi) - 2.0) > atol:
        raise ValueError("Choi matrix trace != 2")


def unitary_choi(u: np.ndarray) -> np.ndarray:
    """Choi matrix |v><v| of a single-qubit unitary, |v> = sum_i |i> (x) U|i>."""
    if u.shape != (2, 2) or not is_unitary(u):
        raise ValueError("unitary_choi needs a 2x2 unitary")
    v = np.kron(KET0, u[:, 0]) + np.kron(KET1, u[:, 1])
    return np.outer(v, v.conj())


def state_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 for normalized pure states; global-phase insensitive."""
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValueError("zero state")
    return float(abs(np.vdot(a, b)) ** 2 / (na * nb) ** 2)


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-ish 2x2 unitary via QR of a Ginibre matrix (test helper)."""
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))
