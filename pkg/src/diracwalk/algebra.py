"""Small dense complex matrices: Pauli matrices, Dirac alpha sets, exponentials.

Matrices are plain ``numpy`` complex arrays. Basis convention for two-level
spaces: index 0 is the ``+1`` eigenvector of sigma^3, index 1 the ``-1`` one.
Tensor products use ``|r, l> = |r> (x) |l>`` with ``r`` the major index.
"""
from __future__ import annotations

import numpy as np

from .errors import ContractViolation, UnsupportedDimension

HERMITIAN_TOL = 1e-14
UNITARY_TOL = 1e-12

_PAULI = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
# phase gate composed with Hadamard; conjugates sigma^3 into sigma^2
F_GATE = np.array([[1, 1], [1j, -1j]], dtype=complex) / np.sqrt(2)


def pauli(mu: int) -> np.ndarray:
    """Return sigma^mu (sigma^0 is the identity)."""
    if not isinstance(mu, (int, np.integer)) or not 0 <= mu <= 3:
        raise ValueError(f"Pauli index must be in 0..3, got {mu!r}")
    return _PAULI[mu].copy()


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ContractViolation("kron expects square matrices")
    return np.kron(a, b)


def spinor_dim(n: int) -> int:
    if n in (1, 2):
        return 2
    if n == 3:
        return 4
    raise UnsupportedDimension(f"spatial dimension must be 1, 2 or 3, got {n!r}")


def alpha_set(n: int) -> list[np.ndarray]:
    """Return ``[alpha^0, alpha^1, ..., alpha^n]`` for D = m alpha^0 - i sum_j alpha^j d_j.

    n=1 uses (sigma^1, sigma^3) so that the shift is diagonal in the
    computational basis. n=3 carries the minus sign on the spatial matrices,
    ``alpha^j = -sigma^3 (x) sigma^j``.
    """
    s0, s1, s2, s3 = _PAULI
    if n == 1:
        mats = [s1, s3]
    elif n == 2:
        mats = [s2, s1, s3]
    elif n == 3:
        mats = [np.kron(s2, s0)] + [-np.kron(s3, s) for s in (s1, s2, s3)]
    else:
        raise UnsupportedDimension(f"spatial dimension must be 1, 2 or 3, got {n!r}")
    return [m.copy() for m in mats]


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return bool(np.all(np.abs(a - dagger(a)) <= tol))


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.all(np.abs(u @ dagger(u) - np.eye(u.shape[0])) <= tol))


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def exp_hermitian(a: np.ndarray, t: float) -> np.ndarray:
    """Return ``exp(-i t A)`` for hermitian ``A``.

    When ``A^2 = c Id`` with ``c > 0`` the closed form
    ``cos(sqrt(c) t) Id - i sin(sqrt(c) t) A / sqrt(c)`` is used, otherwise an
    eigendecomposition.
    """
    a = np.asarray(a, dtype=complex)
    if not is_hermitian(a):
        raise ContractViolation("exp_hermitian requires a hermitian matrix")
    d = a.shape[0]
    ident = np.eye(d, dtype=complex)
    sq = a @ a
    c = sq[0, 0].real
    if np.allclose(sq, c * ident, rtol=0.0, atol=1e-15 * max(1.0, abs(c))):
        if c <= 0.0:
            return ident - 1j * t * a
        root = np.sqrt(c)
        return np.cos(root * t) * ident - 1j * (np.sin(root * t) / root) * a
    w, v = np.linalg.eigh(a)
    return (v * np.exp(-1j * t * w)) @ dagger(v)


def operator_norm(a: np.ndarray) -> float:
    """Spectral norm (largest singular value); batched over leading axes."""
    return np.linalg.norm(a, ord=2, axis=(-2, -1))
