"""Momentum-space side: unitary lattice Fourier transform and Dirac symbols.

Transform convention: ``b(k) = N^(-n/2) sum_x a(x) exp(-i k.x)``, so that the
translated field ``a(x + eps)`` has coefficients ``exp(+i k eps) b(k)``.
Momenta are laid out in FFT order through :meth:`GridSpec.momenta`.

All symbol functions accept a single momentum vector of shape ``(n,)`` or a
batch of shape ``(..., n)`` and return matrices of shape ``(..., d, d)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from ._config import max_threads
from .algebra import alpha_set, spinor_dim
from .errors import ContractViolation
from .fields import GridSpec, LatticeField


@dataclass(frozen=True, eq=False)
class SpectralField:
    grid: GridSpec
    coefficients: np.ndarray = field(repr=False)

    @property
    def spinor_dim(self) -> int:
        return self.coefficients.shape[-1]


def _axes(grid: GridSpec) -> tuple[int, ...]:
    return tuple(range(grid.n))


def forward_transform(a: LatticeField) -> SpectralField:
    coeffs = scipy.fft.fftn(a.values, axes=_axes(a.grid), norm="ortho", workers=max_threads())
    return SpectralField(a.grid, coeffs)


def inverse_transform(b: SpectralField) -> LatticeField:
    vals = scipy.fft.ifftn(b.coefficients, axes=_axes(b.grid), norm="ortho", workers=max_threads())
    return LatticeField._wrap(b.grid, np.ascontiguousarray(vals))


def _momentum(k, n: int) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if k.ndim == 0:
        k = k[None]
    if k.shape[-1] != n:
        raise ValueError(f"momentum must have {n} components, got shape {k.shape}")
    return k


def gamma(k, m: float) -> np.ndarray | float:
    """``sqrt(m^2 + |k|^2)``; the eigenvalues of the Dirac symbol are +-gamma."""
    k = np.asarray(k, dtype=float)
    if k.ndim == 0:
        k = k[None]
    g = np.sqrt(m * m + np.sum(k * k, axis=-1))
    return float(g) if np.ndim(g) == 0 else g


def a_symbols(k, m: float, n: int) -> list[np.ndarray]:
    """Split generators ``[m alpha^0, k_1 alpha^1, ..., k_n alpha^n]``."""
    alphas = alpha_set(n)
    k = _momentum(k, n)
    out = [np.broadcast_to(m * alphas[0], k.shape[:-1] + alphas[0].shape).copy()]
    for j in range(n):
        out.append(k[..., j, None, None] * alphas[j + 1])
    return out


def dirac_symbol(k, m: float, n: int) -> np.ndarray:
    return sum(a_symbols(k, m, n))


def _involutory_exp(coef: np.ndarray, alpha: np.ndarray, t: float) -> np.ndarray:
    # exp(-i t c alpha) with alpha^2 = Id
    theta = t * np.asarray(coef)[..., None, None]
    ident = np.eye(alpha.shape[0])
    return np.cos(theta) * ident - 1j * np.sin(theta) * alpha


def walk_symbol(k, m: float, n: int, eps: float) -> np.ndarray:
    """``prod_mu exp(-i eps A_mu)`` in the order mu = 0, 1, ..., n (left to right)."""
    alphas = alpha_set(n)
    k = _momentum(k, n)
    out = _involutory_exp(np.full(k.shape[:-1], m), alphas[0], eps)
    for j in range(n):
        out = out @ _involutory_exp(k[..., j], alphas[j + 1], eps)
    return out


def exact_symbol(k, m: float, n: int, t: float) -> np.ndarray:
    """``exp(-i t D(k)) = cos(gamma t) Id - i sin(gamma t) D(k) / gamma`` (Id at gamma = 0)."""
    k = _momentum(k, n)
    g = np.asarray(gamma(k, m))[..., None, None]
    d = dirac_symbol(k, m, n)
    safe = np.where(g > 0, g, 1.0)
    sinc_t = np.where(g > 0, np.sin(g * t) / safe, t)
    return np.cos(g * t) * np.eye(d.shape[-1]) - 1j * sinc_t * d


def apply_symbol(a: LatticeField, symbol: np.ndarray) -> LatticeField:
    """Multiply every Fourier mode by its matrix; ``symbol`` has shape ``grid.shape + (d, d)``."""
    if symbol.shape != a.grid.shape + (a.spinor_dim, a.spinor_dim):
        raise ContractViolation(f"symbol shape {symbol.shape} does not match field")
    coeffs = forward_transform(a).coefficients
    mixed = np.einsum("...ij,...j->...i", symbol, coeffs)
    return inverse_transform(SpectralField(a.grid, mixed))


def _check_dirac_field(a: LatticeField) -> int:
    n = a.grid.n
    if a.spinor_dim != spinor_dim(n):
        raise ContractViolation(f"n={n} Dirac fields have d={spinor_dim(n)}, got {a.spinor_dim}")
    return n


def exact_evolve(a: LatticeField, t: float, m: float) -> LatticeField:
    """Exact Dirac evolution ``exp(-i t D)`` applied spectrally."""
    n = _check_dirac_field(a)
    return apply_symbol(a, exact_symbol(a.grid.momenta(), m, n, t))


def evolve_with_hamiltonian(a: LatticeField, t: float, hamiltonian) -> LatticeField:
    """Exact evolution under a general hermitian symbol ``hamiltonian(k) -> (..., d, d)``.

    Uses a batched eigendecomposition per mode.
    """
    h = hamiltonian(a.grid.momenta())
    w, v = np.linalg.eigh(h)
    propagator = (v * np.exp(-1j * t * w)[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))
    return apply_symbol(a, propagator)
