"""Low-pass filtering, sampling and band-limited reconstruction between nested grids.

The "continuum" is a fine grid of ``r * N`` points per axis; the walk lattice is
the coarse grid of ``N`` points with the same period. Coarse-grid Fourier
modes ``-N/2 .. N/2 - 1`` form the retained band (the ``-N/2`` Nyquist mode is
kept, ``+N/2`` is not, matching the FFT layout).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, DegenerateInput
from .fields import GridSpec, LatticeField, l2_norm, sobolev_norm
from .spectral import SpectralField, forward_transform, inverse_transform

LOW_PASS_CONSTANT = 1.0 / math.pi**2
RESAMPLE_TOL = 1e-13


@dataclass(frozen=True)
class DiscretizedState:
    field: LatticeField
    renorm_factor: float

    def __post_init__(self):
        if not self.renorm_factor > 0:
            raise ContractViolation(f"renormalization factor must be positive, got {self.renorm_factor}")


def _coarse_grid(fine: GridSpec, target_N: int) -> tuple[GridSpec, int]:
    if int(target_N) != target_N or target_N < 2 or target_N % 2:
        raise ValueError(f"target_N must be a positive even integer, got {target_N!r}")
    if fine.N % target_N:
        raise ValueError(f"target_N={target_N} does not divide the fine grid's N={fine.N}")
    return GridSpec.from_period(fine.n, int(target_N), fine.period), fine.N // int(target_N)


def _band_index(N_big: int, N_small: int) -> np.ndarray:
    """Positions in an ``N_big`` FFT layout of the modes of an ``N_small`` layout."""
    modes = np.fft.fftfreq(N_small, d=1.0 / N_small).round().astype(np.int64)
    return np.mod(modes, N_big)


def _block(coeffs: np.ndarray, n: int, N_big: int, N_small: int) -> np.ndarray:
    idx = _band_index(N_big, N_small)
    return coeffs[np.ix_(*([idx] * n))]


def _pad(block: np.ndarray, n: int, N_small: int, N_big: int) -> np.ndarray:
    out = np.zeros((N_big,) * n + block.shape[n:], dtype=complex)
    idx = _band_index(N_big, N_small)
    out[np.ix_(*([idx] * n))] = block
    return out


def _keep_mask(n: int, N_big: int, N_small: int) -> np.ndarray:
    keep = np.zeros(N_big, dtype=bool)
    keep[_band_index(N_big, N_small)] = True
    mask = keep
    for _ in range(n - 1):
        mask = np.multiply.outer(mask, keep)
    return mask


def band_mask(grid: GridSpec, target_N: int) -> np.ndarray:
    """Boolean mask over ``grid``'s modes that survive the low-pass to ``target_N``."""
    _coarse_grid(grid, target_N)
    return _keep_mask(grid.n, grid.N, target_N)


def low_pass(a: LatticeField, target_N: int) -> LatticeField:
    """Zero every Fourier mode outside the band of the ``target_N`` grid."""
    mask = band_mask(a.grid, target_N)
    coeffs = forward_transform(a).coefficients * mask[..., None]
    return inverse_transform(SpectralField(a.grid, coeffs))


def discretize(a: LatticeField, target_N: int) -> DiscretizedState:
    """Low-pass, sample on the coarse grid and renormalize to unit norm."""
    coarse, r = _coarse_grid(a.grid, target_N)
    n = a.grid.n
    block = _block(forward_transform(a).coefficients, n, a.grid.N, coarse.N)
    # coarse unitary DFT of the samples of phi_LP is r^(-n/2) times the block
    samples = inverse_transform(SpectralField(coarse, block * r ** (-n / 2)))
    norm = l2_norm(samples)
    total = l2_norm(a)
    h2 = sobolev_norm(a, 2, 0.0)
    threshold = math.sqrt(total / (LOW_PASS_CONSTANT * h2)) if h2 > 0 else float("inf")
    guarantee = f"non-degeneracy is guaranteed for eps < sqrt(|phi|_2 / (C' |phi|_H2)) = {threshold:.4g}"
    if norm <= 1e-12 * total or norm == 0.0:
        raise DegenerateInput(
            f"low-passed state has vanishing norm {norm:.3g}; {guarantee}, got eps = {coarse.spacing:.4g}"
        )
    if coarse.spacing >= threshold:
        warnings.warn(f"eps = {coarse.spacing:.4g} outside the guaranteed range: {guarantee}", stacklevel=2)
    return DiscretizedState(samples * (1.0 / norm), norm)


def reconstruct(s: DiscretizedState, fine_r: int) -> LatticeField:
    """Undo the renormalization and interpolate onto a grid ``fine_r`` times finer.

    Equivalent to Shannon (periodic sinc) interpolation; the result has no
    spectral content outside the coarse band.
    """
    if int(fine_r) != fine_r or fine_r < 1:
        raise ValueError(f"fine_r must be a positive integer, got {fine_r!r}")
    coarse = s.field.grid
    fine = coarse.refined(int(fine_r))
    n = coarse.n
    coeffs = forward_transform(s.field).coefficients * s.renorm_factor
    padded = _pad(coeffs * fine_r ** (n / 2), n, coarse.N, fine.N)
    return inverse_transform(SpectralField(fine, padded))


def resample(a: LatticeField, N: int) -> LatticeField:
    """Spectral resampling of a band-limited field onto ``N`` points per axis, same period.

    Refinement is exact. Coarsening is allowed only when the discarded modes
    hold a negligible fraction (<= 1e-13 relative) of the norm.
    """
    if N == a.grid.N:
        return a
    target = GridSpec.from_period(a.grid.n, N, a.grid.period)
    n = a.grid.n
    coeffs = forward_transform(a).coefficients
    if N > a.grid.N:
        new = _pad(coeffs, n, a.grid.N, N) * (N / a.grid.N) ** (n / 2)
    else:
        kept = _block(coeffs, n, a.grid.N, N)
        power = np.sum(np.abs(coeffs) ** 2, axis=-1)
        lost = math.sqrt(np.sum(power[~_keep_mask(n, a.grid.N, N)]))
        total = math.sqrt(np.sum(power))
        if lost > RESAMPLE_TOL * total:
            raise ContractViolation(
                f"field is not band-limited to N={N}: discarded relative norm {lost / total:.3g}"
            )
        new = kept * (N / a.grid.N) ** (n / 2)
    return inverse_transform(SpectralField(target, new))
