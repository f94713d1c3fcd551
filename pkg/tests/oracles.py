"""Independent reference computations shared by the test modules."""
import math

import numpy as np


def power_series_exp(a, t, terms=40):
    """``exp(-i t a)`` from its Taylor series, with scaling and squaring."""
    x = -1j * t * np.asarray(a, dtype=complex)
    size = np.abs(x).sum(axis=-1).max()
    k = max(0, int(math.ceil(math.log2(max(size, 1.0)))) + 1)
    x = x / 2**k
    out = np.eye(x.shape[-1], dtype=complex)
    term = np.eye(x.shape[-1], dtype=complex)
    for j in range(1, terms):
        term = term @ x / j
        out = out + term
    for _ in range(k):
        out = out @ out
    return out


def eig_exp(h, t):
    """``exp(-i t h)`` for hermitian ``h`` through a dense eigendecomposition."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * t * w)[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))
