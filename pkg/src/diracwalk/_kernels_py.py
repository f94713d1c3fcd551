"""Pure numpy walk kernels; same API and operation order as ``_kernels.pyx``."""
import numpy as np

NAME = "python"


def coin(vals, mat):
    vals = np.asarray(vals, dtype=np.complex128)
    mat = np.asarray(mat, dtype=np.complex128)
    d = vals.shape[-1]
    out = np.empty_like(vals)
    for c in range(d):
        acc = mat[c, 0] * vals[..., 0]
        for e in range(1, d):
            acc = acc + mat[c, e] * vals[..., e]
        out[..., c] = acc
    return out


def shift(vals, disps):
    vals = np.asarray(vals, dtype=np.complex128)
    out = np.empty_like(vals)
    for c, disp in enumerate(disps):
        out[..., c] = np.roll(vals[..., c], int(disp), axis=1)
    return out


def shift_coin(vals, disps, mat):
    return coin(shift(vals, disps), mat)
