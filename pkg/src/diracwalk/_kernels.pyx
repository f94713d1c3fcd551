# cython: language_level=3, boundscheck=False, cdivision=True, initializedcheck=False
"""Compiled walk kernels.

Fields are passed as C-contiguous complex arrays of shape ``(A, N, B, d)``:
``N`` is the axis being shifted, ``A``/``B`` the flattened axes before/after
it, ``d`` the spinor index. Arithmetic is spelled out on (re, im) pairs; it
matches the numpy fallback to rounding (numpy may fuse multiply-adds).
"""
cimport cython
import numpy as np

NAME = "cython"


def coin(vals, mat):
    """``out[..., c] = sum_e mat[c, e] * vals[..., e]``."""
    vals = np.ascontiguousarray(vals, dtype=np.complex128)
    mat = np.ascontiguousarray(mat, dtype=np.complex128)
    shape = vals.shape
    d = shape[-1]
    flat = vals.reshape(-1, d)
    out = np.empty_like(flat)
    _coin(flat.view(np.float64), mat.view(np.float64), out.view(np.float64))
    return out.reshape(shape)


@cython.wraparound(False)
def _coin(const double[:, ::1] v, const double[:, ::1] m, double[:, ::1] o):
    cdef Py_ssize_t s, c, e, S = v.shape[0], d = m.shape[0]
    cdef double re, im, mr, mi, vr, vi
    with nogil:
        for s in range(S):
            for c in range(d):
                mr = m[c, 0]
                mi = m[c, 1]
                vr = v[s, 0]
                vi = v[s, 1]
                re = mr * vr - mi * vi
                im = mr * vi + mi * vr
                for e in range(1, d):
                    mr = m[c, 2 * e]
                    mi = m[c, 2 * e + 1]
                    vr = v[s, 2 * e]
                    vi = v[s, 2 * e + 1]
                    re = re + (mr * vr - mi * vi)
                    im = im + (mr * vi + mi * vr)
                o[s, 2 * c] = re
                o[s, 2 * c + 1] = im


def shift(vals, disps):
    """Cyclic shift of spinor component ``c`` by ``disps[c]`` sites along axis 1."""
    vals = np.ascontiguousarray(vals, dtype=np.complex128)
    out = np.empty_like(vals)
    _shift(vals.view(np.float64), np.ascontiguousarray(disps, dtype=np.int64), out.view(np.float64))
    return out


@cython.wraparound(False)
def _shift(const double[:, :, :, ::1] v, const long long[::1] disps, double[:, :, :, ::1] o):
    cdef Py_ssize_t A = v.shape[0], N = v.shape[1], B = v.shape[2], d = disps.shape[0]
    cdef Py_ssize_t a, x, b, c, src
    with nogil:
        for a in range(A):
            for x in range(N):
                for b in range(B):
                    for c in range(d):
                        src = (x - disps[c]) % N
                        if src < 0:
                            src = src + N
                        o[a, x, b, 2 * c] = v[a, src, b, 2 * c]
                        o[a, x, b, 2 * c + 1] = v[a, src, b, 2 * c + 1]


def shift_coin(vals, disps, mat):
    """Shift (as in :func:`shift`) followed by :func:`coin`, in one pass."""
    vals = np.ascontiguousarray(vals, dtype=np.complex128)
    mat = np.ascontiguousarray(mat, dtype=np.complex128)
    if vals.shape[-1] > 32:
        return coin(shift(vals, disps), mat)
    out = np.empty_like(vals)
    _shift_coin(vals.view(np.float64), np.ascontiguousarray(disps, dtype=np.int64),
                mat.view(np.float64), out.view(np.float64))
    return out


@cython.wraparound(False)
def _shift_coin(const double[:, :, :, ::1] v, const long long[::1] disps,
                const double[:, ::1] m, double[:, :, :, ::1] o):
    cdef Py_ssize_t A = v.shape[0], N = v.shape[1], B = v.shape[2], d = disps.shape[0]
    cdef Py_ssize_t a, x, b, c, e, src
    cdef double buf[64]
    cdef double re, im, mr, mi, vr, vi
    with nogil:
        for a in range(A):
            for x in range(N):
                for b in range(B):
                    for e in range(d):
                        src = (x - disps[e]) % N
                        if src < 0:
                            src = src + N
                        buf[2 * e] = v[a, src, b, 2 * e]
                        buf[2 * e + 1] = v[a, src, b, 2 * e + 1]
                    for c in range(d):
                        mr = m[c, 0]
                        mi = m[c, 1]
                        re = mr * buf[0] - mi * buf[1]
                        im = mr * buf[1] + mi * buf[0]
                        for e in range(1, d):
                            mr = m[c, 2 * e]
                            mi = m[c, 2 * e + 1]
                            vr = buf[2 * e]
                            vi = buf[2 * e + 1]
                            re = re + (mr * vr - mi * vi)
                            im = im + (mr * vi + mi * vr)
                        o[a, x, b, 2 * c] = re
                        o[a, x, b, 2 * c + 1] = im
