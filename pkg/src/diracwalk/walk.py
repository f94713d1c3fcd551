"""Position-space quantum walks built from coins and spin-conditional shifts.

A :class:`WalkOperator` is an ordered product of factors written as in an
operator product: the *last* factor acts first. A :class:`ShiftFactor` moves
spinor component ``c`` by ``displacements[c]`` sites of spacing ``eps / q``
along ``axis`` (``psi'(x) = psi(x - disp * eps / q)``), which multiplies mode
``k`` by ``exp(-i k disp eps / q)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .algebra import (
    F_GATE,
    HADAMARD,
    alpha_set,
    dagger,
    exp_hermitian,
    is_hermitian,
    is_unitary,
    pauli,
)
from .backend import kernels as _default_kernels
from .errors import ContractViolation, UnsupportedDimension
from .fields import LatticeField

ALIGN_TOL = 1e-9
RATIONAL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CoinFactor:
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ContractViolation("coin must be a square matrix")
        if not is_unitary(mat):
            raise ContractViolation("coin matrix is not unitary to 1e-12")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    def symbol(self, k: np.ndarray, eps: float) -> np.ndarray:
        return np.broadcast_to(self.matrix, k.shape[:-1] + self.matrix.shape)

    def adjoint(self) -> "CoinFactor":
        return CoinFactor(dagger(self.matrix))

    def to_dict(self) -> dict:
        return {
            "type": "coin",
            "matrix": np.stack([self.matrix.real, self.matrix.imag], axis=-1).tolist(),
        }


@dataclass(frozen=True)
class ShiftFactor:
    axis: int
    displacements: tuple[int, ...]
    substeps: int = 1

    def __post_init__(self):
        disp = tuple(int(v) for v in self.displacements)
        if any(v != w for v, w in zip(disp, self.displacements)):
            raise ContractViolation("shift displacements must be integers")
        if int(self.substeps) != self.substeps or self.substeps < 1:
            raise ContractViolation(f"substep count must be a positive integer, got {self.substeps!r}")
        object.__setattr__(self, "displacements", disp)

    def symbol(self, k: np.ndarray, eps: float) -> np.ndarray:
        h = eps / self.substeps
        phases = np.exp(-1j * k[..., self.axis, None] * h * np.asarray(self.displacements))
        out = np.zeros(phases.shape + (len(self.displacements),), dtype=complex)
        idx = np.arange(len(self.displacements))
        out[..., idx, idx] = phases
        return out

    def adjoint(self) -> "ShiftFactor":
        return ShiftFactor(self.axis, tuple(-v for v in self.displacements), self.substeps)

    def to_dict(self) -> dict:
        return {
            "type": "shift",
            "axis": self.axis,
            "displacements": list(self.displacements),
            "substeps": self.substeps,
        }


Factor = Union[CoinFactor, ShiftFactor]


@dataclass(frozen=True, eq=False)
class WalkOperator:
    n: int
    d: int
    eps: float
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        for f in self.factors:
            if isinstance(f, CoinFactor):
                if f.matrix.shape != (self.d, self.d):
                    raise ContractViolation(f"coin of shape {f.matrix.shape} in a d={self.d} walk")
            elif isinstance(f, ShiftFactor):
                if len(f.displacements) != self.d or not 0 <= f.axis < self.n:
                    raise ContractViolation(f"shift {f} incompatible with n={self.n}, d={self.d}")
            else:
                raise ContractViolation(f"unknown factor {f!r}")

    def symbol(self, k) -> np.ndarray:
        """Momentum-space matrix of the whole walk; ``k`` has shape ``(..., n)``."""
        k = np.asarray(k, dtype=float)
        out = np.broadcast_to(np.eye(self.d, dtype=complex), k.shape[:-1] + (self.d, self.d))
        for f in self.factors:
            out = out @ f.symbol(k, self.eps)
        return out

    def adjoint(self) -> "WalkOperator":
        return WalkOperator(self.n, self.d, self.eps, [f.adjoint() for f in reversed(self.factors)])

    def reach(self, spacing: float) -> int:
        """Largest L1 distance, in sites of ``spacing``, that one step can move amplitude."""
        return sum(
            max(abs(v) for v in f.displacements) * _site_multiple(self, f, spacing)
            for f in self.factors
            if isinstance(f, ShiftFactor)
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "eps": self.eps,
            "factors": [f.to_dict() for f in self.factors],
        }


# --- construction ------------------------------------------------------------


def build_dirac_walk(n: int, m: float, eps: float) -> WalkOperator:
    """Dirac quantum walk for ``n`` spatial dimensions.

    n=1: ``C T_1``; n=2: ``C H T_1 H T_2``;
    n=3: ``C (Id x H) T_1 (Id x HF) T_2 (Id x F^dag) T_3``,
    with ``C = exp(-i eps m alpha^0)``.
    """
    if n not in (1, 2, 3):
        raise UnsupportedDimension(f"spatial dimension must be 1, 2 or 3, got {n!r}")
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    if m < 0:
        raise ValueError(f"mass must be >= 0, got {m!r}")
    coin = CoinFactor(exp_hermitian(m * alpha_set(n)[0], eps))
    if n == 1:
        return WalkOperator(1, 2, eps, [coin, ShiftFactor(0, (1, -1))])
    if n == 2:
        return WalkOperator(2, 2, eps, [
            coin,
            CoinFactor(HADAMARD), ShiftFactor(0, (1, -1)),
            CoinFactor(HADAMARD), ShiftFactor(1, (1, -1)),
        ])
    ident = pauli(0)
    # component (r, l) moves by -r*l sites
    disp = (-1, 1, 1, -1)
    return WalkOperator(3, 4, eps, [
        coin,
        CoinFactor(np.kron(ident, HADAMARD)), ShiftFactor(0, disp),
        CoinFactor(np.kron(ident, HADAMARD @ F_GATE)), ShiftFactor(1, disp),
        CoinFactor(np.kron(ident, dagger(F_GATE))), ShiftFactor(2, disp),
    ])


def build_general_walk(beta0, betas, eps: float, q: int = 1, numerators=None, n: int | None = None) -> WalkOperator:
    """Walk for ``i d_0 psi = (beta0 - i sum_j beta_j d_j) psi`` with rational ``beta_j`` spectra.

    ``numerators[j]`` lists the integers ``lambda`` with eigenvalues of
    ``betas[j]`` equal to ``lambda / q``. The walk is
    ``C prod_j U_j T_j U_j^dag`` with ``C = exp(-i eps beta0)`` and ``T_j``
    shifting the ``r``-th eigen-component by ``lambda_r`` sites of spacing
    ``eps / q``, so it runs on a lattice of spacing ``eps / q`` while one
    application advances time by ``eps``.

    With no ``betas`` the walk is the coin alone; pass ``n`` for the lattice
    dimension in that case.
    """
    beta0 = np.asarray(beta0, dtype=complex)
    if not is_hermitian(beta0):
        raise ContractViolation("beta0 must be hermitian")
    if int(q) != q or q < 1:
        raise ValueError(f"denominator q must be a positive integer, got {q!r}")
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    betas = [np.asarray(b, dtype=complex) for b in betas]
    d = beta0.shape[0]
    if betas:
        if n is not None and n != len(betas):
            raise ContractViolation(f"n={n} but {len(betas)} spatial matrices given")
        n = len(betas)
    elif n is None:
        raise ValueError("n is required when no spatial matrices are given")
    if numerators is None and not betas:
        numerators = []
    if numerators is None or len(numerators) != len(betas):
        raise ValueError("one list of integer eigenvalue numerators per spatial matrix is required")

    factors: list[Factor] = [CoinFactor(exp_hermitian(beta0, eps))]
    for j, (beta, lam) in enumerate(zip(betas, numerators)):
        if beta.shape != (d, d) or not is_hermitian(beta):
            raise ContractViolation(f"beta_{j + 1} must be a hermitian {d}x{d} matrix")
        lam = np.asarray(lam)
        if lam.shape != (d,) or np.any(lam != np.round(lam)):
            raise ValueError(f"numerators for beta_{j + 1} must be {d} integers")
        lam = np.sort(lam.astype(np.int64))
        w, u = np.linalg.eigh(beta)
        mismatch = np.max(np.abs(w - lam / q))
        if mismatch > RATIONAL_TOL:
            raise ValueError(
                f"eigenvalues {w.tolist()} of beta_{j + 1} differ from {lam.tolist()}/{q} by {mismatch:.3g}"
            )
        factors += [CoinFactor(u), ShiftFactor(j, tuple(lam.tolist()), int(q)), CoinFactor(dagger(u))]
    return WalkOperator(n, d, eps, factors)


def build_product_walk(walks) -> WalkOperator:
    """Product ``W_1 W_2 ... W_r`` (``W_r`` acts first)."""
    walks = list(walks)
    if not walks:
        raise ContractViolation("product of zero walks")
    first = walks[0]
    for w in walks[1:]:
        if (w.n, w.d) != (first.n, first.d) or not np.isclose(w.eps, first.eps, rtol=1e-12, atol=0):
            raise ContractViolation(
                f"cannot multiply walks with (n, d, eps) {(first.n, first.d, first.eps)} and {(w.n, w.d, w.eps)}"
            )
    return WalkOperator(first.n, first.d, first.eps, [f for w in walks for f in w.factors])


# --- application -------------------------------------------------------------


def _site_multiple(w: WalkOperator, f: ShiftFactor, spacing: float) -> int:
    ratio = w.eps / (f.substeps * spacing)
    r = int(round(ratio))
    if r < 1 or abs(ratio - r) > ALIGN_TOL * max(ratio, 1.0):
        raise ContractViolation(
            f"grid spacing {spacing:g} is not aligned with shift substep {w.eps / f.substeps:g}"
        )
    return r


def _compile(w: WalkOperator, a: LatticeField) -> list[tuple]:
    """Fuse the factor list into kernel passes in acting order.

    Each pass is ``(axis, disps, matrix)``: an optional shift (``axis`` None
    for none) followed by an optional coin (``matrix`` None for none).
    Adjacent coins are multiplied together; exact identities are dropped.
    """
    if a.grid.n != w.n or a.spinor_dim != w.d:
        raise ContractViolation(
            f"walk (n={w.n}, d={w.d}) applied to field (n={a.grid.n}, d={a.spinor_dim})"
        )
    passes: list[list] = []
    for f in reversed(w.factors):
        if isinstance(f, ShiftFactor):
            mult = _site_multiple(w, f, a.grid.spacing)
            passes.append([f.axis, np.asarray(f.displacements, dtype=np.int64) * mult, None])
        else:
            mat = f.matrix
            if passes:
                prev = passes[-1][2]
                passes[-1][2] = mat if prev is None else mat @ prev
            else:
                passes.append([None, None, mat])
    ident = np.eye(w.d)
    out = []
    for axis, disps, mat in passes:
        if mat is not None and np.array_equal(mat, ident):
            mat = None
        if axis is not None and not np.any(disps):
            axis = None
        if axis is None and mat is None:
            continue
        out.append((axis, disps, mat))
    return out


def _run(passes, values: np.ndarray, kernels) -> np.ndarray:
    shape = values.shape
    d = shape[-1]
    for axis, disps, mat in passes:
        if axis is None:
            values = kernels.coin(values, mat)
            continue
        lead = int(np.prod(shape[:axis], dtype=np.int64))
        trail = int(np.prod(shape[axis + 1:-1], dtype=np.int64))
        view = values.reshape(lead, shape[axis], trail, d)
        if mat is None:
            values = kernels.shift(view, disps).reshape(shape)
        else:
            values = kernels.shift_coin(view, disps, mat).reshape(shape)
    return values


def apply_walk(w: WalkOperator, a: LatticeField, kernels=None) -> LatticeField:
    """One application of ``w``; the rightmost factor acts first."""
    return apply_walk_steps(w, a, 1, kernels=kernels)


def apply_walk_steps(w: WalkOperator, a: LatticeField, steps: int, kernels=None) -> LatticeField:
    if int(steps) != steps or steps < 0:
        raise ValueError(f"step count must be a non-negative integer, got {steps!r}")
    kernels = kernels or _default_kernels
    passes = _compile(w, a)
    values = np.ascontiguousarray(a.values)
    if steps == 0 or not passes:
        return a
    for _ in range(int(steps)):
        values = _run(passes, values, kernels)
    return LatticeField._wrap(a.grid, values)
