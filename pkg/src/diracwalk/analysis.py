"""Numerical checks of the walk against its proven error bounds.

Bound constants: one-step consistency ``C = 1 + n/2``; low-pass ``C' = pi^-2``.
Measured errors are compared against the proven bounds with a relative slack
of ``BOUND_SLACK`` to absorb rounding.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import BoundViolation, ContractViolation
from .fields import LatticeField, inner_product, l2_norm, sobolev_norm
from .sampling import LOW_PASS_CONSTANT, discretize, low_pass, reconstruct, resample
from .spectral import exact_evolve
from .walk import apply_walk, apply_walk_steps, build_dirac_walk

BOUND_SLACK = 1e-9
NORMALIZED_TOL = 1e-9
EXACT_TOL = 1e-12
# local order outside 1 +- this marks a row as pre-asymptotic
PREASYMPTOTIC_ORDER_BAND = 0.5


def consistency_constant(n: int) -> float:
    return 1.0 + n / 2.0


def _dimension(phi: LatticeField, n: int | None) -> int:
    if n is not None and n != phi.grid.n:
        raise ContractViolation(f"n={n} but the field lives on a {phi.grid.n}-dimensional grid")
    return phi.grid.n


def _require_normalized(*fields: LatticeField) -> None:
    for f in fields:
        norm = l2_norm(f)
        if abs(norm - 1.0) > NORMALIZED_TOL:
            raise ContractViolation(f"state must be normalized, has norm {norm:.15g}")


def _check_bound(error: float, bound: float, what: str) -> None:
    if error > bound * (1.0 + BOUND_SLACK):
        raise BoundViolation(f"{what}: error {error:.6g} exceeds bound {bound:.6g}")


def consistency_error(
    phi: LatticeField, m: float, n: int | None = None, eps: float | None = None, s: float = 0.0,
    check: bool = True,
) -> tuple[float, float]:
    """One-step error ``|W phi - T(eps) phi|_{H^s}`` and its bound ``eps^2 C |phi|_{H^{s+2}}``.

    ``eps`` defaults to the grid spacing; any other value must be a multiple of it.
    """
    n = _dimension(phi, n)
    _require_normalized(phi)
    eps = phi.grid.spacing if eps is None else eps
    walk = build_dirac_walk(n, m, eps)
    diff = apply_walk(walk, phi) - exact_evolve(phi, eps, m)
    error = sobolev_norm(diff, s, m)
    bound = eps**2 * consistency_constant(n) * sobolev_norm(phi, s + 2, m)
    if check:
        _check_bound(error, bound, f"consistency (n={n}, eps={eps:g}, s={s:g})")
    return error, bound


def stability_check(phi: LatticeField, m: float, eps: float | None = None, s: float = 0.0, steps: int = 1) -> float:
    """``|W^steps phi|_{H^s} / |phi|_{H^s}``; equals one for a unitary translation-invariant walk."""
    before = sobolev_norm(phi, s, m)
    if before == 0.0:
        raise ValueError("stability ratio undefined for the zero field")
    eps = phi.grid.spacing if eps is None else eps
    walk = build_dirac_walk(phi.grid.n, m, eps)
    return sobolev_norm(apply_walk_steps(walk, phi, steps), s, m) / before


def fit_order(points) -> float:
    """Least-squares slope of ``log(error)`` against ``log(eps)``."""
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] != 2:
        raise ValueError("need at least two (eps, error) points")
    if np.any(pts <= 0):
        raise ValueError("order fit needs positive eps and error values; exact cases have no order")
    slope, _ = np.polyfit(np.log(pts[:, 0]), np.log(pts[:, 1]), 1)
    return float(slope)


@dataclass
class ConvergenceRow:
    l: int
    eps: float
    error: float
    bound: float
    preasymptotic: bool = False

    @property
    def ratio(self) -> float:
        return self.error / self.bound if self.bound > 0 else float("nan")


@dataclass
class ConvergenceReport:
    n: int
    m: float
    x0: float
    s: float
    period: float
    rows: list[ConvergenceRow]
    fitted_order: float | None
    C: float
    C_prime: float = LOW_PASS_CONSTANT
    nonmonotone: list[int] = field(default_factory=list)

    @property
    def within_bounds(self) -> bool:
        return all(r.error <= r.bound * (1.0 + BOUND_SLACK) for r in self.rows)

    @property
    def max_ratio(self) -> float:
        return max(r.ratio for r in self.rows)

    def to_dict(self) -> dict:
        out = asdict(self)
        for row, raw in zip(self.rows, out["rows"]):
            raw["ratio"] = row.ratio
        out["within_bounds"] = self.within_bounds
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self, comments=()) -> str:
        buf = io.StringIO()
        for line in comments:
            buf.write(f"# {line}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["l", "eps", "error", "bound", "ratio"])
        for r in self.rows:
            writer.writerow([r.l, repr(r.eps), repr(r.error), repr(r.bound), repr(r.ratio)])
        return buf.getvalue()


def admissible_steps(period: float, x0: float, candidates) -> list[int]:
    """Step counts ``l`` for which the lattice spacing ``x0 / l`` tiles the period with an even count."""
    out = []
    for l in candidates:
        N = period * l / x0
        if l >= 1 and abs(N - round(N)) <= 1e-9 * N and round(N) % 2 == 0 and round(N) >= 2:
            out.append(int(l))
    return out


def convergence_study(
    phi: LatticeField, m: float, x0: float, l_list, s: float = 0.0, n: int | None = None,
    check: bool = True,
) -> ConvergenceReport:
    """Error of ``l`` walk steps of size ``x0 / l`` against exact evolution to ``x0``.

    ``phi`` is a band-limited master state; it is spectrally resampled onto
    the lattice of each ``l``, so every row starts from the same function.
    """
    n = _dimension(phi, n)
    _require_normalized(phi)
    if x0 <= 0:
        raise ValueError(f"x0 must be positive, got {x0!r}")
    ls = sorted(int(l) for l in l_list)
    if len(ls) < 1:
        raise ValueError("need at least one step count")
    period = phi.grid.period
    good = admissible_steps(period, x0, ls)
    bad = [l for l in ls if l not in good]
    if bad:
        hint = admissible_steps(period, x0, range(1, 4 * max(ls) + 1))[:12]
        raise ValueError(
            f"inadmissible step counts {bad} for period {period:g} and x0 {x0:g}; "
            f"admissible values start {hint}"
        )
    C = consistency_constant(n)
    rows = []
    for l in ls:
        eps = x0 / l
        N = int(round(period / eps))
        start = resample(phi, N)
        walk = build_dirac_walk(n, m, eps)
        diff = apply_walk_steps(walk, start, l) - exact_evolve(start, x0, m)
        error = sobolev_norm(diff, s, m)
        bound = eps * x0 * C * sobolev_norm(start, s + 2, m)
        rows.append(ConvergenceRow(l, eps, error, bound))

    nonmonotone = [b.l for a, b in zip(rows, rows[1:]) if b.error > a.error]
    fitted = None
    if len(rows) >= 2 and all(r.error > EXACT_TOL for r in rows):
        for a, b in zip(rows, rows[1:]):
            local = math.log(a.error / b.error) / math.log(a.eps / b.eps)
            a.preasymptotic = abs(local - 1.0) > PREASYMPTOTIC_ORDER_BAND
        used = [r for r in rows if not r.preasymptotic]
        if len(used) < 2:
            used = rows
        fitted = fit_order([(r.eps, r.error) for r in used])
    report = ConvergenceReport(n, m, x0, s, period, rows, fitted, C, nonmonotone=nonmonotone)
    if check and not report.within_bounds:
        worst = max(rows, key=lambda r: r.ratio)
        raise BoundViolation(f"convergence row l={worst.l}: error {worst.error:.6g} > bound {worst.bound:.6g}")
    return report


def observation_probability(a: LatticeField, b: LatticeField) -> float:
    """``sin^2`` of the angle between two unit states, ``1 - |<a|b>|^2``."""
    _require_normalized(a, b)
    overlap = abs(inner_product(a, b)) ** 2
    return float(min(max(1.0 - overlap, 0.0), 1.0))


@dataclass(frozen=True)
class EndToEndResult:
    error: float
    bound: float
    identity_residual: float
    renorm_factor: float

    def __iter__(self):
        yield self.error
        yield self.bound


def end_to_end_error(
    phi_fine: LatticeField, m: float, x0: float, l: int, s: float = 0.0, n: int | None = None,
    check: bool = True,
) -> EndToEndResult:
    """Discretize -> ``l`` walk steps -> Reconstruct, against exact evolution on the fine grid.

    Also measures ``|Reconstruct(W^l Discretize(phi)) - W^l(phi_LP)|_2``, where the
    right-hand walk runs directly on the fine grid (shifts of ``r`` fine sites).
    """
    n = _dimension(phi_fine, n)
    _require_normalized(phi_fine)
    eps = x0 / l
    ratio = phi_fine.grid.period / eps
    target_N = int(round(ratio))
    if abs(ratio - target_N) > 1e-9 * ratio or target_N % 2 or phi_fine.grid.N % target_N:
        raise ContractViolation(
            f"step eps = x0/l = {eps:g} does not give an even coarse grid nested in N={phi_fine.grid.N}"
        )
    r = phi_fine.grid.N // target_N
    walk = build_dirac_walk(n, m, eps)

    state = discretize(phi_fine, target_N)
    walked = apply_walk_steps(walk, state.field, l)
    approx = reconstruct(type(state)(walked, state.renorm_factor), r)

    direct = apply_walk_steps(walk, low_pass(phi_fine, target_N), l)
    identity_residual = l2_norm(approx - direct)

    exact = exact_evolve(phi_fine, x0, m)
    error = sobolev_norm(approx - exact, s, m)
    bound = eps**2 * (l * consistency_constant(n) + LOW_PASS_CONSTANT) * sobolev_norm(phi_fine, s + 2, m)
    if check:
        _check_bound(error, bound, f"end-to-end (n={n}, l={l})")
        if identity_residual > 1e-11:
            raise BoundViolation(f"reconstruction identity residual {identity_residual:.3g} > 1e-11")
    return EndToEndResult(error, bound, identity_residual, state.renorm_factor)
