"""Spinor-valued wavefunctions on periodic cubic lattices.

A :class:`LatticeField` stores point samples ``phi(x)`` at the sites
``x = i * eps`` of an ``N^n`` torus of period ``L = N * eps``. Inner products
and norms carry the cell volume ``eps^n`` so that they approximate the
continuum ``L^2`` quantities and are comparable across refinements.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ContractViolation

# exp(-x) < 1e-300 beyond this
_TAIL_EXPONENT = 300.0 * math.log(10.0)


@dataclass(frozen=True)
class GridSpec:
    n: int
    N: int
    spacing: float

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise ValueError(f"grid dimension must be 1, 2 or 3, got {self.n!r}")
        if int(self.N) != self.N or self.N < 2 or self.N % 2:
            raise ValueError(f"points per axis must be a positive even integer, got {self.N!r}")
        if not self.spacing > 0:
            raise ValueError(f"spacing must be positive, got {self.spacing!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "spacing", float(self.spacing))

    @classmethod
    def from_period(cls, n: int, N: int, period: float) -> "GridSpec":
        return cls(n, N, period / N)

    @property
    def period(self) -> float:
        return self.N * self.spacing

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.n

    def modes(self) -> np.ndarray:
        """Integer mode numbers per axis in FFT layout: 0..N/2-1, -N/2..-1."""
        return np.fft.fftfreq(self.N, d=1.0 / self.N).round().astype(np.int64)

    def momentum_axis(self) -> np.ndarray:
        return (2.0 * np.pi / self.period) * self.modes()

    def momenta(self) -> np.ndarray:
        """Momentum vectors on the full grid, shape ``shape + (n,)``, FFT layout."""
        axes = np.meshgrid(*([self.momentum_axis()] * self.n), indexing="ij")
        return np.stack(axes, axis=-1)

    def momentum_squared(self) -> np.ndarray:
        k = self.momentum_axis() ** 2
        total = np.zeros(self.shape)
        for j in range(self.n):
            total = total + k.reshape([-1 if i == j else 1 for i in range(self.n)])
        return total

    def positions(self) -> list[np.ndarray]:
        return [np.arange(self.N) * self.spacing] * self.n

    def refined(self, factor: int) -> "GridSpec":
        return GridSpec(self.n, self.N * factor, self.spacing / factor)


@dataclass(frozen=True, eq=False)
class LatticeField:
    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.complex128, copy=True)
        if vals.ndim != self.grid.n + 1 or vals.shape[:-1] != self.grid.shape:
            raise ContractViolation(
                f"values of shape {vals.shape} do not match grid {self.grid.shape} + (d,)"
            )
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def _wrap(cls, grid: GridSpec, values: np.ndarray) -> "LatticeField":
        # trusted internal constructor: takes ownership, no copy
        obj = object.__new__(cls)
        values.flags.writeable = False
        object.__setattr__(obj, "grid", grid)
        object.__setattr__(obj, "values", values)
        return obj

    @property
    def spinor_dim(self) -> int:
        return self.values.shape[-1]

    def __add__(self, other: "LatticeField") -> "LatticeField":
        _check_compatible(self, other)
        return LatticeField._wrap(self.grid, self.values + other.values)

    def __sub__(self, other: "LatticeField") -> "LatticeField":
        _check_compatible(self, other)
        return LatticeField._wrap(self.grid, self.values - other.values)

    def __mul__(self, scalar) -> "LatticeField":
        return LatticeField._wrap(self.grid, self.values * complex(scalar))

    __rmul__ = __mul__

    def normalized(self) -> "LatticeField":
        norm = l2_norm(self)
        if norm == 0.0:
            raise ValueError("cannot normalize the zero field")
        return self * (1.0 / norm)


def _check_compatible(a: LatticeField, b: LatticeField) -> None:
    if a.grid != b.grid or a.spinor_dim != b.spinor_dim:
        raise ContractViolation(
            f"field mismatch: {a.grid}/d={a.spinor_dim} vs {b.grid}/d={b.spinor_dim}"
        )


def inner_product(a: LatticeField, b: LatticeField) -> complex:
    """``eps^n sum_x <a(x), b(x)>``, conjugate-linear in ``a``."""
    _check_compatible(a, b)
    terms = np.conj(a.values) * b.values
    return complex(a.grid.cell_volume * np.sum(terms.ravel()))


def l2_norm(a: LatticeField) -> float:
    sq = np.sum((a.values.real**2 + a.values.imag**2).ravel())
    return float(np.sqrt(a.grid.cell_volume * sq))


def sobolev_weights(grid: GridSpec, s: float, m: float) -> np.ndarray:
    return (1.0 + m * m + grid.momentum_squared()) ** s


def sobolev_norm(a: LatticeField, s: float, m: float = 0.0) -> float:
    """Discrete ``H^s`` norm with the mass-dependent weight ``(1 + m^2 + |k|^2)^s``.

    Reductions go through ``numpy.sum`` on a contiguous array, which uses a
    fixed pairwise summation tree.
    """
    if s < 0:
        raise ValueError(f"Sobolev index must be >= 0, got {s!r}")
    from .spectral import forward_transform

    coeffs = forward_transform(a).coefficients
    power = np.sum(coeffs.real**2 + coeffs.imag**2, axis=-1)
    weighted = np.ascontiguousarray(sobolev_weights(a.grid, s, m) * power)
    return float(np.sqrt(a.grid.cell_volume * np.sum(weighted.ravel())))


def _as_spinor(spinor, d: int | None = None) -> np.ndarray:
    if spinor is None:
        if d is None:
            raise ValueError("spinor dimension unknown")
        spinor = np.eye(d)[0]
    vec = np.asarray(spinor, dtype=complex).ravel()
    if d is not None and vec.size != d:
        raise ValueError(f"spinor must have {d} components, got {vec.size}")
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        raise ValueError("spinor must be nonzero")
    return vec / norm


def _default_spinor_dim(n: int) -> int:
    return 4 if n == 3 else 2


def _periodized_profile(x: np.ndarray, center: float, width: float, carrier: float, period: float):
    reach = 2.0 * width * math.sqrt(_TAIL_EXPONENT)
    images = int(math.ceil(reach / period)) + 1
    out = np.zeros(x.shape, dtype=complex)
    for img in range(-images, images + 1):
        u = x - center - img * period
        out += np.exp(-(u * u) / (4.0 * width * width) + 1j * carrier * u)
    return out


def gaussian_state(
    grid: GridSpec,
    width: float,
    center=None,
    carrier=None,
    spinor=None,
) -> LatticeField:
    """Normalized periodized Gaussian wave packet.

    ``width`` is the standard deviation of the position density ``|phi|^2``;
    the amplitude envelope is ``exp(-|x - center|^2 / (4 width^2))``, times the
    carrier ``exp(i carrier . (x - center))``. Defaults: center of the box,
    zero carrier, first basis spinor.
    """
    if not width > 0:
        raise ValueError(f"width must be positive, got {width!r}")
    if width < 4 * grid.spacing or width > grid.period / 4:
        warnings.warn(
            f"gaussian width {width:g} outside [4 eps, L/4] = "
            f"[{4 * grid.spacing:g}, {grid.period / 4:g}]",
            stacklevel=2,
        )
    n = grid.n
    center = np.full(n, grid.period / 2) if center is None else np.broadcast_to(
        np.asarray(center, dtype=float), (n,))
    carrier = np.zeros(n) if carrier is None else np.broadcast_to(
        np.asarray(carrier, dtype=float), (n,))
    d = len(spinor) if spinor is not None else _default_spinor_dim(n)
    vec = _as_spinor(spinor, d)

    envelope = np.ones(grid.shape, dtype=complex)
    for j, x in enumerate(grid.positions()):
        profile = _periodized_profile(x, center[j], width, carrier[j], grid.period)
        envelope = envelope * profile.reshape([-1 if i == j else 1 for i in range(n)])
    return LatticeField(grid, envelope[..., None] * vec).normalized()


def plane_wave_state(grid: GridSpec, mode, spinor=None) -> LatticeField:
    """Normalized lattice plane wave with momentum ``(2 pi / L) * mode``."""
    mode = np.broadcast_to(np.asarray(mode), (grid.n,))
    if np.any(mode != np.round(mode)) or np.any(mode < -grid.N // 2) or np.any(mode >= grid.N // 2):
        raise ValueError(f"mode {mode.tolist()} outside {{-N/2, ..., N/2-1}} for N={grid.N}")
    d = len(spinor) if spinor is not None else _default_spinor_dim(grid.n)
    vec = _as_spinor(spinor, d)
    phase = np.zeros(grid.shape)
    for j, x in enumerate(grid.positions()):
        kx = (2.0 * np.pi / grid.period) * mode[j] * x
        phase = phase + kx.reshape([-1 if i == j else 1 for i in range(grid.n)])
    amp = np.exp(1j * phase) / math.sqrt(grid.period**grid.n)
    return LatticeField(grid, amp[..., None] * vec)


def site_state(grid: GridSpec, site, spinor=None) -> LatticeField:
    """Unit amplitude at one site (the l2 basis vector); its norm is ``eps^(n/2)``."""
    d = len(spinor) if spinor is not None else _default_spinor_dim(grid.n)
    vec = np.asarray(spinor, dtype=complex) if spinor is not None else np.eye(d)[0]
    vals = np.zeros(grid.shape + (d,), dtype=complex)
    vals[tuple(np.broadcast_to(np.asarray(site), (grid.n,)))] = vec
    return LatticeField(grid, vals)


def random_state(grid: GridSpec, d: int, rng: np.random.Generator) -> LatticeField:
    vals = rng.standard_normal(grid.shape + (d,)) + 1j * rng.standard_normal(grid.shape + (d,))
    return LatticeField(grid, vals).normalized()


# --- serialization -------------------------------------------------------


def _header(a: LatticeField) -> dict:
    return {"n": a.grid.n, "N": a.grid.N, "eps": a.grid.spacing, "d": a.spinor_dim}


def _interleaved(a: LatticeField) -> np.ndarray:
    flat = np.ascontiguousarray(a.values).reshape(-1)
    return flat.view(np.float64)


def _from_header(header: dict, data: np.ndarray) -> LatticeField:
    try:
        grid = GridSpec(int(header["n"]), int(header["N"]), float(header["eps"]))
        d = int(header["d"])
    except KeyError as exc:
        raise ValueError(f"field header missing key {exc}") from None
    expected = 2 * grid.N**grid.n * d
    if data.size != expected:
        raise ValueError(f"field data has {data.size} floats, header implies {expected}")
    vals = np.ascontiguousarray(data, dtype="<f8").view(np.complex128)
    return LatticeField(grid, vals.reshape(grid.shape + (d,)))


def save_field(path, a: LatticeField) -> None:
    """Write ``a`` as JSON (``.json`` suffix) or as binary.

    JSON: ``{"header": {n, N, eps, d}, "data": [re, im, re, im, ...]}``.
    Binary: the header as one JSON line, then little-endian float64 pairs.
    Data order is site-major (C order over the lattice axes), spinor index last.
    """
    path = Path(path)
    if path.suffix.lower() == ".json":
        payload = {"header": _header(a), "data": _interleaved(a).tolist()}
        path.write_text(json.dumps(payload))
    else:
        with open(path, "wb") as fh:
            fh.write((json.dumps(_header(a)) + "\n").encode("ascii"))
            fh.write(_interleaved(a).astype("<f8").tobytes())


def load_field(path) -> LatticeField:
    path = Path(path)
    if path.suffix.lower() == ".json":
        payload = json.loads(path.read_text())
        return _from_header(payload["header"], np.asarray(payload["data"], dtype=float))
    raw = path.read_bytes()
    head, sep, body = raw.partition(b"\n")
    if not sep:
        raise ValueError(f"{path}: missing field header line")
    return _from_header(json.loads(head), np.frombuffer(body, dtype="<f8"))
