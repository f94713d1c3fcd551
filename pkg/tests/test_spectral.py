import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from diracwalk.algebra import alpha_set, is_hermitian, is_unitary
from diracwalk.errors import ContractViolation
from diracwalk.fields import GridSpec, LatticeField, gaussian_state, l2_norm, plane_wave_state, random_state, site_state
from diracwalk.spectral import (
    SpectralField,
    a_symbols,
    dirac_symbol,
    evolve_with_hamiltonian,
    exact_evolve,
    exact_symbol,
    forward_transform,
    gamma,
    inverse_transform,
    walk_symbol,
)

D = {1: 2, 2: 2, 3: 4}


@pytest.mark.parametrize("n,N", [(1, 16), (2, 8), (3, 4)])
def test_delta_site_flat_spectrum(n, N):
    g = GridSpec(n, N, 0.5)
    coeffs = forward_transform(site_state(g, (1,) * n)).coefficients[..., 0]
    assert np.allclose(np.abs(coeffs), N ** (-n / 2), atol=1e-15, rtol=0)


@pytest.mark.parametrize("n,N", [(1, 32), (2, 16), (3, 8)])
def test_round_trip_and_parseval(n, N):
    g = GridSpec(n, N, 0.25)
    f = random_state(g, D[n], np.random.default_rng(n))
    spec = forward_transform(f)
    assert np.allclose(inverse_transform(spec).values, f.values, atol=1e-12, rtol=0)
    assert np.sqrt(g.cell_volume * np.sum(np.abs(spec.coefficients) ** 2)) == pytest.approx(l2_norm(f), rel=1e-12)


def test_translation_sign():
    g = GridSpec.from_period(1, 16, 2.0)
    f = random_state(g, 2, np.random.default_rng(0))
    ahead = LatticeField(g, np.roll(f.values, -1, axis=0))  # a(x + eps)
    k = g.momenta()[..., 0]
    expected = np.exp(1j * k * g.spacing)[:, None] * forward_transform(f).coefficients
    assert np.allclose(forward_transform(ahead).coefficients, expected, atol=1e-13, rtol=0)


def test_gamma_examples():
    assert gamma(np.zeros(1), 1.0) == 1.0
    assert gamma([3.0, 4.0], 0.0) == 5.0
    assert np.allclose(gamma(np.array([[3.0, 4.0], [0.0, 0.0]]), 0.0), [5.0, 0.0])


def test_dirac_symbol_zero():
    assert np.array_equal(dirac_symbol([0.0, 0.0], 0.0, 2), np.zeros((2, 2)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dirac_symbol_spectrum(n):
    rng = np.random.default_rng(10 + n)
    k = rng.standard_normal((20, n)) * 3
    m = 0.8
    d = dirac_symbol(k, m, n)
    g = gamma(k, m)
    for di, gi in zip(d, g):
        assert is_hermitian(di, tol=1e-13)
        w = np.linalg.eigvalsh(di)
        half = len(w) // 2
        assert np.allclose(w[:half], -gi) and np.allclose(w[half:], gi)


def test_a_symbols_sum():
    k = np.array([0.3, -1.2])
    parts = a_symbols(k, 0.5, 2)
    al = alpha_set(2)
    assert np.allclose(parts[0], 0.5 * al[0]) and np.allclose(parts[2], -1.2 * al[2])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exact_symbol_identity_at_zero_time(n):
    k = np.random.default_rng(0).standard_normal((5, n))
    assert np.allclose(exact_symbol(k, 1.0, n, 0.0), np.eye(D[n]), atol=1e-14, rtol=0)


def test_exact_symbol_massless_zero_mode():
    assert np.allclose(exact_symbol(np.zeros(2), 0.0, 2, 3.0), np.eye(2))


@settings(max_examples=60, deadline=None)
@given(
    n=st.sampled_from([1, 2, 3]),
    seed=st.integers(0, 10**6),
    m=st.floats(0, 5),
    t=st.floats(-4, 4),
)
def test_exact_symbol_matches_expm(n, seed, m, t):
    k = np.random.default_rng(seed).uniform(-6, 6, n)
    expected = scipy.linalg.expm(-1j * t * dirac_symbol(k, m, n))
    assert np.allclose(exact_symbol(k, m, n, t), expected, atol=1e-12, rtol=0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_walk_symbol_structure(n):
    rng = np.random.default_rng(20 + n)
    k = rng.uniform(-4, 4, n)
    m, eps = 1.3, 0.17
    assert np.allclose(walk_symbol(k, m, n, 0.0), np.eye(D[n]))
    w = walk_symbol(k, m, n, eps)
    assert is_unitary(w)
    expected = np.eye(D[n])
    for a in a_symbols(k, m, n):
        expected = expected @ scipy.linalg.expm(-1j * eps * a)
    assert np.allclose(w, expected, atol=1e-13, rtol=0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_plane_wave_eigenspinor_phase(n):
    N = {1: 16, 2: 8, 3: 4}[n]
    g = GridSpec.from_period(n, N, 3.0)
    mode = [1, -2, 1][:n]
    k = (2 * np.pi / 3.0) * np.array(mode, dtype=float)
    m, t = 0.6, 0.9
    w, v = np.linalg.eigh(dirac_symbol(k, m, n))
    spinor = v[:, -1]
    assert w[-1] == pytest.approx(gamma(k, m))
    wave = plane_wave_state(g, mode, spinor)
    out = exact_evolve(wave, t, m)
    assert np.allclose(out.values, np.exp(-1j * w[-1] * t) * wave.values, atol=1e-12, rtol=0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exact_evolve_matches_eigendecomposition(n):
    N = {1: 32, 2: 16, 3: 8}[n]
    g = GridSpec(n, N, 0.3)
    f = random_state(g, D[n], np.random.default_rng(n))
    m, t = 0.9, 0.7
    a = exact_evolve(f, t, m)
    b = evolve_with_hamiltonian(f, t, lambda k: dirac_symbol(k, m, n))
    assert np.allclose(a.values, b.values, atol=1e-12, rtol=0)
    assert l2_norm(a) == pytest.approx(1.0, abs=1e-13)


def test_exact_evolve_group_property():
    g = GridSpec.from_period(2, 32, 4.0)
    f = gaussian_state(g, 0.5, carrier=[1.0, -2.0])
    once = exact_evolve(f, 0.8, 1.0)
    twice = exact_evolve(exact_evolve(f, 0.3, 1.0), 0.5, 1.0)
    assert np.allclose(once.values, twice.values, atol=1e-13, rtol=0)


def test_exact_evolve_spinor_mismatch():
    f = random_state(GridSpec(3, 4, 0.5), 2, np.random.default_rng(0))
    with pytest.raises(ContractViolation):
        exact_evolve(f, 0.1, 1.0)


def test_spectral_field_dim():
    g = GridSpec(1, 4, 1.0)
    assert SpectralField(g, np.zeros((4, 3))).spinor_dim == 3
