import numpy as np
import pytest

from diracwalk.errors import ContractViolation, DegenerateInput
from diracwalk.fields import GridSpec, LatticeField, gaussian_state, l2_norm, plane_wave_state, random_state
from diracwalk.sampling import (
    DiscretizedState,
    band_mask,
    discretize,
    low_pass,
    reconstruct,
    resample,
)


def trig_interpolate(samples, L, x):
    """Evaluate the band-limited interpolant of 1D periodic samples at points ``x`` by direct sums."""
    N = len(samples)
    xs = np.arange(N) * L / N
    modes = np.arange(-N // 2, N // 2)
    k = 2 * np.pi / L * modes
    coeffs = np.exp(-1j * np.outer(k, xs)) @ samples / N
    return np.exp(1j * np.outer(x, k)) @ coeffs


def test_band_mask_keeps_lower_nyquist():
    g = GridSpec(1, 16, 0.1)
    mask = band_mask(g, 4)
    modes = np.fft.fftfreq(16, 1 / 16).astype(int)
    assert sorted(modes[mask].tolist()) == [-2, -1, 0, 1]


def test_low_pass_idempotent_on_band_limited():
    coarse = random_state(GridSpec.from_period(2, 8, 2.0), 2, np.random.default_rng(0))
    fine = resample(coarse, 32)
    assert np.allclose(low_pass(fine, 8).values, fine.values, atol=1e-13, rtol=0)


@pytest.mark.filterwarnings("ignore:gaussian width")
def test_low_pass_projection():
    g = GridSpec.from_period(1, 64, 4.0)
    phi = gaussian_state(g, 4.0 / 64 * 2)
    once = low_pass(phi, 16)
    assert np.allclose(low_pass(once, 16).values, once.values, atol=1e-15)
    assert l2_norm(once) < l2_norm(phi)


def test_discretize_r1_is_identity():
    phi = random_state(GridSpec(2, 8, 0.5), 2, np.random.default_rng(1))
    s = discretize(phi, 8)
    assert s.renorm_factor == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(s.field.values, phi.values, atol=1e-13, rtol=0)


def test_discretize_samples_band_limited_interpolant():
    L, Nf, N = 4.0, 256, 32
    phi = gaussian_state(GridSpec.from_period(1, Nf, L), L / 64, carrier=[5.0])
    lp = low_pass(phi, N)
    s = discretize(phi, N)
    assert s.renorm_factor == pytest.approx(l2_norm(lp), rel=1e-12)
    r = Nf // N
    assert np.allclose(s.field.values * s.renorm_factor, lp.values[::r], atol=1e-13, rtol=0)


def test_reconstruct_is_shannon_interpolation():
    L, N, r = 3.0, 16, 4
    s = DiscretizedState(random_state(GridSpec.from_period(1, N, L), 2, np.random.default_rng(2)), 0.7)
    out = reconstruct(s, r)
    x = out.grid.positions()[0]
    for c in range(2):
        expected = 0.7 * trig_interpolate(s.field.values[:, c], L, x)
        assert np.allclose(out.values[:, c], expected, atol=1e-13, rtol=0)


def test_reconstruct_r1():
    s = DiscretizedState(random_state(GridSpec(1, 8, 0.5), 2, np.random.default_rng(3)), 0.25)
    out = reconstruct(s, 1)
    assert np.allclose(out.values, s.field.values * 0.25, atol=1e-16, rtol=0)


@pytest.mark.filterwarnings("ignore:gaussian width")
@pytest.mark.parametrize("n,Nf,N", [(1, 256, 32), (2, 64, 16), (3, 16, 8)])
def test_round_trip_on_low_passed(n, Nf, N):
    d = 4 if n == 3 else 2
    phi = gaussian_state(GridSpec.from_period(n, Nf, 4.0), 4.0 / 16, spinor=np.eye(d)[1])
    lp = low_pass(phi, N)
    back = reconstruct(discretize(lp, N), Nf // N)
    assert l2_norm(back - lp) <= 1e-12


def test_discretize_errors():
    g = GridSpec(1, 48, 0.1)
    phi = random_state(g, 2, np.random.default_rng(0))
    with pytest.raises(ValueError):
        discretize(phi, 32)
    with pytest.raises(ValueError):
        discretize(phi, 3)
    high = plane_wave_state(GridSpec(1, 64, 0.1), [20])
    with pytest.raises(DegenerateInput, match="eps <"):
        discretize(high, 16)


def test_discretized_state_requires_positive_factor():
    with pytest.raises(ContractViolation):
        DiscretizedState(random_state(GridSpec(1, 4, 1.0), 2, np.random.default_rng(0)), 0.0)


def test_reconstruct_rejects_bad_ratio():
    s = DiscretizedState(random_state(GridSpec(1, 4, 1.0), 2, np.random.default_rng(0)), 1.0)
    with pytest.raises(ValueError):
        reconstruct(s, 0)


@pytest.mark.parametrize("n", [1, 2])
def test_resample_round_trip(n):
    base = random_state(GridSpec.from_period(n, 8, 2.0), 2, np.random.default_rng(n))
    up = resample(base, 24)
    assert up.grid.spacing == pytest.approx(2.0 / 24)
    assert l2_norm(up) == pytest.approx(1.0, abs=1e-13)
    assert np.allclose(resample(up, 8).values, base.values, atol=1e-13, rtol=0)


def test_resample_refuses_lossy_coarsening():
    phi = random_state(GridSpec(1, 32, 0.1), 2, np.random.default_rng(0))
    with pytest.raises(ContractViolation):
        resample(phi, 16)


def test_resample_same_size_is_noop():
    phi = random_state(GridSpec(1, 8, 0.1), 2, np.random.default_rng(0))
    assert resample(phi, 8) is phi


def test_reconstruct_has_no_out_of_band_content():
    s = DiscretizedState(random_state(GridSpec.from_period(2, 8, 1.0), 2, np.random.default_rng(0)), 1.0)
    out = reconstruct(s, 4)
    assert np.allclose(low_pass(out, 8).values, out.values, atol=1e-14)
    assert isinstance(out, LatticeField)


@pytest.mark.filterwarnings("ignore:gaussian width")
@pytest.mark.parametrize("width", [4.0 / 4, 4.0 / 8, 4.0 / 16, 4.0 / 128])
def test_low_pass_contracts(width):
    phi = gaussian_state(GridSpec.from_period(1, 512, 4.0), width, carrier=[3.0])
    lp = low_pass(phi, 64)
    assert l2_norm(lp) <= l2_norm(phi) * (1 + 1e-15)
    assert discretize(phi, 64).renorm_factor <= 1 + 1e-12


def test_discretize_is_linear_up_to_renormalization():
    phi = gaussian_state(GridSpec.from_period(1, 256, 4.0), 0.1)
    a, b = discretize(phi, 32), discretize(phi * (2.5 * np.exp(0.4j)), 32)
    assert b.renorm_factor == pytest.approx(2.5 * a.renorm_factor, rel=1e-14)
    assert np.allclose(b.field.values, np.exp(0.4j) * a.field.values, atol=1e-15)


def test_reconstruct_then_sample_returns_samples():
    s = DiscretizedState(random_state(GridSpec.from_period(2, 8, 2.0), 2, np.random.default_rng(5)), 1.0)
    fine = reconstruct(s, 4)
    assert np.allclose(fine.values[::4, ::4], s.field.values, atol=1e-14, rtol=0)


def test_discretize_warns_outside_guaranteed_range():
    rough = random_state(GridSpec(1, 64, 0.1), 2, np.random.default_rng(0))
    with pytest.warns(UserWarning, match="guaranteed"):
        discretize(rough, 8)
