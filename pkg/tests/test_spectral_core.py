"""Grid conventions, multipliers, norms, and alias-free products."""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from crestwave.spectral_core import (Field, SpectralMultiplier, dealias_product,
                                     derivative, evaluate_at, grid,
                                     hhalf_pairing, hilbert, krasny_filter,
                                     norm_hhalf, norm_l2, norm_linf, norms,
                                     poisson_smooth, project, sector_restrict,
                                     wavenumbers)
from helpers import rand_mixed, rand_sector

sizes = st.sampled_from([8, 16, 32, 64])
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_grid_nodes():
    g = grid(8)
    assert np.allclose(g, 2.0 * np.pi * np.arange(8) / 8)


def test_wavenumbers_fft_order():
    k = wavenumbers(8)
    assert k.tolist() == [0, 1, 2, 3, -4, -3, -2, -1]


@pytest.mark.parametrize("bad", [0, 4, 12, 96, 100])
def test_sizes_must_be_powers_of_two(bad):
    with pytest.raises(ValueError):
        Field(np.zeros(max(bad, 1), dtype=complex)) if bad else grid(bad)


def test_coeff_roundtrip(rng):
    f = rand_mixed(32, 12, rng, mean=0.3 + 0.1j)
    again = Field.from_coeffs(f.coeffs)
    assert np.allclose(again.values, f.values, atol=1e-14)
    assert np.allclose(Field(f.values).coeffs, f.coeffs, atol=1e-14)


def test_from_modes_bounds():
    f = Field.from_modes(16, {-3: 1.0, 2: 0.5j})
    assert f.coeffs[(-3) % 16] == 1.0
    assert f.coeffs[2] == 0.5j
    with pytest.raises(ValueError):
        Field.from_modes(16, {8: 1.0})  # at the unresolved edge


def test_values_are_read_only():
    f = Field.zeros(8)
    with pytest.raises(ValueError):
        f.values[0] = 1.0


def test_evaluate_collocates_on_grid(rng):
    f = rand_mixed(32, 10, rng)
    assert np.allclose(evaluate_at(f, grid(32)), f.values, atol=1e-12)


def test_evaluate_off_grid_single_mode():
    f = Field.from_modes(16, {-3: 2.0})
    x = np.array([0.1, 1.7, 4.0])
    assert np.allclose(evaluate_at(f, x), 2.0 * np.exp(-3j * x), atol=1e-13)


def test_evaluate_real_for_real_fields(rng):
    f = Field(rng.standard_normal(16).astype(complex))
    x = rng.uniform(0, 2 * np.pi, 7)
    assert np.max(np.abs(evaluate_at(f, x).imag)) < 1e-12


def test_hilbert_is_sector_sign():
    n = 16
    holo = Field.from_modes(n, {-2: 1.0})
    anti = Field.from_modes(n, {5: 1.0})
    const = Field.constant(n, 3.0)
    assert np.allclose(hilbert(holo).values, holo.values)
    assert np.allclose(hilbert(anti).values, -anti.values)
    assert np.allclose(hilbert(const).values, 0.0)


@given(sizes, seeds)
def test_hilbert_squares_to_mean_removal(n, seed):
    f = rand_mixed(n, n // 4, np.random.default_rng(seed), mean=1.0 - 0.5j)
    twice = hilbert(hilbert(f))
    assert norm_linf(twice - (f - f.mean())) < 1e-12


@given(sizes, seeds)
def test_projections_partition_and_idempotent(n, seed):
    f = rand_mixed(n, n // 4, np.random.default_rng(seed), mean=0.7)
    ph = project(f, "holo")
    pa = project(f, "antiholo")
    assert norm_linf(ph + pa - f) < 1e-12
    # each projection keeps half of the constant mode, so idempotence
    # holds only once the mean is gone
    assert abs(ph.mean() - f.mean() / 2) < 1e-12
    ph0 = ph - ph.mean()
    pa0 = pa - pa.mean()
    assert norm_linf(project(ph0, "holo") - ph0) < 1e-12
    assert norm_linf(project(pa0, "antiholo") - pa0) < 1e-12


def test_project_rejects_unknown_part():
    with pytest.raises(ValueError):
        project(Field.zeros(8), "upper")


def test_sector_restrict_is_strict(rng):
    f = rand_mixed(32, 10, rng, mean=2.0)
    k = wavenumbers(32)
    rh = sector_restrict(f, "holo")
    assert np.all(rh.coeffs[k >= 0] == 0.0)
    assert np.allclose(rh.coeffs[k < 0], f.coeffs[k < 0])
    rm = sector_restrict(f, "holo", keep_mean=True)
    assert rm.coeffs[0] == f.coeffs[0]


def test_derivative_modes_and_nyquist():
    n = 16
    f = Field.from_modes(n, {-3: 1.0})
    assert norm_linf(derivative(f) - Field.from_modes(n, {-3: -3.0j})) < 1e-13
    nyq = Field.from_coeffs(np.eye(n, dtype=complex)[n // 2])
    assert norm_linf(derivative(nyq)) == 0.0
    assert norm_linf(derivative(Field.constant(n, 5.0))) == 0.0


def test_poisson_smooth_semigroup(rng):
    f = rand_mixed(32, 12, rng)
    a = poisson_smooth(poisson_smooth(f, 0.2), 0.3)
    b = poisson_smooth(f, 0.5)
    assert norm_linf(a - b) < 1e-13
    with pytest.raises(ValueError):
        poisson_smooth(f, 0.0)


def test_poisson_smooth_damping_factor():
    f = Field.from_modes(16, {-4: 1.0, 3: 1.0})
    s = poisson_smooth(f, 0.25)
    assert np.isclose(s.coeffs[(-4) % 16], np.exp(-1.0))
    assert np.isclose(s.coeffs[3], np.exp(-0.75))


def test_norm_l2_convention():
    assert np.isclose(norm_l2(Field.constant(8, 1.0)), np.sqrt(2 * np.pi))
    f = Field.from_modes(16, {-2: 3.0})
    assert np.isclose(norm_l2(f), 3.0 * np.sqrt(2 * np.pi))
    assert set(norms(f)) == {"l2", "linf"}
    assert np.isclose(norms(f)["linf"], norm_linf(f))


def test_hhalf_unit_mode_and_mean():
    f = Field.from_modes(16, {-3: 2.0})
    assert np.isclose(norm_hhalf(f), 2.0 * np.sqrt(2 * np.pi * 3))
    assert norm_hhalf(Field.constant(16, 7.0)) == 0.0
    assert np.isclose(norm_hhalf(f + 7.0), norm_hhalf(f))


@given(sizes, seeds)
def test_pairing_splits_by_sector(n, seed):
    f = rand_mixed(n, n // 4, np.random.default_rng(seed))
    lhs = hhalf_pairing(f)
    rhs = norm_hhalf(project(f, "holo")) ** 2 - norm_hhalf(project(f, "antiholo")) ** 2
    assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))


def test_dealias_product_exact_when_bandlimited(rng):
    f = rand_mixed(64, 8, rng)
    g = rand_mixed(64, 8, rng)
    raw = f.values * g.values
    assert np.allclose(dealias_product(f.values, g.values), raw, atol=1e-12)
    assert np.allclose((f * g).values, raw, atol=1e-12)


def test_dealias_product_drops_unresolved_modes():
    # true product lands entirely above the Nyquist band
    n = 16
    f = Field.from_modes(n, {6: 1.0})
    g = Field.from_modes(n, {5: 1.0})
    assert norm_linf(f * g) < 1e-14


def test_krasny_filter_thresholds_coefficients():
    f = Field.from_modes(16, {-1: 1.0, -2: 1e-7, 3: 1e-13})
    out = krasny_filter(f, 1e-10)
    assert out.coeffs[(-1) % 16] == 1.0
    assert out.coeffs[(-2) % 16] == 1e-7
    assert out.coeffs[3] == 0.0


def test_spectral_multiplier_applies_symbol():
    n = 16
    double = SpectralMultiplier(np.full(n, 2.0))
    f = Field.from_modes(n, {-2: 1.0, 1: 3.0})
    assert norm_linf(double(f) - 2.0 * f) < 1e-13
    with pytest.raises(ValueError):
        double(Field.zeros(32))


def test_field_algebra_scalars(rng):
    f = rand_mixed(16, 5, rng)
    assert norm_linf((2.0 * f) - (f + f)) < 1e-14
    assert norm_linf((f - 1.0) + 1.0 - f) < 1e-14
    assert norm_linf((-f) + f) == 0.0
    assert norm_linf(f.conj().conj() - f) == 0.0
    assert norm_linf(f.real() + 1j * f.imag() - f) < 1e-14
