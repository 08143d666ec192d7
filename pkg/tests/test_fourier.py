import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from delayed_means.errors import ConfigurationError
from delayed_means.fourier import (FourierSpectrum, TrigSeries, compute_spectrum,
                                   format_spectrum_table, lambda_table, lambda_weight,
                                   parse_spectrum_table, partial_sum_eval, partial_sum_grid)
from delayed_means.periodic import Grid2D, SampledFunction2D, corpus, sample, trig_poly_tables
from tests.conftest import analytic


def direct_coefficients(fs, k, l):
    """Rectangle-rule integrals written out term by term."""
    X, Y = fs.grid.mesh()
    w = (2 * np.pi) ** 2 / (fs.grid.n1 * fs.grid.n2) / np.pi ** 2
    v = fs.values
    return (w * np.sum(v * np.cos(k * X) * np.cos(l * Y)),
            w * np.sum(v * np.sin(k * X) * np.cos(l * Y)),
            w * np.sum(v * np.cos(k * X) * np.sin(l * Y)),
            w * np.sum(v * np.sin(k * X) * np.sin(l * Y)))


def test_lambda_weights():
    assert lambda_weight(0, 0) == 0.25
    assert lambda_weight(0, 3) == 0.5
    assert lambda_weight(2, 0) == 0.5
    assert lambda_weight(1, 1) == 1.0
    with pytest.raises(ValueError):
        lambda_weight(-1, 0)
    table = lambda_table(2, 2)
    assert table[0, 0] == 0.25 and table[0, 2] == 0.5 and table[2, 1] == 1.0


def test_spectrum_of_constant():
    sp = compute_spectrum(sample(analytic(lambda x, y: 1.0 + 0 * x), Grid2D.square(16)), 3, 3)
    assert sp.a[0, 0] == pytest.approx(4.0)
    rest = np.abs(sp.a).copy()
    rest[0, 0] = 0
    assert rest.max() < 1e-14


def test_spectrum_examples(cos_cos):
    g = Grid2D.square(16)
    sp = compute_spectrum(sample(cos_cos, g), 4, 4)
    assert sp.a[1, 1] == pytest.approx(1.0)
    sp = compute_spectrum(sample(analytic(lambda x, y: np.sin(2 * x) * np.sin(3 * y)), g), 4, 4)
    assert sp.d[2, 3] == pytest.approx(1.0)
    assert abs(sp.a).max() < 1e-14 and abs(sp.b).max() < 1e-14 and abs(sp.c).max() < 1e-14


def test_fft_matches_direct_quadrature():
    f = corpus("lip_mixed", [0.5, 0.9])
    fs = sample(f, Grid2D(16, 32))
    sp = compute_spectrum(fs, 5, 7)
    for k in range(6):
        for l in range(8):
            expected = direct_coefficients(fs, k, l)
            got = (sp.a[k, l], sp.b[k, l], sp.c[k, l], sp.d[k, l])
            np.testing.assert_allclose(got, expected, atol=1e-13)


def test_trig_poly_coefficients_recovered():
    a, b, c, d = trig_poly_tables(4, 3, seed=9)
    sp = compute_spectrum(sample(corpus("trig_poly", [4, 3, 9]), Grid2D.square(16)), 4, 3)
    for table, got in ((a, sp.a), (b, sp.b), (c, sp.c), (d, sp.d)):
        np.testing.assert_allclose(got, table, atol=1e-13)


def test_sin_zero_entries_do_not_affect_sums():
    sp = compute_spectrum(sample(corpus("trig_poly", [3, 3]), Grid2D.square(16)), 3, 3)
    b = np.array(sp.b)
    d = np.array(sp.d)
    b[0, :] = 17.0
    d[:, 0] = -5.0
    noisy = FourierSpectrum(3, 3, sp.a, b, sp.c, d)
    assert partial_sum_eval(noisy, 3, 3, 0.4, 1.7) == pytest.approx(
        partial_sum_eval(sp, 3, 3, 0.4, 1.7), abs=1e-14)


def test_partial_sum_reproduces_samples():
    f = corpus("trig_poly", [5, 4], seed=2)
    g = Grid2D.square(16)
    sp = compute_spectrum(sample(f, g), 7, 7)
    np.testing.assert_allclose(partial_sum_grid(sp, 7, 7, g).values, sample(f, g).values,
                               atol=1e-12)
    assert partial_sum_eval(sp, 5, 4, 0.123, 4.56) == pytest.approx(f(0.123, 4.56), abs=1e-12)


def test_partial_sum_grid_matches_pointwise():
    sp = compute_spectrum(sample(corpus("lip_pair", [0.5]), Grid2D.square(32)), 10, 10)
    g = Grid2D.square(8)
    vals = partial_sum_grid(sp, 6, 4, g).values
    for i, j in ((0, 0), (3, 5), (7, 2)):
        assert vals[i, j] == pytest.approx(partial_sum_eval(sp, 6, 4, g.x[i], g.y[j]), abs=1e-13)


def test_parseval_identity():
    f = corpus("trig_poly", [4, 4], seed=3)
    g = Grid2D.square(16)
    fs = sample(f, g)
    sp = compute_spectrum(fs, 7, 7)
    lam = lambda_table(7, 7)
    # λ² times the mean square of each basis product is λ/4
    energy = np.sum(lam * (sp.a ** 2 + sp.b ** 2 + sp.c ** 2 + sp.d ** 2)) / 4
    assert np.mean(fs.values ** 2) == pytest.approx(energy, rel=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 1000))
def test_spectrum_is_linear(alpha, beta, seed):
    g = Grid2D.square(16)
    rng = np.random.default_rng(seed)
    u = SampledFunction2D(g, rng.normal(size=g.shape))
    v = SampledFunction2D(g, rng.normal(size=g.shape))
    combo = SampledFunction2D(g, alpha * u.values + beta * v.values)
    su, sv, sc = (compute_spectrum(s, 5, 5) for s in (u, v, combo))
    for name in "abcd":
        np.testing.assert_allclose(getattr(sc, name),
                                   alpha * getattr(su, name) + beta * getattr(sv, name),
                                   atol=1e-12)


def test_cutoff_and_degree_errors():
    fs = sample(corpus("lip_pair", [1.0]), Grid2D.square(8))
    with pytest.raises(ConfigurationError):
        compute_spectrum(fs, 4, 2)
    sp = compute_spectrum(fs, 3, 3)
    with pytest.raises(ConfigurationError):
        partial_sum_eval(sp, 4, 0, 0.0, 0.0)
    with pytest.raises(ConfigurationError):
        FourierSpectrum(1, 1, np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2)))


def test_trig_series_paths_agree():
    f = corpus("trig_poly", [3, 5], seed=4)
    g = Grid2D.square(16)
    sp = compute_spectrum(sample(f, g), 3, 5)
    series = TrigSeries.from_spectrum(sp)
    direct = TrigSeries.from_samples(sample(f, g), 3, 5)
    np.testing.assert_allclose(series.coef, direct.coef, atol=1e-13)
    z1, z2 = 0.37, -1.21
    expected = f.on_tensor(g.x + z1, g.y + z2)
    np.testing.assert_allclose(series.sample_shifted(g, z1, z2), expected, atol=1e-12)
    # coarse grid falls back to direct evaluation
    np.testing.assert_allclose(series.sample_shifted(Grid2D.square(8), z1, z2),
                               f.on_tensor(Grid2D.square(8).x + z1, Grid2D.square(8).y + z2),
                               atol=1e-12)
    assert series(0.5, 0.25) == pytest.approx(f(0.5, 0.25), abs=1e-12)


def test_trig_series_scaled():
    sp = compute_spectrum(sample(corpus("trig_poly", [3, 3]), Grid2D.square(16)), 3, 3)
    table = np.arange(16.0).reshape(4, 4)
    scaled = TrigSeries.from_spectrum(sp).scaled(table)
    np.testing.assert_allclose(scaled.coef, TrigSeries.from_spectrum(sp, table).coef, atol=1e-14)
    short = TrigSeries.from_spectrum(sp).scaled(np.ones((2, 2)))
    assert np.all(short.coef[0, :] == 0)


def test_spectrum_table_round_trip():
    sp = compute_spectrum(sample(corpus("trig_poly", [2, 2]), Grid2D.square(8)), 3, 3)
    text = format_spectrum_table(sp)
    assert text.splitlines()[2] == "k,l,a,b,c,d"
    back = parse_spectrum_table(text)
    for name in "abcd":
        np.testing.assert_allclose(getattr(back, name), getattr(sp, name), rtol=1e-11, atol=1e-15)
    with pytest.raises(ConfigurationError):
        parse_spectrum_table("k,l,a,b,c,d\n0,0,1,0,0,0\n")
