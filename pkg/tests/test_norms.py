import math

import numpy as np
import pytest

from delayed_means.errors import ConfigurationError, DomainError
from delayed_means.norms import (ModulusOfContinuity, NormSpec, default_shift_set, grid_norm,
                                 holder_norm, holder_seminorm, integral_modulus, lp_norm,
                                 modulus_validate, parse_modulus, power_modulus,
                                 ratio_monotone_check, register_modulus, shift_difference_norms,
                                 weighted_lp_norm)
from delayed_means.periodic import Grid2D, SampledFunction2D, corpus, sample
from tests.conftest import analytic

ALPHAS = (0.3, 0.5, 0.8, 1.0)


@pytest.fixture
def cos_x():
    return analytic(lambda x, y: np.cos(x) + 0 * y, "cos x")


def test_lp_norm_examples(cos_x):
    fs = sample(cos_x, Grid2D.square(64))
    assert lp_norm(fs, 2) == pytest.approx(1 / math.sqrt(2), rel=1e-12)
    assert lp_norm(fs, math.inf) == pytest.approx(1.0)
    assert lp_norm(fs, 1) == pytest.approx(2 / math.pi, rel=1e-3)
    assert lp_norm(fs, 3) == pytest.approx((4 / (3 * math.pi)) ** (1 / 3), rel=1e-3)
    with pytest.raises(ConfigurationError):
        lp_norm(fs, 0.5)


def test_weighted_norm_of_constant():
    g = Grid2D.square(2048)
    one = SampledFunction2D(g, np.ones(g.shape))
    # mean of |sin(x/2)| over a period is 2/π
    assert weighted_lp_norm(one, NormSpec(1, 1.0, 0.0)) == pytest.approx(2 / math.pi, abs=1e-6)
    assert weighted_lp_norm(one, NormSpec(2, 0.5, 0.5)) == pytest.approx(2 / math.pi, abs=1e-6)


def test_zero_weights_give_plain_norm():
    fs = sample(corpus("lip_mixed", [0.4, 0.9]), Grid2D.square(64))
    for p in (1, 2, 3.5, math.inf):
        assert weighted_lp_norm(fs, NormSpec(p, 0.0, 0.0)) == lp_norm(fs, p)


def test_norm_spec_validation():
    with pytest.raises(ConfigurationError):
        NormSpec(0.9)
    with pytest.raises(ConfigurationError):
        NormSpec(2, -0.1, 0.0)
    with pytest.raises(ConfigurationError):
        NormSpec(2, 0.0, math.inf)
    assert NormSpec(2, 0.0, 0.25).weighted and not NormSpec().weighted


def test_holder_seminorm_of_cos(cos_x):
    identity = parse_modulus("custom:identity")
    value = holder_seminorm(cos_x, identity, identity, NormSpec(2))
    assert value == pytest.approx(1 / math.sqrt(2), rel=0.02)
    assert value <= 1 / math.sqrt(2)


def test_holder_seminorm_homogeneous():
    f = corpus("lip_pair", [0.5])
    w = power_modulus(0.5)
    grid = Grid2D.square(64)
    base = holder_seminorm(f, w, w, grid=grid)
    assert holder_seminorm(-3.0 * f, w, w, grid=grid) == pytest.approx(3 * base, rel=1e-12)


def test_holder_norm_adds_lp_part(cos_x):
    w = power_modulus(1.0)
    grid = Grid2D.square(64)
    norm = holder_norm(cos_x, w, w, grid=grid)
    assert norm == pytest.approx(1 / math.sqrt(2) + holder_seminorm(cos_x, w, w, grid=grid))


def test_smaller_modulus_gives_larger_seminorm():
    # t^0.8 <= (2π)^0.5 t^0.3 on (0, π], so the seminorms compare the other way round
    f = corpus("lip_pair", [0.8])
    grid = Grid2D.square(64)
    rough = holder_seminorm(f, power_modulus(0.3), power_modulus(0.3), grid=grid)
    smooth = holder_seminorm(f, power_modulus(0.8), power_modulus(0.8), grid=grid)
    assert rough <= math.sqrt(2 * math.pi) * smooth


def test_larger_shift_set_never_lowers_seminorm():
    f = corpus("lip_mixed", [0.5, 0.8])
    w = power_modulus(0.5)
    grid = Grid2D.square(32)
    small = holder_seminorm(f, w, w, shift_set=default_shift_set(4), grid=grid)
    large = holder_seminorm(f, w, w, shift_set=default_shift_set(12), grid=grid)
    assert large >= small


def test_shift_difference_norms_direct(cos_x):
    grid = Grid2D.square(16)
    z = [(2 * math.pi / 16 * 3, 0.0), (0.1, -0.2)]
    got = shift_difference_norms(cos_x, grid, NormSpec(2), z)
    for value, (z1, _) in zip(got, z):
        assert value == pytest.approx(math.sqrt(2) * abs(math.sin(z1 / 2)), rel=1e-12)


def test_default_shift_set_shape():
    shifts = default_shift_set()
    assert len(shifts) == 800
    assert (math.pi, -math.pi) in shifts


def test_integral_modulus_of_cos(cos_x):
    value = integral_modulus(cos_x, 1.0, 0.5, 2)
    assert value == pytest.approx(math.sqrt(2) * math.sin(0.5), rel=1e-10)
    chain = [integral_modulus(cos_x, d, d, 2, probe_count=9) for d in (0.1, 0.5, 1.0, 2.0)]
    assert chain == sorted(chain)


def test_domain_errors(cos_x):
    w = power_modulus(1.0)
    with pytest.raises(DomainError):
        holder_seminorm(cos_x, w, w, shift_set=[(0.1, 0.0)])
    with pytest.raises(DomainError):
        holder_seminorm(cos_x, w, w, shift_set=[])
    with pytest.raises(DomainError):
        integral_modulus(cos_x, 7.0, 0.1, 2)
    with pytest.raises(DomainError):
        ratio_monotone_check(w, ModulusOfContinuity(lambda t: t - 1.0, "shifted"))


@pytest.mark.parametrize("alpha", ALPHAS)
def test_power_moduli_are_moduli(alpha):
    report = modulus_validate(power_modulus(alpha))
    assert report.passed, report.format()


def test_square_is_not_subadditive():
    sq = parse_modulus("pow:2")
    assert float(sq(2.0)) > 2 * float(sq(1.0))
    report = modulus_validate(sq)
    assert not report.check("subadditive").passed
    assert report.check("monotone").passed
    assert "FAIL" in report.format()


def test_custom_moduli():
    assert modulus_validate(parse_modulus("custom:log_lip")).passed
    register_modulus("step", lambda t: (t > 1.0).astype(float))
    report = modulus_validate(parse_modulus("custom:step"))
    assert not report.check("continuity").passed
    register_modulus("offset", lambda t: t + 0.5)
    assert not modulus_validate(parse_modulus("custom:offset")).check("zero").passed


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("beta", ALPHAS)
def test_ratio_monotone_sign(alpha, beta):
    check = ratio_monotone_check(power_modulus(alpha), power_modulus(beta))
    assert check.passed == (alpha >= beta)


def test_parse_modulus_errors():
    for bad in ("pow:x", "pow:0", "pow:-1", "custom:nope", "exp:1"):
        with pytest.raises(ConfigurationError):
            parse_modulus(bad)
    assert float(power_modulus(0.5).scaled(2.0)(4.0)) == pytest.approx(4.0)


def test_grid_norm_matches_weighted():
    fs = sample(corpus("lip_pair", [0.5]), Grid2D.square(32))
    spec = NormSpec(3, 0.2, 0.7)
    assert grid_norm(fs.values, fs.grid, spec) == weighted_lp_norm(fs, spec)
