import math

import numpy as np
import pytest

from jax_szego.errors import (
    SzegoIncompatibleValuesError,
    SzegoRangeError,
    SzegoValueError,
)
from jax_szego.series import (
    FAMILY_NAMES,
    GrowthSpec,
    airy_seeds,
    coefficient,
    eval_surrogate,
    family_from_config,
    make_family,
    parabolic_u_seeds,
    partial_sum,
    series_value,
)


def _raw(fam, kmax):
    return np.asarray(fam.raw_coefficients(kmax).to_complex())


def _unscaled(poly):
    return poly.prescaled_complex() * 2.0**poly.prescale_exponent


def test_exp_family():
    fam = make_family("exp")
    assert fam.lambda_ == 1.0
    assert fam.growth.num_directions == 1
    assert fam.growth.a == 0.0
    np.testing.assert_allclose(complex(coefficient(fam, 3).to_complex()), 1.0 / 6.0, rtol=1e-14)
    np.testing.assert_allclose(
        _raw(fam, 10), [1.0 / math.factorial(k) for k in range(10)], rtol=1e-14
    )


def test_mittag_leffler_order_one_is_exp():
    ml = make_family("mittag_leffler", lam=1.0)
    np.testing.assert_allclose(_raw(ml, 30), _raw(make_family("exp"), 30), rtol=1e-13)
    assert ml.normalization == 1.0


def test_mittag_leffler_corrected_radius():
    ml = make_family("mittag_leffler", lam=2.0)
    np.testing.assert_allclose(ml.radius(50), 5.0, rtol=1e-15)
    np.testing.assert_allclose(
        ml.radius(50, "mittag_leffler_corrected"), 5.0 * math.exp(0.01), rtol=1e-15
    )
    poly = partial_sum(ml, 50, radius_mode="mittag_leffler_corrected")
    assert poly.radius_mode == "mittag_leffler_corrected"
    np.testing.assert_allclose(poly.r_n, 5.0 * math.exp(0.01), rtol=1e-15)


def test_trig_coefficients():
    sin = make_family("sin")
    np.testing.assert_allclose(complex(coefficient(sin, 3).to_complex()), -1.0 / 6.0, rtol=1e-14)
    assert complex(coefficient(sin, 2).to_complex()) == 0
    cos = make_family("cos")
    c = _raw(cos, 9)
    assert np.all(c[1::2] == 0)
    np.testing.assert_allclose(c[::2], [1.0, -0.5, 1.0 / 24, -1.0 / 720, 1.0 / 40320], rtol=1e-14)


def test_bessel_coefficients():
    fam = make_family("bessel", nu=0.0)
    c = _raw(fam, 7)
    np.testing.assert_allclose(c[2], -0.25, rtol=1e-14)
    np.testing.assert_allclose(c[4], 1.0 / 64.0, rtol=1e-14)
    assert np.all(c[1::2] == 0)


def test_bessel_series_first_zero():
    fam = make_family("bessel", nu=0.0)
    value = complex(series_value(fam, 2.404825557695773, 60, raw=True).to_complex())
    assert abs(value) <= 1e-9


def test_expint_coefficients_closed_form():
    """(1/k!) int_{-1}^1 t^k (1 - t^2) dt for the p = q = 1 family."""
    fam = make_family("expint", r=-1.0, p=1.0, q=1.0)
    c = _raw(fam, 8)
    k = np.arange(8)
    expected = np.where(k % 2 == 0, 2.0 / (k + 1) - 2.0 / (k + 3), 0.0)
    expected = expected / np.array([math.factorial(j) for j in k])
    np.testing.assert_allclose(c, expected, rtol=1e-12, atol=1e-14)

    cubic = make_family("expint", r=-1.0, p=0.0, q=3.0)
    np.testing.assert_allclose(complex(coefficient(cubic, 0).to_complex()), 4.0, rtol=1e-13)


def test_airy_seeds_and_zero_pattern():
    np.testing.assert_allclose(airy_seeds("airy_ai"), (0.3550280538878172, -0.2588194037928068), rtol=1e-14)
    np.testing.assert_allclose(airy_seeds("airy_bi"), (0.6149266274460007, 0.4482883573538264), rtol=1e-14)
    poly = partial_sum(make_family("airy_ai", branch="upper"), 50)
    k = np.arange(50)
    np.testing.assert_array_equal(poly.nonzero, k % 3 != 2)


@pytest.mark.parametrize("name", ["airy_ai", "airy_bi"])
def test_airy_ode_residual(name):
    """y'' - z y vanishes up to truncation for the 60-term series."""
    P = np.polynomial.Polynomial(_raw(make_family(name), 60))
    z = np.array([0.5, -1.2 + 0.7j, 2.0j, -2.0])
    residual = P.deriv(2)(z) - z * P(z)
    assert np.max(np.abs(residual)) <= 1e-12


@pytest.mark.parametrize("a", [0.75, -0.25, 1.5])
def test_parabolic_u_ode_residual(a):
    P = np.polynomial.Polynomial(_raw(make_family("parabolic_u", a=a), 60))
    z = np.array([0.3, 1.5 - 0.5j, -2.0, 1.9j])
    residual = P.deriv(2)(z) - (z**2 / 4.0 + a) * P(z)
    assert np.max(np.abs(residual)) <= 1e-11


def test_parabolic_u_seeds():
    # U(1/2, z) = exp(z^2/4) sqrt(pi/2) erfc(z/sqrt 2)
    np.testing.assert_allclose(parabolic_u_seeds(0.5), (math.sqrt(math.pi / 2.0), -1.0), rtol=1e-13)


def test_partial_sum_small_cases():
    fam = make_family("exp")
    p2 = partial_sum(fam, 2)
    assert p2.r_n == 2.0
    np.testing.assert_allclose(_unscaled(p2), [1.0, 2.0], rtol=1e-15)
    np.testing.assert_allclose(complex(p2(-0.5).to_complex()), 0.0, atol=1e-15)
    np.testing.assert_allclose(complex(p2(0.0).to_complex()), 1.0, rtol=1e-15)

    p3 = partial_sum(fam, 3)
    np.testing.assert_allclose(_unscaled(p3), [1.0, 3.0, 4.5], rtol=1e-14)
    m = np.abs(p3.prescaled_complex())
    assert 1.0 <= m.max() < 2.0


def test_partial_sum_parity_and_degree():
    sin = make_family("sin")
    p6 = partial_sum(sin, 6)
    np.testing.assert_allclose(_unscaled(p6), [0.0, 12.0, 0.0, 72.0, 0.0, 129.6], rtol=1e-13, atol=1e-12)
    assert p6.zero_multiplicity == 1
    assert p6.degree == 5 and not p6.degree_reduced
    p5 = partial_sum(sin, 5)
    assert p5.degree == 3 and p5.degree_reduced


def test_partial_sum_huge_range():
    """Coefficients spanning hundreds of orders of magnitude stay finite."""
    poly = partial_sum(make_family("exp"), 2000)
    log_abs = np.asarray(poly.coeffs.log_abs())
    assert np.all(np.isfinite(log_abs))
    assert log_abs.max() - log_abs.min() > 1000


def test_partial_sum_invalid():
    with pytest.raises(SzegoValueError):
        partial_sum(make_family("exp"), 1)
    with pytest.raises(SzegoValueError):
        make_family("exp").radius(10, "bogus")


def test_eval_surrogate():
    np.testing.assert_allclose(float(eval_surrogate(make_family("exp"), 10.0).log_abs()), 10.0, rtol=1e-14)
    sin = make_family("sin")
    np.testing.assert_allclose(
        complex(eval_surrogate(sin, 10.0).to_complex()),
        complex(sin.eval_exact(10.0).to_complex()),
        rtol=1e-8,
    )
    conf = make_family("confluent", alpha=-0.5, beta=-2.5)
    np.testing.assert_allclose(
        float(eval_surrogate(conf, 50.0).log_abs()), 2.0 * math.log(50.0) + 50.0, rtol=1e-14
    )
    # sin also grows along -z
    np.testing.assert_allclose(float(eval_surrogate(sin, -10.0).log_abs()), 10.0, rtol=1e-14)
    with pytest.raises(SzegoRangeError):
        eval_surrogate(make_family("exp"), -10.0)
    with pytest.raises(SzegoValueError):
        eval_surrogate(make_family("exp"), 0.0)


@pytest.mark.parametrize(
    "name,params",
    [
        ("exp", {}),
        ("sin", {}),
        ("cos", {}),
        ("expint", {"r": -1.0, "p": 3.0, "q": 0.0}),
        ("expint", {"r": 0.0, "p": 0.5, "q": 1.0}),
    ],
)
def test_series_matches_exact(name, params):
    """The summed normalized series agrees with the direct evaluator at |z| = 5."""
    fam = make_family(name, params)
    for z in [5.0, 5.0j, -3.0 + 4.0j]:
        series = complex(series_value(fam, z, 90).to_complex())
        exact = np.asarray(fam.eval_exact(z).to_complex()).reshape(-1)[0]
        np.testing.assert_allclose(series, exact, rtol=1e-10)


def test_bessel_exact_real_axis():
    fam = make_family("bessel", nu=0.0)
    series = complex(series_value(fam, 5.0, 80).to_complex())
    exact = complex(fam.eval_exact(5.0).to_complex())
    np.testing.assert_allclose(series, exact, rtol=1e-9)


def test_make_family_errors():
    with pytest.raises(SzegoValueError) as excinfo:
        make_family("tan")
    assert "exp" in excinfo.value.allowed_values
    with pytest.raises(SzegoValueError):
        make_family("confluent", alpha=-1.0, beta=0.5)
    with pytest.raises(SzegoRangeError):
        make_family("expint", r=1.0, p=0.0, q=0.0)
    with pytest.raises(SzegoValueError):
        make_family("expint", r=-1.0, p=-1.0, q=0.0)
    with pytest.raises(SzegoRangeError):
        make_family("mittag_leffler", lam=0.3)
    with pytest.raises(SzegoValueError):
        make_family("exp", nu=1.0)
    with pytest.raises(SzegoValueError):
        make_family("airy_ai", branch="left")


def test_growth_spec_validation():
    with pytest.raises(SzegoIncompatibleValuesError):
        GrowthSpec(1.0, ((1.0, 1.0, 0.0), (1.0j, 1.0, 0.0)), theta=0.5 * math.pi)
    with pytest.raises(SzegoValueError):
        GrowthSpec(1.0, ((1.0, 1.0, 0.0), (1.1, 1.0, 0.0)), theta=0.3)
    with pytest.raises(SzegoRangeError):
        GrowthSpec(0.0, ((1.0, 1.0, 0.0),))
    with pytest.raises(SzegoRangeError):
        GrowthSpec(1.0, ((1.0, 1.0, 0.0),), mu=1.0)
    spec = GrowthSpec(1.0, ((1.0, 1.0, 0.0), (-1.0, 1.0, 0.5)), theta=1.0)
    assert spec.dominant_directions() == (1,)


def test_family_presets():
    """Every preset name builds; growth data follow the family definitions."""
    params = {
        "mittag_leffler": {"lam": 2.0},
        "bessel": {"nu": 1.0},
        "confluent": {"alpha": 0.5, "beta": 1.5},
        "expint": {"r": -1.0, "p": 0.0, "q": 0.0},
        "parabolic_u": {"a": 0.75},
    }
    for name in FAMILY_NAMES:
        fam = make_family(name, params.get(name, {}))
        assert fam.growth.directions[0][:2] == (1.0, 1.0)
    assert make_family("bessel", nu=1.0).growth.a == -1.5
    assert make_family("confluent", alpha=0.5, beta=1.5).growth.a == -1.0
    assert make_family("airy_bi").growth.num_directions == 3
    assert make_family("parabolic_u", a=0.75, branch="upper").lambda_ == 2.0


def test_family_from_config():
    assert family_from_config("exp") == make_family("exp")
    fam = family_from_config({"name": "bessel", "params": {"nu": 0.0}})
    assert fam.param("nu") == 0.0
    with pytest.raises(SzegoValueError):
        family_from_config({"params": {}})
