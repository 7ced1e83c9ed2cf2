import math

import jax.numpy as jnp
import numpy as np
import pytest

from jax_szego.core import integrate
from jax_szego.core.integrate import (
    ClenshawCurtisQuad,
    gauss_jacobi_nodes,
    integrate_adaptive,
    integrate_composite,
)
from jax_szego.errors import SzegoConvergenceError, SzegoValueError


def _exp_over_linear(t):
    return jnp.exp(-50.0 * t) / (1.0 + t)


def _cos3(t):
    return jnp.cos(3.0 * t)


def test_integrate_adaptive_endpoint_singularity():
    res = integrate_adaptive(lambda t: 1.0 / jnp.sqrt(t), 0.0, 1.0)
    np.testing.assert_allclose(res.value, 2.0, rtol=1e-11)
    res = integrate_adaptive(lambda t: jnp.log(t), 0.0, 1.0, endpoint_exponents=(-0.5, None))
    np.testing.assert_allclose(res.value, -1.0, rtol=1e-11)


def test_integrate_adaptive_half_line():
    res = integrate_adaptive(lambda t: jnp.exp(-t), 0.0, np.inf)
    np.testing.assert_allclose(res.value, 1.0, rtol=1e-11)
    res = integrate_adaptive(lambda t: jnp.exp(-t) * t**2, 2.0, np.inf)
    np.testing.assert_allclose(res.value, 10.0 * math.exp(-2.0), rtol=1e-11)


def test_integrate_adaptive_complex_integrand():
    res = integrate_adaptive(lambda t: jnp.exp(1j * t), 0.0, 1.0)
    np.testing.assert_allclose(res.value, (np.exp(1j) - 1.0) / 1j, rtol=1e-11)


def test_integrate_adaptive_reversed_and_empty():
    fwd = integrate_adaptive(_cos3, 0.0, 1.0).value
    bwd = integrate_adaptive(_cos3, 1.0, 0.0).value
    np.testing.assert_allclose(bwd, -fwd, rtol=1e-14)
    assert integrate_adaptive(_cos3, 0.5, 0.5).value == 0.0


def test_integrate_adaptive_reversed_keeps_endpoint_exponents(monkeypatch):
    calls = []
    original = integrate.integrate_adaptive

    def _recording(f, a, b, **kwargs):
        calls.append((a, b, kwargs.get("endpoint_exponents")))
        return original(f, a, b, **kwargs)

    monkeypatch.setattr(integrate, "integrate_adaptive", _recording)
    res = original(lambda t: 1.0 / jnp.sqrt(t), 1.0, 0.0, endpoint_exponents=(None, -0.5))
    np.testing.assert_allclose(res.value, -2.0, rtol=1e-9)
    assert calls == [(0.0, 1.0, (-0.5, None))]


def test_integrate_strategies_agree():
    """tanh-sinh/exp-sinh level doubling and composite Clenshaw-Curtis are independent."""
    adaptive = integrate_adaptive(_exp_over_linear, 0.0, np.inf)
    composite = integrate_composite(_exp_over_linear, 0.0, 20.0, panels=200)
    np.testing.assert_allclose(adaptive.value, composite.value, rtol=1e-10)
    # e^{50} E_1(50) ~ 1/50 (1 - 1/50 + 2/50^2 - 6/50^3)
    np.testing.assert_allclose(adaptive.value, (1 - 0.02 + 8e-4 - 4.8e-5) / 50.0, rtol=1e-5)

    a = integrate_adaptive(_cos3, 0.0, 1.0).value
    c = integrate_composite(_cos3, 0.0, 1.0).value
    np.testing.assert_allclose(a, math.sin(3.0) / 3.0, rtol=1e-12)
    np.testing.assert_allclose(c, math.sin(3.0) / 3.0, rtol=1e-12)


def test_integrate_composite_error_estimate():
    res = integrate_composite(_cos3, 0.0, 1.0, panels=4, order=8)
    assert res.error_estimate >= 0
    assert res.evaluations == 4 * 17
    with pytest.raises(SzegoValueError):
        integrate_composite(_cos3, 0.0, np.inf)


def test_clenshaw_curtis_weights():
    quad = ClenshawCurtisQuad.init(6)
    assert quad.order == 13
    np.testing.assert_allclose(float(jnp.sum(quad.absw)), 1.0, rtol=1e-14)
    np.testing.assert_allclose(float(jnp.sum(quad.errw)), 0.0, atol=1e-14)
    assert float(jnp.min(quad.absc)) >= 0.0 and float(jnp.max(quad.absc)) <= 1.0


def test_integrate_adaptive_failures():
    with pytest.raises(SzegoConvergenceError):
        integrate_adaptive(lambda t: 1.0 / (t - 0.5), 0.0, 1.0)
    with pytest.raises(SzegoValueError):
        integrate_adaptive(_cos3, 0.0, 1.0, endpoint_exponents=(-1.0, None))
    with pytest.raises(SzegoValueError):
        integrate_adaptive(_cos3, -np.inf, 0.0)


@pytest.mark.parametrize(
    "p,q,k,expected",
    [
        (0.0, 0.0, 8, 2.0 / 9.0),
        (0.5, 0.5, 2, math.pi / 8.0),
        (0.5, -0.5, 0, math.pi),
        (3.0, 0.0, 0, 4.0),
        (0.0, 3.0, 1, -12.0 / 5.0),
    ],
)
def test_gauss_jacobi_moments(p, q, k, expected):
    """int (1 - t)^q (1 + t)^p t^k dt is exact for k <= 2m - 1."""
    nodes, weights = gauss_jacobi_nodes(p, q, 5)
    np.testing.assert_allclose(np.sum(weights * nodes**k), expected, rtol=1e-12, atol=1e-14)


def test_gauss_jacobi_nodes_layout():
    nodes, weights = gauss_jacobi_nodes(-0.5, 1.5, 12)
    assert np.all(np.diff(nodes) > 0)
    assert np.all((nodes > -1) & (nodes < 1))
    assert np.all(weights > 0)
    with pytest.raises(SzegoValueError):
        gauss_jacobi_nodes(-1.0, 0.0, 3)
    with pytest.raises(SzegoValueError):
        gauss_jacobi_nodes(0.0, 0.0, 0)
