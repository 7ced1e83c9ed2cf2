import math

import jax.numpy as jnp
import numpy as np
import pytest
from jax.scipy.special import erfc as real_erfc

from jax_szego.core.erfc import erfc, erfc_derivative, erfc_zeros, faddeeva_upper
from jax_szego.errors import SzegoValueError
from jax_szego.params import SzegoParams


def test_erfc_real_axis():
    """Matches the real-argument erfc of jax.scipy."""
    x = np.linspace(-4.0, 6.0, 101)
    np.testing.assert_allclose(
        np.asarray(erfc(x)).real, np.asarray(real_erfc(x)), rtol=1e-11, atol=1e-15
    )
    np.testing.assert_allclose(np.asarray(erfc(x)).imag, 0.0, atol=1e-15)


def test_erfc_known_values():
    np.testing.assert_allclose(complex(erfc(0.0)), 1.0, rtol=1e-14)
    # erfc(i) = 1 - i erfi(1)
    np.testing.assert_allclose(complex(erfc(1.0j)), 1.0 - 1.6504257587975428j, rtol=1e-12)
    # erfc(10) ~ e^{-100} / (10 sqrt(pi)) (1 - 1/200 + ...)
    value = complex(erfc(10.0))
    assert 0 < value.real <= 1e-40
    np.testing.assert_allclose(value.real, 2.088487583762545e-45, rtol=1e-10)


def test_erfc_reflection_identity():
    """erfc(z) + erfc(-z) = 2 on random complex points."""
    rng = np.random.RandomState(1)
    z = rng.uniform(-3.0, 3.0, 1000) + 1j * rng.uniform(-3.0, 3.0, 1000)
    total = np.asarray(erfc(z)) + np.asarray(erfc(-z))
    np.testing.assert_allclose(total, 2.0, rtol=1e-10, atol=1e-10)


def test_erfc_conjugate_symmetry():
    rng = np.random.RandomState(2)
    z = rng.uniform(-3.0, 3.0, 200) + 1j * rng.uniform(-3.0, 3.0, 200)
    np.testing.assert_allclose(
        np.asarray(erfc(np.conj(z))), np.conj(np.asarray(erfc(z))), rtol=1e-12, atol=1e-14
    )


def test_faddeeva_upper_value():
    # w(i) = e erfc(1)
    np.testing.assert_allclose(
        complex(faddeeva_upper(1.0j)), math.e * math.erfc(1.0), rtol=1e-12
    )


def test_erfc_derivative_matches_difference():
    z = 0.3 + 0.8j
    h = 1e-6
    fd = (complex(erfc(z + h)) - complex(erfc(z - h))) / (2 * h)
    np.testing.assert_allclose(complex(erfc_derivative(z)), fd, rtol=1e-8)


def test_erfc_zeros_first_two(test_config):
    zeros = erfc_zeros(2)
    expected = np.array([complex(re, im) for re, im in test_config["erfc_zeros"]])
    np.testing.assert_allclose(zeros, expected, atol=test_config["erfc_zeros_atol"])


def test_erfc_zeros_properties():
    zeros = erfc_zeros(10)
    assert np.all(np.diff(np.abs(zeros)) > 0)
    args = np.angle(zeros)
    assert np.all((args > 0.5 * np.pi) & (args < 0.75 * np.pi))
    scale = np.abs(np.asarray(erfc_derivative(zeros)))
    assert np.all(np.abs(np.asarray(erfc(zeros))) <= 1e-10 * scale * (1 + np.abs(zeros)))


def test_erfc_zeros_invalid():
    with pytest.raises(SzegoValueError):
        erfc_zeros(0)


def test_erfc_zeros_params():
    """More Newton steps give the same zeros."""
    np.testing.assert_allclose(
        erfc_zeros(3, params=SzegoParams(erfc_newton_iterations=80)),
        erfc_zeros(3),
        rtol=1e-12,
    )


def test_erfc_jnp_input():
    np.testing.assert_allclose(
        np.asarray(erfc(jnp.array([0.5 + 0.5j]))), np.asarray(erfc(np.array([0.5 + 0.5j]))), rtol=0
    )
