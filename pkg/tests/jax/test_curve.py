import math

import numpy as np
import pytest

from jax_szego.curve import (
    EXTERIOR,
    INTERIOR,
    ON_CURVE,
    OUTSIDE_UNIT_DISK,
    classify,
    curve_distance,
    level_modulus,
    phi,
    radius_at,
    sample_arrays,
    tau,
    tau_n,
    trace,
)
from jax_szego.errors import SzegoRangeError, SzegoValueError

# s e^{1 + s} = 1
NEGATIVE_AXIS_CROSSING = 0.2784645427610738


def test_phi_values():
    for lam in [1.0, 1.5, 2.0]:
        assert complex(phi(1.0, lam)) == 0
    np.testing.assert_allclose(complex(phi(1j / math.e, 1.0)).real, 0.0, atol=1e-15)
    np.testing.assert_allclose(complex(phi(0.5, 1.0)).real, math.log(2.0) - 0.5, rtol=1e-14)
    with pytest.raises(SzegoValueError):
        phi(0.0, 1.0)


@pytest.mark.parametrize("lam", [1.0, 1.5, 2.0])
def test_phi_second_derivative_at_corner(lam):
    h = 1e-4
    second = (complex(phi(1 + h, lam)) + complex(phi(1 - h, lam)) - 2 * complex(phi(1.0, lam))) / h**2
    np.testing.assert_allclose(second.real, lam, rtol=1e-6)


@pytest.mark.parametrize("lam", [1.0, 1.5, 2.0, 0.75])
def test_level_modulus_identity(lam):
    """|z^lambda exp(1 - z^lambda)| = exp(-lambda Re phi(z))."""
    rng = np.random.RandomState(5)
    z = rng.uniform(0.05, 1.5, 50) * np.exp(1j * rng.uniform(-0.9, 0.9, 50) * np.pi / max(lam, 1.0))
    direct = np.abs(z**lam * np.exp(1.0 - z**lam))
    np.testing.assert_allclose(level_modulus(z, lam), direct, rtol=1e-12)


def test_radius_at():
    np.testing.assert_allclose(radius_at(0.5 * np.pi, 1.0), 1.0 / math.e, rtol=1e-12)
    np.testing.assert_allclose(radius_at(0.0, 2.0), 1.0)
    r = radius_at(np.array([0.3, -0.3]), 1.0)
    np.testing.assert_allclose(r[0], r[1], rtol=0)
    with pytest.raises(SzegoRangeError):
        radius_at(0.6 * np.pi, 2.0)


def test_trace_lambda_one():
    samples = trace(1.0, 257)
    assert len(samples) == 257
    assert samples[0].xi == 1.0 and samples[0].tau == 0.0 and samples[0].arclength == 0.0
    xi, arg, taus = sample_arrays(samples)
    np.testing.assert_allclose(xi[-1], -NEGATIVE_AXIS_CROSSING, atol=1e-8)
    assert np.all(np.diff(np.abs(xi)) < 0)
    assert np.all(np.diff(arg) > 0)
    assert np.all(np.diff([s.arclength for s in samples]) > 0)


@pytest.mark.parametrize("lam", [0.75, 1.0, 1.5, 2.0])
def test_trace_invariants(lam):
    samples = trace(lam, 200)
    xi, arg, taus = sample_arrays(samples)
    assert np.max(np.abs(np.asarray(phi(xi, lam)).real)) <= 1e-12
    assert np.max(np.abs(xi)) <= 1.0 + 1e-12
    assert np.max(arg) <= min(np.pi, np.pi / lam)
    np.testing.assert_allclose(taus, np.asarray(tau(xi, lam)), atol=1e-12)


def test_tau_odd_under_conjugation():
    xi, _, taus = sample_arrays(trace(1.5, 50))
    np.testing.assert_allclose(np.asarray(tau(np.conj(xi), 1.5)), -taus, atol=1e-12)


def test_tau_n():
    assert tau_n(0.0, 17, 1.0) == 0.0
    np.testing.assert_allclose(tau_n(2 * np.pi, 1, 1.0), 0.0, atol=1e-15)
    np.testing.assert_allclose(tau_n(1.0, 7, 1.0), 7.0 - 2 * np.pi, rtol=1e-14)
    np.testing.assert_allclose(tau_n(np.pi, 1, 1.0), np.pi, rtol=1e-14)
    assert -np.pi < tau_n(-3.0, 5, 2.0) <= np.pi


def test_classify():
    assert classify(0.99, 1.0) == INTERIOR
    assert classify(0.1, 1.0) == INTERIOR
    assert classify(1.0, 1.0) == ON_CURVE
    assert classify(1j / math.e, 1.0) == ON_CURVE
    assert classify(1.05j / math.e, 1.0) == EXTERIOR
    assert classify(1.5, 1.0) == OUTSIDE_UNIT_DISK
    assert classify(0.99, 1.0, tol=1e-3) == ON_CURVE
    with pytest.raises(SzegoValueError):
        classify(0.0, 1.0)


def test_curve_distance():
    samples = trace(1.0, 512)
    np.testing.assert_allclose(curve_distance(0.0, samples), NEGATIVE_AXIS_CROSSING, rtol=1e-6)
    np.testing.assert_allclose(curve_distance(2.0, samples), 1.0, rtol=1e-14)
    assert curve_distance(samples[100].xi, samples) <= 1e-15
    assert curve_distance(np.conj(samples[100].xi), samples) <= 1e-15
    dist = curve_distance(np.array([0.0, 2.0]), samples)
    assert dist.shape == (2,)
