"""The limit curve |z^lambda exp(1 - z^lambda)| = 1, |z| <= 1, and the phase function phi."""

from dataclasses import dataclass

import jax
import jax.numpy as jnp
import numpy as np
from jax.tree_util import Partial as partial

from jax_szego.core.utils import bisect_for_root, wrap_angle
from jax_szego.errors import SzegoRangeError, SzegoValueError
from jax_szego.params import SzegoParams

EXTERIOR = "exterior"
INTERIOR = "interior"
ON_CURVE = "on-curve"
OUTSIDE_UNIT_DISK = "outside-unit-disk"

_RADIUS_LOW = 1.0e-6
_BRANCH_MARGIN = 1.0e-9


@dataclass(frozen=True)
class CurveSample:
    """A point xi of the curve with its argument, tau(xi) and the polyline arclength from
    xi = 1."""

    xi: complex
    arg: float
    tau: float
    arclength: float


@jax.jit
def _phi(z, lam):
    logz = jnp.log(z)
    return (jnp.exp(lam * logz) - 1.0 - lam * logz) / lam


def phi(z, lam):
    """phi(z) = (z^lambda - 1 - lambda log z) / lambda on principal branches.

    |z^lambda exp(1 - z^lambda)| = exp(-lambda Re phi(z)), so Re phi vanishes on the curve, is
    positive inside it and negative on the exterior side.
    """
    z = jnp.asarray(z, dtype=complex)
    if bool(jnp.any(z == 0)):
        raise SzegoValueError("phi is not defined at z = 0.", np.asarray(z))
    return _phi(z, float(lam))


def tau(xi, lam):
    """tau(xi) = Im(xi^lambda - 1 - lambda log xi)."""
    return lam * phi(xi, lam).imag


def _radius_residual(r, theta, lam):
    # Re phi(r e^{i theta}); strictly decreasing in r on (0, 1]
    return (r**lam * jnp.cos(lam * theta) - 1.0) / lam - jnp.log(r)


def _max_arg(lam):
    return min(np.pi, np.pi / lam * (1.0 - _BRANCH_MARGIN))


def radius_at(theta, lam, params=None):
    """The modulus of the curve point with argument ``theta`` (scalar or array)."""
    params = SzegoParams.check(params)
    lam = float(lam)
    theta = np.abs(np.asarray(theta, dtype=float))
    if np.any(theta > _max_arg(lam) * (1.0 + 1e-12)):
        raise SzegoRangeError(
            "Curve argument outside the principal sector.",
            float(theta.max()),
            0.0,
            _max_arg(lam),
        )
    if float(_radius_residual(_RADIUS_LOW, 0.0, lam)) <= 0:
        raise SzegoValueError("The radius bracket fails for this lambda.", lam)

    def _solve(th):
        return bisect_for_root(
            partial(_radius_residual, theta=th, lam=lam),
            _RADIUS_LOW,
            1.0,
            niter=params.curve_bisection_iterations,
        )

    r = np.asarray(jax.vmap(_solve)(jnp.atleast_1d(jnp.asarray(theta))))
    # the corner is an exact root of the residual at r = 1
    r = np.where(theta == 0, 1.0, r)
    return r.reshape(theta.shape)


def trace(lam, m, params=None):
    """Sample the curve from the corner xi = 1 up to the end of the principal sector.

    Parameters:
        lam:    The order lambda.
        m:      Number of samples, m >= 2, equally spaced in argument.
        params: Optional `SzegoParams` for the bisection depth.

    Returns:
        A list of `CurveSample`, starting at xi = 1 with tau = 0.
    """
    m = int(m)
    if m < 2:
        raise SzegoValueError("trace needs m >= 2.", m)
    lam = float(lam)
    theta = np.linspace(0.0, _max_arg(lam), m)
    r = radius_at(theta, lam, params)
    xi = r * np.exp(1j * theta)
    taus = r**lam * np.sin(lam * theta) - lam * theta
    arclength = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(xi)))])
    return [
        CurveSample(xi=complex(x), arg=float(t), tau=float(s), arclength=float(a))
        for x, t, s, a in zip(xi, theta, taus, arclength)
    ]


def sample_arrays(samples):
    """(xi, arg, tau) numpy arrays of a list of samples."""
    xi = np.array([s.xi for s in samples], dtype=complex)
    arg = np.array([s.arg for s in samples])
    taus = np.array([s.tau for s in samples])
    return xi, arg, taus


def tau_n(tau, n, lam):
    """The representative of tau n / lambda in (-pi, pi]."""
    return float(wrap_angle(tau * n / lam))


def level_modulus(z, lam):
    """|z^lambda exp(1 - z^lambda)|, computed as exp(-lambda Re phi(z))."""
    return np.exp(-lam * np.asarray(phi(z, lam)).real)


def classify(z, lam, tol=None, params=None):
    """Locate z relative to the curve.

    Returns one of ``EXTERIOR`` (level value above 1), ``INTERIOR`` (below 1 inside the unit
    disk), ``ON_CURVE`` (within tol of 1 and |z| <= 1) or ``OUTSIDE_UNIT_DISK`` (below 1 but
    |z| > 1, the unbounded branch of the level set).
    """
    params = SzegoParams.check(params)
    tol = params.on_curve_tolerance if tol is None else tol
    z = complex(z)
    m = float(level_modulus(z, lam))
    inside_disk = abs(z) <= 1.0 + tol
    if abs(m - 1.0) <= tol and inside_disk:
        return ON_CURVE
    if m > 1.0:
        return EXTERIOR
    if not inside_disk:
        return OUTSIDE_UNIT_DISK
    return INTERIOR


def _polyline(samples):
    xi, _, _ = sample_arrays(samples)
    return np.concatenate([xi, np.conj(xi[::-1])])


def curve_distance(z, samples):
    """Distance from z (scalar or array) to the curve, given as the closed polyline through
    the samples and their conjugates."""
    scalar = np.ndim(z) == 0
    pts = _polyline(samples)
    a = pts[:-1]
    d = pts[1:] - pts[:-1]
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    length2 = np.abs(d) ** 2
    length2 = np.where(length2 == 0, 1.0, length2)
    t = np.clip(((z[:, None] - a[None, :]) * np.conj(d)[None, :]).real / length2, 0.0, 1.0)
    dist = np.abs(z[:, None] - (a[None, :] + t * d[None, :])).min(axis=1)
    return float(dist[0]) if scalar else dist
