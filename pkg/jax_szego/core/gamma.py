import math

import jax
import jax.numpy as jnp
import numpy as np

from jax_szego.core.utils import has_tracers
from jax_szego.errors import SzegoValueError

# Numerical Recipes (3rd ed.) 6.1 coefficients, good to ~1e-15 on Re z >= 1/2
_GAMMLN_COEFS = np.array(
    [
        57.1562356658629235,
        -59.5979603554754912,
        14.1360979747417471,
        -0.491913816097620199,
        0.339946499848118887e-4,
        0.465236289270485756e-4,
        -0.983744753048795646e-4,
        0.158088703224912494e-3,
        -0.210264441724104883e-3,
        0.217439618115212643e-3,
        -0.164318106536763890e-3,
        0.844182239838527433e-4,
        -0.261908384015814087e-4,
        0.368991826595316234e-5,
    ]
)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_MAX_SHIFT = 256
_POLE_TOLERANCE = 1e-14


@jax.jit
def _log_gamma_right(z):
    """log Gamma(z) on Re z >= 1/2, principal branch."""
    tmp = z + 5.24218750000000000
    tmp = (z + 0.5) * jnp.log(tmp) - tmp
    j = jnp.arange(1, _GAMMLN_COEFS.shape[0] + 1)
    ser = 0.999999999999997092 + jnp.sum(
        _GAMMLN_COEFS / (z[..., None] + j), axis=-1
    )
    return tmp + jnp.log(ser) + _LOG_SQRT_2PI - jnp.log(z)


@jax.jit
def _log_gamma(z):
    z = jnp.asarray(z, dtype=complex)
    # shift left half-plane arguments up with Gamma(z) = Gamma(z + N) / prod_{j<N} (z + j);
    # summing principal logs keeps the principal branch
    nshift = jnp.clip(jnp.ceil(0.5 - z.real), 0, _MAX_SHIFT).astype(int)
    j = jnp.arange(_MAX_SHIFT)
    terms = jnp.where(
        j < nshift[..., None], jnp.log(z[..., None] + j), 0.0 + 0.0j
    )
    return _log_gamma_right(z + nshift) - jnp.sum(terms, axis=-1)


def _is_nonpositive_integer(z, tol=0.0):
    nearest = jnp.round(z.real)
    return (nearest <= 0) & (jnp.abs(z - nearest) <= tol)


def log_gamma(z):
    """The principal branch of log Gamma(z) for complex z.

    Parameters:
        z:  Complex scalar or array, not a nonpositive integer.

    Returns:
        Complex array of log Gamma(z), continuous off the negative real axis and real on the
        positive real axis.
    """
    z = jnp.asarray(z, dtype=complex)
    if not has_tracers(z) and bool(
        jnp.any(_is_nonpositive_integer(z, _POLE_TOLERANCE))
    ):
        raise SzegoValueError(
            "log_gamma has poles at the nonpositive integers.", np.asarray(z)
        )
    return _log_gamma(z)


@jax.jit
def log_reciprocal_gamma(z):
    """log(1/Gamma(z)) up to a multiple of 2 pi i; -inf at the nonpositive integers."""
    z = jnp.asarray(z, dtype=complex)
    pole = _is_nonpositive_integer(z)
    right = z.real >= 0.5
    zr = jnp.where(right, z, 0.5)
    zl = jnp.where(right | pole, -0.5, z)
    value_right = -_log_gamma(zr)
    # reflection: 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
    value_left = jnp.log(jnp.sin(jnp.pi * zl)) + _log_gamma(1.0 - zl) - math.log(math.pi)
    value = jnp.where(right, value_right, value_left)
    return jnp.where(pole, -jnp.inf + 0.0j, value)


@jax.jit
def reciprocal_gamma(z):
    """The entire function 1/Gamma(z); exactly 0 at the nonpositive integers."""
    z = jnp.asarray(z, dtype=complex)
    pole = _is_nonpositive_integer(z)
    value = jnp.exp(log_reciprocal_gamma(z))
    return jnp.where(pole, 0.0 + 0.0j, value)


def gamma(z):
    return jnp.exp(log_gamma(z))


def gamma_derivative(a, k, npoints=64):
    """The k-th derivative of Gamma at a real point a > 0.

    Uses the Cauchy integral formula on the circle |s - a| = min(1/2, a/2), discretized with
    the trapezoidal rule, which converges geometrically for analytic integrands.
    """
    a = float(a)
    if a <= 0:
        raise SzegoValueError("gamma_derivative needs a > 0.", a)
    if k < 0:
        raise SzegoValueError("Derivative order must be nonnegative.", k)
    rho = min(0.5, 0.5 * a)
    theta = 2.0 * np.pi * np.arange(npoints) / npoints
    values = np.asarray(gamma(a + rho * np.exp(1j * theta)))
    total = np.sum(values * np.exp(-1j * k * theta))
    return (math.factorial(k) / (npoints * rho**k) * total).real
