import math
from functools import partial

import jax
import jax.numpy as jnp
import numpy as np

from jax_szego.errors import SzegoConvergenceError, SzegoValueError
from jax_szego.params import SzegoParams

_SQRT_PI = math.sqrt(math.pi)


def _weideman_coefficients(nterms):
    # rational series of Weideman (1994) for the Faddeeva function on Im z >= 0
    nsample = 2 * nterms
    ind = np.arange(-nsample + 1.0, nsample)
    L = np.sqrt(nterms / np.sqrt(2))
    theta = (math.pi / nsample) * ind
    t = L * np.tan(0.5 * theta)
    fn = np.empty((ind.size + 1,), dtype=t.dtype)
    fn[0] = 0.0
    fn[1:] = np.exp(-t * t) * (L * L + t * t)
    coefs = np.fft.fft(np.fft.fftshift(fn)).real / (2 * nsample)
    return L, np.flipud(coefs[1 : (nterms + 1)])


_WEIDEMAN_L, _WEIDEMAN_COEFS = _weideman_coefficients(42)


@jax.jit
def faddeeva_upper(z):
    """w(z) = exp(-z^2) erfc(-iz) for Im z >= 0."""
    z = jnp.asarray(z, dtype=complex)
    s = _WEIDEMAN_L - 1j * z
    arg = (_WEIDEMAN_L + 1j * z) / s
    poly = jnp.polyval(jnp.asarray(_WEIDEMAN_COEFS), arg)
    return 2.0 * poly / (s * s) + (1.0 / _SQRT_PI) / s


@jax.jit
def erfc(z):
    """The complementary error function of a complex argument.

    On Re z >= 0 it is exp(-z^2) w(iz) with the Faddeeva function w evaluated in the upper
    half-plane; the left half-plane uses erfc(z) = 2 - erfc(-z).
    """
    z = jnp.asarray(z, dtype=complex)
    right = z.real >= 0
    zr = jnp.where(right, z, -z)
    value = jnp.exp(-zr * zr) * faddeeva_upper(1j * zr)
    return jnp.where(right, value, 2.0 - value)


@jax.jit
def erfc_derivative(z):
    z = jnp.asarray(z, dtype=complex)
    return -2.0 / _SQRT_PI * jnp.exp(-z * z)


def _seed_zeros(count, nfixed=8):
    # zeros in the upper half-plane satisfy exp(-z^2) = -2 sqrt(pi) z (1 + O(z^-2)) with
    # -z^2 = log(-2 sqrt(pi) z) + 2 pi i k, k = 1, 2, ...
    k = np.arange(1, count + 1)
    z = -np.sqrt(-np.log(2.0 * _SQRT_PI * np.sqrt(np.pi * k)) - 2j * np.pi * k)
    for _ in range(nfixed):
        z = -np.sqrt(-np.log(-2.0 * _SQRT_PI * z) - 2j * np.pi * k)
    return z


@partial(jax.jit, static_argnames=("niter",))
def _newton(z, niter):
    def _body(i, z):
        step = erfc(z) / erfc_derivative(z)
        return z - jnp.where(jnp.isfinite(step), step, 0.0)

    return jax.lax.fori_loop(0, niter, _body, z)


def erfc_zeros(count, params=None):
    """The first ``count`` zeros of erfc in the upper half-plane, ordered by modulus.

    Parameters:
        count:  Number of zeros, at least 1.
        params: Optional `SzegoParams` for the Newton iteration count and residual tolerance.

    Returns:
        A numpy array of complex zeros, all in the sector pi/2 < arg w < 3 pi/4.
    """
    params = SzegoParams.check(params)
    count = int(count)
    if count < 1:
        raise SzegoValueError("erfc_zeros needs count >= 1.", count)

    seeds = _seed_zeros(count)
    zeros = np.asarray(_newton(jnp.asarray(seeds), params.erfc_newton_iterations))
    zeros = zeros[np.argsort(np.abs(zeros))]

    residual = np.abs(np.asarray(erfc(zeros)))
    scale = np.abs(np.asarray(erfc_derivative(zeros))) * (1.0 + np.abs(zeros))
    args = np.angle(zeros)
    ok = (
        np.isfinite(zeros)
        & (residual <= params.erfc_residual_tolerance * scale)
        & (args > 0.5 * np.pi)
        & (args < 0.75 * np.pi)
    )
    distinct = np.all(np.diff(np.abs(zeros)) > 0)
    if not (np.all(ok) and distinct):
        raise SzegoConvergenceError(
            "Newton refinement of the erfc zeros did not converge for indices %s."
            % np.flatnonzero(~ok).tolist(),
            result=zeros,
        )
    return zeros
