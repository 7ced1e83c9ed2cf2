from functools import partial

import jax
import jax.numpy as jnp
import numpy as np
from jax.tree_util import tree_flatten


def has_tracers(x):
    """True if any leaf of ``x`` is a JAX tracer, i.e. the call is being traced."""
    return any(isinstance(leaf, jax.core.Tracer) for leaf in tree_flatten(x)[0])


def _first_item(x, dtype):
    return jnp.ravel(jnp.asarray(x, dtype=dtype))[0].item()


def cast_to_python_float(x):
    """A python float from a number or the first entry of a JAX array."""
    return _first_item(x, float) if isinstance(x, jax.Array) else float(x)


def ensure_hashable(v):
    """Nested tuples of python scalars for arrays and lists; NaNs all map to numpy.nan so
    equal parameter sets hash equally."""
    if isinstance(v, (jax.Array, np.ndarray)):
        v = v.tolist()
    if isinstance(v, (list, tuple)):
        return tuple(ensure_hashable(x) for x in v)
    if isinstance(v, float) and np.isnan(v):
        return np.nan
    return v


@jax.jit
def wrap_angle(x):
    """Reduce an angle to its representative in (-pi, pi]."""
    y = jnp.remainder(x + jnp.pi, 2.0 * jnp.pi) - jnp.pi
    return jnp.where(y <= -jnp.pi, y + 2.0 * jnp.pi, y)


def unit_power(zeta, k):
    """Return zeta**k for a unit-modulus zeta.

    Quarter turns are looked up exactly so that e.g. i**k keeps exact zeros in its real or
    imaginary part; other unit numbers go through exp(i k arg zeta).
    """
    zeta = complex(zeta)
    k = np.asarray(k)
    for quarter, value in enumerate((1.0, 1.0j, -1.0, -1.0j)):
        if zeta == value:
            table = np.array([1.0, 1.0j, -1.0, -1.0j])
            return table[(quarter * k) % 4]
    return np.exp(1j * np.angle(zeta) * k)


@partial(jax.jit, static_argnames=("niter",))
def bisect_for_root(func, low, high, niter=75):
    """Bisect for a sign change of ``func`` on [low, high] and return the end of the final
    bracket on the ``high`` side. ``func`` must be a ``functools.partial`` so that its bound
    values are traced."""

    def _step(i, bracket):
        low, high, fhigh = bracket
        mid = 0.5 * (low + high)
        fmid = func(mid)
        upper = fmid * fhigh < 0
        return (
            jnp.where(upper, mid, low),
            jnp.where(upper, high, mid),
            jnp.where(upper, fhigh, fmid),
        )

    return jax.lax.fori_loop(0, niter, _step, (low, high, func(high)))[1]
