import math
from functools import partial
from typing import NamedTuple, Tuple

import jax.numpy as jnp
import numpy as np
from jax import Array, jit

from jax_szego.errors import SzegoConvergenceError, SzegoValueError
from jax_szego.params import SzegoParams


class QuadratureResult(NamedTuple):
    value: complex
    error_estimate: float
    evaluations: int


def abs_weights(n: int):
    assert n > 1
    points = -jnp.cos(jnp.linspace(0, jnp.pi, n))

    if n == 2:
        weights = jnp.array([1.0, 1.0])
        return points, weights

    n -= 1
    N = jnp.arange(1, n, 2)
    length = len(N)
    m = n - length
    v0 = jnp.concatenate([2.0 / N / (N - 2), jnp.array([1.0 / N[-1]]), jnp.zeros(m)])
    v2 = -v0[:-1] - v0[:0:-1]
    g0 = -jnp.ones(n)
    g0 = g0.at[length].add(n)
    g0 = g0.at[m].add(n)
    g = g0 / (n**2 - 1 + (n % 2))

    w = jnp.fft.ihfft(v2 + g)
    w = w.real

    if n % 2 == 1:
        weights = jnp.concatenate([w, w[::-1]])
    else:
        weights = jnp.concatenate([w, w[len(w) - 2 :: -1]])

    return points, weights


class ClenshawCurtisQuad(NamedTuple):
    """Clenshaw-Curtis rule on [0, 1] with the weights of the embedded half-order rule
    folded into ``errw`` for an error estimate."""

    order: int
    absc: Array
    absw: Array
    errw: Array

    @classmethod
    def init(cls, order: int):
        order = 2 * order + 1
        absc, absw, errw = cls.compute_weights(order)
        absc, absw, errw = cls.rescale_weights(absc, absw, errw)
        return cls(order=order, absc=absc, absw=absw, errw=errw)

    @staticmethod
    def compute_weights(order: int):
        x, wx = abs_weights(order)
        nsub = (order + 1) // 2
        _, wsub = abs_weights(nsub)
        errw = wx.at[::2].add(-wsub)
        return x, wx, errw

    @staticmethod
    def rescale_weights(
        absc: Array,
        absw: Array,
        errw: Array,
        *,
        interval_in: Tuple[float, float] = (-1, 1),
        interval_out: Tuple[float, float] = (0, 1),
    ):
        (in_min, in_max), (out_min, out_max) = interval_in, interval_out
        delta_in, delta_out = in_max - in_min, out_max - out_min
        absc = ((absc - in_min) * out_max - (absc - in_max) * out_min) / delta_in
        absw = delta_out / delta_in * absw
        errw = delta_out / delta_in * errw
        return absc, absw, errw


@partial(jit, static_argnums=(0,))
def quad_integral(f, a, b, quad: ClenshawCurtisQuad):
    """Integrate f over each panel [a_k, b_k]; returns the per-panel integrals and the
    per-panel embedded error estimates."""
    a = jnp.atleast_1d(a)
    b = jnp.atleast_1d(b)
    d = b - a
    xi = a[jnp.newaxis, :] + jnp.einsum("i...,k...->ik...", quad.absc, d)
    fi = f(xi)
    S = d * jnp.einsum("i...,i...", quad.absw, fi)
    E = d * jnp.einsum("i...,i...", quad.errw, fi)
    return S, E


def integrate_composite(f, a, b, panels=16, order=16):
    """Composite Clenshaw-Curtis quadrature of a smooth integrand on a finite interval.

    ``f`` must accept arrays and be hashable (it is a static argument of the jitted kernel).
    """
    if not (np.isfinite(a) and np.isfinite(b)):
        raise SzegoValueError("integrate_composite needs a finite interval.", (a, b))
    quad = ClenshawCurtisQuad.init(order)
    edges = jnp.linspace(a, b, panels + 1)
    S, E = quad_integral(f, edges[:-1], edges[1:], quad)
    return QuadratureResult(
        value=jnp.sum(S).item(),
        error_estimate=float(jnp.sum(jnp.abs(E))),
        evaluations=int(panels * quad.order),
    )


# half-widths of the tanh-sinh and exp-sinh step ranges; beyond them every node lies within
# an underflowing distance of the endpoints
_TANH_SINH_TMAX = 6.5
_EXP_SINH_TMIN = -6.5
_EXP_SINH_TMAX = 4.5


def _tanh_sinh_nodes(a, b, h):
    """Nodes and weights of the tanh-sinh rule with step h on [a, b].

    The distance to the nearest endpoint is computed directly so that integrands with
    endpoint singularities are never evaluated at the endpoint itself.
    """
    k = int(math.ceil(_TANH_SINH_TMAX / h))
    t = h * np.arange(-k, k + 1)
    u = 0.5 * np.pi * np.sinh(t)
    half = 0.5 * (b - a)
    au = np.abs(u)
    e2 = np.exp(-2.0 * au)
    # half * (1 - tanh|u|) = half * 2 e^{-2|u|} / (1 + e^{-2|u|})
    delta = half * 2.0 * e2 / (1.0 + e2)
    x = np.where(u > 0, b - delta, a + delta)
    # d/dt tanh(u) = (pi/2) cosh(t) / cosh(u)^2
    w = h * half * 0.5 * np.pi * np.cosh(t) * 4.0 * e2 / (1.0 + e2) ** 2
    keep = (delta > 0) & (w > 0)
    return x[keep], w[keep]


def _exp_sinh_nodes(a, h):
    k0 = int(math.ceil(-_EXP_SINH_TMIN / h))
    k1 = int(math.ceil(_EXP_SINH_TMAX / h))
    t = h * np.arange(-k0, k1 + 1)
    u = 0.5 * np.pi * np.sinh(t)
    eu = np.exp(u)
    x = a + eu
    w = h * eu * 0.5 * np.pi * np.cosh(t)
    keep = (eu > 0) & (w > 0) & np.isfinite(w)
    return x[keep], w[keep]


def integrate_adaptive(f, a, b, tol=None, params=None, endpoint_exponents=None):
    """Integrate f over [a, b] with a doubly exponential rule, halving the step until two
    successive levels agree.

    Finite intervals use the tanh-sinh rule, [a, inf) the exp-sinh rule. Both cluster nodes
    at the endpoints, so integrable endpoint singularities t^p with p > -1 converge without
    special treatment.

    Parameters:
        f:                  Vectorized integrand accepting an array of abscissae.
        a, b:               Interval; ``b`` may be ``numpy.inf``.
        tol:                Requested tolerance; the result satisfies
                            |error| <= max(tol |value|, tol). [default: params.quad_tolerance]
        params:             Optional `SzegoParams`.
        endpoint_exponents: Optional (p_a, p_b) exponents of declared endpoint singularities,
                            each required to be > -1.

    Returns:
        A `QuadratureResult`.
    """
    params = SzegoParams.check(params)
    tol = params.quad_tolerance if tol is None else tol
    if endpoint_exponents is not None:
        for p in endpoint_exponents:
            if p is not None and p <= -1:
                raise SzegoValueError(
                    "Endpoint singularities must be integrable (exponent > -1).", p
                )
    if np.isinf(a) or (np.isinf(b) and b < 0):
        raise SzegoValueError("Only [a, b] and [a, inf) intervals are supported.", (a, b))
    if a == b:
        return QuadratureResult(value=0.0, error_estimate=0.0, evaluations=1)
    if b < a:
        if endpoint_exponents is not None:
            endpoint_exponents = tuple(endpoint_exponents)[::-1]
        res = integrate_adaptive(f, b, a, tol=tol, params=params, endpoint_exponents=endpoint_exponents)
        return QuadratureResult(-res.value, res.error_estimate, res.evaluations)

    evaluations = 0
    previous = None
    value = None
    error = np.inf
    for level in range(params.quad_max_level + 1):
        h = 2.0**-level
        if np.isinf(b):
            x, w = _exp_sinh_nodes(a, h)
        else:
            x, w = _tanh_sinh_nodes(a, b, h)
        fx = np.asarray(f(jnp.asarray(x)))
        evaluations += x.size
        terms = w * fx
        if not np.all(np.isfinite(terms)):
            raise SzegoConvergenceError(
                "Integrand is not finite on the open interval (%r, %r)." % (a, b),
                result=QuadratureResult(np.nan, np.inf, evaluations),
            )
        value = np.sum(terms)
        if previous is not None:
            error = abs(value - previous)
            if level >= 3 and error <= max(tol * abs(value), tol):
                return QuadratureResult(_as_scalar(value), float(error), evaluations)
        previous = value

    raise SzegoConvergenceError(
        "Adaptive quadrature did not reach tolerance %r (estimate %r)." % (tol, error),
        result=QuadratureResult(_as_scalar(value), float(error), evaluations),
    )


def _as_scalar(value):
    if np.iscomplexobj(value):
        return complex(value)
    return float(value)


def gauss_jacobi_nodes(p, q, m):
    """Gauss-Jacobi nodes and weights on [-1, 1] for the weight (1 - t)^q (1 + t)^p.

    Built by the Golub-Welsch eigenvalue method on the Jacobi matrix of the monic Jacobi
    recurrence; the rule is exact for polynomials of degree <= 2m - 1.

    Parameters:
        p:  Exponent at t = -1, p > -1.
        q:  Exponent at t = +1, q > -1.
        m:  Number of nodes, m >= 1.

    Returns:
        (nodes, weights) as numpy arrays, nodes increasing.
    """
    p = float(p)
    q = float(q)
    m = int(m)
    if p <= -1 or q <= -1:
        raise SzegoValueError("Jacobi exponents must be > -1.", (p, q))
    if m < 1:
        raise SzegoValueError("Number of nodes must be >= 1.", m)

    alpha, beta = q, p
    ab = alpha + beta
    n = np.arange(m, dtype=float)
    denom = (2 * n + ab) * (2 * n + ab + 2)
    diag = np.where(
        n == 0,
        (beta - alpha) / (ab + 2),
        (beta**2 - alpha**2) / np.where(n == 0, 1.0, denom),
    )
    k = np.arange(1, m, dtype=float)
    off2 = (
        4
        * k
        * (k + alpha)
        * (k + beta)
        * (k + ab)
        / ((2 * k + ab) ** 2 * (2 * k + ab + 1) * (2 * k + ab - 1))
    )
    if m > 1:
        # k = 1 in cancelled form, finite when alpha + beta = -1
        off2[0] = 4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab))
    J = np.diag(diag) + np.diag(np.sqrt(off2), 1) + np.diag(np.sqrt(off2), -1)

    nodes, vectors = jnp.linalg.eigh(jnp.asarray(J))
    mu0 = math.exp(
        (ab + 1) * math.log(2.0)
        + math.lgamma(alpha + 1)
        + math.lgamma(beta + 1)
        - math.lgamma(ab + 2)
    )
    weights = mu0 * np.asarray(vectors[0, :]) ** 2
    return np.asarray(nodes), weights
