"""Asymptotic series of Laplace-type integrals F(lambda) = int f(t) e^{lambda g(t)} dt and
quadrature oracles to check them against.

A series is a list of terms c lambda^{-p} (log lambda)^q times an exponential factor
e^{g_peak lambda} that is kept apart so that values stay representable for large lambda.
"""

import math
from dataclasses import dataclass

import jax.numpy as jnp
import numpy as np

from jax_szego.core.gamma import gamma, gamma_derivative
from jax_szego.core.integrate import integrate_adaptive
from jax_szego.core.scaled import ScaledComplex
from jax_szego.errors import SzegoRangeError, SzegoValueError
from jax_szego.params import SzegoParams

WATSON = "watson"
LOG_POWER = "log-power"
BOUNDARY = "boundary"
INTERIOR = "interior"


@dataclass(frozen=True)
class AsymptoticSeries:
    """sum_i c_i lambda^{-p_i} (log lambda)^{q_i}, times e^{exponent lambda}.

    Attributes:
        terms:                  Tuple of (c, p, q), ordered by decreasing size: p nondecreasing
                                and q decreasing within equal p.
        origin:                 One of WATSON, LOG_POWER, BOUNDARY, INTERIOR.
        exponent:               The value of g at its maximum.
        relative_error_order:   r in the relative error O(lambda^{-r}) of a leading-term-only
                                series, or None for a full expansion.
    """

    terms: tuple
    origin: str
    exponent: float = 0.0
    relative_error_order: float = None

    def __post_init__(self):
        keys = [(p, -q) for _, p, q in self.terms]
        if keys != sorted(keys):
            raise SzegoValueError("Series terms are not ordered by decreasing size.", self.terms)

    def __len__(self):
        return len(self.terms)

    def term(self, i, lam):
        c, p, q = self.terms[i]
        loglam = math.log(lam)
        value = complex(c) * lam ** (-p)
        if q != 0:
            value *= loglam**q
        return value

    def __str__(self):
        return format_series(self)


def _gamma_real(x):
    return complex(gamma(x)).real


def _check_watson_input(terms_in):
    if len(terms_in) == 0:
        raise SzegoValueError("Watson's lemma needs at least one term.", terms_in)
    bs = [float(np.real(b)) for _, b in terms_in]
    if bs[0] <= -1:
        raise SzegoValueError("The leading exponent must be > -1.", bs[0])
    if any(b1 <= b0 for b0, b1 in zip(bs[:-1], bs[1:])):
        raise SzegoValueError("Watson exponents must be strictly increasing.", tuple(bs))
    return bs


def watson(terms_in, count):
    """Watson's lemma: f(t) ~ sum a_k t^{b_k} as t -> 0+ gives
    int_0^T f(t) e^{-lambda t} dt ~ sum a_k Gamma(b_k + 1) lambda^{-b_k - 1}.

    Parameters:
        terms_in:   Sequence of (a_k, b_k), b_k strictly increasing and b_0 > -1.
        count:      Number of terms to keep, at most len(terms_in).
    """
    bs = _check_watson_input(terms_in)
    if not 1 <= count <= len(terms_in):
        raise SzegoRangeError("count out of range.", count, 1, len(terms_in))
    terms = tuple(
        (complex(a) * _gamma_real(b + 1.0), b + 1.0, 0.0)
        for (a, _), b in zip(terms_in[:count], bs[:count])
    )
    return AsymptoticSeries(terms=terms, origin=WATSON)


def _binomial(b, k):
    out = 1.0
    for j in range(k):
        out *= (b - j) / (j + 1)
    return out


def log_power(a, b, count):
    """f(t) = t^{a-1} (-log t)^b gives
    int_0^inf f(t) e^{-lambda t} dt ~ lambda^{-a} sum_k (-1)^k binom(b, k) Gamma^{(k)}(a) (log lambda)^{b-k}.

    For a nonnegative integer b the series terminates after b + 1 terms and is exact.
    """
    a = float(a)
    b = float(b)
    if a <= 0:
        raise SzegoValueError("log_power needs a > 0.", a)
    if count < 1:
        raise SzegoValueError("count must be >= 1.", count)
    terminating = b >= 0 and b == int(b)
    if terminating:
        count = min(count, int(b) + 1)
    terms = tuple(
        ((-1) ** k * _binomial(b, k) * gamma_derivative(a, k), a, b - k) for k in range(count)
    )
    return AsymptoticSeries(terms=terms, origin=LOG_POWER)


def _check_real(x, name):
    if np.iscomplexobj(x) and np.imag(x) != 0:
        raise SzegoValueError("%s must be real." % name, x)
    return float(np.real(x))


def boundary_leading(p, g_at_a, gprime_at_a, f_scale=1.0):
    """Maximum of g at the left endpoint with g'(a) < 0 and f(t) ~ f_scale (t - a)^p:
    F(lambda) ~ f_scale Gamma(p + 1) (-g'(a) lambda)^{-p-1} e^{g(a) lambda}."""
    p = _check_real(p, "p")
    if p <= -1:
        raise SzegoValueError("The endpoint exponent must be > -1.", p)
    gprime = _check_real(gprime_at_a, "g'(a)")
    if gprime >= 0:
        raise SzegoValueError("The boundary maximum needs g'(a) < 0.", gprime)
    c = f_scale * _gamma_real(p + 1.0) * (-gprime) ** (-p - 1.0)
    return AsymptoticSeries(
        terms=((complex(c), p + 1.0, 0.0),),
        origin=BOUNDARY,
        exponent=float(g_at_a),
        relative_error_order=None,
    )


def interior_leading(n, gpp_at_t0, g_at_t0, f_scale=1.0):
    """Interior maximum at t0 with g''(t0) < 0 and f(t) ~ f_scale (t - t0)^{2n}:
    F(lambda) ~ f_scale Gamma(n + 1/2) (2 / (-g''(t0) lambda))^{n + 1/2} e^{g(t0) lambda}
    with relative error O(lambda^{-1/2})."""
    if int(n) != n or n < 0:
        raise SzegoValueError("n must be a nonnegative integer.", n)
    gpp = _check_real(gpp_at_t0, "g''(t0)")
    if gpp >= 0:
        raise SzegoValueError("The interior maximum needs g''(t0) < 0.", gpp)
    s = n + 0.5
    c = f_scale * _gamma_real(s) * (2.0 / -gpp) ** s
    return AsymptoticSeries(
        terms=((complex(c), s, 0.0),),
        origin=INTERIOR,
        exponent=float(g_at_t0),
        relative_error_order=0.5,
    )


def series_eval(s, lam, terms=None, scaled=False):
    """Partial sum of ``terms`` terms at ``lam`` and the magnitude of the first omitted term
    (0 when none is left).

    The exponential factor e^{exponent lambda} is included unless ``scaled`` is True.
    """
    terms = len(s) if terms is None else terms
    if not 1 <= terms <= len(s):
        raise SzegoRangeError("terms out of range.", terms, 1, len(s))
    lam = float(lam)
    value = sum(s.term(i, lam) for i in range(terms))
    omitted = abs(s.term(terms, lam)) if terms < len(s) else 0.0
    if not scaled and s.exponent != 0:
        factor = ScaledComplex.from_log(s.exponent * lam)
        value = complex((factor * ScaledComplex.from_complex(value)).to_complex())
        omitted = abs(complex((factor * ScaledComplex.from_complex(omitted)).to_complex()))
    return complex(value), float(omitted)


def _format_number(c):
    c = complex(c)
    if c.imag == 0:
        return "%.12g" % c.real
    return "(%.12g%+.12gj)" % (c.real, c.imag)


def format_series(s):
    """Canonical text form "c * λ^{-p} * (log λ)^{q} + ..."."""
    parts = []
    for c, p, q in s.terms:
        piece = "%s * λ^{-%.12g}" % (_format_number(c), p)
        if q != 0:
            piece += " * (log λ)^{%.12g}" % q
        parts.append(piece)
    text = " + ".join(parts)
    if s.exponent != 0:
        text = "exp(%.12g λ) * (%s)" % (s.exponent, text)
    return text


def rescale_watson_terms(terms_in, c):
    """Coefficients of c f(c t) from those of f: a_k -> a_k c^{b_k + 1}.

    Since int c f(c t) e^{-lambda t} dt = F(lambda / c), the Watson series maps term by term.
    """
    c = float(c)
    if c <= 0:
        raise SzegoValueError("The scale must be positive.", c)
    return [(a * c ** (b + 1.0), b) for a, b in terms_in]


def laplace_integral(f, g, a, b, lam, peak=0.0, tol=None, params=None, endpoint_exponents=None):
    """int_a^b f(t) e^{lambda (g(t) - peak)} dt by adaptive quadrature."""
    lam = float(lam)

    def _integrand(t):
        return f(t) * jnp.exp(lam * (g(t) - peak))

    return integrate_adaptive(
        _integrand, a, b, tol=tol, params=params, endpoint_exponents=endpoint_exponents
    )


def watson_quadrature(f, lam, T=np.inf, tol=None, params=None):
    """int_0^T f(t) e^{-lambda t} dt computed in the variable s = lambda t."""
    lam = float(lam)

    def _integrand(s):
        return f(s / lam) * jnp.exp(-s) / lam

    return integrate_adaptive(_integrand, 0.0, lam * T, tol=tol, params=params)


def _sample_interior(a, b, samples):
    if np.isinf(b):
        # geometric out to a + 1e12 so that g creeping up to M at infinity is seen
        return a + np.logspace(-3, 12, samples)
    return np.linspace(a, b, samples + 2)[1:-1]


def tail_bound_check(f, g, M, interval, lam_grid=(1.0, 2.0, 4.0, 8.0), samples=257, gap=1e-6, params=None):
    """Check that int_I f e^{lambda g} dt = O(e^{M lambda}) on I when g < M.

    g is sampled on the open interval; a sample with g >= M - gap is a precondition
    violation (`SzegoValueError`), which also catches g creeping up to M at infinity. Then
    int_I |f| e^{lambda (g - M)} dt is computed on ``lam_grid`` and must be nonincreasing.

    Returns:
        True when the envelope is nonincreasing; an empty interval is trivially True.
    """
    params = SzegoParams.check(params)
    a, b = (float(x) for x in interval)
    if not b > a:
        return True
    t = _sample_interior(a, b, samples)
    gt = np.asarray(g(jnp.asarray(t)), dtype=float)
    worst = float(np.max(gt))
    if not np.all(np.isfinite(gt)) or worst >= M - gap:
        raise SzegoValueError(
            "g is not bounded away from M on the interval (max sampled g = %r)." % worst, M
        )

    def _absf(t):
        return jnp.abs(f(t))

    previous = np.inf
    for lam in sorted(lam_grid):
        value = laplace_integral(_absf, g, a, b, lam, peak=M, params=params).value
        if value > previous * (1.0 + 1e-9):
            return False
        previous = value
    return True


# Built-in Watson integrands on [0, inf): (f, a_k, b_k) with f(t) ~ sum a_k t^{b_k}. All three
# are Stieltjes transforms, so their series alternate and bracket the integral.


def _inverse_linear(t):
    return 1.0 / (1.0 + t)


def _inverse_sqrt_product(t):
    return 1.0 / jnp.sqrt(t * (1.0 + t))


def _log1p_ratio(t):
    safe = jnp.where(t == 0, 1.0, t)
    return jnp.where(t == 0, 1.0, jnp.log1p(safe) / safe)


def _inverse_linear_terms(count):
    return [((-1.0) ** k, float(k)) for k in range(count)]


def _inverse_sqrt_product_terms(count):
    return [(_binomial(-0.5, k), k - 0.5) for k in range(count)]


def _log1p_ratio_terms(count):
    return [((-1.0) ** k / (k + 1.0), float(k)) for k in range(count)]


BUILTIN_INTEGRANDS = {
    "inverse-linear": (_inverse_linear, _inverse_linear_terms),
    "inverse-sqrt-product": (_inverse_sqrt_product, _inverse_sqrt_product_terms),
    "log1p-ratio": (_log1p_ratio, _log1p_ratio_terms),
}


def _neg_log(t):
    return -jnp.log(t)


# int_0^inf (-log t) e^{-lambda t} dt, the a = 1, b = 1 case of `log_power`
LOG_POWER_DEMO = (_neg_log, 1.0, 1.0)


def builtin_watson(name, count):
    """(series, integrand) of a built-in integrand."""
    if name not in BUILTIN_INTEGRANDS:
        raise SzegoValueError("Unknown integrand.", name, sorted(BUILTIN_INTEGRANDS))
    f, make_terms = BUILTIN_INTEGRANDS[name]
    return watson(make_terms(count), count), f


def watson_table(name, lam_grid, count, params=None):
    """Rows (lambda, quadrature, series, first_omitted, abs_error) for a built-in integrand."""
    s, f = builtin_watson(name, count + 1)
    rows = []
    for lam in lam_grid:
        quad = watson_quadrature(f, lam, params=params).value
        value, omitted = series_eval(s, lam, count)
        rows.append((float(lam), complex(quad), value, omitted, abs(quad - value)))
    return rows
