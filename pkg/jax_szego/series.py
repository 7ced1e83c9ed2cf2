"""Entire-function families with prescribed exponential growth and their scaled partial sums.

Every family stores the raw function g (sin, the Airy function, ...) together with the affine
bookkeeping that turns it into the normalized function

    f(z) = normalization * g(dilation * rotation * z),

which grows like z^a exp(z^lambda) along the positive real axis with unit amplitude. The
partial sums used everywhere else are p_{n-1}[f](r_n z) with r_n = (n / lambda)^(1 / lambda).
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import jax
import jax.numpy as jnp
import numpy as np
from tensorflow_probability.substrates.jax.math import bessel_ive as _tfp_bessel_ive

from jax_szego.core.gamma import _log_gamma
from jax_szego.core.integrate import gauss_jacobi_nodes
from jax_szego.core.scaled import ScaledComplex, horner
from jax_szego.core.utils import (
    cast_to_python_float,
    ensure_hashable,
    unit_power,
    wrap_angle,
)
from jax_szego.errors import (
    SzegoConvergenceError,
    SzegoDegenerateError,
    SzegoIncompatibleValuesError,
    SzegoNotImplementedError,
    SzegoRangeError,
    SzegoValueError,
)

RADIUS_MODES = ("standard", "mittag_leffler_corrected")
_UNIT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class GrowthSpec:
    """Growth of a normalized family in its directions of maximal exponential growth.

    Along each direction zeta_k the function behaves like
    A_k (z / zeta_k)^{b_k} exp((z / zeta_k)^lambda) inside the sector
    |arg(z / zeta_k)| <= theta. Direction 0 is the positive real axis with A_0 = 1 and
    b_0 = a.

    Parameters:
        lambda_:        Order lambda > 0.
        directions:     Tuple of (zeta, A, b) triples, the first being (1, 1, a).
        log_exponent:   Exponent of an extra (log z)^b factor; only allowed with a single
                        direction. [default: 0]
        mu:             Growth bound outside the sectors, mu < 1. [default: 0]
        theta:          Sector half-width in (0, pi). [default: pi/2]
    """

    lambda_: float
    directions: tuple
    log_exponent: complex = 0.0
    mu: float = 0.0
    theta: float = 0.5 * math.pi

    def __post_init__(self):
        if not self.lambda_ > 0:
            raise SzegoRangeError("lambda must be positive.", self.lambda_, 0.0, None)
        if not 0 < self.theta < math.pi:
            raise SzegoRangeError("theta must be in (0, pi).", self.theta, 0.0, math.pi)
        if not self.mu < 1:
            raise SzegoRangeError("mu must be < 1.", self.mu, None, 1.0)
        if len(self.directions) == 0:
            raise SzegoValueError("At least one direction is needed.", self.directions)
        zeta0, A0, _ = self.directions[0]
        if zeta0 != 1 or A0 != 1:
            raise SzegoValueError(
                "The principal direction must be (1, 1, a).", self.directions[0]
            )
        args = []
        for zeta, _, _ in self.directions:
            if abs(abs(zeta) - 1.0) > _UNIT_TOLERANCE:
                raise SzegoValueError("Directions must have unit modulus.", zeta)
            args.append(np.angle(zeta))
        for j in range(len(args)):
            for k in range(j + 1, len(args)):
                gap = abs(float(wrap_angle(args[j] - args[k])))
                if gap <= 2 * self.theta:
                    raise SzegoIncompatibleValuesError(
                        "Growth sectors overlap.",
                        zeta_j=self.directions[j][0],
                        zeta_k=self.directions[k][0],
                        theta=self.theta,
                    )
        if self.log_exponent != 0 and len(self.directions) > 1:
            raise SzegoIncompatibleValuesError(
                "A (log z)^b factor is only supported with one direction.",
                log_exponent=self.log_exponent,
                ndirections=len(self.directions),
            )

    @property
    def a(self):
        return self.directions[0][2]

    @property
    def num_directions(self):
        return len(self.directions)

    def dominant_directions(self, tol=1e-12):
        """Indices k of the directions with maximal Re b_k (b_0 = a)."""
        reb = np.array([complex(b).real for _, _, b in self.directions])
        return tuple(int(k) for k in np.flatnonzero(reb >= reb.max() - tol))


@dataclass(frozen=True)
class FunctionFamily:
    """A named entire function together with its growth data and normalization.

    Use `make_family` to build one. The Maclaurin coefficients of the raw function are
    available from `coefficient`/`raw_coefficients`, those of the normalized function from
    `normalized_coefficients`.
    """

    name: str
    growth: GrowthSpec
    params: tuple = ()
    rotation: complex = 1.0
    dilation: float = 1.0
    normalization: complex = 1.0
    has_exact: bool = field(default=False, compare=False)

    @property
    def lambda_(self):
        return self.growth.lambda_

    def param(self, key):
        return dict(self.params)[key]

    def scale(self):
        """The factor dilation * rotation mapping the normalized plane onto the raw one."""
        return self.dilation * self.rotation

    def radius(self, n, radius_mode="standard"):
        if radius_mode not in RADIUS_MODES:
            raise SzegoValueError("Unknown radius mode.", radius_mode, RADIUS_MODES)
        lam = self.lambda_
        r = (n / lam) ** (1.0 / lam)
        if radius_mode == "mittag_leffler_corrected":
            r *= math.exp(1.0 / (2.0 * n))
        return r

    def raw_coefficients(self, kmax):
        """Raw Maclaurin coefficients c_0 .. c_{kmax-1} as a batched ScaledComplex."""
        return _raw_coefficients(self, int(kmax))

    def normalized_coefficients(self, kmax, radius=1.0):
        """Coefficients of f(radius * z), i.e. normalization * c_k * (dilation * rotation *
        radius)^k."""
        return _normalized_coefficients(self, int(kmax), float(radius))

    def eval_exact(self, z):
        """f(z) in the normalized plane as a ScaledComplex, for families with a direct
        evaluator."""
        evaluator = _FAMILIES[self.name][2]
        if evaluator is None:
            raise SzegoNotImplementedError(
                "Family %s has no exact evaluator; use eval_surrogate." % self.name
            )
        return evaluator(self, np.asarray(z, dtype=complex))

    def __repr__(self):
        return "jax_szego.FunctionFamily(%r, %r)" % (self.name, dict(self.params))


@dataclass(frozen=True)
class PartialSumPoly:
    """The polynomial p_{n-1}[f](r_n z) = sum_k d_k z^k, k = 0 .. n-1.

    The coefficients are stored divided by 2**prescale_exponent so that the largest one has
    modulus in [1, 2).
    """

    family: FunctionFamily
    n: int
    r_n: float
    coeffs: ScaledComplex
    prescale_exponent: int
    radius_mode: str = "standard"

    @property
    def nonzero(self):
        return np.asarray(self.coeffs.mantissa != 0)

    @property
    def degree(self):
        """Degree of the polynomial; lower than n - 1 when leading coefficients vanish."""
        return int(np.flatnonzero(self.nonzero).max())

    @property
    def degree_reduced(self):
        return self.degree < self.n - 1

    @property
    def zero_multiplicity(self):
        """Multiplicity of z = 0 as a root (number of vanishing low-order coefficients)."""
        return int(np.flatnonzero(self.nonzero).min())

    def prescaled_complex(self):
        """Prescaled coefficients as ordinary complex numbers, lowest degree first."""
        return np.asarray(self.coeffs.to_complex())

    def __call__(self, z):
        """Evaluate p_{n-1}[f](r_n z) (prescale undone) as a ScaledComplex."""
        p, _, _ = horner(self.coeffs.mantissa, self.coeffs.exponent, jnp.asarray(z))
        return p.ldexp(self.prescale_exponent)


FAMILY_NAMES = (
    "exp",
    "mittag_leffler",
    "sin",
    "cos",
    "bessel",
    "confluent",
    "expint",
    "airy_ai",
    "airy_bi",
    "parabolic_u",
)


def make_family(name, params=None, **kwargs):
    """Build a `FunctionFamily` by name.

    Parameters by family:
        exp:             none
        mittag_leffler:  lam > 1/2
        sin, cos:        none
        bessel:          nu, real and not a negative integer
        confluent:       alpha (not a nonpositive integer), beta, both real
        expint:          r in [-1, 1), p > -1, q > -1, poly (coefficients of a polynomial
                         factor in increasing degree) [default poly: (1,)]
        airy_ai:         branch in {"upper", "lower"}
        airy_bi:         none
        parabolic_u:     a (real), branch in {"negative", "upper", "lower"}
    """
    if name not in _FAMILIES:
        raise SzegoValueError("Unknown family.", name, FAMILY_NAMES)
    params = dict(params or {}, **kwargs)
    return _FAMILIES[name][0](params)


def coefficient(fam, k):
    """The raw Maclaurin coefficient c_k = g^{(k)}(0) / k! as a ScaledComplex."""
    k = int(k)
    if k < 0:
        raise SzegoValueError("Coefficient index must be nonnegative.", k)
    return fam.raw_coefficients(k + 1)[k]


def partial_sum(fam, n, radius_mode="standard", radius=None):
    """The scaled partial sum p_{n-1}[f](r_n z).

    Parameters:
        fam:            A `FunctionFamily`.
        n:              Number of terms, n >= 2.
        radius_mode:    "standard" for r_n = (n/lambda)^(1/lambda) or
                        "mittag_leffler_corrected" for the extra e^{1/(2n)} factor.
        radius:         Optional explicit scaling radius overriding r_n.

    Returns:
        A `PartialSumPoly`.
    """
    n = int(n)
    if n < 2:
        raise SzegoValueError("partial_sum needs n >= 2.", n)
    r_n = fam.radius(n, radius_mode) if radius is None else float(radius)
    coeffs = fam.normalized_coefficients(n, r_n)
    nonzero = np.asarray(coeffs.mantissa != 0)
    if not nonzero.any():
        raise SzegoDegenerateError(
            "All coefficients of p_%d of %s vanish." % (n - 1, fam.name)
        )
    if not np.all(np.isfinite(np.asarray(coeffs.mantissa))):
        raise SzegoDegenerateError(
            "Non-finite coefficients in p_%d of %s." % (n - 1, fam.name)
        )
    prescale = int(np.asarray(coeffs.exponent)[nonzero].max())
    return PartialSumPoly(
        family=fam,
        n=n,
        r_n=r_n,
        coeffs=coeffs.ldexp(-prescale),
        prescale_exponent=prescale,
        radius_mode=radius_mode,
    )


def series_value(fam, z, kmax, raw=False):
    """Sum the first kmax Maclaurin terms of f (or of g when ``raw``) at z."""
    coeffs = fam.raw_coefficients(kmax) if raw else fam.normalized_coefficients(kmax)
    p, _, _ = horner(coeffs.mantissa, coeffs.exponent, jnp.asarray(z))
    return p


def eval_surrogate(fam, z):
    """The growth model A_k (z/zeta_k)^{b_k} exp((z/zeta_k)^lambda) of f at z.

    The direction is the one whose sector |arg(z/zeta_k)| <= theta contains z; a
    (log z)^b factor is included for single-direction families that declare one.
    """
    z = complex(z)
    growth = fam.growth
    if z == 0:
        raise SzegoValueError("The growth model is not defined at 0.", z)
    for zeta, A, b in growth.directions:
        w = z / zeta
        if abs(np.angle(w)) <= growth.theta:
            log_value = (
                np.log(complex(A)) + b * np.log(w) + np.exp(fam.lambda_ * np.log(w))
            )
            if growth.log_exponent != 0:
                log_value += growth.log_exponent * np.log(np.log(w))
            return ScaledComplex.from_log(log_value)
    raise SzegoRangeError(
        "z lies outside every growth sector of %s." % fam.name,
        np.angle(z),
        -growth.theta,
        growth.theta,
    )


# ---------------------------------------------------------------------------------------
# coefficient generation


def _real_gamma_parts(x):
    """log|Gamma(x)| and sign(Gamma(x)) for real x; log is +inf at the poles."""
    x = np.asarray(x, dtype=float)
    pole = (x <= 0) & (x == np.round(x))
    safe = np.where(pole, 0.5, x)
    log_abs = np.asarray(_log_gamma(safe)).real
    sign = np.where(safe > 0, 1.0, np.where(np.ceil(-safe) % 2 == 1, -1.0, 1.0))
    return np.where(pole, np.inf, log_abs), np.where(pole, 1.0, sign)


def _from_log_sign(log_abs, sign):
    return ScaledComplex.from_log(jnp.asarray(log_abs, dtype=float)) * ScaledComplex(
        jnp.asarray(sign, dtype=complex)
    )


def _log_factorial(k):
    return np.asarray(jax.scipy.special.gammaln(np.asarray(k, dtype=float) + 1.0))


@lru_cache(maxsize=256)
def _raw_coefficients(fam, kmax):
    if kmax < 1:
        raise SzegoValueError("Need at least one coefficient.", kmax)
    return _FAMILIES[fam.name][1](fam, kmax)


@lru_cache(maxsize=256)
def _normalized_coefficients(fam, kmax, radius):
    raw = _raw_coefficients(fam, kmax)
    k = np.arange(kmax)
    scale = ScaledComplex.from_log(jnp.asarray(k * math.log(fam.dilation * radius)))
    phase = ScaledComplex(jnp.asarray(unit_power(fam.rotation, k), dtype=complex))
    kappa = ScaledComplex(jnp.asarray(complex(fam.normalization)))
    return raw * scale * phase * kappa


def _linear_recurrence(seeds, weights):
    """Run c_j = sum_m weights[j - s, m - 1] c_{j - m} (m = 1..L) from s seed values.

    Values with negative index are zero. Carried in scaled form so that the terms never
    underflow.
    """
    seeds = [complex(s) for s in seeds]
    nseed = len(seeds)
    nlag = weights.shape[1]
    window = ScaledComplex(jnp.asarray([0.0] * (nlag - nseed) + seeds, dtype=complex))

    def _step(carry, row):
        wm, we = carry
        # window holds c_{j-L} .. c_{j-1}; lag m is at position L - m
        terms = ScaledComplex(wm * row[::-1], we)
        total = terms[0]
        for i in range(1, nlag):
            total = total + terms[i]
        wm = jnp.concatenate([wm[1:], total.mantissa[None]])
        we = jnp.concatenate([we[1:], total.exponent[None]])
        return (wm, we), (total.mantissa, total.exponent)

    _, (m, e) = jax.lax.scan(
        _step, (window.mantissa, window.exponent), jnp.asarray(weights, dtype=complex)
    )
    head = ScaledComplex(jnp.asarray(seeds, dtype=complex))
    return ScaledComplex(
        jnp.concatenate([head.mantissa, m]),
        jnp.concatenate([head.exponent, e]),
        _normalized=True,
    )


def _params_tuple(params):
    return tuple(sorted((k, ensure_hashable(v)) for k, v in params.items()))


def _check_params(name, params, allowed):
    for key in params:
        if key not in allowed:
            raise SzegoValueError(
                "Invalid parameter for family %s." % name, key, sorted(allowed)
            )


# exp ------------------------------------------------------------------------------------

# |e^z| = e^{|z| cos arg z}; the sector must contain the imaginary axis of the curve
_EXP_THETA = 2.0 * math.pi / 3.0


def _make_exp(params):
    _check_params("exp", params, ())
    return FunctionFamily(
        name="exp",
        growth=GrowthSpec(1.0, ((1.0, 1.0, 0.0),), theta=_EXP_THETA, mu=math.cos(_EXP_THETA)),
        has_exact=True,
    )


def _raw_exp(fam, kmax):
    k = np.arange(kmax)
    return _from_log_sign(-_log_factorial(k), np.ones(kmax))


def _exact_exp(fam, z):
    return ScaledComplex.from_log(jnp.asarray(z))


# Mittag-Leffler --------------------------------------------------------------------------


def _make_mittag_leffler(params):
    _check_params("mittag_leffler", params, ("lam",))
    lam = cast_to_python_float(params.get("lam", 1.0))
    if not lam > 0.5:
        raise SzegoRangeError("Mittag-Leffler order must be > 1/2.", lam, 0.5, None)
    theta = 0.5 * math.pi / lam
    return FunctionFamily(
        name="mittag_leffler",
        growth=GrowthSpec(lam, ((1.0, 1.0, 0.0),), theta=theta, mu=0.0),
        params=_params_tuple({"lam": lam}),
        normalization=1.0 / lam,
    )


def _raw_mittag_leffler(fam, kmax):
    lam = fam.param("lam")
    k = np.arange(kmax)
    log_abs, sign = _real_gamma_parts(k / lam + 1.0)
    return _from_log_sign(-log_abs, sign)


# sin / cos ------------------------------------------------------------------------------


def _make_trig(name):
    def _make(params):
        _check_params(name, params, ())
        theta = math.pi / 3.0
        if name == "sin":
            # -2i sin(iz) = 2 sinh z = e^z - e^{-z}
            directions = ((1.0, 1.0, 0.0), (-1.0, -1.0, 0.0))
            normalization = -2.0j
        else:
            # 2 cos(iz) = 2 cosh z = e^z + e^{-z}
            directions = ((1.0, 1.0, 0.0), (-1.0, 1.0, 0.0))
            normalization = 2.0
        return FunctionFamily(
            name=name,
            growth=GrowthSpec(1.0, directions, theta=theta, mu=math.cos(theta)),
            rotation=1.0j,
            normalization=normalization,
            has_exact=True,
        )

    return _make


def _raw_trig(fam, kmax):
    k = np.arange(kmax)
    parity = 1 if fam.name == "sin" else 0
    present = (k % 2) == parity
    sign = np.where(((k - parity) // 2) % 2 == 0, 1.0, -1.0)
    log_abs = np.where(present, -_log_factorial(k), -np.inf)
    return _from_log_sign(log_abs, sign)


def _exact_trig(fam, z):
    # log(e^z -+ e^{-z}) evaluated on the dominant side
    sgn = -1.0 if fam.name == "sin" else 1.0
    z = jnp.asarray(z)
    right = z.real >= 0
    zr = jnp.where(right, z, -z)
    log_value = zr + jnp.log(1.0 + sgn * jnp.exp(-2.0 * zr))
    # sinh is odd: f(-z) = -f(z)
    log_value = jnp.where(right | (sgn > 0), log_value, log_value + 1j * jnp.pi)
    return ScaledComplex.from_log(log_value)


# Bessel ---------------------------------------------------------------------------------


def _make_bessel(params):
    _check_params("bessel", params, ("nu",))
    nu = cast_to_python_float(params.get("nu", 0.0))
    if nu < 0 and nu == round(nu):
        raise SzegoValueError("Bessel order must not be a negative integer.", nu)
    b = -nu - 0.5
    theta = math.pi / 3.0
    return FunctionFamily(
        name="bessel",
        growth=GrowthSpec(
            1.0, ((1.0, 1.0, b), (-1.0, 1.0, b)), theta=theta, mu=math.cos(theta)
        ),
        params=_params_tuple({"nu": nu}),
        rotation=1.0j,
        normalization=math.sqrt(2.0 * math.pi) / 2.0**nu,
        has_exact=True,
    )


def _raw_bessel(fam, kmax):
    # (z/2)^{-nu} J_nu(z) = sum_j (-1)^j 4^{-j} z^{2j} / (Gamma(nu + j + 1) j!)
    nu = fam.param("nu")
    k = np.arange(kmax)
    j = k // 2
    log_g, sign_g = _real_gamma_parts(nu + j + 1.0)
    log_abs = -j * math.log(4.0) - log_g - _log_factorial(j)
    log_abs = np.where(k % 2 == 0, log_abs, -np.inf)
    sign = np.where(j % 2 == 0, 1.0, -1.0) * sign_g
    return _from_log_sign(log_abs, sign)


def _exact_bessel(fam, z):
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z.imag) > 0):
        raise SzegoNotImplementedError(
            "The exact Bessel evaluator only supports real arguments."
        )
    nu = fam.param("nu")
    x = np.abs(z.real)
    # f(x) = kappa (x/2)^{-nu} I_nu(x), even in x
    log_value = (
        math.log(fam.normalization)
        + nu * np.log(2.0 / x)
        + np.log(np.asarray(_tfp_bessel_ive(nu, x)))
        + x
    )
    return ScaledComplex.from_log(jnp.asarray(log_value, dtype=complex))


# confluent hypergeometric ----------------------------------------------------------------


def _make_confluent(params):
    _check_params("confluent", params, ("alpha", "beta"))
    alpha = cast_to_python_float(params["alpha"])
    beta = cast_to_python_float(params["beta"])
    if alpha <= 0 and alpha == round(alpha):
        raise SzegoValueError("alpha must not be a nonpositive integer.", alpha)
    log_g, sign_g = _real_gamma_parts(alpha)
    theta = math.pi / 3.0
    return FunctionFamily(
        name="confluent",
        growth=GrowthSpec(
            1.0, ((1.0, 1.0, alpha - beta),), theta=theta, mu=math.cos(theta)
        ),
        params=_params_tuple({"alpha": alpha, "beta": beta}),
        normalization=float(sign_g * math.exp(log_g)),
    )


def _raw_confluent(fam, kmax):
    # Gamma(k + alpha) / (Gamma(alpha) Gamma(k + beta) k!)
    alpha, beta = fam.param("alpha"), fam.param("beta")
    k = np.arange(kmax)
    log_num, sign_num = _real_gamma_parts(k + alpha)
    log_a, sign_a = _real_gamma_parts(alpha)
    log_b, sign_b = _real_gamma_parts(k + beta)
    log_abs = log_num - log_a - log_b - _log_factorial(k)
    log_abs = np.where(np.isinf(log_b), -np.inf, log_abs)
    return _from_log_sign(log_abs, sign_num * sign_a * sign_b)


# exponential integrals --------------------------------------------------------------------


def _make_expint(params):
    _check_params("expint", params, ("r", "p", "q", "poly"))
    r = cast_to_python_float(params.get("r", -1.0))
    p = cast_to_python_float(params.get("p", 0.0))
    q = cast_to_python_float(params.get("q", 0.0))
    poly = tuple(cast_to_python_float(c) for c in params.get("poly", (1.0,)))
    if not -1 <= r < 1:
        raise SzegoRangeError("expint needs -1 <= r < 1.", r, -1.0, 1.0)
    if p <= -1 or q <= -1:
        raise SzegoValueError("expint needs p > -1 and q > -1.", (p, q))
    if len(poly) == 0:
        raise SzegoValueError("expint needs a nonempty polynomial factor.", poly)
    P = np.polynomial.Polynomial(poly)
    # g(t) = (t - r)^p (1 - t)^q P(t) = (1 - t)^q g2(1 - t) = (t - r)^p g1(t - r)
    g2 = (1.0 - r) ** p * P(1.0)
    g1 = (1.0 - r) ** q * P(r)
    if g2 == 0:
        raise SzegoValueError("The polynomial factor must not vanish at t = 1.", poly)
    kappa = 1.0 / (g2 * math.gamma(q + 1.0))
    directions = [(1.0, 1.0, -q - 1.0)]
    if r == -1.0:
        if g1 == 0:
            raise SzegoValueError(
                "The polynomial factor must not vanish at t = -1.", poly
            )
        directions.append((-1.0, g1 * math.gamma(p + 1.0) * kappa, -p - 1.0))
    theta = math.pi / 3.0
    return FunctionFamily(
        name="expint",
        growth=GrowthSpec(1.0, tuple(directions), theta=theta, mu=math.cos(theta)),
        params=_params_tuple({"r": r, "p": p, "q": q, "poly": poly}),
        normalization=kappa,
        has_exact=True,
    )


def _expint_rule(fam, m):
    r, p, q = fam.param("r"), fam.param("p"), fam.param("q")
    s, w = gauss_jacobi_nodes(p, q, m)
    t = r + (1.0 - r) * (s + 1.0) / 2.0
    w = w * ((1.0 - r) / 2.0) ** (p + q + 1.0)
    return t, w * np.polynomial.Polynomial(fam.param("poly"))(t)


def _signed_log_sum(log_terms, sign_terms, axis=0):
    top = np.max(np.where(np.isfinite(log_terms), log_terms, -np.inf), axis=axis)
    top = np.where(np.isfinite(top), top, 0.0)
    total = np.sum(sign_terms * np.exp(log_terms - np.expand_dims(top, axis)), axis=axis)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(total)) + top, np.sign(total)


def _expint_moments(fam, kmax, m):
    t, w = _expint_rule(fam, m)
    k = np.arange(kmax)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_powers = np.where(k[None, :] == 0, 0.0, k[None, :] * np.log(np.abs(t))[:, None])
        log_terms = np.log(np.abs(w))[:, None] + log_powers
    sign_terms = np.sign(w)[:, None] * np.sign(t)[:, None] ** k[None, :]
    log_abs, sign = _signed_log_sum(log_terms, sign_terms)
    log_bound, _ = _signed_log_sum(log_terms, np.ones_like(sign_terms))
    return log_abs, sign, log_bound


def _raw_expint(fam, kmax):
    # c_k = (1/k!) int_r^1 t^k g(t) dt, Gauss-Jacobi exact for the polynomial part
    deg = len(fam.param("poly")) - 1
    m = int(math.ceil((kmax + deg) / 2.0)) + 1
    log_abs, sign, log_bound = _expint_moments(fam, kmax, m)
    log_check, sign_check, _ = _expint_moments(fam, kmax, m + 8)
    # differences are measured against int |t^k g(t)| dt
    rel = np.abs(
        sign * np.exp(log_abs - log_bound) - sign_check * np.exp(log_check - log_bound)
    )
    if np.any(rel > 1e-10):
        raise SzegoConvergenceError(
            "Moment quadrature for %r disagrees between %d and %d nodes." % (fam, m, m + 8),
            result=(log_abs, sign),
        )
    # moments that cancel to rounding level, e.g. odd k for symmetric weights, are zero
    log_abs = np.where(log_abs - log_bound < math.log(64 * np.finfo(float).eps), -np.inf, log_abs)
    return _from_log_sign(log_abs - _log_factorial(np.arange(kmax)), sign)


def _exact_expint(fam, z):
    # f(z) = kappa int_r^1 e^{zt} g(t) dt; e^{z t*} factored out at the dominant endpoint
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    r = fam.param("r")
    m = 48 + int(math.ceil(np.max(np.abs(z))))
    t, w = _expint_rule(fam, m)
    tstar = np.where(z.real >= 0, 1.0, r)
    integral = np.sum(
        w[None, :] * np.exp(z[:, None] * (t[None, :] - tstar[:, None])), axis=1
    )
    log_value = math.log(fam.normalization) + z * tstar + np.log(integral)
    return ScaledComplex.from_log(jnp.asarray(log_value))


# Airy -----------------------------------------------------------------------------------

_AIRY_C = 1.5 ** (2.0 / 3.0)
_AIRY_THETA = 0.3 * math.pi


def _make_airy_ai(params):
    _check_params("airy_ai", params, ("branch",))
    branch = params.get("branch", "upper")
    if branch not in ("upper", "lower"):
        raise SzegoValueError("Invalid Airy branch.", branch, ("upper", "lower"))
    s = 1.0 if branch == "upper" else -1.0
    omega = complex(math.cos(2 * math.pi / 3), s * math.sin(2 * math.pi / 3))
    directions = (
        (1.0, 1.0, -0.25),
        (omega, complex(math.cos(math.pi / 3), s * math.sin(math.pi / 3)), -0.25),
    )
    kappa = (
        2.0
        * math.sqrt(math.pi)
        * _AIRY_C**0.25
        * complex(math.cos(math.pi / 6), s * math.sin(math.pi / 6))
    )
    return FunctionFamily(
        name="airy_ai",
        growth=GrowthSpec(
            1.5, directions, theta=_AIRY_THETA, mu=math.cos(1.5 * _AIRY_THETA)
        ),
        params=_params_tuple({"branch": branch}),
        rotation=omega,
        dilation=_AIRY_C,
        normalization=kappa,
    )


def _make_airy_bi(params):
    _check_params("airy_bi", params, ())
    up = complex(math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3))
    half_up = 0.5 * complex(math.cos(math.pi / 3), math.sin(math.pi / 3))
    directions = (
        (1.0, 1.0, -0.25),
        (up, half_up, -0.25),
        (up.conjugate(), half_up.conjugate(), -0.25),
    )
    return FunctionFamily(
        name="airy_bi",
        growth=GrowthSpec(
            1.5, directions, theta=_AIRY_THETA, mu=math.cos(1.5 * _AIRY_THETA)
        ),
        dilation=_AIRY_C,
        normalization=math.sqrt(math.pi) * _AIRY_C**0.25,
    )


def airy_seeds(name):
    """(y(0), y'(0)) of Ai or Bi."""
    g13 = math.gamma(1.0 / 3.0)
    g23 = math.gamma(2.0 / 3.0)
    if name == "airy_ai":
        return 3.0 ** (-2.0 / 3.0) / g23, -(3.0 ** (-1.0 / 3.0)) / g13
    return 3.0 ** (-1.0 / 6.0) / g23, 3.0 ** (1.0 / 6.0) / g13


def _raw_airy(fam, kmax):
    seeds = airy_seeds(fam.name)[: min(kmax, 2)]
    if kmax <= 2:
        return ScaledComplex(jnp.asarray(seeds, dtype=complex))
    # y'' = z y: c_k = c_{k-3} / (k (k - 1)), c_2 = 0
    k = np.arange(2, kmax, dtype=float)
    weights = np.zeros((kmax - 2, 3))
    weights[:, 2] = 1.0 / (k * (k - 1.0))
    return _linear_recurrence(seeds, weights)


# parabolic cylinder ----------------------------------------------------------------------

_U_THETA = 0.2 * math.pi


def parabolic_u_seeds(a):
    """(U(a, 0), U'(a, 0))."""
    sp = math.sqrt(math.pi)
    u0 = sp * 2.0 ** (-a / 2.0 - 0.25) * _reciprocal_gamma_real(0.75 + a / 2.0)
    u1 = -sp * 2.0 ** (-a / 2.0 + 0.25) * _reciprocal_gamma_real(0.25 + a / 2.0)
    return u0, u1


def _reciprocal_gamma_real(x):
    log_abs, sign = _real_gamma_parts(x)
    return float(sign * np.exp(-log_abs))


def _make_parabolic_u(params):
    _check_params("parabolic_u", params, ("a", "branch"))
    a = cast_to_python_float(params["a"])
    branch = params.get("branch", "negative")
    if branch not in ("negative", "upper", "lower"):
        raise SzegoValueError(
            "Invalid parabolic cylinder branch.", branch, ("negative", "upper", "lower")
        )
    if a + 0.5 <= 0 and a + 0.5 == round(a + 0.5):
        raise SzegoValueError("Gamma(a + 1/2) must be finite.", a)
    log_g, sign_g = _real_gamma_parts(a + 0.5)
    gamma_ah = float(sign_g * np.exp(log_g))
    sqrt2pi = math.sqrt(2.0 * math.pi)
    if branch == "negative":
        kappa = gamma_ah / (sqrt2pi * 2.0 ** (a - 0.5))
        phase = np.exp(1j * math.pi * (a / 2.0 + 0.25))
        directions = (
            (1.0, 1.0, a - 0.5),
            (1.0j, kappa * phase * 2.0 ** (-a - 0.5), -a - 0.5),
            (-1.0j, kappa * phase.conjugate() * 2.0 ** (-a - 0.5), -a - 0.5),
        )
        rotation = -1.0
    else:
        s = 1.0 if branch == "upper" else -1.0
        kappa = np.exp(1j * s * math.pi * (a / 2.0 + 0.25)) * 2.0 ** (a + 0.5)
        directions = (
            (1.0, 1.0, -a - 0.5),
            (s * 1.0j, kappa * sqrt2pi * 2.0 ** (a - 0.5) / gamma_ah, a - 0.5),
            (-1.0, np.exp(1j * s * math.pi * (a + 0.5)), -a - 0.5),
        )
        rotation = s * 1.0j
    directions = tuple((z, complex(A), b) for z, A, b in directions)
    return FunctionFamily(
        name="parabolic_u",
        growth=GrowthSpec(2.0, directions, theta=_U_THETA, mu=math.cos(2.0 * _U_THETA)),
        params=_params_tuple({"a": a, "branch": branch}),
        rotation=rotation,
        dilation=2.0,
        normalization=complex(kappa),
    )


def _raw_parabolic_u(fam, kmax):
    a = fam.param("a")
    seeds = parabolic_u_seeds(a)[: min(kmax, 2)]
    if kmax <= 2:
        return ScaledComplex(jnp.asarray(seeds, dtype=complex))
    # y'' = (z^2/4 + a) y: k (k-1) c_k = a c_{k-2} + c_{k-4} / 4
    k = np.arange(2, kmax, dtype=float)
    weights = np.zeros((kmax - 2, 4))
    weights[:, 1] = a / (k * (k - 1.0))
    weights[:, 3] = 0.25 / (k * (k - 1.0))
    return _linear_recurrence(seeds, weights)


_FAMILIES = {
    "exp": (_make_exp, _raw_exp, _exact_exp),
    "mittag_leffler": (_make_mittag_leffler, _raw_mittag_leffler, None),
    "sin": (_make_trig("sin"), _raw_trig, _exact_trig),
    "cos": (_make_trig("cos"), _raw_trig, _exact_trig),
    "bessel": (_make_bessel, _raw_bessel, _exact_bessel),
    "confluent": (_make_confluent, _raw_confluent, None),
    "expint": (_make_expint, _raw_expint, _exact_expint),
    "airy_ai": (_make_airy_ai, _raw_airy, None),
    "airy_bi": (_make_airy_bi, _raw_airy, None),
    "parabolic_u": (_make_parabolic_u, _raw_parabolic_u, None),
}


def family_from_config(spec):
    """Build a family from a config entry: either a name or {"name": ..., "params": {...}}."""
    if isinstance(spec, str):
        return make_family(spec)
    if not isinstance(spec, dict) or "name" not in spec:
        raise SzegoValueError("A family entry needs a name.", spec)
    return make_family(spec["name"], spec.get("params", {}))
