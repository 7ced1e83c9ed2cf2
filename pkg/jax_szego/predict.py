"""Predicted zero locations from the arc and corner scaling limits of p_{n-1}(r_n z) / f(r_n z).

Near a point xi != 1 of the limit curve the ratio tends to 1 - D e^{-w} along z_n(w), so zeros
sit where w = Log D - 2 pi i k. Near the corner z = 1 it tends to erfc(w sqrt(lambda/2)) / 2, so
zeros sit at w = w_j sqrt(2/lambda) for the erfc zeros w_j.
"""

import math
from dataclasses import dataclass

import numpy as np

from jax_szego.core.erfc import erfc, erfc_zeros
from jax_szego.core.gamma import gamma
from jax_szego.core.utils import unit_power, wrap_angle
from jax_szego.curve import CurveSample, radius_at
from jax_szego.curve import tau as curve_tau
from jax_szego.errors import (
    SzegoDegenerateError,
    SzegoNotImplementedError,
    SzegoRangeError,
    SzegoValueError,
)
from jax_szego.params import SzegoParams

ARC_ONE_DIR = "arc-one-dir"
ARC_TWO_DIR_CASE_A = "arc-two-dir-case-a"
ARC_TWO_DIR_CASE_B = "arc-two-dir-case-b"
ARC_TWO_DIR_CASE_EQ = "arc-two-dir-case-eq"
ARC_M_DIR = "arc-m-dir"
CORNER_ERFC = "corner-erfc"
CORNER_KKMM = "corner-kkmm"

_DOMINANCE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ArcPoint:
    """A curve point xi together with the n-dependent phases of the arc scaling limit.

    Attributes:
        sample:     The `CurveSample` (xi, its argument and tau).
        n:          Number of terms of the partial sum.
        tau_n:      tau n / lambda reduced to (-pi, pi].
        sigma_n:    n arg(zeta_k) reduced to (-pi, pi], one per non-principal direction.
        family:     The `FunctionFamily`.
    """

    sample: CurveSample
    n: int
    tau_n: float
    sigma_n: tuple
    family: object

    @property
    def xi(self):
        return self.sample.xi


@dataclass(frozen=True)
class PredictionRecord:
    """A predicted zero.

    ``z_scaled`` is a zero of p_{n-1}(r_n z); ``z_unscaled`` is the matching zero of the raw
    partial sum, dilation * rotation * r_n * z_scaled.
    """

    theorem: str
    w: complex
    z_scaled: complex
    z_unscaled: complex
    n: int
    expected_error_scale: float
    k: int = 0
    family: str = ""


def arc_point(fam, xi, n):
    """Build the `ArcPoint` of family ``fam`` at curve point ``xi`` (complex or `CurveSample`)."""
    n = int(n)
    if n < 3:
        raise SzegoValueError("Arc predictions need n >= 3.", n)
    lam = fam.lambda_
    if isinstance(xi, CurveSample):
        sample = xi
    else:
        xi = complex(xi)
        sample = CurveSample(
            xi=xi, arg=float(np.angle(xi)), tau=float(curve_tau(xi, lam)), arclength=np.nan
        )
    if sample.xi == 1:
        raise SzegoValueError("xi = 1 is the corner; use the corner predictions.", sample.xi)
    if abs(sample.arg) >= fam.growth.theta:
        raise SzegoRangeError(
            "xi lies outside the principal growth sector.",
            sample.arg,
            -fam.growth.theta,
            fam.growth.theta,
        )
    sigma = tuple(
        float(wrap_angle(n * np.angle(zeta))) for zeta, _, _ in fam.growth.directions[1:]
    )
    return ArcPoint(
        sample=sample,
        n=n,
        tau_n=float(wrap_angle(sample.tau * n / lam)),
        sigma_n=sigma,
        family=fam,
    )


def _theorem_tag(growth, dominant):
    m = growth.num_directions
    if m == 1:
        return ARC_ONE_DIR
    if m == 2:
        if dominant == (0,):
            return ARC_TWO_DIR_CASE_A
        if 0 not in dominant:
            return ARC_TWO_DIR_CASE_B
        return ARC_TWO_DIR_CASE_EQ
    return ARC_M_DIR


def arc_case(fam):
    """(variant, j, tag) of the arc scaling limit: variant "v1" or "v2", j the reference
    direction (0 for v1)."""
    growth = fam.growth
    dominant = growth.dominant_directions(_DOMINANCE_TOLERANCE)
    tag = _theorem_tag(growth, dominant)
    if 0 in dominant:
        return "v1", 0, tag
    if len(dominant) > 2:
        raise SzegoNotImplementedError(
            "Arc limits with %d dominant non-principal directions are not supported."
            % len(dominant)
        )
    return "v2", dominant[0], tag


def _xi_power(xi, p):
    return np.exp(p * np.log(xi))


def arc_constant(point):
    """The constant D of the arc limit 1 - D e^{-w}; n-dependent in the equal cases."""
    fam = point.family
    growth = fam.growth
    lam = fam.lambda_
    xi = point.xi
    a = growth.a
    n = point.n
    r_n = fam.radius(n)
    dominant = growth.dominant_directions(_DOMINANCE_TOLERANCE)
    variant, j, _ = arc_case(fam)
    norm = _xi_power(xi, a) * math.sqrt(2.0 * math.pi * lam)

    if variant == "v1":
        total = 1.0 / (1.0 - xi)
        for k in dominant:
            if k == 0:
                continue
            zeta, A, b = growth.directions[k]
            phase = complex(unit_power(zeta, 1 - n))
            total += A * phase * np.exp((b - a) * math.log(r_n)) / (zeta - xi)
        return complex(total / norm)

    zeta_j, A_j, b_j = growth.directions[j]
    total = 0.0
    for k in dominant:
        zeta, A, b = growth.directions[k]
        phase = complex(unit_power(zeta / zeta_j, 1 - n)) if k != j else 1.0
        total += A * phase * np.exp((b - b_j) * math.log(r_n)) / (zeta - xi)
    lead = zeta_j * np.exp((a - b_j) / lam * math.log(lam))
    return complex(total * lead / norm)


def z_n_arc(point, w, variant="v1", j=None):
    """The arc scaling path z_n(w).

    v1: xi (1 + log n / (2 (1 - xi^lambda) n) - (w - i tau_n) / ((1 - xi^lambda) n))
    v2: xi [1 + (a - b_j + lambda/2) log n / (lambda (1 - xi^lambda) n)
             - (w - i sigma_n - i tau_n) / ((1 - xi^lambda) n)]
    """
    fam = point.family
    lam = fam.lambda_
    xi = point.xi
    n = point.n
    if xi == 1:
        raise SzegoValueError("z_n is not defined at the corner.", xi)
    denom = (1.0 - _xi_power(xi, lam)) * n
    w = np.asarray(w, dtype=complex)
    if variant == "v1":
        z = xi * (1.0 + math.log(n) / (2.0 * denom) - (w - 1j * point.tau_n) / denom)
    elif variant == "v2":
        if fam.growth.num_directions < 2:
            raise SzegoValueError("v2 needs a family with two or more directions.", fam)
        if j is None:
            _, j, _ = arc_case(fam)
        if j == 0:
            raise SzegoValueError("v2 needs a non-principal reference direction.", j)
        b_j = fam.growth.directions[j][2]
        sigma = point.sigma_n[j - 1]
        coef = (fam.growth.a - b_j + 0.5 * lam) / lam
        z = xi * (
            1.0 + coef * math.log(n) / denom - (w - 1j * sigma - 1j * point.tau_n) / denom
        )
    else:
        raise SzegoValueError("Unknown z_n variant.", variant, ("v1", "v2"))
    return complex(z) if z.ndim == 0 else z


def arc_limit_value(point, w):
    """The predicted limit 1 - D e^{-w} of p_{n-1}(r_n z_n(w)) / f(r_n z_n(w))."""
    D = arc_constant(point)
    return 1.0 - D * np.exp(-np.asarray(w, dtype=complex))


def _check_constant(D, params):
    thr = params.degenerate_threshold
    if not np.isfinite(D) or abs(D) < thr or abs(D) > 1.0 / thr:
        raise SzegoDegenerateError(
            "The arc limit constant %r is degenerate; no zeros are predicted." % D
        )


def arc_predicted_zeros(point, k_range, params=None):
    """Predicted zeros near the arc point, one per tower index k.

    w_k = Log D - 2 pi i k solves 1 - D e^{-w} = 0 and is mapped through `z_n_arc`.

    Parameters:
        point:      An `ArcPoint`.
        k_range:    Iterable of integer tower indices.
        params:     Optional `SzegoParams` (degenerate-constant threshold).

    Returns:
        A list of `PredictionRecord`.
    """
    params = SzegoParams.check(params)
    fam = point.family
    variant, j, tag = arc_case(fam)
    D = arc_constant(point)
    _check_constant(D, params)
    n = point.n
    r_n = fam.radius(n)
    scale = math.log(n) / n
    records = []
    for k in k_range:
        w = complex(np.log(D) - 2j * np.pi * k)
        z = z_n_arc(point, w, variant, j if variant == "v2" else None)
        records.append(
            PredictionRecord(
                theorem=tag,
                w=w,
                z_scaled=z,
                z_unscaled=complex(fam.scale() * r_n * z),
                n=n,
                expected_error_scale=scale,
                k=int(k),
                family=fam.name,
            )
        )
    return records


def arc_spacing(point):
    """Distance 2 pi |xi| / (|1 - xi^lambda| n) between consecutive tower predictions."""
    xi = point.xi
    lam = point.family.lambda_
    return 2.0 * math.pi * abs(xi) / (abs(1.0 - _xi_power(xi, lam)) * point.n)


def arc_band_predictions(fam, n, band, density=3.0, params=None):
    """One arc prediction per zero whose argument lies in ``band`` = (lo, hi).

    Curve points are sampled along the band at ``density`` points per expected zero; each
    contributes its k = 0 prediction, the zero nearest to it. Repeated predictions of the
    same zero are merged by keeping the one closest to its own curve point.
    """
    params = SzegoParams.check(params)
    lo, hi = (float(x) for x in band)
    theta = fam.growth.theta
    if not -theta < lo < hi < theta:
        raise SzegoRangeError("The band must lie inside the principal sector.", (lo, hi), -theta, theta)
    lam = fam.lambda_
    # |1 - xi^lambda| <= 2 bounds the zero density by n / pi per radian
    count = int(math.ceil(density * n * (hi - lo) / math.pi)) + 1
    args = np.linspace(lo, hi, count)
    radii = radius_at(args, lam, params)
    taus = radii**lam * np.sin(lam * args) - lam * args

    candidates = []
    for r, t, s in zip(radii, args, taus):
        sample = CurveSample(xi=complex(r * np.exp(1j * t)), arg=float(t), tau=float(s), arclength=np.nan)
        point = arc_point(fam, sample, n)
        try:
            (record,) = arc_predicted_zeros(point, [0], params)
        except SzegoDegenerateError:
            continue
        candidates.append((abs(record.z_scaled - point.xi), arc_spacing(point), record))

    accepted = []
    for _, spacing, record in sorted(candidates, key=lambda c: c[0]):
        if all(abs(record.z_scaled - other.z_scaled) > 0.5 * spacing for other in accepted):
            accepted.append(record)
    accepted = [r for r in accepted if lo <= np.angle(r.z_scaled) <= hi]
    return sorted(accepted, key=lambda r: np.angle(r.z_scaled))


def corner_gate(fam):
    """max_k (Re b_k - Re a) - lambda/2; corner predictions need it to be negative."""
    growth = fam.growth
    a = complex(growth.a).real
    excess = [complex(b).real - a for _, _, b in growth.directions[1:]]
    return (max(excess) if excess else -np.inf) - 0.5 * fam.lambda_


def corner_limit_value(fam, w):
    """erfc(w sqrt(lambda/2)) / 2, the corner limit of the ratio along 1 + w / sqrt(n)."""
    w = np.asarray(w, dtype=complex)
    return 0.5 * np.asarray(erfc(w * math.sqrt(0.5 * fam.lambda_)))


def corner_predicted_zeros(fam, n, count, radius_mode="standard", params=None):
    """Predicted zeros near the corner z = 1 from the first ``count`` erfc zeros and their
    conjugates.

    Raises `SzegoValueError` when a secondary direction grows too fast for the corner limit
    to exist (Re b_k - Re a >= lambda/2).
    """
    params = SzegoParams.check(params)
    n = int(n)
    gate = corner_gate(fam)
    if gate >= 0:
        raise SzegoValueError(
            "The corner scaling limit does not hold: Re b - Re a - lambda/2 >= 0.", gate
        )
    lam = fam.lambda_
    r_n = fam.radius(n, radius_mode)
    records = []
    for idx, wj in enumerate(erfc_zeros(count, params=params)):
        for sign, wv in ((1, complex(wj)), (-1, complex(wj).conjugate())):
            w = wv * math.sqrt(2.0 / lam)
            z = 1.0 + w / math.sqrt(n)
            records.append(
                PredictionRecord(
                    theorem=CORNER_ERFC,
                    w=w,
                    z_scaled=z,
                    z_unscaled=complex(fam.scale() * r_n * z),
                    n=n,
                    expected_error_scale=n**-0.5,
                    k=sign * (idx + 1),
                    family=fam.name,
                )
            )
    return records


def kkmm_refined_zero(w, n, terms, fam=None):
    """The corner zero of p_{n-1}[exp](n z) attached to the erfc zero w, to ``terms`` orders:

    1 + sqrt(2) w n^{-1/2} + (2w^2 - 1)/3 n^{-1} + (2w^3 - 7w)/(18 sqrt 2) n^{-3/2}
      - (6w^4 + 7w^2 - 8)/405 n^{-2}
    """
    if fam is not None and fam.name != "exp":
        raise SzegoValueError("The refined corner expansion is for exp only.", fam.name)
    if not 1 <= terms <= 4:
        raise SzegoRangeError("terms must be in 1..4.", terms, 1, 4)
    w = complex(w)
    s = 1.0 / math.sqrt(n)
    corrections = (
        math.sqrt(2.0) * w * s,
        (2.0 * w**2 - 1.0) / 3.0 * s**2,
        (2.0 * w**3 - 7.0 * w) / (18.0 * math.sqrt(2.0)) * s**3,
        -(6.0 * w**4 + 7.0 * w**2 - 8.0) / 405.0 * s**4,
    )
    return 1.0 + sum(corrections[:terms])


def kkmm_predicted_zeros(n, count, terms, params=None):
    """`PredictionRecord` list of refined corner zeros of p_{n-1}[exp](n z), with
    conjugates."""
    params = SzegoParams.check(params)
    records = []
    for idx, wj in enumerate(erfc_zeros(count, params=params)):
        z = kkmm_refined_zero(wj, n, terms)
        for sign, zz, ww in ((1, z, complex(wj)), (-1, np.conj(z), np.conj(complex(wj)))):
            records.append(
                PredictionRecord(
                    theorem=CORNER_KKMM,
                    w=complex(ww),
                    z_scaled=complex(zz),
                    z_unscaled=complex(n * zz),
                    n=int(n),
                    expected_error_scale=float(n) ** (-0.5 * (terms + 1)),
                    k=sign * (idx + 1),
                    family="exp",
                )
            )
    return records


def corrected_parabola(w, y):
    """x on the parabola x = y^2/v^2 - u y / (3 v) + (1 - u^2 - 5 v^2) / 18 followed by the
    zeros x + i y of p_{n-1}[exp] attached to the erfc zero w, with u + i v = sqrt(2) w."""
    uv = math.sqrt(2.0) * complex(w)
    u, v = uv.real, uv.imag
    y = np.asarray(y, dtype=float)
    return y**2 / v**2 - u / (3.0 * v) * y + (1.0 - u**2 - 5.0 * v**2) / 18.0


def width_disk_count(roots, center_arg, rho_n, exponent, epsilon):
    """Number of roots r_n z in the disk |Z - rho_n e^{i center_arg}| <= rho_n n^{exponent +
    epsilon}."""
    Z = roots.radius * roots.roots
    center = rho_n * np.exp(1j * center_arg)
    radius = rho_n * float(roots.n) ** (exponent + epsilon)
    return int(np.sum(np.abs(Z - center) <= radius))


def exterior_approach_coefficient(fam):
    """c in |z^lambda exp(1 - z^lambda)| = 1 + c log n / n + O(1/n) for zeros on the arcs."""
    growth = fam.growth
    dominant = growth.dominant_directions(_DOMINANCE_TOLERANCE)
    reb = max(complex(growth.directions[k][2]).real for k in dominant)
    return complex(growth.a).real - reb + 0.5 * fam.lambda_


# Literal statements of the arc limit constant D for the application families, used to check
# `arc_constant`. Each entry: (family, params, constant(xi, n, params)).

_SQRT2PI = math.sqrt(2.0 * math.pi)
_SQRT3PI = math.sqrt(3.0 * math.pi)
_E2PI3 = complex(math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3))


def _preset_sin(xi, n, p):
    return (1 / (1 - xi) - (-1) ** n / (1 + xi)) / _SQRT2PI


def _preset_cos(xi, n, p):
    return (1 / (1 - xi) + (-1) ** n / (1 + xi)) / _SQRT2PI


def _preset_bessel(xi, n, p):
    return (1 / (1 - xi) + (-1) ** n / (1 + xi)) * xi ** (p["nu"] + 0.5) / _SQRT2PI


def _preset_confluent(xi, n, p):
    return 1 / (xi ** (p["alpha"] - p["beta"]) * (1 - xi) * _SQRT2PI)


def _expint_A(p):
    q, pp = p["q"], p["p"]
    poly = np.polynomial.Polynomial(p.get("poly", (1.0,)))
    g1 = 2.0**q * poly(-1.0)
    g2 = 2.0**pp * poly(1.0)
    return g1 * math.gamma(pp + 1) / (g2 * math.gamma(q + 1))


def _preset_expint(xi, n, p):
    q, pp = p["q"], p["p"]
    if q < pp:
        return xi ** (q + 1) / ((1 - xi) * _SQRT2PI)
    if q > pp:
        return _expint_A(p) * xi ** (q + 1) / ((1 + xi) * _SQRT2PI)
    return (
        (1 / (1 - xi) + _expint_A(p) * (-1) ** n * float(n) ** (q - pp) / (1 + xi))
        * xi ** (q + 1)
        / _SQRT2PI
    )


def _preset_airy_ai(xi, n, p):
    s = 1 if p["branch"] == "upper" else -1
    zeta = _E2PI3 if s == 1 else _E2PI3.conjugate()
    phase = np.exp(-s * 2j * math.pi * n / 3)
    return (1 / (1 - xi) - phase / (zeta - xi)) * xi**0.25 / _SQRT3PI


def _preset_airy_bi(xi, n, p):
    up = np.exp(-2j * math.pi * n / 3)
    return (
        (
            1 / (1 - xi)
            - up / (2 * (_E2PI3 - xi))
            - np.conj(up) / (2 * (_E2PI3.conjugate() - xi))
        )
        * xi**0.25
        / _SQRT3PI
    )


def _preset_parabolic_u(xi, n, p):
    a = p["a"]
    branch = p["branch"]
    if branch == "negative":
        if a > 0:
            return xi ** (0.5 - a) / (2 * math.sqrt(math.pi) * (1 - xi))
        if a < 0:
            return (
                (
                    np.exp(1j * math.pi * (a / 2 + 0.75)) / (1j - xi)
                    + (-1) ** n * np.exp(-1j * math.pi * (a / 2 - 0.25)) / (1j + xi)
                )
                * complex(gamma(a + 0.5))
                / (2 ** (a + 1.5) * math.pi * xi ** (a - 0.5))
            )
        raise SzegoNotImplementedError("No literal statement for a = 0.")
    s = 1 if branch == "upper" else -1
    if a > 0:
        return (
            1j
            * np.exp(s * 1j * math.pi * (a / 2 + 0.25))
            * 2 ** (a - 0.5)
            * xi ** (a + 0.5)
            / (complex(gamma(a + 0.5)) * (s * 1j - xi))
            * s
        )
    if a < 0:
        return (
            (1 / (1 - xi) + (-1) ** n * np.exp(s * 1j * math.pi * (a + 0.5)) / (1 + xi))
            * xi ** (a + 0.5)
            / (2 * math.sqrt(math.pi))
        )
    raise SzegoNotImplementedError("No literal statement for a = 0.")


APPLICATION_PRESETS = {
    "sin": ("sin", {}, _preset_sin),
    "cos": ("cos", {}, _preset_cos),
    "bessel": ("bessel", {"nu": 0.0}, _preset_bessel),
    "confluent": ("confluent", {"alpha": -0.5, "beta": -2.5}, _preset_confluent),
    "expint-principal": ("expint", {"r": -1.0, "p": 3.0, "q": 0.0}, _preset_expint),
    "expint-second": ("expint", {"r": -1.0, "p": 0.0, "q": 3.0}, _preset_expint),
    "expint-equal": ("expint", {"r": -1.0, "p": 1.0, "q": 1.0}, _preset_expint),
    "airy_ai-upper": ("airy_ai", {"branch": "upper"}, _preset_airy_ai),
    "airy_ai-lower": ("airy_ai", {"branch": "lower"}, _preset_airy_ai),
    "airy_bi": ("airy_bi", {}, _preset_airy_bi),
    "parabolic_u-negative-a>0": (
        "parabolic_u",
        {"a": 0.75, "branch": "negative"},
        _preset_parabolic_u,
    ),
    "parabolic_u-negative-a<0": (
        "parabolic_u",
        {"a": -0.25, "branch": "negative"},
        _preset_parabolic_u,
    ),
    "parabolic_u-upper-a>0": (
        "parabolic_u",
        {"a": 0.75, "branch": "upper"},
        _preset_parabolic_u,
    ),
    "parabolic_u-upper-a<0": (
        "parabolic_u",
        {"a": -0.25, "branch": "upper"},
        _preset_parabolic_u,
    ),
    "parabolic_u-lower-a<0": (
        "parabolic_u",
        {"a": -0.25, "branch": "lower"},
        _preset_parabolic_u,
    ),
}


def preset_constant(name, xi, n):
    """The literal arc constant D of preset ``name`` at (xi, n)."""
    if name not in APPLICATION_PRESETS:
        raise SzegoValueError("Unknown preset.", name, sorted(APPLICATION_PRESETS))
    _, params, constant = APPLICATION_PRESETS[name]
    return complex(constant(complex(xi), int(n), params))
