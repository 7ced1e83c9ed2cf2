"""Matching of predictions to computed zeros, convergence-rate fits and the quantitative checks
on zeros of scaled partial sums, plus CSV/JSON report writers."""

import csv
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from jax_szego.core.testing import time_code_block
from jax_szego.curve import curve_distance, level_modulus, trace
from jax_szego.errors import SzegoValueError
from jax_szego.params import SzegoParams
from jax_szego.predict import (
    arc_band_predictions,
    arc_case,
    arc_limit_value,
    arc_point,
    corner_gate,
    corner_limit_value,
    corner_predicted_zeros,
    exterior_approach_coefficient,
    z_n_arc,
)
from jax_szego.rootfind import all_roots
from jax_szego.series import eval_surrogate, make_family, partial_sum

logger = logging.getLogger(__name__)

RATE_MODELS = ("logn_over_n", "inv_sqrt_n", "inv_n", "custom_power")
_NOMINAL_EXPONENTS = {"logn_over_n": -1.0, "inv_sqrt_n": -0.5, "inv_n": -1.0, "custom_power": None}

# a root takes part in a check only if its forward error estimate is below this fraction of
# the scale the check resolves
_RELIABLE_FRACTION = 0.01


@dataclass(frozen=True)
class MatchPair:
    prediction: object
    root: complex
    abs_error: float
    normalized_error: float


@dataclass(frozen=True)
class MatchReport:
    """Result of `match`.

    Attributes:
        n:                          Number of terms of the partial sum.
        family:                     Family name.
        pairs:                      `MatchPair` list in prediction order.
        unmatched_predictions:      Predictions with no root inside their matching disk.
        unmatched_roots_near_region: Unused roots inside some prediction's matching disk.
        unresolved_roots:           Roots left out because their forward error estimate
                                    exceeds the scale of the predictions.
    """

    n: int
    family: str
    pairs: tuple
    unmatched_predictions: int
    unmatched_roots_near_region: int
    unresolved_roots: int = 0

    @property
    def matched_fraction(self):
        total = len(self.pairs) + self.unmatched_predictions
        return len(self.pairs) / total if total else 0.0


@dataclass(frozen=True)
class RateFit:
    """e_n ~ constant * n^exponent (times log n for the logn_over_n model).

    ``target`` is the constant the fit is expected to reproduce, when one is known.
    """

    model: str
    fitted_constant: float
    fitted_exponent: float
    r_squared: float
    target: float = None

    def matches_target(self, rtol=0.5):
        if self.target is None:
            raise SzegoValueError("This fit has no target constant.", self)
        return abs(self.fitted_constant - self.target) <= rtol * abs(self.target)


@dataclass(frozen=True)
class RatioRow:
    n: int
    w: complex
    measured: complex
    predicted: complex
    error: float


@dataclass(frozen=True)
class BuckholtzResult:
    max_distance: float
    bound: float
    passed: bool
    excluded: int = 0


@dataclass(frozen=True)
class ExteriorRow:
    n: int
    count: int
    median_excess: float
    scale: float
    all_exterior: bool
    excluded: int = 0

    @property
    def normalized(self):
        return self.median_excess / self.scale


def match(predictions, roots, radius_factor=None, params=None, require_resolved=True):
    """Pair predictions with computed roots in the scaled plane.

    A prediction may claim a root within radius_factor * expected_error_scale * |z_pred|.
    Candidate pairs are assigned in increasing distance so each root is used at most once.

    Parameters:
        predictions:    List of `PredictionRecord`, all for the same n.
        roots:          A converged `RootSet`.
        radius_factor:  [default: params.match_radius_factor]
        params:         Optional `SzegoParams`.
        require_resolved: Leave out roots whose forward error estimate exceeds a hundredth of
                        the smallest matching scale; with False every root may be claimed.
                        [default: True]

    Returns:
        A `MatchReport`.
    """
    params = SzegoParams.check(params)
    factor = params.match_radius_factor if radius_factor is None else radius_factor
    if not roots.all_converged:
        raise SzegoValueError("match needs a converged RootSet.", roots.converged)
    if len(predictions) == 0:
        return MatchReport(n=roots.n, family="", pairs=(), unmatched_predictions=0, unmatched_roots_near_region=0)

    z_pred = np.array([p.z_scaled for p in predictions], dtype=complex)
    scale = np.array([p.expected_error_scale for p in predictions])
    radius = factor * scale * np.maximum(np.abs(z_pred), 1e-300)
    if require_resolved:
        resolved = roots.reliable(_RELIABLE_FRACTION * float(np.min(scale * np.abs(z_pred))))
    else:
        resolved = np.ones(roots.roots.shape, dtype=bool)
    candidates = np.flatnonzero(resolved)
    z_root = roots.roots[candidates]

    dist = np.abs(z_pred[:, None] - z_root[None, :])
    inside = dist <= radius[:, None]
    order = sorted(zip(*np.nonzero(inside)), key=lambda ij: (dist[ij], ij[0], ij[1]))
    taken_pred = {}
    taken_root = set()
    for i, j in order:
        if i in taken_pred or j in taken_root:
            continue
        taken_pred[i] = j
        taken_root.add(j)

    pairs = []
    for i, pred in enumerate(predictions):
        if i not in taken_pred:
            continue
        j = taken_pred[i]
        err = float(dist[i, j])
        pairs.append(
            MatchPair(
                prediction=pred,
                root=complex(z_root[j]),
                abs_error=err,
                normalized_error=err / pred.expected_error_scale,
            )
        )
    near = np.any(inside, axis=0)
    spare = sum(1 for j in np.flatnonzero(near) if j not in taken_root)
    all_near = np.any(
        np.abs(z_pred[:, None] - roots.roots[None, :]) <= radius[:, None], axis=0
    )
    return MatchReport(
        n=roots.n,
        family=predictions[0].family,
        pairs=tuple(pairs),
        unmatched_predictions=len(predictions) - len(pairs),
        unmatched_roots_near_region=int(spare),
        unresolved_roots=int(np.sum(all_near & ~resolved)),
    )


def _exp_sections(n, params):
    # p_n[exp](n z): n + 1 terms scaled by n
    fam = make_family("exp")
    return all_roots(partial_sum(fam, n + 1, radius=float(n)), params=params)


def enestrom_kakeya_check(n, tol=1e-9, params=None):
    """(max |z|, passed) over the zeros of p_n[exp](n z); they lie in the closed unit disk."""
    roots = _exp_sections(n, SzegoParams.check(params))
    max_modulus = float(np.max(np.abs(roots.roots)))
    return max_modulus, max_modulus <= 1.0 + tol


def buckholtz_check(fam, n, params=None, samples=2048):
    """Largest distance from a zero of p_n[exp](n z) to the curve against the bound 2e/sqrt(n).

    Zeros whose forward error estimate exceeds a hundredth of the bound, or whose derivative is
    lost in rounding, are left out and counted in ``excluded``.
    """
    if fam.name != "exp":
        raise SzegoValueError("The Buckholtz bound is specific to exp.", fam.name, ("exp",))
    params = SzegoParams.check(params)
    roots = _exp_sections(n, params)
    bound = 2.0 * math.e / math.sqrt(n)
    ok = roots.certified(_RELIABLE_FRACTION * bound)
    dist = curve_distance(roots.roots[ok], trace(1.0, samples, params))
    max_distance = float(np.max(dist))
    return BuckholtzResult(
        max_distance=max_distance,
        bound=bound,
        passed=max_distance <= bound,
        excluded=int(np.sum(~ok)),
    )


def exterior_approach_table(fam, n_grid, arc_band, params=None):
    """Per n, the median of |z^lambda exp(1 - z^lambda)| - 1 over the zeros with argument in
    ``arc_band``, with the reference scale log n / n."""
    params = SzegoParams.check(params)
    lo, hi = arc_band
    rows = []
    for n in n_grid:
        roots = all_roots(partial_sum(fam, n), params=params)
        z = roots.roots
        in_band = (z != 0) & (np.angle(z) >= lo) & (np.angle(z) <= hi)
        scale = math.log(n) / n
        ok = roots.reliable(_RELIABLE_FRACTION * scale)
        selected = z[in_band & ok]
        if selected.size < 3:
            raise SzegoValueError(
                "Fewer than 3 resolved zeros in the band %r at n = %d." % (arc_band, n), selected.size
            )
        excess = level_modulus(selected, fam.lambda_) - 1.0
        rows.append(
            ExteriorRow(
                n=int(n),
                count=int(selected.size),
                median_excess=float(np.median(excess)),
                scale=scale,
                all_exterior=bool(np.all(excess > 0)),
                excluded=int(np.sum(in_band & ~ok)),
            )
        )
    return rows


def _r_squared(y, yhat):
    ss_res = float(np.sum((y - yhat) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot == 0:
        return 1.0 if ss_res == 0 else 0.0
    return float(np.clip(1.0 - ss_res / ss_tot, 0.0, 1.0))


def exterior_approach_fit(fam, n_grid, arc_band, params=None):
    """Fit median(|z^lambda exp(1 - z^lambda)| - 1) = C log n / n; the target for C is
    `exterior_approach_coefficient`."""
    rows = exterior_approach_table(fam, n_grid, arc_band, params)
    x = np.array([r.scale for r in rows])
    y = np.array([r.median_excess for r in rows])
    constant = float(np.dot(x, y) / np.dot(x, x))
    return RateFit(
        model="logn_over_n",
        fitted_constant=constant,
        fitted_exponent=-1.0,
        r_squared=_r_squared(y, constant * x),
        target=exterior_approach_coefficient(fam),
    )


def _evaluate_ratio(fam, poly, z):
    p = poly(z)
    x = poly.r_n * z
    if fam.has_exact:
        f = fam.eval_exact(x)
    else:
        f = eval_surrogate(fam, complex(x))
    return complex((p / f).to_complex())


def ratio_limit_check(fam, point, w_grid, n_grid, params=None):
    """Measured p_{n-1}(r_n z_n(w)) / f(r_n z_n(w)) against its scaling limit.

    ``point`` is a curve point xi for the arc limit or the string "corner" for the corner
    limit erfc(w sqrt(lambda/2)) / 2 along z = 1 + w / sqrt(n), which needs Re w < 0.
    Families without an exact evaluator use their growth model for f.

    Returns:
        A list of `RatioRow`, ordered by n then by w.
    """
    params = SzegoParams.check(params)
    corner = isinstance(point, str)
    if corner:
        if point != "corner":
            raise SzegoValueError("Unknown limit point.", point, ("corner",))
        if corner_gate(fam) >= 0:
            raise SzegoValueError("The corner scaling limit does not hold for this family.", fam.name)
        for w in w_grid:
            if complex(w).real >= 0:
                raise SzegoValueError("The corner limit needs Re w < 0.", w)
    rows = []
    for n in n_grid:
        poly = partial_sum(fam, n)
        if corner:
            for w in w_grid:
                z = 1.0 + complex(w) / math.sqrt(n)
                measured = _evaluate_ratio(fam, poly, z)
                predicted = complex(corner_limit_value(fam, w))
                rows.append(RatioRow(int(n), complex(w), measured, predicted, abs(measured - predicted)))
        else:
            ap = arc_point(fam, point, n)
            variant, j, _ = arc_case(fam)
            for w in w_grid:
                z = z_n_arc(ap, complex(w), variant, j if variant == "v2" else None)
                measured = _evaluate_ratio(fam, poly, z)
                predicted = complex(arc_limit_value(ap, w))
                rows.append(RatioRow(int(n), complex(w), measured, predicted, abs(measured - predicted)))
    return rows


def rate_fit(errors, model):
    """Least-squares fit of log e_n = log C + p log n (with e_n / log n for logn_over_n).

    Parameters:
        errors: Sequence of (n, e_n) with e_n > 0, at least three points.
        model:  One of RATE_MODELS.

    Returns:
        A `RateFit`.
    """
    if model not in RATE_MODELS:
        raise SzegoValueError("Unknown rate model.", model, RATE_MODELS)
    if len(errors) < 3:
        raise SzegoValueError("rate_fit needs at least 3 points.", len(errors))
    n = np.array([e[0] for e in errors], dtype=float)
    e = np.array([e[1] for e in errors], dtype=float)
    if np.any(e <= 0) or not np.all(np.isfinite(e)):
        raise SzegoValueError("Errors must be positive and finite.", tuple(e))
    y = np.log(e)
    if model == "logn_over_n":
        y = y - np.log(np.log(n))
    x = np.log(n)
    exponent, intercept = np.polyfit(x, y, 1)
    return RateFit(
        model=model,
        fitted_constant=float(np.exp(intercept)),
        fitted_exponent=float(exponent),
        r_squared=_r_squared(y, intercept + exponent * x),
    )


def sector_counts(roots, edges):
    """Number of nonzero scaled roots with argument in each [edges[i], edges[i+1])."""
    z = roots.roots[roots.roots != 0]
    counts, _ = np.histogram(np.angle(z), bins=np.asarray(edges, dtype=float))
    return counts.astype(int)


@dataclass(frozen=True)
class StageResult:
    n: int
    roots: object
    predictions: tuple
    report: MatchReport


@dataclass
class PipelineResult:
    family: object
    stages: list = field(default_factory=list)

    def report(self, n):
        for stage in self.stages:
            if stage.n == n:
                return stage.report
        raise SzegoValueError("No stage for this n.", n, [s.n for s in self.stages])


def _run_stage(fam, n, corner_count, arc_band, radius_mode, params):
    with time_code_block("n=%d roots" % n, logger=logger):
        roots = all_roots(partial_sum(fam, n, radius_mode=radius_mode), params=params)
    predictions = []
    if corner_count > 0 and corner_gate(fam) < 0:
        predictions += corner_predicted_zeros(fam, n, corner_count, radius_mode=radius_mode, params=params)
    if arc_band is not None:
        predictions += arc_band_predictions(fam, n, arc_band, params=params)
    with time_code_block("n=%d match" % n, logger=logger):
        report = match(predictions, roots, params=params)
    logger.info(
        "%s n=%d: %d roots, %d predictions, %d matched",
        fam.name,
        n,
        roots.degree,
        len(predictions),
        len(report.pairs),
    )
    return StageResult(n=int(n), roots=roots, predictions=tuple(predictions), report=report)


def run_pipeline(fam, n_list, corner_count=2, arc_band=None, radius_mode="standard", params=None, workers=None):
    """Coefficients, roots, predictions and matching for every n, concurrently across n.

    Stages are independent; results are collected in the order of ``n_list``.
    """
    params = SzegoParams.check(params)
    result = PipelineResult(family=fam)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_run_stage, fam, n, corner_count, arc_band, radius_mode, params)
            for n in n_list
        ]
        result.stages = [f.result() for f in futures]
    return result


# ---------------------------------------------------------------------------------------
# reports

ROOTS_FIELDS = ("family", "n", "re", "im", "residual")
MATCHES_FIELDS = (
    "family",
    "n",
    "theorem",
    "k",
    "w_re",
    "w_im",
    "pred_re",
    "pred_im",
    "root_re",
    "root_im",
    "abs_err",
    "norm_err",
)
RATES_FIELDS = ("family", "check", "model", "constant", "exponent", "r2")


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (int, np.integer)):
        return int(x)
    return x


def roots_rows(family, roots):
    return [
        dict(zip(ROOTS_FIELDS, (family, roots.n, z.real, z.imag, r)))
        for z, r in zip(roots.roots, roots.residuals)
    ]


def matches_rows(report):
    rows = []
    for pair in report.pairs:
        p = pair.prediction
        values = (
            report.family,
            report.n,
            p.theorem,
            p.k,
            p.w.real,
            p.w.imag,
            p.z_scaled.real,
            p.z_scaled.imag,
            pair.root.real,
            pair.root.imag,
            pair.abs_error,
            pair.normalized_error,
        )
        rows.append(dict(zip(MATCHES_FIELDS, values)))
    return rows


def rates_rows(family, check, fit):
    return [
        dict(
            zip(
                RATES_FIELDS,
                (family, check, fit.model, fit.fitted_constant, fit.fitted_exponent, fit.r_squared),
            )
        )
    ]


def write_csv(path, fields, rows):
    """Write rows (dicts keyed by ``fields``) as CSV with round-trip float formatting."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(fields), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(row[k]) for k in fields})
    return path


def write_json(path, fields, rows):
    """JSON mirror of `write_csv`: a list of objects with the same field names."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    payload = [{k: _jsonable(row[k]) for k in fields} for row in rows]
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=False)
        f.write("\n")
    return path


def _jsonable(x):
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x
