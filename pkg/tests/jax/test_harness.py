import csv
import json
import math

import numpy as np
import pytest

from jax_szego.errors import SzegoValueError
from jax_szego.harness import (
    MATCHES_FIELDS,
    RATES_FIELDS,
    ROOTS_FIELDS,
    RateFit,
    buckholtz_check,
    enestrom_kakeya_check,
    match,
    matches_rows,
    rate_fit,
    rates_rows,
    ratio_limit_check,
    roots_rows,
    run_pipeline,
    sector_counts,
    write_csv,
    write_json,
)
from jax_szego.predict import CORNER_ERFC, PredictionRecord
from jax_szego.rootfind import RootSet
from jax_szego.series import make_family


def _rootset(roots, n=10, error_bounds=None, converged=True):
    roots = np.asarray(roots, dtype=complex)
    return RootSet(
        roots=roots,
        residuals=np.full(roots.shape, 1e-16),
        iterations=3,
        converged=np.full(roots.shape, converged),
        multiplicities=np.ones(roots.shape, dtype=int),
        n=n,
        radius=float(n),
        error_bounds=np.zeros(roots.shape) if error_bounds is None else np.asarray(error_bounds),
    )


def _prediction(z, scale=0.01, k=0):
    return PredictionRecord(
        theorem=CORNER_ERFC,
        w=complex(k),
        z_scaled=complex(z),
        z_unscaled=complex(10 * z),
        n=10,
        expected_error_scale=scale,
        k=k,
        family="exp",
    )


def test_match_injective():
    roots = _rootset([0.5 + 0.5j, 0.5 + 0.52j, -0.3])
    preds = [_prediction(0.5 + 0.505j, k=1), _prediction(2.0, k=2)]
    report = match(preds, roots)
    assert len(report.pairs) == 1
    pair = report.pairs[0]
    assert pair.prediction.k == 1
    assert pair.root == 0.5 + 0.5j
    np.testing.assert_allclose(pair.abs_error, 0.005, rtol=1e-10)
    np.testing.assert_allclose(pair.normalized_error, 0.5, rtol=1e-10)
    assert report.unmatched_predictions == 1
    assert report.unmatched_roots_near_region == 1
    assert report.unresolved_roots == 0
    assert report.matched_fraction == 0.5
    assert report.family == "exp"


def test_match_two_predictions_one_root():
    roots = _rootset([0.5 + 0.5j, -0.3])
    preds = [_prediction(0.5 + 0.503j, k=1), _prediction(0.5 + 0.501j, k=2)]
    report = match(preds, roots)
    assert len(report.pairs) == 1
    assert report.pairs[0].prediction.k == 2


def test_match_skips_unresolved_roots():
    roots = _rootset([0.5 + 0.5j, 0.5 + 0.52j], error_bounds=[0.0, 1.0])
    report = match([_prediction(0.5 + 0.505j)], roots)
    assert len(report.pairs) == 1
    assert report.unmatched_roots_near_region == 0
    assert report.unresolved_roots == 1


def test_match_every_root_when_resolution_is_not_required():
    roots = _rootset([0.5 + 0.52j], error_bounds=[1.0])
    assert len(match([_prediction(0.5 + 0.505j)], roots).pairs) == 0
    report = match([_prediction(0.5 + 0.505j)], roots, require_resolved=False)
    assert len(report.pairs) == 1
    assert report.unresolved_roots == 0


def test_match_edge_cases():
    report = match([], _rootset([0.5]))
    assert report.pairs == () and report.matched_fraction == 0.0
    with pytest.raises(SzegoValueError):
        match([_prediction(0.5)], _rootset([0.5], converged=False))
    # a tighter radius factor drops the pair
    assert len(match([_prediction(0.5 + 0.505j)], _rootset([0.5 + 0.5j]), radius_factor=0.5).pairs) == 0


def test_rate_fit_recovers_power_law():
    ns = [100, 200, 400, 800]
    fit = rate_fit([(n, 2.0 * n**-0.5) for n in ns], "inv_sqrt_n")
    np.testing.assert_allclose(fit.fitted_constant, 2.0, rtol=1e-10)
    np.testing.assert_allclose(fit.fitted_exponent, -0.5, rtol=1e-10)
    np.testing.assert_allclose(fit.r_squared, 1.0)

    fit = rate_fit([(n, 0.5 * math.log(n) / n) for n in ns], "logn_over_n")
    np.testing.assert_allclose(fit.fitted_constant, 0.5, rtol=1e-10)
    np.testing.assert_allclose(fit.fitted_exponent, -1.0, rtol=1e-10)


def test_rate_fit_errors():
    with pytest.raises(SzegoValueError):
        rate_fit([(1, 1.0), (2, 0.5), (4, 0.25)], "exponential")
    with pytest.raises(SzegoValueError):
        rate_fit([(1, 1.0), (2, 0.5)], "inv_n")
    with pytest.raises(SzegoValueError):
        rate_fit([(1, 1.0), (2, 0.0), (4, 0.25)], "inv_n")


def test_rate_fit_target():
    fit = RateFit(model="logn_over_n", fitted_constant=0.6, fitted_exponent=-1.0, r_squared=0.9, target=0.5)
    assert fit.matches_target(0.5)
    assert not fit.matches_target(0.1)
    with pytest.raises(SzegoValueError):
        RateFit(model="inv_n", fitted_constant=1.0, fitted_exponent=-1.0, r_squared=1.0).matches_target()


def test_sector_counts():
    roots = _rootset([1.0, 1.0j, -1.0, 0.0, 0.1 + 0.1j])
    np.testing.assert_array_equal(sector_counts(roots, [-np.pi, 0.0, 0.5 * np.pi, np.pi]), [0, 2, 2])


def test_enestrom_kakeya_check():
    max_modulus, passed = enestrom_kakeya_check(50)
    assert passed
    assert max_modulus <= 1.0 + 1e-9


def test_buckholtz_check():
    result = buckholtz_check(make_family("exp"), 50)
    assert result.passed
    np.testing.assert_allclose(result.bound, 2 * math.e / math.sqrt(50))
    assert result.max_distance <= result.bound
    with pytest.raises(SzegoValueError):
        buckholtz_check(make_family("sin"), 50)


def test_ratio_limit_check_rows():
    exp = make_family("exp")
    rows = ratio_limit_check(exp, "corner", [-1.0, -1.0 + 1.0j], [40, 60])
    assert [(r.n, r.w) for r in rows] == [(40, -1.0), (40, -1.0 + 1.0j), (60, -1.0), (60, -1.0 + 1.0j)]
    for r in rows:
        assert np.isfinite(r.measured)
        np.testing.assert_allclose(r.error, abs(r.measured - r.predicted))
    with pytest.raises(SzegoValueError):
        ratio_limit_check(exp, "corner", [0.5], [40])
    with pytest.raises(SzegoValueError):
        ratio_limit_check(exp, "middle", [-1.0], [40])
    with pytest.raises(SzegoValueError):
        ratio_limit_check(make_family("expint", r=-1.0, p=0.0, q=3.0), "corner", [-1.0], [40])


def test_run_pipeline():
    result = run_pipeline(make_family("exp"), [30, 40], corner_count=1, workers=2)
    assert [s.n for s in result.stages] == [30, 40]
    report = result.report(30)
    assert report.n == 30
    assert len(report.pairs) == 2
    assert result.stages[1].roots.degree == 39
    with pytest.raises(SzegoValueError):
        result.report(99)


def test_writers_round_trip(tmp_path):
    roots = _rootset([0.1 + 0.2j, 1.0 / 3.0])
    rows = roots_rows("exp", roots)
    path = write_csv(str(tmp_path / "sub" / "roots.csv"), ROOTS_FIELDS, rows)
    with open(path) as f:
        back = list(csv.DictReader(f))
    assert [k for k in back[0]] == list(ROOTS_FIELDS)
    assert float(back[1]["re"]) == 1.0 / 3.0
    assert back[0]["family"] == "exp" and back[0]["n"] == "10"

    path = write_json(str(tmp_path / "roots.json"), ROOTS_FIELDS, rows)
    with open(path) as f:
        payload = json.load(f)
    assert payload[0]["im"] == 0.2
    assert len(payload) == 2


def test_csv_flags_are_written_as_booleans(tmp_path):
    fields = ("check", "passed")
    rows = [{"check": "a", "passed": True}, {"check": "b", "passed": np.bool_(False)}]
    path = write_csv(str(tmp_path / "checks.csv"), fields, rows)
    with open(path) as f:
        back = list(csv.DictReader(f))
    assert [r["passed"] for r in back] == ["True", "False"]


def test_report_rows():
    report = match([_prediction(0.5 + 0.505j, k=1)], _rootset([0.5 + 0.5j]))
    rows = matches_rows(report)
    assert len(rows) == 1 and set(rows[0]) == set(MATCHES_FIELDS)
    assert rows[0]["k"] == 1
    fit = RateFit(model="inv_n", fitted_constant=1.5, fitted_exponent=-1.0, r_squared=0.99)
    (row,) = rates_rows("exp", "kkmm", fit)
    assert row["constant"] == 1.5 and tuple(row) == RATES_FIELDS
