"""Command-line entry point: ``jax-szego <command> [options]``.

Commands write CSV tables with JSON mirrors and SVG figures (each with a sidecar CSV holding
exactly the plotted data) into the output directory. Exit codes: 0 on success, 1 on a
numerical failure or a failed check, 2 on a usage or configuration error.
"""

import argparse
import glob
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field

import matplotlib
import numpy as np
import yaml

from jax_szego import harness, laplace, predict
from jax_szego.core.testing import time_code_block
from jax_szego.curve import phi, radius_at, sample_arrays, trace
from jax_szego.errors import SzegoError, SzegoValueError
from jax_szego.params import SzegoParams
from jax_szego.rootfind import all_roots
from jax_szego.series import family_from_config, partial_sum

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

logger = logging.getLogger(__name__)

COMMANDS = ("coeffs", "roots", "curve", "predict", "verify", "laplace", "report")
OUTPUT_DIR_ENV = "JAX_SZEGO_OUTPUT_DIR"
TESTING_ENV = "JAX_SZEGO_TESTING"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

matplotlib.rcParams["svg.hashsalt"] = "jax-szego"


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    """Settings of one run, from a YAML/JSON file overridden by command-line flags.

    Attributes:
        family:         {"name": ..., "params": {...}}.
        n_list:         Numbers of terms, each >= 2.
        commands:       The commands to run.
        output_dir:     Where files are written; the JAX_SZEGO_OUTPUT_DIR environment
                        variable takes precedence.
        tolerances:     `SzegoParams` field overrides.
        seed:           Seed of the root-finder restarts.
        lam:            Order of the curve for the curve command.
        samples:        Number of curve samples.
        corner_count:   erfc zeros used for corner predictions.
        arc_band:       Optional (lo, hi) argument band for arc predictions.
        kkmm_terms:     Terms of the refined corner expansion in verify.
        lam_grid:       Laplace parameters for the laplace command.
        laplace_terms:  Number of series terms compared in the laplace command.
        checks:         Per-check overrides of `DEFAULT_CHECKS` for the verify command.
    """

    family: dict = field(default_factory=lambda: {"name": "exp", "params": {}})
    n_list: list = field(default_factory=lambda: [50])
    commands: list = field(default_factory=list)
    output_dir: str = "szego_output"
    tolerances: dict = field(default_factory=dict)
    seed: int = 1234
    lam: float = 1.0
    samples: int = 512
    corner_count: int = 2
    arc_band: tuple = None
    kkmm_terms: int = 4
    lam_grid: list = field(default_factory=lambda: [20.0, 50.0, 100.0])
    laplace_terms: int = 3
    checks: dict = field(default_factory=dict)

    def params(self):
        try:
            return SzegoParams(**dict(self.tolerances, seed=self.seed))
        except TypeError as e:
            raise ConfigError("Unknown tolerance: %s" % e) from e

    def check_settings(self, name):
        return dict(DEFAULT_CHECKS[name], **self.checks.get(name, {}))

    def check(self):
        for n in self.n_list:
            if int(n) != n or n < 2:
                raise ConfigError("Every n must be an integer >= 2, got %r." % (n,))
        for c in self.commands:
            if c not in COMMANDS:
                raise ConfigError("Unknown command %r." % (c,))
        if self.arc_band is not None and len(self.arc_band) != 2:
            raise ConfigError("arc_band must be a pair (lo, hi).")
        for name, settings in self.checks.items():
            if name not in DEFAULT_CHECKS:
                raise ConfigError("Unknown check %r." % (name,))
            unknown = set(settings) - set(DEFAULT_CHECKS[name])
            if unknown:
                raise ConfigError("Unknown settings of check %s: %s" % (name, ", ".join(sorted(unknown))))
        return self


def load_config(path):
    """Read a run configuration; JSON files are read as YAML."""
    with open(path) as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ConfigError("The configuration file must hold a mapping.")
    unknown = set(data) - set(RunConfig.__dataclass_fields__)
    if unknown:
        raise ConfigError("Unknown configuration keys: %s" % ", ".join(sorted(unknown)))
    if isinstance(data.get("family"), str):
        data["family"] = {"name": data["family"], "params": {}}
    return RunConfig(**data)


def _key_value(text):
    if "=" not in text:
        raise argparse.ArgumentTypeError("expected key=value, got %r" % text)
    key, value = text.split("=", 1)
    return key, yaml.safe_load(value)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="jax-szego",
        description="Zeros of scaled partial sums of entire functions and their limit curves.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("-c", "--config", help="YAML or JSON run configuration")
    parser.add_argument("-f", "--family", help="family name")
    parser.add_argument("-p", "--param", type=_key_value, action="append", default=[], help="family parameter key=value")
    parser.add_argument("-n", "--n", type=int, action="append", dest="n_list", help="number of terms (repeatable)")
    parser.add_argument("-o", "--output-dir", help="output directory")
    parser.add_argument("--tol", type=_key_value, action="append", default=[], help="tolerance override key=value")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--lam", type=float, help="curve order for the curve command")
    parser.add_argument("--samples", type=int, help="number of curve samples")
    parser.add_argument("--arc-band", type=float, nargs=2, metavar=("LO", "HI"))
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def resolve_config(args):
    config = load_config(args.config) if args.config else RunConfig()
    if args.family:
        config.family = {"name": args.family, "params": {}}
    if args.param:
        config.family = dict(config.family, params=dict(config.family.get("params", {}), **dict(args.param)))
    if args.n_list:
        config.n_list = list(args.n_list)
    if args.output_dir:
        config.output_dir = args.output_dir
    if args.tol:
        config.tolerances = dict(config.tolerances, **dict(args.tol))
    if args.seed is not None:
        config.seed = args.seed
    if args.lam is not None:
        config.lam = args.lam
    if args.samples is not None:
        config.samples = args.samples
    if args.arc_band is not None:
        config.arc_band = tuple(args.arc_band)
    config.output_dir = os.environ.get(OUTPUT_DIR_ENV, config.output_dir)
    config.commands = [args.command]
    return config.check()


def _path(config, name):
    return os.path.join(config.output_dir, name)


def _write_table(config, stem, fields, rows):
    harness.write_csv(_path(config, stem + ".csv"), fields, rows)
    harness.write_json(_path(config, stem + ".json"), fields, rows)


def _save_figure(fig, path, series):
    """Save an SVG and its sidecar CSV of (series, x, y) rows."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    rows = [{"series": name, "x": x, "y": y} for name, xs, ys in series for x, y in zip(xs, ys)]
    harness.write_csv(path + ".csv", ("series", "x", "y"), rows)


def _curve_series(lam, samples, params):
    xi, _, _ = sample_arrays(trace(lam, samples, params))
    closed = np.concatenate([xi, np.conj(xi[::-1])])
    return closed.real, closed.imag


def cmd_coeffs(config, fam, params):
    fields = ("family", "n", "k", "mantissa_re", "mantissa_im", "exponent", "log_abs")
    for n in config.n_list:
        poly = partial_sum(fam, n)
        m = np.asarray(poly.coeffs.mantissa)
        e = np.asarray(poly.coeffs.exponent) + poly.prescale_exponent
        log_abs = np.asarray(poly.coeffs.log_abs()) + poly.prescale_exponent * np.log(2.0)
        rows = [
            dict(zip(fields, (fam.name, n, k, m[k].real, m[k].imag, int(e[k]), float(log_abs[k]))))
            for k in range(n)
        ]
        _write_table(config, "coeffs_%s_n%d" % (fam.name, n), fields, rows)
    return EXIT_OK


def cmd_roots(config, fam, params):
    curve_x, curve_y = _curve_series(fam.lambda_, config.samples, params)
    for n in config.n_list:
        with time_code_block("roots n=%d" % n, logger=logger):
            roots = all_roots(partial_sum(fam, n), params=params)
        stem = "roots_%s_n%d" % (fam.name, n)
        _write_table(config, stem, harness.ROOTS_FIELDS, harness.roots_rows(fam.name, roots))

        fig, ax = plt.subplots(figsize=(5, 5))
        ax.plot(curve_x, curve_y, "-", lw=0.8, color="k")
        ax.plot(roots.roots.real, roots.roots.imag, ".", ms=3, color="C3")
        ax.set_aspect("equal")
        ax.set_title("zeros of p_%d(r_n z), %s" % (n - 1, fam.name))
        _save_figure(
            fig,
            _path(config, stem + ".svg"),
            [("curve", curve_x, curve_y), ("roots", roots.roots.real, roots.roots.imag)],
        )
    return EXIT_OK


def cmd_curve(config, fam, params):
    lam = config.lam
    samples = trace(lam, config.samples, params)
    xi, arg, tau = sample_arrays(samples)
    re_phi = np.asarray(phi(xi, lam)).real
    fields = ("xi_re", "xi_im", "arg", "tau", "arclength", "re_phi")
    rows = [
        dict(zip(fields, (x.real, x.imag, a, t, s.arclength, r)))
        for x, a, t, s, r in zip(xi, arg, tau, samples, re_phi)
    ]
    stem = "curve_lam%g" % lam
    _write_table(config, stem, fields, rows)

    cx, cy = _curve_series(lam, config.samples, params)
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(cx, cy, "-", lw=0.8, color="k")
    ax.set_aspect("equal")
    ax.set_title("limit curve, lambda = %g" % lam)
    _save_figure(fig, _path(config, stem + ".svg"), [("curve", cx, cy)])
    return EXIT_OK


PREDICTION_FIELDS = ("family", "n", "theorem", "k", "w_re", "w_im", "z_re", "z_im", "zu_re", "zu_im", "error_scale")


def _prediction_rows(records):
    return [
        dict(
            zip(
                PREDICTION_FIELDS,
                (
                    r.family,
                    r.n,
                    r.theorem,
                    r.k,
                    r.w.real,
                    r.w.imag,
                    r.z_scaled.real,
                    r.z_scaled.imag,
                    r.z_unscaled.real,
                    r.z_unscaled.imag,
                    r.expected_error_scale,
                ),
            )
        )
        for r in records
    ]


def cmd_predict(config, fam, params):
    for n in config.n_list:
        records = []
        if predict.corner_gate(fam) < 0:
            records += predict.corner_predicted_zeros(fam, n, config.corner_count, params=params)
        else:
            logger.info("%s: corner limit gated, no corner predictions", fam.name)
        if config.arc_band is not None:
            records += predict.arc_band_predictions(fam, n, config.arc_band, params=params)
        _write_table(config, "predictions_%s_n%d" % (fam.name, n), PREDICTION_FIELDS, _prediction_rows(records))
    return EXIT_OK


CHECK_FIELDS = ("check", "n", "value", "bound", "passed")

# settings of the verify checks; the "checks" entry of a run configuration overrides them
DEFAULT_CHECKS = {
    "kkmm": {"count": 2, "atol": 5e-3},
    "corner_ratio": {"w_grid": [[-0.5, 0.0], [-1.0, 0.0], [-1.0, 1.0], [-1.0, -1.0]], "factor": 0.5},
    "arc_ratio": {"arg": 0.5, "w_grid": [[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], "factor": 0.6},
    "corner_width": {"exponent": -0.5, "epsilon": 0.25, "min_count": 2},
    "arc_width": {"arg": 0.5 * math.pi, "exponent": -1.0, "epsilon": 0.4, "min_count": 2, "max_n": 100},
    "sin_corner": {"n": 200, "ranges": [[0.01, 0.03], [0.02, 0.06]]},
    "arc_match": {"arg": 0.8, "k_range": [-2, 2], "max_normalized_error": 10.0, "max_n": 200},
    "corner_match": {"max_normalized_error": 10.0},
}


def _curve_point(arg, lam, params):
    return complex(radius_at(arg, lam, params) * np.exp(1j * arg))


def _worst_by_n(rows):
    worst = {}
    for r in rows:
        worst[r.n] = max(worst.get(r.n, 0.0), r.error)
    return [worst[n] for n in sorted(worst)]


def _ratio_checks(config, fam, n_grid, params):
    checks = []
    ends = [n_grid[0], n_grid[-1]]
    cfg = config.check_settings("corner_ratio")
    rows = harness.ratio_limit_check(fam, "corner", [complex(*w) for w in cfg["w_grid"]], ends, params=params)
    first, last = _worst_by_n(rows)
    checks.append(("corner_ratio", ends[1], last, cfg["factor"] * first, last <= cfg["factor"] * first))

    cfg = config.check_settings("arc_ratio")
    xi = _curve_point(cfg["arg"], fam.lambda_, params)
    rows = harness.ratio_limit_check(fam, xi, [complex(*w) for w in cfg["w_grid"]], ends, params=params)
    first, last = _worst_by_n(rows)
    checks.append(("arc_ratio", ends[1], last, cfg["factor"] * first, last <= cfg["factor"] * first))
    return checks


def _width_checks(config, fam, roots_by_n, params):
    checks = []
    n_grid = sorted(roots_by_n)
    if len(n_grid) >= 2:
        cfg = config.check_settings("corner_width")
        counts = [
            predict.width_disk_count(roots_by_n[n], 0.0, float(n), cfg["exponent"], cfg["epsilon"])
            for n in n_grid
        ]
        passed = bool(np.all(np.diff(counts) >= 0)) and counts[-1] >= cfg["min_count"]
        checks.append(("corner_width", n_grid[-1], counts[-1], cfg["min_count"], passed))

    cfg = config.check_settings("arc_width")
    xi = _curve_point(cfg["arg"], fam.lambda_, params)
    for n in n_grid:
        if n > cfg["max_n"]:
            continue
        count = predict.width_disk_count(roots_by_n[n], cfg["arg"], n * abs(xi), cfg["exponent"], cfg["epsilon"])
        checks.append(("arc_width", n, count, cfg["min_count"], count >= cfg["min_count"]))
    return checks


def _exp_checks(config, params):
    fam = family_from_config("exp")
    checks = []
    rates = []
    for n in config.n_list:
        max_modulus, ok = harness.enestrom_kakeya_check(n, params=params)
        checks.append(("enestrom_kakeya", n, max_modulus, 1.0 + 1e-9, ok))
        res = harness.buckholtz_check(fam, n, params=params)
        checks.append(("buckholtz", n, res.max_distance, res.bound, res.passed))

    roots_by_n = {}
    for n in sorted(set(config.n_list)):
        with time_code_block("roots n=%d" % n, logger=logger):
            roots_by_n[n] = all_roots(partial_sum(fam, n), params=params)

    cfg = config.check_settings("kkmm")
    records_by_n = {}
    for n, roots in roots_by_n.items():
        if n < 4:
            continue
        records = predict.kkmm_predicted_zeros(n, cfg["count"], config.kkmm_terms, params=params)
        report = harness.match(records, roots, params=params)
        worst = max((p.abs_error for p in report.pairs), default=np.inf)
        passed = worst <= cfg["atol"] and report.unmatched_predictions == 0
        checks.append(("kkmm_match", n, worst, cfg["atol"], passed))
        records_by_n[n] = report

    n_grid = sorted(roots_by_n)
    if len(n_grid) >= 2 and n_grid[0] >= 3:
        checks += _ratio_checks(config, fam, n_grid, params)
    else:
        logger.info("ratio limits need two values of n >= 3; skipped")
    checks += _width_checks(config, fam, roots_by_n, params)

    if config.arc_band is not None and len(config.n_list) >= 3:
        fit = harness.exterior_approach_fit(fam, config.n_list, config.arc_band, params=params)
        checks.append(("exterior_approach", 0, fit.fitted_constant, fit.target, fit.matches_target()))
        rates += harness.rates_rows(fam.name, "exterior_approach", fit)
    return checks, rates, records_by_n


def _sin_corner_checks(config, fam, n, roots):
    cfg = config.check_settings("sin_corner")
    if n != cfg["n"]:
        return []
    checks = []
    for r in predict.corner_predicted_zeros(fam, n, len(cfg["ranges"])):
        lo, hi = cfg["ranges"][abs(r.k) - 1]
        dist = float(np.min(np.abs(roots.roots - r.z_scaled)))
        checks.append(("sin_corner", n, dist, hi, lo <= dist <= hi))
    return checks


def _arc_match_checks(config, fam, n, roots, params):
    cfg = config.check_settings("arc_match")
    if n > cfg["max_n"] or n < 3 or cfg["arg"] >= fam.growth.theta:
        return []
    point = predict.arc_point(fam, _curve_point(cfg["arg"], fam.lambda_, params), n)
    lo, hi = cfg["k_range"]
    report = harness.match(predict.arc_predicted_zeros(point, range(lo, hi + 1), params=params), roots, params=params)
    worst = max((p.normalized_error for p in report.pairs), default=np.inf)
    limit = cfg["max_normalized_error"]
    return [("arc_match", n, worst, limit, worst <= limit and report.unmatched_predictions == 0)]


def _corner_gate_checks(config, fam, n, roots, params):
    gate = predict.corner_gate(fam)
    if gate >= 0:
        try:
            predict.corner_predicted_zeros(fam, n, config.corner_count, params=params)
        except SzegoValueError:
            return [("corner_gate", n, gate, 0.0, True)]
        return [("corner_gate", n, gate, 0.0, False)]
    limit = config.check_settings("corner_match")["max_normalized_error"]
    records = predict.corner_predicted_zeros(fam, n, config.corner_count, params=params)
    report = harness.match(records, roots, params=params)
    worst = max((p.normalized_error for p in report.pairs), default=np.inf)
    return [("corner_match", n, worst, limit, worst <= limit and report.unmatched_predictions == 0)]


def _generic_checks(config, fam, params):
    checks = []
    result = harness.run_pipeline(
        fam, config.n_list, corner_count=config.corner_count, arc_band=config.arc_band, params=params
    )
    reports = {}
    for stage in result.stages:
        report = stage.report
        checks.append(("match_fraction", stage.n, report.matched_fraction, 0.9, report.matched_fraction >= 0.9))
        reports[stage.n] = report
        if fam.name == "sin":
            checks += _sin_corner_checks(config, fam, stage.n, stage.roots)
        if fam.name == "expint":
            checks += _corner_gate_checks(config, fam, stage.n, stage.roots, params)
        if fam.growth.num_directions == 1:
            checks += _arc_match_checks(config, fam, stage.n, stage.roots, params)
    return checks, [], reports


def cmd_verify(config, fam, params):
    if fam.name == "exp":
        checks, rates, reports = _exp_checks(config, params)
    else:
        checks, rates, reports = _generic_checks(config, fam, params)
    rows = [dict(zip(CHECK_FIELDS, c)) for c in checks]
    _write_table(config, "checks_%s" % fam.name, CHECK_FIELDS, rows)
    matches = [row for n in sorted(reports) for row in harness.matches_rows(reports[n])]
    _write_table(config, "matches_%s" % fam.name, harness.MATCHES_FIELDS, matches)
    if rates:
        _write_table(config, "rates_%s" % fam.name, harness.RATES_FIELDS, rates)
    failed = [c for c in checks if not c[4]]
    for c in failed:
        logger.warning("check %s failed at n=%s: %r vs %r", c[0], c[1], c[2], c[3])
    return EXIT_FAILURE if failed else EXIT_OK


LAPLACE_FIELDS = ("integrand", "lambda", "quadrature", "series", "first_omitted", "abs_error", "passed")


def cmd_laplace(config, fam, params):
    rows = []
    for name in sorted(laplace.BUILTIN_INTEGRANDS):
        for lam, quad, value, omitted, err in laplace.watson_table(name, config.lam_grid, config.laplace_terms, params):
            rows.append(dict(zip(LAPLACE_FIELDS, (name, lam, quad.real, value.real, omitted, err, err <= 2.0 * omitted))))
    f, a, b = laplace.LOG_POWER_DEMO
    series = laplace.log_power(a, b, 2)
    for lam in config.lam_grid:
        quad = laplace.watson_quadrature(f, lam, params=params).value
        value, omitted = laplace.series_eval(series, lam)
        err = abs(quad - value)
        passed = err <= 1e-8 * abs(value)
        rows.append(dict(zip(LAPLACE_FIELDS, ("log-power", float(lam), quad.real, value.real, omitted, err, passed))))
    _write_table(config, "laplace", LAPLACE_FIELDS, rows)
    return EXIT_OK if all(r["passed"] for r in rows) else EXIT_FAILURE


def cmd_report(config, fam, params):
    """Summarize the CSV tables in the output directory into summary.json."""
    summary = {}
    for path in sorted(glob.glob(_path(config, "*.csv"))):
        if path.endswith(".svg.csv"):
            continue
        with open(path) as f:
            lines = f.read().splitlines()
        entry = {"rows": max(len(lines) - 1, 0)}
        header = lines[0].split(",") if lines else []
        if "passed" in header:
            col = header.index("passed")
            entry["failed"] = sum(1 for line in lines[1:] if line.split(",")[col] == "False")
        summary[os.path.basename(path)] = entry
    with open(_path(config, "summary.json"), "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")
    logger.info("summarized %d tables", len(summary))
    return EXIT_OK if all(e.get("failed", 0) == 0 for e in summary.values()) else EXIT_FAILURE


_HANDLERS = {
    "coeffs": cmd_coeffs,
    "roots": cmd_roots,
    "curve": cmd_curve,
    "predict": cmd_predict,
    "verify": cmd_verify,
    "laplace": cmd_laplace,
    "report": cmd_report,
}


def _write_failure(config, command, error):
    record = {"command": command, "error": type(error).__name__, "message": str(error)}
    os.makedirs(config.output_dir, exist_ok=True)
    with open(_path(config, "failure.json"), "w") as f:
        json.dump(record, f, indent=2, sort_keys=True)
        f.write("\n")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not os.environ.get(TESTING_ENV):
        logging.basicConfig(
            level=logging.WARNING - 10 * min(args.verbose, 2),
            format="%(asctime)s %(name)s %(levelname)s: %(message)s",
        )
    try:
        config = resolve_config(args)
        params = config.params()
        fam = family_from_config(config.family)
    except (ConfigError, OSError, yaml.YAMLError, SzegoError, ValueError) as e:
        parser.print_usage(sys.stderr)
        print("jax-szego: error: %s" % e, file=sys.stderr)
        return EXIT_USAGE

    command = config.commands[0]
    try:
        return _HANDLERS[command](config, fam, params)
    except SzegoError as e:
        logger.error("%s failed: %s", command, e)
        _write_failure(config, command, e)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
