"""Command-line front end: scenario evaluation, figure datasets, sweeps.

Gains and targets enter in dB and are converted once at this boundary; the
library works in linear units.  Output is CSV (default) or JSON, written to
stdout or --out.  CSV is UTF-8 with a header row, '.' decimal separator,
17-significant-digit floats, and a schema tag in the first column so
downstream plotting can detect format drift.

Exit codes: 0 success, 2 invalid arguments, 3 numeric failure,
4 self-check violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time

import numpy as np

from . import analysis, core, montecarlo, special
from .channel import SystemParams, make_rng, sample_stats

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_SELFCHECK = 4

_SCHEMAS = {
    "analyze": "cbnoma.analyze.v1",
    "simulate": "cbnoma.simulate.v1",
    "figure": "cbnoma.figure.v1",
    "tradeoff": "cbnoma.tradeoff.v1",
}

FIGURE_RHO_GRID = tuple(np.logspace(math.log10(1e-3), math.log10(0.5), 25))
FIGURE2_M_GRID = tuple(range(2, 65, 2))
FIGURE3_M_GRID = tuple(4 * 2**k for k in range(9))  # 4 .. 1024
FIGURE2_RHO_VALUES = (0.02, 0.005)
FIGURE3_TAUS = (0.5, 1.0, 2.0)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _emit(rows, header, fmt, out):
    if fmt == "json":
        text = json.dumps([{k: row[k] for k in header} for row in rows], indent=2) + "\n"
    else:
        buf = []
        writer_target = _ListWriter(buf)
        writer = csv.writer(writer_target, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(row[k]) for k in header])
        text = "".join(buf)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


class _ListWriter:
    def __init__(self, store):
        self.store = store

    def write(self, chunk):
        self.store.append(chunk)


def _add_scenario_args(parser):
    parser.add_argument("--m", type=int, default=8, help="antenna count (>= 2)")
    parser.add_argument("--beta1-db", type=float, default=0.0, help="strong-user gain [dB]")
    parser.add_argument("--beta2-db", type=float, default=-10.0, help="weak-user gain [dB]")
    parser.add_argument("--gamma1-db", type=float, default=10.0, help="strong-user SINR target [dB]")
    parser.add_argument("--gamma2-db", type=float, default=0.0, help="weak-user SINR target [dB]")
    parser.add_argument("--rho-th-sq", type=float, default=None,
                        help="squared correlation threshold (0, 1]")
    parser.add_argument("--tau", type=float, default=None,
                        help="threshold schedule exponent: rho_th_sq = lambda / m^tau")
    parser.add_argument("--lambda", dest="lam", type=float, default=None,
                        help="threshold schedule constant")


def _add_output_args(parser):
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default=None, help="output file (default: stdout)")


def _add_sim_args(parser):
    parser.add_argument("--trials", type=int, default=1_000_000)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--path", choices=(montecarlo.VECTOR_EXACT, montecarlo.DISTRIBUTIONAL),
                        default=montecarlo.DISTRIBUTIONAL)


def _resolve_rho_th_sq(args, allow_zero=False):
    if args.rho_th_sq is not None:
        value = args.rho_th_sq
    elif args.tau is not None and args.lam is not None:
        value = analysis.ThresholdSchedule(tau=args.tau, lam=args.lam).rho_th_sq(args.m)
    else:
        value = 0.02
    low_ok = value >= 0.0 if allow_zero else value > 0.0
    if not (low_ok and value <= 1.0):
        raise ValueError(
            "rho-th-sq must be in (0, 1]: a zero threshold gives unbounded "
            "average transmit power"
        )
    return value


def _params_from_args(args, allow_zero_threshold=False):
    rho_th_sq = _resolve_rho_th_sq(args, allow_zero=allow_zero_threshold)
    return SystemParams(
        m=args.m,
        beta1=db_to_linear(args.beta1_db),
        beta2=db_to_linear(args.beta2_db),
        gamma1=db_to_linear(args.gamma1_db),
        gamma2=db_to_linear(args.gamma2_db),
        rho_th=math.sqrt(rho_th_sq),
    )


def _scenario_columns(args, params):
    return {
        "m": params.m,
        "beta1_db": args.beta1_db,
        "beta2_db": args.beta2_db,
        "gamma1_db": args.gamma1_db,
        "gamma2_db": args.gamma2_db,
        "rho_th_sq": params.rho_th_sq,
    }


def cmd_analyze(args) -> int:
    params = _params_from_args(args)
    report = analysis.bound_report(params)
    row = {"schema": _SCHEMAS["analyze"], **_scenario_columns(args, params),
           "p_tilde_lo": report.p_tilde_lo, "p_upper": report.p_upper,
           "p_asymptotic": report.p_asymptotic, "asymptotic_valid": report.asymptotic_valid,
           "tight": report.tight, "p_out": report.p_out}
    _emit([row], list(row.keys()), args.format, args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    params = _params_from_args(args, allow_zero_threshold=True)
    config = montecarlo.SimulationConfig(trials=args.trials, seed=args.seed, path=args.path)
    started = time.perf_counter()
    result = montecarlo.estimate(params, config)
    elapsed = time.perf_counter() - started
    row = {"schema": _SCHEMAS["simulate"], **_scenario_columns(args, params),
           "trials": args.trials, "seed": args.seed, "path": args.path,
           "mean_p_min": result.mean_p_min, "ci_half_width": result.ci_half_width,
           "empirical_outage": result.empirical_outage,
           "p_out_exact": analysis.outage_probability(params.m, params.rho_th),
           "n_transmit": result.n_transmit, "n_silent": result.n_silent,
           "diverged": result.diverged}
    _emit([row], list(row.keys()), args.format, args.out)
    # Wall clock goes to stderr so the data stream stays byte-reproducible.
    print(f"simulate: {args.trials} trials in {elapsed:.2f} s", file=sys.stderr)
    return EXIT_OK


def _figure_point(args, m, rho_th_sq, figure, series, x):
    params = SystemParams(
        m=m,
        beta1=db_to_linear(args.beta1_db),
        beta2=db_to_linear(args.beta2_db),
        gamma1=db_to_linear(args.gamma1_db),
        gamma2=db_to_linear(args.gamma2_db),
        rho_th=math.sqrt(rho_th_sq),
    )
    report = analysis.bound_report(params)
    config = montecarlo.SimulationConfig(trials=args.trials, seed=args.seed, path=args.path)
    result = montecarlo.estimate(params, config)
    return {"schema": _SCHEMAS["figure"], "figure": figure, "series": series, "x": x,
            "mc_mean": result.mean_p_min, "ci": result.ci_half_width,
            "p_tilde_lo": report.p_tilde_lo, "p_upper": report.p_upper,
            "p_asymptotic": report.p_asymptotic, "p_out": report.p_out}


def _parse_grid(text, cast):
    return [cast(v) for v in text.split(",") if v.strip()]


def cmd_figure(args) -> int:
    rows = []
    if args.id == 1:
        rho_grid = _parse_grid(args.rho_grid, float) if args.rho_grid else FIGURE_RHO_GRID
        m_values = _parse_grid(args.m_grid, int) if args.m_grid else (8, 16)
        for m in m_values:
            for a in rho_grid:
                rows.append(_figure_point(args, m, a, 1, f"m={m}", float(a)))
    elif args.id == 2:
        m_grid = _parse_grid(args.m_grid, int) if args.m_grid else FIGURE2_M_GRID
        rho_values = _parse_grid(args.rho_grid, float) if args.rho_grid else FIGURE2_RHO_VALUES
        for a in rho_values:
            for m in m_grid:
                rows.append(_figure_point(args, m, a, 2, f"rho_th_sq={_fmt(float(a))}", m))
    else:
        m_grid = _parse_grid(args.m_grid, int) if args.m_grid else FIGURE3_M_GRID
        for tau in FIGURE3_TAUS:
            for m in m_grid:
                a = 1.0 / m**tau
                rows.append(_figure_point(args, m, a, 3, f"tau={_fmt(tau)}", m))
    header = ["schema", "figure", "series", "x", "mc_mean", "ci",
              "p_tilde_lo", "p_upper", "p_asymptotic", "p_out"]
    _emit(rows, header, args.format, args.out)
    return EXIT_OK


def cmd_tradeoff(args) -> int:
    grid = _parse_grid(args.lambda_grid, float)
    params = SystemParams(
        m=max(args.m, 2),
        beta1=db_to_linear(args.beta1_db),
        beta2=db_to_linear(args.beta2_db),
        gamma1=db_to_linear(args.gamma1_db),
        gamma2=db_to_linear(args.gamma2_db),
        rho_th=0.0,
    )
    points = analysis.tradeoff_curve(params, grid)
    rows = []
    header = ["schema", "lambda", "p_out_limit", "p_limit"]
    finite = args.finite_m is not None
    if finite:
        header += ["m", "p_tilde_lo_at_m", "p_out_at_m"]
    for pt in points:
        row = {"schema": _SCHEMAS["tradeoff"], "lambda": pt.lam,
               "p_out_limit": pt.p_out_limit, "p_limit": pt.p_limit}
        if finite:
            a = analysis.ThresholdSchedule(tau=1.0, lam=pt.lam).rho_th_sq(args.finite_m)
            fparams = SystemParams(
                m=args.finite_m, beta1=params.beta1, beta2=params.beta2,
                gamma1=params.gamma1, gamma2=params.gamma2, rho_th=math.sqrt(a),
            )
            row["m"] = args.finite_m
            row["p_tilde_lo_at_m"] = analysis.p_tilde_lo(fparams)
            row["p_out_at_m"] = analysis.outage_probability(args.finite_m, fparams.rho_th)
        rows.append(row)
    _emit(rows, header, args.format, args.out)
    return EXIT_OK


def _selfcheck_lines(trials, seed):
    """Yield (name, passed) pairs for the invariant suite."""
    z99 = 2.5758293035489004

    # Dual evaluation routes of the threshold integral.
    ok = True
    for m in (2, 3, 4, 8, 16, 32, 64):
        for a in (1e-4, 1e-3, 0.01, 0.1, 0.5, 1.0):
            s = special.threshold_integral_sum(a, m)
            q = special.threshold_integral_quad(a, m)
            if q == 0.0:
                ok &= s == 0.0
            else:
                ok &= abs(s - q) <= 1e-9 * q
    yield "threshold integral: series vs quadrature to 1e-9", ok

    # Hypergeometric vs integral form of the lower bound.
    ok = True
    for m in (2, 4, 8, 16, 64):
        for a in (1e-4, 0.01, 0.1, 0.5, 1.0):
            params = SystemParams(m=m, beta1=1.0, beta2=0.1, gamma1=10.0,
                                  gamma2=1.0, rho_th=math.sqrt(a))
            lo = analysis.p_tilde_lo(params)
            hyp = special.hyp2f1_11m(m, 1.0 - 1.0 / a)
            alt = (params.gamma1 * (1 + params.gamma2) / ((m - 1) * params.beta1)
                   + params.gamma2 * hyp / ((m - 1) * params.beta2 * a))
            ok &= abs(alt - lo) <= 1e-8 * lo
    yield "lower bound: hypergeometric vs integral form to 1e-8", ok

    # Bracket self-consistency.
    params = SystemParams(m=8, beta1=1.0, beta2=0.1, gamma1=10.0, gamma2=1.0,
                          rho_th=math.sqrt(0.02))
    ratio = analysis.bracket_ratio(params)
    lo, up = analysis.p_tilde_lo(params), analysis.p_upper(params)
    yield "bracket: p_upper/p_tilde_lo - 1 equals the gain/target ratio", (
        abs(up / lo - 1.0 - ratio) <= 4e-16 * (1.0 + ratio)
    )

    # Monte Carlo sandwich and outage agreement within CI.
    ok_sandwich = True
    ok_outage = True
    for m in (8, 16):
        for a in (0.02, 0.1):
            p = SystemParams(m=m, beta1=1.0, beta2=0.1, gamma1=10.0, gamma2=1.0,
                             rho_th=math.sqrt(a))
            res = montecarlo.estimate(p, montecarlo.SimulationConfig(trials=trials, seed=seed))
            lo, up = analysis.p_tilde_lo(p), analysis.p_upper(p)
            ok_sandwich &= (res.mean_p_min + res.ci_half_width >= lo
                            and res.mean_p_min - res.ci_half_width <= up)
            pout = analysis.outage_probability(m, p.rho_th)
            half = z99 * math.sqrt(pout * (1.0 - pout) / trials)
            ok_outage &= abs(res.empirical_outage - pout) <= half
    yield "simulation mean within the bound bracket (99% CI)", ok_sandwich
    yield "empirical outage matches the closed form (99% binomial CI)", ok_outage

    # Determinism of the estimator.
    p = SystemParams(m=8, beta1=1.0, beta2=0.1, gamma1=10.0, gamma2=1.0,
                     rho_th=math.sqrt(0.02))
    cfg = montecarlo.SimulationConfig(trials=min(trials, 100_000), seed=seed)
    yield "estimator determinism for a fixed seed", (
        montecarlo.estimate(p, cfg) == montecarlo.estimate(p, cfg)
    )

    # Optimal split hits both targets with equality.
    rng = make_rng(seed)
    stats = sample_stats(8, rng, 4096)
    sol = core.optimal_split(stats, p)
    weak = np.minimum(sol.sinr_1_s2, sol.sinr_2_s2)
    yield "optimal split meets both SINR targets to 1e-9", bool(
        np.all(np.abs(sol.sinr_1_s1 - p.gamma1) <= 1e-9 * p.gamma1)
        and np.all(np.abs(weak - p.gamma2) <= 1e-9 * p.gamma2)
    )

    # dB round trip.
    ok = all(abs(linear_to_db(db_to_linear(v)) - v) <= 1e-12 for v in (-30.0, -10.0, 0.0, 3.0, 10.0, 30.0))
    yield "dB <-> linear round trip to 1e-12", ok

    # Squeeze inequalities used by the massive-antenna limit argument.
    ok = True
    for m in (8, 64, 512):
        y = np.linspace(1e-6, m - 1e-6, 2000)
        left = (1.0 - (y / m) ** 2) ** m * np.exp(-y) / y
        mid = (1.0 - y / m) ** m / y
        right = np.exp(-y / 2.0) / y
        ok &= bool(np.all(left <= mid * (1 + 1e-12) + 1e-300)
                   and np.all(mid <= right * (1 + 1e-12) + 1e-300))
    yield "squeeze inequalities on the scaled integrand", ok


def cmd_selfcheck(args) -> int:
    failures = 0
    for name, passed in _selfcheck_lines(args.trials, args.seed):
        print(f"[{'ok' if passed else 'FAIL'}] {name}")
        failures += 0 if passed else 1
    if failures:
        print(f"selfcheck: {failures} check(s) failed", file=sys.stderr)
        return EXIT_SELFCHECK
    print("selfcheck: all checks passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbnoma",
        description="Correlation-gated two-user NOMA: power bounds, simulation, tradeoff data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="closed-form bounds and outage for one scenario")
    _add_scenario_args(p)
    _add_output_args(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of the average minimum power")
    _add_scenario_args(p)
    _add_sim_args(p)
    _add_output_args(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("figure", help="regenerate a figure dataset (1, 2, or 3)")
    p.add_argument("id", type=int, choices=(1, 2, 3))
    _add_scenario_args(p)
    _add_sim_args(p)
    p.add_argument("--m-grid", default=None, help="comma-separated antenna counts")
    p.add_argument("--rho-grid", default=None, help="comma-separated rho_th_sq values")
    _add_output_args(p)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("tradeoff", help="limiting power-outage frontier over lambda")
    _add_scenario_args(p)
    p.add_argument("--lambda-grid", default="0.25,0.5,1,2,4",
                   help="comma-separated lambda values, ascending")
    p.add_argument("--finite-m", type=int, default=None,
                   help="also evaluate the finite-antenna values at this m")
    _add_output_args(p)
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("selfcheck", help="run the invariant suite")
    p.add_argument("--trials", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_selfcheck)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (special.QuadratureError, OverflowError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
