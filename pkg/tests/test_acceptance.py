"""Acceptance suite: one test (or parametrized family) per criterion.

Each check prints a `[criterion N] PASS/FAIL` line; run with `pytest -s`
to see every line.  The Monte Carlo grid uses seed 42 throughout at the
reference gains and targets (0 dB / -10 dB, 10 dB / 0 dB).
"""

import math
import time

import numpy as np
import pytest

import _oracles
from cbnoma import analysis, cli, core, montecarlo, special
from cbnoma.channel import ChannelStats, SystemParams, make_rng, sample_stats
from conftest import BETA2, GAMMA2, reference_params

SEED = 42
TRIALS = 1_000_000
GRID_M = (4, 8, 16)
GRID_RHO_SQ = (0.005, 0.02, 0.1)
E1_AT_1 = 0.21938393439552026  # frozen from the quadrature oracle
BALANCED_LIMIT = (GAMMA2 / BETA2) * math.e * E1_AT_1  # ~5.9635


def report(criterion, ok, detail=""):
    print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    return ok


@pytest.fixture(scope="module")
def mc_grid():
    """Shared 1e6-trial results over the 9-point grid, with wall time."""
    started = time.perf_counter()
    results = {}
    for m in GRID_M:
        for a in GRID_RHO_SQ:
            params = reference_params(m=m, rho_th_sq=a)
            config = montecarlo.SimulationConfig(trials=TRIALS, seed=SEED)
            results[(m, a)] = (params, montecarlo.estimate(params, config))
    return results, time.perf_counter() - started


# --- criterion 1: sandwich bound over the 9-point grid ---

def test_criterion_1_sandwich(mc_grid):
    results, elapsed = mc_grid
    ok = True
    worst = ""
    for (m, a), (params, res) in results.items():
        lo = analysis.p_tilde_lo(params)
        up = 1.1 * lo
        inside = (res.mean_p_min + res.ci_half_width >= lo
                  and res.mean_p_min - res.ci_half_width <= up)
        if not inside:
            ok = False
            worst = f" breach at m={m}, rho_th_sq={a}: mc={res.mean_p_min}, lo={lo}, up={up}"
    ok &= elapsed < 120.0
    assert report(1, ok, f"9-point Monte Carlo sandwich in {elapsed:.1f}s{worst}")


# --- criterion 2: dual-path closed form ---

def test_criterion_2_dual_path():
    ok = True
    worst = 0.0
    for m in (2, 3, 4, 5, 8, 16, 32, 64):
        for a in (1e-4, 1e-3, 0.01, 0.1, 0.3, 1.0):
            params = reference_params(m=m, rho_th_sq=a)
            integral_form = analysis.p_tilde_lo(params)
            t0 = params.gamma1 * (1 + params.gamma2) / ((m - 1) * params.beta1)
            hyp_form = t0 + params.gamma2 * special.hyp2f1_11m(m, 1 - 1 / a) / (
                (m - 1) * params.beta2 * a)
            rel = abs(hyp_form - integral_form) / integral_form
            worst = max(worst, rel)
            ok &= rel <= 1e-8
    oracle_worst = 0.0
    for m in (2, 4, 8, 16, 64):
        for a in (1e-4, 0.01, 0.1, 0.3, 1.0):
            params = reference_params(m=m, rho_th_sq=a)
            lo = analysis.p_tilde_lo(params)
            rel = abs(montecarlo.lower_bound_oracle(params) - lo) / lo
            oracle_worst = max(oracle_worst, rel)
            ok &= rel <= 1e-6
    assert report(2, ok, f"forms agree (worst {worst:.2e}); density quadrature "
                         f"agrees (worst {oracle_worst:.2e})")


# --- criterion 3: small-threshold tightness and log law ---

@pytest.mark.parametrize("m", (8, 16))
@pytest.mark.parametrize("a", (0.005, 0.01))
def test_criterion_3_corollary_tightness(m, a):
    params = reference_params(m=m, rho_th_sq=a)
    lo = analysis.p_tilde_lo(params)
    gap = abs(analysis.p_asymptotic_small_rho(params) - lo) / lo
    assert report(3, gap <= 0.02, f"asymptotic gap {gap:.4%} at m={m}, rho_th_sq={a}"), (
        f"relative gap {gap:.4%} exceeds 2% at m={m}, rho_th_sq={a}"
    )


def test_criterion_3_log_law_slope():
    grid = np.logspace(-4, -2, 12)
    values = [analysis.p_tilde_lo(reference_params(m=8, rho_th_sq=float(a)))
              for a in grid]
    slope = np.polyfit(np.log(1.0 / grid), values, 1)[0]
    mid = math.sqrt(1e-4 * 1e-2)
    predicted = (GAMMA2 / BETA2) / (1 - mid) ** 7
    rel = abs(slope - predicted) / predicted
    assert report(3, rel <= 0.05, f"log-law slope {slope:.4f} vs {predicted:.4f} ({rel:.2%})")


# --- criterion 4: outage exactness ---

def test_criterion_4_outage(mc_grid):
    results, _ = mc_grid
    z99 = 2.5758293035489004
    ok = True
    worst = 0.0
    for (m, a), (params, res) in results.items():
        exact = analysis.outage_probability(m, params.rho_th)
        half = z99 * math.sqrt(exact * (1 - exact) / TRIALS)
        dev = abs(res.empirical_outage - exact)
        worst = max(worst, dev / half)
        ok &= dev <= half
    assert report(4, ok, f"9-point binomial check, worst deviation {worst:.2f} CI")


# --- criterion 5: massive-antenna limits ---

def test_criterion_5_balanced_limit_value():
    params = reference_params(m=4096, rho_th_sq=1.0 / 4096)
    value = analysis.p_tilde_lo(params)
    rel = abs(value - BALANCED_LIMIT) / BALANCED_LIMIT
    assert report(5, rel <= 0.02, f"tau=1 bound at m=4096: {value:.5f} vs {BALANCED_LIMIT:.5f}")


def test_criterion_5_balanced_outage_value():
    pout = analysis.outage_probability(4096, math.sqrt(1.0 / 4096))
    target = 1 - math.exp(-1)
    ok = abs(pout - target) <= 1e-3
    assert report(5, ok, f"tau=1 outage at m=4096: {pout:.6f} vs {target:.6f}")


def test_criterion_5_tau2_strictly_increasing():
    values = [analysis.p_tilde_lo(reference_params(m=m, rho_th_sq=1.0 / m**2))
              for m in (64, 128, 256, 512, 1024)]
    ok = all(x < y for x, y in zip(values, values[1:]))
    assert report(5, ok, f"tau=2 series over m=64..1024: {[round(v, 2) for v in values]}")


def test_criterion_5_tau_half_level():
    m = 1024
    a = 1.0 / math.sqrt(m)
    pout = analysis.outage_probability(m, math.sqrt(a))
    value = analysis.p_tilde_lo(reference_params(m=m, rho_th_sq=a))
    ok = pout > 0.99 and value < 0.05
    assert report(5, ok, f"tau=0.5 at m=1024: bound {value:.4f} (target < 0.05), "
                         f"outage {pout:.6f} (target > 0.99)"), (
        f"tau=0.5 bound at m=1024 is {value:.4f}, not below 0.05"
    )


# --- criterion 6: optimal split tightness ---

def test_criterion_6_split_equalities():
    params = reference_params()
    stats = sample_stats(params.m, make_rng(SEED), size=20_000)
    keep = stats.rho_sq >= params.rho_th_sq
    stats = ChannelStats(stats.g1_sq[keep][:10_000], stats.g2_sq[keep][:10_000],
                         stats.rho_sq[keep][:10_000])
    assert stats.rho_sq.size == 10_000
    sol = core.optimal_split(stats, params)
    weak = np.minimum(sol.sinr_1_s2, sol.sinr_2_s2)
    ok = bool(
        np.all(np.abs(sol.sinr_1_s1 - params.gamma1) <= 1e-9 * params.gamma1)
        and np.all(np.abs(weak - params.gamma2) <= 1e-9 * params.gamma2)
    )
    assert report(6, ok, "both targets met with equality to 1e-9 over 1e4 realizations")


def test_criterion_6_reduced_power_infeasible():
    params = reference_params()
    stats = sample_stats(params.m, make_rng(SEED + 1), size=25_000)
    keep = stats.rho_sq >= params.rho_th_sq
    g1 = stats.g1_sq[keep][:10_000]
    g2 = stats.g2_sq[keep][:10_000]
    rho = stats.rho_sq[keep][:10_000]
    assert g1.size == 10_000
    grid = np.linspace(0.0, 1.0, 10_000)
    infeasible = 0
    for i in range(g1.size):
        one = ChannelStats(g1[i], g2[i], rho[i])
        total = 0.99 * core.p_min(one, params)
        p2 = grid * total
        s11, s12, s22 = core.sinr_mf(one, params, total - p2, p2)
        feasible = (s11 >= params.gamma1) & (np.minimum(s12, s22) >= params.gamma2)
        infeasible += 0 if feasible.any() else 1
    frac = infeasible / g1.size
    assert report(6, frac >= 0.999, f"1%-reduced power infeasible on the split grid "
                                    f"for {frac:.4%} of realizations")


# --- criterion 7: divergence witness at zero threshold ---

def test_criterion_7_running_mean_witness():
    zero = SystemParams(m=8, beta1=1.0, beta2=BETA2, gamma1=10.0, gamma2=GAMMA2,
                        rho_th=0.0)
    runs = [montecarlo.estimate(zero, montecarlo.SimulationConfig(trials=n, seed=SEED))
            for n in (10_000, 100_000, 1_000_000)]
    means = [r.mean_p_min for r in runs]
    halves = [r.ci_half_width for r in runs]
    ok = (means[1] - means[0] > 3 * halves[1]
          and means[2] - means[1] > 3 * halves[2])
    assert report(7, ok, f"running means {[round(m, 1) for m in means]}, "
                         f"CI halves {[round(h, 1) for h in halves]}"), (
        "running mean did not grow by 3 CI half-widths each decade"
    )


def test_criterion_7_divergence_flag():
    zero = SystemParams(m=8, beta1=1.0, beta2=BETA2, gamma1=10.0, gamma2=GAMMA2,
                        rho_th=0.0)
    res = montecarlo.estimate(zero, montecarlo.SimulationConfig(trials=TRIALS, seed=SEED))
    assert report(7, res.diverged, "heavy-tail divergence flag set at zero threshold")


# --- criterion 8: squeeze inequalities ---

def test_criterion_8_squeeze():
    ok = True
    for m in (8, 64, 512):
        y = np.linspace(1e-9, m * (1 - 1e-12), 3334)
        left = (1 - (y / m) ** 2) ** m * np.exp(-y) / y
        mid = (1 - y / m) ** m / y
        right = np.exp(-y / 2) / y
        ok &= bool(np.all(left <= mid * (1 + 1e-12) + 1e-300)
                   and np.all(mid <= right * (1 + 1e-12) + 1e-300))
    assert report(8, ok, "pointwise on ~1e4 (y, m) grid points")


# --- criterion 9: byte-identical figure datasets ---

def test_criterion_9_reproducibility(tmp_path, monkeypatch):
    args = ["figure", "1", "--trials", "50000", "--seed", str(SEED)]
    paths = []
    for name, threads in (("a", "1"), ("b", "1"), ("c", "4")):
        monkeypatch.setenv(montecarlo.THREADS_ENV_VAR, threads)
        out = tmp_path / f"{name}.csv"
        assert cli.main([*args, "--out", str(out)]) == 0
        paths.append(out.read_bytes())
    ok = paths[0] == paths[1] == paths[2]
    assert report(9, ok, "figure 1 CSV identical across reruns and 1 vs 4 threads")
