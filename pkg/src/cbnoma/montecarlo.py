"""Monte Carlo estimation of the average minimum transmit power.

Trials run in fixed 65,536-trial chunks.  Each chunk draws its randomness
from a substream derived solely from (seed, chunk index) and always
materializes the full chunk, taking a prefix when the requested trial count
ends mid-chunk.  Per-chunk sums are reduced in chunk order, so results are
byte-identical for a given (seed, trials, path) no matter how many worker
threads run the chunks, and a shorter run is an exact prefix of a longer
one with the same seed.

The reported mean is conditional on transmission: silent trials spend no
power and are summarized by the empirical outage fraction.  At a zero
threshold the mean does not converge; a heavy-tail detector flags this by
comparing sample-variance growth across trial-count decades (a CLT interval
is not trustworthy there).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import analysis, core
from .channel import SystemParams, chunk_rng, make_rng, sample_stats, sample_vectors, stats_from_vectors
from .special import QuadratureError

CHUNK_TRIALS = 65536

VECTOR_EXACT = "vector"
DISTRIBUTIONAL = "dist"

_Z_CRIT = {0.95: 1.959963984540054, 0.99: 2.5758293035489004}

# Heavy-tail detector: flag divergence when the sample variance grows by more
# than this factor from the first trial-count decade checkpoint to the last.
_VARIANCE_GROWTH_FACTOR = 3.0

THREADS_ENV_VAR = "NOMA_SIM_THREADS"


@dataclass(frozen=True)
class SimulationConfig:
    trials: int
    seed: int
    path: str = DISTRIBUTIONAL
    confidence: float = 0.99

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.path not in (VECTOR_EXACT, DISTRIBUTIONAL):
            raise ValueError(f"path must be '{VECTOR_EXACT}' or '{DISTRIBUTIONAL}', got {self.path!r}")
        if self.confidence not in _Z_CRIT:
            raise ValueError(f"confidence must be one of {sorted(_Z_CRIT)}, got {self.confidence}")


@dataclass(frozen=True)
class SimulationResult:
    mean_p_min: float
    ci_half_width: float
    empirical_outage: float
    n_transmit: int
    n_silent: int
    diverged: bool


@dataclass(frozen=True)
class T1BoundReport:
    """Estimated cross-region mass versus its analytic cap."""

    t1_estimate: float
    ci_half_width: float
    bound: float
    passed: bool


def _chunk_pmin(params, config, index):
    """Full chunk of per-trial minimum powers and transmit flags."""
    rng = chunk_rng(config.seed, index)
    if config.path == DISTRIBUTIONAL:
        stats = sample_stats(params.m, rng, CHUNK_TRIALS)
    else:
        stats = stats_from_vectors(sample_vectors(params.m, rng, CHUNK_TRIALS))
    pm = core.p_min(stats, params)
    transmit = stats.rho_sq >= params.rho_th_sq
    return pm, transmit


def _summarize_chunk(params, config, index, take, cut_offsets):
    """Reduce one chunk to (n, sum, sumsq) plus partials at global checkpoints."""
    pm, transmit = _chunk_pmin(params, config, index)
    start = index * CHUNK_TRIALS

    def collect(upto):
        mask = transmit[:upto]
        x = pm[:upto][mask]
        return int(mask.sum()), float(x.sum()), float((x * x).sum())

    partials = {off: collect(off - start) for off in cut_offsets}
    return collect(take), partials


def _moments(n, s, s2):
    if n < 1:
        return np.nan, np.nan
    mean = s / n
    if n < 2:
        return mean, np.nan
    var = max((s2 - n * mean * mean) / (n - 1), 0.0)
    return mean, var


def estimate(params: SystemParams, config: SimulationConfig) -> SimulationResult:
    """Estimate the transmit-conditional mean of the per-trial minimum power.

    Worker-thread count comes from the NOMA_SIM_THREADS environment variable
    and never affects the result.  A zero threshold is allowed but flagged
    via `diverged` when the heavy-tail detector fires.
    """
    trials = config.trials
    n_chunks = -(-trials // CHUNK_TRIALS)
    candidates = {trials // 100, trials // 10, trials}
    checkpoints = sorted(c for c in candidates if 2 <= c <= trials)

    jobs = []
    for index in range(n_chunks):
        start = index * CHUNK_TRIALS
        take = min(CHUNK_TRIALS, trials - start)
        cuts = [c for c in checkpoints if start < c < start + take]
        jobs.append((index, take, cuts))

    workers = max(1, int(os.environ.get(THREADS_ENV_VAR, "1")))
    if workers > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            summaries = list(pool.map(
                lambda job: _summarize_chunk(params, config, job[0], job[1], job[2]), jobs
            ))
    else:
        summaries = [_summarize_chunk(params, config, *job) for job in jobs]

    # Fixed-order reduction over chunks; checkpoint totals are the running
    # prefix plus the owning chunk's partial at that offset.
    tot_n = 0
    tot_s = 0.0
    tot_s2 = 0.0
    checkpoint_stats = {}
    for (index, take, cuts), ((n, s, s2), partials) in zip(jobs, summaries):
        for off in cuts:
            pn, ps, ps2 = partials[off]
            checkpoint_stats[off] = (tot_n + pn, tot_s + ps, tot_s2 + ps2)
        tot_n += n
        tot_s += s
        tot_s2 += s2
        end = index * CHUNK_TRIALS + take
        if end in checkpoints:
            checkpoint_stats[end] = (tot_n, tot_s, tot_s2)

    mean, var = _moments(tot_n, tot_s, tot_s2)
    z = _Z_CRIT[config.confidence]
    ci = z * np.sqrt(var / tot_n) if tot_n >= 2 else np.nan

    diverged = False
    if params.rho_th == 0.0 and len(checkpoints) >= 2:
        _, var_first = _moments(*checkpoint_stats[checkpoints[0]])
        _, var_last = _moments(*checkpoint_stats[checkpoints[-1]])
        if np.isfinite(var_first) and np.isfinite(var_last):
            diverged = var_last > _VARIANCE_GROWTH_FACTOR * var_first

    return SimulationResult(
        mean_p_min=float(mean),
        ci_half_width=float(ci),
        empirical_outage=(trials - tot_n) / trials,
        n_transmit=tot_n,
        n_silent=trials - tot_n,
        diverged=diverged,
    )


def _quad_pieces(integrand, cuts):
    total = 0.0
    err = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        piece, piece_err, info, *tail = quad(
            integrand, lo, hi, epsabs=0.0, epsrel=1e-11, limit=200, full_output=1
        )
        if tail:
            raise QuadratureError(f"quadrature failed on [{lo}, {hi}]: {tail[0]}")
        total += piece
        err += piece_err
    if total > 0.0 and err > 1e-9 * total:
        raise QuadratureError(f"quadrature error {err:.3e} too large")
    return total


def lower_bound_oracle(params: SystemParams) -> float:
    """Closed-form lower bound recomputed by direct density quadrature.

    The three statistics are mutually independent, so the expectation of the
    pointwise lower bound factors into 1-D integrals against the Gamma(m, 1)
    density and the gate-truncated Beta(1, m-1) density.  Entirely separate
    route from the series expressions in the analysis module.
    """
    a = params.rho_th_sq
    if a <= 0.0:
        raise ValueError("rho_th must be positive for a finite lower bound")
    m = params.m
    log_gamma_m = math.lgamma(m)

    def inv_gamma_density(x):
        # (1/x) * x^(m-1) e^-x / Gamma(m)
        if x <= 0.0:
            return 0.0
        return math.exp((m - 2) * math.log(x) - x - log_gamma_m)

    mean_inv_gain = _quad_pieces(inv_gamma_density, [0.0, float(m), 10.0 * m + 50.0]) + quad(
        inv_gamma_density, 10.0 * m + 50.0, np.inf, epsabs=1e-300, epsrel=1e-11
    )[0]

    if a == 1.0:
        mean_inv_rho = 1.0
    else:
        def inv_beta_density(z):
            return (m - 1) * (1.0 - z) ** (m - 2) / z

        cuts = [a]
        while cuts[-1] < 1.0:
            cuts.append(min(2.0 * cuts[-1], 1.0))
        tail_mass = math.exp((m - 1) * math.log1p(-a))
        mean_inv_rho = _quad_pieces(inv_beta_density, cuts) / tail_mass

    t0 = params.gamma1 * (1.0 + params.gamma2) / params.beta1 * mean_inv_gain
    t = params.gamma2 / params.beta2 * mean_inv_gain * mean_inv_rho
    return t0 + t


def t1_bound_check(params: SystemParams, trials: int, seed: int = 0) -> T1BoundReport:
    """Monte Carlo estimate of the strong-user-limited mass and its cap.

    Over transmit-gated realizations, averages gamma2/(beta1 g1_sq) on the
    region where the strong user's effective gain is the smaller one, and
    checks it against min(beta2/beta1, gamma2/gamma1) times the closed-form
    lower bound.
    """
    if params.rho_th <= 0.0:
        raise ValueError("rho_th must be positive")
    rng = make_rng(seed)
    stats = sample_stats(params.m, rng, trials)
    keep = stats.rho_sq >= params.rho_th_sq
    g1 = stats.g1_sq[keep]
    w1 = params.beta1 * g1
    w2 = params.beta2 * stats.g2_sq[keep] * stats.rho_sq[keep]
    contrib = np.where(w1 < w2, params.gamma2 / w1, 0.0)
    n = contrib.size
    est = float(contrib.mean())
    ci = float(_Z_CRIT[0.99] * contrib.std(ddof=1) / np.sqrt(n))
    bound = analysis.bracket_ratio(params) * analysis.p_tilde_lo(params)
    return T1BoundReport(t1_estimate=est, ci_half_width=ci, bound=bound,
                         passed=est <= bound + ci)
