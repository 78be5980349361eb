"""Closed-form average-power bounds, outage, and massive-antenna limit laws.

The average minimum power (conditional on transmission) is bracketed by

    lower = T0 + (gamma2/beta2) * S(a, m)
    upper = lower * (1 + min(beta2/beta1, gamma2/gamma1))

with T0 = gamma1 (1+gamma2) / ((m-1) beta1), a = rho_th^2, and S the
gating-normalized threshold integral.  The hypergeometric form of the same
lower bound, T0 + gamma2 F(1,1;m;1-1/a) / ((m-1) beta2 a), is cross-checked
against the integral form on every call in debug runs (stripped under -O);
the integral form is what gets returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import special
from .channel import SystemParams

# The small-threshold formula is advertised as tight below this rho_th^2.
SMALL_THRESHOLD_MAX = 0.1
# Bracket width at or below which the lower bound is the headline estimate.
TIGHT_BRACKET_MAX = 0.2

POWER_DIVERGES = "POWER_DIVERGES"
OUTAGE_SATURATES = "OUTAGE_SATURATES"
BALANCED = "BALANCED"


@dataclass(frozen=True)
class ThresholdSchedule:
    """Threshold shrinking with the antenna count: rho_th^2 = lam / m^tau."""

    tau: float
    lam: float

    def __post_init__(self):
        if self.tau <= 0.0:
            raise ValueError(f"tau must be > 0, got {self.tau}")
        if self.lam <= 0.0:
            raise ValueError(f"lam must be > 0, got {self.lam}")

    def rho_th_sq(self, m: int) -> float:
        value = self.lam / m**self.tau
        if not 0.0 < value < 1.0:
            raise ValueError(
                f"schedule gives rho_th_sq={value} outside (0, 1) at m={m}"
            )
        return value


@dataclass(frozen=True)
class BoundReport:
    """Bounds, small-threshold approximation, and outage for one scenario."""

    p_tilde_lo: float
    p_upper: float
    p_asymptotic: float
    p_out: float
    asymptotic_valid: bool
    tight: bool


@dataclass(frozen=True)
class TradeoffPoint:
    """One point of the tau = 1 limiting power-outage frontier."""

    lam: float
    p_out_limit: float
    p_limit: float


@dataclass(frozen=True)
class LimitLaw:
    """Limiting behavior of (average power, outage) under a schedule."""

    regime: str
    p_out_limit: float
    p_limit: float


def bracket_ratio(params: SystemParams) -> float:
    """Relative width of the bound bracket: min(beta2/beta1, gamma2/gamma1)."""
    return min(params.beta2 / params.beta1, params.gamma2 / params.gamma1)


def _t0(params: SystemParams) -> float:
    return params.gamma1 * (1.0 + params.gamma2) / ((params.m - 1) * params.beta1)


def p_tilde_lo(params: SystemParams) -> float:
    """Closed-form lower bound on the transmit-conditional average power."""
    a = params.rho_th_sq
    if a <= 0.0:
        raise ValueError(
            "rho_th must be positive: at zero threshold the average minimum "
            "power is unbounded"
        )
    value = _t0(params) + (params.gamma2 / params.beta2) * special.threshold_integral_scaled(a, params.m)
    if __debug__:
        hyp = special.hyp2f1_11m(params.m, 1.0 - 1.0 / a)
        alt = _t0(params) + params.gamma2 * hyp / ((params.m - 1) * params.beta2 * a)
        assert abs(alt - value) <= 1e-8 * value, (
            f"hypergeometric and integral forms disagree: {alt} vs {value}"
        )
    return value


def p_upper(params: SystemParams) -> float:
    """Matching upper bound: lower bound times (1 + bracket_ratio)."""
    return p_tilde_lo(params) * (1.0 + bracket_ratio(params))


def p_asymptotic_small_rho(params: SystemParams) -> float:
    """Small-threshold closed form of the average power.

    T0 - (gamma2/beta2) (ln a + psi(m-1) + C) / (1-a)^(m-1); intended for
    rho_th^2 below SMALL_THRESHOLD_MAX, undefined at the endpoints.
    """
    a = params.rho_th_sq
    if not 0.0 < a < 1.0:
        raise ValueError(f"small-threshold form needs rho_th in (0, 1), got {params.rho_th}")
    numer = math.log(a) + special.digamma(params.m - 1) + special.EULER_GAMMA
    scale = math.exp(-(params.m - 1) * math.log1p(-a))
    return _t0(params) - (params.gamma2 / params.beta2) * numer * scale


def outage_probability(m: int, rho_th: float) -> float:
    """P[silent] = 1 - (1 - rho_th^2)^(m-1), cancellation-free for small thresholds."""
    if m < 2 or m != int(m):
        raise ValueError(f"m must be an integer >= 2, got {m}")
    if not 0.0 <= rho_th <= 1.0:
        raise ValueError(f"rho_th must be in [0, 1], got {rho_th}")
    a = rho_th * rho_th
    if a >= 1.0:
        return 1.0
    return -math.expm1((m - 1) * math.log1p(-a))


def bound_report(params: SystemParams) -> BoundReport:
    """All closed forms for one scenario in a single record."""
    lo = p_tilde_lo(params)
    a = params.rho_th_sq
    if a < 1.0:
        asym = p_asymptotic_small_rho(params)
    else:
        asym = math.nan
    return BoundReport(
        p_tilde_lo=lo,
        p_upper=lo * (1.0 + bracket_ratio(params)),
        p_asymptotic=asym,
        p_out=outage_probability(params.m, params.rho_th),
        asymptotic_valid=a <= SMALL_THRESHOLD_MAX,
        tight=bracket_ratio(params) <= TIGHT_BRACKET_MAX,
    )


def limit_classification(schedule: ThresholdSchedule, params: SystemParams) -> LimitLaw:
    """Limits of outage and bound power as m grows under the schedule.

    tau > 1: outage vanishes but the power bound diverges; tau < 1: outage
    saturates at one while the power bound vanishes; tau = 1 balances both
    at 1 - e^-lam and (gamma2/beta2) e^lam E1(lam).  Finite-m numbers should
    always come from p_tilde_lo / outage_probability, never from here.
    """
    if schedule.tau > 1.0:
        return LimitLaw(POWER_DIVERGES, p_out_limit=0.0, p_limit=math.inf)
    if schedule.tau < 1.0:
        return LimitLaw(OUTAGE_SATURATES, p_out_limit=1.0, p_limit=0.0)
    return LimitLaw(
        BALANCED,
        p_out_limit=-math.expm1(-schedule.lam),
        p_limit=(params.gamma2 / params.beta2) * special.exp_integral_e1_scaled(schedule.lam),
    )


def tradeoff_curve(params: SystemParams, lambda_grid) -> list[TradeoffPoint]:
    """Limiting power-outage frontier on a grid of lam values (tau = 1)."""
    grid = [float(v) for v in lambda_grid]
    if any(v <= 0.0 for v in grid):
        raise ValueError("lambda grid values must be > 0")
    if grid != sorted(grid):
        raise ValueError("lambda grid must be sorted ascending")
    scale = params.gamma2 / params.beta2
    return [
        TradeoffPoint(
            lam=lam,
            p_out_limit=-math.expm1(-lam),
            p_limit=scale * special.exp_integral_e1_scaled(lam),
        )
        for lam in grid
    ]
