"""Per-realization scheme logic: gating, matched-filter SINRs, minimum power.

All functions accept scalar or array-valued ChannelStats and broadcast.
Power is linear throughout.  An unreachable weak user (zero effective gain
with gamma2 > 0) yields an infinite minimum power sentinel rather than an
exception, so simulations at a zero threshold can report the divergence
instead of crashing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelStats, SystemParams


@dataclass(frozen=True)
class GateDecision:
    """Outcome of the correlation gate for one realization (or a batch)."""

    transmit: np.ndarray | bool
    rho_sq: np.ndarray | float
    rho_th_sq: float


@dataclass(frozen=True)
class PowerSolution:
    """Minimum total power, its split, and the SINRs that split achieves."""

    p_min: np.ndarray | float
    p1: np.ndarray | float
    p2: np.ndarray | float
    sinr_1_s1: np.ndarray | float
    sinr_1_s2: np.ndarray | float
    sinr_2_s2: np.ndarray | float


def sic_user(params: SystemParams) -> int:
    """Index of the user that decodes both symbols (performs cancellation).

    Decided by the average gains alone: user 1 by the beta1 >= beta2
    convention, never by the realization.
    """
    return 1


def gate(stats: ChannelStats, params: SystemParams) -> GateDecision:
    """Transmit iff rho_sq >= rho_th^2; boundary equality transmits."""
    th = params.rho_th_sq
    return GateDecision(transmit=stats.rho_sq >= th, rho_sq=stats.rho_sq, rho_th_sq=th)


def _effective_gains(stats: ChannelStats, params: SystemParams):
    # Matched filter along h1: |b^H h1|^2 = g1_sq, |b^H h2|^2 = g2_sq rho_sq.
    w1 = params.beta1 * stats.g1_sq
    w2 = params.beta2 * stats.g2_sq * stats.rho_sq
    return w1, w2


def sinr_mf(stats: ChannelStats, params: SystemParams, p1, p2):
    """SINRs under matched-filter beamforming for the split (p1, p2).

    Returns (sinr_1_s1, sinr_1_s2, sinr_2_s2).  User 1 decodes s2 first and
    cancels it, so its s1 SINR is interference-free; while decoding s2 each
    user sees the s1 component through its own effective channel gain.
    """
    w1, w2 = _effective_gains(stats, params)
    sinr_1_s1 = p1 * w1
    sinr_1_s2 = p2 * w1 / (1.0 + p1 * w1)
    sinr_2_s2 = p2 * w2 / (1.0 + p1 * w2)
    return sinr_1_s1, sinr_1_s2, sinr_2_s2


def p_min(stats: ChannelStats, params: SystemParams):
    """Minimum total power meeting both SINR targets for this realization.

    gamma1 (1+gamma2) / w1 + gamma2 / min(w1, w2) with w1 = beta1 g1_sq and
    w2 = beta2 g2_sq rho_sq.  Infinite when w2 = 0 while gamma2 > 0.
    """
    w1, w2 = _effective_gains(stats, params)
    first = params.gamma1 * (1.0 + params.gamma2) / w1
    if params.gamma2 == 0.0:
        return first + np.zeros_like(w1) if isinstance(w1, np.ndarray) else first
    with np.errstate(divide="ignore"):
        second = params.gamma2 / np.minimum(w1, w2)
    return first + second


def optimal_split(stats: ChannelStats, params: SystemParams) -> PowerSolution:
    """Tight power split at total power p_min.

    p2 takes the smallest share that still meets the weak-symbol target with
    equality at the binding user; the remainder goes to s1 and lands exactly
    on gamma1.  An infinite p_min propagates into the split fields.
    """
    w1, w2 = _effective_gains(stats, params)
    total = p_min(stats, params)
    if params.gamma2 == 0.0:
        p2 = np.zeros_like(total) if isinstance(total, np.ndarray) else 0.0
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            p2 = (params.gamma2 / (1.0 + params.gamma2)) * (1.0 / np.minimum(w1, w2) + total)
    with np.errstate(invalid="ignore"):
        p1 = total - p2
        s11, s12, s22 = sinr_mf(stats, params, p1, p2)
    return PowerSolution(p_min=total, p1=p1, p2=p2,
                         sinr_1_s1=s11, sinr_1_s2=s12, sinr_2_s2=s22)
