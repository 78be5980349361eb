"""Correlation-gated two-user NOMA downlink analysis and simulation.

The base station serves two single-antenna users on one resource block with
matched-filter precoding along the stronger user's channel, and transmits
only when the channel correlation coefficient clears a threshold.  This
package computes the per-realization minimum transmit power meeting both
SINR targets, estimates its average by Monte Carlo, evaluates the
closed forms that bracket it, and produces the power-outage tradeoff data.
"""

from .analysis import (
    BALANCED,
    OUTAGE_SATURATES,
    POWER_DIVERGES,
    BoundReport,
    LimitLaw,
    ThresholdSchedule,
    TradeoffPoint,
    bound_report,
    bracket_ratio,
    limit_classification,
    outage_probability,
    p_asymptotic_small_rho,
    p_tilde_lo,
    p_upper,
    tradeoff_curve,
)
from .channel import (
    ChannelStats,
    ChannelVectors,
    SystemParams,
    chunk_rng,
    make_rng,
    sample_stats,
    sample_vectors,
    stats_from_vectors,
)
from .core import GateDecision, PowerSolution, gate, optimal_split, p_min, sic_user, sinr_mf
from .montecarlo import (
    DISTRIBUTIONAL,
    VECTOR_EXACT,
    SimulationConfig,
    SimulationResult,
    T1BoundReport,
    estimate,
    lower_bound_oracle,
    t1_bound_check,
)
from .special import (
    EULER_GAMMA,
    QuadratureError,
    digamma,
    exp_integral_e1,
    exp_integral_e1_scaled,
    hyp2f1_11m,
    threshold_integral_quad,
    threshold_integral_scaled,
    threshold_integral_sum,
)

__version__ = "0.1.0"
