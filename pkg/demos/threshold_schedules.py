"""Shrinking the threshold with the array: the power-outage tradeoff.

With rho_th^2 = lam / m^tau the scheme behaves in three distinct ways as
m grows: tau > 1 drives outage to zero but lets the power bound diverge,
tau < 1 sends power to zero while outage saturates at one, and tau = 1
balances both at finite limits (1 - e^-lam for outage, and
(gamma2/beta2) e^lam E1(lam) for power).  The first panel shows the three
regimes at lam = 1; the second sweeps lam along the tau = 1 frontier,
which is the dial a designer actually gets to turn.
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from cbnoma import (
    SystemParams,
    ThresholdSchedule,
    limit_classification,
    outage_probability,
    p_tilde_lo,
    tradeoff_curve,
)

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

params_ref = SystemParams(m=8, beta1=1.0, beta2=0.1, gamma1=10.0, gamma2=1.0, rho_th=0.0)
M_GRID = [4 * 2**k for k in range(9)]  # 4 .. 1024

fig, (ax_m, ax_t) = plt.subplots(1, 2, figsize=(11, 4.5))

for tau, color in ((0.5, "tab:green"), (1.0, "tab:blue"), (2.0, "tab:red")):
    schedule = ThresholdSchedule(tau=tau, lam=1.0)
    law = limit_classification(schedule, params_ref)
    values = []
    for m in M_GRID:
        a = schedule.rho_th_sq(m)
        p = SystemParams(m=m, beta1=1.0, beta2=0.1, gamma1=10.0, gamma2=1.0,
                         rho_th=math.sqrt(a))
        values.append(p_tilde_lo(p))
    print(f"tau={tau}: regime={law.regime}, power limit={law.p_limit:.4f}, "
          f"outage limit={law.p_out_limit:.4f}")
    ax_m.loglog(M_GRID, values, "-o", ms=4, color=color, label=f"tau={tau}")
    if math.isfinite(law.p_limit) and law.p_limit > 0:
        ax_m.axhline(law.p_limit, color=color, ls=":", alpha=0.6)

ax_m.set_xlabel("antennas m")
ax_m.set_ylabel("power lower bound (linear)")
ax_m.set_title(r"$\rho_{th}^2 = 1/m^\tau$: three regimes")
ax_m.legend()
ax_m.grid(True, which="both", alpha=0.3)

lams = [0.1 * 1.3**k for k in range(20)]
points = tradeoff_curve(params_ref, lams)
ax_t.plot([pt.p_out_limit for pt in points], [pt.p_limit for pt in points], "-o", ms=4)
for pt in points[::4]:
    ax_t.annotate(f"lam={pt.lam:.2f}", (pt.p_out_limit, pt.p_limit),
                  textcoords="offset points", xytext=(5, 5), fontsize=7)
ax_t.set_xlabel("limiting outage probability")
ax_t.set_ylabel("limiting average power (linear)")
ax_t.set_title("tau = 1 frontier: pay outage, save power")
ax_t.grid(alpha=0.3)

fig.tight_layout()
fig.savefig(OUT / "threshold_schedules.png", dpi=150)
print(f"\nwrote {OUT / 'threshold_schedules.png'}")

# Finite-m sanity: the tau = 1 curve at m = 4096 is already within 2%.
p4096 = SystemParams(m=4096, beta1=1.0, beta2=0.1, gamma1=10.0, gamma2=1.0,
                     rho_th=math.sqrt(1.0 / 4096))
law = limit_classification(ThresholdSchedule(tau=1.0, lam=1.0), params_ref)
print(f"m=4096 check: bound={p_tilde_lo(p4096):.4f} vs limit={law.p_limit:.4f}, "
      f"outage={outage_probability(4096, p4096.rho_th):.5f} vs {law.p_out_limit:.5f}")
