"""What do more base-station antennas buy at a fixed threshold?

Sweeps the antenna count at two fixed squared-correlation thresholds and
tracks the simulated average minimum power against the closed-form lower
bound.  Power falls roughly like 1/(m-1) through the strong-user term
while the weak-user term shrinks more slowly; meanwhile the outage
probability 1 - (1-rho_th^2)^(m-1) quietly climbs with m, which is the
reason the threshold itself should scale down in massive arrays (see
threshold_schedules.py).
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from cbnoma import SimulationConfig, SystemParams, bound_report, estimate, outage_probability

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

TRIALS = 200_000
SEED = 42
M_GRID = list(range(2, 65, 4))

fig, (ax_p, ax_o) = plt.subplots(1, 2, figsize=(11, 4.5))
for a, color in ((0.02, "tab:blue"), (0.005, "tab:green")):
    mc, lo, out = [], [], []
    for m in M_GRID:
        params = SystemParams(m=m, beta1=1.0, beta2=0.1, gamma1=10.0, gamma2=1.0,
                              rho_th=math.sqrt(a))
        rep = bound_report(params)
        res = estimate(params, SimulationConfig(trials=TRIALS, seed=SEED))
        mc.append(res.mean_p_min)
        lo.append(rep.p_tilde_lo)
        out.append(rep.p_out)
        print(f"m={m:3d} rho_th^2={a}  mc={res.mean_p_min:8.3f} "
              f"lo={rep.p_tilde_lo:8.3f}  outage={rep.p_out:.4f}")
    ax_p.plot(M_GRID, mc, "o", color=color, ms=4, label=f"simulated, rho_th^2={a}")
    ax_p.plot(M_GRID, lo, "-", color=color, label=f"lower bound, rho_th^2={a}")
    ax_o.plot(M_GRID, out, "-", color=color, label=f"rho_th^2={a}")

ax_p.set_xlabel("antennas m")
ax_p.set_ylabel("average minimum power (linear)")
ax_p.set_title("Power falls with the array size")
ax_p.legend(fontsize=8)
ax_p.grid(alpha=0.3)
ax_o.set_xlabel("antennas m")
ax_o.set_ylabel("outage probability")
ax_o.set_title("...but a fixed threshold silences more often")
ax_o.legend(fontsize=8)
ax_o.grid(alpha=0.3)
fig.tight_layout()
fig.savefig(OUT / "antenna_scaling.png", dpi=150)
print(f"\nwrote {OUT / 'antenna_scaling.png'}")
