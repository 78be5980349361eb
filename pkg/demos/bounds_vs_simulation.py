"""How tight are the closed-form power bounds?

Sweeps the squared correlation threshold at 8 and 16 antennas with the
reference link budget (strong user 0 dB / weak user -10 dB, targets
10 dB / 0 dB) and puts the Monte Carlo average of the per-realization
minimum power next to the closed-form bracket and the small-threshold
approximation.  The simulated curve should hug the lower bound, the
upper bound sits 10% above it (min(beta2/beta1, gamma2/gamma1) = 0.1),
and the log-linear growth toward small thresholds should be obvious.
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from cbnoma import SimulationConfig, SystemParams, bound_report, estimate

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

TRIALS = 200_000
SEED = 42

rho_sq_grid = np.logspace(math.log10(1e-3), math.log10(0.5), 15)

fig, ax = plt.subplots(figsize=(7, 5))
for m, color in ((8, "tab:blue"), (16, "tab:orange")):
    mc, lo, up, asym = [], [], [], []
    for a in rho_sq_grid:
        params = SystemParams(m=m, beta1=1.0, beta2=0.1, gamma1=10.0, gamma2=1.0,
                              rho_th=math.sqrt(a))
        rep = bound_report(params)
        res = estimate(params, SimulationConfig(trials=TRIALS, seed=SEED))
        mc.append(res.mean_p_min)
        lo.append(rep.p_tilde_lo)
        up.append(rep.p_upper)
        asym.append(rep.p_asymptotic)
        print(f"m={m:2d} rho_th^2={a:8.5f}  mc={res.mean_p_min:8.3f} "
              f"lo={rep.p_tilde_lo:8.3f} up={rep.p_upper:8.3f} "
              f"asym={rep.p_asymptotic:8.3f} outage={rep.p_out:.4f}")
    ax.semilogx(rho_sq_grid, mc, "o", color=color, label=f"simulated, m={m}")
    ax.semilogx(rho_sq_grid, lo, "-", color=color, label=f"lower bound, m={m}")
    ax.semilogx(rho_sq_grid, up, "--", color=color, alpha=0.6, label=f"upper bound, m={m}")
    ax.semilogx(rho_sq_grid, asym, ":", color=color, alpha=0.8,
                label=f"small-threshold form, m={m}")

ax.set_xlabel(r"correlation threshold $\rho_{th}^2$")
ax.set_ylabel("average minimum transmit power (linear)")
ax.set_title("Average minimum power vs correlation threshold")
ax.legend(fontsize=8)
ax.grid(True, which="both", alpha=0.3)
fig.tight_layout()
fig.savefig(OUT / "bounds_vs_simulation.png", dpi=150)
print(f"\nwrote {OUT / 'bounds_vs_simulation.png'}")
