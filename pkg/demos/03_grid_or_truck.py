# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Grid or truck?
#
# One demand region, one wind region, one transmission line. Wheeling costs
# the same per kWh at any distance; trucking grows with distance and stops at
# one day's drive. Sweeping the distance shows where the planner switches.

# %%
from __future__ import annotations

import matplotlib.pyplot as plt
import numpy as np

from wtaplan.economics import daily_rate, wheeling_cost_per_kg_nh3
from wtaplan.hsc import transport_rate
from wtaplan.planner import solve_configuration, two_region

distances = np.arange(50, 901, 50)
truck_share, surcharge = [], []
for D in distances:
    s = two_region(float(D))
    e = s.economics
    sol = solve_configuration(s)
    r = sol.regions[1]
    truck_share.append(r.A_H / r.ammonia)
    surcharge.append((transport_rate(D, e) + daily_rate(e, "hs")) / float(e.k_hta))
wheel = wheeling_cost_per_kg_nh3(e)

# %%
fig, (a1, a2) = plt.subplots(1, 2, figsize=(9, 3.5))
a1.plot(distances, surcharge, "o-", label="truck + storage")
a1.axhline(wheel, color="k", ls="--", label="wheeling")
a1.set(xlabel="distance, km", ylabel="EUR / kg NH3")
a1.legend()
a2.step(distances, truck_share, where="mid")
a2.axvline(500, color="grey", lw=0.8)
a2.set(xlabel="distance, km", ylabel="share trucked")
fig.tight_layout()
plt.show()

for D, f, c in zip(distances, truck_share, surcharge):
    print(f"{D:4d} km  surcharge {c:.4f}  trucked {f:6.1%}")
