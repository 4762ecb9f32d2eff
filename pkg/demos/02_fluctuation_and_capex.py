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
# # Wind fluctuation and equipment prices at Alashan
#
# Region 12 is the only demand region with wind of its own. Its Local plan
# depends on two things outside the optimiser's control: how gusty the wind
# is, and what turbines and electrolyzers cost.

# %%
from __future__ import annotations

import matplotlib.pyplot as plt
import numpy as np

from wtaplan.data_io import load_bundled
from wtaplan.planner import capex_sensitivity, local_sweep, solve_configuration
from wtaplan.wind import HOURS, WindProfile, profile_stats, synth_profile

s = load_bundled()
energies = np.linspace(20, 460, 23)

# %% [markdown]
# ## Same energy, different weather
#
# A flat profile needs no buffer tank and the smallest electrolyzer. More
# fluctuation raises both.

# %%
profiles = {"flat": WindProfile(12, np.full(HOURS, 1 / HOURS))}
for x in (0.3, 0.6, 0.9):
    profiles[f"intensity {x}"] = synth_profile(x, seed=12, region=12)

fig, (a1, a2) = plt.subplots(1, 2, figsize=(9, 3.5))
for name, w in profiles.items():
    pts = local_sweep(s, 12, energies, w)
    a1.plot(energies, [p.m_BUF / 1000 for p in pts], label=f"{name} (cv {profile_stats(w).cv:.2f})")
    a2.plot(energies, [p.lcoa for p in pts])
a1.set(xlabel="used wind energy, MWh/d", ylabel="buffer tank, t")
a2.set(xlabel="used wind energy, MWh/d", ylabel="Local LCOA, EUR/kg")
a1.legend(fontsize=7)
fig.tight_layout()
plt.show()

# %% [markdown]
# ## Cheaper equipment
#
# Re-price the baseline plan over a grid of turbine and electrolyzer cost
# multipliers. At 70% of today's prices the Local LCOA meets the coal route.

# %%
sol = solve_configuration(s)
scales = np.linspace(0.5, 1.0, 6)
grid = capex_sensitivity(s, scales, scales, region=12, solution=sol)
Z = np.array([p.lcoa for p in grid]).reshape(len(scales), len(scales))
fig, ax = plt.subplots(figsize=(5, 4))
cs = ax.contourf(scales, scales, Z.T, levels=12)
ax.contour(scales, scales, Z.T, levels=[s.economics.cta_lcoa], colors="w")
ax.set(xlabel="turbine cost multiplier", ylabel="electrolyzer cost multiplier")
fig.colorbar(cs, label="EUR / kg NH3")
plt.show()
print(f"at (0.7, 0.7): {capex_sensitivity(s, [0.7], [0.7], solution=sol)[0].lcoa:.4f} EUR/kg")
