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
# # Planning the bundled twelve-region scenario
#
# Load the shipped Inner Mongolia data, plan it at least daily cost and look
# at where the money goes. The whole solve takes a few seconds.

# %%
from __future__ import annotations

import matplotlib.pyplot as plt
import numpy as np

from wtaplan.data_io import load_bundled
from wtaplan.planner import LAYERS, decompose_costs, solve_configuration
from wtaplan.planner.output import table_I_rows

s = load_bundled()
sol = solve_configuration(s)
print(f"objective {sol.objective:,.0f} EUR/d, mean LCOA {sol.mean_lcoa:.4f} EUR/kg")
print(f"{sol.diagnostics.slp_iterations} LP solves, {sol.diagnostics.cuts} tangent cuts, "
      f"checks ok: {sol.diagnostics.checks.ok}")

# %% [markdown]
# ## Facilities
#
# Only western regions build anything: the eastern grid operator is separate
# and every eastern region is more than a day's drive from demand.

# %%
print(f"{'region':>6} {'P_RE MW':>9} {'P_EL MW':>9} {'BUF t':>7} {'HS t':>8}")
for rid, p_re, p_el, p_el_e, buf, hs in table_I_rows(sol):
    if p_re or p_el or p_el_e or buf or hs:
        print(f"{rid:>6} {p_re:9.1f} {p_el + p_el_e:9.1f} {buf:7.2f} {hs:8.1f}")

# %% [markdown]
# ## How each demand region is served

# %%
for j in (1, 6, 12):
    r = sol.regions[j]
    total = r.ammonia
    print(f"region {j:>2}: local {r.A_L / total:6.1%}  grid {r.A_E / total:6.1%}  truck {r.A_H / total:6.1%}")

# %% [markdown]
# ## Cost stacks
#
# Each bar is one (region, mode) pair; layer heights are EUR per kg of ammonia.

# %%
rep = decompose_costs(sol, s)
labels = [f"{j} {mode}" for (j, mode) in rep.stacks]
heights = np.array([[st.per_kg().get(k, 0.0) for k in LAYERS] for st in rep.stacks.values()])
fig, ax = plt.subplots(figsize=(7, 4))
bottom = np.zeros(len(labels))
for k, layer in enumerate(LAYERS):
    ax.bar(labels, heights[:, k], bottom=bottom, label=layer)
    bottom += heights[:, k]
ax.axhline(s.economics.cta_lcoa, color="k", ls="--", lw=1, label="coal route")
ax.set_ylabel("EUR / kg NH3")
ax.legend(fontsize=7, ncol=3)
fig.tight_layout()
plt.show()
