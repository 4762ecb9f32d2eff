"""Independent verification of a PlanningSolution.

Works from the reported physical quantities and the scenario alone. The
grid and truck-route models are rebuilt here, and none of the LP rows are
consulted, so a modelling slip in the builder shows up as a failed closure.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..data_io import Scenario
from ..grid import GridModel
from ..hsc import HscModel
from ..wind import TAU

T_TO_KG = 1000.0


@dataclass
class CheckReport:
    tol: float
    residuals: dict[str, float] = field(default_factory=dict)

    def record(self, name: str, value: float) -> None:
        self.residuals[name] = max(self.residuals.get(name, 0.0), float(value))

    @property
    def worst(self) -> tuple[str, float]:
        if not self.residuals:
            return ("", 0.0)
        name = max(self.residuals, key=self.residuals.get)
        return name, self.residuals[name]

    @property
    def ok(self) -> bool:
        return self.worst[1] <= self.tol

    def failures(self) -> dict[str, float]:
        return {k: v for k, v in self.residuals.items() if v > self.tol}

    def __str__(self) -> str:
        name, v = self.worst
        status = "ok" if self.ok else "FAILED"
        return f"constraint check {status}: worst {name} = {v:.2e} (tol {self.tol:.0e})"


def _rel(diff: float, scale: float) -> float:
    return abs(diff) / max(1.0, abs(scale))


def check_solution(sol, s: Scenario, tol: float = 1e-6) -> CheckReport:
    """Relative residuals of every closure identity and constraint family."""
    rep = CheckReport(tol)
    econ = s.economics
    eta_wta, eta_wth, k_hta = float(econ.eta_wta), float(econ.eta_wth), float(econ.k_hta)
    hm = HscModel.from_scenario(s)
    gm = GridModel(tuple(s.ids), tuple(s.grid))
    R = sol.regions

    # mode sum and energy-mass closure at every demand region
    for r in s.regions:
        A = r.ammonia_kg
        rr = R[r.id]
        rep.record("mode_sum", _rel(rr.A_L + rr.A_E + rr.A_H - A, A))
        h_in = sum(h for (i, j), h in sol.hydrogen.items() if j == r.id)
        made = eta_wta * (rr.E_L + rr.E_ED) * T_TO_KG + k_hta * h_in
        rep.record("energy_mass_closure", _rel(made - A, A))
        rep.record("local_mode", _rel(eta_wta * rr.E_L * T_TO_KG - rr.A_L, A))
        rep.record("en_mode", _rel(eta_wta * rr.E_ED * T_TO_KG - rr.A_E, A))
        rep.record("hsc_mode", _rel(k_hta * h_in - rr.A_H, A))
        if A == 0:
            rep.record("no_production_without_demand", rr.A_L + rr.A_E + rr.A_H)

    # hydrogen closure at sources and storage sizing
    total_h = sum(sol.hydrogen.values())
    for rid, rr in R.items():
        out = sum(h for (i, j), h in sol.hydrogen.items() if i == rid)
        rep.record("hydrogen_closure", _rel(eta_wth * rr.E_HS * T_TO_KG - out, max(out, rr.E_HS)))
        rep.record("storage_sizing", _rel(rr.m_HS - out, out))
    rep.record("storage_total", _rel(sum(rr.m_HS for rr in R.values()) - total_h, total_h))

    # distance rule: hydrogen only on paths within the daily truck range
    for (i, j), h in sol.hydrogen.items():
        if h > 0 and hm.distance(i, j) > s.options.dmax_km:
            rep.record("distance_rule", np.inf)
        rep.record("nonnegative_flows", max(-h, 0.0))
    rep.record("distance_rule", 0.0)

    # wind: curve, bound, hourly decomposition and source electrolyzers
    for r in s.regions:
        rr = R[r.id]
        if not r.has_wind or r.id not in s.profiles:
            rep.record("no_wind_capacity", abs(rr.P_RE) + abs(rr.E))
            continue
        p = s.profiles[r.id].p
        curve = r.curve
        rep.record("potential_curve", max(rr.E - (curve.a * rr.P_RE ** 2 + curve.b * rr.P_RE), 0.0)
                   / max(1.0, rr.E))
        rep.record("capacity_bound", max(rr.P_RE - r.p_re_max, -rr.P_RE, 0.0) / max(1.0, r.p_re_max))
        hourly = rr.E * p
        p_es = np.zeros_like(p)
        for (i, j), h in sol.en_hourly.items():
            if i == r.id:
                p_es = p_es + h
        p_hs = hourly - rr.P_L - p_es
        rep.record("hourly_decomposition", max(-p_hs.min(), 0.0) / max(1.0, hourly.max()))
        rep.record("hourly_decomposition", _rel(p_hs.sum() * TAU - rr.E_HS, rr.E))
        rep.record("daily_aggregation", _rel(hourly.sum() * TAU - rr.E, rr.E))
        need = (hourly - p_es).max(initial=0.0)
        rep.record("electrolyzer_source", max(need - rr.P_EL_LH, 0.0) / max(1.0, need))

    for j, rr in R.items():
        imports = [h for (i, jj), h in sol.en_hourly.items() if jj == j]
        if imports:
            need = np.sum(imports, axis=0).max(initial=0.0)
            rep.record("electrolyzer_demand", max(need - rr.P_EL_E, 0.0) / max(1.0, need))
            rep.record("network_received", _rel(np.sum(imports) * TAU - rr.E_ED, rr.E_ED))

    # buffers: recursion, window and the physical input they were sized for
    for (j, mode), br in sol.buffers.items():
        A = br.ammonia
        sched = br.schedule
        scale = max(1.0, econ.k_max * A)
        out_lo, out_hi = econ.k_min * A, econ.k_max * A
        rep.record("buffer_window", max(out_lo - sched.n_out.min(), sched.n_out.max() - out_hi, 0.0) / scale)
        rep.record("buffer_level", max(-sched.level.min(), sched.level.max() - sched.capacity, 0.0) / scale)
        nxt = sched.level + (br.n_in - sched.n_out) * TAU
        rep.record("buffer_cycle", np.abs(nxt - np.roll(sched.level, -1)).max() / scale)
        if mode == "local":
            expect = eta_wth * R[j].P_L * T_TO_KG
        else:
            expect = sum(eta_wth * h * T_TO_KG for (i, jj), h in sol.en_hourly.items() if jj == j)
        rep.record("buffer_input", np.abs(br.n_in - expect).max(initial=0.0) / scale)
        rep.record("buffer_mass", _rel((br.n_in.sum() - sched.n_out.sum()) * TAU, br.n_in.sum()))

    # network: balance per island and hour, PTDF flows, branch limits
    pos = {n: k for k, n in enumerate(gm.nodes)}
    inj = np.zeros_like(sol.injections)
    for (i, j), h in sol.en_hourly.items():
        if gm.island_of(i) != gm.island_of(j):
            rep.record("network_island", np.inf)
        inj[pos[i]] += h
        inj[pos[j]] -= h
    rep.record("network_injections", np.abs(inj - sol.injections).max(initial=0.0)
               / max(1.0, np.abs(inj).max(initial=0.0)))
    for island in gm.islands:
        rows = [pos[n] for n in island]
        bal = np.abs(inj[rows].sum(axis=0))
        size = np.abs(inj[rows]).sum(axis=0)
        rep.record("network_closure", (bal / np.maximum(1.0, size)).max(initial=0.0))
    flows = gm.flows(inj)
    rep.record("flow_ptdf", np.abs(flows - sol.branch_flows).max(initial=0.0)
               / max(1.0, np.abs(flows).max(initial=0.0)))
    kcl = gm.T @ flows - inj
    rep.record("flow_kcl", np.abs(kcl).max(initial=0.0) / max(1.0, np.abs(inj).max(initial=0.0)))
    for e, br in enumerate(gm.branches):
        over = max(flows[e].max(initial=0.0) - br.cap_fwd, -br.cap_rev - flows[e].min(initial=0.0), 0.0)
        rep.record("branch_limits", over / max(1.0, br.cap_fwd, br.cap_rev))
    return rep
