"""Attribution of the optimal daily cost to regions, supply modes and facilities.

Source-side costs are shared out in proportion to what each use draws:
turbine cost by energy, source electrolyzer cost by the energy it converts,
and storage cost by the hydrogen each truck path carries. Demand-side
electrolyzers, buffers, nitrogen, wheeling and trucking belong to a single
mode. Every EUR of the objective lands in exactly one stack.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..data_io import Scenario
from ..economics import (KW_PER_MW, daily_rate, lcoa_local, lcoe, lcoh,
                         nitrogen_cost_per_kg_nh3, water_cost_per_kg_h2)
from ..hsc import HscModel, utilization

LAYERS = ("RE", "EL", "BUF", "A", "EN", "HT", "HS", "water/diesel")
MODES = ("local", "en", "hsc")


@dataclass
class CostStack:
    region: int
    mode: str
    production: float  # kg NH3/d
    costs: dict[str, float] = field(default_factory=lambda: dict.fromkeys(LAYERS, 0.0))  # EUR/d

    def add(self, layer: str, eur_per_day: float) -> None:
        self.costs[layer] += eur_per_day

    @property
    def total(self) -> float:
        return sum(self.costs.values())

    @property
    def lcoa(self) -> float:
        return self.total / self.production if self.production > 0 else 0.0

    def per_kg(self) -> dict[str, float]:
        """Layer heights in EUR/kg NH3 (empty for a zero-production stack)."""
        if self.production <= 0:
            return {}
        return {k: v / self.production for k, v in self.costs.items()}

    def share(self, layer: str) -> float:
        return self.costs[layer] / self.total if self.total > 0 else 0.0


@dataclass
class CostReport:
    stacks: dict[tuple[int, str], CostStack]
    unattributed: float  # EUR/d that no stack received (zero for an optimal plan)
    source_lcoe: dict[int, float]  # EUR/kWh
    source_lcoh: dict[int, float]  # EUR/kg H2
    source_lcoa: dict[int, float] = field(default_factory=dict)  # EUR/kg NH3 made from that wind

    @property
    def total(self) -> float:
        return sum(st.total for st in self.stacks.values()) + self.unattributed

    def region_lcoa(self, rid: int) -> float:
        sts = [st for (r, _), st in self.stacks.items() if r == rid]
        prod = sum(st.production for st in sts)
        return sum(st.total for st in sts) / prod if prod > 0 else 0.0

    def mean_lcoa(self) -> float:
        prod = sum(st.production for st in self.stacks.values())
        return sum(st.total for st in self.stacks.values()) / prod


def _frac(part: float, whole: float) -> float:
    return part / whole if whole > 0 else 0.0


def decompose_costs(sol, s: Scenario) -> CostReport:
    econ = s.economics
    rate = {k: daily_rate(econ, k) for k in ("re", "el", "buf", "hs", "truck", "trailer")}
    water_mwh = float(econ.eta_wth) * 1000.0 * water_cost_per_kg_h2(econ)  # EUR per MWh electrolysed
    n2 = nitrogen_cost_per_kg_nh3(econ)
    hm = HscModel.from_scenario(s)
    R = sol.regions
    stacks: dict[tuple[int, str], CostStack] = {}
    # (source, demand, mode) -> [EUR/d drawn directly from that source, kg NH3/d made]
    share: dict[tuple[int, int, str], list[float]] = {}

    def draw(i: int, j: int, mode: str, eur: float, kg: float = 0.0) -> None:
        acc = share.setdefault((i, j, mode), [0.0, 0.0])
        acc[0] += eur
        acc[1] += kg

    def stack(j: int, mode: str, production: float) -> CostStack:
        if (j, mode) not in stacks:
            stacks[(j, mode)] = CostStack(j, mode, production)
        return stacks[(j, mode)]

    unattributed = 0.0
    lcoe_of: dict[int, float] = {}
    lcoh_of: dict[int, float] = {}
    for i, rr in R.items():
        c_re = rate["re"] * rr.P_RE * KW_PER_MW
        c_el = rate["el"] * rr.P_EL_LH * KW_PER_MW
        c_hs = rate["hs"] * rr.m_HS
        if rr.E > 0:
            lcoe_of[i] = lcoe(rr.E, rr.P_RE, econ)
        if rr.E - rr.E_ES > 0:
            lcoh_of[i] = lcoh(lcoe_of[i], rr.E - rr.E_ES, rr.P_EL_LH, econ)
        per_mwh = _frac(c_re, rr.E)
        converted = rr.E_L + rr.E_HS
        el_per_mwh = _frac(c_el, converted)
        if rr.E <= 0:
            unattributed += c_re
        if converted <= 0:
            unattributed += c_el
        out = sum(h for (a, _), h in sol.hydrogen.items() if a == i)
        if out <= 0:
            unattributed += c_hs
        if rr.A_L > 0:
            st = stack(i, "local", rr.A_L)
            st.add("RE", per_mwh * rr.E_L)
            st.add("EL", el_per_mwh * rr.E_L)
            st.add("water/diesel", water_mwh * rr.E_L)
            draw(i, i, "local", (per_mwh + el_per_mwh + water_mwh) * rr.E_L, rr.A_L)
        for (a, j), h in sol.hydrogen.items():
            if a != i or h <= 0:
                continue
            e = rr.E_HS * _frac(h, out)
            st = stack(j, "hsc", R[j].A_H)
            st.add("RE", per_mwh * e)
            st.add("EL", el_per_mwh * e)
            st.add("water/diesel", water_mwh * e)
            st.add("HS", c_hs * _frac(h, out))
            D = hm.distance(a, j)
            u = utilization(D, s.options.truck_speed_kmh, s.options.truck_hours)
            st.add("HT", (rate["truck"] + rate["trailer"]) * u * h)
            st.add("water/diesel", float(econ.c_diesel) * D * h)
            draw(i, j, "hsc", (per_mwh + el_per_mwh + water_mwh) * e + c_hs * _frac(h, out)
                 + (rate["truck"] + rate["trailer"]) * u * h + float(econ.c_diesel) * D * h,
                 float(econ.k_hta) * h)
        for (a, j), e in sol.en.items():
            if a != i or e <= 0:
                continue
            st = stack(j, "en", R[j].A_E)
            st.add("RE", per_mwh * e)
            st.add("water/diesel", water_mwh * e)
            st.add("EN", econ.c_en * e * 1000.0)
            draw(i, j, "en", (per_mwh + water_mwh + econ.c_en * 1000.0) * e,
                 float(econ.eta_wta) * e * 1000.0)

    for j, rr in R.items():
        if rr.A_L > 0:
            st = stack(j, "local", rr.A_L)
            st.add("BUF", rate["buf"] * rr.m_BUF_L)
            st.add("A", n2 * rr.A_L)
        elif rr.m_BUF_L > 0:
            unattributed += rate["buf"] * rr.m_BUF_L
        if rr.A_E > 0:
            st = stack(j, "en", rr.A_E)
            st.add("EL", rate["el"] * rr.P_EL_E * KW_PER_MW)
            st.add("BUF", rate["buf"] * rr.m_BUF_E)
            st.add("A", n2 * rr.A_E)
        else:
            unattributed += rate["el"] * rr.P_EL_E * KW_PER_MW + rate["buf"] * rr.m_BUF_E
        if rr.A_H > 0:
            stack(j, "hsc", rr.A_H).add("A", n2 * rr.A_H)
    # demand-side costs of a stack are shared by the sources in proportion to output
    cost_by_source: dict[int, list[float]] = {}
    for (i, j, mode), (eur, kg) in share.items():
        st = stacks[(j, mode)]
        direct = sum(e for (_, jj, m), (e, _) in share.items() if (jj, m) == (j, mode))
        eur += (st.total - direct) * _frac(kg, st.production)
        acc = cost_by_source.setdefault(i, [0.0, 0.0])
        acc[0] += eur
        acc[1] += kg
    source_lcoa = {i: eur / kg for i, (eur, kg) in sorted(cost_by_source.items()) if kg > 0}
    ordered = dict(sorted(stacks.items(), key=lambda kv: (kv[0][0], MODES.index(kv[0][1]))))
    return CostReport(ordered, unattributed, lcoe_of, lcoh_of, source_lcoa)


def local_lcoa_from_formulas(sol, s: Scenario, region: int) -> float:
    """Local LCOA of a region whose wind serves only its own reactors.

    Uses the closed-form levelised-cost chain rather than the attribution,
    as an independent tie-out.
    """
    econ = s.economics
    rr = sol.regions[region]
    if rr.E_ES > 1e-9 * max(1.0, rr.E) or rr.E_HS > 1e-9 * max(1.0, rr.E):
        raise ValueError(f"region {region} also exports; the pure-local formula does not apply")
    c = lcoe(rr.E, rr.P_RE, econ)
    h = lcoh(c, rr.E_L, rr.P_EL_LH, econ)
    return lcoa_local(h, rr.A_L, daily_rate(econ, "buf") * rr.m_BUF_L, econ)
