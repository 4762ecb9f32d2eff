"""Assembly of the network planning LP.

Internal units keep coefficients near one: energy MWh, power MW, mass t,
money kEUR. With these units every unit cost has the same numeric value as
its per-kW or per-kg figure in EUR.

Variables (T = 24 hours)
------------------------
per usable wind region i (set W):
    P_RE[i], E[i], P_EL_LH[i], m_HS[i]                           4 |W|
per demand region j (set Dm):
    A_L[j] if j is also in W (set WD); A_E[j] if j has an EN
    supplier (set DE); A_H[j] if j has an HSC supplier (set DH)   |WD| + |DE| + |DH|
    P_L[j, t] for j in WD                                         T |WD|
    P_EL_E[j] for j in DE                                         |DE|
per EN pair (i, j) and per HSC path (i, j):
    E_EN[i, j], H[i, j]                                           N_EN + N_H
per buffer (Local for WD, EN for DE): out[t], m[t], cap          (2T + 1)(|WD| + |DE|)
per grid branch touched by some EN pair: flow[e, t]              T F

Rows
----
per i in W: hydrogen balance, storage definition, T electrolyzer
    epigraph rows                                                 (T + 2) |W|
per j in Dm: mode sum; EN and HSC production definitions          |Dm| + |DE| + |DH|
per j in WD: local energy, T local-power rows                     (T + 1) |WD|
per j in DE: T demand-side electrolyzer rows                      T |DE|
per buffer: balance, level cap, k_min and k_max rows              4T (|WD| + |DE|)
per touched branch: T flow definitions                            T F

The potential curves ``E <= a P^2 + b P`` are returned as concave bounds for
successive linearisation rather than rows.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..buffer import add_buffer_rows, feasibility_check
from ..data_io import Scenario
from ..economics import daily_rate, nitrogen_cost_per_kg_nh3, water_cost_per_kg_h2
from ..grid import GridModel
from ..hsc import HscModel, utilization
from ..lp import EQ, GE, ConcaveBound, LpBuilder, LpProblem
from ..wind import HOURS, TAU


class PlanningError(ValueError):
    """The scenario cannot be planned (reported before solving)."""


@dataclass(frozen=True)
class BufferIndex:
    outs: list[int]
    levels: list[int]
    cap: int


@dataclass
class ModelIndex:
    """Variable indices of a built model, keyed by region id or (source, sink)."""

    wind: list[int] = field(default_factory=list)
    demand: list[int] = field(default_factory=list)
    P_RE: dict[int, int] = field(default_factory=dict)
    E: dict[int, int] = field(default_factory=dict)
    P_EL_LH: dict[int, int] = field(default_factory=dict)
    m_HS: dict[int, int] = field(default_factory=dict)
    A_L: dict[int, int] = field(default_factory=dict)
    A_E: dict[int, int] = field(default_factory=dict)
    A_H: dict[int, int] = field(default_factory=dict)
    P_L: dict[int, list[int]] = field(default_factory=dict)
    P_EL_E: dict[int, int] = field(default_factory=dict)
    EN: dict[tuple[int, int], int] = field(default_factory=dict)
    H: dict[tuple[int, int], int] = field(default_factory=dict)
    buffers: dict[tuple[int, str], BufferIndex] = field(default_factory=dict)
    flows: dict[int, list[int]] = field(default_factory=dict)  # branch position -> hourly vars
    # per-unit coefficients used in the objective, kept for the cost report
    rates: dict[str, float] = field(default_factory=dict)
    path_rate: dict[tuple[int, int], dict[str, float]] = field(default_factory=dict)

    @property
    def wind_demand(self) -> list[int]:
        return sorted(self.P_L)

    @property
    def en_demand(self) -> list[int]:
        return sorted(self.P_EL_E)

    def expected_counts(self, hours: int = HOURS) -> tuple[int, int]:
        """Variable and row counts predicted by the formula in the module docstring."""
        W, Dm = len(self.wind), len(self.demand)
        WD, DE, DH = len(self.P_L), len(self.A_E), len(self.A_H)
        NEN, NH, F = len(self.EN), len(self.H), len(self.flows)
        nbuf = WD + DE
        n = 4 * W + WD + DE + DH + hours * WD + DE + NEN + NH + (2 * hours + 1) * nbuf + hours * F
        m = (hours + 2) * W + Dm + DE + DH + (hours + 1) * WD + hours * DE + 4 * hours * nbuf + hours * F
        return n, m


@dataclass
class PlanningModel:
    scenario: Scenario
    problem: LpProblem
    bounds: list[ConcaveBound]
    index: ModelIndex
    grid: GridModel
    hsc: HscModel

    def profile(self, i: int) -> np.ndarray:
        return self.scenario.profiles[i].p


def _supply_options(s: Scenario, gm: GridModel, hm: HscModel) -> tuple[list[int], list, list]:
    """Usable wind regions, EN pairs and HSC paths."""
    demand = {r.id for r in s.demand_regions}
    windy = {r.id for r in s.wind_regions if r.id in s.profiles and r.p_re_max > 0}
    en = sorted((i, j) for i in windy for j in demand
                if i != j and gm.island_of(i) == gm.island_of(j))
    paths = sorted((i, j) for i, j in hm.paths if i in windy and j in demand)
    used = sorted(i for i in windy
                  if i in demand or any(p[0] == i for p in en) or any(p[0] == i for p in paths))
    return used, en, paths


def build_model(s: Scenario) -> PlanningModel:
    """Build the planning LP for ``s`` (see the module docstring for its layout)."""
    econ = s.economics
    gm = GridModel(tuple(s.ids), tuple(s.grid))
    hm = HscModel.from_scenario(s)
    wind, en_pairs, h_paths = _supply_options(s, gm, hm)
    demand = [r.id for r in s.demand_regions]
    for j in demand:
        if j not in wind and not any(p[1] == j for p in en_pairs) and not any(p[1] == j for p in h_paths):
            raise PlanningError(f"region {j} has demand but no feasible supply "
                                "(no local wind, no grid connection to a wind region, "
                                "no hydrogen path within the distance limit)")
    window = feasibility_check(1.0, econ.k_min, econ.k_max, econ.k_hta)
    if not window:
        raise PlanningError(f"reactor window cannot take the required hydrogen: {window.explanation}")

    eta_wta = float(econ.eta_wta)
    eta_wth = float(econ.eta_wth)
    k_hta = float(econ.k_hta)
    rates = {
        "re": daily_rate(econ, "re"), "el": daily_rate(econ, "el"),
        "buf": daily_rate(econ, "buf"), "hs": daily_rate(econ, "hs"),
        "truck": daily_rate(econ, "truck"), "trailer": daily_rate(econ, "trailer"),
        "water_per_mwh": eta_wth * water_cost_per_kg_h2(econ),
        "n2": nitrogen_cost_per_kg_nh3(econ), "en": float(econ.c_en),
        "diesel": float(econ.c_diesel),
    }
    ix = ModelIndex(wind=list(wind), demand=demand, rates=rates)
    b = LpBuilder()
    prof = {i: s.profiles[i].p for i in wind}
    T = HOURS

    for i in wind:
        r = s.region(i)
        ix.P_RE[i] = b.add_var(f"P_RE[{i}]", upper=r.p_re_max, cost=rates["re"])
        ix.E[i] = b.add_var(f"E[{i}]", cost=rates["water_per_mwh"])
        ix.P_EL_LH[i] = b.add_var(f"P_EL_LH[{i}]", cost=rates["el"])
        ix.m_HS[i] = b.add_var(f"m_HS[{i}]", cost=rates["hs"])
    for j in demand:
        if j in wind:
            ix.A_L[j] = b.add_var(f"A_L[{j}]", cost=rates["n2"])
        if any(p[1] == j for p in en_pairs):
            ix.A_E[j] = b.add_var(f"A_E[{j}]", cost=rates["n2"])
        if any(p[1] == j for p in h_paths):
            ix.A_H[j] = b.add_var(f"A_H[{j}]", cost=rates["n2"])
    for j in ix.A_L:
        ix.P_L[j] = [b.add_var(f"P_L[{j},{t}]") for t in range(T)]
    for j in ix.A_E:
        ix.P_EL_E[j] = b.add_var(f"P_EL_E[{j}]", cost=rates["el"])
    for i, j in en_pairs:
        ix.EN[(i, j)] = b.add_var(f"E_EN[{i},{j}]", cost=rates["en"])
    for i, j in h_paths:
        D = hm.distance(i, j)
        u = utilization(D, s.options.truck_speed_kmh, s.options.truck_hours)
        pr = {"truck": rates["truck"] * u, "trailer": rates["trailer"] * u,
              "diesel": rates["diesel"] * D, "distance": D, "u": u}
        ix.path_rate[(i, j)] = pr
        ix.H[(i, j)] = b.add_var(f"H[{i},{j}]", cost=pr["truck"] + pr["trailer"] + pr["diesel"])

    # source regions: hydrogen balance, storage, electrolyzer epigraph
    for i in wind:
        exports = [ix.EN[p] for p in en_pairs if p[0] == i]
        outs = [ix.H[p] for p in h_paths if p[0] == i]
        row = {ix.E[i]: eta_wth}
        for v in exports:
            row[v] = -eta_wth
        for v in ix.P_L.get(i, []):
            row[v] = row.get(v, 0.0) - eta_wth * TAU
        for v in outs:
            row[v] = -1.0
        b.add_row(row, EQ, 0.0, f"h2_balance[{i}]")
        row = {ix.m_HS[i]: 1.0}
        for v in outs:
            row[v] = -1.0
        b.add_row(row, EQ, 0.0, f"storage[{i}]")
        for t in range(T):
            row = {ix.P_EL_LH[i]: 1.0, ix.E[i]: -prof[i][t]}
            for v in exports:
                row[v] = prof[i][t]
            b.add_row(row, GE, 0.0, f"el_lh[{i},{t}]")

    # demand regions: mode sum and per-mode production
    for j in demand:
        row = {v[j]: 1.0 for v in (ix.A_L, ix.A_E, ix.A_H) if j in v}
        b.add_row(row, EQ, s.region(j).ammonia_tpd, f"mode_sum[{j}]")
        if j in ix.A_E:
            row = {ix.EN[p]: eta_wta for p in en_pairs if p[1] == j}
            row[ix.A_E[j]] = -1.0
            b.add_row(row, EQ, 0.0, f"en_production[{j}]")
        if j in ix.A_H:
            row = {ix.H[p]: k_hta for p in h_paths if p[1] == j}
            row[ix.A_H[j]] = -1.0
            b.add_row(row, EQ, 0.0, f"hsc_production[{j}]")

    # local production: energy requirement and hourly power split
    for j in ix.P_L:
        row = {v: TAU for v in ix.P_L[j]}
        row[ix.A_L[j]] = -1.0 / eta_wta
        b.add_row(row, EQ, 0.0, f"local_energy[{j}]")
        exports = [ix.EN[p] for p in en_pairs if p[0] == j]
        for t in range(T):
            row = {ix.E[j]: prof[j][t], ix.P_L[j][t]: -1.0}
            for v in exports:
                row[v] = -prof[j][t]
            b.add_row(row, GE, 0.0, f"local_power[{j},{t}]")

    # demand-side electrolyzers for EN imports
    for j in ix.P_EL_E:
        srcs = [p for p in en_pairs if p[1] == j]
        for t in range(T):
            row = {ix.P_EL_E[j]: 1.0}
            for p in srcs:
                row[ix.EN[p]] = -prof[p[0]][t]
            b.add_row(row, GE, 0.0, f"el_e[{j},{t}]")

    # buffers
    for j in ix.P_L:
        cap = b.add_var(f"m_BUF_L[{j}]", cost=rates["buf"])
        n_in = {t: {ix.P_L[j][t]: eta_wth} for t in range(T)}
        outs, levels = add_buffer_rows(b, f"bufL[{j}]", n_in, ix.A_L[j], econ.k_min, econ.k_max, cap)
        ix.buffers[(j, "L")] = BufferIndex(outs, levels, cap)
    for j in ix.P_EL_E:
        cap = b.add_var(f"m_BUF_E[{j}]", cost=rates["buf"])
        srcs = [p for p in en_pairs if p[1] == j]
        n_in = {t: {ix.EN[p]: eta_wth * prof[p[0]][t] for p in srcs} for t in range(T)}
        outs, levels = add_buffer_rows(b, f"bufE[{j}]", n_in, ix.A_E[j], econ.k_min, econ.k_max, cap)
        ix.buffers[(j, "E")] = BufferIndex(outs, levels, cap)

    # grid flows: PTDF applied to the transactions' net injections
    S = gm.node_ptdf()
    pos = {n: k for k, n in enumerate(gm.nodes)}
    for e, br in enumerate(gm.branches):
        sens = {p: S[e, pos[p[0]]] - S[e, pos[p[1]]] for p in en_pairs}
        sens = {p: v for p, v in sens.items() if abs(v) > 1e-12}
        if not sens:
            continue
        ix.flows[e] = []
        for t in range(T):
            f = b.add_var(f"flow[{br.from_id}-{br.to_id},{t}]", lower=-br.cap_rev, upper=br.cap_fwd)
            ix.flows[e].append(f)
            row = {f: 1.0}
            for p, v in sens.items():
                row[ix.EN[p]] = -v * prof[p[0]][t]
            b.add_row(row, EQ, 0.0, f"flow_def[{br.from_id}-{br.to_id},{t}]")

    problem = b.build()
    bounds = [ConcaveBound(ix.E[i], ix.P_RE[i], s.region(i).curve, f"potential[{i}]") for i in wind]
    return PlanningModel(s, problem, bounds, ix, gm, hm)


def single_mode_costs(s: Scenario, j: int) -> dict[str, float]:
    """Upper bounds (EUR/d) on serving demand region ``j`` alone by each pure mode.

    Used as an optimality sanity oracle: each value is the cost of a feasible
    plan in which ``j``'s ammonia comes from one supplier and one mode, with
    capacities sized directly rather than optimised. Wind is taken from the
    supplier's potential curve only as far as it reaches.
    """
    from ..buffer import BufferProblem, hydrogen_input, size_buffer
    from ..hsc import transport_rate
    from ..wind import min_capacity, DomainError

    econ = s.economics
    A = s.region(j).ammonia_tpd * 1000.0
    eta_wta, k_hta = float(econ.eta_wta), float(econ.k_hta)
    gm = GridModel(tuple(s.ids), tuple(s.grid))
    hm = HscModel.from_scenario(s)
    wind, en_pairs, h_paths = _supply_options(s, gm, hm)
    r = {k: daily_rate(econ, k) for k in ("re", "el", "buf", "hs")}
    water = water_cost_per_kg_h2(econ)
    n2 = nitrogen_cost_per_kg_nh3(econ) * A
    E = A / eta_wta / 1000.0  # MWh/d
    h2 = A / k_hta
    out: dict[str, float] = {}

    def wind_cost(i):
        try:
            P = min_capacity(s.region(i).curve, E)
        except DomainError:
            return None
        return r["re"] * P * 1000.0

    def buffer_cost(i):
        sched = size_buffer(BufferProblem(hydrogen_input(A, s.profiles[i].p, econ.k_hta), A,
                                          econ.k_min, econ.k_max, econ.k_hta))
        return r["buf"] * sched.capacity

    def el_cost(i):
        return r["el"] * E * float(s.profiles[i].p.max()) * 1000.0 + water * h2

    if j in wind:
        c = wind_cost(j)
        if c is not None:
            out[f"local:{j}"] = c + el_cost(j) + buffer_cost(j) + n2
    for i, jj in en_pairs:
        if jj == j:
            c = wind_cost(i)
            if c is not None:
                out[f"en:{i}"] = c + el_cost(i) + buffer_cost(i) + n2 + econ.c_en * E * 1000.0
    for i, jj in h_paths:
        if jj == j:
            c = wind_cost(i)
            if c is not None:
                D = hm.distance(i, j)
                trans = transport_rate(D, econ, s.options.truck_speed_kmh, s.options.truck_hours)
                out[f"hsc:{i}"] = c + el_cost(i) + (trans + r["hs"]) * h2 + n2
    return out

