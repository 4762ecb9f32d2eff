"""Solving the planning model and mapping the LP point back to physical quantities.

Everything in a PlanningSolution is in file-facing units: MW, MWh/d, kg,
kg/d, kg/h and EUR/d.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from ..buffer import BufferSchedule
from ..data_io import Scenario
from ..lp import OPTIMAL, KktReport, SimplexOptions, slp_solve, verify_kkt
from ..wind import HOURS, TAU, min_capacity
from .model import PlanningModel, build_model

log = logging.getLogger(__name__)

T_TO_KG = 1000.0
KEUR_TO_EUR = 1000.0
SNAP = 1e-8  # internal units (t, MWh, MW)


class SolveError(RuntimeError):
    """The LP or the linearisation loop failed."""


@dataclass
class RegionResult:
    id: int
    P_RE: float = 0.0  # MW
    P_EL_LH: float = 0.0  # MW, source-side electrolyzers
    P_EL_E: float = 0.0  # MW, demand-side electrolyzers fed by the grid
    m_BUF_L: float = 0.0  # kg
    m_BUF_E: float = 0.0  # kg
    m_HS: float = 0.0  # kg
    A_L: float = 0.0  # kg/d
    A_E: float = 0.0
    A_H: float = 0.0
    E: float = 0.0  # MWh/d used wind energy
    E_L: float = 0.0  # for local ammonia
    E_ES: float = 0.0  # sent over the grid
    E_HS: float = 0.0  # electrolysed for trucked hydrogen
    E_ED: float = 0.0  # received over the grid
    P_L: np.ndarray = field(default_factory=lambda: np.zeros(HOURS))  # MW

    @property
    def m_BUF(self) -> float:
        return self.m_BUF_L + self.m_BUF_E

    @property
    def ammonia(self) -> float:
        return self.A_L + self.A_E + self.A_H


@dataclass
class BufferResult:
    region: int
    mode: str  # "local" or "en"
    n_in: np.ndarray  # kg/h
    schedule: BufferSchedule
    ammonia: float  # kg/d served


@dataclass
class Diagnostics:
    converged: bool
    slp_iterations: int
    cuts: int
    lp_pivots: int
    max_violation: float
    projected: bool
    kkt: KktReport | None
    n_vars: int
    n_rows: int
    wall_seconds: float = 0.0
    checks: object = None  # CheckReport, filled by solve_configuration


@dataclass
class PlanningSolution:
    scenario_name: str
    regions: dict[int, RegionResult]
    en: dict[tuple[int, int], float]  # MWh/d
    en_hourly: dict[tuple[int, int], np.ndarray]  # MW
    hydrogen: dict[tuple[int, int], float]  # kg/d
    nodes: tuple[int, ...]
    injections: np.ndarray  # node x hour, MW
    branches: tuple[tuple[int, int], ...]
    branch_flows: np.ndarray  # branch x hour, MW
    buffers: dict[tuple[int, str], BufferResult]
    objective: float  # EUR/d
    diagnostics: Diagnostics

    @property
    def total_ammonia(self) -> float:
        return sum(r.ammonia for r in self.regions.values())

    @property
    def mean_lcoa(self) -> float:
        """Production-weighted mean levelised cost of ammonia, EUR/kg."""
        return self.objective / self.total_ammonia

    def region(self, rid: int) -> RegionResult:
        return self.regions[rid]


def _round_up_capacity(pm: PlanningModel, x: np.ndarray) -> np.ndarray:
    """Lift turbine capacities onto the potential curve where cuts left a tiny gap."""
    y = x.copy()
    for bd in pm.bounds:
        curve = bd.curve
        e = max(y[bd.e_var], 0.0)
        if e > bd.value(y[bd.p_var]):
            y[bd.p_var] = min(max(min_capacity(curve, e), y[bd.p_var]), curve.p_max)
    return y


def map_solution(pm: PlanningModel, x: np.ndarray, diag: Diagnostics) -> PlanningSolution:
    s, ix = pm.scenario, pm.index
    econ = s.economics
    eta_wth = float(econ.eta_wth)
    regions = {r.id: RegionResult(r.id) for r in s.regions}
    prof = {i: s.profiles[i].p for i in ix.wind}
    for i in ix.wind:
        rr = regions[i]
        rr.P_RE = float(x[ix.P_RE[i]])
        rr.E = float(x[ix.E[i]])
        rr.P_EL_LH = float(x[ix.P_EL_LH[i]])
        rr.m_HS = float(x[ix.m_HS[i]]) * T_TO_KG
    en = {p: float(x[v]) for p, v in ix.EN.items()}
    hyd = {p: float(x[v]) * T_TO_KG for p, v in ix.H.items()}
    en_hourly = {p: prof[p[0]] * e for p, e in en.items()}
    for j, v in ix.A_L.items():
        regions[j].A_L = float(x[v]) * T_TO_KG
        regions[j].P_L = x[ix.P_L[j]].copy()
        regions[j].E_L = float(regions[j].P_L.sum() * TAU)
    for j, v in ix.A_E.items():
        regions[j].A_E = float(x[v]) * T_TO_KG
        regions[j].P_EL_E = float(x[ix.P_EL_E[j]])
    for j, v in ix.A_H.items():
        regions[j].A_H = float(x[v]) * T_TO_KG
    for (i, j), e in en.items():
        regions[i].E_ES += e
        regions[j].E_ED += e
    for i in ix.wind:
        rr = regions[i]
        rr.E_HS = rr.E - rr.E_L - rr.E_ES

    buffers = {}
    for (j, kind), bi in ix.buffers.items():
        cap = float(x[bi.cap]) * T_TO_KG
        level = x[bi.levels] * T_TO_KG
        level = level - level.min()
        sched = BufferSchedule(x[bi.outs] * T_TO_KG, level, max(cap, float(level.max())))
        if kind == "L":
            n_in = eta_wth * regions[j].P_L * T_TO_KG
            regions[j].m_BUF_L = sched.capacity
            amm = regions[j].A_L
        else:
            n_in = np.zeros(HOURS)
            for p, h in en_hourly.items():
                if p[1] == j:
                    n_in += eta_wth * h * T_TO_KG
            regions[j].m_BUF_E = sched.capacity
            amm = regions[j].A_E
        mode = "local" if kind == "L" else "en"
        buffers[(j, mode)] = BufferResult(j, mode, n_in, sched, amm)

    gm = pm.grid
    pos = {n: k for k, n in enumerate(gm.nodes)}
    inj = np.zeros((len(gm.nodes), HOURS))
    for (i, j), h in en_hourly.items():
        inj[pos[i]] += h
        inj[pos[j]] -= h
    flows = gm.flows(inj)
    objective = float(pm.problem.c @ x) * KEUR_TO_EUR
    return PlanningSolution(s.name, regions, en, en_hourly, hyd, gm.nodes, inj,
                            tuple((b.from_id, b.to_id) for b in gm.branches), flows,
                            buffers, objective, diag)


def solve_configuration(s: Scenario, options: SimplexOptions | None = None,
                        tol: float | None = None, max_iter: int | None = None,
                        check: bool = True) -> PlanningSolution:
    """Plan ``s`` at least total daily cost.

    Turbine capacities are lifted onto their potential curves after the
    linearisation stops, so every returned capacity satisfies the curve
    exactly; the objective is recomputed at that point. The independent
    constraint check runs before return and its report is attached to the
    diagnostics.
    """
    from .check import check_solution

    t0 = time.perf_counter()
    pm = build_model(s)
    tol = s.options.slp_tol if tol is None else tol
    max_iter = s.options.slp_max_iter if max_iter is None else max_iter
    res = slp_solve(pm.problem, pm.bounds, tol=tol, max_iter=max_iter, options=options)
    if res.solution.status != OPTIMAL:
        raise SolveError(f"planning LP is {res.solution.status}")
    kkt = None
    if not res.projected:
        kkt = verify_kkt(res.problem, res.solution.x, res.solution.duals, tol=1e-6, scaled=True)
    x = res.solution.x.copy()
    x[np.abs(x) < SNAP] = 0.0  # round-off left in basic variables
    x = _round_up_capacity(pm, x)
    diag = Diagnostics(res.converged, res.iterations, len(res.cuts), res.lp_pivots,
                       res.max_violation, res.projected, kkt, pm.problem.n, pm.problem.m)
    sol = map_solution(pm, x, diag)
    if not res.converged:
        log.warning("linearisation did not converge; returning the best projected plan")
    if check:
        diag.checks = check_solution(sol, s)
    diag.wall_seconds = time.perf_counter() - t0
    return sol
