"""Sweeps built on the planner: Local-mode sizing against energy, and CAPEX sensitivity."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

from ..buffer import BufferProblem, hydrogen_input, size_buffer
from ..data_io import Scenario
from ..economics import KWH_PER_MWH, daily_rate, lcoa_local, lcoe, lcoh
from ..wind import DomainError, WindProfile, min_capacity
from .costs import decompose_costs

_T = TypeVar("_T")
_R = TypeVar("_R")


def ordered_map(fn: Callable[[_T], _R], items: Iterable[_T], jobs: int = 1) -> list[_R]:
    """``map`` that may run on threads; results keep the input order either way."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class SweepPoint:
    E: float  # MWh/d
    P_RE: float  # MW
    P_EL: float  # MW
    m_BUF: float  # kg
    lcoa: float  # EUR/kg, nan when skipped or E = 0
    note: str = ""


def local_point(s: Scenario, region: int, E: float, profile: WindProfile | None = None) -> SweepPoint:
    """Single-region Local plan that uses exactly ``E`` MWh/d.

    Turbines are the smallest capacity whose potential reaches ``E``; the
    electrolyzer follows the hourly peak; the buffer comes from the buffer LP.
    """
    r = s.region(region)
    if not r.has_wind:
        raise ValueError(f"region {region} has no wind potential")
    econ = s.economics
    w = profile if profile is not None else s.profiles[region]
    if E <= 0:
        return SweepPoint(0.0, 0.0, 0.0, 0.0, math.nan, "no energy")
    try:
        P = min_capacity(r.curve, E)
    except DomainError as exc:
        return SweepPoint(E, math.nan, math.nan, math.nan, math.nan, f"skipped: {exc}")
    P_el = E * float(w.p.max())
    A = float(econ.eta_wta) * E * KWH_PER_MWH
    buf = size_buffer(BufferProblem(hydrogen_input(A, w.p, econ.k_hta), A,
                                    econ.k_min, econ.k_max, econ.k_hta))
    c = lcoe(E, P, econ)
    h = lcoh(c, E, P_el, econ)
    value = lcoa_local(h, A, daily_rate(econ, "buf") * buf.capacity, econ)
    return SweepPoint(E, P, P_el, buf.capacity, value)


def local_sweep(s: Scenario, region: int, energies: Sequence[float],
                profile: WindProfile | None = None, jobs: int = 1) -> list[SweepPoint]:
    """Electrolyzer, buffer and Local LCOA as the used wind energy grows."""
    return ordered_map(lambda E: local_point(s, region, float(E), profile), energies, jobs)


@dataclass(frozen=True)
class SensitivityPoint:
    re_scale: float
    el_scale: float
    lcoa: float  # EUR/kg NH3, Local mode of the chosen region


def capex_sensitivity(s: Scenario, re_scales: Sequence[float], el_scales: Sequence[float],
                      region: int = 12, solution=None, resolve: bool = False,
                      jobs: int = 1) -> list[SensitivityPoint]:
    """Local LCOA of ``region`` over a grid of RE and EL unit-cost multipliers.

    By default the baseline plan is kept and only its costs are re-priced.
    With ``resolve=True`` each grid point is planned afresh.
    """
    from .solution import solve_configuration

    if any(x <= 0 for x in list(re_scales) + list(el_scales)):
        raise ValueError("cost multipliers must be positive")
    if solution is None and not resolve:
        solution = solve_configuration(s)
    grid = [(float(a), float(b)) for a in re_scales for b in el_scales]

    def point(ab: tuple[float, float]) -> SensitivityPoint:
        scaled = s.replace(economics=s.economics.scaled(re=ab[0], el=ab[1]))
        sol = solve_configuration(scaled) if resolve else solution
        rep = decompose_costs(sol, scaled)
        st = rep.stacks.get((region, "local"))
        return SensitivityPoint(ab[0], ab[1], st.lcoa if st is not None else math.nan)

    return ordered_map(point, grid, jobs)


def parse_range(text: str) -> list[float]:
    """``"start:stop:count"`` (inclusive, evenly spaced) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be start:stop:count, got {text!r}")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError("count must be >= 1")
        return [float(v) for v in np.linspace(start, stop, count)]
    return [float(v) for v in text.split(",") if v.strip()]
