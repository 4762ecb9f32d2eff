"""Small generated scenarios for property tests and demonstrations."""
from __future__ import annotations

import numpy as np

from ..data_io import Branch, EconomicParams, Region, Scenario, SolverOptions
from ..economics import KWH_PER_MWH
from ..hsc import HscModel
from ..wind import synth_profile

# region 8's curve: a large, fairly flat resource
_A8, _B8, _PMAX8 = -6.34e-05, 11.44, 2655.0


def two_region(distance: float, ammonia_tpd: float = 100.0, intensity: float = 0.3, seed: int = 8,
               economics: EconomicParams | None = None, d_max: float = 500.0) -> Scenario:
    """Region 1 consumes ammonia and has no wind; region 2 has wind only.

    Both sit in one grid zone joined by a single branch, ``distance`` km apart.
    """
    regions = (
        Region(1, "demand", "western", float(ammonia_tpd)),
        Region(2, "source", "western", 0.0, _A8, _B8, _PMAX8),
    )
    D = np.array([[0.0, distance], [distance, 0.0]])
    profiles = {2: synth_profile(intensity, seed, region=2)}
    return Scenario(regions, D, (Branch(1, 2),), profiles,
                    economics or EconomicParams.defaults(),
                    SolverOptions(dmax_km=d_max), f"two_region_{distance:g}km")


def random_scenario(seed: int, n_regions: int | None = None) -> Scenario:
    """A plannable scenario with 3 to 6 regions.

    Regions are points in a 900 km square with Euclidean distances. Some
    regions carry wind and some carry demand; one or two grid zones are each
    joined by a spanning chain plus random extra branches. Demands are scaled
    so every demand region can be served by what it can reach.
    """
    rng = np.random.default_rng(seed)
    n = int(n_regions or rng.integers(3, 7))
    pts = rng.uniform(0, 900, size=(n, 2))
    D = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    D = (D + D.T) / 2
    np.fill_diagonal(D, 0.0)
    D[D == 0] += np.where(np.eye(n, dtype=bool), 0.0, 1.0)[D == 0]  # coincident points

    zones = ["western"] * n
    if n >= 4 and rng.random() < 0.3:
        for k in range(n - int(rng.integers(1, 3)), n):
            zones[k] = "eastern"
    ids = list(range(1, n + 1))
    windy = rng.random(n) < 0.6
    if not windy.any():
        windy[int(rng.integers(n))] = True
    wants = rng.random(n) < 0.5
    if not wants.any():
        wants[int(rng.integers(n))] = True

    grid = []
    for zone in ("western", "eastern"):
        members = [i for i in ids if zones[i - 1] == zone]
        for a, b in zip(members[:-1], members[1:]):
            grid.append(Branch(a, b, float(rng.uniform(0.5, 2.0))))
        for a in members:
            for b in members:
                if a + 1 < b and rng.random() < 0.3:
                    grid.append(Branch(a, b, float(rng.uniform(0.5, 2.0))))

    curves = {}
    for k in range(n):
        if windy[k]:
            b = float(rng.uniform(11.0, 14.0))
            p_max = float(rng.uniform(200.0, 3000.0))
            a = -float(rng.uniform(0.1, 0.9)) * b / (2.0 * p_max)
            curves[k + 1] = (a, b, p_max)
    econ = EconomicParams.defaults()
    opts = SolverOptions()
    t_per_mwh = float(econ.eta_wta) * KWH_PER_MWH / 1000.0

    def reach(j: int) -> list[int]:
        out = []
        for i in curves:
            same_grid = zones[i - 1] == zones[j - 1]
            if i == j or same_grid or D[i - 1, j - 1] <= opts.dmax_km:
                out.append(i)
        return out

    for k in range(n):
        if wants[k] and not reach(k + 1):
            a = -0.3 * 12.0 / 2000.0
            curves[k + 1] = (a, 12.0, 1000.0)
    e_max = {i: a * p * p + b * p for i, (a, b, p) in curves.items()}
    demand = {}
    budget = {i: 0.4 * e for i, e in e_max.items()}  # MWh/d still unallocated
    for k in range(n):
        j = k + 1
        if not wants[k]:
            continue
        avail = sum(budget[i] for i in reach(j))
        tpd = min(float(rng.uniform(20.0, 400.0)), 0.8 * avail * t_per_mwh)
        tpd = float(np.round(tpd, 3))
        if tpd <= 0:
            continue
        demand[j] = tpd
        need = tpd / t_per_mwh
        for i in reach(j):
            take = min(budget[i], need * budget[i] / avail) if avail > 0 else 0.0
            budget[i] -= take
    if not demand:
        j = next(iter(curves))
        demand[j] = 10.0

    regions = tuple(
        Region(j, f"r{j}", zones[j - 1], demand.get(j, 0.0), *(curves.get(j) or (None, None, None)))
        for j in ids
    )
    profiles = {i: synth_profile(float(rng.uniform(0.0, 0.9)), int(rng.integers(1 << 30)), region=i)
                for i in sorted(curves)}
    s = Scenario(regions, D, tuple(grid), profiles, econ, opts, f"random_{seed}")
    # every demand region must have at least one way in
    hm = HscModel.from_scenario(s)
    for j in demand:
        assert reach(j) or hm.suppliers(j), j
    return s
