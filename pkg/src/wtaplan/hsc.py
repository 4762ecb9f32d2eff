"""Hydrogen supply chain: truck routes, the daily distance cap, storage and transport costs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .data_io import EconomicParams
from .economics import facility_cost

Link = tuple[int, int, float]  # (region, region, km), undirected

_REL = 1e-12


class HscError(ValueError):
    pass


class InfeasiblePath(HscError):
    pass


def shortest_paths(nodes: Sequence[int], adjacency: Iterable[Link]) -> tuple[np.ndarray, dict]:
    """All-pairs shortest distances and one canonical route per reachable pair.

    Routes are built greedily from the source: among neighbours ``k`` with
    ``w(i,k) + D(k,j) == D(i,j)`` the smallest id is taken, so the result
    does not depend on the order of ``adjacency``. Unreachable pairs have
    distance ``inf`` and no route.
    """
    nodes = sorted(nodes)
    pos = {n: k for k, n in enumerate(nodes)}
    n = len(nodes)
    W = np.full((n, n), np.inf)
    np.fill_diagonal(W, 0.0)
    for a, b, w in adjacency:
        if a not in pos or b not in pos:
            raise HscError(f"link {a}-{b} references an unknown region")
        if w < 0:
            raise HscError(f"negative link length {w} on {a}-{b}")
        if a == b:
            continue
        i, j = pos[a], pos[b]
        W[i, j] = W[j, i] = min(W[i, j], float(w))
    D = W.copy()
    for k in range(n):
        D = np.minimum(D, D[:, k:k + 1] + D[k:k + 1, :])
    routes: dict[tuple[int, int], tuple[int, ...]] = {}
    for i in range(n):
        for j in range(n):
            if i == j or not np.isfinite(D[i, j]):
                continue
            path = [i]
            cur = i
            while cur != j:
                target = D[cur, j]
                for k in range(n):
                    if k != cur and np.isfinite(W[cur, k]) and \
                            abs(W[cur, k] + D[k, j] - target) <= _REL * max(1.0, target):
                        cur = k
                        break
                else:  # pragma: no cover - impossible after Floyd-Warshall
                    raise HscError("route reconstruction failed")
                path.append(cur)
            routes[(nodes[i], nodes[j])] = tuple(nodes[p] for p in path)
    return D, routes


def adjacency_from_distances(ids: Sequence[int], D: np.ndarray) -> list[Link]:
    """Smallest link set that reproduces ``D`` as its shortest-path metric.

    A pair is linked unless some third region lies on a route at most as long
    (``D_ik + D_kj <= D_ij``). For a metric ``D`` this keeps every distance.
    """
    D = np.asarray(D, dtype=float)
    n = len(ids)
    links = []
    for i in range(n):
        for j in range(i + 1, n):
            via = [D[i, k] + D[k, j] for k in range(n) if k not in (i, j)]
            if not via or min(via) > D[i, j]:
                links.append((ids[i], ids[j], float(D[i, j])))
    return links


def feasible_paths(ids: Sequence[int], D: np.ndarray, d_max: float) -> list[tuple[int, int]]:
    """Ordered pairs ``(i, j)``, ``i != j``, with ``D_ij <= d_max``."""
    D = np.asarray(D, dtype=float)
    return [(a, b) for x, a in enumerate(ids) for y, b in enumerate(ids)
            if x != y and D[x, y] <= d_max]


def build_path_incidence(routes: Mapping[tuple[int, int], Sequence[int]],
                         paths: Sequence[tuple[int, int]],
                         links: Sequence[Link]) -> np.ndarray:
    """Link x path 0/1 matrix: which links each path's route uses."""
    col = {}
    for e, (a, b, _) in enumerate(links):
        col[(a, b)] = col[(b, a)] = e
    T = np.zeros((len(links), len(paths)))
    for p, key in enumerate(paths):
        if key not in routes:
            raise HscError(f"no route for path {key[0]}->{key[1]}")
        r = routes[key]
        for u, v in zip(r[:-1], r[1:]):
            T[col[(u, v)], p] = 1.0
    return T


@dataclass(frozen=True)
class HscModel:
    ids: tuple[int, ...]
    links: tuple[Link, ...]
    d_max: float = 500.0
    speed_kmh: float = 50.0
    hours: float = 10.0
    D: np.ndarray = field(init=False, repr=False, compare=False)
    routes: dict = field(init=False, repr=False, compare=False)
    paths: tuple[tuple[int, int], ...] = field(init=False, compare=False)
    T_H: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(sorted(self.ids)))
        object.__setattr__(self, "links", tuple(sorted((min(a, b), max(a, b), float(w))
                                                       for a, b, w in self.links)))
        D, routes = shortest_paths(self.ids, self.links)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "routes", routes)
        object.__setattr__(self, "paths", tuple(feasible_paths(self.ids, D, self.d_max)))
        object.__setattr__(self, "T_H", build_path_incidence(routes, self.paths, self.links))

    @classmethod
    def from_scenario(cls, s, d_max: float | None = None) -> "HscModel":
        opt = s.options
        links = adjacency_from_distances(s.ids, s.distances)
        return cls(tuple(s.ids), tuple(links), opt.dmax_km if d_max is None else d_max,
                   opt.truck_speed_kmh, opt.truck_hours)

    def distance(self, i: int, j: int) -> float:
        return float(self.D[self.ids.index(i), self.ids.index(j)])

    def is_feasible(self, i: int, j: int) -> bool:
        return (i, j) in set(self.paths)

    def suppliers(self, demand: int) -> list[int]:
        """Regions that may truck hydrogen to ``demand``."""
        return sorted(i for i, j in self.paths if j == demand)

    def link_flows(self, path_flows: Mapping[tuple[int, int], float]) -> np.ndarray:
        """Hydrogen on each link (kg/d) from flows on feasible paths."""
        h = np.zeros(len(self.paths))
        index = {p: k for k, p in enumerate(self.paths)}
        for key, v in path_flows.items():
            if key not in index:
                if v != 0:
                    raise InfeasiblePath(f"flow on infeasible path {key[0]}->{key[1]}")
                continue
            h[index[key]] = v
        return self.T_H @ h


def storage_capacity(flows: Mapping[tuple[int, int], float],
                     feasible: Iterable[tuple[int, int]] | None = None) -> dict[int, float]:
    """Storage tank size per source region: its total daily outflow (kg)."""
    allowed = None if feasible is None else set(feasible)
    out: dict[int, float] = {}
    for (i, j), h in sorted(flows.items()):
        if h < 0:
            raise HscError(f"negative flow on {i}->{j}")
        if allowed is not None and (i, j) not in allowed and h != 0:
            raise InfeasiblePath(f"flow on infeasible path {i}->{j}")
        out[i] = out.get(i, 0.0) + h
    return out


def utilization(D: float, speed_kmh: float = 50.0, hours: float = 10.0) -> float:
    """Truck capacity multiplier: round trips that do not fit one operating day."""
    return max(1.0, 2.0 * D / (speed_kmh * hours))


@dataclass(frozen=True)
class TransportCost:
    truck: float  # EUR/d
    trailer: float  # EUR/d
    diesel: float  # EUR/d
    storage_basis: float  # kg of source storage implied

    @property
    def total(self) -> float:
        return self.truck + self.trailer + self.diesel


def transport_rate(D: float, econ: EconomicParams, speed_kmh: float = 50.0,
                   hours: float = 10.0) -> float:
    """Trucks, trailers and diesel in EUR per kg/d of hydrogen over ``D`` km."""
    return transport_cost_basis(1.0, D, econ, speed_kmh, hours).total


def transport_cost_basis(H: float, D: float, econ: EconomicParams, speed_kmh: float = 50.0,
                         hours: float = 10.0, d_max: float | None = None) -> TransportCost:
    """Daily cost of trucking ``H`` kg/d of hydrogen over ``D`` km."""
    if d_max is not None and D > d_max:
        raise InfeasiblePath(f"distance {D} km exceeds the {d_max} km daily limit")
    if H < 0 or D < 0:
        raise HscError("flow and distance must be non-negative")
    base = H * utilization(D, speed_kmh, hours)
    return TransportCost(
        truck=facility_cost(econ, "truck", base).total,
        trailer=facility_cost(econ, "trailer", base).total,
        diesel=float(econ.c_diesel * D * H) if H else 0.0,
        storage_basis=H,
    )
