"""DC power-flow model of the transmission network.

Branch flows follow from nodal injections through the PTDF matrix built on
the reduced susceptance Laplacian. Each connected island has its own
reference node (the lowest region id), which absorbs that island's balance.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .data_io import Branch


class GridError(ValueError):
    pass


class SingularNetwork(GridError):
    """An island cannot be solved because its nodes are not all connected."""

    def __init__(self, nodes: Sequence[int]):
        self.nodes = tuple(nodes)
        super().__init__(f"disconnected node set {list(self.nodes)}: reduced Laplacian is singular")


class UnbalancedInjection(GridError):
    pass


def build_incidence(branches: Sequence[Branch], nodes: Sequence[int]) -> np.ndarray:
    """Node x branch matrix: +1 at the from-node and -1 at the to-node."""
    pos = {n: k for k, n in enumerate(nodes)}
    T = np.zeros((len(nodes), len(branches)))
    for e, br in enumerate(branches):
        if br.from_id not in pos or br.to_id not in pos:
            raise GridError(f"branch {br.from_id}-{br.to_id} references an unknown node")
        if br.from_id == br.to_id:
            raise GridError(f"branch {br.from_id}-{br.to_id} is a self-loop")
        T[pos[br.from_id], e] = 1.0
        T[pos[br.to_id], e] = -1.0
    return T


def _components(nodes: Sequence[int], branches: Sequence[Branch]) -> list[list[int]]:
    parent = {n: n for n in nodes}

    def find(n):
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    for br in branches:
        a, b = find(br.from_id), find(br.to_id)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for n in nodes:
        groups.setdefault(find(n), []).append(n)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


@dataclass(frozen=True)
class GridModel:
    """Immutable network description with incidence and PTDF precomputed.

    ``islands`` defaults to the connected components. Passing an explicit
    partition lets a caller declare an island that is meant to be connected;
    ``build_ptdf`` then reports it as singular if it is not.
    """

    nodes: tuple[int, ...]
    branches: tuple[Branch, ...]
    islands: tuple[tuple[int, ...], ...] = ()
    T: np.ndarray = field(init=False, repr=False, compare=False)
    ptdf: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes)))
        object.__setattr__(self, "branches", tuple(self.branches))
        if not self.islands:
            isl = _components(self.nodes, self.branches)
            object.__setattr__(self, "islands", tuple(tuple(g) for g in isl))
        else:
            object.__setattr__(self, "islands", tuple(tuple(sorted(g)) for g in self.islands))
        seen = sorted(n for g in self.islands for n in g)
        if seen != list(self.nodes):
            raise GridError("islands must partition the node set")
        object.__setattr__(self, "T", build_incidence(self.branches, self.nodes))
        object.__setattr__(self, "ptdf", build_ptdf(self))

    @classmethod
    def from_scenario(cls, s) -> "GridModel":
        """Grid over all regions, one island per zone that has branches."""
        islands = []
        for zone in ("western", "eastern"):
            members = [r.id for r in s.regions if r.zone == zone]
            if members:
                islands.append(tuple(members))
        return cls(tuple(s.ids), tuple(s.grid), tuple(islands))

    @property
    def references(self) -> tuple[int, ...]:
        return tuple(g[0] for g in self.islands)

    @property
    def non_reference(self) -> tuple[int, ...]:
        refs = set(self.references)
        return tuple(n for n in self.nodes if n not in refs)

    def island_of(self, node: int) -> int:
        for k, g in enumerate(self.islands):
            if node in g:
                return k
        raise KeyError(node)

    def node_ptdf(self) -> np.ndarray:
        """Branch x node sensitivities, with zero columns at reference nodes."""
        full = np.zeros((len(self.branches), len(self.nodes)))
        pos = {n: k for k, n in enumerate(self.nodes)}
        for k, n in enumerate(self.non_reference):
            full[:, pos[n]] = self.ptdf[:, k]
        return full

    def flows(self, injections: np.ndarray) -> np.ndarray:
        """Branch flows (MW) for injections indexed by ``nodes``; any trailing axes are hours."""
        return self.node_ptdf() @ np.asarray(injections, dtype=float)


def build_ptdf(g: GridModel) -> np.ndarray:
    """Branch x non-reference-node sensitivity matrix ``S_pp``.

    Within each island, the reduced Laplacian ``B_r = T_r diag(b) T_r^T`` is
    inverted; the flow for injection vector ``p`` is ``diag(b) T_r^T B_r^-1 p``.
    """
    nb = len(g.branches)
    pos = {n: k for k, n in enumerate(g.nodes)}
    nonref = [n for n in g.nodes if n not in set(g.references)]
    col = {n: k for k, n in enumerate(nonref)}
    S = np.zeros((nb, len(nonref)))
    b = np.array([br.susceptance for br in g.branches], dtype=float)
    if np.any(b <= 0):
        raise GridError("susceptances must be positive")
    for island in g.islands:
        members = set(island)
        br_idx = [e for e, br in enumerate(g.branches) if br.from_id in members]
        for e in br_idx:
            if g.branches[e].to_id not in members:
                raise GridError(f"branch {g.branches[e].from_id}-{g.branches[e].to_id} joins two islands")
        comps = _components(island, [g.branches[e] for e in br_idx])
        if len(comps) > 1:
            stranded = [n for c in comps if island[0] not in c for n in c]
            raise SingularNetwork(stranded)
        red = list(island[1:])
        if not red:
            continue
        Tr = g.T[np.ix_([pos[n] for n in red], br_idx)]
        B = Tr @ np.diag(b[br_idx]) @ Tr.T
        X = np.linalg.solve(B, np.eye(len(red)))
        S[np.ix_(br_idx, [col[n] for n in red])] = np.diag(b[br_idx]) @ Tr.T @ X
    return S


@dataclass(frozen=True)
class LimitViolation:
    hour: int
    branch: int
    flow: float
    limit: float

    @property
    def excess(self) -> float:
        return abs(self.flow) - abs(self.limit)


@dataclass(frozen=True)
class LimitReport:
    flows: np.ndarray  # branch x hour, MW
    utilization: np.ndarray  # |flow| / applicable cap
    violations: list[LimitViolation]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_limits(g: GridModel, injections: np.ndarray, tol: float = 1e-9) -> LimitReport:
    """Flows and limit violations for hourly injections (nodes x hours).

    Each island's injections must sum to zero in every hour.
    """
    P = np.asarray(injections, dtype=float)
    if P.ndim == 1:
        P = P[:, None]
    if P.shape[0] != len(g.nodes):
        raise GridError(f"need one injection row per node ({len(g.nodes)}), got {P.shape[0]}")
    pos = {n: k for k, n in enumerate(g.nodes)}
    for island in g.islands:
        net = P[[pos[n] for n in island]].sum(axis=0)
        scale = 1.0 + np.abs(P[[pos[n] for n in island]]).sum(axis=0)
        bad = np.flatnonzero(np.abs(net) > tol * scale)
        if bad.size:
            t = int(bad[0])
            raise UnbalancedInjection(
                f"island {list(island)} injections sum to {net[t]:.6g} MW in hour {t}")
    F = g.flows(P)
    cap_f = np.array([br.cap_fwd for br in g.branches])[:, None]
    cap_r = np.array([br.cap_rev for br in g.branches])[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        util = np.where(F >= 0, F / cap_f, -F / cap_r)
    util = np.nan_to_num(util, nan=0.0, posinf=np.inf)
    viol = []
    for e, t in zip(*np.nonzero((F > cap_f + tol) | (F < -cap_r - tol))):
        lim = cap_f[e, 0] if F[e, t] > 0 else -cap_r[e, 0]
        viol.append(LimitViolation(int(t), int(e), float(F[e, t]), float(lim)))
    viol.sort(key=lambda v: (v.hour, v.branch))
    return LimitReport(F, util, viol)
