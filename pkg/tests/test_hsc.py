from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wtaplan.data_io import EconomicParams
from wtaplan.hsc import (HscError, HscModel, InfeasiblePath, adjacency_from_distances,
                         feasible_paths, shortest_paths, storage_capacity, transport_cost_basis,
                         utilization)


def brute_force_distances(nodes, links):
    """Shortest distances by enumerating every simple path (fine for <= 6 nodes)."""
    adj = {n: [] for n in nodes}
    for a, b, w in links:
        adj[a].append((b, w))
        adj[b].append((a, w))
    best = {(i, j): (0.0 if i == j else np.inf) for i in nodes for j in nodes}

    def walk(start, cur, length, seen):
        if length < best[(start, cur)]:
            best[(start, cur)] = length
        for nxt, w in adj[cur]:
            if nxt not in seen:
                walk(start, nxt, length + w, seen | {nxt})

    for s in nodes:
        walk(s, s, 0.0, {s})
    return np.array([[best[(i, j)] for j in nodes] for i in nodes])


def random_links(rng, n, p=0.5):
    return [(a, b, float(rng.integers(10, 400))) for a in range(1, n + 1)
            for b in range(a + 1, n + 1) if rng.random() < p]


@pytest.mark.parametrize("seed", range(40))
def test_distances_match_path_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    links = random_links(rng, n)
    nodes = list(range(1, n + 1))
    D, routes = shortest_paths(nodes, links)
    assert np.array_equal(D, brute_force_distances(nodes, links))
    w = {}
    for a, b, x in links:
        w[(a, b)] = w[(b, a)] = min(x, w.get((a, b), np.inf))
    for (i, j), r in routes.items():
        assert r[0] == i and r[-1] == j
        assert sum(w[(u, v)] for u, v in zip(r[:-1], r[1:])) == pytest.approx(D[i - 1, j - 1])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 7))
def test_routes_invariant_under_link_order(seed, n):
    rng = np.random.default_rng(seed)
    links = random_links(rng, n, 0.6)
    nodes = list(range(1, n + 1))
    D1, r1 = shortest_paths(nodes, links)
    D2, r2 = shortest_paths(nodes, [links[k] for k in rng.permutation(len(links))])
    assert np.array_equal(D1, D2) and r1 == r2


def test_single_region_and_negative_link():
    D, routes = shortest_paths([5], [])
    assert D.tolist() == [[0.0]] and routes == {}
    with pytest.raises(HscError):
        shortest_paths([1, 2], [(1, 2, -3.0)])


def test_table_reproduced_from_derived_links(bundled):
    links = adjacency_from_distances(bundled.ids, bundled.distances)
    assert len(links) == 18
    D, _ = shortest_paths(bundled.ids, links)
    assert np.array_equal(D, bundled.distances)
    hm = HscModel.from_scenario(bundled)
    assert (hm.distance(1, 2), hm.distance(3, 12), hm.distance(8, 12)) == (186, 156, 310)


def test_region_one_suppliers_and_routes(bundled):
    hm = HscModel.from_scenario(bundled)
    assert hm.suppliers(1) == [2, 6, 8, 9]
    assert hm.distance(11, 1) == 723 and not hm.is_feasible(11, 1)
    assert hm.routes[(3, 12)] == (3, 12)
    assert hm.routes[(8, 12)] == (8, 3, 12)
    col = hm.paths.index((3, 12))
    used = [hm.links[e][:2] for e in np.flatnonzero(hm.T_H[:, col])]
    assert used == [(3, 12)]
    assert hm.distance(3, 12) < hm.distance(3, 8) + hm.distance(8, 12)


def test_feasible_path_extremes(bundled):
    assert feasible_paths(bundled.ids, bundled.distances, 0.0) == []
    n = len(bundled.ids)
    assert len(feasible_paths(bundled.ids, bundled.distances, np.inf)) == n * (n - 1)


def test_path_incidence_preserves_ton_km(bundled):
    hm = HscModel.from_scenario(bundled)
    rng = np.random.default_rng(3)
    flows = {p: float(rng.uniform(0, 100)) for p in hm.paths}
    link_km = np.array([w for _, _, w in hm.links])
    path_km = sum(h * hm.distance(*p) for p, h in flows.items())
    assert link_km @ hm.link_flows(flows) == pytest.approx(path_km, rel=1e-12)
    with pytest.raises(InfeasiblePath):
        hm.link_flows({(11, 1): 5.0})


def test_storage_capacity():
    assert storage_capacity({(8, 1): 488_000.0, (8, 12): 410.0}) == {8: 488_410.0}
    assert storage_capacity({(2, 1): 0.0}) == {2: 0.0}
    assert storage_capacity({(2, 1): 100.0, (2, 6): 50.0}) == {2: 150.0}
    with pytest.raises(InfeasiblePath):
        storage_capacity({(11, 1): 1.0}, feasible=[(2, 1)])


def test_transport_cost_anchors():
    e = EconomicParams.defaults()
    assert Fraction(e.c_diesel) == Fraction(42, 430000)
    c = transport_cost_basis(1000.0, 310.0, e)
    assert c.diesel == pytest.approx(30.279, abs=5e-4)
    zero = transport_cost_basis(0.0, 310.0, e)
    assert zero.total == 0.0
    assert utilization(250) == 1.0
    assert utilization(400) == pytest.approx(1.6)
    with pytest.raises(InfeasiblePath):
        transport_cost_basis(1.0, 600.0, e, d_max=500.0)


def test_truck_capital_grows_with_distance():
    e = EconomicParams.defaults()
    near = transport_cost_basis(1000.0, 200.0, e)
    far = transport_cost_basis(1000.0, 450.0, e)
    assert far.truck == pytest.approx(near.truck * utilization(450.0))
