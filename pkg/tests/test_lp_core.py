from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from wtaplan.lp import (EQ, GE, INFEASIBLE, LE, OPTIMAL, UNBOUNDED, ConcaveBound, LpBuilder,
                        LpError, LpProblem, SimplexOptions, lp_dumps, slp_solve, solve_lp,
                        verify_kkt)
from wtaplan.wind import PotentialCurve, min_capacity

R8 = PotentialCurve(-6.34e-05, 11.44, 2655.0)


def random_lp(rng, bounded=True):
    n, m = int(rng.integers(1, 7)), int(rng.integers(1, 7))
    A = rng.normal(size=(m, n)).round(2)
    sense = tuple(rng.choice([LE, EQ, GE], size=m, p=[0.45, 0.1, 0.45]))
    rhs = rng.normal(size=m).round(2)
    lo = rng.uniform(-3, 0, n).round(1)
    hi = lo + rng.uniform(0.1, 4, n).round(1)
    if not bounded:
        lo = np.where(rng.random(n) < 0.3, -np.inf, lo)
        hi = np.where(rng.random(n) < 0.5, np.inf, hi)
    return LpProblem(rng.normal(size=n).round(2), A, sense, rhs, lo, hi)


def vertex_oracle(p: LpProblem, tol=1e-9):
    """Best objective over all basic solutions of a box-bounded LP, or None if infeasible."""
    n = p.n
    G = np.vstack([p.A, np.eye(n), np.eye(n)])
    h = np.concatenate([p.rhs, p.lower, p.upper])
    combos = np.array(list(itertools.combinations(range(G.shape[0]), n)))
    M = G[combos]
    ok = np.abs(np.linalg.det(M)) > 1e-10
    X = np.linalg.solve(M[ok], h[combos[ok]][..., None])[..., 0]
    act = X @ p.A.T
    feas = np.all((X >= p.lower - tol) & (X <= p.upper + tol), axis=1)
    for i, s in enumerate(p.sense):
        if s == LE:
            feas &= act[:, i] <= p.rhs[i] + tol
        elif s == GE:
            feas &= act[:, i] >= p.rhs[i] - tol
        else:
            feas &= np.abs(act[:, i] - p.rhs[i]) <= tol
    if not feas.any():
        return None
    return float((X[feas] @ p.c).min())


def highs(p: LpProblem):
    ub = [(p.A[i], p.rhs[i]) if s == LE else (-p.A[i], -p.rhs[i]) for i, s in enumerate(p.sense) if s != EQ]
    eq = [(p.A[i], p.rhs[i]) for i, s in enumerate(p.sense) if s == EQ]
    r = linprog(p.c, A_ub=np.array([a for a, _ in ub]) if ub else None, b_ub=[b for _, b in ub] or None,
                A_eq=np.array([a for a, _ in eq]) if eq else None, b_eq=[b for _, b in eq] or None,
                bounds=list(zip(p.lower, p.upper)), method="highs",
                options={"presolve": False})  # presolve can report unbounded models as infeasible
    return {0: OPTIMAL, 2: INFEASIBLE, 3: UNBOUNDED}[r.status], r.fun


def test_trivial_max():
    p = LpProblem(np.array([-1.0, -1.0]), np.eye(2), (LE, LE), np.array([1.0, 2.0]),
                  np.zeros(2), np.full(2, np.inf))
    s = solve_lp(p)
    assert s.status == OPTIMAL and s.objective == pytest.approx(-3.0)
    assert s.x == pytest.approx([1.0, 2.0])


def test_trivial_infeasible():
    p = LpProblem(np.array([1.0]), np.array([[1.0], [1.0]]), (GE, LE), np.array([1.0, 0.0]),
                  np.array([-np.inf]), np.array([np.inf]))
    assert solve_lp(p).status == INFEASIBLE


def test_unbounded():
    p = LpProblem(np.array([-1.0]), np.array([[1.0]]), (GE,), np.array([0.0]),
                  np.array([0.0]), np.array([np.inf]))
    assert solve_lp(p).status == UNBOUNDED


@pytest.mark.parametrize("seed", range(250))
def test_random_lp_against_vertex_enumeration(seed):
    p = random_lp(np.random.default_rng(seed))
    s = solve_lp(p)
    best = vertex_oracle(p)
    if best is None:
        assert s.status == INFEASIBLE
        return
    assert s.status == OPTIMAL
    assert s.objective == pytest.approx(best, abs=1e-8)
    assert verify_kkt(p, s.x, s.duals, tol=1e-7).ok


@pytest.mark.parametrize("seed", range(300, 500))
def test_random_lp_against_highs(seed):
    p = random_lp(np.random.default_rng(seed), bounded=False)
    s = solve_lp(p)
    status, obj = highs(p)
    assert s.status == status
    if status == OPTIMAL:
        assert s.objective == pytest.approx(obj, abs=1e-7)
        assert verify_kkt(p, s.x, s.duals, tol=1e-7).ok


def test_kkt_rejects_wrong_point():
    p = random_lp(np.random.default_rng(7))
    s = solve_lp(p)
    assert s.status == OPTIMAL
    bad = s.x + 0.5
    assert not verify_kkt(p, bad, s.duals, tol=1e-7).ok


def test_deterministic_pivots():
    p = random_lp(np.random.default_rng(11))
    a = solve_lp(p, record_pivots=True)
    b = solve_lp(p, record_pivots=True)
    assert a.pivots == b.pivots and np.array_equal(a.x, b.x)


def test_iteration_limit_raises():
    rng = np.random.default_rng(5)
    for _ in range(50):
        p = random_lp(rng)
        if solve_lp(p).iterations > 1:
            break
    with pytest.raises(LpError):
        solve_lp(p, SimplexOptions(max_iter=1))


def test_lp_dump_names_everything():
    b = LpBuilder()
    x = b.add_var("x[1]", cost=1.0)
    y = b.add_var("y", upper=4.0)
    b.add_row({x: 1.0, y: 1.0}, GE, 2.0, "demand")
    text = lp_dumps(b.build())
    assert "demand" in text and "x_1_" in text.replace("[", "_").replace("]", "_")


# -- successive linearisation ------------------------------------------------

def single_region(curve, E0):
    b = LpBuilder()
    P = b.add_var("P", upper=curve.p_max, cost=1.0)
    E = b.add_var("E", lower=E0, upper=E0)
    return b.build(), [ConcaveBound(E, P, curve, "r")]


def test_region_eight_capacity():
    p, bounds = single_region(R8, 26862.0)
    res = slp_solve(p, bounds)
    assert res.converged
    P = res.solution.x[0]
    assert P == pytest.approx(min_capacity(R8, 26862.0), rel=1e-6)
    assert P == pytest.approx(2385, rel=0.01)


def test_linear_curve_needs_no_cuts():
    res = slp_solve(*single_region(PotentialCurve(0.0, 11.0, 100.0), 550.0))
    assert res.converged and res.iterations == 1 and not res.cuts
    assert res.solution.x[0] == pytest.approx(50.0)


def concave_instance(rng):
    """Sources with concave potentials serving one demand; turbine and energy costs differ."""
    k = int(rng.integers(1, 4))
    b = LpBuilder()
    bounds, curves, energies = [], [], []
    for i in range(k):
        bb = float(rng.uniform(8, 14))
        p_max = float(rng.uniform(50, 2000))
        c = PotentialCurve(-float(rng.uniform(0.05, 0.9)) * bb / (2 * p_max), bb, p_max)
        P = b.add_var(f"P{i}", upper=p_max, cost=float(rng.uniform(0.5, 2.0)))
        E = b.add_var(f"E{i}", cost=float(rng.uniform(0.0, 0.05)))
        bounds.append(ConcaveBound(E, P, c, f"s{i}"))
        curves.append(c)
        energies.append(E)
    cap = sum(c.e_max for c in curves)
    b.add_row({E: 1.0 for E in energies}, GE, float(rng.uniform(0.1, 0.9)) * cap, "demand")
    return b, bounds, curves


def pwl_oracle(b: LpBuilder, bounds, curves, pieces=1000):
    """Inner approximation: E <= chord of each of 1000 segments, solved by HiGHS."""
    p = b.build()
    rows, rhs = [], []
    for bd, c in zip(bounds, curves):
        x = np.linspace(0, c.p_max, pieces + 1)
        y = c.a * x ** 2 + c.b * x
        slope = np.diff(y) / np.diff(x)
        icpt = y[:-1] - slope * x[:-1]
        for s, q in zip(slope, icpt):
            r = np.zeros(p.n)
            r[bd.e_var], r[bd.p_var] = 1.0, -s
            rows.append(r)
            rhs.append(q)
    A_ub = np.vstack([np.array(rows), -p.A])
    b_ub = np.concatenate([rhs, -p.rhs])
    res = linprog(p.c, A_ub=A_ub, b_ub=b_ub, bounds=list(zip(p.lower, p.upper)), method="highs")
    assert res.status == 0
    return res.fun


@pytest.mark.parametrize("seed", range(60))
def test_slp_matches_piecewise_linear_oracle(seed):
    b, bounds, curves = concave_instance(np.random.default_rng(seed))
    res = slp_solve(b.build(), bounds)
    assert res.converged
    oracle = pwl_oracle(b, bounds, curves)
    assert res.solution.objective == pytest.approx(oracle, rel=1e-3)
    assert res.solution.objective <= oracle * (1 + 1e-9) + 1e-9  # outer approximation is never worse


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_tangent_cuts_never_cut_feasible_points(u, v, w):
    c = R8
    bd = ConcaveBound(1, 0, c)
    p_star, P = u * c.p_max, v * c.p_max
    E = w * (c.a * P * P + c.b * P)  # any point under the curve
    slope, icpt = bd.tangent(p_star)
    assert E <= slope * P + icpt + 1e-9 * (1 + abs(E))


def test_iteration_cap_returns_projected_point():
    b, bounds, curves = concave_instance(np.random.default_rng(3))
    res = slp_solve(b.build(), bounds, tol=1e-14, max_iter=2)
    assert not res.converged
    x = res.solution.x
    for bd in bounds:
        assert x[bd.e_var] <= bd.value(x[bd.p_var]) * (1 + 1e-9) + 1e-9


def test_rejects_convex_curve():
    p, bounds = single_region(PotentialCurve(0.1, 1.0, 10.0), 5.0)
    with pytest.raises(ValueError):
        slp_solve(p, bounds)
