"""Successive linearisation of concave upper bounds ``E <= a P^2 + b P`` (a <= 0).

The hypograph of a concave function is convex, so every tangent line is a
valid outer cut; iterating LP solve -> tangent cut at the LP point converges
to the true optimum from outside.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np

from .problem import LE, LpProblem
from .simplex import OPTIMAL, LpSolution, SimplexOptions, extend_basis, solve_lp

log = logging.getLogger(__name__)


class _Curve(Protocol):
    a: float
    b: float


@dataclass(frozen=True)
class ConcaveBound:
    """``x[e_var] <= a x[p_var]^2 + b x[p_var]`` with ``a <= 0``."""

    e_var: int
    p_var: int
    curve: _Curve
    name: str = ""

    def value(self, p: float) -> float:
        return self.curve.a * p * p + self.curve.b * p

    def tangent(self, p_star: float) -> tuple[float, float]:
        """Slope and intercept of the tangent at ``p_star``."""
        slope = 2.0 * self.curve.a * p_star + self.curve.b
        return slope, -self.curve.a * p_star * p_star


@dataclass(frozen=True)
class Cut:
    iteration: int
    bound: int
    p_star: float
    slope: float
    intercept: float
    violation: float


@dataclass
class SlpResult:
    solution: LpSolution
    problem: LpProblem
    converged: bool
    iterations: int
    max_violation: float
    cuts: list[Cut] = field(default_factory=list)
    lp_pivots: int = 0
    projected: bool = False

    @property
    def status(self) -> str:
        return self.solution.status


def _cut_row(n: int, bound: ConcaveBound, p_star: float) -> tuple[np.ndarray, float]:
    slope, intercept = bound.tangent(p_star)
    row = np.zeros(n)
    row[bound.e_var] = 1.0
    row[bound.p_var] = -slope
    return row, intercept


def violations(x: np.ndarray, bounds: Sequence[ConcaveBound]) -> np.ndarray:
    """Relative violation of each bound at ``x`` (<= 0 means satisfied)."""
    out = np.empty(len(bounds))
    for k, bd in enumerate(bounds):
        f = bd.value(x[bd.p_var])
        out[k] = (x[bd.e_var] - f) / max(1.0, abs(f))
    return out


def _project(p: LpProblem, x: np.ndarray, bounds: Sequence[ConcaveBound],
             tol: float) -> np.ndarray | None:
    """Raise each violated capacity to the curve root; None if rows break."""
    y = x.copy()
    for bd in bounds:
        e, pv = y[bd.e_var], y[bd.p_var]
        if e <= bd.value(pv):
            continue
        a, b = bd.curve.a, bd.curve.b
        if a == 0.0:
            root = e / b
        else:
            disc = b * b + 4.0 * a * e
            if disc < 0:
                return None
            root = (-b + np.sqrt(disc)) / (2.0 * a)
        if root > p.upper[bd.p_var] + tol:
            return None
        y[bd.p_var] = min(max(root, pv), p.upper[bd.p_var])
    act = p.A @ y
    lo, hi = p.row_bounds()
    scale = 1.0 + np.abs(p.rhs)
    if np.any(act < lo - tol * scale) or np.any(act > hi + tol * scale):
        return None
    return y


def slp_solve(base: LpProblem, bounds: Sequence[ConcaveBound], tol: float = 1e-6,
              max_iter: int = 50, options: SimplexOptions | None = None) -> SlpResult:
    """Minimise ``base`` subject additionally to the concave bounds.

    The origin tangent ``E <= b P`` of every bound seeds the outer
    approximation; it is not counted as a cut. Stops when every relative
    violation is below ``tol`` or after ``max_iter`` LP solves, in which case
    the best iterate that stays feasible after projecting capacities onto the
    curves is returned with ``converged=False``.
    """
    for bd in bounds:
        if bd.curve.a > 0:
            raise ValueError(f"bound {bd.name or bd.e_var} is not concave (a > 0)")
    n = base.n
    seed = [_cut_row(n, bd, 0.0) for bd in bounds]
    problem = base.with_rows(
        [r for r, _ in seed], [LE] * len(seed), [c for _, c in seed],
        [f"seed_{bd.name or k}" for k, bd in enumerate(bounds)],
    ) if bounds else base
    sol = solve_lp(problem, options)
    pivots = sol.iterations
    cuts: list[Cut] = []
    best: tuple[float, np.ndarray] | None = None
    viol = np.zeros(0)
    for it in range(1, max_iter + 1):
        if sol.status != OPTIMAL:
            return SlpResult(sol, problem, False, it, np.nan, cuts, pivots)
        viol = violations(sol.x, bounds)
        worst = float(viol.max(initial=0.0))
        log.debug("slp iteration %d: objective %.10g, max violation %.3e", it, sol.objective, worst)
        if worst <= tol:
            return SlpResult(sol, problem, True, it, max(worst, 0.0), cuts, pivots)
        proj = _project(problem, sol.x, bounds, 1e-7)
        if proj is not None:
            obj = float(base.c @ proj)
            if best is None or obj < best[0]:
                best = (obj, proj)
        if it == max_iter:
            break
        rows, rhs, names = [], [], []
        for k, bd in enumerate(bounds):
            if viol[k] > tol:
                p_star = float(sol.x[bd.p_var])
                row, c = _cut_row(n, bd, p_star)
                slope, _ = bd.tangent(p_star)
                rows.append(row)
                rhs.append(c)
                names.append(f"cut{it}_{bd.name or k}")
                cuts.append(Cut(it, k, p_star, slope, c, float(viol[k])))
        old_m = problem.m
        problem = problem.with_rows(np.array(rows), [LE] * len(rows), rhs, names)
        warm = extend_basis(sol.basis, n, old_m, len(rows)) if sol.basis else None
        sol = solve_lp(problem, options, warm_start=warm)
        pivots += sol.iterations
    log.warning("successive linearisation hit the iteration cap (%d)", max_iter)
    if best is not None:
        x = best[1]
        projected = LpSolution(OPTIMAL, x, float(base.c @ x), sol.duals, sol.reduced_costs,
                               sol.iterations, sol.basis)
        return SlpResult(projected, problem, False, max_iter, 0.0, cuts, pivots, projected=True)
    return SlpResult(sol, problem, False, max_iter, float(viol.max(initial=0.0)), cuts, pivots)
