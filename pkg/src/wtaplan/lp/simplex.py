"""Dense bounded-variable revised simplex.

Every row ``i`` gets a logical variable ``s_i = a_i @ x`` whose bounds carry
the row sense, so the working system is ``[A, -I] @ [x; s] = 0`` and the
all-logical basis is always available as a cold start. Phase 1 minimises the
sum of bound infeasibilities of the basic variables; phase 2 the true cost.
Pricing is Dantzig (largest reduced cost, lowest index on ties) with a switch
to Bland's rule after a run of degenerate pivots.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .problem import LpProblem

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_BASIC, _AT_LO, _AT_HI, _FREE = 0, 1, 2, 3


class LpError(RuntimeError):
    """Numerical breakdown or iteration limit; never a silent wrong answer."""


@dataclass(frozen=True)
class SimplexOptions:
    feas_tol: float = 1e-9
    opt_tol: float = 1e-9
    pivot_tol: float = 1e-9
    refactor_every: int = 50
    bland_after: int = 100
    max_iter: int | None = None


@dataclass(frozen=True)
class Basis:
    """Basic column indices (structural first, then logicals) and the
    nonbasic position of every column."""

    basic: tuple[int, ...]
    status: tuple[int, ...]


@dataclass
class LpSolution:
    status: str
    x: np.ndarray
    objective: float
    duals: np.ndarray
    reduced_costs: np.ndarray
    iterations: int
    basis: Basis | None = None
    pivots: list[tuple[int, int]] = field(default_factory=list, repr=False)


class _Tableau:
    def __init__(self, p: LpProblem, opts: SimplexOptions):
        self.p = p
        self.opts = opts
        m, n = p.m, p.n
        self.m, self.n = m, n
        self.A = p.A
        self.M = np.hstack([p.A, -np.eye(m)])
        rlo, rhi = p.row_bounds()
        self.lo = np.concatenate([p.lower, rlo])
        self.hi = np.concatenate([p.upper, rhi])
        self.cost = np.concatenate([p.c, np.zeros(m)])
        self.x = np.zeros(n + m)
        self.status = np.empty(n + m, dtype=np.int8)
        self.basis = np.arange(n, n + m)
        self.Binv = -np.eye(m)
        self.since_refactor = 0

    def _park(self, j: int) -> None:
        lo, hi = self.lo[j], self.hi[j]
        if np.isfinite(lo):
            self.status[j], self.x[j] = _AT_LO, lo
        elif np.isfinite(hi):
            self.status[j], self.x[j] = _AT_HI, hi
        else:
            self.status[j], self.x[j] = _FREE, 0.0

    def start(self, warm: Basis | None) -> None:
        total = self.n + self.m
        if warm is not None and len(warm.status) == total and len(warm.basic) == self.m:
            self.basis = np.array(warm.basic, dtype=int)
            for j in range(total):
                self._park(j)
                st = warm.status[j]
                if st == _AT_HI and np.isfinite(self.hi[j]):
                    self.status[j], self.x[j] = _AT_HI, self.hi[j]
            self.status[self.basis] = _BASIC
            if len(set(warm.basic)) == self.m and self.refactor(strict=False):
                return
            log.debug("warm basis rejected, cold start")
        for j in range(total):
            self._park(j)
        self.basis = np.arange(self.n, total)
        self.status[self.basis] = _BASIC
        self.Binv = -np.eye(self.m)
        self._recompute_xb()

    def _reduced(self, cost: np.ndarray, y: np.ndarray) -> np.ndarray:
        # logical columns are -I, so their reduced cost is cost + y
        return np.concatenate([cost[: self.n] - y @ self.A, cost[self.n:] + y])

    def _ftran(self, q: int) -> np.ndarray:
        if q < self.n:
            return self.Binv @ self.A[:, q]
        return -self.Binv[:, q - self.n]

    def _recompute_xb(self) -> None:
        nonbasic = self.status != _BASIC
        rhs = -(self.M[:, nonbasic] @ self.x[nonbasic])
        self.x[self.basis] = self.Binv @ rhs

    def refactor(self, strict: bool = True) -> bool:
        B = self.M[:, self.basis]
        try:
            Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            if strict:
                raise LpError("singular basis at refactorization")
            return False
        resid = np.abs(Binv @ B - np.eye(self.m)).max() if self.m else 0.0
        if not np.isfinite(resid) or resid > 1e-6:
            if strict:
                raise LpError(f"basis ill-conditioned (inverse residual {resid:.2e})")
            return False
        self.Binv = Binv
        self.since_refactor = 0
        self._recompute_xb()
        return True

    def infeasibility(self) -> tuple[np.ndarray, float]:
        xb = self.x[self.basis]
        lo, hi = self.lo[self.basis], self.hi[self.basis]
        tol = self.opts.feas_tol
        below = xb < lo - tol
        above = xb > hi + tol
        cb = np.zeros(self.m)
        cb[below] = -1.0
        cb[above] = 1.0
        total = float(np.sum((lo - xb)[below]) + np.sum((xb - hi)[above]))
        return cb, total

    def run(self, phase: int, it0: int, max_iter: int, pivots: list) -> tuple[str, int]:
        opts = self.opts
        it = it0
        degenerate = 0
        bland = False
        while True:
            if phase == 1:
                cb, infeas = self.infeasibility()
                if infeas == 0.0:
                    return OPTIMAL, it
                cost_n = np.zeros(self.n + self.m)
            else:
                cb = self.cost[self.basis]
                cost_n = self.cost
            y = cb @ self.Binv
            d = self._reduced(cost_n, y)
            st = self.status
            movable = self.lo < self.hi
            elig = movable & (
                ((st == _AT_LO) & (d < -opts.opt_tol))
                | ((st == _AT_HI) & (d > opts.opt_tol))
                | ((st == _FREE) & (np.abs(d) > opts.opt_tol))
            )
            if not elig.any():
                if phase == 1:
                    return INFEASIBLE, it
                return OPTIMAL, it
            if it >= max_iter:
                raise LpError(f"iteration limit {max_iter} reached")
            cand = np.flatnonzero(elig)
            if bland:
                q = int(cand[0])
            else:
                q = int(cand[np.argmax(np.abs(d[cand]))])
            direction = 1.0 if d[q] < 0 else -1.0
            alpha = self._ftran(q)
            rate = -direction * alpha
            r, theta, leave_at = self._ratio(rate, phase, bland)
            flip = self.hi[q] - self.lo[q]
            if r < 0 and not np.isfinite(flip):
                if phase == 1:
                    raise LpError("phase 1 ray without breakpoint")
                return UNBOUNDED, it
            it += 1
            if r < 0 or flip <= theta:
                theta = flip
                self.x[self.basis] += rate * theta
                if st[q] == _AT_LO:
                    st[q], self.x[q] = _AT_HI, self.hi[q]
                else:
                    st[q], self.x[q] = _AT_LO, self.lo[q]
                pivots.append((q, -1))
            else:
                self.x[self.basis] += rate * theta
                self.x[q] += direction * theta
                leaving = int(self.basis[r])
                st[leaving] = leave_at
                self.x[leaving] = self.lo[leaving] if leave_at == _AT_LO else self.hi[leaving]
                piv = alpha[r]
                if abs(piv) < opts.pivot_tol:
                    raise LpError(f"pivot element {piv:.2e} below tolerance")
                row = self.Binv[r] / piv
                self.Binv -= np.outer(alpha, row)
                self.Binv[r] = row
                self.basis[r] = q
                st[q] = _BASIC
                pivots.append((q, leaving))
                self.since_refactor += 1
                if self.since_refactor >= opts.refactor_every:
                    self.refactor()
            if theta <= 1e-12:
                degenerate += 1
                if degenerate >= opts.bland_after and not bland:
                    log.debug("switching to Bland's rule after %d degenerate pivots", degenerate)
                    bland = True
            else:
                degenerate = 0
                bland = False

    def _ratio(self, rate: np.ndarray, phase: int, bland: bool) -> tuple[int, float, int]:
        """Two-pass (Harris) ratio test. Returns (row, step, leave status); row -1 if none."""
        tol = self.opts.feas_tol
        ptol = self.opts.pivot_tol
        xb = self.x[self.basis]
        lo, hi = self.lo[self.basis], self.hi[self.basis]
        limit = np.full(self.m, np.inf)
        relaxed = np.full(self.m, np.inf)
        target = np.zeros(self.m, dtype=np.int8)
        dec = rate < -ptol
        inc = rate > ptol
        below = xb < lo - tol
        above = xb > hi + tol
        # decreasing basics: stop at hi if currently above it, else at lo
        m1 = dec & above
        limit[m1] = (xb[m1] - hi[m1]) / -rate[m1]
        relaxed[m1] = (xb[m1] - hi[m1] + tol) / -rate[m1]
        target[m1] = _AT_HI
        m2 = dec & ~above & ~below & np.isfinite(lo)
        limit[m2] = (xb[m2] - lo[m2]) / -rate[m2]
        relaxed[m2] = (xb[m2] - lo[m2] + tol) / -rate[m2]
        target[m2] = _AT_LO
        m3 = inc & below
        limit[m3] = (lo[m3] - xb[m3]) / rate[m3]
        relaxed[m3] = (lo[m3] - xb[m3] + tol) / rate[m3]
        target[m3] = _AT_LO
        m4 = inc & ~above & ~below & np.isfinite(hi)
        limit[m4] = (hi[m4] - xb[m4]) / rate[m4]
        relaxed[m4] = (hi[m4] - xb[m4] + tol) / rate[m4]
        target[m4] = _AT_HI
        finite = np.isfinite(limit)
        if not finite.any():
            return -1, np.inf, 0
        limit = np.maximum(limit, 0.0)
        bound = relaxed.min()
        cand = np.flatnonzero(finite & (limit <= bound))
        if bland:
            # smallest column index among minimal-step rows
            tmin = limit[cand].min()
            ties = cand[limit[cand] <= tmin + 1e-12]
            r = int(ties[np.argmin(self.basis[ties])])
        else:
            r = int(cand[np.argmax(np.abs(rate[cand]))])
        return r, float(limit[r]), int(target[r])


def solve_lp(p: LpProblem, options: SimplexOptions | None = None,
             warm_start: Basis | None = None, record_pivots: bool = False) -> LpSolution:
    """Solve ``p`` to optimality, or report it infeasible or unbounded.

    Raises LpError on numerical breakdown or when the iteration limit is hit.
    """
    opts = options or SimplexOptions()
    tab = _Tableau(p, opts)
    tab.start(warm_start)
    max_iter = opts.max_iter or 50 * (p.m + p.n) + 1000
    pivots: list[tuple[int, int]] = []
    status, it = tab.run(1, 0, max_iter, pivots)
    if status == OPTIMAL:
        tab.refactor()
        _, infeas = tab.infeasibility()
        if infeas > 0.0:
            status, it = tab.run(1, it, max_iter, pivots)
    if status == OPTIMAL:
        status, it = tab.run(2, it, max_iter, pivots)
        if status == OPTIMAL:
            tab.refactor()
            # drift after refactor can reopen a tiny infeasibility or reduced cost
            _, infeas = tab.infeasibility()
            if infeas > 0.0:
                status, it = tab.run(1, it, max_iter, pivots)
                if status == OPTIMAL:
                    status, it = tab.run(2, it, max_iter, pivots)
                    tab.refactor()
    n = p.n
    x = tab.x[:n].copy()
    if status == OPTIMAL:
        y = tab.cost[tab.basis] @ tab.Binv
        d = tab._reduced(tab.cost, y)
        obj = float(p.c @ x)
    else:
        y = np.full(p.m, np.nan)
        d = np.full(n + p.m, np.nan)
        obj = np.nan if status == INFEASIBLE else -np.inf
    basis = Basis(tuple(int(b) for b in tab.basis), tuple(int(s) for s in tab.status))
    return LpSolution(
        status=status,
        x=x,
        objective=obj,
        duals=np.asarray(y, dtype=float),
        reduced_costs=np.asarray(d[:n], dtype=float),
        iterations=it,
        basis=basis,
        pivots=pivots if record_pivots else [],
    )


def extend_basis(basis: Basis, n: int, old_m: int, new_rows: int) -> Basis:
    """Warm basis for the same problem with ``new_rows`` rows appended: the
    new logicals enter as basic."""
    status = list(basis.status[: n + old_m]) + [_BASIC] * new_rows
    basic = list(basis.basic) + list(range(n + old_m, n + old_m + new_rows))
    return Basis(tuple(basic), tuple(status))
