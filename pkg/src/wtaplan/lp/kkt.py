"""Post-hoc optimality certificate check for LP solutions.

Works only from the problem data and the reported primal/dual vectors; it
recomputes reduced costs itself and never looks at solver internals.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problem import EQ, GE, LE, LpProblem


@dataclass(frozen=True)
class KktReport:
    primal_residual: float
    dual_residual: float
    complementarity: float
    tol: float

    @property
    def ok(self) -> bool:
        return max(self.primal_residual, self.dual_residual, self.complementarity) <= self.tol

    def __str__(self) -> str:
        flag = "ok" if self.ok else "FAILED"
        return (f"KKT {flag}: primal {self.primal_residual:.2e}, dual {self.dual_residual:.2e}, "
                f"compl. {self.complementarity:.2e} (tol {self.tol:.0e})")


def verify_kkt(p: LpProblem, x: np.ndarray, y: np.ndarray, tol: float = 1e-7,
               scaled: bool = False) -> KktReport:
    """Check primal feasibility, dual sign feasibility and complementary slackness.

    Sign convention (minimisation): ``c = A.T @ y + d``; ``y >= 0`` on ``>=`` rows,
    ``y <= 0`` on ``<=`` rows; ``d >= 0`` where ``x`` can increase only,
    ``d <= 0`` where it can decrease only, ``d = 0`` strictly inside its bounds.

    With ``scaled=True`` residuals are divided by ``1 + |magnitude|`` of the
    quantities they compare, for problems in large physical units.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    act = p.A @ x
    sense = np.array(p.sense)
    rscale = 1.0 + np.abs(p.rhs) if scaled else np.ones(p.m)
    xscale_lo = 1.0 + np.abs(np.where(np.isfinite(p.lower), p.lower, 0.0)) if scaled else 1.0
    xscale_hi = 1.0 + np.abs(np.where(np.isfinite(p.upper), p.upper, 0.0)) if scaled else 1.0

    row_viol = np.zeros(p.m)
    le = sense == LE
    ge = sense == GE
    eq = sense == EQ
    row_viol[le] = np.maximum(act[le] - p.rhs[le], 0.0)
    row_viol[ge] = np.maximum(p.rhs[ge] - act[ge], 0.0)
    row_viol[eq] = np.abs(act[eq] - p.rhs[eq])
    row_viol /= rscale
    lo_viol = np.where(np.isfinite(p.lower), np.maximum(p.lower - x, 0.0), 0.0) / xscale_lo
    hi_viol = np.where(np.isfinite(p.upper), np.maximum(x - p.upper, 0.0), 0.0) / xscale_hi
    primal = float(max(row_viol.max(initial=0.0), lo_viol.max(initial=0.0), hi_viol.max(initial=0.0)))

    d = p.c - p.A.T @ y
    cscale = 1.0 + np.abs(p.c) if scaled else np.ones(p.n)
    dual_sign = np.zeros(p.m)
    dual_sign[ge] = np.maximum(-y[ge], 0.0)
    dual_sign[le] = np.maximum(y[le], 0.0)
    # a variable strictly above its lower bound cannot have d > 0, etc.
    gap_lo = x - p.lower
    gap_hi = p.upper - x
    slack_tol = tol * (1.0 + np.abs(x)) if scaled else tol
    can_dec = gap_lo > slack_tol
    can_inc = gap_hi > slack_tol
    d_viol = np.zeros(p.n)
    d_viol = np.where(can_dec, np.maximum(d, 0.0), d_viol)
    d_viol = np.maximum(d_viol, np.where(can_inc, np.maximum(-d, 0.0), 0.0))
    d_viol /= cscale
    dual = float(max(dual_sign.max(initial=0.0), d_viol.max(initial=0.0)))

    slack = np.where(eq, 0.0, act - p.rhs)
    comp_rows = np.abs(y * slack) / (rscale * (1.0 + np.abs(y)) if scaled else 1.0)
    dpos, dneg = np.maximum(d, 0.0), np.maximum(-d, 0.0)
    # an infinite gap with a non-zero reduced cost is a dual-sign failure, counted above
    with np.errstate(invalid="ignore"):
        comp_vars = (np.where((dpos > 0) & np.isfinite(gap_lo), dpos * gap_lo, 0.0)
                     + np.where((dneg > 0) & np.isfinite(gap_hi), dneg * gap_hi, 0.0))
    if scaled:
        comp_vars = comp_vars / (cscale * (1.0 + np.abs(x)))
    compl = float(max(comp_rows.max(initial=0.0), comp_vars.max(initial=0.0)))
    return KktReport(primal, dual, compl, tol)
