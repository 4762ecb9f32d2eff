"""LP core: bounded revised simplex, KKT verification, successive linearisation."""
from .kkt import KktReport, verify_kkt
from .lpfile import dumps as lp_dumps, write_lp
from .problem import EQ, GE, LE, LpBuilder, LpProblem
from .simplex import (INFEASIBLE, OPTIMAL, UNBOUNDED, Basis, LpError, LpSolution,
                      SimplexOptions, solve_lp)
from .slp import ConcaveBound, Cut, SlpResult, slp_solve

__all__ = [
    "EQ", "GE", "LE", "INFEASIBLE", "OPTIMAL", "UNBOUNDED",
    "Basis", "KktReport", "LpBuilder", "LpError", "LpProblem", "LpSolution",
    "SimplexOptions", "solve_lp", "verify_kkt",
    "ConcaveBound", "Cut", "SlpResult", "slp_solve", "lp_dumps", "write_lp",
]
