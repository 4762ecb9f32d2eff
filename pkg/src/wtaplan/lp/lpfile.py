"""Write an LpProblem in the common CPLEX-style LP text layout.

Meant for cross-checking a model against an external solver by hand.
"""
from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .problem import LpProblem

_BAD = re.compile(r"[^A-Za-z0-9_.]")


def _name(raw: str) -> str:
    s = _BAD.sub("_", raw)
    return s if s and not s[0].isdigit() and s[0] != "." else f"v_{s}"


def _terms(coefs: np.ndarray, names: list[str]) -> str:
    parts = []
    for j in np.flatnonzero(coefs):
        a = coefs[j]
        sign = "-" if a < 0 else "+"
        parts.append(f"{sign} {abs(a):.17g} {names[j]}")
    if not parts:
        return "0 " + names[0] if names else "0"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def dumps(p: LpProblem) -> str:
    names = [_name(p.var_name(j)) for j in range(p.n)]
    lines = ["\\ written by wtaplan", "Minimize", f" obj: {_terms(p.c, names)}", "Subject To"]
    for i in range(p.m):
        lines.append(f" {_name(p.row_name(i))}: {_terms(p.A[i], names)} {p.sense[i]} {p.rhs[i]:.17g}")
    lines.append("Bounds")
    for j in range(p.n):
        lo, hi = p.lower[j], p.upper[j]
        if np.isinf(lo) and np.isinf(hi):
            lines.append(f" {names[j]} free")
        elif lo == hi:
            lines.append(f" {names[j]} = {lo:.17g}")
        else:
            left = "-inf" if np.isinf(lo) else f"{lo:.17g}"
            right = "+inf" if np.isinf(hi) else f"{hi:.17g}"
            lines.append(f" {left} <= {names[j]} <= {right}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def write_lp(p: LpProblem, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(dumps(p))
    return path
