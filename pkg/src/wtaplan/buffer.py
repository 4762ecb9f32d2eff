"""Intraday hydrogen buffer tank sizing.

The electrolyzer delivers ``n_in[t]`` kg/h, the ammonia reactor can only take
between ``k_min * A`` and ``k_max * A`` kg/h (A in kg NH3/d), and the tank
absorbs the difference. The level follows ``m[t+1] = m[t] + n_in[t] - n_out[t]``
around a 24 h cycle; the starting level is free.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lp import EQ, GE, LE, OPTIMAL, LpBuilder, LpProblem, SimplexOptions, solve_lp
from .wind import HOURS, TAU


class BufferInfeasible(ValueError):
    """The reactor window cannot take the day's hydrogen."""


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    lower: float  # kg H2/d the reactor must at least take
    need: float  # kg H2/d that must be converted
    upper: float  # kg H2/d the reactor can at most take
    explanation: str

    def __bool__(self) -> bool:
        return self.feasible


def feasibility_check(ammonia: float, k_min: float = 0.007, k_max: float = 0.01,
                      k_hta: float | Fraction = Fraction(17, 3), hours: int = HOURS) -> Feasibility:
    """Does the day's hydrogen mass ``A / k_HtA`` fit the reactor window over ``hours``?"""
    if ammonia < 0:
        raise ValueError("ammonia production must be non-negative")
    lo = hours * TAU * k_min * ammonia
    hi = hours * TAU * k_max * ammonia
    need = float(ammonia / k_hta)
    tol = 1e-12 * max(1.0, need)
    if need < lo - tol:
        return Feasibility(False, lo, need, hi,
                           f"daily hydrogen {need:.6g} kg below the minimum reactor intake {lo:.6g} kg")
    if need > hi + tol:
        return Feasibility(False, lo, need, hi,
                           f"daily hydrogen {need:.6g} kg above the maximum reactor intake {hi:.6g} kg")
    return Feasibility(True, lo, need, hi, f"{lo:.6g} <= {need:.6g} <= {hi:.6g} kg/d")


@dataclass(frozen=True)
class BufferProblem:
    n_in: np.ndarray  # kg/h, one value per hour
    ammonia: float  # kg NH3/d
    k_min: float = 0.007
    k_max: float = 0.01
    k_hta: float | Fraction = Fraction(17, 3)

    def __post_init__(self):
        object.__setattr__(self, "n_in", np.asarray(self.n_in, dtype=float))

    @property
    def out_min(self) -> float:
        return self.k_min * self.ammonia

    @property
    def out_max(self) -> float:
        return self.k_max * self.ammonia

    def check(self) -> None:
        if self.n_in.ndim != 1 or self.n_in.size == 0:
            raise ValueError("n_in must be a non-empty vector")
        if np.any(self.n_in < 0):
            raise ValueError("hydrogen input must be non-negative")
        need = float(self.ammonia / self.k_hta)
        total = float(self.n_in.sum() * TAU)
        if abs(total - need) > 1e-9 * max(1.0, need):
            raise ValueError(f"input mass {total:.9g} kg != required hydrogen {need:.9g} kg")


@dataclass(frozen=True)
class BufferSchedule:
    n_out: np.ndarray  # kg/h
    level: np.ndarray  # kg at the start of each hour
    capacity: float  # kg

    def problems(self, p: BufferProblem, tol: float = 1e-6) -> list[str]:
        out = []
        scale = max(1.0, p.out_max)
        if np.any(self.n_out < p.out_min - tol * scale) or np.any(self.n_out > p.out_max + tol * scale):
            out.append("reactor intake outside [k_min A, k_max A]")
        if np.any(self.level < -tol * scale) or np.any(self.level > self.capacity + tol * scale):
            out.append("level outside [0, capacity]")
        nxt = self.level + (p.n_in - self.n_out) * TAU
        if np.max(np.abs(nxt - np.roll(self.level, -1)), initial=0.0) > tol * scale:
            out.append("level recursion or cycle closure broken")
        return out


def add_buffer_rows(b: LpBuilder, tag: str, n_in: dict[int, dict[int, float]] | None,
                    ammonia_var: int, k_min: float, k_max: float, cap_var: int,
                    hours: int = HOURS) -> tuple[list[int], list[int]]:
    """Append the cyclic buffer model to ``b``; returns (out vars, level vars).

    ``n_in[t]`` maps variable index -> coefficient of that hour's hydrogen
    inflow. The reactor window scales with the ammonia variable, so the rows
    stay linear when ``A`` is a decision.
    """
    outs = [b.add_var(f"{tag}.out[{t}]") for t in range(hours)]
    levels = [b.add_var(f"{tag}.m[{t}]") for t in range(hours)]
    for t in range(hours):
        nxt = levels[(t + 1) % hours]
        row = {nxt: 1.0, levels[t]: -1.0, outs[t]: TAU}
        for j, a in (n_in or {}).get(t, {}).items():
            row[j] = row.get(j, 0.0) - a * TAU
        b.add_row(row, EQ, 0.0, f"{tag}.balance[{t}]")
        b.add_row({levels[t]: 1.0, cap_var: -1.0}, LE, 0.0, f"{tag}.cap[{t}]")
        b.add_row({outs[t]: 1.0, ammonia_var: -k_min}, GE, 0.0, f"{tag}.kmin[{t}]")
        b.add_row({outs[t]: 1.0, ammonia_var: -k_max}, LE, 0.0, f"{tag}.kmax[{t}]")
    return outs, levels


def buffer_lp(p: BufferProblem) -> tuple[LpProblem, list[int], list[int], int]:
    """Standalone LP: minimise capacity with the window fixed by ``A``."""
    b = LpBuilder()
    hours = p.n_in.size
    cap = b.add_var("cap", cost=1.0)
    amm = b.add_var("A", lower=p.ammonia, upper=p.ammonia)
    one = b.add_var("one", lower=1.0, upper=1.0)
    n_in = {t: {one: float(p.n_in[t])} for t in range(hours)}
    outs, levels = add_buffer_rows(b, "buf", n_in, amm, p.k_min, p.k_max, cap, hours)
    return b.build(), outs, levels, cap


def size_buffer(p: BufferProblem, options: SimplexOptions | None = None) -> BufferSchedule:
    """Smallest tank that keeps the reactor inside its window all day."""
    p.check()
    feas = feasibility_check(p.ammonia, p.k_min, p.k_max, p.k_hta, p.n_in.size)
    if not feas:
        raise BufferInfeasible(feas.explanation)
    if p.ammonia == 0:
        z = np.zeros(p.n_in.size)
        return BufferSchedule(z, z.copy(), 0.0)
    lp, outs, levels, cap = buffer_lp(p)
    sol = solve_lp(lp, options)
    if sol.status != OPTIMAL:
        raise BufferInfeasible(f"buffer LP {sol.status}")
    x = sol.x
    level = x[levels]
    # shift so the lowest level is exactly zero (the start level is free)
    level = level - level.min()
    return BufferSchedule(x[outs].copy(), level, float(level.max()))


def hydrogen_input(ammonia: float, profile: np.ndarray,
                   k_hta: float | Fraction = Fraction(17, 3)) -> np.ndarray:
    """Hourly hydrogen (kg/h) when the day's requirement follows ``profile``."""
    return float(ammonia / k_hta) * np.asarray(profile, dtype=float)
