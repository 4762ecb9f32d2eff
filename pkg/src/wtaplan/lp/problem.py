"""Linear program container and an incremental builder."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

LE, EQ, GE = "<=", "=", ">="
SENSES = (LE, EQ, GE)


@dataclass(frozen=True)
class LpProblem:
    """``min c @ x`` subject to ``A @ x (sense) rhs`` and ``lower <= x <= upper``.

    Bounds may be infinite. ``A`` is stored dense; the problems built here
    have at most a few thousand rows.
    """

    c: np.ndarray
    A: np.ndarray
    sense: tuple[str, ...]
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    var_names: tuple[str, ...] = ()
    row_names: tuple[str, ...] = ()

    def __post_init__(self):
        n = self.c.shape[0]
        m = self.rhs.shape[0]
        if self.A.shape != (m, n):
            raise ValueError(f"A has shape {self.A.shape}, expected {(m, n)}")
        if len(self.sense) != m:
            raise ValueError("one sense per row required")
        bad = [s for s in self.sense if s not in SENSES]
        if bad:
            raise ValueError(f"unknown row sense {bad[0]!r}")
        if self.lower.shape != (n,) or self.upper.shape != (n,):
            raise ValueError("bounds must have one entry per variable")
        if np.any(self.lower > self.upper):
            j = int(np.argmax(self.lower > self.upper))
            raise ValueError(f"lower > upper for variable {self.var_name(j)}")
        for name, arr in (("c", self.c), ("A", self.A), ("rhs", self.rhs)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"non-finite entries in {name}")
        if np.any(np.isnan(self.lower)) or np.any(np.isnan(self.upper)):
            raise ValueError("NaN bound")

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def m(self) -> int:
        return self.rhs.shape[0]

    def var_name(self, j: int) -> str:
        return self.var_names[j] if self.var_names else f"x{j}"

    def row_name(self, i: int) -> str:
        return self.row_names[i] if self.row_names else f"r{i}"

    def row_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Row activity bounds ``(lo, hi)`` implied by sense and rhs."""
        sense = np.array(self.sense)
        lo = np.where(sense == LE, -np.inf, self.rhs)
        hi = np.where(sense == GE, np.inf, self.rhs)
        return lo, hi

    def with_rows(self, rows: np.ndarray, sense: Sequence[str], rhs: Sequence[float],
                  names: Sequence[str] | None = None) -> "LpProblem":
        """Return a copy with extra rows appended (existing row order kept)."""
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        if rows.size == 0:
            return self
        row_names = self.row_names
        if row_names or names:
            old = row_names or tuple(f"r{i}" for i in range(self.m))
            new = tuple(names) if names else tuple(
                f"r{i}" for i in range(self.m, self.m + rows.shape[0]))
            row_names = old + new
        return LpProblem(
            c=self.c,
            A=np.vstack([self.A, rows]),
            sense=self.sense + tuple(sense),
            rhs=np.concatenate([self.rhs, np.asarray(rhs, dtype=float)]),
            lower=self.lower,
            upper=self.upper,
            var_names=self.var_names,
            row_names=row_names,
        )

    def objective(self, x: np.ndarray) -> float:
        return float(self.c @ x)


@dataclass
class LpBuilder:
    """Accumulates named variables and sparse rows, then emits an LpProblem."""

    _names: list[str] = field(default_factory=list)
    _lower: list[float] = field(default_factory=list)
    _upper: list[float] = field(default_factory=list)
    _cost: list[float] = field(default_factory=list)
    _rows: list[dict[int, float]] = field(default_factory=list)
    _sense: list[str] = field(default_factory=list)
    _rhs: list[float] = field(default_factory=list)
    _row_names: list[str] = field(default_factory=list)
    _index: dict[str, int] = field(default_factory=dict)

    def add_var(self, name: str, lower: float = 0.0, upper: float = np.inf,
                cost: float = 0.0) -> int:
        if name in self._index:
            raise KeyError(f"duplicate variable {name}")
        j = len(self._names)
        self._index[name] = j
        self._names.append(name)
        self._lower.append(lower)
        self._upper.append(upper)
        self._cost.append(cost)
        return j

    def add_cost(self, j: int, cost: float) -> None:
        self._cost[j] += cost

    def add_row(self, coeffs: Mapping[int, float], sense: str, rhs: float,
                name: str | None = None) -> int:
        if sense not in SENSES:
            raise ValueError(f"unknown sense {sense!r}")
        row: dict[int, float] = {}
        for j, a in coeffs.items():
            row[j] = row.get(j, 0.0) + a
        i = len(self._rows)
        self._rows.append(row)
        self._sense.append(sense)
        self._rhs.append(rhs)
        self._row_names.append(name or f"r{i}")
        return i

    def index(self, name: str) -> int:
        return self._index[name]

    @property
    def n(self) -> int:
        return len(self._names)

    @property
    def m(self) -> int:
        return len(self._rows)

    def build(self) -> LpProblem:
        A = np.zeros((self.m, self.n))
        for i, row in enumerate(self._rows):
            for j, a in row.items():
                A[i, j] = a
        return LpProblem(
            c=np.array(self._cost, dtype=float),
            A=A,
            sense=tuple(self._sense),
            rhs=np.array(self._rhs, dtype=float),
            lower=np.array(self._lower, dtype=float),
            upper=np.array(self._upper, dtype=float),
            var_names=tuple(self._names),
            row_names=tuple(self._row_names),
        )
