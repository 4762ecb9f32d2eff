"""Wind potential curves and typical daily profiles.

A region's usable daily energy is capped by a concave quadratic in installed
capacity, ``E <= a P^2 + b P`` with ``0 <= P <= p_max``. Hourly output
follows a unit-energy profile: ``P_t = E * p_t`` with ``sum(p_t) * 1 h = 1``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

log = logging.getLogger(__name__)

HOURS = 24
TAU = 1.0  # hours per interval
PROFILE_TOL = 1e-9


class DomainError(ValueError):
    """Argument outside the domain of a curve function."""


class FitError(ValueError):
    """Samples cannot determine a quadratic-through-origin fit."""


@dataclass(frozen=True)
class PotentialCurve:
    """Energy potential ``E(P) = a P^2 + b P`` in MWh/d for ``P`` in MW.

    ``a`` in h/d/MW (<= 0), ``b`` in h/d (> 0), ``p_max`` in MW.
    """

    a: float
    b: float
    p_max: float
    residual: float = field(default=0.0, compare=False)

    def problems(self) -> list[str]:
        out = []
        if self.a > 0:
            out.append(f"a = {self.a} > 0: potential curve is not concave")
        if self.b <= 0:
            out.append(f"b = {self.b} <= 0")
        if self.p_max < 0:
            out.append(f"p_max = {self.p_max} < 0")
        return out

    def warnings(self) -> list[str]:
        if self.b + 2.0 * self.a * self.p_max < 0:
            return [f"curve decreases before p_max (b + 2 a p_max = {self.b + 2 * self.a * self.p_max:.4g})"]
        return []

    @property
    def e_max(self) -> float:
        """Energy at full potential capacity."""
        return energy_bound(self, self.p_max)


def energy_bound(c: PotentialCurve, P: float) -> float:
    """Largest daily energy (MWh/d) obtainable from ``P`` MW of turbines."""
    if P < 0 or P > c.p_max * (1 + 1e-12):
        raise DomainError(f"capacity {P} MW outside [0, {c.p_max}]")
    return c.a * P * P + c.b * P


def flh(c: PotentialCurve, P: float) -> float:
    """Average daily full-load hours at capacity ``P``: the secant slope ``a P + b``."""
    if P <= 0:
        raise DomainError(f"full-load hours need P > 0, got {P}")
    if P > c.p_max * (1 + 1e-12):
        raise DomainError(f"capacity {P} MW above p_max = {c.p_max}")
    return c.a * P + c.b


def min_capacity(c: PotentialCurve, E: float) -> float:
    """Smallest capacity whose potential reaches ``E`` (smaller quadratic root)."""
    if E <= 0:
        return 0.0
    if c.a == 0:
        P = E / c.b
    else:
        disc = c.b * c.b + 4.0 * c.a * E
        if disc < 0:
            raise DomainError(f"energy {E} MWh/d exceeds the curve maximum")
        # numerically stable form of (-b + sqrt(disc)) / (2a)
        P = 2.0 * E / (c.b + np.sqrt(disc))
    if P > c.p_max * (1 + 1e-12):
        raise DomainError(f"energy {E} MWh/d needs {P:.6g} MW > p_max = {c.p_max}")
    return float(P)


def fit_potential(samples: Iterable[tuple[float, float]]) -> PotentialCurve:
    """Least-squares fit of ``E = a P^2 + b P`` (no constant term).

    ``p_max`` is the largest sampled capacity and the residual 2-norm is kept
    on the returned curve.
    """
    arr = np.asarray(list(samples), dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise FitError("samples must be (P, E) pairs")
    if arr.shape[0] < 3:
        raise FitError(f"need at least 3 samples, got {arr.shape[0]}")
    P, E = arr[:, 0], arr[:, 1]
    if np.any(P < 0):
        raise FitError("capacities must be non-negative")
    if len(np.unique(P[P > 0])) < 2:
        raise FitError("need at least two distinct positive capacities")
    X = np.column_stack([P * P, P])
    coef, _, rank, _ = np.linalg.lstsq(X, E, rcond=None)
    if rank < 2:
        raise FitError("rank-deficient design matrix")
    resid = float(np.linalg.norm(X @ coef - E))
    return PotentialCurve(a=float(coef[0]), b=float(coef[1]), p_max=float(P.max()), residual=resid)


@dataclass(frozen=True)
class WindProfile:
    """Hourly power per unit of daily energy (1/h) for one region."""

    region: int
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))

    def __eq__(self, other):
        if not isinstance(other, WindProfile):
            return NotImplemented
        return self.region == other.region and np.array_equal(self.p, other.p)

    def __hash__(self):
        return hash((self.region, self.p.tobytes()))

    def problems(self) -> list[str]:
        out = []
        if self.p.shape != (HOURS,):
            return [f"profile has {self.p.size} values, expected {HOURS}"]
        if np.any(self.p < 0):
            out.append(f"negative hourly value {self.p.min():.4g}")
        total = float(self.p.sum() * TAU)
        if abs(total - 1.0) > PROFILE_TOL:
            out.append(f"daily sum {total:.12g} != 1 (unit daily energy)")
        return out

    @property
    def peak(self) -> float:
        return float(self.p.max())


def scale_profile(E: float, w: WindProfile) -> np.ndarray:
    """Hourly powers (MW) for daily energy ``E`` (MWh/d)."""
    if E < 0:
        raise DomainError(f"daily energy must be >= 0, got {E}")
    return E * w.p


@dataclass(frozen=True)
class ProfileStats:
    min: float
    lower_quartile: float
    median: float
    upper_quartile: float
    max: float
    cv: float


def profile_stats(w: WindProfile) -> ProfileStats:
    """Order statistics of the 24 hourly values; quartiles interpolate linearly."""
    q = np.quantile(w.p, [0.0, 0.25, 0.5, 0.75, 1.0], method="linear")
    mean = w.p.mean()
    cv = float(w.p.std() / mean) if mean > 0 else 0.0
    return ProfileStats(*(float(v) for v in q), cv=cv)


def _shape(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    t = np.arange(HOURS)
    phase = rng.uniform(0, HOURS)
    z = 0.35 * np.sin(2 * np.pi * (t - phase) / HOURS) + 0.65 * rng.standard_normal(HOURS)
    z -= z.mean()
    return 0.95 * z / np.abs(z).max()


def synth_profile(intensity: float, seed: int, region: int = 0) -> WindProfile:
    """Deterministic synthetic profile with tunable fluctuation.

    A diurnal sinusoid plus seeded hourly noise forms a zero-mean shape with
    ``max |z| = 0.95``; the profile is ``(1 + intensity * z) / 24`` clipped at
    zero and renormalised. The clip never binds for ``intensity <= 1``, so the
    coefficient of variation is exactly proportional to ``intensity``.
    """
    if not 0.0 <= intensity <= 1.0:
        raise DomainError(f"intensity must lie in [0, 1], got {intensity}")
    x = np.clip(1.0 + intensity * _shape(seed), 0.0, None)
    return WindProfile(region, x / (x.sum() * TAU))


def flat_profile(region: int = 0) -> WindProfile:
    return WindProfile(region, np.full(HOURS, 1.0 / HOURS))
