"""Scenario types, text-file loading, validation and serialisation.

A scenario directory holds five files::

    regions.csv     id,name,zone,ammonia_tpd,a,b,p_re_max_mw
    distances.csv   header row of ids, one row per region (km)
    grid.csv        from,to,susceptance_pu,cap_fwd_mw,cap_rev_mw
    profiles.csv    region_id,h00..h23   (1/h, unit daily energy)
    economics.cfg   key = value; values may be rationals such as 17/165

Ammonia demand is given in tonnes per day at the file boundary and exposed in
kg/d; everything else keeps its file unit.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .wind import HOURS, PotentialCurve, WindProfile

REGIONS_FILE = "regions.csv"
DISTANCES_FILE = "distances.csv"
GRID_FILE = "grid.csv"
PROFILES_FILE = "profiles.csv"
ECONOMICS_FILE = "economics.cfg"
SCENARIO_FILES = (REGIONS_FILE, DISTANCES_FILE, GRID_FILE, PROFILES_FILE, ECONOMICS_FILE)

REGION_COLUMNS = ("id", "name", "zone", "ammonia_tpd", "a", "b", "p_re_max_mw")
GRID_COLUMNS = ("from", "to", "susceptance_pu", "cap_fwd_mw", "cap_rev_mw")
PROFILE_COLUMNS = ("region_id",) + tuple(f"h{t:02d}" for t in range(HOURS))
ZONES = ("western", "eastern")

DEFAULT_SUSCEPTANCE = 1.0
DEFAULT_BRANCH_CAP = 1000.0


class ScenarioError(Exception):
    """Bad scenario input, located by file and line where possible."""

    def __init__(self, message: str, file: str | None = None, line: int | None = None):
        self.file, self.line = file, line
        where = ""
        if file:
            where = f"{file}:{line}: " if line else f"{file}: "
        super().__init__(where + message)


class ParseError(ScenarioError):
    pass


class SchemaError(ScenarioError):
    pass


class ScenarioValidationError(ScenarioError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("scenario failed validation:\n" + str(report))


# -- types -----------------------------------------------------------------

@dataclass(frozen=True)
class Region:
    id: int
    name: str
    zone: str
    ammonia_tpd: float
    a: float | None = None
    b: float | None = None
    p_re_max: float | None = None

    @property
    def has_wind(self) -> bool:
        return self.b is not None

    @property
    def ammonia_kg(self) -> float:
        """Daily ammonia demand in kg/d."""
        return self.ammonia_tpd * 1000.0

    @property
    def curve(self) -> PotentialCurve | None:
        if not self.has_wind:
            return None
        return PotentialCurve(self.a, self.b, self.p_re_max)


@dataclass(frozen=True)
class Branch:
    from_id: int
    to_id: int
    susceptance: float = DEFAULT_SUSCEPTANCE
    cap_fwd: float = DEFAULT_BRANCH_CAP
    cap_rev: float = DEFAULT_BRANCH_CAP


@dataclass(frozen=True)
class FacilityCost:
    unit_cost: float  # EUR per kW or per kg H2 of capacity
    fixopex: float  # fraction of capital per year
    lifetime: float  # years


# key -> (default, description); order fixes the serialised layout
_ECONOMIC_KEYS: dict[str, tuple[float | Fraction, str]] = {
    "re.unit_cost": (1000.0, "wind turbine capital cost [EUR/kW]"),
    "re.fixopex": (0.02, "wind turbine fixed OPEX [fraction of capital per year]"),
    "re.lifetime": (20.0, "wind turbine lifetime [yr]"),
    "el.unit_cost": (500.0, "electrolyzer capital cost [EUR/kW]"),
    "el.fixopex": (0.03, "electrolyzer fixed OPEX [fraction/yr]"),
    "el.lifetime": (10.0, "electrolyzer lifetime [yr]"),
    "buf.unit_cost": (500.0, "hydrogen buffer tank capital cost [EUR/kg H2]"),
    "buf.fixopex": (0.02, "buffer tank fixed OPEX [fraction/yr]"),
    "buf.lifetime": (20.0, "buffer tank lifetime [yr]"),
    "hs.unit_cost": (500.0, "hydrogen storage tank capital cost [EUR/kg H2]"),
    "hs.fixopex": (0.02, "storage tank fixed OPEX [fraction/yr]"),
    "hs.lifetime": (20.0, "storage tank lifetime [yr] (buffer tank row reused)"),
    "truck.unit_cost": (37.21, "truck capital cost [EUR per kg/d H2 carried]"),
    "truck.fixopex": (0.12, "truck fixed OPEX [fraction/yr]"),
    "truck.lifetime": (8.0, "truck lifetime [yr]"),
    "trailer.unit_cost": (200.0, "trailer capital cost [EUR per kg/d H2 carried]"),
    "trailer.fixopex": (0.02, "trailer fixed OPEX [fraction/yr]"),
    "trailer.lifetime": (12.0, "trailer lifetime [yr]"),
    "discount_rate": (0.10, "discount rate [1/yr]"),
    "c_n2": (0.1, "nitrogen cost [EUR/kg N2]"),
    "c_water": (0.004, "water cost [EUR/kg H2O]"),
    "c_diesel": (Fraction(21, 215000), "truck diesel cost [EUR/(km kg H2)] (0.42/4300)"),
    "c_en": (0.008, "wheeling charge [EUR/kWh]"),
    "eta_wta": (Fraction(17, 165), "wind energy to ammonia [kg NH3/kWh]"),
    "eta_wth": (Fraction(1, 55), "wind energy to hydrogen [kg H2/kWh]"),
    "k_hta": (Fraction(17, 3), "hydrogen to ammonia [kg NH3/kg H2]"),
    "k_nta": (Fraction(17, 14), "nitrogen to ammonia [kg NH3/kg N2]"),
    "k_wth": (Fraction(1, 9), "water to hydrogen [kg H2/kg H2O]"),
    "k_min": (0.007, "minimum reactor intake [(kg/h H2)/(kg/d NH3)]"),
    "k_max": (0.01, "maximum reactor intake [(kg/h H2)/(kg/d NH3)]"),
    "carbon_tax": (25.0, "carbon tax embedded in the coal benchmark [EUR/t CO2]"),
    "cta_lcoa": (0.41, "coal-to-ammonia levelized cost [EUR/kg NH3]"),
    "coal_factor": (Fraction(179, 106), "coal displaced [tce/t NH3]"),
    "co2_factor": (Fraction(489, 106), "CO2 avoided [t/t NH3]"),
}

_OPTION_KEYS: dict[str, tuple[float, str]] = {
    "options.dmax_km": (500.0, "maximum daily truck distance [km]"),
    "options.truck_speed_kmh": (50.0, "truck speed [km/h]"),
    "options.truck_hours": (10.0, "truck operating hours per day [h]"),
    "options.feas_tol": (1e-7, "LP feasibility tolerance"),
    "options.slp_tol": (1e-6, "relative tolerance on the potential-curve cuts"),
    "options.slp_max_iter": (50.0, "successive linearisation iteration cap"),
}

FACILITIES = ("re", "el", "buf", "hs", "truck", "trailer")


@dataclass(frozen=True)
class EconomicParams:
    facilities: Mapping[str, FacilityCost]
    discount_rate: float = 0.10
    c_n2: float = 0.1
    c_water: float = 0.004
    c_diesel: Fraction | float = Fraction(21, 215000)
    c_en: float = 0.008
    eta_wta: Fraction | float = Fraction(17, 165)
    eta_wth: Fraction | float = Fraction(1, 55)
    k_hta: Fraction | float = Fraction(17, 3)
    k_nta: Fraction | float = Fraction(17, 14)
    k_wth: Fraction | float = Fraction(1, 9)
    k_min: float = 0.007
    k_max: float = 0.01
    carbon_tax: float = 25.0
    cta_lcoa: float = 0.41
    coal_factor: Fraction | float = Fraction(179, 106)
    co2_factor: Fraction | float = Fraction(489, 106)

    @classmethod
    def defaults(cls) -> "EconomicParams":
        return _economics_from_values({})

    def facility(self, name: str) -> FacilityCost:
        return self.facilities[name]

    def scaled(self, **factors: float) -> "EconomicParams":
        """Copy with facility unit costs multiplied, e.g. ``scaled(re=0.7)``."""
        fac = dict(self.facilities)
        for name, f in factors.items():
            fac[name] = dataclasses.replace(fac[name], unit_cost=fac[name].unit_cost * f)
        return dataclasses.replace(self, facilities=fac)

    def with_values(self, **values) -> "EconomicParams":
        return dataclasses.replace(self, **values)

    def as_values(self) -> dict[str, float | Fraction]:
        out: dict[str, float | Fraction] = {}
        for key in _ECONOMIC_KEYS:
            if "." in key:
                fac, attr = key.split(".")
                out[key] = getattr(self.facilities[fac], attr)
            else:
                out[key] = getattr(self, key)
        return out


@dataclass(frozen=True)
class SolverOptions:
    dmax_km: float = 500.0
    truck_speed_kmh: float = 50.0
    truck_hours: float = 10.0
    feas_tol: float = 1e-7
    slp_tol: float = 1e-6
    slp_max_iter: int = 50

    def as_values(self) -> dict[str, float]:
        return {f"options.{f.name}": getattr(self, f.name) for f in dataclasses.fields(self)}


@dataclass(frozen=True)
class Scenario:
    regions: tuple[Region, ...]
    distances: np.ndarray
    grid: tuple[Branch, ...]
    profiles: Mapping[int, WindProfile]
    economics: EconomicParams = field(default_factory=EconomicParams.defaults)
    options: SolverOptions = field(default_factory=SolverOptions)
    name: str = "scenario"

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return (self.regions == other.regions and np.array_equal(self.distances, other.distances)
                and self.grid == other.grid and dict(self.profiles) == dict(other.profiles)
                and self.economics == other.economics and self.options == other.options)

    __hash__ = None

    @property
    def ids(self) -> list[int]:
        return [r.id for r in self.regions]

    def region(self, rid: int) -> Region:
        return self.regions[self.index(rid)]

    def index(self, rid: int) -> int:
        for k, r in enumerate(self.regions):
            if r.id == rid:
                return k
        raise KeyError(f"unknown region {rid}")

    def distance(self, i: int, j: int) -> float:
        return float(self.distances[self.index(i), self.index(j)])

    @property
    def demand_regions(self) -> list[Region]:
        return [r for r in self.regions if r.ammonia_tpd > 0]

    @property
    def wind_regions(self) -> list[Region]:
        return [r for r in self.regions if r.has_wind]

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)


# -- validation --------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"[{self.kind}] {self.where}: {self.message}"


@dataclass
class ValidationReport:
    errors: list[Violation] = field(default_factory=list)
    warnings: list[Violation] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.errors)

    def __bool__(self) -> bool:
        return bool(self.errors)

    def __iter__(self):
        return iter(self.errors)

    def kinds(self) -> set[str]:
        return {v.kind for v in self.errors}

    def __str__(self) -> str:
        lines = [str(v) for v in self.errors] + [f"warning {v}" for v in self.warnings]
        return "\n".join(lines) if lines else "ok"


def validate_scenario(s: Scenario) -> ValidationReport:
    """Collect every invariant violation; an empty report means plannable."""
    rep = ValidationReport()
    err = lambda kind, where, msg: rep.errors.append(Violation(kind, where, msg))  # noqa: E731

    ids = [r.id for r in s.regions]
    if not ids:
        err("regions", "regions", "no regions")
    if len(set(ids)) != len(ids):
        err("regions", "regions", "duplicate region ids")
    if sorted(ids) != list(range(1, len(ids) + 1)):
        err("regions", "regions", "region ids must be contiguous 1..|R|")
    for r in s.regions:
        where = f"region {r.id}"
        if r.zone not in ZONES:
            err("regions", where, f"unknown zone {r.zone!r}")
        if not r.ammonia_tpd >= 0:
            err("demand", where, f"negative ammonia demand {r.ammonia_tpd}")
        present = [v is not None for v in (r.a, r.b, r.p_re_max)]
        if any(present) and not all(present):
            err("potential", where, "a, b and p_re_max must be given together")
            continue
        if r.has_wind:
            curve = r.curve
            for msg in curve.problems():
                err("concavity" if "concave" in msg else "potential", where, msg)
            for msg in curve.warnings():
                rep.warnings.append(Violation("potential", where, msg))

    D = np.asarray(s.distances, dtype=float)
    nreg = len(ids)
    if D.shape != (nreg, nreg):
        err("distances", "distances", f"matrix is {D.shape}, expected {(nreg, nreg)}")
    else:
        if not np.array_equal(D, D.T):
            i, j = np.argwhere(D != D.T)[0]
            err("distances", "distances",
                f"asymmetric: D({ids[i]},{ids[j]})={D[i, j]:g} vs D({ids[j]},{ids[i]})={D[j, i]:g}")
        if np.any(np.diag(D) != 0):
            err("distances", "distances", "non-zero diagonal")
        off = D[~np.eye(nreg, dtype=bool)]
        if np.any(~(off > 0)):
            err("distances", "distances", "off-diagonal distances must be strictly positive")

    known = set(ids)
    zone_of = {r.id: r.zone for r in s.regions}
    for k, br in enumerate(s.grid):
        where = f"grid branch {k + 1} ({br.from_id}-{br.to_id})"
        if br.from_id not in known or br.to_id not in known:
            err("grid", where, "references an unknown region")
            continue
        if br.from_id == br.to_id:
            err("grid", where, "self-loop")
        if zone_of[br.from_id] != zone_of[br.to_id]:
            err("grid", where, "branch crosses zones; zones are separate networks")
        if not br.susceptance > 0:
            err("grid", where, "susceptance must be positive")
        if br.cap_fwd < 0 or br.cap_rev < 0:
            err("grid", where, "capacities must be non-negative")

    for rid, prof in s.profiles.items():
        where = f"profile {rid}"
        if rid not in known:
            err("profiles", where, "references an unknown region")
            continue
        for msg in prof.problems():
            err("normalization" if "sum" in msg else "profiles", where, msg)
    for r in s.wind_regions:
        if r.id not in s.profiles:
            err("profiles", f"region {r.id}", "wind region without a profile")

    econ = s.economics
    if Fraction(econ.eta_wta) != Fraction(econ.k_hta) * Fraction(econ.eta_wth):
        err("economics", "eta_wta", "eta_wta must equal k_hta * eta_wth exactly")
    for name, fac in econ.facilities.items():
        if fac.unit_cost < 0 or fac.fixopex < 0:
            err("economics", name, "costs must be non-negative")
        if fac.lifetime < 1:
            err("economics", name, "lifetime must be at least one year")
    for key in ("c_n2", "c_water", "c_diesel", "c_en", "cta_lcoa", "carbon_tax"):
        if getattr(econ, key) < 0:
            err("economics", key, "costs must be non-negative")
    if not 0 <= econ.discount_rate < 1:
        err("economics", "discount_rate", "discount rate must lie in [0, 1)")
    if not 0 < econ.k_min < econ.k_max:
        err("economics", "k_min/k_max", "need 0 < k_min < k_max")
    opt = s.options
    if opt.dmax_km < 0 or opt.truck_speed_kmh <= 0 or opt.truck_hours <= 0:
        err("options", "options", "truck distance, speed and hours must be positive")
    if not opt.slp_tol > 0 or opt.slp_max_iter < 1:
        err("options", "slp", "linearisation needs a positive tolerance and at least one iteration")
    return rep


# -- parsing ---------------------------------------------------------------

def _num(text: str, file: str, line: int, col: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ParseError(f"column {col!r}: not a number: {text!r}", file, line) from None
    if math.isnan(v):
        raise ParseError(f"column {col!r}: NaN", file, line)
    return v


def _rows(text: str, file: str, columns: tuple[str, ...] | None) -> tuple[list[str], list[tuple[int, list[str]]]]:
    reader = csv.reader(io.StringIO(text))
    rows = [(k + 1, row) for k, row in enumerate(reader) if row and any(c.strip() for c in row)]
    if not rows:
        raise SchemaError("empty file", file)
    _, header = rows[0]
    header = [h.strip() for h in header]
    if columns is not None:
        missing = [c for c in columns if c not in header]
        if missing:
            raise SchemaError(f"missing column(s) {', '.join(missing)}", file, 1)
        extra = [c for c in header if c not in columns]
        if extra:
            raise SchemaError(f"unknown column(s) {', '.join(extra)}", file, 1)
    body = rows[1:]
    for line, row in body:
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", file, line)
    return header, body


def parse_regions(text: str, file: str = REGIONS_FILE) -> tuple[Region, ...]:
    header, body = _rows(text, file, REGION_COLUMNS)
    if not body:
        raise SchemaError("no region rows", file)
    out = []
    for line, row in body:
        rec = dict(zip(header, (c.strip() for c in row)))
        try:
            rid = int(rec["id"])
        except ValueError:
            raise ParseError(f"bad region id {rec['id']!r}", file, line) from None
        opt = {}
        for col, key in (("a", "a"), ("b", "b"), ("p_re_max_mw", "p_re_max")):
            opt[key] = _num(rec[col], file, line, col) if rec[col] else None
        out.append(Region(rid, rec["name"], rec["zone"],
                          _num(rec["ammonia_tpd"], file, line, "ammonia_tpd"), **opt))
    return tuple(sorted(out, key=lambda r: r.id))


def parse_distances(text: str, file: str = DISTANCES_FILE) -> tuple[list[int], np.ndarray]:
    header, body = _rows(text, file, None)
    try:
        col_ids = [int(h) for h in header[1:]]
    except ValueError:
        raise SchemaError("header must list region ids after the first cell", file, 1) from None
    if len(body) != len(col_ids):
        raise SchemaError(f"{len(body)} data rows for {len(col_ids)} region columns", file)
    rows = {}
    for line, row in body:
        try:
            rid = int(row[0])
        except ValueError:
            raise ParseError(f"bad row id {row[0]!r}", file, line) from None
        rows[rid] = [_num(c, file, line, str(col_ids[k])) for k, c in enumerate(row[1:])]
    if sorted(rows) != sorted(col_ids):
        raise SchemaError("row ids do not match header ids", file)
    order = sorted(col_ids)
    perm = [col_ids.index(i) for i in order]
    D = np.array([[rows[i][p] for p in perm] for i in order], dtype=float)
    return order, D


def parse_grid(text: str, file: str = GRID_FILE) -> tuple[Branch, ...]:
    header, body = _rows(text, file, GRID_COLUMNS)
    out = []
    for line, row in body:
        rec = dict(zip(header, (c.strip() for c in row)))
        try:
            f, t = int(rec["from"]), int(rec["to"])
        except ValueError:
            raise ParseError("bad branch endpoint", file, line) from None
        sus = _num(rec["susceptance_pu"], file, line, "susceptance_pu") if rec["susceptance_pu"] else DEFAULT_SUSCEPTANCE
        fwd = _num(rec["cap_fwd_mw"], file, line, "cap_fwd_mw") if rec["cap_fwd_mw"] else DEFAULT_BRANCH_CAP
        rev = _num(rec["cap_rev_mw"], file, line, "cap_rev_mw") if rec["cap_rev_mw"] else DEFAULT_BRANCH_CAP
        out.append(Branch(f, t, sus, fwd, rev))
    return tuple(sorted(out, key=lambda b: (b.from_id, b.to_id)))


def parse_profiles(text: str, file: str = PROFILES_FILE) -> dict[int, WindProfile]:
    header, body = _rows(text, file, PROFILE_COLUMNS)
    out = {}
    for line, row in body:
        rec = dict(zip(header, (c.strip() for c in row)))
        try:
            rid = int(rec["region_id"])
        except ValueError:
            raise ParseError(f"bad region id {rec['region_id']!r}", file, line) from None
        if rid in out:
            raise ParseError(f"duplicate profile for region {rid}", file, line)
        vals = [_num(rec[c], file, line, c) for c in PROFILE_COLUMNS[1:]]
        out[rid] = WindProfile(rid, np.array(vals))
    return dict(sorted(out.items()))


def _value(text: str, file: str, line: int, key: str) -> float | Fraction:
    text = text.strip()
    try:
        if "/" in text:
            return Fraction(text)
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{key}: bad value {text!r}", file, line) from None


def parse_config(text: str, file: str = ECONOMICS_FILE) -> dict[str, float | Fraction]:
    values: dict[str, float | Fraction] = {}
    known = set(_ECONOMIC_KEYS) | set(_OPTION_KEYS)
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", file, k)
        key, val = (p.strip() for p in line.split("=", 1))
        if key not in known:
            raise SchemaError(f"unknown key {key!r}", file, k)
        if key in values:
            raise ParseError(f"duplicate key {key!r}", file, k)
        values[key] = _value(val, file, k, key)
    return values


def _economics_from_values(values: Mapping[str, float | Fraction]) -> EconomicParams:
    merged = {k: values.get(k, d) for k, (d, _) in _ECONOMIC_KEYS.items()}
    fac = {name: FacilityCost(float(merged[f"{name}.unit_cost"]), float(merged[f"{name}.fixopex"]),
                              float(merged[f"{name}.lifetime"]))
           for name in FACILITIES}
    scalars = {k: v for k, v in merged.items() if "." not in k}
    for k in ("discount_rate", "c_n2", "c_water", "c_en", "k_min", "k_max", "carbon_tax", "cta_lcoa"):
        scalars[k] = float(scalars[k])
    return EconomicParams(facilities=fac, **scalars)


def _options_from_values(values: Mapping[str, float | Fraction]) -> SolverOptions:
    kw = {}
    for key, (default, _) in _OPTION_KEYS.items():
        name = key.split(".", 1)[1]
        v = values.get(key, default)
        kw[name] = int(v) if name == "slp_max_iter" else float(v)
    return SolverOptions(**kw)


def load_scenario(paths: str | Path | Iterable[str | Path], validate: bool = True,
                  name: str | None = None) -> Scenario:
    """Load a scenario from a directory or from an explicit set of files.

    Files are recognised by name. ``economics.cfg`` and ``grid.csv`` are
    optional (defaults apply); the other three are required. Raises
    ParseError/SchemaError on malformed input and ScenarioValidationError if
    the parsed scenario violates an invariant.
    """
    if isinstance(paths, (str, Path)) and Path(paths).is_dir():
        root = Path(paths)
        files = {p.name: p for p in root.iterdir() if p.name in SCENARIO_FILES}
        name = name or root.name
    else:
        items = [paths] if isinstance(paths, (str, Path)) else list(paths)
        files = {Path(p).name: Path(p) for p in items}
        unknown = [f for f in files if f not in SCENARIO_FILES]
        if unknown:
            raise SchemaError(f"unrecognised scenario file(s): {', '.join(unknown)}")
    for req in (REGIONS_FILE, DISTANCES_FILE, PROFILES_FILE):
        if req not in files:
            raise SchemaError("required file missing", req)
    texts = {k: Path(v).read_text() for k, v in files.items()}
    return scenario_from_texts(texts, validate=validate, name=name or "scenario")


def scenario_from_texts(texts: Mapping[str, str], validate: bool = True,
                        name: str = "scenario") -> Scenario:
    regions = parse_regions(texts[REGIONS_FILE])
    ids, D = parse_distances(texts[DISTANCES_FILE])
    if ids != [r.id for r in regions]:
        raise SchemaError("distance matrix ids do not match regions.csv", DISTANCES_FILE)
    grid = parse_grid(texts[GRID_FILE]) if GRID_FILE in texts else ()
    profiles = parse_profiles(texts[PROFILES_FILE])
    values = parse_config(texts[ECONOMICS_FILE]) if ECONOMICS_FILE in texts else {}
    s = Scenario(regions, D, grid, profiles, _economics_from_values(values),
                 _options_from_values(values), name)
    if validate:
        rep = validate_scenario(s)
        if rep:
            raise ScenarioValidationError(rep)
    return s


def bundled_path(name: str = "inner_mongolia") -> Path:
    return Path(str(resources.files("wtaplan") / "data" / name))


def load_bundled(name: str = "inner_mongolia") -> Scenario:
    """The shipped Inner Mongolia case."""
    return load_scenario(bundled_path(name), name=name)


# -- serialisation -----------------------------------------------------------

def fmt(x: float | Fraction | None) -> str:
    """Shortest round-tripping text for a number; integers without '.0'."""
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return str(x)
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _csv(rows: Iterable[Iterable[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow(list(row))
    return buf.getvalue()


def dumps_regions(regions: Iterable[Region]) -> str:
    rows = [REGION_COLUMNS]
    for r in sorted(regions, key=lambda r: r.id):
        rows.append((str(r.id), r.name, r.zone, fmt(r.ammonia_tpd), fmt(r.a), fmt(r.b), fmt(r.p_re_max)))
    return _csv(rows)


def dumps_distances(ids: list[int], D: np.ndarray) -> str:
    rows = [["id"] + [str(i) for i in ids]]
    for k, i in enumerate(ids):
        rows.append([str(i)] + [fmt(v) for v in D[k]])
    return _csv(rows)


def dumps_grid(grid: Iterable[Branch]) -> str:
    rows = [GRID_COLUMNS]
    for b in sorted(grid, key=lambda b: (b.from_id, b.to_id)):
        rows.append((str(b.from_id), str(b.to_id), fmt(b.susceptance), fmt(b.cap_fwd), fmt(b.cap_rev)))
    return _csv(rows)


def dumps_profiles(profiles: Mapping[int, WindProfile]) -> str:
    rows = [PROFILE_COLUMNS]
    for rid in sorted(profiles):
        rows.append([str(rid)] + [fmt(v) for v in profiles[rid].p])
    return _csv(rows)


def dumps_config(econ: EconomicParams, options: SolverOptions) -> str:
    lines = ["# economic parameters and solver options (key = value)"]
    values = econ.as_values()
    for key, (_, desc) in _ECONOMIC_KEYS.items():
        lines.append(f"# {desc}")
        lines.append(f"{key} = {fmt(values[key])}")
    ovals = options.as_values()
    for key, (_, desc) in _OPTION_KEYS.items():
        lines.append(f"# {desc}")
        lines.append(f"{key} = {fmt(ovals[key])}")
    return "\n".join(lines) + "\n"


def dumps_scenario(s: Scenario) -> dict[str, str]:
    return {
        REGIONS_FILE: dumps_regions(s.regions),
        DISTANCES_FILE: dumps_distances(s.ids, s.distances),
        GRID_FILE: dumps_grid(s.grid),
        PROFILES_FILE: dumps_profiles(s.profiles),
        ECONOMICS_FILE: dumps_config(s.economics, s.options),
    }


def save_scenario(s: Scenario, directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for fname, text in dumps_scenario(s).items():
        (directory / fname).write_text(text)
    return directory


def read_profile_file(path: str | Path, region: int | None = None) -> WindProfile:
    """One profile from a profiles.csv-format file (first row unless ``region``)."""
    profiles = parse_profiles(Path(path).read_text(), Path(path).name)
    if not profiles:
        raise SchemaError("no profile rows", Path(path).name)
    if region is None:
        return next(iter(profiles.values()))
    if region not in profiles:
        raise SchemaError(f"no profile for region {region}", Path(path).name)
    return profiles[region]
