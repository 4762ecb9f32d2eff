"""Command-line front end.

Every artifact carries a run manifest: a ``manifest`` section in JSON
files and a leading ``# manifest: {...}`` line in CSV and text output. The
manifest's ``wall_clock_s`` field is the only thing that changes when a
command is rerun on identical inputs.

Exit codes: 0 success, 1 data error, 2 solver failure, 64 usage error.
"""
from __future__ import annotations

import argparse
import dataclasses
import hashlib
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .buffer import BufferInfeasible, BufferProblem, hydrogen_input, size_buffer
from .data_io import (SCENARIO_FILES, ScenarioError, ScenarioValidationError, bundled_path,
                      load_scenario, parse_profiles, validate_scenario)
from .economics import CostDomainError, cta_comparison
from .grid import GridError, GridModel, check_limits
from .hsc import HscModel
from .lp import LpError
from .planner import (LAYERS, PlanningError, SolveError, capex_sensitivity, decompose_costs,
                      local_sweep, parse_range, solve_configuration, write_solution)
from .planner.output import dumps_csv, manifest_line, table_I_rows, table_II_rows
from .wind import DomainError, FitError, WindProfile, fit_potential, synth_profile

EXIT_OK, EXIT_DATA, EXIT_SOLVER, EXIT_USAGE = 0, 1, 2, 64
DATA_ERRORS = (ScenarioError, PlanningError, BufferInfeasible, CostDomainError, GridError,
               DomainError, FitError, OSError, ValueError, KeyError)
SOLVER_ERRORS = (SolveError, LpError)

log = logging.getLogger("wtaplan")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which means solver failure here
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def sha256_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    command: str
    inputs: dict[str, str] = field(default_factory=dict)  # file name -> sha256
    options: dict[str, Any] = field(default_factory=dict)
    version: str = __version__
    wall_clock_s: float = 0.0
    slp_iterations: int | None = None
    cuts: int | None = None

    def add_input(self, label: str, path: str | Path) -> None:
        self.inputs[label] = sha256_file(path)

    def as_dict(self) -> dict[str, Any]:
        return {"command": self.command, "version": self.version, "inputs": dict(sorted(self.inputs.items())),
                "options": dict(sorted(self.options.items())), "slp_iterations": self.slp_iterations,
                "cuts": self.cuts, "wall_clock_s": round(self.wall_clock_s, 3)}


# -- argument parsing --------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--scenario", default="inner_mongolia",
                   help="scenario directory, or the name of a bundled scenario (default: inner_mongolia)")
    g.add_argument("--out", default=None, help="output directory (default: print to stdout)")
    g.add_argument("--discount-rate", type=float, default=None, help="override the discount rate")
    g.add_argument("--dmax", type=float, default=None, help="override the daily truck range, km")
    g.add_argument("--profiles", default=None,
                   help="profiles.csv-format FILE, or synth:<intensity>:<seed> for every wind region")
    g.add_argument("--tol", type=float, default=None, help="linearisation tolerance")
    g.add_argument("--max-iter", type=int, default=None, help="linearisation iteration limit")
    g.add_argument("--jobs", type=int, default=1, help="worker threads for sweeps")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="wtaplan", description="Plan wind-to-ammonia supply across regions.")
    parser.add_argument("--version", action="version", version=f"wtaplan {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("validate", parents=[common], help="check a scenario and list violations")
    sub.add_parser("solve", parents=[common],
                   help="plan at least cost; writes solution.json, table_I.csv, table_II.csv")
    sub.add_parser("report", parents=[common], help="plan and print capacity and cost tables")

    p = sub.add_parser("fit", parents=[common], help="fit a potential curve to (P, E) samples")
    p.add_argument("--samples", required=True, help="CSV with columns P_MW,E_MWh_per_d")
    p.add_argument("--region", type=int, default=0)

    buf = sub.add_parser("buffer", help="buffer tank tools").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = buf.add_parser("size", parents=[common], help="smallest buffer tank for one reactor")
    p.add_argument("--ammonia", type=float, required=True, help="daily ammonia output, kg/d")
    p.add_argument("--profile", default=None, help="profiles.csv-format file (first row unless --region)")
    p.add_argument("--region", type=int, default=None)

    hsc = sub.add_parser("hsc", help="hydrogen truck routes").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    hsc.add_parser("paths", parents=[common], help="shortest truck routes and their feasibility")

    grid = sub.add_parser("grid", help="electric network tools").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = grid.add_parser("check", parents=[common], help="PTDF matrix and branch-limit report")
    p.add_argument("--injections", default=None,
                   help="CSV node,h00..h23 of injections in MW (default: flows of the optimal plan)")

    sweep = sub.add_parser("sweep", help="parameter sweeps").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = sweep.add_parser("local", parents=[common], help="Local-mode sizing against used energy")
    p.add_argument("--region", type=int, default=12)
    p.add_argument("--energies", default=None, help="start:stop:count or a comma list, MWh/d")
    p = sweep.add_parser("capex", parents=[common], help="Local LCOA over RE and EL cost multipliers")
    p.add_argument("--region", type=int, default=12)
    p.add_argument("--re", default="0.5:1.0:6")
    p.add_argument("--el", default="0.5:1.0:6")
    p.add_argument("--resolve", action="store_true", help="re-plan at every grid point")

    p = sub.add_parser("compare-cta", parents=[common], help="coal and CO2 displaced against coal-to-ammonia")
    p.add_argument("--production-mt", type=float, required=True, help="ammonia output, Mt/yr")
    p.add_argument("--lcoa", type=float, default=None, help="WtA LCOA to compare, EUR/kg")
    return parser


# -- scenario handling -------------------------------------------------------

def _scenario_dir(arg: str) -> Path:
    path = Path(arg)
    if path.is_dir():
        return path
    bundled = bundled_path(path.name)
    if bundled.is_dir():
        return bundled
    raise ScenarioError(f"scenario directory not found: {arg}")


def _profiles_override(spec: str, s, manifest: RunManifest) -> dict[int, WindProfile]:
    if spec.startswith("synth:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected synth:<intensity>:<seed>, got {spec!r}")
        x, seed = float(parts[1]), int(parts[2])
        return {r.id: synth_profile(x, seed + r.id, region=r.id) for r in s.wind_regions}
    manifest.add_input("profiles_override", spec)
    return dict(parse_profiles(Path(spec).read_text(), Path(spec).name))


def load_for(args, manifest: RunManifest, validate: bool = True):
    root = _scenario_dir(args.scenario)
    for name in sorted(SCENARIO_FILES):
        if (root / name).is_file():
            manifest.add_input(name, root / name)
    s = load_scenario(root, validate=False, name=root.name)
    if args.profiles:
        profiles = dict(s.profiles)
        profiles.update(_profiles_override(args.profiles, s, manifest))
        s = s.replace(profiles=profiles)
    if args.discount_rate is not None:
        s = s.replace(economics=s.economics.with_values(discount_rate=args.discount_rate))
    opts = {}
    if args.dmax is not None:
        opts["dmax_km"] = args.dmax
    if args.tol is not None:
        opts["slp_tol"] = args.tol
    if args.max_iter is not None:
        opts["slp_max_iter"] = args.max_iter
    if opts:
        s = s.replace(options=dataclasses.replace(s.options, **opts))
    if validate:
        rep = validate_scenario(s)
        if rep:
            raise ScenarioValidationError(rep)
    return s


def _options_snapshot(args) -> dict[str, Any]:
    skip = {"out", "verbose", "command", "action"}
    return {k: v for k, v in vars(args).items() if k not in skip}


# -- output ------------------------------------------------------------------

class Emitter:
    """Writes named artifacts into --out, or prints them when no directory is given."""

    def __init__(self, out: str | None, stdout):
        self.out = Path(out) if out else None
        self.stdout = stdout

    def emit(self, name: str, text: str) -> None:
        if self.out is None:
            self.stdout.write(text)
            return
        self.out.mkdir(parents=True, exist_ok=True)
        (self.out / name).write_text(text)
        self.stdout.write(f"wrote {self.out / name}\n")


def _text(manifest: RunManifest, lines: Sequence[str]) -> str:
    return "\n".join([manifest_line(manifest.as_dict()), *lines]) + "\n"


def _solve(s, manifest: RunManifest):
    sol = solve_configuration(s)
    d = sol.diagnostics
    manifest.slp_iterations, manifest.cuts = d.slp_iterations, d.cuts
    if d.checks is not None and not d.checks.ok:
        raise SolveError(str(d.checks))
    if not d.converged:
        log.warning("linearisation did not converge within %d iterations", s.options.slp_max_iter)
    return sol


# -- commands ----------------------------------------------------------------

def cmd_validate(args, manifest, em, t0):
    s = load_for(args, manifest, validate=False)
    rep = validate_scenario(s)
    lines = [f"scenario {s.name}: {len(s.regions)} regions, {len(s.grid)} branches, "
             f"{len(s.profiles)} profiles"]
    lines += [str(v) for v in rep]
    lines.append("valid" if not rep else f"{len(rep.errors)} error(s)")
    manifest.wall_clock_s = time.perf_counter() - t0
    em.emit("validate.txt", _text(manifest, lines))
    return EXIT_DATA if rep else EXIT_OK


def cmd_solve(args, manifest, em, t0):
    s = load_for(args, manifest)
    sol = _solve(s, manifest)
    manifest.wall_clock_s = time.perf_counter() - t0
    out = Path(args.out or "run")
    for p in write_solution(out, sol, s, manifest.as_dict()):
        em.stdout.write(f"wrote {p}\n")
    em.stdout.write(f"objective {sol.objective:.2f} EUR/d, mean LCOA {sol.mean_lcoa:.4f} EUR/kg\n")
    return EXIT_OK


def cmd_report(args, manifest, em, t0):
    s = load_for(args, manifest)
    sol = _solve(s, manifest)
    rep = decompose_costs(sol, s)
    manifest.wall_clock_s = time.perf_counter() - t0
    lines = [f"scenario {s.name}", f"objective {sol.objective:.2f} EUR/d",
             f"mean LCOA {sol.mean_lcoa:.4f} EUR/kg", "", "facilities (MW, t)",
             f"{'region':>6} {'P_RE':>10} {'P_EL(L+H)':>10} {'P_EL(E)':>10} {'m_BUF':>10} {'m_HS':>10}"]
    for row in table_I_rows(sol):
        lines.append(f"{row[0]:>6} " + " ".join(f"{v:10.2f}" for v in row[1:]))
    lines += ["", "source regions", f"{'region':>6} {'E':>10} {'P/Pmax %':>10} {'P_EL':>10} "
              f"{'LCOE':>10} {'LCOA_L':>10}"]
    for row in table_II_rows(sol, s, rep):
        lines.append(f"{row[0]:>6} {row[1]:10.1f} {row[2]:10.2f} {row[3]:10.2f} {row[4]:10.4f} {row[5]:10.4f}")
    lines += ["", "LCOA stacks (EUR/kg)"]
    for (j, mode), st in rep.stacks.items():
        parts = ", ".join(f"{k} {v:.4f}" for k, v in st.per_kg().items() if v)
        lines.append(f"  region {j:>2} {mode:<5} {st.production / 1000:9.1f} t/d  LCOA {st.lcoa:.4f}: {parts}")
    em.emit("report.txt", _text(manifest, lines))
    if args.out:
        rows = [(j, mode, st.production, st.lcoa, *(st.per_kg().get(k, 0.0) for k in LAYERS))
                for (j, mode), st in rep.stacks.items()]
        em.emit("lcoa_stacks.csv", dumps_csv(
            ("region", "mode", "production_kg_per_d", "lcoa_eur_per_kg", *LAYERS), rows, manifest.as_dict()))
    return EXIT_OK


def cmd_fit(args, manifest, em, t0):
    manifest.add_input("samples", args.samples)
    raw = np.atleast_2d(np.loadtxt(args.samples, delimiter=",", comments="#", skiprows=1, ndmin=2))
    c = fit_potential(map(tuple, raw))
    manifest.wall_clock_s = time.perf_counter() - t0
    em.emit("fit.csv", dumps_csv(("id", "a", "b", "p_re_max_mw", "residual"),
                                 [(args.region, c.a, c.b, c.p_max, c.residual)], manifest.as_dict()))
    return EXIT_OK


def cmd_buffer(args, manifest, em, t0):
    s = load_for(args, manifest)
    if args.profile:
        manifest.add_input("profile", args.profile)
        profiles = parse_profiles(Path(args.profile).read_text(), Path(args.profile).name)
        p = (profiles[args.region] if args.region is not None else next(iter(profiles.values()))).p
    else:
        rid = args.region if args.region is not None else s.wind_regions[0].id
        p = s.profiles[rid].p
    econ = s.economics
    prob = BufferProblem(hydrogen_input(args.ammonia, p, econ.k_hta), args.ammonia,
                         econ.k_min, econ.k_max, econ.k_hta)
    sched = size_buffer(prob)
    manifest.wall_clock_s = time.perf_counter() - t0
    rows = [(t, prob.n_in[t], sched.n_out[t], sched.level[t]) for t in range(p.size)]
    text = dumps_csv(("hour", "input_kg_per_h", "output_kg_per_h", "level_kg"), rows, manifest.as_dict())
    em.emit("buffer.csv", text + f"# capacity_kg: {sched.capacity!r}\n")
    return EXIT_OK


def cmd_hsc(args, manifest, em, t0):
    s = load_for(args, manifest)
    hm = HscModel.from_scenario(s)
    rows = []
    for i in hm.ids:
        for j in hm.ids:
            if i == j:
                continue
            route = "-".join(str(n) for n in hm.routes[(i, j)])
            rows.append((i, j, hm.distance(i, j), route, int(hm.is_feasible(i, j))))
    manifest.wall_clock_s = time.perf_counter() - t0
    em.emit("hsc_paths.csv", dumps_csv(("from", "to", "distance_km", "route", "feasible"), rows,
                                       manifest.as_dict()))
    return EXIT_OK


def cmd_grid(args, manifest, em, t0):
    s = load_for(args, manifest)
    gm = GridModel.from_scenario(s)
    if args.injections:
        manifest.add_input("injections", args.injections)
        raw = np.loadtxt(args.injections, delimiter=",", comments="#", skiprows=1, ndmin=2)
        inj = np.zeros((len(gm.nodes), raw.shape[1] - 1))
        pos = {n: k for k, n in enumerate(gm.nodes)}
        for row in raw:
            inj[pos[int(row[0])]] = row[1:]
    else:
        sol = _solve(s, manifest)
        inj = sol.injections
    rep = check_limits(gm, inj)
    manifest.wall_clock_s = time.perf_counter() - t0
    S = gm.node_ptdf()
    header = ("branch", *(f"node_{n}" for n in gm.nodes))
    rows = [(f"{b.from_id}-{b.to_id}", *S[e]) for e, b in enumerate(gm.branches)]
    em.emit("ptdf.csv", dumps_csv(header, rows, manifest.as_dict()))
    lim_rows = [(f"{b.from_id}-{b.to_id}", float(np.abs(rep.flows[e]).max(initial=0.0)),
                 float(rep.utilization[e].max(initial=0.0)),
                 sum(1 for v in rep.violations if v.branch == e))
                for e, b in enumerate(gm.branches)]
    em.emit("limits.csv", dumps_csv(("branch", "max_abs_flow_MW", "max_utilization", "violations"),
                                    lim_rows, manifest.as_dict()))
    return EXIT_OK if rep.ok else EXIT_DATA


def cmd_sweep(args, manifest, em, t0):
    s = load_for(args, manifest)
    if args.action == "local":
        curve = s.region(args.region).curve
        if curve is None:
            raise ScenarioError(f"region {args.region} has no wind potential")
        energies = parse_range(args.energies) if args.energies else \
            [float(v) for v in np.linspace(0.0, curve.e_max, 11)]
        pts = local_sweep(s, args.region, energies, jobs=args.jobs)
        manifest.wall_clock_s = time.perf_counter() - t0
        em.emit("sweep_local.csv", dumps_csv(
            ("E_MWh_per_d", "P_RE_MW", "P_EL_MW", "m_BUF_kg", "lcoa_eur_per_kg", "note"),
            [(p.E, p.P_RE, p.P_EL, p.m_BUF, p.lcoa, p.note) for p in pts], manifest.as_dict()))
        return EXIT_OK
    res, els = parse_range(args.re), parse_range(args.el)
    base = None if args.resolve else _solve(s, manifest)
    pts = capex_sensitivity(s, res, els, region=args.region, solution=base,
                            resolve=args.resolve, jobs=args.jobs)
    manifest.wall_clock_s = time.perf_counter() - t0
    em.emit("sweep_capex.csv", dumps_csv(("re_scale", "el_scale", "lcoa_eur_per_kg"),
                                         [(p.re_scale, p.el_scale, p.lcoa) for p in pts],
                                         manifest.as_dict()))
    return EXIT_OK


def cmd_compare_cta(args, manifest, em, t0):
    s = load_for(args, manifest)
    c = cta_comparison(args.production_mt * 1e6, args.lcoa, s.economics)
    manifest.wall_clock_s = time.perf_counter() - t0
    lines = [f"ammonia output: {args.production_mt:g} Mt/yr",
             f"coal displaced: {c.coal_saved_tce / 1e6:.2f} Mtce ({c.coal_saved_tce:.6g} tce)",
             f"CO2 avoided: {c.co2_avoided_t / 1e6:.2f} Mt CO2 ({c.co2_avoided_t:.6g} t)",
             f"coal-to-ammonia benchmark: {s.economics.cta_lcoa:g} EUR/kg"]
    if c.lcoa_gap is not None:
        lines.append(f"WtA minus CtA: {c.lcoa_gap:+.4f} EUR/kg")
    em.emit("compare_cta.txt", _text(manifest, lines))
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "solve": cmd_solve, "report": cmd_report, "fit": cmd_fit,
            "buffer": cmd_buffer, "hsc": cmd_hsc, "grid": cmd_grid, "sweep": cmd_sweep,
            "compare-cta": cmd_compare_cta}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        old = sys.stderr
        sys.stderr = stderr
        try:
            args = parser.parse_args(argv)
        finally:
            sys.stderr = old
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    name = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    manifest = RunManifest(name, options=_options_snapshot(args))
    em = Emitter(args.out, stdout)
    t0 = time.perf_counter()
    try:
        return COMMANDS[args.command](args, manifest, em, t0)
    except SOLVER_ERRORS as exc:
        stderr.write(f"solver failure: {exc}\n")
        return EXIT_SOLVER
    except DATA_ERRORS as exc:
        stderr.write(f"data error: {exc}\n")
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
