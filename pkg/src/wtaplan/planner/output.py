"""File-facing renderings of a solved plan: one JSON document and two flat tables.

Every writer takes a run manifest (a plain mapping) and embeds it: as the
``manifest`` section of the JSON document, and as a leading ``# manifest:``
comment line in CSV files. Float formatting is ``repr``-based, so identical
inputs give identical bytes.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from ..data_io import Scenario
from .costs import LAYERS, CostReport, decompose_costs

TABLE_I_COLUMNS = ("region", "P_RE_MW", "P_EL_LH_MW", "P_EL_E_MW", "m_BUF_t", "m_HS_t")
TABLE_II_COLUMNS = ("region", "E_MWh_per_d", "P_RE_share_of_max_pct", "P_EL_LH_MW",
                    "LCOE_eur_per_kWh", "LCOA_L_eur_per_kg")


def _clean(x: Any) -> Any:
    """JSON-ready copy: numpy scalars and arrays become floats and lists, NaN becomes null."""
    if isinstance(x, Mapping):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, np.ndarray):
        return [_clean(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return None if math.isnan(v) or math.isinf(v) else v
    return x


def dumps_json(doc: Mapping[str, Any]) -> str:
    return json.dumps(_clean(doc), indent=2, allow_nan=False) + "\n"


def manifest_line(manifest: Mapping[str, Any]) -> str:
    return "# manifest: " + json.dumps(_clean(manifest), sort_keys=True, separators=(",", ":"))


def _cell(v: Any) -> str:
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return ""
        return repr(v)
    return str(v)


def dumps_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]],
              manifest: Mapping[str, Any] | None = None) -> str:
    lines = [manifest_line(manifest)] if manifest is not None else []
    lines.append(",".join(columns))
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def read_csv_body(text: str) -> tuple[list[str], list[list[str]]]:
    """Header and rows of a CSV written by :func:`dumps_csv`, skipping comments."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


def table_I_rows(sol) -> list[tuple]:
    """Facility capacities per region (turbines, both electrolyzers, buffer and storage tanks)."""
    return [(rid, rr.P_RE, rr.P_EL_LH, rr.P_EL_E, rr.m_BUF / 1000.0, rr.m_HS / 1000.0)
            for rid, rr in sorted(sol.regions.items())]


def table_II_rows(sol, s: Scenario, report: CostReport) -> list[tuple]:
    """Source regions that use wind: energy, turbine share of potential, LCOE and LCOA."""
    rows = []
    for rid, rr in sorted(sol.regions.items()):
        if rr.E <= 0:
            continue
        p_max = s.region(rid).p_re_max
        rows.append((rid, rr.E, 100.0 * rr.P_RE / p_max, rr.P_EL_LH,
                     report.source_lcoe.get(rid, math.nan),
                     report.source_lcoa.get(rid, math.nan)))
    return rows


def solution_document(sol, s: Scenario, report: CostReport | None = None,
                      manifest: Mapping[str, Any] | None = None) -> dict[str, Any]:
    report = report or decompose_costs(sol, s)
    capacities = {
        str(rid): {
            "P_RE_MW": rr.P_RE, "P_EL_LH_MW": rr.P_EL_LH, "P_EL_E_MW": rr.P_EL_E,
            "m_BUF_L_kg": rr.m_BUF_L, "m_BUF_E_kg": rr.m_BUF_E, "m_HS_kg": rr.m_HS,
            "A_L_kg_per_d": rr.A_L, "A_E_kg_per_d": rr.A_E, "A_H_kg_per_d": rr.A_H,
            "E_MWh_per_d": rr.E, "E_L_MWh_per_d": rr.E_L, "E_ES_MWh_per_d": rr.E_ES,
            "E_HS_MWh_per_d": rr.E_HS, "E_ED_MWh_per_d": rr.E_ED,
        }
        for rid, rr in sorted(sol.regions.items())
    }
    flows = {
        "electricity": [{"from": i, "to": j, "MWh_per_d": e, "hourly_MW": sol.en_hourly[(i, j)]}
                        for (i, j), e in sorted(sol.en.items()) if e > 0],
        "hydrogen": [{"from": i, "to": j, "kg_per_d": h}
                     for (i, j), h in sorted(sol.hydrogen.items()) if h > 0],
        "grid": {
            "nodes": list(sol.nodes),
            "injections_MW": {str(n): sol.injections[k] for k, n in enumerate(sol.nodes)},
            "branches": [{"from": a, "to": b, "flow_MW": sol.branch_flows[e]}
                         for e, (a, b) in enumerate(sol.branches)],
        },
    }
    schedules = [{"region": j, "mode": mode, "capacity_kg": br.schedule.capacity,
                  "input_kg_per_h": br.n_in, "output_kg_per_h": br.schedule.n_out,
                  "level_kg": br.schedule.level}
                 for (j, mode), br in sorted(sol.buffers.items())]
    stacks = [{"region": j, "mode": mode, "production_kg_per_d": st.production,
               "lcoa_eur_per_kg": st.lcoa, "eur_per_kg": {k: st.per_kg().get(k, 0.0) for k in LAYERS}}
              for (j, mode), st in report.stacks.items()]
    d = sol.diagnostics
    checks = d.checks
    diagnostics = {
        "objective_eur_per_d": sol.objective,
        "mean_lcoa_eur_per_kg": sol.mean_lcoa,
        "converged": d.converged,
        "slp_iterations": d.slp_iterations,
        "cuts": d.cuts,
        "lp_pivots": d.lp_pivots,
        "max_violation": d.max_violation,
        "projected": d.projected,
        "kkt_ok": None if d.kkt is None else d.kkt.ok,
        "variables": d.n_vars,
        "rows": d.n_rows,
        "unattributed_eur_per_d": report.unattributed,
        "checks_ok": None if checks is None else checks.ok,
        "check_residuals": {} if checks is None else dict(sorted(checks.residuals.items())),
    }
    doc: dict[str, Any] = {"scenario": sol.scenario_name}
    if manifest is not None:
        doc["manifest"] = dict(manifest)
    doc.update(capacities=capacities, flows=flows, schedules=schedules,
               lcoa_stacks=stacks, diagnostics=diagnostics)
    return doc


def write_solution(out_dir: str | Path, sol, s: Scenario,
                   manifest: Mapping[str, Any] | None = None) -> list[Path]:
    """solution.json, table_I.csv and table_II.csv in ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = decompose_costs(sol, s)
    files = {
        "solution.json": dumps_json(solution_document(sol, s, report, manifest)),
        "table_I.csv": dumps_csv(TABLE_I_COLUMNS, table_I_rows(sol), manifest),
        "table_II.csv": dumps_csv(TABLE_II_COLUMNS, table_II_rows(sol, s, report), manifest),
    }
    paths = []
    for name, text in files.items():
        p = out / name
        p.write_text(text)
        paths.append(p)
    return paths
