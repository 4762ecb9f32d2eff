from __future__ import annotations

import io
import json
import re
import subprocess
import sys

import numpy as np
import pytest

from wtaplan import cli
from wtaplan.cli import EXIT_DATA, EXIT_OK, EXIT_SOLVER, EXIT_USAGE, run
from wtaplan.data_io import bundled_path
from wtaplan.lp import LpError
from wtaplan.planner.output import read_csv_body

WALL = re.compile(r'"wall_clock_s":\s*[0-9.eE+-]+')


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def manifest_of(text: str) -> dict:
    first = text.splitlines()[0]
    assert first.startswith("# manifest: ")
    return json.loads(first[len("# manifest: "):])


def without_clock(text: str) -> str:
    return WALL.sub('"wall_clock_s": 0', text)


@pytest.fixture(scope="module")
def solved(tmp_path_factory):
    a, b = tmp_path_factory.mktemp("a"), tmp_path_factory.mktemp("b")
    for d in (a, b):
        code, out, _ = call("solve", "--out", str(d))
        assert code == EXIT_OK, out
    return a, b


def test_solve_writes_three_artifacts(solved):
    a, _ = solved
    assert sorted(p.name for p in a.iterdir()) == ["solution.json", "table_I.csv", "table_II.csv"]
    doc = json.loads((a / "solution.json").read_text())
    m = doc["manifest"]
    assert m["command"] == "solve" and m["slp_iterations"] >= 1
    assert set(m["inputs"]) >= {"regions.csv", "profiles.csv"}
    assert all(len(h) == 64 for h in m["inputs"].values())
    assert doc["diagnostics"]["checks_ok"] is True
    for name in ("table_I.csv", "table_II.csv"):
        manifest_of((a / name).read_text())


def test_rerun_is_byte_identical_except_clock(solved):
    a, b = solved
    for name in ("solution.json", "table_I.csv", "table_II.csv"):
        ta, tb = (a / name).read_text(), (b / name).read_text()
        assert without_clock(ta) == without_clock(tb), name


def test_table_I_has_every_region(solved):
    header, rows = read_csv_body((solved[0] / "table_I.csv").read_text())
    assert header[0] == "region" and [int(r[0]) for r in rows] == list(range(1, 13))


def test_validate_bundled():
    code, out, _ = call("validate")
    assert code == EXIT_OK and "valid" in out
    assert manifest_of(out)["command"] == "validate"


def test_validate_broken_scenario(tmp_path):
    src = bundled_path()
    for f in src.iterdir():
        (tmp_path / f.name).write_text(f.read_text())
    text = (tmp_path / "distances.csv").read_text().splitlines()
    cells = text[2].split(",")
    cells[1] = str(float(cells[1]) + 7.0)  # break symmetry
    text[2] = ",".join(cells)
    (tmp_path / "distances.csv").write_text("\n".join(text) + "\n")
    code, out, _ = call("validate", "--scenario", str(tmp_path))
    assert code == EXIT_DATA and "error" in out


def test_missing_scenario_is_data_error(tmp_path):
    code, _, err = call("validate", "--scenario", str(tmp_path / "nowhere"))
    assert code == EXIT_DATA and err


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["solve", "--tol", "abc"],
                                  ["fit"], ["buffer", "size"], ["sweep", "capex", "--bogus"]])
def test_usage_errors(argv):
    code, _, _ = call(*argv)
    assert code == EXIT_USAGE


@pytest.mark.parametrize("flag", [["--max-iter", "0"], ["--tol", "-1"], ["--dmax", "-5"],
                                  ["--discount-rate", "1.5"]])
def test_bad_overrides_are_data_errors(flag):
    code, _, _ = call("validate", *flag)
    assert code == EXIT_DATA


def test_solver_failure_exit_code(monkeypatch):
    def broken(*a, **k):
        raise LpError("iteration limit reached")

    monkeypatch.setattr(cli, "solve_configuration", broken)
    code, _, err = call("report")
    assert code == EXIT_SOLVER and "iteration limit" in err


def test_report_text_and_stacks(tmp_path):
    code, out, _ = call("report", "--out", str(tmp_path))
    assert code == EXIT_OK
    text = (tmp_path / "report.txt").read_text()
    assert manifest_of(text)["command"] == "report"
    assert "mean LCOA" in text and "region 12 local" in text
    header, rows = read_csv_body((tmp_path / "lcoa_stacks.csv").read_text())
    assert header[:4] == ["region", "mode", "production_kg_per_d", "lcoa_eur_per_kg"]
    assert rows


def test_fit_recovers_curve(tmp_path):
    P = np.linspace(100, 2600, 12)
    E = -6.34e-05 * P ** 2 + 11.44 * P
    f = tmp_path / "samples.csv"
    f.write_text("P_MW,E_MWh_per_d\n" + "".join(f"{float(p)!r},{float(e)!r}\n" for p, e in zip(P, E)))
    code, out, _ = call("fit", "--samples", str(f), "--region", "8")
    assert code == EXIT_OK
    header, rows = read_csv_body(out)
    a, b = float(rows[0][1]), float(rows[0][2])
    assert a == pytest.approx(-6.34e-05, rel=1e-9) and b == pytest.approx(11.44, rel=1e-9)
    assert "samples" in manifest_of(out)["inputs"]


def test_fit_degenerate_samples(tmp_path):
    f = tmp_path / "samples.csv"
    f.write_text("P_MW,E_MWh_per_d\n1,10\n1,10\n")
    assert call("fit", "--samples", str(f))[0] == EXIT_DATA


def test_buffer_size_flat_profile_needs_none(tmp_path):
    f = tmp_path / "flat.csv"
    f.write_text("region_id," + ",".join(f"h{t:02d}" for t in range(24)) + "\n"
                 + "1," + ",".join([repr(1 / 24)] * 24) + "\n")
    code, out, _ = call("buffer", "size", "--ammonia", "100000", "--profile", str(f))
    assert code == EXIT_OK
    cap = float(out.strip().splitlines()[-1].split(":")[1])
    assert cap == pytest.approx(0.0, abs=1e-6)
    header, rows = read_csv_body(out)
    assert header == ["hour", "input_kg_per_h", "output_kg_per_h", "level_kg"] and len(rows) == 24


def test_buffer_size_bundled_region():
    code, out, _ = call("buffer", "size", "--ammonia", "274000", "--region", "12")
    assert code == EXIT_OK
    assert float(out.strip().splitlines()[-1].split(":")[1]) > 0


def test_hsc_paths():
    code, out, _ = call("hsc", "paths")
    assert code == EXIT_OK
    manifest_of(out)
    assert "310" in out  # Bayannaoer to Alashan via Wuhai


def test_grid_check_with_injections(tmp_path):
    inj = tmp_path / "inj.csv"
    inj.write_text("node,MW\n2,100\n1,-100\n")
    code, out, _ = call("grid", "check", "--injections", str(inj), "--out", str(tmp_path / "g"))
    assert code in (EXIT_OK, EXIT_DATA)
    names = sorted(p.name for p in (tmp_path / "g").iterdir())
    assert names == ["limits.csv", "ptdf.csv"]
    for n in names:
        manifest_of((tmp_path / "g" / n).read_text())


def test_sweep_local_skips_beyond_potential():
    code, out, _ = call("sweep", "local", "--region", "12", "--energies", "100,400,500")
    assert code == EXIT_OK
    header, rows = read_csv_body(out)
    assert len(rows) == 3 and "skipped" in ",".join(rows[-1])


def test_sweep_capex_grid():
    code, out, _ = call("sweep", "capex")
    assert code == EXIT_OK
    header, rows = read_csv_body(out)
    assert len(rows) == 36
    ones = [r for r in rows if float(r[0]) == 1.0 and float(r[1]) == 1.0]
    assert len(ones) == 1


def test_compare_cta_text():
    code, out, _ = call("compare-cta", "--production-mt", "1.06", "--lcoa", "0.6065")
    assert code == EXIT_OK
    assert "1.79 Mtce" in out and "4.89 Mt" in out
    assert manifest_of(out)["options"]["production_mt"] == 1.06


def test_entry_point_runs_as_module():
    r = subprocess.run([sys.executable, "-m", "wtaplan.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "wtaplan" in r.stdout
