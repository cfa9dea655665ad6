from __future__ import annotations

import csv
import json
import shutil
import subprocess

import pytest

from clforge import cli
from clforge import quadric as qd
from clforge.cli import LINE_COLUMNS, main
from clforge.verification import Report

from conftest import ctx_for


def test_construct_csv(tmp_path, capsys):
    out = tmp_path / "q5"
    assert main(["construct", "--p", "5", "-o", str(out), "--format", "csv"]) == 0
    assert "|M|=372" in capsys.readouterr().out
    text = (out / "lines.csv").read_text().splitlines()
    header = [l for l in text if l.startswith("#")]
    assert any("isometry" in h for h in header) and any("poly=" in h for h in header)
    rows = list(csv.reader(l for l in text if not l.startswith("#")))
    assert rows[0] == LINE_COLUMNS
    body = [[int(c) for c in r] for r in rows[1:]]
    assert len(body) == 372
    fq = ctx_for(5).small
    for r in body[:50]:
        assert int(qd.plucker_Q(fq, r[:6])) == 0
        # the two points span the line with these coordinates
        back = qd.plucker_keys(fq, qd.plucker_of_points(fq, r[6:10], r[10:14]))[0]
        assert back == qd.plucker_keys(fq, r[:6])[0]
    cons = json.loads((out / "construction.json").read_text())
    assert cons["x"] == 12 and len(cons["E"]) == 12 and len(cons["L0"]) == 6
    pts = json.loads((out / "points.json").read_text())
    assert len(pts["points"]) == 372 and len(pts["orbit_representatives"]) == 12


def test_construct_json_q8(tmp_path):
    out = tmp_path / "q8"
    assert main(["construct", "--p", "2", "--n", "3", "-o", str(out)]) == 0
    data = json.loads((out / "lines.json").read_text())
    assert data["columns"] == LINE_COLUMNS
    assert len(data["rows"]) == 27 * 73


def test_verify_bundle_is_deterministic(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["verify", "--p", "2", "--checks", "all", "--deterministic", "-o", str(p)]) == 0
    a, b = (p.read_text() for p in paths)
    assert a == b
    bundle = json.loads(a)
    assert bundle["pass"] is True
    checks = [r["check"] for r in bundle["reports"]]
    assert "tight" in checks and "generators" in checks and "oracle.sums" in checks
    for r in bundle["reports"]:
        assert r["elapsed_ms"] == 0 and r["violations"] == 0
        assert "stats" in r["params"] and "violators" in r["params"]


def test_verify_csv(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["verify", "--p", "5", "--checks", "tight,spreads", "--n-random-spreads", "3", "--format", "csv", "-o", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["check", "q", "p", "n", "pass", "violations", "elapsed_ms"]
    assert [r[0] for r in rows[1:]] == ["tight", "spreads"]


def test_oracle_command(tmp_path, capsys):
    assert main(["oracle", "--p", "2", "--deterministic", "-o", str(tmp_path / "o.json")]) == 0
    assert capsys.readouterr().out.strip().endswith("PASS")


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--p", "3"],
        ["construct", "--p", "7"],
        ["oracle", "--p", "17"],
        ["verify", "--p", "2", "--n", "3", "--checks", "generators"],
        ["verify", "--p", "17", "--checks", "oracle"],
        ["construct", "--p", "2", "--poly", "1,0,0,1"],
        ["construct", "--p", "47", "--max-field-size", "1000"],
    ],
)
def test_parameter_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith("clforge: ")


def test_unsupported_q_message(capsys):
    assert main(["verify", "--p", "3"]) == 2
    assert "q ≡ 2 (mod 3) required, got q = 3" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--p", "5", "--checks", "bogus"],
        ["verify", "--p", "5", "--sample", "0"],
        ["verify", "--p", "5", "--threads", "0"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_unwritable_output(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["verify", "--p", "2", "-o", str(blocker / "x.json")]) == 2


@pytest.mark.skipif(shutil.which("clforge") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["clforge", "verify", "--p", "2"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.strip().endswith("PASS")


def test_failed_check_exits_1(monkeypatch, capsys):
    def failing(lc, checks, **kw):
        rep = Report.for_ctx("tight", lc.ctx)
        rep.fail("forced")
        return [rep]

    monkeypatch.setattr(cli, "run_checks", failing)
    assert main(["verify", "--p", "2"]) == 1
    assert capsys.readouterr().out.strip().endswith("FAIL")


def test_construct_is_byte_identical(tmp_path):
    for name in ("a", "b"):
        assert main(["construct", "--p", "5", "-o", str(tmp_path / name), "--format", "csv"]) == 0
    for f in ("construction.json", "points.json", "lines.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
