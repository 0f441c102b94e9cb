import json
import subprocess
import sys

import pytest

from coprimelie import instances as I
from coprimelie.catalog import construct_catalog_group
from coprimelie.cli import main
from coprimelie.groups import dumps_cayley


def run(tmp_path, *argv):
    out = tmp_path / "out.json"
    code = main([*argv, "--out", str(out)])
    doc = json.loads(out.read_text()) if out.exists() else None
    return code, doc


def test_analyze_group(tmp_path):
    code, doc = run(tmp_path, "analyze-group", "symmetric(3)")
    assert code == 0
    obs = doc["reports"][0]["checks"][0]["observed"]
    assert obs["class"] is None and obs["gamma_infinity"] == 3 and obs["series_orders"] == [6, 3]


def test_check_frobenius_pass_and_fail(tmp_path):
    code, _ = run(tmp_path, "check-frobenius", I.frobenius_spec(5, 4))
    assert code == 0
    code, doc = run(tmp_path, "check-frobenius", "cyclic(6)", "--kernel", "0,2,4", "--complement", "0,3")
    assert code == 1
    assert doc["status"] == "fail"


def test_assoc_lie_and_validate_round_trip(tmp_path):
    lie = tmp_path / "he5.lie"
    code, doc = run(tmp_path, "assoc-lie", "extraspecial_exponent_q(5)", "--save-lie", str(lie))
    assert code == 0
    assert main(["validate", str(lie), "--out", str(tmp_path / "v.json")]) == 0
    tbl = tmp_path / "d4.tbl"
    tbl.write_text(dumps_cayley(construct_catalog_group("dihedral(4)")))
    assert main(["validate", str(tbl), "--out", str(tmp_path / "v.json")]) == 0


def test_validate_reports_broken_table(tmp_path):
    tbl = tmp_path / "bad.tbl"
    tbl.write_text("3\n0 1 2\n1 0 0\n2 0 1\n")
    assert main(["validate", str(tbl), "--out", str(tmp_path / "v.json")]) == 1


def test_grade_builtin_and_abstain(tmp_path):
    code, doc = run(tmp_path, "grade", "heisenberg_gf16")
    assert code == 0
    code, _ = run(tmp_path, "grade", "nonnilpotent_gf11", "--cap", "4")
    assert code == 2


def test_run_config_and_figures(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"scenarios": [
        {"kind": "grading_criterion", "instances": ["heisenberg_gf11", "free_class3_rank2_gf11"]},
        {"kind": "lemma_metacyclic", "groups": ["cyclic(25)"]},
    ]}))
    figs = tmp_path / "figs"
    code = main(["run", str(cfg), "--out", str(tmp_path / "r.json"), "--figures", str(figs)])
    assert code == 0
    pngs = sorted(p.name for p in figs.glob("*.png"))
    assert "status.png" in pngs and "grading_dims.png" in pngs
    assert all((figs / n).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n" for n in pngs)


def test_text_output_is_stable(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        main(["verify", "metacyclic", "--format", "text", "--out", str(path)])
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("# status\tpass")


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["verify", "nope"],
    ["analyze-group", "cyclic("],
    ["run", "/nonexistent/config.json"],
    ["analyze-group", "cyclic(5)", "--cap", "0"],
    ["grade"],
])
def test_usage_errors_exit_3(argv, tmp_path):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(argv + ["--out", str(tmp_path / "x")] if argv[0] != "bogus" else argv))
    assert exc.value.code == 3


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "coprimelie", "verify", "frobenius-generation"],
                          capture_output=True, cwd=tmp_path)
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    checks = doc["reports"][0]["checks"]
    assert any(c["observed"].get("spanning_determinant") == 4 for c in checks)
