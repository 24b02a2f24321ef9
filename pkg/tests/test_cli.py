import json
import subprocess
import sys

import pytest

from builders import corpus
from finmodel import cli, fixtures
from finmodel.ainf import validate


def run(capsys, *argv):
    code = cli.main(list(argv) + ["--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.mark.parametrize("name", fixtures.NAMES)
def test_fixture_parses_validates_and_roundtrips(name):
    text = fixtures.text(name)
    A = cli.parse_text(text)
    assert validate(A).ok
    assert cli.serialize(A) == text
    assert cli.serialize(cli.parse(fixtures.path(name))) == text


def test_fixtures_match_builders():
    built = corpus()
    for name in fixtures.NAMES:
        assert cli.serialize(built[name]) == fixtures.text(name)


def test_info_and_interval(capsys):
    code, rep = run(capsys, "info", "--input", str(fixtures.path("exterior")))
    assert code == 0 and rep["payload"]["interval"] == [-1, 0] and rep["payload"]["connective"]


def test_finite_model_on_dual_numbers(capsys):
    code, rep = run(capsys, "finite-model", "--input", str(fixtures.path("dual_numbers")))
    assert code == 0 and rep["payload"]["cohomology_dims"] == {"0": 2}


def test_generation_bound_on_dual_numbers(capsys):
    code, rep = run(capsys, "generation-bound", "--input", str(fixtures.path("dual_numbers")))
    assert code == 0
    p = rep["payload"]
    assert (p["N"], p["N_prime"], p["N_double_prime"]) == (1, 2, 2)


def test_end_window_interval(capsys):
    code, rep = run(capsys, "end-window", "--a", "-2", "--b", "0", "--m", "3")
    assert code == 0 and rep["payload"]["interval"] == [0, 8]
    code, rep = run(capsys, "end-window", "--input", str(fixtures.path("k")), "--window", "0", "3")
    assert rep["payload"]["dims"] == {"0": 1, "1": 1, "2": 1, "3": 1}


def test_massey_pipeline(capsys, tmp_path):
    path = str(fixtures.path("massey_dga"))
    code, rep = run(capsys, "minimal-model", "--input", path)
    assert code == 0 and rep["payload"]["arities"] == [2, 3]
    code, rep = run(capsys, "verify-model", "--input", path)
    assert code == 0 and rep["payload"]["products"]
    out = tmp_path / "cert.json"
    code, rep = run(capsys, "certify", "--input", path, "--output", str(out))
    assert code == 0 and rep["payload"]["verified"]
    code, rep = run(capsys, "verify-cert", "--input", str(out))
    assert code == 0 and rep["payload"]["verified"]
    cert = json.loads(out.read_text())
    cert["steps"][0]["third"][0]["shift"] = 99
    out.write_text(json.dumps(cert))
    code, rep = run(capsys, "verify-cert", "--input", str(out))
    assert code == 2 and rep["status"] == "rejected"


def _write(tmp_path, data):
    p = tmp_path / "alg.json"
    p.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(p)


def test_input_errors_exit_1(capsys, tmp_path):
    base = json.loads(fixtures.text("dual_numbers"))
    code, rep = run(capsys, "info", "--input", _write(tmp_path, dict(base, field="F4")))
    assert code == 1 and "not prime" in rep["diagnostics"][0]
    bad = dict(base, basis=base["basis"] + [["x", -1]],
               ops={"2": [{"in": ["eps", "eps"], "out": {"x": "1"}}]})
    code, rep = run(capsys, "info", "--input", _write(tmp_path, bad))
    assert code == 1 and "m_2(eps, eps) -> x" in rep["diagnostics"][0]
    code, rep = run(capsys, "info", "--input", _write(tmp_path, "{ nope"))
    assert code == 1 and "line 1" in rep["diagnostics"][0]
    code, rep = run(capsys, "info", "--input", str(tmp_path / "missing.json"))
    assert code == 1
    code, rep = run(capsys, "info")
    assert code == 1
    code, rep = run(capsys, "end-window", "--a", "1", "--b", "0", "--m", "1")
    assert code == 1


def test_math_violation_exit_2(capsys, tmp_path):
    base = json.loads(fixtures.text("truncated_poly"))
    base["ops"]["2"].append({"in": ["t", "t2"], "out": {"t2": "1"}})
    code, rep = run(capsys, "validate", "--input", _write(tmp_path, base))
    assert code == 2 and rep["payload"]["arity"] == 3


def test_internal_breach_exit_3(capsys, monkeypatch):
    def boom(args, A):
        raise RuntimeError("invariant")
    monkeypatch.setitem(cli.COMMANDS, "info", boom)
    code, rep = run(capsys, "info", "--input", str(fixtures.path("k")))
    assert code == 3 and rep["status"] == "internal-error"


def test_field_override(capsys):
    code, rep = run(capsys, "info", "--input", str(fixtures.path("dual_numbers")), "--field", "5")
    assert code == 0 and rep["payload"]["field"] == "5"


def test_report_roundtrip():
    r = cli.Report("info", payload={"dims": {"0": 2}}, diagnostics=["note"])
    assert cli.Report.from_dict(json.loads(r.to_json())) == r
    assert "info: ok" in r.to_text()


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "finmodel.cli", "end-window", "--a", "0", "--b", "0", "--m", "4"],
                         capture_output=True, text=True, check=True)
    assert "[3, 3]" in out.stdout
