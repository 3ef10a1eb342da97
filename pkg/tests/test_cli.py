import json
import subprocess
import sys

import pytest

from emcs.cli import main
from emcs.fixtures import cargo_obs_text, cargo_text, m2, msj
from emcs.syntax import serialize_system


@pytest.fixture
def files(tmp_path):
    spec = tmp_path / "cargo.emcs"
    obs = tmp_path / "cargo.obs"
    spec.write_text(cargo_text())
    obs.write_text(cargo_obs_text())
    return tmp_path, str(spec), str(obs)


def _records(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


def test_validate(files, capsys):
    _, spec, _ = files
    assert main(["validate", spec]) == 0
    assert "acyclic" in capsys.readouterr().out


def test_validate_reports_problems(tmp_path, capsys):
    p = tmp_path / "bad.emcs"
    p.write_text("context C : identity { bridge { add(P(x)) <- not (1:Q(x)). } }")
    assert main(["validate", str(p)]) == 1
    assert "unsafe-rule" in capsys.readouterr().err


def test_run_cargo(files, capsys):
    tmp, spec, obs = files
    trace = tmp / "trace.jsonl"
    assert main(["run", spec, obs, "--semantics", "wfs", "--trace", str(trace)]) == 0
    recs = _records(capsys.readouterr().out)
    assert [r["instant"] for r in recs] == [1, 2, 3]
    assert "FullInspection(s1)" in recs[0]["state"]["C4"]
    full = _records(trace.read_text())
    assert set(full[0]) >= {"instant", "state", "kbs", "app_now", "app_next"}
    assert main(["check", spec, obs, str(trace)]) == 0


def test_run_size_and_semantics(files, capsys):
    _, spec, obs = files
    assert main(["run", spec, obs, "--size", "2"]) == 0
    wfs_out = capsys.readouterr().out
    assert len(_records(wfs_out)) == 2
    assert main(["run", spec, obs, "--size", "2", "--semantics", "grounded"]) == 0
    assert capsys.readouterr().out == wfs_out
    assert main(["run", spec, obs, "--size", "7"]) == 2


def test_check_perturbed_state(files, capsys):
    tmp, spec, obs = files
    assert main(["run", spec, obs]) == 0
    recs = _records(capsys.readouterr().out)
    recs[1]["state"]["C4"].append("FullInspection(s2)")
    bad = tmp / "bad.jsonl"
    bad.write_text("\n".join(json.dumps(r) for r in recs))
    assert main(["check", spec, obs, str(bad)]) == 1
    captured = capsys.readouterr()
    assert "instant 2" in captured.err and _records(captured.out) == [{"ok": False, "instant": 2}]


def test_grounded_failure_exit_code(tmp_path, capsys):
    spec = tmp_path / "mol.emcs"
    spec.write_text("context O : observation { vocab o/0; }\n"
                    "context C : identity { bridge { add(p) <- not (2:p). } }\n")
    obs = tmp_path / "o.obs"
    obs.write_text("{}\n")
    assert main(["run", str(spec), str(obs), "--semantics", "grounded"]) == 1
    assert "no grounded equilibrium" in capsys.readouterr().err
    assert main(["run", str(spec), str(obs)]) == 0


def test_input_errors(tmp_path, files, capsys):
    _, spec, obs = files
    assert main(["run", str(tmp_path / "missing.emcs"), obs]) == 2
    broken = tmp_path / "broken.emcs"
    broken.write_text("context {")
    assert main(["validate", str(broken)]) == 2
    bad_obs = tmp_path / "bad.obs"
    bad_obs.write_text('{"C1": []}\n{"Nope": []}\n')
    assert main(["run", spec, str(bad_obs)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["frobnicate"]) == 2


def test_reduct(tmp_path, capsys):
    spec = tmp_path / "m2.emcs"
    spec.write_text(serialize_system(m2()))
    st = tmp_path / "s.jsonl"
    st.write_text(json.dumps({"state": {"C1": ["r"], "C2": []}}))
    assert main(["reduct", str(spec), str(st)]) == 0
    out = capsys.readouterr().out
    assert "add(p) <- (2:q)." in out and "add(q)" not in out
    st.write_text(json.dumps({"state": {"C1": [], "C2": []}}))
    assert main(["reduct", str(spec), str(st)]) == 0
    assert "add(q) <- ." not in capsys.readouterr().out


def test_oracle(tmp_path, capsys):
    spec = tmp_path / "msj.emcs"
    spec.write_text(serialize_system(msj()))
    assert main(["oracle", str(spec)]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["equilibria"] == [{"C1": []}, {"C1": ["p"]}]
    assert rec["minimal"] == [{"C1": []}]
    assert rec["properties"]["passed"]


def test_module_entry_point(files):
    _, spec, _ = files
    r = subprocess.run([sys.executable, "-m", "emcs", "validate", spec], capture_output=True, text=True)
    assert r.returncode == 0
