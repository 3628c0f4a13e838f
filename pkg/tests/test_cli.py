import json
import subprocess
import sys

import pytest

from rank2comm.cli import main, run_job, to_json, to_text
from rank2comm.dsl import parse_spec

N1 = "job check\ngenus 1\npotential rational { pole { at 0/1  n 1  phi -4 280/1 } }\n"
G3 = "job check\ngenus 1\npotential elliptic_wp2 { n 1  g2 4/1  g3 1/1 }\n"
FROB = "job frobenius\nlambda 1/1\npotential rational { pole { at 0/1  phi -4 280/1 } }\n"


@pytest.fixture
def write(tmp_path):
    def _write(text, name="job.spec"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


def _run(text):
    return run_job(parse_spec(text))


def test_check_n1_rational():
    rep, code = _run(N1)
    assert code == 0 and rep["status"] == "pass"
    assert rep["constants"] == {"C1": "0/1"}
    assert rep["curve"] == {"coeffs": ["0/1", "0/1", "0/1", "1/1"], "degree": 3, "discriminant": "0/1"}
    assert [v["tag"] for v in rep["verdicts"]] == ["Theorem1.1", "closure", "curve"]
    assert rep["schema"] == 1


def test_check_g3_violation():
    rep, code = _run(G3)
    assert code == 2
    (ob,) = rep["obstructions"]
    assert (ob["tag"], ob["k"], ob["l"], ob["value"]) == ("Theorem1.1", 1, 2, "20/1")


def test_frobenius_job():
    rep, code = _run(FROB)
    assert code == 0
    assert {f["branch"] for f in rep["frobenius"]} == {"low", "high"}
    assert all(f["status"] == "pass" and f["lambda"] == "1/1" for f in rep["frobenius"])
    low = [f for f in rep["frobenius"] if f["branch"] == "low"][0]
    assert low["resonances"] == [{"m": 6, "obstruction": "0/1", "free": True}]


def test_curve_job_and_polynomial_potential():
    rep, code = _run("job curve\ngenus 1\npotential polynomial { V 0/1 0/1 0/1 1/1  W 0/1 2/1 }\n")
    assert code == 0 and rep["curve"]["degree"] == 3


def test_numbers_are_exact_strings():
    rep, _ = _run("job check\ngenus 1\npotential elliptic_wp2 { n 1 g2 7/2 g3 0/1 }\n")
    assert rep["constants"] == {"C1": "-147/1"}

    def walk(x):
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)
        else:
            assert not isinstance(x, float)
    walk(rep)


def test_explore_job_exits_zero():
    rep, code = _run("job explore\npotential rational { pole { at 0/1 n 1 } pole { at 1/1 n 1 } }\n")
    assert code == 0
    (v,) = rep["verdicts"]
    assert v["exploratory"] and v["S"] == 3


@pytest.mark.parametrize("text,code", [(N1, 0), (G3, 2), (FROB, 0)])
def test_main_exit_codes(write, capsys, text, code):
    assert main([write(text)]) == code
    assert json.loads(capsys.readouterr().out)["schema"] == 1


def test_output_is_byte_identical(write, tmp_path):
    path = write(N1)
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert main([path, "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0] == to_json(_run(N1)[0]).encode()


def test_text_format(write, capsys):
    assert main([write(N1), "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "curve: w^2 = (1/1)*z^3" in out
    assert "[PASS] closure" in out
    assert to_text(_run(G3)[0]).startswith("job: check")


def test_format_statement_in_spec(write, capsys):
    assert main([write("format text\n" + N1)]) == 0
    assert capsys.readouterr().out.startswith("job: check")


def test_truncation_flag_is_recorded(write, capsys):
    spec = "job check\ngenus 1\npotential elliptic_wp2 { n 1 g2 4/1 g3 0/1 }\n"
    assert main([write(spec), "--truncation", "20"]) == 0
    assert json.loads(capsys.readouterr().out)["truncation"] == 20


@pytest.mark.parametrize("argv_tail,text", [
    ([], "genus 0\n"),
    ([], "job check\npotential rational { pole { at 0/1 n 1 } }\n"),
    (["--truncation", "0"], N1),
    (["--truncation", "3"], "job check\ngenus 1\npotential elliptic_wp2 { n 1 g2 4/1 g3 0/1 }\n"),
])
def test_usage_errors(write, capsys, argv_tail, text):
    assert main([write(text)] + argv_tail) == 1
    assert "verifier: error" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    assert main([str(tmp_path / "nope.spec")]) == 1


def test_module_entry_point(write):
    proc = subprocess.run([sys.executable, "-m", "rank2comm", write(G3), "--format", "text"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2
    assert "Theorem1.1" in proc.stdout
