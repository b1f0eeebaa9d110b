import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from pjet.cli import EXIT_DOMAIN, EXIT_FAIL, EXIT_OK, EXIT_USAGE, dumps, main

GOLDEN = Path(__file__).parent / "golden"
CASES = json.loads((GOLDEN / "cases.json").read_text())
SCHEMA = json.loads(resources.files("pjet").joinpath("schema/report-1.0.json").read_text())


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_reports(capsys, name):
    code, text, _ = run(capsys, CASES[name])
    assert text == (GOLDEN / f"{name}.json").read_text(encoding="utf-8")
    report = json.loads(text)
    jsonschema.validate(report, SCHEMA)
    expected = EXIT_DOMAIN if name == "curve_report_singular" else EXIT_OK
    assert code == expected


def test_verify_core_all_pass(capsys):
    code, text, _ = run(capsys, ["verify-core", "--p", "3", "--k", "4", "--degree", "6", "--seed", "1"])
    rep = json.loads(text)
    assert code == EXIT_OK and rep["status"] == "pass"
    assert {c["name"] for c in rep["checks"]} >= {"p_derivation_d1", "p_derivation_d2", "ghost_homomorphism",
                                                  "diagram_commutes", "diagram_cartesian"}


@pytest.mark.parametrize("argv,message", [
    (["verify-core", "--p", "4"], "p not prime"),
    (["verify-core", "--p", "3", "--k", "1"], "k must be >= 2"),
    (["curve-report", "--p", "7", "--a4", "0", "--a6", "1", "--kprime", "1"], "kprime"),
    (["l11delta", "--p", "7", "--a4", "0", "--a6", "1", "--k", "2"], "k >= 3"),
    (["curve-report", "--p", "7", "--a4", "0", "--a6", "1", "--degree-t", "4"], "degree-t"),
])
def test_usage_errors(capsys, argv, message):
    code, text, err = run(capsys, argv)
    assert code == EXIT_USAGE and text == ""
    assert message in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["curve-report", "--p", "7"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == EXIT_USAGE


def test_singular_curve_exit_3(capsys):
    code, text, _ = run(capsys, ["curve-report", "--p", "7", "--a4", "2", "--a6", "5"])
    rep = json.loads(text)
    assert code == EXIT_DOMAIN and rep["status"] == "fail"
    wit = rep["checks"][0]["witness"]
    assert wit["4a4^3+27a6^2"] == "707" and int(wit["4a4^3+27a6^2"]) % 7 == 0


def test_l11delta_counts_and_empty(capsys):
    code, text, _ = run(capsys, ["l11delta", "--p", "7", "--a4", "0", "--a6", "1", "--n", "30", "--seed", "4"])
    pl = json.loads(text)["payload"]
    assert code == EXIT_OK and pl["zeros"] == 30 and pl["nonzeros"] == 30
    code, text, _ = run(capsys, ["l11delta", "--p", "7", "--a4", "0", "--a6", "1", "--n", "0"])
    rep = json.loads(text)
    assert code == EXIT_OK and rep["status"] == "pass" and rep["warnings"]


def test_l11delta_zero_perturbation_fails(capsys):
    code, text, _ = run(capsys, ["l11delta", "--p", "7", "--a4", "0", "--a6", "1", "--n", "5", "--perturb", "0"])
    assert code == EXIT_FAIL and json.loads(text)["status"] == "fail"


def test_determinism_all_commands(capsys):
    for argv in CASES.values():
        _, a, _ = run(capsys, argv)
        _, b, _ = run(capsys, argv)
        assert a == b


def test_threads_do_not_change_output(capsys, monkeypatch):
    argv = ["l11delta", "--p", "7", "--a4", "2", "--a6", "3", "--n", "60", "--seed", "9"]
    _, serial, _ = run(capsys, argv)
    monkeypatch.setenv("PJET_THREADS", "3")
    _, par, _ = run(capsys, argv)
    assert serial == par
    monkeypatch.setenv("PJET_THREADS", "zero")
    code, _, err = run(capsys, argv)
    assert code == EXIT_USAGE and "PJET_THREADS" in err


def test_pretty_timing_and_output(capsys, tmp_path):
    out = tmp_path / "r.json"
    argv = ["curve-report", "--p", "5", "--a4", "0", "--a6", "1", "--k", "4", "--pretty", "--timing",
            "--output", str(out)]
    code, text, _ = run(capsys, argv)
    assert code == EXIT_OK
    assert "verdict=inconclusive" in text and not text.lstrip().startswith("{")
    rep = json.loads(out.read_text())
    assert "timing_seconds" in rep
    jsonschema.validate(rep, SCHEMA)


def test_dumps_sorted_utf8():
    text = dumps({"b": 1, "a": "é"})
    assert text.index('"a"') < text.index('"b"') and "é" in text and text.endswith("\n")


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "pjet.cli", "verify-core", "--p", "5", "--k", "3",
                          "--degree", "4", "--samples", "20"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["status"] == "pass"
