import json
import subprocess
import sys

import pytest

from almostsplit import report
from almostsplit.cli import main

from conftest import ARQ

A2, A3, D4, RAYS = (str(ARQ / n) for n in ("a2.arq", "a3.arq", "d4.arq", "rays.arq"))

CASES = [
    (["check", A2], 0),
    (["decompose", A2, "--rep", "M"], 0),
    (["decompose", D4, "--rep", "G"], 0),
    (["hom", A2, "--from", "P1", "--to", "S1"], 0),
    (["ext", A2, "--z", "S1", "--x", "S2"], 0),
    (["dtr", A2, "--rep", "S1"], 0),
    (["trd", A2, "--rep", "S2"], 0),
    (["dtr", A2, "--rep", "P1"], 1),
    (["ass", A2, "--rep", "S1", "--verify-against", "all"], 0),
    (["ass", A3, "--rep", "S2", "--verify-against", "S1,P2,I2"], 0),
    (["ass", A2, "--rep", "P1"], 1),
    (["arquiver", A3, "--quiver", "A3"], 0),
    (["approx", A3, "--rep", "S3", "--subcat", "C", "--side", "right"], 0),
    (["approx", A3, "--rep", "S3", "--subcat", "C", "--side", "left"], 0),
    (["subcat-ass", A3, "--rep", "S1", "--subcat", "C"], 0),
    (["subcat-ass", A3, "--rep", "S2", "--subcat", "C"], 1),
    (["subcat-ass", A3, "--rep", "S1", "--subcat", "Bad"], 1),
    (["torsion", A3, "--pair", "T", "--rep", "P1"], 0),
    (["torsion", A3, "--pair", "T", "--transfer", "S1", "--side", "torsion"], 0),
    (["torsion", A3, "--pair", "U", "--transfer", "S2", "--side", "free"], 0),
    (["torsion", A2, "--pair", "T", "--transfer", "S1", "--side", "free"], 1),
    (["inf-dtr", RAYS, "--fprep", "S2"], 0),
    (["inf-dtr", RAYS, "--fprep", "M", "--depth", "6"], 0),
    (["inf-ass", RAYS, "--fprep", "S2"], 0),
    (["inf-ass", RAYS, "--fprep", "M"], 1),
]


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv, expected", CASES, ids=[" ".join(c[0][:1] + c[0][2:]) for c in CASES])
def test_reports_validate(capsys, argv, expected):
    code, out, err = run(capsys, argv)
    assert code == expected, err
    doc = json.loads(out)
    report.validate(doc)
    assert doc["command"] == argv[0]
    assert doc["status"] == ("ok" if expected == 0 else "negative")
    if expected == 1:
        assert doc["witness"] and err.strip()


@pytest.mark.parametrize("argv", [c[0] for c in CASES[::3]])
def test_deterministic_bytes(capsys, argv):
    first = run(capsys, argv)[1]
    assert run(capsys, argv)[1] == first


def test_seed_independent_results(capsys):
    a = json.loads(run(capsys, ["decompose", D4, "--rep", "G", "--seed", "0"])[1])
    b = json.loads(run(capsys, ["decompose", D4, "--rep", "G", "--seed", "9"])[1])
    assert a["decomposition"]["parts"] == b["decomposition"]["parts"]


def test_ass_contract(capsys):
    code, out, _ = run(capsys, ["ass", A2, "--rep", "S1", "--verify-against", "all"])
    doc = json.loads(out)
    assert code == 0 and doc["certificate"]["verdict"] == "valid"
    assert doc["sequence"]["X"]["dims"] == {"1": 0, "2": 1}
    assert doc["sequence"]["Y"]["dims"] == {"1": 1, "2": 1}
    assert len(doc["certificate"]["right_factorizations"]) == 3
    code, out, err = run(capsys, ["ass", A2, "--rep", "P1"])
    assert code == 1 and "projective: no almost split sequence ends here" in err


def test_parse_error_exit_2(capsys):
    code, out, err = run(capsys, ["check", str(ARQ / "broken.arq")])
    assert code == 2 and out == ""
    assert "broken.arq:1:" in err and "unknown vertex 3" in err


@pytest.mark.parametrize("argv", [
    ["check", "/nonexistent.arq"],
    ["hom", A2, "--from", "P1", "--to", "Nope"],
    ["ass", A2, "--rep", "S1", "--prime", "10"],
    ["dtr", A2, "--rep", "S1", "--format", "dot"],
    ["frobnicate", A2],
    ["torsion", A2, "--pair", "T"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, argv)
    assert code == 2 and out == "" and err


def test_undetermined_exit_3(tmp_path, capsys):
    # budget 0 cannot split anything, so a decomposable rep stays undetermined
    code, out, _ = run(capsys, ["decompose", A2, "--rep", "M", "--budget", "0"])
    doc = json.loads(out)
    report.validate(doc)
    assert code == 3 and doc["status"] == "undetermined"


def test_arquiver_dot_and_plot(tmp_path, capsys):
    png, dot = tmp_path / "d4.png", tmp_path / "d4.dot"
    code, out, _ = run(capsys, ["arquiver", D4, "--quiver", "D4", "--dot", str(dot), "--plot", str(png)])
    doc = json.loads(out)
    report.validate(doc)
    assert code == 0 and len(doc["arquiver"]["vertices"]) == 12
    assert doc["plot"] == str(png) and png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert dot.read_text().startswith('digraph "D4"')
    code, out, _ = run(capsys, ["arquiver", D4, "--quiver", "D4", "--format", "dot"])
    assert code == 0 and out == dot.read_text()


def test_text_format(capsys):
    code, out, _ = run(capsys, ["dtr", A2, "--rep", "S1", "--format", "text"])
    assert code == 0 and "status: ok" in out and "dims:" in out


def test_help_lists_defaults(capsys):
    assert main(["ass", "--help"]) == 0
    out = capsys.readouterr().out
    assert "32003" in out and "default: 0" in out and "default: 200" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "almostsplit", "dtr", A2, "--rep", "S1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["rep"]["dims"] == {"1": 0, "2": 1}


def test_schema_rejects_malformed():
    with pytest.raises(Exception):
        report.validate({"command": "ass"})
    with pytest.raises(Exception):
        report.validate({"command": "ass", "status": "ok", "rep": {"dims": {}, "mats": {}}})


def test_unsettled_indecomposability_exit_3(capsys, monkeypatch):
    from almostsplit import cli
    from almostsplit.repcore import UndeterminedError

    def boom(*a, **k):
        raise UndeterminedError("could not be certified indecomposable")

    monkeypatch.setattr(cli, "almost_split_sequence", boom)
    code, out, err = run(capsys, ["ass", A2, "--rep", "S1"])
    doc = json.loads(out)
    report.validate(doc)
    assert code == 3 and doc["status"] == "undetermined" and "undetermined" in err
