# tests/test_cli.py

from app.reactions.services import network_from_json
from tests.conftest import network_path
from app.main import main
import json
import pytest


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# ============================================================
# ✅ PARSE AND DSR
# ============================================================
def test_parse_prints_canonical_json(capsys, ex1):
    code, out, _ = run(capsys, "parse", network_path("ex1.rxn"))
    assert code == 0
    assert network_from_json(out) == ex1


def test_parse_dsl(capsys):
    code, out, _ = run(capsys, "parse", network_path("ex3.rxn"), "--dsl")
    assert code == 0
    assert out.splitlines()[1] == "ES1 -> S2 + E"


def test_parse_error_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.rxn"
    path.write_text("A -> B\nA => B\n", encoding="utf-8")
    code, _, err = run(capsys, "parse", path)
    assert code == 2
    assert err.startswith("error: line 2")


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "certify", tmp_path / "absent.rxn")
    assert code == 2
    assert "cannot read" in err


def test_dsr_dot(capsys, tmp_path):
    code, out, _ = run(capsys, "dsr", network_path("one_way_chain.rxn"))
    assert code == 0
    assert out.startswith("digraph dsr {")

    dot = tmp_path / "g.dot"
    code, out, _ = run(capsys, "dsr", network_path("one_way_chain.rxn"), "--dot", dot)
    assert code == 0
    assert out.strip() == "5 vertices, 7 arcs, 2 strongly connected components"
    assert dot.read_text(encoding="utf-8").startswith("digraph dsr {")


# ============================================================
# ✅ CERTIFY AND RECHECK
# ============================================================
@pytest.mark.parametrize(
    "name, code",
    [("ex1.rxn", 0), ("ex3.rxn", 0), ("trapped.rxn", 3), ("one_way.rxn", 4), ("disconnected.rxn", 4)],
)
def test_certify_exit_codes(capsys, name, code):
    assert run(capsys, "certify", network_path(name))[0] == code


def test_certify_names_route(capsys):
    _, out, _ = run(capsys, "certify", network_path("ex1.rxn"))
    assert "verdict: global" in out
    assert "A6(i)" in out


def test_certify_json_then_recheck(capsys, tmp_path):
    path = tmp_path / "cert.json"
    assert run(capsys, "certify", network_path("ex3.rxn"), "--json", path)[0] == 0
    code, out, _ = run(capsys, "recheck", path)
    assert code == 0
    assert out.strip() == "certificate ok (verdict global)"


def test_recheck_reports_problems(capsys, tmp_path):
    path = tmp_path / "cert.json"
    run(capsys, "certify", network_path("trapped.rxn"), "--json", path)
    data = json.loads(path.read_text(encoding="utf-8"))
    data["verdict"] = "global"
    path.write_text(json.dumps(data), encoding="utf-8")
    code, out, _ = run(capsys, "recheck", path)
    assert code == 1
    assert out.startswith("problem: verdict global")


def test_recheck_rejects_garbage(capsys, tmp_path):
    path = tmp_path / "cert.json"
    path.write_text("[]", encoding="utf-8")
    code, _, err = run(capsys, "recheck", path)
    assert code == 2
    assert err.startswith("error: expected a certificate")


def test_validate(capsys, tmp_path):
    report = tmp_path / "report.json"
    code, out, _ = run(capsys, "validate", network_path("ex1.rxn"), "--seed", 5, "--json", report)
    assert code == 0
    assert "FAIL" not in out
    data = json.loads(report.read_text(encoding="utf-8"))
    assert data["seed"] == 5
    assert data["verdict"] == "global"


# ============================================================
# ✅ SIMULATE
# ============================================================
def test_simulate_csv(capsys):
    code, out, _ = run(capsys, "simulate", network_path("ex1.rxn"), "--x0", "2,0.5,1,0.5", "--t-end", 1, "--samples", 3)
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "time,A,B,C,D,H"
    assert len(lines) == 4


def test_simulate_without_integral(capsys):
    code, out, _ = run(capsys, "simulate", network_path("bimolecular.rxn"), "--x0", "1,1,0", "--t-end", 1, "--samples", 2)
    assert code == 0
    assert out.splitlines()[0] == "time,A,B,C"


def test_simulate_pair_and_diagnostics(capsys, tmp_path):
    csv_path = tmp_path / "run.csv"
    diag_path = tmp_path / "run.json"
    code, out, err = run(
        capsys,
        "simulate", network_path("ex3.rxn"),
        "--kinetics", "power-law",
        "--t-end", 5,
        "--samples", 11,
        "--pair",
        "--out", csv_path,
        "--diagnostics", diag_path,
    )
    assert code == 0
    assert out == ""
    assert "order preserved: yes" in err
    assert len(csv_path.read_text(encoding="utf-8").splitlines()) == 12
    diag = json.loads(diag_path.read_text(encoding="utf-8"))
    assert diag["kinetics"] == "power-law"
    assert diag["order_preserved"] is True
    assert diag["h_max_drift"] < 1e-8


def test_simulate_pair_needs_factorization(capsys):
    code, _, err = run(capsys, "simulate", network_path("bimolecular.rxn"), "--t-end", 1, "--pair")
    assert code == 1
    assert "needs a factorization" in err


def test_simulate_rejects_bad_initial_state(capsys):
    code, _, err = run(capsys, "simulate", network_path("ex1.rxn"), "--x0", "1,2", "--t-end", 1)
    assert code == 2
    assert "--x0 needs 4 values" in err


@pytest.mark.parametrize("x0", ["1,-0.5,1,1", "1,nan,1,1"])
def test_simulate_rejects_negative_initial_state(capsys, x0):
    code, _, err = run(capsys, "simulate", network_path("ex1.rxn"), "--x0", x0, "--t-end", 1)
    assert code == 2
    assert "--x0 must be finite and nonnegative" in err
