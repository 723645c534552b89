import json

import pytest

from kovatlas import acceptance
from kovatlas.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_classify(capsys):
    rc, out, _ = run(capsys, "classify", "--kappa", "1", "--c1", "1", "--a", "4.002", "--b", "2")
    assert rc == 0
    assert out.splitlines()[0] == "I"
    assert any(line.startswith("f_t = 4.0051") for line in out.splitlines())


def test_classify_kappa_zero(capsys):
    rc, out, _ = run(capsys, "classify", "--kappa", "0", "--a", "1", "--b", "0")
    assert rc == 0 and out.splitlines()[0] == "V'"


def test_critical_json(capsys):
    rc, out, _ = run(capsys, "critical", "--kappa", "1", "--c1", "1", "--a", "2.5", "--b", "1")
    assert rc == 0
    recs = json.loads(out)
    r1 = [r for r in recs if r["family"] == "R1"]
    assert len(r1) == 2 and all(r["type"] == "CenterSaddle" for r in r1)


def test_diagram_kappa_zero_json(capsys):
    rc, out, _ = run(capsys, "diagram", "--kappa", "0", "--a", "1", "--b", "0", "--format", "json",
                     "--samples", "3000")
    assert rc == 0
    tags = {c["tag"] for c in json.loads(out)["curves"]}
    assert tags == {"ParabolaK0B0", "UpParabolaK0B0", "TangentLineK0B0", "LineKZero"}


def test_diagram_svg_file(tmp_path, capsys):
    out = tmp_path / "d.svg"
    rc, _, _ = run(capsys, "diagram", "--a", "2", "--b", "0", "--out", str(out), "--samples", "3000")
    assert rc == 0
    assert out.read_text().startswith("<?xml")


def test_sample(capsys):
    rc, out, _ = run(capsys, "sample", "--n", "100000", "--seed", "11", "--probe", "6.646,3.363")
    assert rc == 0 and json.loads(out)["tori"] == 2


def test_limit(capsys):
    rc, out, _ = run(capsys, "limit", "--a", "1", "--b", "0.5", "--kappas", "0.1,0.01")
    assert rc == 0
    rep = json.loads(out)
    assert rep["monotone"] and len(rep["distances"]) == 2


@pytest.mark.parametrize("passed,code", [(True, 0), (False, 1)])
def test_verify_exit_code(monkeypatch, capsys, passed, code):
    report = {"checks": [{"name": "algebra", "status": "pass" if passed else "fail", "seconds": 0.1}],
              "passed": passed}
    monkeypatch.setattr(acceptance, "run_all", lambda fast, seed: report)
    rc, out, _ = run(capsys, "verify", "--fast")
    assert rc == code
    assert out.strip() == f"[{'PASS' if passed else 'FAIL'}] algebra (0.1s)"


def test_bad_flags(capsys):
    assert main(["classify", "--a", "x", "--b", "1"]) == 2
    assert main(["nope"]) == 2
    assert main(["sample", "--probe", "1"]) == 2


def test_errors_reported(capsys):
    rc, _, err = run(capsys, "critical", "--a", "2", "--b", "1")
    assert rc == 2 and "error" in err


def test_tolerance_override(capsys):
    rc, out, _ = run(capsys, "--tol-boundary", "1e-3", "classify", "--a", "4.02", "--b", "2")
    assert rc == 0 and out.splitlines()[0] == "Boundary(f_k)"
    rc, out, _ = run(capsys, "classify", "--a", "4.02", "--b", "2")
    assert out.splitlines()[0] == "II"
