import json
import time

from artifact import cli
from artifact import scenarios as sc


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_paper_table(capsys):
    t0 = time.perf_counter()
    code, out, _ = run(capsys, "verify-paper")
    assert time.perf_counter() - t0 < 10
    assert code == 1  # div(B2) is reported as a mismatch
    assert "v1.q(Dtilde1)" in out and "448" in out
    assert "v2.div(B2)" in out and "MISMATCH" in out
    assert "NOTE" in out and "54" in out and "(448,2)" in out


def test_verify_paper_v1_only_succeeds(capsys):
    code, out, _ = run(capsys, "verify-paper", "--vector", "v1", "--quiet")
    assert code == 0
    assert "v2." not in out
    assert out.strip().splitlines()[-1].startswith("PASS")


def test_verify_paper_json_round_trip(capsys):
    code, out, _ = run(capsys, "verify-paper", "--format", "json")
    data = json.loads(out)
    rep = sc.VerificationReport.from_dict(data)
    assert rep.to_dict() == data
    assert data["overall"] is False and code == 1


def test_standard_todd_mode_mismatches(capsys):
    code, out, _ = run(capsys, "verify-paper", "--vector", "v1", "--todd-mode", "standard", "--quiet")
    assert code == 1
    assert "136/3" in out


def test_bbf(capsys):
    code, out, _ = run(capsys, "bbf", "--vector", "v2", "--class", "(-4,-2,22);-2")
    assert code == 0
    assert "square       160" in out and "divisibility 4" in out and "(10,1)" in out
    code, out, _ = run(capsys, "bbf", "--vector", "v1", "--class", "(-4,-4,52);1", "--format", "json")
    assert json.loads(out)["square"] == 442
    assert json.loads(out)["component"] == [442, 2]


def test_bbf_errors(capsys):
    code, _, err = run(capsys, "bbf", "--vector", "v1", "--class", "(0,0,0)")
    assert code == 2 and "ZeroVector" in err
    code, _, err = run(capsys, "bbf", "--vector", "v2", "--class", "(-4,-2,22);-1/2")
    assert code == 2 and "NotInGamma" in err and "parity" in err
    code, _, err = run(capsys, "bbf", "--vector", "v2", "--class", "garbage")
    assert code == 2 and "parse" in err


def test_grr_eval_shipped(capsys):
    code, out, _ = run(capsys, "grr-eval", str(sc.shipped_path("cartier")))
    assert code == 0
    assert any(l.startswith("cartier.ch_qH") and "(0, -1)" in l for l in out.splitlines())


def test_grr_eval_empty_and_corrupt(tmp_path, capsys):
    empty = tmp_path / "empty.yaml"
    empty.write_text("name: empty\ncompute: []\n")
    code, out, _ = run(capsys, "grr-eval", str(empty))
    assert code == 0 and "0/0" in out
    bad = tmp_path / "bad.yaml"
    bad.write_text("rings:\n  R: {dim: 1, basis: [[one, 0]]}\n")
    code, _, err = run(capsys, "grr-eval", str(bad))
    assert code == 2 and "rings.R" in err and "point" in err
    code, _, err = run(capsys, "grr-eval", str(tmp_path / "missing.yaml"))
    assert code == 2


def test_grr_eval_undeclared_product_warning(tmp_path, capsys):
    f = tmp_path / "u.yaml"
    f.write_text(
        """
rings:
  R:
    dim: 2
    point: pt
    basis: [["1", 0], [a, 1], [b, 1], [pt, 2]]
    products:
      - [a, a, {pt: 1}, "declared"]
classes:
  x: {ring: R, value: {a: 1, b: 1}}
compute:
  - {id: sq, op: integrate, args: [x, x], expect: 1}
"""
    )
    code, out, err = run(capsys, "grr-eval", str(f))
    assert code == 0
    assert "a*b" in err and "b*b" in err
    assert "WARNING" in out


def test_usage_error(capsys):
    code, _, _ = run(capsys, "no-such-command")
    assert code == 2
