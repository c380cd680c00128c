import csv
import io
import json

import pytest

from bargmann3j.cli import CSV_HEADER, main
from bargmann3j import hessian as hs
from bargmann3j.verify import format_report, run_all, suite_hessian, random_configs


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def test_exact_human():
    code, text = run(["exact", "1", "1", "0", "0", "0", "0"])
    assert code == 0
    assert text == "-sqrt(1/3) ≈ -0.57735026919\n"


def test_exact_oracle():
    code, text = run(["exact", "2", "2", "2", "0", "0", "0", "--oracle"])
    assert code == 0
    assert text.startswith("-sqrt(2/35)")
    assert "oracle: MATCH" in text


def test_exact_zero_and_json():
    assert run(["exact", "1", "1", "3", "0", "0", "0"]) == (0, "0 (TriangleViolated)\n")
    code, text = run(["exact", "1/2", "0.5", "0", "1/2", "-1/2", "0", "--format", "json", "--oracle"])
    doc = json.loads(text)
    assert code == 0
    assert doc["sign"] == 1 and doc["radicand"] == "1/2" and doc["oracle"] == "MATCH"
    assert doc["j"] == ["1/2", "1/2", "0"]


def test_exact_parse_error(capsys):
    code, _ = run(["exact", "1/3", "1", "0", "0", "0", "0"])
    assert code == 2
    assert "1/3" in capsys.readouterr().err


def test_exact_oracle_mismatch(monkeypatch):
    from bargmann3j import cli
    from bargmann3j.exact import ExactValue
    from bargmann3j.halfint import SignedSqrtRational

    monkeypatch.setattr(cli, "bargmann_moment_3j", lambda c: ExactValue(SignedSqrtRational.make(1, 1)))
    code, text = run(["exact", "1", "1", "0", "0", "0", "0", "--oracle"])
    assert code == 1 and "MISMATCH" in text


def test_compare():
    code, text = run(["compare", "2", "2", "2", "0", "0", "0", "--format", "json"])
    doc = json.loads(text)
    assert code == 0 and doc["status"] == "Allowed"
    assert doc["exact"] == pytest.approx(-0.2390457)
    assert abs(doc["asymptotic"]) == pytest.approx(0.2425, abs=5e-5)
    code, text = run(["compare", "1", "1", "2", "0", "0", "0", "--format", "json"])
    doc = json.loads(text)
    assert code == 0 and doc["status"] == "Caustic" and doc["asymptotic"] is None
    code, text = run(["compare", "2", "2", "2", "2", "-2", "0"])
    assert code == 0 and "Forbidden" in text


def test_compare_convention_flag_and_config(tmp_path):
    code, text = run(["compare", "2", "2", "2", "0", "0", "0", "--format", "json", "--convention", "paper-literal"])
    literal = json.loads(text)["asymptotic"]
    assert abs(literal) == pytest.approx(0.3031, abs=1e-4)
    conf = tmp_path / "defaults.conf"
    conf.write_text("# defaults\nconvention = paper-literal\nsign = minus\n")
    code, text = run(["--config", str(conf), "compare", "2", "2", "2", "0", "0", "0", "--format", "json"])
    assert json.loads(text)["asymptotic"] == pytest.approx(-literal)
    # flags override the file
    code, text = run(
        ["--config", str(conf), "compare", "2", "2", "2", "0", "0", "0", "--format", "json", "--sign", "plus"]
    )
    assert json.loads(text)["asymptotic"] == pytest.approx(literal)
    conf.write_text("colour = blue\n")
    assert run(["--config", str(conf), "compare", "2", "2", "2", "0", "0", "0"])[0] == 2


def test_sweep_scale(tmp_path):
    out = tmp_path / "s.csv"
    code, _ = run(["sweep", "--j", "2", "2", "2", "--m", "0", "0", "0", "--values", "1", "2", "4", "8", "--out", str(out)])
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 5
    errs = [float(r[10]) for r in rows[1:]]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert [r[0] for r in rows[1:]] == ["4", "8", "16", "32"]


def test_sweep_vary_m1():
    code, text = run(["sweep", "--j", "6", "6", "6", "--m", "0", "0", "0", "--axis", "vary-m1"])
    rows = list(csv.DictReader(io.StringIO(text)))
    statuses = [r["status"] for r in rows]
    assert code == 0 and len(rows) == 13
    assert statuses[0] == statuses[-1] == "Forbidden"
    assert "Allowed" in statuses
    # every numeric field round-trips as a plain decimal number
    for r in rows:
        float(r["exact"])
        assert "," not in r["exact"]


def test_sweep_errors():
    assert run(["sweep", "--j", "2", "2", "2", "--m", "0", "0", "0", "--values"])[0] == 2
    assert run(["sweep", "--j", "2", "2", "2", "--m", "0", "0", "0", "--values", "1/3"])[0] == 2
    assert run(["sweep", "--j", "2", "2", "2", "--m", "0", "0", "0", "--values", "1", "--out", "/nonexistent/x.csv"])[0] == 2


def test_verify_fast_passes_and_is_deterministic():
    code, text = run(["verify", "--level", "fast", "--seed", "42"])
    assert code == 0, text
    assert text.count("PASS") == 7
    assert run(["verify", "--level", "fast", "--seed", "42"])[1] == text


def test_tampered_hessian_fails():
    def tampered(q, c, off_shell=False):
        H = hs.hessian_analytic(q, c, off_shell)
        H[0, 2] = -H[0, 2]
        H[2, 0] = -H[2, 0]
        return H

    import random

    rng = random.Random(1)
    configs = random_configs(rng, 5)
    assert suite_hessian(configs, rng).passed
    assert not suite_hessian(configs, rng, hessian=tampered).passed
