import json
import os
from pathlib import Path

import pytest

from quadlin.cli import main

EQ_DIR = Path(__file__).resolve().parent.parent / "equations"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def eq(name):
    return str(EQ_DIR / name)


class TestCheckCommand:
    def test_exp_passes(self, capsys):
        code, out, _ = run(capsys, "check", "--eq", eq("exp213.json"))
        assert code == 0
        report = json.loads(out)
        assert report["passed"] is True
        assert report["A"] == pytest.approx(2.0)
        assert report["version"]
        assert report["seed"] == 0
        assert "conditions" in report["tolerances"]

    def test_product_fails_with_condition_index(self, capsys):
        code, out, _ = run(capsys, "check", "--eq", eq("product.json"))
        assert code == 1
        assert json.loads(out)["failing_condition"] == 2

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "check", "--eq", eq("missing.json"))
        assert code == 2
        assert "not found" in err

    def test_unknown_key_rejected(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"rhs": "u00 + u10 + u01", "extra": 1}')
        code, _, err = run(capsys, "check", "--eq", str(bad))
        assert code == 2
        assert "unknown keys" in err

    def test_syntax_error_is_input_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"rhs": "u00 + ("}')
        code, _, _ = run(capsys, "check", "--eq", str(bad))
        assert code == 2

    def test_byte_determinism(self, tmp_path):
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        for out in (out1, out2):
            assert main(["check", "--eq", eq("harmonic.json"), "--seed", "3",
                         "--out", str(out)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_env_seed_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("QUADLIN_SEED", "17")
        code, out, _ = run(capsys, "check", "--eq", eq("linear.json"))
        assert code == 0
        assert json.loads(out)["seed"] == 17

    def test_explicit_seed_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("QUADLIN_SEED", "17")
        code, out, _ = run(capsys, "check", "--eq", eq("linear.json"),
                           "--seed", "4")
        assert json.loads(out)["seed"] == 4

    def test_tolerance_override_recorded(self, capsys):
        code, out, _ = run(capsys, "check", "--eq", eq("linear.json"),
                           "--tol", "conditions=1e-9")
        assert code == 0
        assert json.loads(out)["tolerances"]["conditions"] == 1e-9

    def test_unknown_tolerance(self, capsys):
        code, _, err = run(capsys, "check", "--eq", eq("linear.json"),
                           "--tol", "bogus=1")
        assert code == 2
        assert "unknown tolerance" in err

    def test_negative_tolerance(self, capsys):
        code, _, _ = run(capsys, "check", "--eq", eq("linear.json"),
                         "--tol", "conditions=-1")
        assert code == 2


class TestTransformCommand:
    def test_harmonic_certifies(self, capsys):
        code, out, _ = run(capsys, "transform", "--eq", eq("harmonic.json"))
        assert code == 0
        data = json.loads(out)
        assert data["model"]["certified"] is True
        assert data["model"]["p"] == pytest.approx(1.0, rel=1e-9)
        assert len(data["knots"]) >= 8
        assert data["report"]["passed"] is True

    def test_negative_control_exit(self, capsys):
        code, out, _ = run(capsys, "transform", "--eq", eq("multiplicative.json"))
        assert code == 1
        assert json.loads(out)["report"]["passed"] is False


class TestRoundtripCommand:
    def test_linear_grid_json(self, capsys):
        code, out, _ = run(capsys, "roundtrip", "--eq", eq("linear.json"),
                           "--grid", "8x8")
        assert code == 0
        data = json.loads(out)
        assert data["passed"] is True
        assert data["grid"]["rows"] == 9

    def test_csv_grid_export(self, capsys):
        code, out, _ = run(capsys, "roundtrip", "--eq", eq("linear.json"),
                           "--grid", "4x4", "--format", "csv")
        assert code == 0
        assert out.startswith("n,m,value")

    def test_bad_grid_spec(self, capsys):
        code, _, _ = run(capsys, "roundtrip", "--eq", eq("linear.json"),
                         "--grid", "8by8")
        assert code == 2


class TestEntropyCommand:
    def test_harmonic_json(self, capsys):
        code, out, _ = run(capsys, "entropy", "--eq", eq("harmonic.json"),
                           "--depth", "6")
        assert code == 0
        data = json.loads(out)
        assert data["classification"] == "linear"
        assert data["mode"] == "heuristic-prescreen"
        assert len(data["degrees"]) == 6

    def test_multiplicative_exits_nonzero(self, capsys):
        code, out, _ = run(capsys, "entropy", "--eq", eq("multiplicative.json"),
                           "--depth", "5")
        assert code == 1
        assert json.loads(out)["classification"] == "exponential"

    def test_csv_table(self, capsys):
        code, out, _ = run(capsys, "entropy", "--eq", eq("linear.json"),
                           "--depth", "5", "--format", "csv")
        assert code == 0
        assert out.splitlines()[0] == "k,degree"
        assert out.splitlines()[1] == "1,1"

    def test_non_rational_is_input_error(self, capsys):
        code, _, err = run(capsys, "entropy", "--eq", eq("exp111.json"))
        assert code == 2
        assert "rational" in err


class TestColehopfCommand:
    def test_g8_verdict(self, capsys):
        code, out, _ = run(capsys, "colehopf", "--family", "g8", "--p", "0.5",
                           "--grid", "10x10")
        assert code == 0
        data = json.loads(out)
        assert data["family"] == "g8"
        assert data["passed"] is True
        assert data["max_residual"] <= 1e-10

    def test_rosa_verdict(self, capsys):
        code, out, _ = run(capsys, "colehopf", "--family", "rosa",
                           "--grid", "8x8")
        assert code == 0
        data = json.loads(out)
        assert data["kappa2_kappa0"] == -0.75
        assert data["rosa_residual"] <= 1e-10
        assert data["g23_residual"] <= 1e-10

    def test_g23_verdict(self, capsys):
        code, out, _ = run(capsys, "colehopf", "--family", "g23",
                           "--kappa0", "1.5", "--kappa2", "-0.5",
                           "--grid", "10x10")
        assert code == 0
        data = json.loads(out)
        assert data["potential_mismatch"] <= 1e-10

    def test_canonical_verdict(self, capsys):
        code, out, _ = run(capsys, "colehopf", "--family", "canonical",
                           "--grid", "10x10")
        assert code == 0
        assert json.loads(out)["passed"] is True

    def test_grid_csv(self, capsys):
        code, out, _ = run(capsys, "colehopf", "--family", "g8",
                           "--grid", "4x4", "--format", "csv")
        assert code == 0
        assert out.startswith("n,m,value")


class TestUsage:
    def test_no_command(self, capsys):
        assert main([]) == 2

    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == 2
