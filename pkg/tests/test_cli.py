import json

import pytest

from convexbound.cli import (
    EXIT_DISPROVED, EXIT_FAILURE, EXIT_OK, EXIT_UNKNOWN, main,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParseCommand:
    def test_roundtrip(self, capsys):
        code, out, _ = run(capsys, "parse", "x^2*(1-x)^2")
        assert code == EXIT_OK
        assert out.strip() == "((x^2)*((1.0-x)^2))"

    def test_syntax_error(self, capsys):
        code, _, err = run(capsys, "parse", "(x")
        assert code == EXIT_FAILURE
        assert "error:" in err and "offset" in err

    def test_structured(self, capsys):
        code, out, _ = run(capsys, "parse", "x+1", "--format", "structured")
        assert code == EXIT_OK
        assert json.loads(out)["formatted"] == "(x+1.0)"


class TestCheckCommand:
    def test_proved_pair_exits_zero(self, capsys):
        code, out, _ = run(capsys, "check", "sin(x)+8",
                           "--interval", "pi", "2*pi")
        assert code == EXIT_OK
        assert "convex: proved" in out
        assert "nonnegative: proved" in out

    def test_disproved_exits_two(self, capsys):
        code, out, _ = run(capsys, "check", "x^2*(1-x)^2",
                           "--interval", "0", "1")
        assert code == EXIT_DISPROVED
        assert "disproved" in out
        assert "witness" in out

    def test_nonnegative_disproof_also_exits_two(self, capsys):
        code, _, _ = run(capsys, "check", "x", "--interval", "-1", "1")
        assert code == EXIT_DISPROVED

    def test_bad_interval_exits_one(self, capsys):
        code, _, err = run(capsys, "check", "x", "--interval", "1", "1")
        assert code == EXIT_FAILURE
        assert "error:" in err


class TestBoundsCommand:
    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "bounds", "x^2", "(1-x)^2",
                           "--interval", "0", "1")
        assert code == EXIT_OK
        assert "product_endpoint: 0" in out
        assert "cs_endpoint: 0.5" in out
        assert "mean_integral: 0.0333333" in out

    def test_structured_matches_text(self, capsys):
        _, text_out, _ = run(capsys, "bounds", "sin(x)+8", "1/x",
                             "--interval", "pi", "2*pi")
        _, json_out, _ = run(capsys, "bounds", "sin(x)+8", "1/x",
                             "--interval", "pi", "2*pi",
                             "--format", "structured")
        bounds = json.loads(json_out)["bounds"]
        for key, value in bounds.items():
            assert f"{key}: {value:.6g}" in text_out


class TestVerifyCommand:
    def test_sine_recip_exits_zero(self, capsys):
        code, out, _ = run(capsys, "verify", "sin(x)+8", "1/x",
                           "--interval", "pi", "2*pi")
        assert code == EXIT_OK
        assert "theorem_holds: True" in out

    def test_square_pair_exits_zero_with_note(self, capsys):
        code, out, _ = run(capsys, "verify", "x^2", "(1-x)^2",
                           "--interval", "0", "1")
        assert code == EXIT_OK
        assert "note:" in out

    def test_unverified_premises_exits_three(self, capsys):
        code, out, _ = run(capsys, "verify", "x", "x", "--interval", "-1", "1")
        assert code == EXIT_UNKNOWN
        assert "theorem_holds: None" in out

    def test_structured_schema(self, capsys):
        code, out, _ = run(capsys, "verify", "x^2", "(1-x)^2",
                           "--interval", "0", "1", "--format", "structured")
        doc = json.loads(out)
        assert set(doc) == {"interval", "u", "v", "certificates", "bounds",
                            "margins", "theorem_holds", "notes"}


class TestStressCommand:
    def test_small_run(self, capsys):
        code, out, _ = run(capsys, "stress", "--trials", "20", "--seed", "7",
                           "--interval", "0", "1")
        assert code == EXIT_OK
        assert "theorem_violations: 0" in out

    def test_trials_zero_exits_one(self, capsys):
        code, _, err = run(capsys, "stress", "--trials", "0")
        assert code == EXIT_FAILURE
        assert "error:" in err

    def test_structured_byte_stable(self, capsys):
        args = ("stress", "--trials", "15", "--seed", "3",
                "--interval", "pi", "2*pi", "--format", "structured")
        _, a, _ = run(capsys, *args)
        _, b, _ = run(capsys, *args)
        assert a == b
