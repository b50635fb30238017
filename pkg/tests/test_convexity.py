import math

import pytest

from convexbound import (
    DISPROVED, PROVED, UNKNOWN, Interval, MidpointViolation,
    NegativeSecondDerivative, NegativeValue, PreconditionError,
    certify_convex, certify_nonnegative, check_lemma_pointwise,
    falsify_convexity, parse, witness_violation,
)
from convexbound import expr as ex

UNIT = Interval(0.0, 1.0)
PI_2PI = Interval(math.pi, 2.0 * math.pi)


class TestCertifyConvex:
    def test_square_proved(self):
        c = certify_convex(parse("x^2"), UNIT)
        assert c.verdict == PROVED

    def test_quartic_product_product_disproved(self):
        c = certify_convex(parse("x^2*(1-x)^2"), UNIT)
        assert c.verdict == DISPROVED
        w = c.witness
        assert isinstance(w, NegativeSecondDerivative)
        assert abs(w.x - 0.5) < 0.05
        assert w.value == pytest.approx(-1.0, abs=1e-6)

    def test_sine_recip_u_proved_by_interval(self):
        c = certify_convex(parse("sin(x)+8"), PI_2PI)
        assert c.verdict == PROVED
        assert c.method == "interval_second_derivative"

    def test_max_of_affine_proved(self):
        c = certify_convex(parse("max(x, 1-x)"), UNIT)
        assert c.verdict == PROVED
        assert c.method.startswith("structural:")

    def test_exp_affine(self):
        c = certify_convex(parse("exp(2*x-1)"), UNIT)
        assert c.verdict == PROVED

    def test_concave_disproved(self):
        c = certify_convex(parse("-(x^2)"), UNIT)
        assert c.verdict == DISPROVED

    def test_sin_unknown_or_disproved_on_full_period(self):
        # sin has both curvatures on [0, 2pi]
        c = certify_convex(parse("sin(x)"), Interval(0.0, 2.0 * math.pi))
        assert c.verdict == DISPROVED

    def test_proved_certificates_have_no_witness(self):
        c = certify_convex(parse("x^2"), UNIT)
        assert c.witness is None


class TestCertifyNonnegative:
    def test_sine_recip(self):
        assert certify_nonnegative(parse("sin(x)+8"), PI_2PI).verdict == PROVED

    def test_sign_change_disproved(self):
        c = certify_nonnegative(parse("x"), Interval(-1.0, 1.0))
        assert c.verdict == DISPROVED
        assert isinstance(c.witness, NegativeValue)
        assert c.witness.x < 0.0

    def test_square_rule(self):
        c = certify_nonnegative(parse("(1-x)^2"), UNIT)
        assert c.verdict == PROVED
        assert c.method == "structural:even_power"

    def test_one_over_x(self):
        assert certify_nonnegative(parse("1/x"), PI_2PI).verdict == PROVED


class TestFalsifyConvexity:
    def test_quartic_product_found(self):
        w = falsify_convexity(parse("x^2*(1-x)^2"), UNIT, 1000, 42)
        assert isinstance(w, MidpointViolation)
        assert w.lhs > w.rhs

    def test_genuinely_convex_none(self):
        assert falsify_convexity(parse("x^2"), UNIT, 1000, 42) is None

    def test_max_affine_none(self):
        assert falsify_convexity(parse("max(x, 1-x)"), UNIT, 1000, 42) is None

    def test_deterministic(self):
        a = falsify_convexity(parse("x^2*(1-x)^2"), UNIT, 500, 9)
        b = falsify_convexity(parse("x^2*(1-x)^2"), UNIT, 500, 9)
        assert a == b

    def test_witness_replays(self):
        e = parse("x^2*(1-x)^2")
        w = falsify_convexity(e, UNIT, 1000, 42)
        assert witness_violation(e, w) > 0.5e-9


class TestWitnessReplay:
    @pytest.mark.parametrize("text,iv", [
        ("x^2*(1-x)^2", UNIT),
        ("-(x^2)", UNIT),
        ("sin(x)", Interval(0.0, 2.0 * math.pi)),
    ])
    def test_disproof_replays_beyond_half_tol(self, text, iv):
        e = parse(text)
        c = certify_convex(e, iv)
        assert c.verdict == DISPROVED
        assert witness_violation(e, c.witness) > 0.5e-9

    def test_negative_value_replay(self):
        e = parse("x")
        c = certify_nonnegative(e, Interval(-1.0, 1.0))
        assert witness_violation(e, c.witness) > 0.5e-9


class TestLemmaPointwise:
    def test_square_function(self):
        s = check_lemma_pointwise(parse("x^2"), UNIT, 1000, seed=1)
        assert s.violations == 0

    def test_sine_recip_function(self):
        s = check_lemma_pointwise(parse("sin(x)+8"), PI_2PI, 1000, seed=1)
        assert s.violations == 0

    def test_zero_function_zero_slack(self):
        s = check_lemma_pointwise(parse("0"), UNIT, 100, seed=1)
        assert s.violations == 0
        assert s.max_slack == 0.0

    def test_precondition_enforced(self):
        with pytest.raises(PreconditionError):
            check_lemma_pointwise(parse("x"), Interval(-1.0, 1.0), 10, seed=0)


class TestLemmaConsistency:
    @pytest.mark.parametrize("text,iv", [
        ("x^2", UNIT),
        ("sin(x)+8", PI_2PI),
        ("exp(x)", UNIT),
        ("max(x, 1-x)", UNIT),
    ])
    def test_square_of_proved_not_disproved(self, text, iv):
        u = parse(text)
        assert certify_convex(u, iv).verdict == PROVED
        assert certify_nonnegative(u, iv).verdict == PROVED
        sq = ex.Mul(u, u)
        assert certify_convex(sq, iv).verdict != DISPROVED


class TestSoundness:
    @pytest.mark.parametrize("text,iv", [
        ("x^2", UNIT),
        ("max(x, 1-x)", UNIT),
        ("sin(x)+8", PI_2PI),
        ("exp(2*x-1)", UNIT),
        ("(3*x-1)^2+0.5", UNIT),
    ])
    def test_proved_survives_falsification(self, text, iv):
        e = parse(text)
        assert certify_convex(e, iv).verdict == PROVED
        assert falsify_convexity(e, iv, 10_000, seed=3) is None

    def test_determinism_of_certificates(self):
        e = parse("x^2*(1-x)^2")
        assert certify_convex(e, UNIT) == certify_convex(e, UNIT)
