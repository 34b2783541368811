"""
Tests for exact arithmetic in Q(sqrt d).
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from tcb_foliation.core.exact_field import (
    ArithOp,
    QuadraticField,
    Scalar,
    arith,
    parse_scalar,
    sign,
)
from tcb_foliation.errors import DivisionByZero, MixedRadicand, ScalarSyntaxError


@st.composite
def scalars(draw, d=2):
    rational = Fraction(draw(st.integers(-60, 60)), draw(st.integers(1, 24)))
    radical = Fraction(draw(st.integers(-60, 60)), draw(st.integers(1, 24)))
    return Scalar(rational, radical, d)


class TestArith:
    """Test field operations."""

    def test_radical_parts_cancel(self):
        """(1 + sqrt2) + (2 - sqrt2) is 3."""
        q = QuadraticField(2)
        result = arith("add", q("1+sqrt(2)"), q("2-sqrt(2)"))
        assert result == 3
        assert result.is_rational()

    def test_square_of_root(self):
        """sqrt5 * sqrt5 is 5."""
        root = QuadraticField(5).root
        assert arith(ArithOp.MUL, root, root) == 5

    def test_rationalized_division(self):
        """1 / (1 + sqrt2) is sqrt2 - 1."""
        q = QuadraticField(2)
        result = arith("div", q.one, q("1+sqrt(2)"))
        assert result == q("-1+sqrt(2)")
        assert result * q("1+sqrt(2)") == 1

    def test_negation_needs_one_operand(self):
        q = QuadraticField(3)
        assert arith("neg", q("2-sqrt(3)")) == q("-2+sqrt(3)")

    def test_binary_op_without_second_operand(self):
        with pytest.raises(ScalarSyntaxError):
            arith("sub", QuadraticField(2).one)

    def test_mixed_radicands_rejected(self):
        """Scalars from different fields never combine."""
        with pytest.raises(MixedRadicand) as info:
            QuadraticField(2).root + QuadraticField(5).root
        assert info.value.invariant == "scalar.shared_radicand"

    def test_division_by_zero(self):
        q = QuadraticField(5)
        with pytest.raises(DivisionByZero):
            q.one / q.zero

    def test_plain_numbers_are_promoted(self):
        x = QuadraticField(5)("1/2*sqrt(5)")
        assert (x + 1).rational_part == 1
        assert (2 * x).radical_part == 1
        assert (1 - x) == -(x - 1)

    def test_conjugate_and_norm(self):
        x = QuadraticField(5)("3+2*sqrt(5)")
        assert x.conjugate() == QuadraticField(5)("3-2*sqrt(5)")
        assert x.norm() == 9 - 20

    def test_scalars_are_immutable(self):
        x = QuadraticField(2).root
        with pytest.raises(AttributeError):
            x._rational = Fraction(1)


class TestSign:
    """Test exact sign decisions."""

    @pytest.mark.parametrize(
        "text,expected",
        [("3-2*sqrt(2)", 1), ("0", 0), ("1-sqrt(2)", -1), ("-3+2*sqrt(2)", -1)],
    )
    def test_examples(self, text, expected):
        assert sign(parse_scalar(text, 2)) == expected

    def test_near_cancellation(self):
        """577/408 - sqrt2 is positive but tiny."""
        x = parse_scalar("577/408-sqrt(2)")
        assert x.sign() == 1
        assert float(x) < 1e-5

    def test_ordering(self):
        q = QuadraticField(5)
        assert q("-1/2+1/2*sqrt(5)") < q("2/3")
        assert q("9/10") > q("-2+sqrt(5)")
        assert sorted([q("1"), q("sqrt(5)"), q("-sqrt(5)")], key=float) == [
            q("-sqrt(5)"),
            q("1"),
            q("sqrt(5)"),
        ]

    @settings(max_examples=300, deadline=None)
    @given(scalars())
    def test_square_is_non_negative(self, x):
        assert (x * x).sign() >= 0

    @settings(max_examples=300, deadline=None)
    @given(scalars(d=5))
    def test_sign_agrees_with_high_precision(self, x):
        with mp.workprec(128):
            value = x.to_mpf(128)
            if abs(value) > mpf("1e-20"):
                assert x.sign() == (1 if value > 0 else -1)

    @settings(max_examples=200, deadline=None)
    @given(scalars(), scalars(), scalars())
    def test_field_axioms(self, x, y, z):
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z

    @settings(max_examples=200, deadline=None)
    @given(scalars(d=3))
    def test_floor_brackets_value(self, x):
        k = x.floor()
        assert k <= x < k + 1
        assert x.ceil() - 1 < x <= x.ceil()


class TestParsing:
    """Test the scalar text format."""

    @pytest.mark.parametrize(
        "text,d,canonical",
        [
            ("-1/2+1/2*sqrt(5)", 0, "-1/2+1/2*sqrt(5)"),
            ("9/10", 5, "9/10"),
            ("sqrt(5)/2", 0, "1/2*sqrt(5)"),
            ("  3 - 2 * sqrt(2) ", 0, "3-2*sqrt(2)"),
            ("1.5", 0, "3/2"),
            ("-sqrt(2)", 2, "-sqrt(2)"),
        ],
    )
    def test_canonical_text(self, text, d, canonical):
        assert parse_scalar(text, d).format() == canonical

    def test_rational_text_joins_the_context_field(self):
        x = parse_scalar("9/10", 5)
        assert x.d == 5
        assert x + QuadraticField(5).root == parse_scalar("9/10+sqrt(5)")

    @settings(max_examples=200, deadline=None)
    @given(scalars(d=7))
    def test_print_then_parse(self, x):
        assert parse_scalar(x.format(), x.d if x.is_rational() else 0) == x

    @pytest.mark.parametrize("text", ["", "1/2+", "1 2", "sqrt(5", "1/0", "abc"])
    def test_bad_syntax(self, text):
        with pytest.raises(ScalarSyntaxError):
            parse_scalar(text)

    def test_two_radicands_in_one_text(self):
        with pytest.raises(MixedRadicand):
            parse_scalar("sqrt(2)+sqrt(3)")

    def test_context_radicand_mismatch(self):
        with pytest.raises(MixedRadicand):
            parse_scalar("sqrt(2)", 5)

    @pytest.mark.parametrize("d", [1, 4, 12, -3])
    def test_bad_radicand(self, d):
        with pytest.raises(ScalarSyntaxError):
            QuadraticField(d)


class TestConversions:
    def test_golden_floor(self):
        q = QuadraticField(5)
        assert q("1/2+1/2*sqrt(5)").floor() == 1
        assert q("-sqrt(5)").floor() == -3
        assert q("-sqrt(5)").ceil() == -2

    def test_float_is_advisory(self):
        assert float(parse_scalar("1/2*sqrt(5)")) == pytest.approx(1.1180339887)

    def test_hash_matches_equality(self):
        assert hash(parse_scalar("3/4")) == hash(Fraction(3, 4))
        assert len({parse_scalar("1+sqrt(5)"), parse_scalar("2/2+sqrt(5)")}) == 1

    def test_rationals_equal_across_fields(self):
        """Equal hashes imply equal values for radical-free scalars."""
        plain, golden = Scalar(1, 0, 0), Scalar(1, 0, 5)
        assert plain == golden
        assert hash(plain) == hash(golden)
        assert len({plain, golden, Scalar(Fraction(2, 2), 0, 2)}) == 1
        assert Scalar(1, 0, 5) != Scalar(1, 1, 5)
        assert Scalar(0, 1, 2) != Scalar(0, 1, 5)
