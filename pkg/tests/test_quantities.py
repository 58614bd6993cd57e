import math

import pytest
from hypothesis import given, strategies as st

from selfenergy.quantities import (
    ConstantsSet,
    StateLabel,
    UncertainValue,
    add_quadrature,
    check_zalpha,
    exact,
    format_parenthesis,
    format_state,
    parse_state,
    scale,
)

MINUS = "−"


class TestParseState:
    @pytest.mark.parametrize("text,expected", [
        ("4P1/2", (4, 1, 1)),
        ("1S1/2", (1, 0, 1)),
        ("5G7/2", (5, 4, 7)),
        ("4p1/2", (4, 1, 1)),
        ("2P3/2", (2, 1, 3)),
        ("4P0.5", (4, 1, 1)),
        ("3D2.5", (3, 2, 5)),
        ("12D5/2", (12, 2, 5)),
        ("30[25]51/2", (30, 25, 51)),
    ])
    def test_examples(self, text, expected):
        state = parse_state(text)
        assert (state.n, state.l, state.j2) == expected

    @pytest.mark.parametrize("text", [
        "", "P1/2", "4P", "41/2", "4?1/2",
        "4P2/2",    # j integral
        "4S3/2",    # |2l - j2| != 1
        "3D7/2",    # |2l - j2| != 1
        "4F7/2x",
        "2D3/2",    # l >= n
        "1P1/2",    # l >= n
        "4X1/2",    # X is l=17 >= n
    ])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            parse_state(text)

    def test_format_examples(self):
        assert format_state(StateLabel(4, 1, 1)) == "4P1/2"
        assert format_state(StateLabel(5, 4, 7)) == "5G7/2"
        assert format_state(StateLabel(30, 25, 51)) == "30[25]51/2"

    @given(st.integers(1, 50), st.data())
    def test_roundtrip(self, n, data):
        l = data.draw(st.integers(0, n - 1))
        j2_options = [j2 for j2 in (2 * l - 1, 2 * l + 1) if j2 >= 1]
        j2 = data.draw(st.sampled_from(j2_options))
        state = StateLabel(n, l, j2)
        assert parse_state(format_state(state)) == state


class TestUncertainValue:
    def test_validation(self):
        with pytest.raises(ValueError):
            UncertainValue(1.0, -0.1)
        with pytest.raises(ValueError):
            UncertainValue(math.nan, 0.0)
        with pytest.raises(ValueError):
            UncertainValue(0.0, math.inf)

    def test_scale_examples(self):
        assert scale(UncertainValue(2.0, 0.5), -3.0) == UncertainValue(-6.0, 1.5)
        assert scale(UncertainValue(7.0, 0.4), 0.0) == UncertainValue(0.0, 0.0)
        assert scale(UncertainValue(1.0, 0.1), 1.0) == UncertainValue(1.0, 0.1)

    def test_add_quadrature_examples(self):
        assert add_quadrature(UncertainValue(1, 3), UncertainValue(2, 4)) == UncertainValue(3, 5)
        assert add_quadrature(exact(2.5), exact(-1.5)) == UncertainValue(1.0, 0.0)
        u = add_quadrature(UncertainValue(0, 2.0), UncertainValue(0, 2.0))
        assert u.value == 0 and u.sigma == pytest.approx(2.0 * math.sqrt(2), rel=1e-15)

    @given(st.floats(-1e6, 1e6), st.floats(0, 1e3), st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))
    def test_scale_composes(self, v, s, a, b):
        u = UncertainValue(v, s)
        left = scale(scale(u, a), b)
        right = scale(u, a * b)
        assert left.value == pytest.approx(right.value, rel=1e-12, abs=1e-12)
        assert left.sigma == pytest.approx(right.sigma, rel=1e-12, abs=1e-12)

    @given(st.floats(-1e6, 1e6), st.floats(0, 1e3), st.floats(-1e6, 1e6), st.floats(0, 1e3))
    def test_add_quadrature_commutes(self, v1, s1, v2, s2):
        a, b = UncertainValue(v1, s1), UncertainValue(v2, s2)
        assert add_quadrature(a, b) == add_quadrature(b, a)
        assert add_quadrature(a, UncertainValue(0.0, 0.0)) == a


class TestFormatParenthesis:
    def test_paper_forms(self):
        text = format_parenthesis(UncertainValue(-1404.2401, 0.002), "kHz")
        assert text == f"{MINUS}1404.240(2) kHz"
        text = format_parenthesis(UncertainValue(-1403.5, 0.7), "kHz")
        assert text == f"{MINUS}1403.5(7) kHz"

    def test_exact_value(self):
        assert format_parenthesis(UncertainValue(5.0, 0.0)) == "5.0"

    def test_two_digits_when_leading_one(self):
        assert format_parenthesis(UncertainValue(-1404.2401, 0.0016)) == f"{MINUS}1404.2401(16)"
        text = format_parenthesis(UncertainValue(-1404.2401, 0.0016), two_digits_on_one=False)
        assert text == f"{MINUS}1404.240(2)"

    def test_rounding_carry(self):
        assert format_parenthesis(UncertainValue(1.234, 0.098)) == "1.2(1)"

    def test_integer_place(self):
        assert format_parenthesis(UncertainValue(123.0, 97.0)) == "100(100)"

    def test_no_negative_zero(self):
        assert format_parenthesis(UncertainValue(-0.0004, 0.3)) == "0.0(3)"

    def test_three_term_scale(self):
        # alpha^3-level bound on the kHz scale rounds to one digit
        assert format_parenthesis(UncertainValue(-1404.2600, 0.0049416), "kHz") \
            == f"{MINUS}1404.260(5) kHz"


class TestConstants:
    def test_validation(self):
        with pytest.raises(ValueError):
            ConstantsSet(alpha=0.5, electron_rest_frequency=1e20, label="x")
        with pytest.raises(ValueError):
            ConstantsSet(alpha=7.3e-3, electron_rest_frequency=-1.0, label="x")

    def test_zalpha_guard(self):
        constants = ConstantsSet(alpha=7.2973525693e-3, electron_rest_frequency=1.2356e20,
                                 label="test")
        assert check_zalpha(1, constants) == pytest.approx(7.2973525693e-3, rel=1e-15)
        with pytest.raises(ValueError):
            check_zalpha(0, constants)
        with pytest.raises(ValueError):
            check_zalpha(-3, constants)
        with pytest.raises(ValueError):
            check_zalpha(138, constants)  # Z alpha > 1
