import pytest
from hypothesis import given, strategies as st

from goldlight.poly import ParseError, parse_polynomial
from goldlight.scalar import R2, ExtScalar, embed_float


def test_parse_and_evaluate():
    p = parse_polynomial("x1 - 1/2 (x2 + x3)^2 + r2 x1 x3", 3)
    pt = (ExtScalar(2), ExtScalar(1), ExtScalar(-3))
    assert p(pt) == ExtScalar(2) - ExtScalar(2) + R2 * -6


def test_derivatives():
    p = parse_polynomial("x1^3 x2 + 5 x2^2 - x1", 2)
    assert str(p.derivative(0)) == str(parse_polynomial("3 x1^2 x2 - 1", 2))
    assert str(p.derivative(1)) == str(parse_polynomial("x1^3 + 10 x2", 2))
    assert parse_polynomial("7", 2).derivative(0).is_zero()


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_derivative_matches_finite_differences(a, b):
    p = parse_polynomial("x1^3 x2 - r5 x1 x2^2 + r10 x2", 2)
    h = 1e-5
    for i in range(2):
        shift = [0.0, 0.0]
        shift[i] = h
        hi = p((a + shift[0], b + shift[1]), embed_float)
        lo = p((a - shift[0], b - shift[1]), embed_float)
        exact = p.derivative(i)((a, b), embed_float)
        assert exact == pytest.approx((hi - lo) / (2 * h), abs=1e-6)


@pytest.mark.parametrize(
    "text, column",
    [
        ("x1 + $", 6),
        ("x1 + (x2", None),
        ("x4", 1),
    ],
)
def test_parse_errors_carry_position(text, column):
    with pytest.raises(ParseError) as info:
        parse_polynomial(text, 3)
    if column is not None:
        assert info.value.column == column
