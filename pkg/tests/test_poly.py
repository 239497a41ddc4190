import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvepair.arith import Dyadic, IBox, Interval
from curvepair.poly import (
    BivariatePolynomial,
    CurvePair,
    PolynomialSyntaxError,
    eval_exact,
    eval_interval,
    parse_polynomial,
    partial_derivative,
    rescale_to_square,
)

CIRCLE = "x^2 + y^2 - 4"


def test_parse_examples():
    assert parse_polynomial(CIRCLE).terms == {(2, 0): 1, (0, 2): 1, (0, 0): -4}
    assert parse_polynomial("0").terms == {}
    assert parse_polynomial("0").is_zero()
    assert parse_polynomial("(x-2)^2 + y^2 - 4").terms == {(2, 0): 1, (1, 0): -4, (0, 2): 1}


def test_parse_misc():
    assert parse_polynomial("-(x*y)^2 + 3*x^0") == parse_polynomial("3 - x^2*y^2")
    assert parse_polynomial(" x * ( y + 1 ) ") == parse_polynomial("x*y+x")
    assert parse_polynomial("123456789012345678901234567890*x").terms == {(1, 0): 123456789012345678901234567890}


@pytest.mark.parametrize("text", ["2x", "x^", "x^-1", "(x+1", "x+*y", "z", "x^y", ""])
def test_parse_errors(text):
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_polynomial(text)
    assert isinstance(info.value.position, int)


def test_non_integer_coefficient():
    with pytest.raises(PolynomialSyntaxError, match="non-integer"):
        parse_polynomial("x - 1.5")


@pytest.mark.parametrize("text", [CIRCLE, "(x-2)^2+y^2-4", "0", "-x^3*y + 7*y^5 - x", "16*x^2+16*y^2-17", "-1"])
def test_print_parse_idempotent(text):
    p = parse_polynomial(text)
    assert parse_polynomial(str(p)) == p
    assert str(parse_polynomial(str(p))) == str(p)


def test_derivative_examples():
    assert partial_derivative(parse_polynomial(CIRCLE), "x") == parse_polynomial("2*x")
    assert partial_derivative(parse_polynomial("x"), "y").is_zero()
    assert partial_derivative(parse_polynomial("x^2*y^3"), "x") == parse_polynomial("2*x*y^3")


def test_eval_exact_examples():
    p = parse_polynomial(CIRCLE)
    assert eval_exact(p, (Dyadic(0), Dyadic(0))) == Dyadic(-4)
    assert eval_exact(p, (Dyadic(2), Dyadic(0))) == Dyadic(0)
    assert eval_exact(p, (Dyadic(1, -1), Dyadic(1, -1))) == Dyadic(-7, -1)


def test_eval_interval_examples():
    p = parse_polynomial(CIRCLE)
    assert eval_interval(p, IBox.from_bounds(0, 0, 1, 1)) == Interval(-4, -2)
    assert eval_interval(p, IBox.from_bounds(1, 1, 2, 2)) == Interval(-2, 4)
    box = IBox.from_bounds(Dyadic(-5, -3), -9, 11, Dyadic(3, -5))
    assert eval_interval(parse_polynomial("7"), box) == Interval(7, 7)


def test_curve_pair_partials():
    pair = CurvePair.from_text(CIRCLE, "x*y-1")
    assert pair.fx == parse_polynomial("2*x") and pair.gy == parse_polynomial("x")
    with pytest.raises(ValueError):
        CurvePair(pair.f, pair.g, fx=parse_polynomial("x"))


def test_rescale_examples():
    x = parse_polynomial("x")
    q = rescale_to_square(x, (0, 0, 2, 1), (0, 0, 2, 2))
    assert q.terms.keys() == {(1, 0)} and q.terms[(1, 0)] > 0
    p = parse_polynomial("x^2+y^2-4")
    assert rescale_to_square(p, (-4, -4, 4, 4), (-4, -4, 4, 4)) == p
    q = rescale_to_square(parse_polynomial("y-1"), (0, 0, 4, 2), (0, 0, 4, 4))
    c = q.terms[(0, 1)]
    assert c > 0 and q == parse_polynomial(f"{c}*y - {2 * c}")
    with pytest.raises(ValueError):
        rescale_to_square(p, (0, 0, 0, 1), (0, 0, 1, 1))


def _random_poly(rng, deg=4):
    terms = {}
    for i in range(deg + 1):
        for j in range(deg + 1 - i):
            if rng.random() < 0.6:
                terms[(i, j)] = rng.randint(-20, 20)
    return BivariatePolynomial(terms)


def test_interval_eval_contains_exact_values():
    rng = random.Random(7)
    for _ in range(40):
        p = _random_poly(rng)
        k = rng.randint(0, 6)
        xl, yl = rng.randint(-40, 40), rng.randint(-40, 40)
        xh, yh = xl + rng.randint(0, 30), yl + rng.randint(0, 30)
        box = IBox.from_scaled(xl, xh, yl, yh, k)
        enc = eval_interval(p, box)
        for _ in range(100):
            pt = (Dyadic(rng.randint(xl << 8, xh << 8), -k - 8), Dyadic(rng.randint(yl << 8, yh << 8), -k - 8))
            assert box.contains(pt)
            assert eval_exact(p, pt) in enc


def test_interval_eval_agrees_at_points():
    rng = random.Random(11)
    for _ in range(30):
        p = _random_poly(rng)
        x, y = Dyadic(rng.randint(-99, 99), -3), Dyadic(rng.randint(-99, 99), -2)
        assert eval_interval(p, IBox(Interval.point(x), Interval.point(y))) == Interval.point(eval_exact(p, (x, y)))


def test_rescale_preserves_signs():
    rng = random.Random(3)
    rect, square = (-1, 0, 2, 1), (-1, 0, 3, 4)
    for _ in range(10):
        p = _random_poly(rng, 3)
        q = rescale_to_square(p, rect, square)
        for _ in range(20):
            s = (Dyadic(rng.randint(-64, 192), -6), Dyadic(rng.randint(0, 256), -6))
            # A maps the square onto the rectangle
            a = (Dyadic(-1) + (s[0] + 1) * Dyadic(3, -2), s[1] * Dyadic(1, -2))
            assert eval_exact(q, s).sign() == eval_exact(p, a).sign()


coeffs = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-9, 9), max_size=6)


@settings(max_examples=100, deadline=None)
@given(coeffs, coeffs, st.sampled_from("xy"))
def test_derivative_linear(a, b, var):
    p, q = BivariatePolynomial(a), BivariatePolynomial(b)
    assert partial_derivative(p + q, var) == partial_derivative(p, var) + partial_derivative(q, var)


@given(st.integers(-10**9, 10**9), st.sampled_from("xy"))
def test_derivative_of_constant(c, var):
    assert partial_derivative(BivariatePolynomial.constant(c), var).is_zero()
