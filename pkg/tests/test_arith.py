import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvepair.arith import Dyadic, IBox, Interval, contains_zero, interval_add, interval_mul, interval_sub


def iv(a, b):
    return Interval(a, b)


@pytest.mark.parametrize(
    "op, I, J, expected",
    [
        (interval_add, (1, 2), (3, 4), (4, 6)),
        (interval_add, (0, 0), (-5, 7), (-5, 7)),
        (interval_add, (-1, 1), (-2, 2), (-3, 3)),
        (interval_sub, (1, 2), (3, 4), (-3, -1)),
        (interval_sub, (-5, 7), (0, 0), (-5, 7)),
        (interval_sub, (0, 1), (0, 1), (-1, 1)),
        (interval_mul, (-1, 2), (3, 4), (-4, 8)),
        (interval_mul, (1, 1), (-5, 7), (-5, 7)),
        (interval_mul, (-2, -1), (-3, -1), (1, 6)),
    ],
)
def test_interval_examples(op, I, J, expected):
    assert op(iv(*I), iv(*J)) == iv(*expected)


@pytest.mark.parametrize("I, expected", [((-1, 1), True), ((1, 2), False), ((0, 0), True), ((-3, -1), False)])
def test_contains_zero(I, expected):
    assert contains_zero(iv(*I)) is expected


def test_dyadic_canonical_form():
    assert (Dyadic(12, 0).mantissa, Dyadic(12, 0).exponent) == (3, 2)
    z = Dyadic(0, 17)
    assert (z.mantissa, z.exponent) == (0, 0)
    assert Dyadic(1, -1) + Dyadic(1, -1) == Dyadic(1)
    s = Dyadic(3, -2) + Dyadic(1, -2)
    assert (s.mantissa, s.exponent) == (1, 0)


def test_dyadic_text_round_trip():
    for d in (Dyadic(0), Dyadic(5), Dyadic(-3, -7), Dyadic(1, 40), Dyadic(-27, -4)):
        assert Dyadic.parse(str(d)) == d
    assert str(Dyadic(-27, -4)) == "-27*2^-4"
    assert str(Dyadic(6)) == "3*2^1"


def test_dyadic_coerce_rejects_non_dyadic():
    assert Dyadic.coerce(Fraction(3, 8)) == Dyadic(3, -3)
    with pytest.raises(ValueError):
        Dyadic.coerce(Fraction(1, 3))


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        Interval(2, 1)


def test_even_power_tightening():
    assert iv(-1, 2) ** 2 == iv(0, 4)
    assert iv(-3, 2) ** 2 == iv(0, 9)
    assert iv(-1, 2) ** 3 == iv(-1, 8)
    assert iv(-2, -1) ** 2 == iv(1, 4)
    assert iv(-2, 3) ** 0 == iv(1, 1)
    # sound: contains the true image of x^4 on [-1/2, 3/4]
    p = iv(Dyadic(-1, -1), Dyadic(3, -2)) ** 4
    assert p.lo == 0 and p.hi == Dyadic(81, -8)


def test_ibox_helpers():
    b = IBox.from_bounds(0, 0, 2, 1)
    assert b.contains((Dyadic(1), Dyadic(1, -1)))
    assert not b.contains((Dyadic(3), Dyadic(0)))
    assert IBox.from_bounds(0, 0, 1, 1).subset_of(b)
    assert b.scaled() == (0, 2, 0, 1, 0)
    assert IBox.from_scaled(1, 3, -1, 1, 2).bounds() == (Dyadic(1, -2), Dyadic(-1, -2), Dyadic(3, -2), Dyadic(1, -2))


def _rand_dyadic(rng):
    return Dyadic(rng.randint(-2000, 2000), rng.randint(-12, 4))


def _rand_interval(rng):
    a, b = _rand_dyadic(rng), _rand_dyadic(rng)
    return Interval(min(a, b), max(a, b))


def _sample(rng, I):
    """Random dyadic point of I, endpoints included."""
    r = rng.random()
    if r < 0.1:
        return I.lo
    if r < 0.2:
        return I.hi
    t = Dyadic(rng.randint(0, 1 << 16), -16)
    return I.lo + (I.hi - I.lo) * t


@pytest.mark.parametrize("op, exact", [(interval_add, lambda a, b: a + b), (interval_sub, lambda a, b: a - b), (interval_mul, lambda a, b: a * b)])
def test_inclusion_soundness_1000_samples(op, exact):
    rng = random.Random(20240611)
    for _ in range(1000):
        I, J = _rand_interval(rng), _rand_interval(rng)
        K = op(I, J)
        i, j = _sample(rng, I), _sample(rng, J)
        assert exact(i, j) in K


@settings(max_examples=200, deadline=None)
@given(
    st.integers(-10**6, 10**6), st.integers(-30, 30), st.integers(-10**6, 10**6), st.integers(-30, 30)
)
def test_dyadic_ops_exact_and_canonical(m1, e1, m2, e2):
    a, b = Dyadic(m1, e1), Dyadic(m2, e2)
    fa, fb = a.to_fraction(), b.to_fraction()
    for d, ref in ((a + b, fa + fb), (a - b, fa - fb), (a * b, fa * fb), (-a, -fa)):
        assert d.to_fraction() == ref
        assert d.mantissa % 2 == 1 or (d.mantissa == 0 and d.exponent == 0)
    assert (a < b) == (fa < fb)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-500, 500), min_size=4, max_size=4), st.integers(0, 6))
def test_interval_endpoints_equal_formula(vals, k):
    a, b, c, d = (Dyadic(v, -k) for v in vals)
    I, J = Interval(min(a, b), max(a, b)), Interval(min(c, d), max(c, d))
    assert interval_add(I, J) == Interval(I.lo + J.lo, I.hi + J.hi)
    assert interval_sub(I, J) == Interval(I.lo - J.hi, I.hi - J.lo)
    prods = [x * y for x in (I.lo, I.hi) for y in (J.lo, J.hi)]
    assert interval_mul(I, J) == Interval(min(prods), max(prods))
