import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from domsets.numerics import (DyadicSum, IntervalVal, NumCtx, Value, EQUAL, GREATER, LESS, UNKNOWN, eval_log2,
                              exp2, format_value, parse_value, pow_rational, sqrt_floor_grid, to_sum, value_cmp)

fractions = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)
positive = st.fractions(min_value=Fraction(1, 10**6), max_value=10**6, max_denominator=10**6)


def V(f):
    return Value.of(Fraction(f))


class TestValue:
    def test_canonical_form(self):
        v = Value(12, 40)
        assert (v.num, v.den, v.exp) == (3, 5, -1)
        assert Value(0, 7, 9) == Value(0)
        assert Value(-3, -6) == Value(1, 2)

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            Value(1, 0)

    def test_huge_exponents_stay_cheap(self):
        x = Value.pow2(-(4 ** 12))
        assert x.is_pow2() and x.is_dyadic
        assert (x * x) == Value.pow2(-2 * 4 ** 12)
        assert x < Value.pow2(-(4 ** 12) + 1)

    @given(fractions, fractions)
    def test_field_ops_match_fraction(self, a, b):
        x, y = V(a), V(b)
        assert (x + y).to_fraction() == a + b
        assert (x - y).to_fraction() == a - b
        assert (x * y).to_fraction() == a * b
        if b:
            assert (x / y).to_fraction() == a / b

    @given(fractions, fractions)
    def test_order_matches_fraction(self, a, b):
        assert (V(a) < V(b)) == (a < b)
        assert (V(a) == V(b)) == (a == b)

    @given(fractions)
    def test_floor_ceil(self, a):
        assert V(a).floor() == math.floor(a)
        assert V(a).ceil() == math.ceil(a)

    @given(fractions)
    def test_format_parse_roundtrip(self, a):
        assert parse_value(format_value(V(a))) == V(a)

    @pytest.mark.parametrize("text,expected", [
        ("3/4", Value(3, 4)),
        ("2^-10", Value.pow2(-10)),
        ("3*2^5", Value(96)),
        ("0.02", Value(1, 50)),
        ("-1/3", Value(-1, 3)),
        ("5/3*2^-2", Value(5, 12)),
    ])
    def test_parse(self, text, expected):
        assert parse_value(text) == expected

    @pytest.mark.parametrize("bad", ["", "abc", "1/", "12^3", "*2^3", "1/2.5"])
    def test_parse_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_value(bad)

    def test_big_exponent_rendering(self):
        assert str(Value.pow2(-100)) == "2^-100"
        assert str(Value(3, 1, -100)) == "3*2^-100"
        assert str(Value(3, 8)) == "3/8"

    @given(st.fractions(min_value=0, max_value=10**4, max_denominator=10**4), st.integers(-40, 0))
    def test_sqrt_floor_grid(self, a, g):
        r = sqrt_floor_grid(V(a), g)
        step = Value.pow2(g)
        assert r * r <= V(a) < (r + step) * (r + step)


class TestEnclosures:
    def test_log2_exact_on_powers_of_two(self):
        assert eval_log2(Value.pow2(-37)) == Value(-37)

    @given(positive)
    @settings(max_examples=60)
    def test_log2_encloses(self, a):
        enc = IntervalVal.of(eval_log2(V(a)))
        assert enc.width() <= Value.pow2(-64)
        est = math.log2(a.numerator) - math.log2(a.denominator)
        assert float(enc.lo) - 1e-9 <= est <= float(enc.hi) + 1e-9

    @given(st.fractions(min_value=-30, max_value=30, max_denominator=64))
    @settings(max_examples=60)
    def test_exp2_encloses(self, y):
        enc = IntervalVal.of(exp2(V(y)))
        assert enc.lo <= enc.hi
        assert math.isclose(float(enc.mid()), 2.0 ** float(y), rel_tol=1e-12)

    def test_pow_rational_exact_roots(self):
        assert pow_rational(Value(1, 4), Value(1, 2)) == Value(1, 2)
        assert pow_rational(Value(27, 8), Value(2, 3)) == Value(9, 4)
        assert pow_rational(Value.pow2(-12), Value(3, 4)) == Value.pow2(-9)
        irr = pow_rational(Value(2), Value(1, 2))
        assert isinstance(irr, IntervalVal)
        assert irr.lo * irr.lo <= Value(2) <= irr.hi * irr.hi

    def test_value_cmp_three_valued(self):
        a = IntervalVal(Value(1), Value(2))
        assert value_cmp(a, Value(3)) == LESS
        assert value_cmp(Value(3), a) == GREATER
        assert value_cmp(a, Value(3, 2)) == UNKNOWN
        assert value_cmp(Value(1, 3), Value(2, 6)) == EQUAL

    def test_precision_context(self):
        coarse = IntervalVal.of(eval_log2(Value(3), NumCtx(precision_bits=16)))
        fine = IntervalVal.of(eval_log2(Value(3), NumCtx(precision_bits=128)))
        assert fine.width() < coarse.width()
        assert coarse.lo <= fine.lo and fine.hi <= coarse.hi


dyadics = st.builds(lambda m, e: Value(m, 1, e), st.integers(-2**20, 2**20), st.integers(-300, 40))


class TestDyadicSum:
    @given(st.lists(dyadics, max_size=6), st.lists(dyadics, max_size=6))
    def test_order_and_sum_match_fraction(self, xs, ys):
        sx, sy = DyadicSum(), DyadicSum()
        for x in xs:
            sx = sx + x
        for y in ys:
            sy = sy + y
        fx = sum((x.to_fraction() for x in xs), Fraction(0))
        fy = sum((y.to_fraction() for y in ys), Fraction(0))
        assert sx.to_value().to_fraction() == fx
        assert (sx < sy) == (fx < fy)
        assert (sx == sy) == (fx == fy)
        assert (sx - sy).sign() == (fx > fy) - (fx < fy)

    def test_sparse_terms(self):
        s = to_sum(Value.pow2(-1)) + Value.pow2(-(4 ** 9)) + Value.pow2(-(4 ** 10))
        assert len(s.blocks) == 3
        assert s.leading() == Value.pow2(-1)
        assert s > Value.pow2(-1) and s < Value.pow2(-1) + Value.pow2(-(4 ** 9) + 1)

    def test_non_dyadic_rejected(self):
        with pytest.raises(ValueError):
            DyadicSum.of(Value(1, 3))
