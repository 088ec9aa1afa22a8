from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from domsets.gauges import (ash2_transform, asymp_check, dim2_gauge, doubling11_regularize,
                            doubling2_check, gauge_doubling, gauge_from_seq, gauge_order, gscale, power, pwl, reclog,
                            recloglog, tau, two_gauges)
from domsets.numerics import Value
from domsets.sequences import CertificateError, dblexp, geometric, harmonic_power

HALF = Value(1, 2)
G = geometric(HALF)
ONE = Value(1)


def test_eval_examples():
    assert reclog().eval(Value.pow2(-8)) == Value(1, 8)
    assert power(HALF).eval(Value(1, 16)) == Value(1, 4)
    assert recloglog().eval(Value.pow2(-16)) == Value(1, 4)


def test_eval_outside_domain():
    with pytest.raises(ValueError):
        reclog().eval(Value(0))


def test_inverse_examples():
    # generalized inverse of 1/log2(1/r) at 2^-n is 2^-2^n
    for n in range(1, 6):
        assert reclog().inverse(Value.pow2(-n)) == Value.pow2(-(2 ** n))
    assert power(HALF).inverse(Value(1, 4)) == Value(1, 16)
    p = pwl([(HALF, HALF), (Value(1, 4), Value(1, 8))])
    assert p.inverse(Value(1, 8)) == Value(1, 4)


@given(st.integers(1, 40))
def test_generalized_inverse_galois(n):
    # psi*(psi(t)) <= t and psi(psi*(t)) >= t, exact on the dyadic grid
    g = reclog()
    t = Value.pow2(-n)
    assert g.inverse(g.eval(t)) <= t
    assert g.eval(g.inverse(t)) >= t


def test_pwl_interpolates_exactly():
    p = pwl([(HALF, HALF), (Value(1, 4), Value(1, 8))])
    assert p.eval(Value(3, 8)) == Value(5, 16)


def test_order_examples():
    assert gauge_order(power(ONE), power(Value(2))).verdict == "≺"
    assert gauge_order(reclog(), power(Value(1, 10))).verdict == "≺"
    assert gauge_order(power(HALF), gscale(Value(2), power(HALF))).verdict == "≈"


@given(st.fractions(Fraction(1, 8), 3, max_denominator=8), st.fractions(Fraction(1, 8), 3, max_denominator=8))
def test_power_order_is_consistent(a, b):
    pa, pb = power(Value.of(a)), power(Value.of(b))
    assert gauge_order(pa, pa).verdict == "≈"
    v = gauge_order(pa, pb).verdict
    if a < b:
        assert v == "≺" and gauge_order(pb, pa).verdict != "≺"
    elif a == b:
        assert v == "≈"


def test_doubling_examples():
    assert gauge_doubling(power(Value(3, 2)), Value(3), N=32).holds
    assert gauge_doubling(power(ONE), Value(2), N=32).holds
    assert gauge_doubling(reclog(), Value(3, 2)).holds
    assert not gauge_doubling(power(Value(2)), Value(2), N=32).holds


def test_doubling2():
    assert doubling2_check(power(ONE), 1).witness["bound"] == Value(2)
    assert doubling2_check(reclog(), 1).holds
    with pytest.raises(CertificateError):
        doubling2_check(power(Value(2)), 1)


def test_compose():
    assert [reclog().eval(G.at(n)) for n in range(1, 6)] == [Value(1, n) for n in range(1, 6)]
    assert power(Value(3)).eval(G.at(4)) == Value.pow2(-12)


def test_asymp_examples():
    a, b, v = asymp_check(power(HALF), harmonic_power(Value(2)), N=200)
    assert (a, b) == (Value(100, 101), Value(200, 201)) and v.holds
    a, b, v = asymp_check(recloglog(), dblexp(HALF), N=50)
    assert v.holds and Value(1, 2) <= a <= b <= 1


def test_from_seq():
    f = gauge_from_seq(G)
    assert f.eval(Value(1, 4)) == HALF
    a, b, v = asymp_check(f, G, N=64)
    assert a == b == ONE
    assert gauge_from_seq(harmonic_power(ONE)).eval(Value(1, 3)) == HALF


def test_asymp_transfers_along_equivalence():
    f = gauge_from_seq(G)
    a, b, _ = asymp_check(gscale(Value(3), f), G, N=64)
    assert a == b == Value(3)


def test_ash2_modes():
    _, v = ash2_transform(power(ONE), G, "shrink", 60)
    assert v.holds and v.witness["ratio_grows"] and v.witness["breakpoints_strict"]
    _, v = ash2_transform(reclog(), G, "grow", 60)
    assert v.holds and v.witness["ratio_shrinks"] and v.witness["window_ok"]
    with pytest.raises(CertificateError):
        ash2_transform(reclog(), G, "shrink", 60)


def test_doubling11_worked_values():
    psi, v = doubling11_regularize(power(ONE), 2, 20)
    assert v.witness["a_head"] == [Value(2 * 2 ** n - 1, 4 ** n) for n in range(1, 5)]
    assert psi.eval(HALF) == Value(3, 4) and psi.eval(Value(1, 4)) == Value(7, 16)
    assert v.witness["strictly_increasing"] and v.witness["grid_strict_doubling"]
    assert v.witness["midpoint_strict_doubling"] and v.witness["band_ok"]


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8))
def test_doubling11_property(num, c):
    phi = gscale(Value(c, 2), power(Value(num, 8)))
    psi, v = doubling11_regularize(phi, 2, 120)
    assert v.holds
    assert gauge_doubling(psi, 2, strict=True, N=100).holds


def test_doubling11_rejects_non_doubling():
    with pytest.raises(CertificateError):
        doubling11_regularize(power(Value(2)), 2, 50)


def test_two_gauges_examples():
    zeta, xi, v = two_gauges(power(ONE), harmonic_power(Value(2)), 100)
    assert xi.eval(Value(1, 4)) == Value(1, 16)
    assert zeta.eval(Value(1, 4)) == Value(1, 32)
    assert v.witness["termwise_zeta_le_phi"] and v.holds


def test_tau_matches_definition():
    t = tau(Value(2), power(ONE))
    assert t.eval(Value.pow2(-8)) == Value(1, 256 * 64)


def test_dim2_splice():
    _, v = dim2_gauge(HALF, power(Value(1, 4)), geometric(Value(1, 4)), N=4)
    assert v.holds and v.witness["continuous"] and v.witness["phi_le_psi"]
    # s1 = 1/4 splices to s'1 = 1/8
    assert v.witness["splice_exponents"][0] == 2 and v.witness["plateau_exponents"][0] == 3
