import math

import pytest
from hypothesis import given, settings, strategies as st

from domsets.cantor import sym_build
from domsets.gauges import power, pwl, reclog
from domsets.measure import (cubes1_test, hdim_estimate, hmeasure_lower, hmeasure_upper, measure_bracket,
                             separation_witness)
from domsets.numerics import Value, hi
from domsets.sequences import CertificateError, geometric, pow2exp

HALF = Value(1, 2)
G = geometric(HALF)
QUARTER = geometric(Value(1, 4))


def test_cubes1_examples():
    v = cubes1_test(2, G, power(Value(1)), N=32)
    assert v.fails and v.witness["tail_min"] == 1
    for alpha in (Value(1, 4), Value(1), Value(3)):
        assert cubes1_test(2, pow2exp(Value(2)), power(alpha), N=32).holds
    assert cubes1_test(2, G, reclog(), N=32).fails


@given(st.integers(2, 8), st.fractions(0.25, 2, max_denominator=4))
def test_cubes1_matches_geometric_closed_form(q, beta):
    # ledger (2 q^-beta)^n: null iff 2 q^-beta < 1
    v = cubes1_test(2, geometric(Value(1, q)), power(Value.of(beta)), N=32)
    base = 2 * q ** -float(beta)
    if base < 1 - 1e-9:
        assert v.holds
    elif base > 1 + 1e-9:
        assert v.fails


def test_upper_examples():
    X = sym_build(QUARTER, 10)
    for d in (1, 5, 10):
        assert hmeasure_upper(X, power(HALF), depth=d).value == 1
    assert hmeasure_upper(sym_build(G, 6), power(Value(1))).value == 1
    assert hmeasure_upper(X, power(Value(3, 5)), depth=10).value == Value(1, 4)


def test_upper_needs_depth():
    X = sym_build(QUARTER, 3)
    with pytest.raises(ValueError):
        hmeasure_upper(X, power(HALF), delta=Value.pow2(-10))


def _all_antichain_costs(X, phi, delta, k=0, idx=0):
    """Every cover of the leaves by an antichain of nodes with diam < delta,
    costed with upper endpoints of the gauge enclosures."""
    length = X.length(k)
    own = [hi(phi.eval(length))] if length < delta else []
    if k == X.depth:
        return own
    left = _all_antichain_costs(X, phi, delta, k + 1, 2 * idx)
    right = _all_antichain_costs(X, phi, delta, k + 1, 2 * idx + 1)
    return own + [a + b for a in left for b in right]


@settings(max_examples=15, deadline=None)
@given(st.integers(3, 9), st.integers(1, 4), st.fractions(0.25, 1.5, max_denominator=4))
def test_upper_dp_is_minimal_over_antichains(q, depth, beta):
    X = sym_build(geometric(Value(1, q)), depth)
    phi = power(Value.of(beta))
    up = hmeasure_upper(X, phi, depth=depth)
    oracle = min(_all_antichain_costs(X, phi, X.length(0)))
    assert up.value == oracle
    assert up.recheck.holds


@settings(max_examples=10, deadline=None)
@given(st.integers(3, 9), st.fractions(0.25, 1.5, max_denominator=4))
def test_upper_monotone_in_depth(q, beta):
    X = sym_build(geometric(Value(1, q)), 7)
    phi = power(Value.of(beta))
    vals = [hmeasure_upper(X, phi, depth=d).value for d in range(1, 8)]
    assert all(b <= a for a, b in zip(vals, vals[1:]))


def test_lower_examples():
    low, cert = hmeasure_lower(sym_build(QUARTER, 8), power(HALF))
    assert low >= Value(1, 4)
    assert hmeasure_lower(sym_build(G, 6), power(Value(1)))[0] == 1
    # a gauge with phi(r_n) = 2^-n on the radii of C(1/5)
    phi = pwl([(Value(1, 5 ** n), Value(1, 2 ** n)) for n in range(14)])
    assert hmeasure_lower(sym_build(geometric(Value(1, 5)), 8), phi)[0] >= Value(1, 4)


def test_bracket_is_ordered():
    for q in (3, 4, 5):
        b = measure_bracket(sym_build(geometric(Value(1, q)), 8), power(HALF))
        assert b.lower <= b.upper


@pytest.mark.parametrize("q,expected", [(4, 0.5), (3, math.log(2) / math.log(3)), (2, 1.0), (8, 1 / 3)])
def test_dimension(q, expected):
    rep = hdim_estimate(sym_build(geometric(Value(1, q)), 12), Value(1, 50), depth=12)
    a, b = rep["enclosure"]
    assert float(a) <= expected <= float(b) and b - a <= Value(1, 50)


def test_versus1_cube_witness():
    w = separation_witness("versus1_cube", reclog())
    assert w["radii"][:3] == [Value(1, 4), Value(1, 16), Value(1, 256)]
    assert w["ledger_constant"] == 1


def test_ideals_pair():
    # psi comes first, then phi
    w = separation_witness("ideals_pair", power(HALF), power(Value(1)))
    assert w["radii"][:3] == [Value(1, 4), Value(1, 16), Value(1, 64)]
    assert w["phi_null"] and w["psi_lower"] >= Value(1, 4)
    with pytest.raises(CertificateError):
        separation_witness("ideals_pair", power(Value(1)), power(HALF))
