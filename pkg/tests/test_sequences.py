from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from domsets.covers import check_fine
from domsets.numerics import GREATER, LESS, Value, lo
from domsets.sequences import (CertificateError, ash_transform, ashift, closure, compare_terms, dblexp, factexp,
                               geometric, growth_condition, harmonic_power, interleave_covers, lp_corridor_classify,
                               lp_test, mshift, partition_decode, partition_encode, pow2exp, scale, seq_leq,
                               shift_completion, table)

HALF = Value(1, 2)
G = geometric(HALF)


def test_closed_forms():
    assert [G.at(n) for n in (1, 2, 10)] == [Value(1, 2), Value(1, 4), Value.pow2(-10)]
    assert harmonic_power(Value(2)).at(3) == Value(1, 16)  # (n+1)^-p
    assert pow2exp(Value(2)).at(3) == Value.pow2(-9)
    assert dblexp(HALF).at(4) == Value.pow2(-16)
    assert factexp(HALF).at(4) == Value.pow2(-24)


def test_radius_zero_is_root():
    assert G.radius(0) == Value(1)
    assert dblexp(HALF).radius(0) == HALF


def test_index_must_be_positive():
    with pytest.raises(ValueError):
        G.at(0)


def test_shifts():
    assert mshift(G, 3).at(2) == G.at(6)
    assert ashift(G, 3).at(2) == G.at(5)
    assert mshift(dblexp(HALF), 2).at(3) == Value.pow2(-(4 ** 3))
    assert scale(G, Value(1, 4)).at(1) == Value(1, 8)


def test_table():
    t = table([Value(1, 2), Value(1, 4)])
    with pytest.raises(IndexError):
        t.at(3)
    tail = table([Value(1, 2), Value(1, 4)], tail_ratio=Value(1, 3))
    assert tail.at(4) == Value(1, 36)
    with pytest.raises(ValueError):
        table([Value(1, 2), Value(1, 2)])


def test_families():
    assert [m.at(1) for m in closure(G, 3).members()] == [Value(1, 2), Value(1, 4), Value(1, 8)]
    assert [m.at(1) for m in shift_completion(G, 2).members()] == [Value(1, 4), Value(1, 8)]


@given(st.integers(1, 300), st.integers(1, 300))
def test_compare_terms_matches_exponents(n, m):
    # 2^-n against 4^-m
    c = compare_terms(G, n, geometric(Value(1, 4)), m)
    assert c == (GREATER if n < 2 * m else LESS if n > 2 * m else "equal")


def test_compare_terms_far_below_float_range():
    assert compare_terms(dblexp(HALF), 40, dblexp(Value(1, 3)), 40) == GREATER


@pytest.mark.parametrize("s,p,status", [
    (G, 1, "holds"),
    (harmonic_power(Value(1)), 1, "fails"),
    (harmonic_power(Value(2)), 1, "holds"),
    (harmonic_power(Value(2)), HALF, "fails"),
    (dblexp(HALF), Value(1, 100), "holds"),
])
def test_lp(s, p, status):
    assert lp_test(s, p).status == status


def test_lp_ledger_is_exact_harmonic_sum():
    v = lp_test(harmonic_power(Value(1)), 1, N=64)
    ledger = dict(v.witness["ledger"])
    assert lo(ledger[64]) == Value.of(sum(Fraction(1, n + 1) for n in range(1, 65)))


def test_corridor():
    rep = lp_corridor_classify(harmonic_power(Value(2)), HALF)
    assert rep["plus"] and not rep["minus"]


def test_seq_leq():
    assert seq_leq(geometric(Value(1, 4)), G).holds
    v = seq_leq(G, geometric(Value(1, 4)))
    assert v.fails and v.witness["index"] == 1
    assert seq_leq(G, harmonic_power(Value(1))).holds


@pytest.mark.parametrize("s,cond,key,val", [
    (G, "cond_3sn", "m", 3),
    (harmonic_power(Value(2)), "cond_simple3", "j", 4),
])
def test_growth_parameters(s, cond, key, val):
    v = growth_condition(s, cond, 400)
    assert v.holds and v.witness[key] == val


def test_cond_1sn():
    assert growth_condition(pow2exp(Value(2)), "cond_1sn", 300).holds
    # 2^-n does not shrink by 4^n
    v = growth_condition(G, "cond_1sn", 300)
    assert v.fails and v.witness["index"] == 1


@given(st.integers(0, 40), st.integers(0, 10**6))
def test_partition_codec_roundtrip(k, i):
    n = partition_encode(k, i)
    assert partition_decode(n) == (k, i)
    assert n % (1 << k) == 0 and (n >> k) % 2 == 1


def test_partition_example():
    assert partition_encode(1, 2) == 10


def test_interleave_rejects_unfit_family():
    fams = {0: {1: (Value(0), Value(1, 4))}}  # needs diameter < s_4 = 1/16
    with pytest.raises(CertificateError):
        interleave_covers(fams, G)


def test_interleave_merges_indices():
    fams = {0: {1: (Value(0), Value(1, 32))}, 2: {3: (Value(1, 2), Value(1, 2))}}
    res = interleave_covers(fams, G)
    assert set(res.cover.elements) == {3, 28}
    assert res.index_map[28] == (2, 3)
    assert check_fine(res.cover, G).holds


class TestAsh:
    @given(st.integers(2, 40).flatmap(lambda q: st.tuples(st.integers(1, q - 1), st.just(q))))
    @settings(max_examples=15, deadline=None)
    def test_summable_output(self, pq):
        c = geometric(Value(*pq))
        out, v = ash_transform(c, "summable", 200)
        terms = [out.at(n) for n in range(1, 201)]
        assert all(a > b for a, b in zip(terms, terms[1:]))
        assert v.holds and v.witness["partial_sum"] <= v.witness["bound"]

    def test_divergent_output(self):
        out, v = ash_transform(harmonic_power(Value(1)), "divergent", 400)
        assert v.holds
        terms = [out.at(n) for n in range(1, 401)]
        assert all(a > b for a, b in zip(terms, terms[1:]))
        # c'_n / c_n -> 0 for c = 1/n
        assert terms[-1] * 400 < terms[39] * 40

    def test_mode_mismatch(self):
        with pytest.raises(CertificateError):
            ash_transform(harmonic_power(Value(1)), "summable", 100)
        with pytest.raises(CertificateError):
            ash_transform(G, "divergent", 100)
        with pytest.raises(CertificateError):
            ash_transform(harmonic_power(Value(2)), "summable", 100)  # no exact tail
