import itertools

import pytest
from hypothesis import given, strategies as st

from domsets.cantor import (CantorCube, Word, cube_metric, expansions, meet_length, mf_test, sym_build, t_map,
                            t_preimage_cover)
from domsets.numerics import IntervalVal, Value, hi, lo
from domsets.sequences import CertificateError, dblexp, geometric, harmonic_power

HALF = Value(1, 2)
G = geometric(HALF)
CUBE = CantorCube(2, G)

words = st.builds(Word, st.lists(st.integers(0, 1), min_size=1, max_size=12).map(tuple), st.sampled_from([0, 1]))


def test_metric_examples():
    assert cube_metric(CUBE, Word.parse("00(0)"), Word.parse("001(0)")) == Value(1, 4)
    X = CantorCube(2, dblexp(HALF))
    assert cube_metric(X, Word.parse("000(0)"), Word.parse("0001(0)")) == Value.pow2(-8)
    assert cube_metric(CUBE, Word.parse("01(1)"), Word.parse("01(1)")) == 0


def test_metric_rejects_unresolved_prefixes():
    with pytest.raises(ValueError):
        meet_length(Word((0, 1)), Word((0, 1)))


@given(words, words, words)
def test_ultrametric(x, y, z):
    d = lambda u, v: cube_metric(CUBE, u, v)
    assert d(x, z) <= max(d(x, y), d(y, z))


@given(words, words)
def test_t_is_lipschitz(x, y):
    # |T(x) - T(y)| <= d(x, y) for the cube with r_n = 2^-n
    tx, ty = t_map(x), t_map(y)
    assert abs(tx - ty) <= cube_metric(CUBE, x, y)


def test_t_examples():
    assert t_map(Word((), 0)) == 0
    assert t_map(Word((), 1)) == 1
    assert t_map(Word((1,), 0)) == HALF
    iv = t_map(Word((1, 0, 1)), 3)
    assert isinstance(iv, IntervalVal) and hi(iv) - lo(iv) == Value(1, 8)


def test_sym_build_examples():
    X = sym_build(geometric(Value(1, 4)), 2)
    assert X.node("1") == (Value(3, 4), Value(1))
    assert X.node("10") == (Value(3, 4), Value(13, 16))
    U = sym_build(G, 6)
    assert all(U.gap(k) == 0 for k in range(6))


def test_sym_build_rejects_slow_ratio():
    with pytest.raises(CertificateError) as e:
        sym_build(geometric(Value(3, 4)), 3)
    assert e.value.witness["index"] == 1


@given(st.integers(2, 9), st.integers(0, 7))
def test_sym_build_invariants(q, depth):
    X = sym_build(geometric(Value(1, q)), depth)
    leaves = X.leaves()
    assert len(leaves) == 2 ** depth
    assert sum((b - a for a, b in leaves), Value(0)) == 2 ** depth * X.length(depth)
    for (_, b), (a, _) in zip(leaves, leaves[1:]):
        assert b <= a
    for k in range(depth + 1):
        for p in itertools.product("01", repeat=k):
            path = "".join(p)
            assert X.node(path)[0] == X.left_formula(path)
            if k < depth:
                for c in "01":
                    lo_, hi_ = X.node(path + c)
                    assert X.node(path)[0] <= lo_ and hi_ <= X.node(path)[1]


def test_preimage_examples():
    pieces = t_preimage_cover(HALF, HALF)
    assert len(pieces) <= 3 and all(p.diameter() == 0 for p in pieces)
    assert {str(p.word) for p in pieces} == {"1(0)", "0(1)"}
    assert all(p.diameter() <= HALF for p in t_preimage_cover(0, HALF))
    whole = t_preimage_cover(0, 1)
    assert len(whole) == 1 and whole[0].diameter() == 1


@given(st.integers(0, 256), st.integers(0, 256), st.integers(0, 256))
def test_preimage_covers_samples(i, j, k):
    a, b = sorted((Value(i, 256), Value(j, 256)))
    pieces = t_preimage_cover(a, b)
    assert len(pieces) <= 3
    assert all(p.diameter() <= b - a for p in pieces)
    x = a + (b - a) * Value(k, 256)
    for w in expansions(x, 20):
        assert any(p.contains(w) for p in pieces), (a, b, x, w)


def test_mf_examples():
    r = dblexp(HALF)
    v = mf_test(r, 2, N=32)
    assert v.fails and v.witness["tail_min"] == 1
    v = mf_test(r, Value(3, 2), N=32)
    assert v.holds and v.witness["ledger_last"] == Value(3 ** 32, 4 ** 32)
    v = mf_test(geometric(Value(1, 4)), 2, N=32)
    assert v.fails
    # t_n = 2^n / (2n)
    assert v.witness["ledger_head"][:3] == [Value(1), Value(1), Value(4, 3)]


def test_mf_direct_agrees_with_cs1():
    r = dblexp(HALF)
    for p in (Value(3, 2), Value(2), Value(3)):
        assert mf_test(r, p, "direct", N=24).status == mf_test(r, p, N=24).status


def test_mf_rejects_small_base():
    with pytest.raises(ValueError):
        mf_test(harmonic_power(Value(1)), 1)
