import random

import pytest
from hypothesis import given, settings, strategies as st

from domsets.adversary import (LEVELS, build_adversarial_set, children, f_budget, random_fine_candidate,
                               refute_cover, refute_many)
from domsets.covers import FineCover, check_fine
from domsets.numerics import Value, to_sum
from domsets.sequences import CertificateError, dblexp, geometric, growth_condition, mshift

HALF = Value(1, 2)
S = mshift(dblexp(HALF), 2)  # 2^-4^n


@pytest.fixture(scope="module")
def X3():
    return build_adversarial_set(S, "snots", 3)


@pytest.fixture(scope="module")
def X4():
    return build_adversarial_set(S, "snots", 4)


def test_index_bookkeeping():
    assert children(-1) == [0, 1]
    assert children(0) == [2, 3] and children(1) == [4, 5, 6, 7]
    assert children(3) == list(range(16, 32))
    assert [f_budget(n) for n in (0, 1, 2, 3, 4, 7, 8)] == [1, 1, 2, 2, 4, 4, 8]
    assert LEVELS[3] == list(range(8, 512))
    # every child set T_j over a level is exactly the next level
    for a, b in zip(LEVELS[1:], LEVELS[2:]):
        assert sorted(c for j in a for c in children(j)) == b


def test_growth_premise():
    assert growth_condition(S, "cond_1sn", 300).holds
    with pytest.raises(CertificateError):
        build_adversarial_set(geometric(HALF), "snots", 3)


def test_construction_invariants(X4):
    assert X4.checks()["room"]
    for n in range(2, 512):
        assert X4.size(n) == to_sum(S.at(n // 2 + 1))
    assert X4.size(2) == X4.size(3) == to_sum(S.at(2))
    # children of a node are placed left to right with gaps s_(f(n)+1)
    for lvl in LEVELS[1:3]:
        for n in lvl:
            kids = children(n)
            parent = X4.nodes[n]
            assert parent[0] <= X4.nodes[kids[0]][0] and X4.nodes[kids[-1]][1] <= parent[1]
            for a, b in zip(kids, kids[1:]):
                assert X4.nodes[b][0] - X4.nodes[a][1] == to_sum(S.at(f_budget(n) + 1))


def test_decomposition(X4):
    dec = X4.checks()["decomposition"]
    assert sorted(dec) == [1, 2, 3]
    assert all(v == ["holds", "holds"] for v in dec.values())
    leaves = {tuple(iv) for iv in X4.leaves()}
    for k, covers in X4.decomposition.items():
        got = {tuple(el) for c in covers for el in c.elements.values()}
        assert got == leaves
        for c in covers:
            assert check_fine(c, S, ("add", k)).holds


def test_depth_guard():
    with pytest.raises(ValueError):
        build_adversarial_set(S, "snots", 5)


def test_empty_candidate_is_refuted(X3):
    r = refute_cover(X3, {})
    assert r["verified"] and r["leaf"] in LEVELS[2]


def test_strategy_avoids_first_slot(X3):
    # slot 1 swallows every leaf below I_0; the strategy must pick I_1
    J1 = (X3.nodes[2][0], X3.nodes[3][1])
    r = refute_cover(X3, {1: J1})
    assert r["trace"][0]["node"] == 1 and r["verified"]


def test_non_fine_candidate_rejected(X3):
    with pytest.raises(CertificateError):
        refute_cover(X3, {1: X3.nodes[-1]})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_refutation_soundness(X3, seed):
    cand = random_fine_candidate(X3, random.Random(seed))
    assert check_fine(cand, S).holds
    r = refute_cover(X3, cand)
    assert r["verified"]
    a, b = X3.nodes[r["leaf"]]
    assert a <= r["point"] <= b
    assert all(r["point"] < lo or hi < r["point"] for lo, hi in cand.elements.values())


def test_refute_many_depth4(X4):
    rep = refute_many(X4, 10, seed=11)
    assert rep["refuted"] == 10 and not rep["failures"]


def test_snots2():
    Y = build_adversarial_set(geometric(HALF), "snots2", 4, m=3)
    assert Y.checks()["room"] and Y.K == 5
    for n in range(Y.K, 512):
        assert Y.size(n) == to_sum(geometric(HALF).at(n))
    assert all(v == ["holds"] for v in Y.checks()["decomposition"].values())
    rep = refute_many(Y, 10, seed=2)
    assert rep["refuted"] == 10
    with pytest.raises(ValueError):
        refute_cover(Y, FineCover({}, Y.s), stride=18)
    with pytest.raises(CertificateError):
        build_adversarial_set(geometric(HALF), "snots2", 3, m=3, K=2)
