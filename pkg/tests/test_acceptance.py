"""Acceptance criteria, one test each.

Every test records a ``criterion N: PASS|FAIL`` line; the lines are printed in
the terminal summary (see conftest.py) and when this file is run directly.
"""

import json
import math
import os
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import pytest

from domsets import cli
from domsets.adversary import build_adversarial_set, refute_many
from domsets.cantor import mf_test, sym_build
from domsets.covers import check_fine
from domsets.domination import domhaus_example, dominate_family, versus1_criterion, versus4_example
from domsets.gauges import (asymp_check, doubling11_regularize, gauge_doubling, gauge_order, gscale, power,
                            reclog, tau, two_gauges)
from domsets.measure import hdim_estimate, hmeasure_lower, hmeasure_upper, separation_witness
from domsets.numerics import IntervalVal, Value, hi, lo
from domsets.sequences import (ash_transform, closure, dblexp, geometric, growth_condition, harmonic_power,
                               mshift, pow2exp, scale, table)
from domsets.specs import parse_seq
from domsets.suites import decide_vs_oracle, interleave_trial

ROOT = Path(__file__).resolve().parents[1]
RESULTS: list[str] = []


@contextmanager
def criterion(n: int, title: str):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        RESULTS.append(f"criterion {n:2d}: FAIL  {title}")
        raise
    RESULTS.append(f"criterion {n:2d}: PASS  {title} ({time.perf_counter() - t0:.1f}s)")


HALF = Value(1, 2)
G = geometric(HALF)


def test_c01_cantor_measure_closed_form():
    with criterion(1, "H^(1/2) of C(1/4) is 1"):
        t0 = time.perf_counter()
        X = sym_build(geometric(Value(1, 4)), 12)
        phi = power(HALF)
        for d in range(1, 13):
            assert hmeasure_upper(X, phi, depth=d).value == Value(1)
        low, cert = hmeasure_lower(X, phi)
        assert low >= Value(1, 4)
        assert time.perf_counter() - t0 < 10


@pytest.mark.parametrize("ratio,expected", [
    (Value(1, 4), 0.5),
    (Value(1, 3), math.log(2) / math.log(3)),
    (Value(1, 2), 1.0),
])
def test_c02_dimension_enclosures(ratio, expected):
    with criterion(2, f"dimension of C({ratio}) encloses {expected:.4f}"):
        t0 = time.perf_counter()
        rep = hdim_estimate(sym_build(geometric(ratio), 14), Value(1, 50), depth=14)
        a, b = rep["enclosure"]
        assert b - a <= Value(1, 50)
        assert float(a) <= expected <= float(b)
        assert rep["closed_form_inside"]
        assert time.perf_counter() - t0 < 30


def test_c03_asymp_exact():
    with criterion(3, "reclog vs geom(1/2): a = b = 1"):
        a, b, v = asymp_check(reclog(), G, N=10_000)
        assert a == Value(1) and b == Value(1)
        assert v.holds


def test_c04_versus1():
    with criterion(4, "versus1 criterion rows and cube witness"):
        for beta in (Value(1, 10), HALF, Value(1), Value(2)):
            assert versus1_criterion(power(beta), G).holds
        v = versus1_criterion(reclog(), G, N=128)
        assert v.fails
        ledger = dict((n, x) for n, x in v.witness["ledger"])
        # harmonic partial sums: H_128 > 5 while H_64 < 5
        oracle = sum(Fraction(1, n) for n in range(1, 129))
        assert lo(ledger[128]) == Value.of(oracle) and oracle > 5
        w = separation_witness("versus1_cube", reclog())
        assert w["radii"][:4] == [Value(1, 4), Value(1, 16), Value(1, 256), Value(1, 65536)]
        assert all(w["radii"][n - 1] == Value.pow2(-(2 ** n)) for n in range(1, len(w["radii"]) + 1))
        assert w["ledger_constant"] == Value(1)


def test_c05_interleave_mechanism():
    with criterion(5, "1000 interleave instances, every mutation caught"):
        rng = random.Random(5)
        for _ in range(1000):
            t = interleave_trial(rng)
            assert t["clean"], t
            assert t["caught"], t


def _rand_ratio(rng):
    q = rng.randint(3, 64)
    return Value(rng.randint(1, q - 1), q)


def _ash_input(rng):
    if rng.random() < 0.5:
        return geometric(_rand_ratio(rng))
    # explicit head with a declared geometric tail
    vals, v = [], Value(1, 2)
    for _ in range(rng.randint(5, 40)):
        vals.append(v)
        v = v * Value(rng.randint(1, 7), 8)
    return table(vals, tail_ratio=Value(rng.randint(1, 7), 8))


def _doubling_input(rng):
    """(gauge, L) with the gauge L-doubling for small r."""
    a = Value(rng.randint(1, 8), 8)
    kind = rng.choice(["pow", "reclog", "tau", "scale"])
    if kind == "pow":
        return power(a), 2
    if kind == "reclog":
        return reclog(), 2
    if kind == "tau":
        # r / log^b(1/r) has doubling ratio 2n/(n-1) > 2: it needs L = 4
        return tau(Value(rng.randint(1, 4), 2), power(a)), 2 if a < 1 else 4
    return gscale(Value(rng.randint(1, 9), rng.randint(1, 9)), power(a)), 2


def test_c06_appendix_property_suites():
    with criterion(6, "ash / doubling11 / two_gauges suites, 100 inputs each"):
        rng = random.Random(6)
        for _ in range(100):
            c = _ash_input(rng)
            N = rng.choice([1000, 1200])
            out, v = ash_transform(c, "summable", N)
            assert v.holds, (c, v)
            terms = [out.at(n) for n in range(1, N + 1)]
            assert all(x > y for x, y in zip(terms, terms[1:]))
            assert v.witness["partial_sum"] <= v.witness["bound"]
            assert v.witness["ratio_at_N"] < v.witness["ratio_at_N_over_10"]
        for _ in range(100):
            phi, L = _doubling_input(rng)
            psi, v = doubling11_regularize(phi, L, 1000)
            assert v.holds, (phi.describe(), v)
            w = v.witness
            assert w["strictly_increasing"] and w["grid_strict_doubling"] and w["band_ok"]
            assert gauge_doubling(psi, L, strict=True, N=200).holds
        done = 0
        while done < 100:
            phi = power(Value(rng.randint(1, 8), 4))
            if rng.random() < 0.5:
                s = geometric(_rand_ratio(rng))
            else:
                s = harmonic_power(Value(rng.randint(2, 12), 4))
                if not phi.params[0] * s.params[0] > 1:
                    continue  # phi∘s must be summable
            zeta, xi, v = two_gauges(phi, s, 1000)
            assert v.witness["termwise_zeta_le_phi"], (phi.describe(), s.describe())
            assert v.witness["chain_xi_zeta_phi_alpha"]
            assert v.holds
            done += 1


def test_c07_adversarial_set():
    with criterion(7, "adversarial set for 2^-4^n at depth 4, 200 refutations"):
        t0 = time.perf_counter()
        s = mshift(dblexp(HALF), 2)
        file_seq = parse_seq("table:demos/snots_s.txt", ROOT)
        assert all(file_seq.at(n) == s.at(n) == Value.pow2(-(4 ** n)) for n in range(1, 8))
        X = build_adversarial_set(s, "snots", 4)
        chk = X.checks()
        assert chk["room"] and chk["room_checked"] > 0
        for k, statuses in chk["decomposition"].items():
            assert statuses == ["holds", "holds"], k
        for k, covers in X.decomposition.items():
            for cover in covers:
                assert check_fine(cover, s, ("add", k)).holds
        rep = refute_many(X, 200, seed=7)
        assert rep["refuted"] == 200 and not rep["failures"]
        assert time.perf_counter() - t0 < 60


def test_c08_decision_vs_oracle():
    with criterion(8, "exact decision agrees with the oracle on 500 instances"):
        rng = random.Random(8)
        for _ in range(500):
            r = decide_vs_oracle(rng)
            assert len(r["leaves"]) <= 8 and len(r["bounds"]) <= 6
            assert r["agree"], r
            assert r["replay"] in (None, True)


def test_c09_witness_extraction():
    with criterion(9, "versus4 worked example and domhaus indices (1,4,7,12,...)"):
        rep = versus4_example()
        assert rep["r"][0] == Value(1, 4) and rep["s"][0] == Value(1, 4)
        assert rep["fubini_bound"] == 2
        assert [f["k"] for f in rep["fineness"]] == [1, 2, 3, 4]
        assert all(f["verdict"] == "holds" and f["indices"] == 64 for f in rep["fineness"])
        dh = domhaus_example("paper")
        # independent integer evaluation of floor(n^2 / 2) + n
        assert dh["gamma"][:6] == [n * n // 2 + n for n in range(1, 7)] == [1, 4, 7, 12, 17, 24]
        assert dh["claim_a"] and dh["fine"].holds
        total = sum(Fraction(1, g) for g in dh["gamma"])
        assert Value.of(total) == dh["ledger"] < dh["eps"]


def test_c10_growth_conditions():
    with criterion(10, "growth conditions on n <= 1000"):
        v = growth_condition(G, "cond_3sn", 1000)
        assert v.holds and v.witness["m"] == 3
        assert growth_condition(pow2exp(Value(2)), "cond_1sn", 1000).holds
        v = growth_condition(harmonic_power(Value(2)), "cond_simple3", 1000)
        assert v.holds and v.witness["j"] == 4


def test_c11_mf_and_microscopic_evidence():
    with criterion(11, "mf ledgers for 2^-2^n and microscopic evidence at depth 4"):
        r = dblexp(HALF)
        v2 = mf_test(r, Value(2), N=64)
        assert v2.fails and v2.witness["tail_min"] == Value(1)
        assert all(x == Value(1) for x in v2.witness["ledger_head"])
        v32 = mf_test(r, Value(3, 2), N=64)
        assert v32.holds
        assert v32.witness["ledger_head"] == [Value(3 ** n, 4 ** n) for n in range(1, 9)]
        assert v32.witness["ledger_last"] == Value(3 ** 64, 4 ** 64)
        X = sym_build(r, 4)
        for eps in (HALF, Value(1, 4)):
            rep = dominate_family(X, closure(scale(G, eps), 1))
            assert rep["status"] == "holds", rep


def test_c12_selftest_determinism(tmp_path):
    with criterion(12, "selftest is byte-identical across runs"):
        outs = []
        for i in range(2):
            p = tmp_path / f"run{i}.json"
            env = {**os.environ, "PYTHONPATH": str(ROOT / "src")}
            proc = subprocess.run([sys.executable, "-m", "domsets", "selftest", "--seed", "3", "--out", str(p)],
                                  cwd=tmp_path, capture_output=True, env=env)
            assert proc.returncode == 0, proc.stderr
            outs.append(p.read_bytes())
        assert outs[0] == outs[1]
        assert json.loads(outs[0])["status"] == "holds"
        # and in-process, against the subprocess bytes
        assert cli.dumps(cli.run(cli.build_parser().parse_args(["selftest", "--seed", "3", "--out", "x"]))[0]) \
            .encode() == outs[0]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
