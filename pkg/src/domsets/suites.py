"""Seeded random instance generators shared by the self-test and the test suite."""

from __future__ import annotations

import random

from .covers import check_fine
from .domination import assignment_oracle, dominate_decide
from .numerics import Value, lo
from .sequences import CertificateError, Seq, geometric, interleave_covers, table

GRID = 64


def random_leaves(rng: random.Random, max_leaves: int = 8) -> list:
    """Disjoint closed intervals (some degenerate) with endpoints on a 1/GRID grid."""
    n = rng.randint(1, max_leaves)
    cuts = sorted(rng.sample(range(GRID + 1), 2 * n))
    leaves = []
    for a, b in zip(cuts[::2], cuts[1::2]):
        if rng.random() < 0.15:
            b = a
        leaves.append((Value(a, GRID), Value(b, GRID)))
    return leaves


def random_slots(rng: random.Random, max_slots: int = 6) -> list:
    k = rng.randint(1, max_slots)
    vals = sorted(rng.sample(range(1, GRID + 1), k), reverse=True)
    return [Value(v, GRID) for v in vals]


def decide_vs_oracle(rng: random.Random) -> dict:
    """One random instance: exact decision against the assignment oracle."""
    leaves = random_leaves(rng)
    bounds = random_slots(rng)
    s = table(bounds)
    d = dominate_decide(leaves, s)
    oracle = assignment_oracle(leaves, bounds)
    replay = None
    if d.cover is not None:
        replay = check_fine(d.cover, s).holds and all(
            any(e[0] <= a and b <= e[1] for e in d.cover.elements.values()) for a, b in leaves)
    return {"leaves": leaves, "bounds": bounds, "decision": d.verdict.status, "oracle": oracle,
            "agree": (d.verdict.status == "holds") == oracle and d.verdict.status != "unknown",
            "replay": replay}


def random_families(rng: random.Random, s: Seq, families: int = 5, members: int = 4) -> dict:
    """k -> {i: interval} with each family fine for the 2^(k+2)-fold shift of s."""
    out = {}
    for k in range(families):
        fam = {}
        for i in rng.sample(range(1, 3 * members + 1), rng.randint(1, members)):
            bound = lo(s.at(2 ** (k + 2) * i))
            d = bound * Value(rng.randint(0, 255), 256)
            a = Value(rng.randint(0, GRID), GRID)
            fam[i] = (a, a + d)
        out[k] = fam
    return out


def interleave_trial(rng: random.Random, s: Seq | None = None) -> dict:
    """Merged cover re-check, then one diameter pushed to or past its merged-index bound
    (which also breaks the tighter family bound)."""
    s = s or geometric(Value(1, 2))
    fams = random_families(rng, s)
    res = interleave_covers(fams, s)
    clean = check_fine(res.cover, s).holds
    k = rng.choice(sorted(fams))
    i = rng.choice(sorted(fams[k]))
    bound = lo(s.at(partition_index(k, i)))
    a = fams[k][i][0]
    fams[k][i] = (a, a + bound * Value(256 + rng.randint(0, 255), 256))
    try:
        interleave_covers(fams, s)
        caught = False
    except CertificateError:
        caught = True
    # the merged cover must also reject it on its own
    merged = {partition_index(kk, ii): el for kk, fam in fams.items() for ii, el in fam.items()}
    caught_merged = not check_fine(merged, s).holds
    return {"clean": clean and res.verdict.holds, "caught": caught and caught_merged, "mutated": [k, i]}


def partition_index(k: int, i: int) -> int:
    return (2 * i + 1) << k


__all__ = ["random_leaves", "random_slots", "decide_vs_oracle", "random_families", "interleave_trial"]
