"""The nested-interval game against a compact set built for s_n = 2^-4^n.

The set is a union of two pieces, each dominated by every additive shift of s,
yet no s-fine cover reaches all of it.  We build four levels, re-check the
room inequalities and both decomposition covers, then let randomized greedy
covers try their luck.
"""

import random

from domsets.adversary import build_adversarial_set, random_fine_candidate, refute_cover, refute_many
from domsets.numerics import Value
from domsets.sequences import dblexp, mshift

s = mshift(dblexp(Value(1, 2)), 2)
print("s_1..s_3 =", [str(s.at(n)) for n in (1, 2, 3)])

X = build_adversarial_set(s, "snots", 4)
chk = X.checks()
print(f"leaves: {len(X.leaf_indices())}, room inequalities checked: {chk['room_checked']}, all hold: {chk['room']}")
for k, statuses in chk["decomposition"].items():
    print(f"  shift +{k}: the two pieces are fine -> {statuses}")

# One game, narrated
cand = random_fine_candidate(X, random.Random(1))
print(f"\na candidate cover with {len(cand.elements)} elements, slot 1 at {cand.elements[1]}")
res = refute_cover(X, cand)
for step in res["trace"]:
    print(f"  level {step['level']}: pick I_{step['node']}, clear of elements 1..{step['avoids_up_to']}")
print("  uncovered point found in leaf", res["leaf"], "verified:", res["verified"])

# Many games
rep = refute_many(X, 50, seed=3)
print(f"\n{rep['refuted']}/{rep['trials']} candidates refuted, {rep['distinct_leaves']} distinct leaves hit")
