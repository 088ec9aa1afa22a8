"""Adversarial compact sets that are finite unions of shift-dominated pieces
but are not dominated themselves, with the nested-interval refutation game.

Index bookkeeping: T_{-1} = {0, 1}, T_i = [2^(i+1), 2^(i+2)); the children of
I_n are the I_k with k in T_n.  Level sets: S_0 = {0, 1} and S_(i+1) is the
union of T_j over j in S_i, so the built levels are [-1], [0, 1], [2..7],
[8..511].  S_3 already has 2^513 - 512 members, so at most four levels are
built.  Endpoints are DyadicSums because s_n = 2^(-4^n) is far below float
range by n = 10.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .covers import FineCover, check_fine, diam
from .numerics import DEFAULT_CTX, DyadicSum, NumCtx, Value, is_exact, lo, to_sum
from .sequences import CertificateError, Seq, compare_terms, growth_condition
from .verdict import FAILS, HOLDS, Verdict

MAX_LEVELS = 4
LEVELS = [[-1], [0, 1], list(range(2, 8)), list(range(8, 512))]


def children(n: int) -> list[int]:
    if n == -1:
        return [0, 1]
    return list(range(2 ** (n + 1), 2 ** (n + 2)))


def f_budget(n: int) -> int:
    """f(n) = 2^(i+1) for n in T_i; 1 on T_{-1} = {0, 1}."""
    if n < 0:
        return 0
    return 1 if n < 2 else 1 << (n.bit_length() - 1)


def _term(s: Seq, n: int):
    x = s.at(n)
    if not is_exact(x) or not lo(x).is_dyadic:
        raise CertificateError("adversarial sets need exact dyadic sequence values", {"index": n})
    return to_sum(lo(x))


@dataclass
class AdversarialSet:
    variant: str
    s: Seq
    depth: int
    nodes: dict = field(default_factory=dict)
    gaps: dict = field(default_factory=dict)
    room: list = field(default_factory=list)
    decomposition: dict = field(default_factory=dict)
    m: int | None = None
    K: int | None = None
    precondition: Verdict | None = None

    @property
    def levels(self) -> list[list[int]]:
        return LEVELS[:self.depth]

    def leaf_indices(self) -> list[int]:
        return self.levels[-1]

    def leaves(self) -> list:
        return [self.nodes[n] for n in self.leaf_indices()]

    def f(self, n: int) -> int:
        return f_budget(n)

    def size(self, n: int):
        return diam(self.nodes[n])

    def checks(self) -> dict:
        room_ok = all(r["holds"] for r in self.room)
        dec = {k: [v.status for v in vs] for k, vs in self.decomposition_verdicts().items()}
        return {"room": room_ok, "room_checked": len(self.room), "decomposition": dec}

    def decomposition_verdicts(self) -> dict:
        out = {}
        for k, covers in self.decomposition.items():
            out[k] = [check_fine(c, self.s, ("add", k)) for c in covers]
        return out

    def to_dict(self, full: bool = False) -> dict:
        from .verdict import to_jsonable
        shown = [n for lvl in self.levels[:-1] for n in lvl]
        leaves = self.leaf_indices()
        if full or len(leaves) <= 8:
            shown += leaves
        else:
            shown += leaves[:2] + leaves[-2:]
        tree = {str(n): {"interval": list(self.nodes[n]), "diam": self.size(n),
                         "gap": self.gaps.get(n)} for n in shown}
        return to_jsonable({
            "variant": self.variant, "seq": self.s.describe(), "depth": self.depth,
            "m": self.m, "K": self.K, "nodes": len(self.nodes), "leaves": len(leaves),
            "tree": tree, "room_checked": len(self.room),
            "room_ok": all(r["holds"] for r in self.room),
            "decomposition": {str(k): [{"members": len(c.elements), "verdict": v.status}
                                       for c, v in zip(self.decomposition[k], vs)]
                              for k, vs in self.decomposition_verdicts().items()},
            "precondition": self.precondition,
        })


def _check_room(n: int, parent_size, kids, sizes: dict, gap) -> dict:
    need = to_sum(0)
    for c in kids:
        need = need + sizes[c]
    need = need + gap.scale(len(kids) - 1)
    ok = parent_size >= need
    return {"node": n, "holds": ok, "diam": parent_size, "needed": need, "children": len(kids)}


def _place(sizes: dict, gaps: dict, depth: int) -> dict:
    nodes = {-1: (to_sum(0), sizes[-1])}
    for lvl in LEVELS[:depth - 1]:
        for n in lvl:
            x = nodes[n][0]
            for c in children(n):
                nodes[c] = (x, x + sizes[c])
                x = x + sizes[c] + gaps[n]
    return nodes


def _snots2_k(s: Seq, m: int, horizon: int = 64, ctx: NumCtx = DEFAULT_CTX) -> tuple[int, int]:
    """(N0, K): s_n > 2^n s_mn for n >= N0 on the horizon, K >= N0 with 2^(n+1) >= m^2 n beyond."""
    last_bad = 0
    for n in range(1, horizon + 1):
        if compare_terms(s, m * n, s, n, Value.pow2(n), 1, ctx) != "less":
            last_bad = n
    n0 = last_bad + 1
    if n0 > horizon // 2:
        raise CertificateError("growth condition s_n > 2^n s_mn fails on the horizon", {"m": m, "last_failure": last_bad})
    K = max(n0, 1)
    while any(2 ** (n + 1) < m * m * n for n in range(K, K + 64)):
        K += 1
    return n0, K


def build_adversarial_set(s: Seq, variant: str = "snots", depth: int = 4, m: int | None = None,
                          K: int | None = None, ctx: NumCtx = DEFAULT_CTX) -> AdversarialSet:
    """snots: diam I_2k = diam I_2k+1 = s_(k+1), sibling gaps s_(f(n)+1).
    snots2: diam I_n = s_n for n >= K, sibling gaps s_(m^2 n) (s_1 at the top two levels)."""
    if not 1 <= depth <= MAX_LEVELS:
        raise ValueError(f"depth must lie in [1, {MAX_LEVELS}]; the next level has 2^513 - 512 intervals")
    built = [n for lvl in LEVELS[:depth] for n in lvl]
    internal = [n for lvl in LEVELS[:depth - 1] for n in lvl]
    if variant == "snots":
        top = max(built) // 2 + 2
        pre = growth_condition(s, "cond_1sn", N=top, ctx=ctx)
        if not pre.holds:
            raise CertificateError("growth condition s_n >= 4^n s_(n+1) fails", pre.witness)
        sizes = {-1: _term(s, 1).scale(3)}
        for n in built[1:]:
            sizes[n] = _term(s, n // 2 + 1)
        gaps = {n: _term(s, 1) if n == -1 else _term(s, f_budget(n) + 1) for n in internal}
    elif variant == "snots2":
        if m is None:
            raise ValueError("snots2 needs m")
        n0, K_min = _snots2_k(s, m, ctx=ctx)
        K = K_min if K is None else K
        if K < K_min:
            raise CertificateError("K is below the threshold required by the growth condition", {"K_min": K_min})
        pre = Verdict(HOLDS, "cond_3sn", 64, False, {"m": m, "n0": n0, "K": K})

        def gap(n):
            return _term(s, 1) if n <= 0 else _term(s, m * m * n)

        memo = {}

        def size(n):
            # required room below K, s_n from K on
            if n >= K:
                return _term(s, n)
            if n not in memo:
                kids = children(n)
                tot = to_sum(0)
                for c in kids:
                    tot = tot + size(c)
                memo[n] = tot + gap(n).scale(len(kids) - 1)
            return memo[n]

        sizes = {n: size(n) for n in built}
        gaps = {n: gap(n) for n in internal}
    else:
        raise ValueError(f"unknown variant {variant!r}")

    room = []
    for n in internal:
        kids = children(n)
        room.append(_check_room(n, sizes[n], kids, sizes, gaps[n]))
    bad = [r for r in room if not r["holds"]]
    if bad:
        raise CertificateError("room inequality fails", bad[0])
    nodes = _place(sizes, gaps, depth)
    X = AdversarialSet(variant, s, depth, nodes, gaps, room, {}, m, K if variant == "snots2" else None, pre)
    X.decomposition = _decomposition(X)
    return X


def _decomposition(X: AdversarialSet) -> dict:
    """Additive-shift covers of the leaf level: k -> list of fine covers jointly covering every leaf."""
    leaves = X.leaf_indices()
    out = {}
    if X.variant == "snots":
        # two interleaved families: I_(2j+i) has diameter s_(j+1) < s_j, placed at index j - k
        j_min = min(leaves) // 2
        for k in range(1, j_min):
            fams = []
            for i in (0, 1):
                fams.append(FineCover({n // 2 - k: X.nodes[n] for n in leaves if n % 2 == i}, X.s, ("add", k)))
            out[k] = fams
    else:
        # one family: I_n has diameter s_n < s_(n-1), placed at index n - k - 1
        if min(leaves) >= (X.K or 0):
            for k in range(1, min(leaves) - 1):
                out[k] = [FineCover({n - k - 1: X.nodes[n] for n in leaves}, X.s, ("add", k))]
    return out


# ----------------------------------------------------------------------
# refutation game
# ----------------------------------------------------------------------

def _disjoint(a, b) -> bool:
    return a[1] < b[0] or b[1] < a[0]


def _points_of(el):
    if not isinstance(el, tuple):
        raise CertificateError("refutation needs interval elements, not bare diameters", {})
    return tuple(to_sum(x) if isinstance(x, DyadicSum) else to_sum(Value.of(x)) for x in el)


def _uncovered_point(leaf, intervals):
    """A point of the closed leaf outside every closed interval, or None."""
    a, b = leaf
    hits = _sort_exact([iv for iv in intervals if not _disjoint(iv, leaf)])
    if a == b:
        return None if hits else a
    reach = None
    for lo_, hi_ in hits:
        start = a if reach is None else reach
        if start < lo_:
            return (start + lo_).half()
        reach = hi_ if reach is None or reach < hi_ else reach
        if reach >= b:
            return None
    start = a if reach is None else reach
    return (start + b).half()


def _sort_exact(items):
    from functools import cmp_to_key
    return sorted(items, key=cmp_to_key(lambda p, q: -1 if p[0] < q[0] else 1 if q[0] < p[0] else 0))


def refute_cover(X: AdversarialSet, candidate, stride: int | None = None, ctx: NumCtx = DEFAULT_CTX) -> dict:
    """Play the nested selection against a fine candidate and return an uncovered point.

    snots: the candidate must be s-fine.  snots2: only the subsequence of
    indices divisible by ``stride`` (> 2 m^2) is used.
    """
    if not isinstance(candidate, FineCover):
        candidate = FineCover(dict(candidate), X.s)
    if X.variant == "snots2":
        stride = stride or 2 * X.m * X.m + 1
        if stride <= 2 * X.m * X.m:
            raise ValueError("snots2 refutation needs stride > 2 m^2")
    else:
        stride = 1
    fine = check_fine(candidate, X.s, ctx=ctx)
    if not fine.holds:
        raise CertificateError("candidate is not s-fine", fine.witness)
    sub = {n // stride: _points_of(el) for n, el in candidate.elements.items() if n % stride == 0}
    everything = [_points_of(el) for el in candidate.elements.values()]
    levels = X.levels
    trace = []
    backtracks = [0]

    def avoid(node_iv, upto):
        return all(_disjoint(node_iv, sub[l]) for l in sub if l <= upto)

    def descend(j, level):
        if level == len(levels) - 1:
            cand = list(sub.values()) if stride > 1 else everything
            pt = _uncovered_point(X.nodes[j], cand)
            return None if pt is None else (j, pt)
        upto = 2 ** (j + 1) if j >= 0 else 1
        kids = children(j)
        near = {l: iv for l, iv in sub.items() if l <= upto and not _disjoint(iv, X.nodes[j])}
        for c in kids:
            if all(_disjoint(X.nodes[c], iv) for iv in near.values()):
                trace.append({"level": level + 1, "node": c, "avoids_up_to": upto})
                got = descend(c, level + 1)
                if got is not None:
                    return got
                trace.pop()
                backtracks[0] += 1
        return None

    got = descend(-1, 0)
    if got is None:
        raise CertificateError("selection strategy stuck", {"trace": trace})
    leaf, point = got
    a, b = X.nodes[leaf]
    in_leaf = a <= point and point <= b
    checked = list(sub.values()) if stride > 1 else everything
    uncovered = all(point < iv[0] or iv[1] < point for iv in checked)
    return {"point": point, "leaf": leaf, "trace": trace, "backtracks": backtracks[0],
            "stride": stride, "verified": in_leaf and uncovered, "in_leaf": in_leaf,
            "uncovered": uncovered, "elements_checked": len(checked)}


def random_fine_candidate(X: AdversarialSet, rng: random.Random, slots: int | None = None,
                          stride: int = 1) -> FineCover:
    """Randomized greedy s-fine cover aimed at the leaves.

    Slot n gets width s_n (1 - 2^-8) and is anchored at an uncovered leaf:
    usually the leftmost one, sometimes a random one, left- or right-aligned.
    """
    leaves = X.leaves()
    covered = [False] * len(leaves)
    slots = slots or len(leaves) + 8
    elements = {}
    for n in range(1, slots + 1):
        if stride > 1 and n % stride:
            continue
        sn = _term(X.s, n)
        w = sn - sn.scale(Value.pow2(-8))
        open_ = [i for i, c in enumerate(covered) if not c]
        if not open_:
            open_ = list(range(len(leaves)))
        i = open_[0] if rng.random() < 0.7 else rng.choice(open_)
        a, b = leaves[i]
        # the leaves inside an element form a run through the anchor
        if rng.random() < 0.5:
            el, step = (a, a + w), 1
        else:
            el, step = (b - w, b), -1
        elements[n] = el
        q = i
        while 0 <= q < len(leaves) and el[0] <= leaves[q][0] and leaves[q][1] <= el[1]:
            covered[q] = True
            q += step
    return FineCover(elements, X.s)


def refute_many(X: AdversarialSet, count: int = 200, seed: int = 0, stride: int | None = None) -> dict:
    rng = random.Random(seed)
    refuted, failures, leaves_hit = 0, [], set()
    st = stride or (2 * X.m * X.m + 1 if X.variant == "snots2" else 1)
    for t in range(count):
        cand = random_fine_candidate(X, rng, stride=st)
        try:
            res = refute_cover(X, cand, st)
        except CertificateError as e:
            failures.append({"trial": t, "error": str(e)})
            continue
        if res["verified"]:
            refuted += 1
            leaves_hit.add(res["leaf"])
        else:
            failures.append({"trial": t, "error": "returned point not verified"})
    status = HOLDS if refuted == count else FAILS
    return {"trials": count, "refuted": refuted, "failures": failures, "seed": seed,
            "distinct_leaves": len(leaves_hit),
            "verdict": Verdict(status, "randomized refutation", count, False, {})}


__all__ = ["AdversarialSet", "build_adversarial_set", "refute_cover", "random_fine_candidate",
           "refute_many", "children", "f_budget", "LEVELS"]
