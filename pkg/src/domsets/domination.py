"""Finite-depth domination decisions, inclusion criteria and witness extractions.

A set is approximated by the union of its depth-d leaves.  Any s-fine cover
of finitely many intervals on a line can be traded for one whose elements are
hulls of contiguous leaf runs, so the exact decision only searches run
partitions: a partition into runs is feasible iff, with slots sorted by size,
the i-th largest run span is below the i-th largest slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

from .covers import NO_SHIFT, FineCover, check_fine, diam, shifted_index, strictly_below
from .gauges import Gauge, asymp_check, gauge_from_seq, gpow
from .numerics import (DEFAULT_CTX, EQUAL, GREATER, LESS, UNKNOWN, DyadicSum, IntervalVal, NumCtx, Value,
                       floor_num, hi, is_exact, lo, simplify, to_sum, value_cmp)
from .sequences import (CertificateError, Ledger, Seq, SeqFamily, compose_seq, interleave_covers,
                        lp_corridor_classify, lp_test, partition_encode, table)
from .verdict import FAILS, HOLDS, Verdict

MAX_SLOTS = 4096


# ----------------------------------------------------------------------
# leaves and slots
# ----------------------------------------------------------------------

def set_leaves(X) -> list:
    """Sorted leaf intervals of a built set (SymCantor, AdversarialSet or a list of pairs)."""
    if hasattr(X, "leaves"):
        leaves = list(X.leaves())
    else:
        leaves = [(a if isinstance(a, DyadicSum) else Value.of(a),
                   b if isinstance(b, DyadicSum) else Value.of(b)) for a, b in X]
    leaves.sort(key=cmp_to_key(_cmp_leaf))
    return leaves


def _cmp_leaf(x, y) -> int:
    a, b = x[0], y[0]
    return -1 if a < b else 1 if b < a else 0


class _Span:
    """Exact comparisons of spans against sequence terms, cached per pair."""

    def __init__(self, leaves, s: Seq, shift, ctx: NumCtx):
        self.leaves = leaves
        self.s, self.shift, self.ctx = s, shift, ctx
        self.cache = {}

    def span(self, i: int, j: int):
        return diam((self.leaves[i][0], self.leaves[j][1]))

    def below(self, i: int, j: int, n: int) -> str:
        key = (i, j, n)
        if key not in self.cache:
            self.cache[key] = strictly_below(self.span(i, j), self.s, shifted_index(n, self.shift), self.ctx)
        return self.cache[key]


def slot_horizon(leaves, s: Seq, shift=NO_SHIFT, ctx: NumCtx = DEFAULT_CTX,
                 guard: int = MAX_SLOTS) -> list[int]:
    """Slot indices that can hold at least one leaf, capped at the leaf count."""
    if not leaves:
        return []
    shortest = min((diam(leaf) for leaf in leaves), key=lambda d: d if isinstance(d, Value) else d.to_value())
    cap = len(leaves)
    if cap > guard:
        raise CertificateError("slot horizon exceeds the overflow guard", {"leaves": cap, "guard": guard})
    slots = []
    for n in range(1, cap + 1):
        try:
            c = strictly_below(shortest, s, shifted_index(n, shift), ctx)
        except IndexError:
            break  # finite table: no further slots
        if c == LESS:
            slots.append(n)
        elif c == UNKNOWN:
            raise CertificateError("cannot order a leaf length against a slot", {"slot": n})
    return slots


@dataclass
class Decision:
    verdict: Verdict
    cover: FineCover | None = None
    slots: list = field(default_factory=list)
    leaves: int = 0

    def to_dict(self):
        from .verdict import to_jsonable
        d = {"verdict": self.verdict.to_dict(), "slots": self.slots, "leaves": self.leaves}
        if self.cover is not None:
            d["cover"] = self.cover.to_dict()
        return to_jsonable(d)


def _slot_class(sp: _Span, i: int, j: int, slots: list[int]) -> int:
    """Number of slots (largest first) strictly above the span of leaves i..j."""
    lo_c, hi_c = 0, len(slots)
    # slots are decreasing, so the admissible ones form a prefix
    while lo_c < hi_c:
        mid = (lo_c + hi_c + 1) // 2
        c = sp.below(i, j, slots[mid - 1])
        if c == LESS:
            lo_c = mid
        elif c == UNKNOWN:
            raise CertificateError("undecided span comparison", {"run": [i, j], "slot": slots[mid - 1]})
        else:
            hi_c = mid - 1
    return lo_c


def _hall_ok(counts: tuple) -> bool:
    total = 0
    for c, k in enumerate(counts, 1):
        total += k
        if total > c:
            return False
    return True


def _assign(runs, slots):
    """Runs (i, j, class) -> {slot index: (i, j)}; smallest class gets the largest slot."""
    out = {}
    for pos, (i, j, _) in enumerate(sorted(runs, key=lambda r: r[2])):
        out[slots[pos]] = (i, j)
    return out


def _slots_decreasing(s: Seq, slots: list[int], shift, ctx) -> bool:
    from .sequences import compare_terms
    for a, b in zip(slots, slots[1:]):
        if compare_terms(s, shifted_index(b, shift), s, shifted_index(a, shift), ctx=ctx) != LESS:
            return False
    return True


def dominate_decide(X, s: Seq, shift=NO_SHIFT, mode: str = "exact", ctx: NumCtx = DEFAULT_CTX,
                    budget: int = 200_000, guard: int = MAX_SLOTS) -> Decision:
    """Can the depth-d leaf union be covered by (E_n) with diam E_n < s_n (after the shift)?

    exact: complete search over contiguous run partitions (holds/fails, or
    unknown when the node budget runs out).  greedy: each slot in turn takes
    the longest run it can from the leftmost uncovered leaf; a holds answer is
    sound, a stuck greedy pass only yields unknown.
    """
    shift = shift or NO_SHIFT
    leaves = set_leaves(X)
    m = len(leaves)
    if m == 0:
        return Decision(Verdict(HOLDS, "empty set", 0, True, {}), FineCover({}, s, shift), [], 0)
    slots = slot_horizon(leaves, s, shift, ctx, guard)
    if not _slots_decreasing(s, slots, shift, ctx):
        raise CertificateError("slot values must be strictly decreasing", {"slots": slots})
    sp = _Span(leaves, s, shift, ctx)
    S = len(slots)
    base = {"slots": len(slots), "leaves": m, "approximation": "depth-d leaf union"}

    if mode == "greedy":
        runs, i = {}, 0
        for n in slots:
            if i >= m:
                break
            if sp.below(i, i, n) != LESS:
                return Decision(Verdict(UNKNOWN, "greedy", m, False, {**base, "stuck_at_leaf": i, "slot": n}),
                                None, slots, m)
            j = i
            while j + 1 < m and sp.below(i, j + 1, n) == LESS:
                j += 1
            runs[n] = (i, j)
            i = j + 1
        if i < m:
            return Decision(Verdict(UNKNOWN, "greedy", m, False, {**base, "uncovered_from": i}), None, slots, m)
        return _finish(runs, leaves, s, shift, ctx, slots, "greedy", base)

    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")

    memo = set()
    nodes = [0]
    deepest = [0]
    classes = {}

    def cls(i, j):
        if (i, j) not in classes:
            classes[(i, j)] = _slot_class(sp, i, j, slots)
        return classes[(i, j)]

    def search(i, counts, runs):
        if i == m:
            return runs
        key = (i, counts)
        if key in memo:
            return None
        nodes[0] += 1
        if nodes[0] > budget:
            raise _Budget()
        deepest[0] = max(deepest[0], i)
        if len(runs) >= S:
            memo.add(key)
            return None
        # longest admissible run first: fewer runs leave more slots
        options = []
        for j in range(i, m):
            c = cls(i, j)
            if c == 0:
                break
            options.append((j, c))
        for j, c in reversed(options):
            nc = list(counts)
            nc[c - 1] += 1
            nc = tuple(nc)
            if not _hall_ok(nc):
                continue
            got = search(j + 1, nc, runs + [(i, j, c)])
            if got is not None:
                return got
        memo.add(key)
        return None

    try:
        found = search(0, (0,) * S, [])
    except _Budget:
        return Decision(Verdict(UNKNOWN, "exact run search", m, False,
                                {**base, "budget": budget, "deepest_leaf": deepest[0]}), None, slots, m)
    if found is None:
        refusal = {**base, "states_exhausted": len(memo), "deepest_leaf": deepest[0],
                   "frontier": sorted([i, list(c)] for i, c in memo if i == deepest[0])[:8]}
        if S == 0 or cls(0, 0) == 0:
            refusal["reason"] = "a leaf is not shorter than any slot"
        return Decision(Verdict(FAILS, "exact run search", m, False, refusal), None, slots, m)
    return _finish(_assign(found, slots), leaves, s, shift, ctx, slots, "exact run search", base)


class _Budget(Exception):
    pass


def _finish(runs: dict, leaves, s, shift, ctx, slots, method, base) -> Decision:
    elements = {n: (leaves[i][0], leaves[j][1]) for n, (i, j) in runs.items()}
    cover = FineCover(elements, s, shift)
    chk = check_fine(cover, s, shift, ctx)
    if not chk.holds:
        raise CertificateError("constructed cover failed its re-check", chk.witness)
    wit = {**base, "runs": {n: [i, j] for n, (i, j) in sorted(runs.items())}, "recheck": chk.status}
    return Decision(Verdict(HOLDS, method, len(leaves), False, wit), cover, slots, len(leaves))


def assignment_oracle(leaves, bounds: list) -> bool:
    """Brute force over all maps leaf -> slot: each slot's hull must stay below its bound.

    Independent of the run normal form; meant for tiny instances in tests.
    """
    leaves = [(Value.of(a), Value.of(b)) for a, b in leaves]
    bounds = [Value.of(b) for b in bounds]
    hulls = [None] * len(bounds)

    def go(i):
        if i == len(leaves):
            return True
        a, b = leaves[i]
        for k, bound in enumerate(bounds):
            old = hulls[k]
            new = (a, b) if old is None else (min(old[0], a), max(old[1], b))
            if new[1] - new[0] < bound:
                hulls[k] = new
                if go(i + 1):
                    return True
                hulls[k] = old
        return False

    return go(0)


def dominate_family(X, F: SeqFamily, mode: str = "exact", ctx: NumCtx = DEFAULT_CTX,
                    budget: int = 200_000) -> dict:
    """dominate_decide for every listed member; holds iff all members hold."""
    if F.K < 1:
        raise ValueError("K must be at least 1")
    rows, weakest = [], None
    for member in F.members():
        d = dominate_decide(X, member, NO_SHIFT, mode, ctx, budget)
        if d.verdict.status == UNKNOWN and mode == "exact":
            g = dominate_decide(X, member, NO_SHIFT, "greedy", ctx)
            if g.verdict.holds:
                d = g
        used = max(d.cover.elements) if d.cover and d.cover.elements else 0
        row = {"seq": member.describe(), "status": d.verdict.status, "method": d.verdict.method,
               "slots": len(d.slots), "largest_slot_used": used, "witness": d.verdict.witness}
        rows.append(row)
        spare = len(d.slots) - used
        if d.verdict.status != HOLDS:
            spare = -1
        if weakest is None or spare < weakest[0]:
            weakest = (spare, row["seq"])
    statuses = {r["status"] for r in rows}
    status = HOLDS if statuses == {HOLDS} else FAILS if FAILS in statuses else UNKNOWN
    return {"status": status, "members": rows, "weakest": weakest[1] if weakest else None,
            "family": F.kind, "K": F.K, "approximation": "depth-d leaf union"}


# ----------------------------------------------------------------------
# inclusion criteria
# ----------------------------------------------------------------------

def versus1_criterion(phi: Gauge, s: Seq, N: int = 128, witness_N: int = 12,
                      ctx: NumCtx = DEFAULT_CTX) -> Verdict:
    """phi∘s summable iff every set dominated by the closure of s is H^phi-null."""
    from .measure import separation_witness
    v = lp_test(compose_seq(phi, s), 1, N, ctx=ctx)
    wit = dict(v.witness)
    wit["inclusion"] = ("sets dominated by the multiplicative closure of s are H^phi-null"
                        if v.holds else "inclusion into the H^phi-null sets fails" if v.fails
                        else "undecided")
    if v.fails:
        try:
            wit["separation"] = separation_witness("versus1_cube", phi, N=witness_N, ctx=ctx)
        except CertificateError as e:
            wit["separation_error"] = str(e)
    return Verdict(v.status, f"versus1 via {v.method}", v.depth, v.symbolic, wit)


# ----------------------------------------------------------------------
# witness extraction: summable ledgers to a single sequence
# ----------------------------------------------------------------------

@dataclass
class WitnessFamily:
    """One family of sets E_n (n >= 1) given by diameters.

    Finite families list their diameters; infinite ones give callables plus
    an exact value for the total of phi over the slacks.
    """

    diams: list | None = None
    diam_fn: object = None
    slack_fn: object = None
    slack_total: Value | None = None

    def diam(self, n: int):
        if self.diams is not None:
            return self.diams[n - 1] if n <= len(self.diams) else None
        return Value.of(self.diam_fn(n))


def _phi(phi: Gauge, x, ctx):
    return phi.eval(x, ctx) if x.sign() > 0 else Value(0)


def _slacks(fam: WitnessFamily, phi: Gauge, budget_total: Value, upto: int, ctx: NumCtx):
    """Strictly decreasing slacks delta_n > diam E_n for n <= upto, with sum phi(delta) < budget_total.

    Returns (deltas, order) where order[n-1] is the original index placed at n.
    """
    if fam.slack_fn is not None:
        deltas = [Value.of(fam.slack_fn(n)) for n in range(1, upto + 1)]
        return deltas, list(range(1, upto + 1))
    ds = [Value.of(d) for d in fam.diams]
    led = Ledger()
    for d in ds:
        led.add(_phi(phi, d, ctx))
    spare = budget_total - hi(led.value())
    if spare.sign() <= 0:
        raise CertificateError("family ledger is not below its budget", {"ledger": led.value(), "budget": budget_total})
    # largest diameters first so the rearranged slacks can decrease strictly
    order = sorted(range(1, len(ds) + 1), key=lambda i: ds[i - 1], reverse=True)
    deltas = []
    for pos, i in enumerate(order, 1):
        d = ds[i - 1]
        target = _phi(phi, d, ctx) + spare * Value.pow2(-(pos + 1))
        u = lo(phi.inverse(lo(target), "strict", ctx))
        x = (d + u) / 2 if u > d else None
        if x is None:
            raise CertificateError("slack inverse too coarse to separate from the diameter", {"index": i})
        if deltas and not x < deltas[-1]:
            x = (d + deltas[-1]) / 2
        deltas.append(x)
    # empty members beyond the family: keep shrinking inside the spare budget
    for pos in range(len(ds) + 1, upto + 1):
        prev = _phi(phi, deltas[-1], ctx) if deltas else spare
        t = min(lo(prev) / 2, spare * Value.pow2(-(pos + 1)))
        deltas.append(lo(phi.inverse(t, "strict", ctx)))
        order.append(None)
    return deltas[:upto], order[:upto]


def versus4_extract(families: dict, phi: Gauge, K: int | None = None, N: int = 256, tail=None,
                    check_k: int = 4, check_n: int = 64, ctx: NumCtx = DEFAULT_CTX) -> dict:
    """Build one sequence s with each family k fine for the k-fold multiplicative shift of s.

    families: k -> WitnessFamily with phi-ledger below 2^-k.  The k <= K
    terms of r_n are summed exactly; ``tail(n)`` may supply the exact value of
    the remaining terms, otherwise r_n is truncated (the certificates below
    only concern families k <= K).
    """
    if not (phi.continuous and phi.strictly_increasing):
        raise CertificateError("versus4 needs a continuous strictly increasing gauge", {"gauge": phi.describe()})
    K = K or max(families)
    slacks, orders, ledgers = {}, {}, {}
    for k in range(1, K + 1):
        fam = families[k]
        budget = Value.pow2(-k)
        if fam.diams is not None:
            led = Ledger()
            for d in fam.diams:
                led.add(_phi(phi, Value.of(d), ctx))
            if not hi(led.value()) < budget:
                raise CertificateError("ledger violation", {"family": k, "ledger": led.value()})
        upto = -(-N // k)
        deltas, order = _slacks(fam, phi, budget, upto, ctx)
        for n in range(1, upto + 1):
            src = order[n - 1]
            d = fam.diam(src) if src is not None else None
            if d is not None and not Value.of(d) < deltas[n - 1]:
                raise CertificateError("slack not above the diameter", {"family": k, "index": n})
            if n > 1 and not deltas[n - 1] < deltas[n - 2]:
                raise CertificateError("slacks not strictly decreasing", {"family": k, "index": n})
        if fam.slack_total is not None:
            total = Value.of(fam.slack_total)
            exact_total = True
        else:
            led = Ledger()
            for x in deltas:
                led.add(_phi(phi, x, ctx))
            total, exact_total = hi(led.value()), False
        if not total < budget:
            raise CertificateError("slack ledger violation", {"family": k, "total": total})
        slacks[k], orders[k] = deltas, order
        ledgers[k] = {"slack_total": total, "closed_form": exact_total}

    r_vals = []
    for n in range(1, N + 1):
        acc = Ledger()
        for k in range(1, K + 1):
            acc.add(_phi(phi, slacks[k][-(-n // k) - 1], ctx))
        if tail is not None:
            acc.add(Value.of(tail(n)))
        r_vals.append(simplify(acc.value()))
    s_vals = []
    for r in r_vals:
        u = phi.inverse(lo(r), "strict", ctx)
        s_vals.append(lo(u))
    for n in range(1, N):
        if not s_vals[n] < s_vals[n - 1]:
            raise CertificateError("extracted sequence not strictly decreasing", {"index": n + 1})
    zero = s_vals[0] * 2
    s = table(s_vals, zero=zero, label=f"versus4({phi.describe()})")

    fubini = Ledger()
    for x in s_vals:
        fubini.add(_phi(phi, x, ctx))
    bound_K = sum((Value(k) * Value.pow2(-k) for k in range(1, K + 1)), Value(0))
    tail_K = Value(K + 2) * Value.pow2(-K)
    fine = []
    for k in range(1, min(check_k, K) + 1):
        fam = families[k]
        elems = {}
        for n in range(1, min(check_n, N // k) + 1):
            src = orders[k][n - 1]
            d = fam.diam(src) if src is not None else None
            if d is not None:
                elems[n] = Value.of(d)
        fine.append({"k": k, "indices": len(elems),
                     "verdict": check_fine(FineCover(elems, s, ("mult", k)), s, ("mult", k), ctx).status})
    ok = all(f["verdict"] == HOLDS for f in fine) and hi(fubini.value()) <= bound_K + tail_K
    return {"seq": s, "r": r_vals[:8], "s": s_vals[:8], "N": N, "K": K,
            "fubini_ledger": fubini.value(), "fubini_bound": Value(2), "fubini_bound_K": bound_K + tail_K,
            "family_ledgers": ledgers, "fineness": fine, "strictly_decreasing": True,
            "verdict": Verdict(HOLDS if ok else FAILS, "versus4 extraction", N, False, {})}


def versus4_example(K: int = 8, N: int = 256, ctx: NumCtx = DEFAULT_CTX) -> dict:
    """E = {0}, phi = identity, E^k_n = [0, 2^-(n+k+2)], slacks 2^-(n+k+1)."""
    from .gauges import power
    fams = {k: WitnessFamily(diam_fn=lambda n, k=k: Value.pow2(-(n + k + 2)),
                             slack_fn=lambda n, k=k: Value.pow2(-(n + k + 1)),
                             slack_total=Value.pow2(-(k + 1)))
            for k in range(1, K + 1)}

    def tail(n):
        # sum over k > K of 2^-(ceil(n/k)+k+1); for k >= n the ceiling is 1
        acc = Value(0)
        for k in range(K + 1, n):
            acc = acc + Value.pow2(-(-(-n // k) + k + 1))
        return acc + Value.pow2(-(max(n, K + 1) + 1))

    return versus4_extract(fams, power(1), K, N, tail, ctx=ctx)


# ----------------------------------------------------------------------
# witness extraction: ledgers to summable index sets
# ----------------------------------------------------------------------

@dataclass
class SummableIdealCover:
    cover: FineCover
    ledger: Value
    eps: Value

    @property
    def index_set(self) -> list[int]:
        return sorted(self.cover.elements)

    def check(self) -> bool:
        return self.ledger < self.eps and _reciprocal_sum(self.index_set) == self.ledger

    def to_dict(self):
        from .verdict import to_jsonable
        return to_jsonable({"indices": self.index_set, "ledger": self.ledger, "eps": self.eps,
                            "cover": self.cover.to_dict()})


def _reciprocal_sum(indices) -> Value:
    return Value.of(sum((Fraction(1, j) for j in indices), Fraction(0)))


def _normalized(phi: Gauge, s: Seq, N: int, ctx: NumCtx):
    """(gauge with phi(s_n) = 1/n for n <= N, band note)."""
    if all(phi.eval(s.at(n), ctx) == Value(1, n) for n in range(1, N + 1) if is_exact(phi.eval(s.at(n), ctx))) \
            and all(is_exact(phi.eval(s.at(n), ctx)) for n in range(1, N + 1)):
        return phi, {"normalized": True}
    a, b, v = asymp_check(phi, s, max(N, 256), ctx)
    return gauge_from_seq(s, N), {"normalized": False, "band": [a, b], "band_verdict": v.status,
                                  "original": phi.describe()}


def domhaus_cover(phi: Gauge, s: Seq, diams: list, k: int = 1, eps=1, slacks: list | None = None,
                  slack_tail=None, ctx: NumCtx = DEFAULT_CTX) -> dict:
    """Reindex a cover D_n with small phi-ledger into a summable index set.

    gamma_n = floor(1 / (2 k phi(delta_n))) + n, E_{gamma_n} = D_n.
    ``slack_tail`` bounds sum_{n > len(diams)} phi(delta_n) when slacks are given.
    """
    eps = Value.of(eps)
    M = len(diams)
    diams = [Value.of(d) for d in diams]
    psi, norm = _normalized(phi, s, min(M, 64), ctx)
    half_budget = eps / (2 * k)
    led = Ledger()
    for d in diams:
        led.add(_phi(psi, d, ctx))
    if not hi(led.value()) < half_budget:
        raise CertificateError("ledger violation", {"ledger": led.value(), "budget": half_budget})
    if slacks is None:
        fam = WitnessFamily(diams=diams)
        deltas, order = _slacks(fam, psi, half_budget, M, ctx)
        diams = [diams[i - 1] for i in order]
        slack_note = "derived"
    else:
        deltas = [Value.of(x) for x in slacks]
        slack_note = "given"
    phid = [psi.eval(x, ctx) for x in deltas]
    gammas = []
    for n, t in enumerate(phid, 1):
        g = floor_num(1 / (2 * k * IntervalVal.of(t)) if not is_exact(t) else 1 / (2 * k * lo(t)))
        if g is None:
            raise CertificateError("gamma_n undecided at this precision", {"index": n})
        gammas.append(g + n)
    increasing = all(a < b for a, b in zip(gammas, gammas[1:]))
    if not increasing:
        raise CertificateError("gamma is not strictly increasing", {"gamma": gammas})

    ledger = _reciprocal_sum(gammas)
    termwise = all(Value(1, g) <= 2 * k * lo(t) for g, t in zip(gammas, phid))
    pd = Ledger()
    for t in phid:
        pd.add(t)
    slack_total = hi(pd.value()) + (Value.of(slack_tail) if slack_tail is not None else Value(0))
    premise_total = slack_total < half_budget if (slack_tail is not None or slacks is None) else None
    pointwise_bad = [n for n, t in enumerate(phid, 1) if not hi(t) < Value(1, 2 * k * n)]
    claim_a = ledger < eps and termwise

    cover = FineCover({g: d for g, d in zip(gammas, diams)}, s, ("mult", k))
    fine_phi = all(hi(psi.eval(d, ctx)) < Value(1, k * g) for g, d in zip(gammas, diams) if d.sign() > 0)
    fine = check_fine(cover, s, ("mult", k), ctx)
    ok = claim_a and fine.holds and fine_phi
    return {"gamma": gammas, "ideal_cover": SummableIdealCover(cover, ledger, eps),
            "ledger": ledger, "eps": eps, "claim_a": claim_a, "termwise_bound": termwise,
            "slack_sum_bound": slack_total, "slack_premise": premise_total,
            "pointwise_premise_failures": pointwise_bad, "slacks": slack_note,
            "fine_phi": fine_phi, "fine": fine, "normalization": norm,
            "verdict": Verdict(HOLDS if ok else FAILS, "domhaus reindexing", M, False, {})}


def domhaus_example(variant: str = "paper", M: int = 24, ctx: NumCtx = DEFAULT_CTX) -> dict:
    """phi = reciprocal log on the binary geometric sequence, D_n of diameter delta_n / 2.

    paper: phi(delta_n) = 1/n^2, eps = 4.  scaled: phi(delta_n) = 1/(4n^2), eps = 1.
    The tail bound is the telescoping sum_{n > M} 1/(n(n-1)) = 1/M.
    """
    from .gauges import reclog
    from .sequences import geometric
    c = 1 if variant == "paper" else 4
    eps = Value(4) if variant == "paper" else Value(1)
    slacks = [Value.pow2(-c * n * n) for n in range(1, M + 1)]
    diams = [x / 2 for x in slacks]
    return domhaus_cover(reclog(), geometric(Value(1, 2)), diams, 1, eps, slacks,
                         slack_tail=Value(1, c * M), ctx=ctx)


# ----------------------------------------------------------------------
# combining per-level covers
# ----------------------------------------------------------------------

def hdom_combine(per_k: dict, s: Seq, ctx: NumCtx = DEFAULT_CTX) -> dict:
    """per_k: k -> {i: element}, family k fine for the 2^(k+2)-fold shift with sum 1/i < 1."""
    ledgers = {}
    for k, fam in per_k.items():
        L = _reciprocal_sum(fam)
        if not L < Value(1):
            raise CertificateError("level ledger must be below 1", {"level": k, "ledger": L})
        ledgers[k] = L
    try:
        res = interleave_covers(per_k, s, ctx=ctx)
    except CertificateError as e:
        raise CertificateError("fineness premise fails", e.witness) from None
    weighted = sum((Value.pow2(-k) * L for k, L in ledgers.items()), Value(0))
    actual = _reciprocal_sum(res.cover.elements)
    return {"cover": SummableIdealCover(res.cover, actual, Value(2)),
            "index_map": {n: list(v) for n, v in sorted(res.index_map.items())},
            "level_ledgers": ledgers, "weighted_ledger": weighted, "ledger": actual,
            "ledger_le_weighted": actual <= weighted, "fine": res.verdict,
            "verdict": Verdict(HOLDS if res.verdict.holds and weighted < Value(2) else FAILS,
                               "partition reindexing", len(res.cover.elements), False, {})}


# ----------------------------------------------------------------------
# sandwich
# ----------------------------------------------------------------------

def sandwich_report(s: Seq, N: int = 128, alphas=(Value(3, 2), Value(2), Value(3)),
                    ctx: NumCtx = DEFAULT_CTX) -> dict:
    """Null ideal of phi <= sets dominated by the closure of s <= null ideals of phi^alpha, alpha > 1."""
    phi = gauge_from_seq(s, 64)
    rows = []
    for a in [Value(1)] + [Value.of(x) for x in alphas]:
        g = phi if a == Value(1) else gpow(a, phi)
        v = versus1_criterion(g, s, N, ctx=ctx)
        rows.append({"alpha": a, "status": v.status, "method": v.method,
                     "expected": FAILS if a == Value(1) else HOLDS})
    prof = s.profile()
    if prof is None:
        corridor = {"alpha": None, "note": "no decay profile"}
    elif prof[0] == "poly":
        corridor = lp_corridor_classify(s, 1 / prof[1])
    else:
        corridor = lp_corridor_classify(s, Value(0))
    consistent = all(r["status"] == r["expected"] for r in rows)
    return {"seq": s.describe(), "gauge": phi.describe(), "rows": rows, "corridor": corridor,
            "consistent": consistent}


__all__ = ["FineCover", "check_fine", "Decision", "dominate_decide", "dominate_family", "assignment_oracle",
           "slot_horizon", "set_leaves", "versus1_criterion", "WitnessFamily", "versus4_extract",
           "versus4_example", "SummableIdealCover", "domhaus_cover", "domhaus_example", "hdom_combine",
           "sandwich_report", "partition_encode"]
