"""Finite-depth Hausdorff measure brackets, null tests and dimension estimates."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from .cantor import CantorCube, SymCantor, sym_build
from .gauges import Gauge, gauge_doubling, gauge_order, PREC, APPROX, PRECEQ, power as power_gauge
from .numerics import (
    DEFAULT_CTX, EQUAL, GREATER, LESS, UNKNOWN, IntervalVal, NumCtx, Value, eval_log2,
    hi, is_exact, lo, simplify, value_cmp,
)
from .sequences import CertificateError, Seq, geometric, table
from .verdict import FAILS, HOLDS, Verdict
from . import verdict as _v

NULL, NOT_NULL = HOLDS, FAILS


@dataclass
class MassCertificate:
    """Natural measure mu(I_p) = 2^-|p| tested against phi on a span family."""

    constant: Value
    argmax_run: int
    family: str
    depth: int
    spans_tested: int
    family_restricted: bool = True

    def to_dict(self):
        return _v.to_jsonable({"constant": self.constant, "argmax_run": self.argmax_run,
                               "family": self.family, "depth": self.depth,
                               "spans_tested": self.spans_tested,
                               "family_restricted": self.family_restricted})


@dataclass
class UpperBound:
    value: Value
    level: int
    cover: list
    delta: Value
    recheck: Verdict

    def to_dict(self, max_elements: int = 16):
        return _v.to_jsonable({"value": self.value, "level": self.level, "delta": self.delta,
                               "cover_size": len(self.cover),
                               "cover_head": [list(e) for e in self.cover[:max_elements]],
                               "recheck": self.recheck})


@dataclass
class MeasureBracket:
    lower: Value
    upper: Value
    depth: int
    gauge: Gauge
    methods: dict = field(default_factory=dict)
    by_delta: list = field(default_factory=list)

    def to_dict(self):
        return _v.to_jsonable({"lower": self.lower, "upper": self.upper, "depth": self.depth,
                               "gauge": self.gauge.describe(), "methods": self.methods,
                               "by_delta": self.by_delta})


# ----------------------------------------------------------------------
# null test on cubes
# ----------------------------------------------------------------------

def _sign_of(expr_fn, ctx: NumCtx) -> int | None:
    for _ in range(ctx.max_refine):
        v = expr_fn(ctx)
        c = value_cmp(v, Value(0))
        if c != UNKNOWN:
            return {LESS: -1, EQUAL: 0, GREATER: 1}[c]
        ctx = ctx.finer()
    return None


def _cubes1_symbolic(a: int, r: Seq, phi: Gauge, ctx: NumCtx):
    """(null?, reason) when the growth of a^n phi(r_n) is decided by the forms of r and phi."""
    sig = phi.signature()
    if sig is None:
        return None
    alpha, b, c = sig
    geo = r.geometric_form()
    la = eval_log2(Value(a), ctx)
    if geo is not None:
        _, lam = geo
        s = _sign_of(lambda cx: IntervalVal.of(eval_log2(Value(a), cx))
                     + IntervalVal.of(eval_log2(lam, cx)) * alpha, ctx)
        if s is None:
            return None
        if s < 0:
            return True, "a * lambda^alpha < 1"
        if s > 0:
            return False, "a * lambda^alpha > 1"
        if b.sign() > 0 or c.sign() > 0:
            return True, "a * lambda^alpha = 1 with a decaying logarithmic factor"
        return False, "a * lambda^alpha = 1"
    prof = r.profile()
    if prof is None:
        return None
    kind, d, e = prof
    if kind == "poly":
        return False, "polynomial radii: a^n dominates"
    if alpha.sign() > 0:
        if kind == "dexp" or (kind == "exp" and (d > Value(1) or (d == Value(1) and e.sign() > 0))):
            return True, "radii decay faster than every geometric sequence"
        return None
    if kind == "exp":
        return False, "logarithmic gauge on exponential radii: a^n dominates"
    if kind == "dexp" and b.sign() > 0:
        if d > Value(1) or (d == Value(1) and e.sign() > 0):
            return True, "phi(r_n) decays faster than every geometric sequence"
        s = _sign_of(lambda cx: IntervalVal.of(eval_log2(Value(a), cx)) - b, ctx)
        if s is None:
            return None
        return (s < 0, "compare log2 a with the logarithmic exponent")
    if kind == "dexp":
        return False, "log-log gauge: a^n dominates"
    return None


def cubes1_test(a: int, r: Seq, phi: Gauge, N: int = 64, threshold=None,
                ctx: NumCtx = DEFAULT_CTX) -> Verdict:
    """Null test for the cube of a letters with radii r: holds (null) when
    liminf a^n phi(r_n) = 0; the ledger t_n = a^n phi(r_n) is in the witness."""
    if a < 2:
        raise ValueError("alphabet size must be at least 2")
    ledger = []
    for n in range(1, N + 1):
        t = Value(a) ** n * IntervalVal.of(phi.eval(r.at(n, ctx), ctx))
        ledger.append(simplify(t))
    tail = ledger[N // 2:]
    logs = [lo(t).log2_approx() for t in ledger]
    wit = {"ledger_head": ledger[:8], "ledger_last": ledger[-1],
           "tail_min": min(lo(t) for t in tail), "tail_max": max(hi(t) for t in tail),
           "log2_trend": logs[-1] - logs[len(logs) // 2] if len(logs) > 1 else 0.0}
    sym = _cubes1_symbolic(a, r, phi, ctx)
    if sym is not None:
        wit["reason"] = sym[1]
        return Verdict(NULL if sym[0] else NOT_NULL, "closed form", N, True, wit)
    thr = Value.of(threshold) if threshold is not None else Value(1, 1 << 20)
    if wit["tail_min"] > thr and wit["log2_trend"] >= -1:
        return Verdict(NOT_NULL, "tail ledger bounded away from 0", N, False, wit)
    wit["null_leaning"] = wit["log2_trend"] < 0
    return Verdict(UNKNOWN, "tail ledger", N, False, wit)


# ----------------------------------------------------------------------
# brackets on symmetric Cantor sets
# ----------------------------------------------------------------------

def hmeasure_upper(X: SymCantor, phi: Gauge, delta=None, depth: int | None = None,
                   ctx: NumCtx = DEFAULT_CTX) -> UpperBound:
    """Cheapest cover by an antichain of construction intervals of diameter < delta.

    Every level-k node has diameter r_k, so the antichain recursion
    cost_k = min(phi(r_k), 2 cost_{k+1}) is exact and its minimizer is a full level.
    """
    d = X.depth if depth is None else depth
    if d > X.depth:
        raise ValueError("tree not built to the requested depth")
    delta = X.length(0) if delta is None else Value.of(delta)
    if not X.length(d) < delta:
        raise ValueError("delta must exceed the leaf diameter (insufficient depth)")
    cost = hi(phi.eval(X.length(d), ctx))
    level = d
    for k in range(d - 1, -1, -1):
        doubled = 2 * cost
        if X.length(k) < delta:
            own = hi(phi.eval(X.length(k), ctx))
            if own <= doubled:
                cost, level = own, k
                continue
        cost = doubled
    r = X.length(level)
    cover = [(a, a + r) for a in X.lefts[level]]
    recheck = _recheck_cover(X, cover, phi, cost, delta, ctx)
    return UpperBound(cost, level, cover, delta, recheck)


def _recheck_cover(X: SymCantor, cover, phi: Gauge, claimed: Value, delta: Value, ctx) -> Verdict:
    """Every leaf inside some element, every element finer than delta, cost re-summed."""
    leaves = X.leaves()
    j = 0
    for a, b in leaves:
        while j < len(cover) and cover[j][1] < b:
            j += 1
        if j == len(cover) or not (cover[j][0] <= a and b <= cover[j][1]):
            return Verdict(FAILS, "cover recheck", X.depth, False, {"uncovered_leaf": [a, b]})
    total = Value(0)
    for a, b in cover:
        if not (b - a) < delta:
            return Verdict(FAILS, "cover recheck", X.depth, False, {"coarse_element": [a, b]})
    diam = cover[0][1] - cover[0][0]
    total = hi(phi.eval(diam, ctx)) * len(cover) if all(b - a == diam for a, b in cover) else \
        sum((hi(phi.eval(b - a, ctx)) for a, b in cover), Value(0))
    ok = total <= claimed
    return Verdict(HOLDS if ok else FAILS, "cover recheck", X.depth, False,
                   {"elements": len(cover), "cost": total})


def _integer_coordinates(X: SymCantor):
    fr = [Fraction(v.to_fraction()) for v in X.lefts[X.depth]]
    rd = X.length(X.depth).to_fraction()
    D = lcm(*(f.denominator for f in fr), rd.denominator)
    ints = [f.numerator * (D // f.denominator) for f in fr]
    big = max(ints[-1] + rd.numerator * (D // rd.denominator), 1)
    if big < (1 << 62):
        arr = np.array(ints, dtype=np.int64)
    else:
        arr = np.array(ints, dtype=object)
    return arr, rd.numerator * (D // rd.denominator), D


def hmeasure_lower(X: SymCantor, phi: Gauge, depth: int | None = None,
                   ctx: NumCtx = DEFAULT_CTX) -> tuple[Value, MassCertificate]:
    """Lower bound 1/c with c = max mu(J) / phi(diam J) over hulls J of
    contiguous runs of depth-d leaves (a family-restricted mass distribution bound)."""
    if depth is not None and depth != X.depth:
        X = sym_build(X.ratio, depth, X.base_left, ctx)
    d = X.depth
    lefts, leaf_len, D = _integer_coordinates(X)
    nleaves = len(lefts)
    c = Value(0)
    arg = 1
    seen = {}
    for m in range(1, nleaves + 1):
        span = int((lefts[m - 1:] - lefts[:nleaves - m + 1]).min()) + leaf_len
        diam = Value.of(Fraction(span, D))
        f = seen.get(span)
        if f is None:
            f = lo(phi.eval(diam, ctx))
            seen[span] = f
        ratio = Value(m, 1, -d) / f
        if ratio > c:
            c, arg = ratio, m
    c = c.round_up(ctx.precision_bits)
    lower = (1 / c).round_down(ctx.precision_bits)
    cert = MassCertificate(c, arg, "hulls of contiguous runs of depth-d leaves", d, nleaves)
    return lower, cert


def measure_bracket(X: SymCantor, phi: Gauge, delta=None, ctx: NumCtx = DEFAULT_CTX,
                    all_deltas: bool = False) -> MeasureBracket:
    up = hmeasure_upper(X, phi, delta, ctx=ctx)
    low, cert = hmeasure_lower(X, phi, ctx=ctx)
    by_delta = []
    if all_deltas:
        for k in range(X.depth):
            u = hmeasure_upper(X, phi, X.length(k), ctx=ctx)
            by_delta.append({"delta": X.length(k), "upper": u.value, "level": u.level})
    methods = {"upper": up.to_dict(), "lower": cert.to_dict()}
    return MeasureBracket(low, up.value, X.depth, phi, methods, by_delta)


# ----------------------------------------------------------------------
# dimension
# ----------------------------------------------------------------------

def _closed_form_dimension(a: int, r: Seq, ctx: NumCtx):
    geo = r.geometric_form()
    if geo is None:
        return None
    lam = geo[1]
    num = IntervalVal.of(eval_log2(Value(a), ctx))
    den = -IntervalVal.of(eval_log2(lam, ctx))
    return simplify(num / den)


def hdim_estimate(X, tol=Value(1, 50), depth: int = 14, ctx: NumCtx = DEFAULT_CTX) -> dict:
    """Enclosure [lo, hi] of the Hausdorff dimension by bisection on beta with
    the cube null test (alphabet 2 for symmetric Cantor sets)."""
    tol = Value.of(tol)
    if isinstance(X, SymCantor):
        a, r = 2, X.ratio
    elif isinstance(X, CantorCube):
        if X.alphabet_size is None:
            raise ValueError("dimension needs a finite alphabet")
        a, r = X.alphabet_size, X.radius
    else:
        a, r = X
    lo_b, hi_b = Value(0), Value(1)
    steps = []

    def null_at(beta):
        if beta.is_zero():
            return False
        v = cubes1_test(a, r, power_gauge(beta), depth, ctx=ctx)
        steps.append({"beta": beta, "status": v.status, "symbolic": v.symbolic})
        if v.status == UNKNOWN:
            return v.witness.get("null_leaning", False)
        return v.status == NULL

    while not null_at(hi_b):
        lo_b, hi_b = hi_b, hi_b * 2
        if hi_b > Value(1 << 20):
            raise ArithmeticError("dimension search diverged")
    while hi_b - lo_b > tol:
        mid = (lo_b + hi_b) / 2
        if null_at(mid):
            hi_b = mid
        else:
            lo_b = mid
    out = {"enclosure": [lo_b, hi_b], "tol": tol, "depth": depth, "alphabet": a,
           "radii": r.describe(), "symbolic_steps": all(s["symbolic"] for s in steps),
           "steps": len(steps)}
    cf = _closed_form_dimension(a, r, ctx)
    if cf is not None:
        out["closed_form"] = cf
        out["closed_form_approx"] = round(float(IntervalVal.of(cf).mid()), 12)
        out["closed_form_inside"] = lo_b <= lo(cf) and hi(cf) <= hi_b
    return out


# ----------------------------------------------------------------------
# separating witnesses
# ----------------------------------------------------------------------

def _inverse_table(psi: Gauge, N: int, ctx: NumCtx, mode: str):
    if psi.kind == "power":
        lam = psi.inverse(Value(1, 2), mode, ctx)
        if is_exact(lam):
            return geometric(lo(lam))
    vals = []
    for n in range(0, N + 1):
        u = psi.inverse(Value.pow2(-n), mode, ctx)
        if not is_exact(u):
            raise CertificateError("inverse radii are not exact; refine the gauge first", {"index": n})
        vals.append(lo(u))
    return table(vals[1:], zero=vals[0], label=f"inverse_radii({psi.describe()})")


def separation_witness(kind: str, psi: Gauge, phi: Gauge | None = None, N: int = 12,
                       lower_depth: int = 8, ctx: NumCtx = DEFAULT_CTX) -> dict:
    """versus1_cube: cube with r_n = psi*(2^-n), not psi-null.
    ideals_pair: 𝖢(r) with r_n = psi^-1(2^-n), H^phi-null but with a psi lower bound."""
    if kind == "versus1_cube":
        r = _inverse_table(psi, N, ctx, "generalized")
        cube = CantorCube(2, r)
        cert = cubes1_test(2, r, psi, N, ctx=ctx)
        ledger = [simplify(Value(2) ** n * IntervalVal.of(psi.eval(r.at(n), ctx))) for n in range(1, N + 1)]
        const = ledger[0] if all(x == ledger[0] for x in ledger) else None
        below_one = [n for n, t in enumerate(ledger, 1) if not Value(1) <= lo(t)]
        return {"kind": kind, "set": cube.describe(), "radii": [r.at(n) for n in range(1, min(N, 6) + 1)],
                "ledger": ledger, "ledger_constant": const,
                "not_null": not below_one and cert.status != NULL, "cubes1": cert}
    if kind == "ideals_pair":
        if phi is None:
            raise ValueError("ideals_pair needs phi")
        order = gauge_order(phi, psi, max(64, 4 * N), ctx)
        if order.verdict in (PREC, APPROX, PRECEQ):
            raise CertificateError("premise: phi is dominated by psi (phi ≼ psi)", order.to_dict())
        dbl = gauge_doubling(psi, 2, strict=True, N=max(64, 4 * N), ctx=ctx)
        if not (dbl.holds and psi.continuous and psi.strictly_increasing):
            raise CertificateError("premise: psi must be continuous, increasing and strictly 2-doubling",
                                   dbl.to_dict())
        r = _inverse_table(psi, N, ctx, "strict")
        d = min(N, lower_depth)
        X = sym_build(r, d, ctx=ctx)
        null_ledger = [simplify(Value(2) ** n * IntervalVal.of(phi.eval(r.at(n), ctx))) for n in range(1, N + 1)]
        low, cert = hmeasure_lower(X, psi, ctx=ctx)
        return {"kind": kind, "set": f"symcantor({r.describe()},{d})", "radii": [r.at(n) for n in range(1, min(N, 6) + 1)],
                "phi_null_ledger": null_ledger, "phi_null": cubes1_test(2, r, phi, N, ctx=ctx),
                "psi_lower": low, "psi_certificate": cert, "order": order.to_dict()}
    raise ValueError(f"unknown witness kind {kind!r}")
