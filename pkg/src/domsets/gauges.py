"""Gauges, their order, doubling, and the constructive gauge transforms.

Analytic gauges are evaluated from ``L = log2(1/r)``, so radii such as
``2^-(2^100)`` are no problem.  Piecewise gauges store exact breakpoints and
evaluate by exact interpolation.  Piecewise gauges are right-continuous and
may jump upward at a breakpoint.

The order follows the usual convention: ``phi ≼ psi`` when ``psi/phi`` stays
bounded as ``r -> 0``, and ``phi ≺ psi`` when ``psi/phi -> 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .numerics import (
    DEFAULT_CTX, EQUAL, GREATER, LESS, UNKNOWN, IntervalVal, NumCtx, Value,
    eval_log2, exp2, hi, is_exact, lo, pow_rational, simplify, value_cmp,
)
from .sequences import (
    CertificateError, Ledger, Seq, ash_transform, compose_seq, lp_test, table,
)
from .verdict import FAILS, HOLDS, Verdict

PREC, SUCC, APPROX, PRECEQ, SUCCEQ = "≺", "≻", "≈", "≼", "≽"
INCOMPARABLE = "incomparable-at-depth"

HALF = Value(1, 2)


def _pos(x) -> bool:
    return lo(x).sign() > 0


class GaugeDomainError(ValueError):
    pass


class Gauge:
    """Nondecreasing right-continuous gauge.

    ``valid_below`` is the threshold below which every "for small r" claim
    about this gauge is made; the evaluation domain is separate and may be
    wider (see :meth:`in_domain`).
    """

    def __init__(self, kind: str, params: tuple = (), *, base: "Gauge | None" = None,
                 pieces: tuple = (), below=None, continuous: bool = True,
                 strictly_increasing: bool = True, valid_below=HALF, label: str | None = None,
                 source: Seq | None = None):
        self.kind = kind
        self.params = params
        self.base = base
        self.pieces = pieces
        self.below = below
        self.continuous = continuous
        self.strictly_increasing = strictly_increasing
        self.valid_below = Value.of(valid_below)
        self.label = label
        self.source = source

    def _key(self):
        return (self.kind, self.params, self.base._key() if self.base else None,
                len(self.pieces), self.label)

    def __eq__(self, other):
        return isinstance(other, Gauge) and self._key() == other._key() and self.pieces == other.pieces

    def __hash__(self):
        return hash(self._key())

    def describe(self) -> str:
        if self.label:
            return self.label
        k, p = self.kind, self.params
        if k == "power":
            return f"pow({p[0]})"
        if k == "reclog":
            return "reclog()"
        if k == "recloglog":
            return "recloglog()"
        if k == "tau":
            return f"tau({p[0]},{self.base.describe()})"
        if k == "scale":
            return f"scale({p[0]},{self.base.describe()})"
        if k == "gpow":
            return f"gpow({p[0]},{self.base.describe()})"
        return f"{k}[{len(self.pieces)} pieces]"

    def __repr__(self):
        return f"Gauge({self.describe()})"

    def to_dict(self):
        d = {"gauge": self.describe(), "continuous": self.continuous,
             "strictly_increasing": self.strictly_increasing, "valid_below": str(self.valid_below)}
        if self.pieces:
            d["breakpoints"] = [[str(a), str(b), kind, [str(x) for x in data]]
                                for a, b, kind, data in self.pieces]
        return d

    # -- evaluation ---------------------------------------------------
    def in_domain(self, r) -> bool:
        if not _pos(r):
            return False
        k = self.kind
        if k == "reclog":
            return hi(r) < Value(1)
        if k == "recloglog":
            return hi(r) < HALF
        if k in ("tau", "scale", "gpow"):
            return self.base.in_domain(r)
        return True

    def eval(self, r, ctx: NumCtx = DEFAULT_CTX):
        if isinstance(r, IntervalVal) and not r.is_exact():
            if not self.in_domain(r):
                raise GaugeDomainError(f"{self.describe()} undefined at {r}")
            a, b = self._eval(r.lo, ctx), self._eval(r.hi, ctx)
            return simplify(IntervalVal(lo(a), hi(b)))
        r = lo(r)
        if not self.in_domain(r):
            raise GaugeDomainError(f"{self.describe()} undefined at {r}")
        return self._eval(r, ctx)

    __call__ = eval

    def _eval(self, r: Value, ctx: NumCtx):
        k, p = self.kind, self.params
        if k == "power":
            return pow_rational(r, p[0], ctx)
        if k == "reclog":
            return _recip(-eval_log2(r, ctx))
        if k == "recloglog":
            return _recip(eval_log2(-eval_log2(r, ctx), ctx))
        if k == "tau":
            t = self.base.eval(r, ctx)
            if not hi(t) < Value(1):
                raise GaugeDomainError(f"tau needs base values below 1, got {t} at {r}")
            if self.base.kind == "power" and r.is_pow2() and not is_exact(t):
                # log2(1/r^a) = -a log2 r exactly; skips logs of enclosures
                L = -self.base.params[0] * r.exp
                return simplify(IntervalVal.of(t) / IntervalVal.of(pow_rational(L, p[0], ctx)))
            return _tau(t, p[0], ctx)
        if k == "scale":
            return p[0] * self.base.eval(r, ctx)
        if k == "gpow":
            return pow_rational(self.base.eval(r, ctx), p[0], ctx)
        return self._eval_pieces(r, ctx)

    def _eval_pieces(self, r: Value, ctx: NumCtx):
        pcs = self.pieces
        a0 = pcs[0][0]
        if r < a0:
            kind, data = self.below
            if kind == "seq":
                return _seq_interp(data[0], r, data[1], ctx)
            if kind == "lin0":
                return data[0] * r / a0
            return pow_rational(r, data[0], ctx)
        # binary search for the piece with a <= r < b
        lo_i, hi_i = 0, len(pcs) - 1
        if r >= pcs[-1][1]:
            return _piece_value(pcs[-1], pcs[-1][1], ctx, limit=True)
        while lo_i < hi_i:
            mid = (lo_i + hi_i + 1) // 2
            if pcs[mid][0] <= r:
                lo_i = mid
            else:
                hi_i = mid - 1
        return _piece_value(pcs[lo_i], r, ctx)

    # -- inverse ------------------------------------------------------
    def inverse(self, t, mode: str = "generalized", ctx: NumCtx = DEFAULT_CTX):
        """generalized: inf{u : phi(u) >= t}; strict: the u with phi(u) = t."""
        t = Value.of(t)
        if mode == "strict" and not (self.strictly_increasing and self.continuous):
            raise CertificateError("strict inverse needs a continuous strictly increasing gauge",
                                   {"gauge": self.describe()})
        if t.sign() <= 0:
            raise GaugeDomainError("inverse needs t > 0")
        k, p = self.kind, self.params
        if k == "power":
            return pow_rational(t, 1 / p[0], ctx)
        if k == "reclog":
            return exp2(-(1 / t), ctx)
        if k == "recloglog":
            e = exp2(1 / t, ctx)
            return simplify(IntervalVal(lo(exp2(-hi(e), ctx)), hi(exp2(-lo(e), ctx))))
        if k == "scale":
            return self.base.inverse(t / p[0], mode, ctx)
        if k == "gpow":
            u = pow_rational(t, 1 / p[0], ctx)
            if is_exact(u):
                return self.base.inverse(lo(u), mode, ctx)
            return _bisect_inverse(self, t, ctx)
        if k == "tau":
            return _bisect_inverse(self, t, ctx)
        return self._inverse_pieces(t, ctx)

    def _inverse_pieces(self, t: Value, ctx: NumCtx):
        pcs = self.pieces
        a0 = pcs[0][0]
        kind, data = self.below
        v0 = lo(_piece_value(pcs[0], a0, ctx))
        if kind == "seq" and t <= v0:
            return _seq_interp_inverse(data[0], t)
        if t <= v0 if kind == "lin0" else False:
            return t * a0 / data[0]
        if kind == "pow":
            u = pow_rational(t, 1 / data[0], ctx)
            if hi(u) < a0:
                return u
        for piece in pcs:
            a, b, pk, pd = piece
            va = _piece_value(piece, a, ctx)
            if hi(va) >= t and lo(va) >= t:
                return a
            vb = _piece_value(piece, b, ctx, limit=True)
            if pk == "lin" and pd[0] < t < pd[1]:
                return a + (t - pd[0]) * (b - a) / (pd[1] - pd[0])
            if pk == "pow" and lo(vb) > t:
                u = pow_rational(t, 1 / pd[0], ctx)
                return simplify(IntervalVal(max(a, lo(u)), max(a, hi(u))))
        last = pcs[-1]
        if lo(_piece_value(last, last[1], ctx, limit=True)) >= t:
            return last[1]
        raise GaugeDomainError(f"{t} is above the range of {self.describe()}")

    # -- asymptotic bookkeeping --------------------------------------
    def signature(self):
        """(alpha, b, c) with phi(r) ≍ r^alpha L^-b (log2 L)^-c, L = log2(1/r); None if unknown."""
        k, p = self.kind, self.params
        z = Value(0)
        if k == "power":
            return (p[0], z, z)
        if k == "reclog":
            return (z, Value(1), z)
        if k == "recloglog":
            return (z, z, Value(1))
        if k == "scale":
            return self.base.signature()
        if k == "gpow":
            s = self.base.signature()
            return None if s is None else tuple(p[0] * x for x in s)
        if k == "tau":
            s = self.base.signature()
            if s is None:
                return None
            a, b, c = s
            if a.sign() > 0:
                return (a, b + p[0], c)
            if b.sign() > 0:
                return (a, b, c + p[0])
            return None
        return None

    def compose_profile(self, s: Seq):
        """Decay profile of n -> phi(s_n) (see :meth:`Seq.profile`)."""
        k, p = self.kind, self.params
        if k == "from_seq":
            return ("poly", Value(1), Value(0)) if self.source == s else None
        if k in ("scale", "gpow", "tau"):
            return self._outer_profile(self.base.compose_profile(s))
        return self._apply_profile(s.profile())

    def _apply_profile(self, prof):
        if prof is None:
            return None
        k, p = self.kind, self.params
        kind, q, b = prof
        z, one = Value(0), Value(1)
        if k == "power":
            return ("poly", q * p[0], b * p[0]) if kind == "poly" else prof
        if k == "reclog":
            if kind == "poly":
                return ("poly", z, one) if q.sign() > 0 else None
            return ("poly", q, b) if kind == "exp" else ("exp", q, b)
        if k == "recloglog":
            if kind == "exp":
                return ("poly", z, one)
            if kind == "dexp":
                return ("poly", q, b)
            return ("poly", z, z)
        if k in ("scale", "gpow", "tau"):
            return self._outer_profile(self.base._apply_profile(prof))
        return None

    def _outer_profile(self, inner):
        k, p = self.kind, self.params
        if inner is None or k == "scale":
            return inner
        if k == "gpow":
            return ("poly", inner[1] * p[0], inner[2] * p[0]) if inner[0] == "poly" else inner
        if inner[0] == "poly":
            return ("poly", inner[1], inner[2] + p[0]) if inner[1].sign() > 0 else None
        return inner

    def compose_geometric(self, coef: Value, ratio: Value):
        """Geometric form of phi(coef * ratio^n), when it is again geometric and exact."""
        if self.kind == "power":
            a, b = pow_rational(coef, self.params[0]), pow_rational(ratio, self.params[0])
            if is_exact(a) and is_exact(b):
                return lo(a), lo(b)
        if self.kind == "scale":
            g = self.base.compose_geometric(coef, ratio)
            return None if g is None else (self.params[0] * g[0], g[1])
        return None


def _recip(x):
    if isinstance(x, IntervalVal) and not x.is_exact():
        return IntervalVal(1 / x.hi, 1 / x.lo)
    return 1 / lo(x)


def _tau(t, beta: Value, ctx: NumCtx):
    """t / (log2(1/t))^beta for 0 < t < 1 (increasing in t)."""
    if isinstance(t, IntervalVal) and not t.is_exact():
        return simplify(IntervalVal(lo(_tau(t.lo, beta, ctx)), hi(_tau(t.hi, beta, ctx))))
    t = lo(t)
    L = -eval_log2(t, ctx)
    return simplify(t / IntervalVal.of(pow_rational(L, beta, ctx))) if not (is_exact(L) and is_exact(
        pow_rational(L, beta, ctx))) else t / lo(pow_rational(L, beta, ctx))


def _piece_value(piece, r: Value, ctx: NumCtx, limit: bool = False):
    a, b, kind, data = piece
    if kind == "lin":
        va, vb = data
        if r == a:
            return va
        if r == b:
            return vb
        return va + (vb - va) * (r - a) / (b - a)
    if kind == "const":
        return data[0]
    if kind == "pow":
        return pow_rational(r, data[0], ctx)
    raise ValueError(f"unknown piece kind {kind}")


def _exact_term(s: Seq, n: int) -> Value:
    x = s.at(n)
    if not is_exact(x):
        raise CertificateError("sequence gauge needs exact sequence values", {"index": n})
    return lo(x)


def _seq_interp(s: Seq, r: Value, start: int, ctx: NumCtx):
    """Value at r < s_start of the gauge linear between (s_{n+1}, 1/(n+1)) and (s_n, 1/n)."""
    lo_n, hi_n = start, 2 * start
    while _exact_term(s, hi_n) > r:
        lo_n, hi_n = hi_n, 2 * hi_n
    # s_lo > r >= s_hi
    while hi_n - lo_n > 1:
        mid = (lo_n + hi_n) // 2
        if _exact_term(s, mid) > r:
            lo_n = mid
        else:
            hi_n = mid
    n = lo_n
    a, b = _exact_term(s, n + 1), _exact_term(s, n)
    va, vb = Value(1, n + 1), Value(1, n)
    if r == a:
        return va
    return va + (vb - va) * (r - a) / (b - a)


def _seq_interp_inverse(s: Seq, t: Value):
    n = (1 / t).floor()
    if t == Value(1, n):
        return _exact_term(s, n)
    a, b = _exact_term(s, n + 1), _exact_term(s, n)
    va, vb = Value(1, n + 1), Value(1, n)
    return a + (t - va) * (b - a) / (vb - va)


def _bisect_inverse(g: Gauge, t: Value, ctx: NumCtx):
    """Enclosure of inf{u : g(u) >= t} by bisection on u = 2^-x."""
    x_lo, x_hi = Value(0), Value(1)
    # find x_hi with g(2^-x_hi) < t
    while True:
        u = exp2(-x_hi, ctx)
        if g.in_domain(u) and hi(g.eval(u, ctx)) < t:
            break
        x_hi = x_hi * 2
        if x_hi > Value(1 << 40):
            raise GaugeDomainError("inverse search did not terminate")
    while True:
        u = exp2(-x_lo, ctx)
        if g.in_domain(u) and lo(g.eval(u, ctx)) >= t:
            break
        x_lo = x_lo + 1 if x_lo.sign() <= 0 else x_lo / 2
        if x_lo < Value.pow2(-60):
            raise GaugeDomainError(f"{t} is above the range of {g.describe()}")
        if x_lo >= x_hi:
            x_lo = x_hi / 2
    for _ in range(ctx.precision_bits):
        mid = (x_lo + x_hi) / 2
        v = g.eval(exp2(-mid, ctx), ctx)
        if lo(v) >= t:
            x_lo = mid
        elif hi(v) < t:
            x_hi = mid
        else:
            break
    return IntervalVal(lo(exp2(-x_hi, ctx)), hi(exp2(-x_lo, ctx)))


# ----------------------------------------------------------------------
# constructors
# ----------------------------------------------------------------------

def power(alpha) -> Gauge:
    a = Value.of(alpha)
    if a.sign() <= 0:
        raise ValueError("power gauge needs alpha > 0")
    return Gauge("power", (a,))


def reclog() -> Gauge:
    """r -> -1/log2 r."""
    return Gauge("reclog")


def recloglog() -> Gauge:
    """r -> 1/log2 log2 (1/r)."""
    return Gauge("recloglog", valid_below=Value(1, 4))


def tau(beta, base: Gauge) -> Gauge:
    """t / (log2 1/t)^beta applied after ``base``."""
    b = Value.of(beta)
    if b.sign() <= 0:
        raise ValueError("tau needs beta > 0")
    return Gauge("tau", (b,), base=base, continuous=base.continuous,
                 strictly_increasing=base.strictly_increasing, valid_below=base.valid_below)


def gscale(c, base: Gauge) -> Gauge:
    c = Value.of(c)
    if c.sign() <= 0:
        raise ValueError("scale factor must be positive")
    return Gauge("scale", (c,), base=base, continuous=base.continuous,
                 strictly_increasing=base.strictly_increasing, valid_below=base.valid_below)


def gpow(q, base: Gauge) -> Gauge:
    q = Value.of(q)
    if q.sign() <= 0:
        raise ValueError("outer power must be positive")
    return Gauge("gpow", (q,), base=base, continuous=base.continuous,
                 strictly_increasing=base.strictly_increasing, valid_below=base.valid_below)


def pwl(points, *, kind: str = "pwl", valid_below=None, label=None, source=None) -> Gauge:
    """Continuous piecewise-linear gauge through (r, value) points.

    Constant above the largest r, linear to (0, 0) below the smallest.
    """
    pts = sorted((Value.of(r), Value.of(v)) for r, v in points)
    if len(pts) < 2:
        raise ValueError("need at least two breakpoints")
    for (r0, v0), (r1, v1) in zip(pts, pts[1:]):
        if not r0 < r1:
            raise ValueError("breakpoint radii must be distinct")
        if v1 < v0:
            raise ValueError("breakpoint values must be nondecreasing in r")
    if pts[0][0].sign() <= 0 or pts[0][1].sign() <= 0:
        raise ValueError("breakpoints must be positive")
    pieces = tuple((a, b, "lin", (va, vb)) for (a, va), (b, vb) in zip(pts, pts[1:]))
    strict = all(v0 < v1 for (_, v0), (_, v1) in zip(pts, pts[1:]))
    vb = valid_below if valid_below is not None else min(HALF, pts[-1][0])
    return Gauge(kind, pieces=pieces, below=("lin0", (pts[0][1],)), continuous=True,
                 strictly_increasing=strict, valid_below=vb, label=label, source=source)


def piecewise(pieces, below, *, kind: str = "piecewise", continuous: bool = True,
              strictly_increasing: bool = True, valid_below=None, label=None) -> Gauge:
    """General right-continuous piecewise gauge; pieces are (a, b, kind, data) on [a, b)."""
    pcs = tuple(sorted(pieces, key=lambda p: p[0]))
    for p0, p1 in zip(pcs, pcs[1:]):
        if p0[1] != p1[0]:
            raise ValueError("pieces must tile an interval")
    vb = valid_below if valid_below is not None else min(HALF, pcs[-1][1])
    return Gauge(kind, pieces=pcs, below=below, continuous=continuous,
                 strictly_increasing=strictly_increasing, valid_below=vb, label=label)


def gauge_eval(phi: Gauge, r, ctx: NumCtx = DEFAULT_CTX):
    return phi.eval(Value.of(r) if not isinstance(r, IntervalVal) else r, ctx)


def gauge_inverse(phi: Gauge, t, mode: str = "generalized", ctx: NumCtx = DEFAULT_CTX):
    return phi.inverse(t, mode, ctx)


# ----------------------------------------------------------------------
# order
# ----------------------------------------------------------------------

@dataclass
class GaugeOrderReport:
    verdict: str
    symbolic: bool
    horizon: int | None = None
    band: tuple | None = None
    samples: list = field(default_factory=list)
    note: str = ""

    def to_dict(self):
        from .verdict import to_jsonable
        return to_jsonable({"verdict": self.verdict, "symbolic": self.symbolic, "horizon": self.horizon,
                            "band": list(self.band) if self.band else None,
                            "samples": self.samples[:8], "note": self.note})


def _lex_cmp(a: tuple, b: tuple) -> str:
    for x, y in zip(a, b):
        c = value_cmp(x, y)
        if c != EQUAL:
            return c
    return EQUAL


def _same_tau_base(phi: Gauge, psi: Gauge) -> bool:
    return phi.kind == psi.kind == "tau" and phi.base == psi.base


def _log2_ratio(phi, psi, n, ctx) -> float:
    r = Value.pow2(-n)
    a, b = phi.eval(r, ctx), psi.eval(r, ctx)
    return float(lo(b).log2_approx() - lo(a).log2_approx())


def gauge_order(phi: Gauge, psi: Gauge, N: int = 256, ctx: NumCtx = DEFAULT_CTX) -> GaugeOrderReport:
    """Relation of phi to psi: ≺ when psi/phi -> 0, ≻ when phi/psi -> 0, ≈ when
    both ratios stay bounded."""
    if phi == psi:
        return GaugeOrderReport(APPROX, True, note="identical")
    if _same_tau_base(phi, psi):
        c = value_cmp(phi.params[0], psi.params[0])
        v = {LESS: PREC, GREATER: SUCC, EQUAL: APPROX}[c]
        return GaugeOrderReport(v, True, note="tau exponents over a common base")
    # scaled copies are comparable up to the constant
    if psi.kind == "scale" and psi.base == phi or phi.kind == "scale" and phi.base == psi:
        return GaugeOrderReport(APPROX, True, note="constant ratio")
    sa, sb = phi.signature(), psi.signature()
    if sa is not None and sb is not None:
        c = _lex_cmp(sb, sa)
        if c != UNKNOWN:
            v = {GREATER: PREC, LESS: SUCC, EQUAL: APPROX}[c]
            return GaugeOrderReport(v, True, note=f"signatures {list(map(str, sa))} vs {list(map(str, sb))}")
    return sampled_order(phi, psi, N, ctx)


def sampled_order(phi: Gauge, psi: Gauge, N: int = 256, ctx: NumCtx = DEFAULT_CTX) -> GaugeOrderReport:
    """Heuristic verdict from log2(psi/phi) at r = 2^-n over the window [N/4, N]."""
    start = 1
    while not (phi.in_domain(Value.pow2(-start)) and psi.in_domain(Value.pow2(-start))
               and Value.pow2(-start) <= min(phi.valid_below, psi.valid_below)):
        start += 1
    ns = list(range(max(start, N // 4), N + 1))
    logs = [(n, _log2_ratio(phi, psi, n, ctx)) for n in ns]
    q = max(1, len(logs) // 4)
    early = [v for _, v in logs[:q]]
    late = [v for _, v in logs[-q:]]
    band = (min(v for _, v in logs), max(v for _, v in logs))
    d_max = max(late) - max(early)
    d_min = min(late) - min(early)
    if d_max < -1 and d_min < -1:
        v = PREC
    elif d_max > 1 and d_min > 1:
        v = SUCC
    elif band[1] - band[0] <= 3:
        v = APPROX
    elif d_max <= 1 and d_min >= -1:
        v = APPROX
    else:
        v = INCOMPARABLE
    samples = [(n, round(x, 6)) for n, x in logs[:: max(1, len(logs) // 8)]]
    return GaugeOrderReport(v, False, N, (round(band[0], 6), round(band[1], 6)), samples,
                            note="log2 ratio samples on r = 2^-n")


# ----------------------------------------------------------------------
# doubling
# ----------------------------------------------------------------------

def _grid_start(phi: Gauge) -> int:
    n = 1
    while Value.pow2(-n + 1) > phi.valid_below or not phi.in_domain(Value.pow2(-n + 1)):
        n += 1
    return n


def gauge_doubling(phi: Gauge, L, strict: bool = False, N: int = 64,
                   ctx: NumCtx = DEFAULT_CTX) -> Verdict:
    """phi(2r) <= L phi(r) (strict: <) for r = 2^-n with 2r <= valid_below, n <= N."""
    L = Value.of(L)
    if not L > Value(1):
        raise ValueError("L must exceed 1")
    if phi.kind == "power":
        c = value_cmp(exp2(phi.params[0], ctx), L)
        ok = c == LESS or (c == EQUAL and not strict)
        return Verdict(HOLDS if ok else FAILS, "power ratio 2^alpha", N, True,
                       {"ratio": exp2(phi.params[0], ctx), "n0": 1 if ok else None})
    n1 = _grid_start(phi)
    grid = list(range(n1, N + 1))
    extra = []
    if phi.pieces:
        for a, b, _, _ in phi.pieces:
            for x in (a, b):
                if x <= phi.valid_below and (2 * x) <= phi.valid_below:
                    extra.append(x)
    bad = []

    def check(r):
        c = value_cmp(phi.eval(2 * r, ctx), L * phi.eval(r, ctx))
        if c == UNKNOWN:
            c = value_cmp(phi.eval(2 * r, ctx.finer(4)), L * phi.eval(r, ctx.finer(4)))
        return c == LESS or (c == EQUAL and not strict)

    for n in grid:
        if not check(Value.pow2(-n)):
            bad.append(n)
    bad_points = [x for x in extra if not check(x)]
    n0 = (max(bad) + 1) if bad else n1
    symbolic = False
    if phi.kind == "reclog":
        # ratio n/(n-1) decreases to 1
        symbolic = True
    eventual = n0 <= max(n1, N // 2) and not bad_points
    st = HOLDS if eventual else FAILS
    return Verdict(st, "grid check" if not symbolic else "monotone ratio n/(n-1)", N, symbolic,
                   {"n0": n0 if eventual else None, "failures": bad[:16], "breakpoint_failures": bad_points[:8],
                    "grid_start": n1, "strict": strict})


def doubling2_check(phi: Gauge, alpha, N: int = 64, ctx: NumCtx = DEFAULT_CTX) -> Verdict:
    """For a 2^alpha-doubling gauge, check r^alpha / phi(r) <= R^alpha / phi(R/2)
    on the grid below R = valid_below."""
    alpha = Value.of(alpha)
    prem = gauge_doubling(phi, exp2(alpha, ctx) if not is_exact(exp2(alpha, ctx)) else lo(exp2(alpha, ctx)),
                          False, N, ctx) if is_exact(exp2(alpha, ctx)) else None
    if prem is None:
        L = hi(exp2(alpha, ctx))
        prem = gauge_doubling(phi, L, False, N, ctx)
    if not prem.holds or (prem.witness.get("n0") or 1) > _grid_start(phi):
        raise CertificateError("gauge is not 2^alpha-doubling on the grid", prem.witness)
    R = phi.valid_below
    bound = hi(pow_rational(R, alpha, ctx)) / lo(phi.eval(R / 2, ctx))
    worst = Value(0)
    n1 = max(1, -R.magnitude() - 1)
    while Value.pow2(-n1) > R:
        n1 += 1
    for n in range(n1, N + 1):
        r = Value.pow2(-n)
        q = hi(pow_rational(r, alpha, ctx)) / lo(phi.eval(r, ctx))
        worst = max(worst, q)
        if q > bound:
            return Verdict(FAILS, "doubling bound", n, False, {"index": n, "ratio": q, "bound": bound})
    return Verdict(HOLDS, "doubling bound", N, False, {"bound": bound, "max_ratio": worst})


# ----------------------------------------------------------------------
# gauges against sequences
# ----------------------------------------------------------------------

def asymp_check(phi: Gauge, s: Seq, N: int = 1000, ctx: NumCtx = DEFAULT_CTX):
    """Range of n*phi(s_n) over [N/2, N]; returns (a_est, b_est, Verdict)."""
    lo_n = max(1, N // 2)
    vals = []
    for n in range(lo_n, N + 1):
        vals.append(n * phi.eval(s.at(n, ctx), ctx))
    a = min(lo(v) for v in vals)
    b = max(hi(v) for v in vals)
    exact = all(is_exact(v) for v in vals) and a == b
    prof = phi.compose_profile(s)
    wit = {"window": [lo_n, N], "a": a, "b": b, "exact": exact}
    if prof is not None:
        wit["profile"] = list(prof)
        same = prof[0] == "poly" and prof[1] == Value(1) and prof[2] == Value(0)
        return a, b, Verdict(HOLDS if same else FAILS, "decay profile of the composition", N, True, wit)
    half = len(vals) // 2
    first = max(hi(v) for v in vals[:half]) if half else b
    second = max(hi(v) for v in vals[half:])
    stable = a.sign() > 0 and b <= 4 * a and second <= 2 * first and 2 * second >= first
    return a, b, Verdict(HOLDS if stable else UNKNOWN, "tail window", N, False, wit)


def gauge_from_seq(s: Seq, N: int = 64) -> Gauge:
    """Piecewise-linear gauge through (s_n, 1/n) for every n.

    The first N breakpoints are stored; smaller radii are located lazily.
    """
    pts = []
    for n in range(1, N + 1):
        x = s.at(n)
        if not is_exact(x):
            raise CertificateError("gauge_from_seq needs exact sequence values", {"index": n})
        pts.append((lo(x), Value(1, n)))
    g = pwl(pts, kind="from_seq", valid_below=pts[0][0], label=f"fromseq({s.describe()})", source=s)
    # below s_N the same interpolation continues through all later terms
    g.below = ("seq", (s, N))
    return g


# ----------------------------------------------------------------------
# constructions
# ----------------------------------------------------------------------

def _exact_seq_values(s: Seq, upto: int) -> list[Value]:
    out = []
    for n in range(0, upto + 1):
        x = s.radius(n)
        if not is_exact(x):
            raise CertificateError("construction needs exact sequence values", {"index": n})
        out.append(lo(x))
    return out


def ash2_transform(phi: Gauge, s: Seq, mode: str = "shrink", N: int = 200, bound=2,
                   ctx: NumCtx = DEFAULT_CTX):
    """Returns (psi, Verdict).

    shrink: psi ≺ phi with psi∘s summable (needs phi∘s summable).
    grow:   psi ≻ phi with psi∘s not summable (needs phi∘s not summable).
    """
    c = compose_seq(phi, s)
    lp = lp_test(c, 1, min(N, 256), ctx=ctx)
    sv = _exact_seq_values(s, N + 1)
    if mode == "shrink":
        if lp.status != HOLDS:
            raise CertificateError("shrink needs phi∘s summable", lp.witness)
        cp, cert = ash_transform(c, "summable", N, ctx)
        pts = [(sv[n + 1], cp.at(n)) for n in range(1, N)]
        psi = pwl(pts, kind="ash2", valid_below=sv[2], label=f"ash2_shrink({phi.describe()},{s.describe()})")
        ratios = [cp.at(n) / lo(phi.eval(sv[n + 1], ctx)) for n in range(1, N)]
        led = Ledger()
        for n in range(1, N + 1):
            led.add(psi.eval(sv[n], ctx))
        m = max(1, N // 10)
        wit = {"ledger": led.value(), "ledger_bound": cert.witness["bound"] + cp.at(1),
               "ratio_first": ratios[0], "ratio_at_N_over_10": ratios[m - 1], "ratio_last": ratios[-1],
               "ratio_grows": ratios[-1] > ratios[m - 1] > ratios[0] or ratios[-1] > ratios[m - 1],
               "breakpoints_strict": all(pts[i][1] > pts[i + 1][1] for i in range(len(pts) - 1))}
        ok = wit["ratio_grows"] and wit["breakpoints_strict"] and led.hi <= wit["ledger_bound"]
        return psi, Verdict(HOLDS if ok else FAILS, "ash2 shrink", N, False, wit)
    if mode == "grow":
        if lp.status == HOLDS:
            raise CertificateError("grow needs phi∘s not summable", lp.witness)
        cp, cert = ash_transform(c, "divergent", N + 1, ctx)
        cv = [None] + [cp.at(n) for n in range(1, N + 2)]
        a = [None] + [(max(cv[n] / 2, cv[n + 1]) + cv[n]) / 2 for n in range(1, N + 1)]
        pieces = [(sv[n], sv[n - 1], "lin", (a[n], cv[n])) for n in range(N, 0, -1)]
        psi = piecewise(pieces, ("lin0", (a[N],)), kind="ash2", continuous=False,
                        valid_below=sv[1], label=f"ash2_grow({phi.describe()},{s.describe()})")
        led = Ledger()
        crossed = None
        for n in range(1, N + 1):
            led.add(psi.eval(sv[n], ctx))
            if crossed is None and led.lo > Value.of(bound):
                crossed = n
        ratios = [cv[n] / hi(c.at(n, ctx)) for n in range(1, N + 1)]
        m = max(1, N // 10)
        wit = {"ledger": led.value(), "bound": Value.of(bound), "exceeds_bound_at": crossed,
               "ratio_at_N_over_10": ratios[m - 1], "ratio_last": ratios[-1],
               "ratio_shrinks": ratios[-1] < ratios[m - 1],
               "window_ok": all(max(cv[n] / 2, cv[n + 1]) <= a[n] < cv[n] for n in range(1, N + 1))}
        ok = crossed is not None and wit["ratio_shrinks"] and wit["window_ok"]
        return psi, Verdict(HOLDS if ok else FAILS, "ash2 grow", N, False, wit)
    raise ValueError(f"unknown mode {mode!r}")


def _ceil_neglog2(x, ctx: NumCtx) -> int:
    """ceil(-log2 x) for x > 0."""
    x = lo(x) if is_exact(x) else x
    for _ in range(ctx.max_refine):
        if is_exact(x):
            v = lo(x)
            if v.is_pow2():
                return -v.exp
            # 2^-k <= v iff k >= -log2 v
            k = -(v.magnitude() + 1)
            while Value.pow2(-k) > v:
                k += 1
            while Value.pow2(-(k - 1)) <= v:
                k -= 1
            return k
        a = (-eval_log2(x, ctx))
        k1, k2 = lo(a).ceil(), hi(a).ceil()
        if k1 == k2:
            return k1
        ctx = ctx.finer()
    raise ArithmeticError("could not resolve ceil(-log2 x)")


def doubling11_regularize(phi: Gauge, L=2, N: int = 200, ctx: NumCtx = DEFAULT_CTX):
    """Continuous strictly increasing strictly-L-doubling psi ≈ phi.

    Returns (psi, Verdict).  L must be a power of two, so the exponent
    log 2 / log L is the rational 1/k.
    """
    L = Value.of(L)
    if not (L.is_pow2() and L.exp >= 1):
        raise CertificateError("only L = 2^k is supported (log 2 / log L must be rational)", {"L": L})
    k = L.exp
    prem = gauge_doubling(phi, L, False, N, ctx)
    if not prem.holds:
        raise CertificateError("premise: gauge is not L-doubling on the grid", prem.witness)
    base = phi if k == 1 else gpow(Value(1, k), phi)
    # start where the premise holds for the pairs (2r, r) and base <= 1/2
    m0 = max(1, (prem.witness.get("n0") or 1) - 1)
    while not hi(base.eval(Value.pow2(-m0), ctx)) <= HALF:
        m0 += 1
        if m0 > 1 << 14:
            raise CertificateError("gauge stays above 1/2 on the grid", {"gauge": phi.describe()})
    a = {}
    for m in range(m0, m0 + N + 1):
        km = max(1, _ceil_neglog2(base.eval(Value.pow2(-m), ctx), ctx))
        a[m] = Value((1 << km) - 1, 1, -2 * km) + Value.pow2(-m)
    ms = range(m0, m0 + N)
    pts = [(Value.pow2(-m), a[m]) for m in range(m0, m0 + N + 1)]
    inner = pwl(pts, kind="doubling11", valid_below=Value.pow2(-m0),
                label=f"doubling11({phi.describe()},2)")
    psi = inner if k == 1 else gpow(Value(k), inner)
    if k != 1:
        psi.label = f"doubling11({phi.describe()},{L})"
    checks = {
        "grid_start": m0,
        "strictly_increasing": all(a[m] > a[m + 1] for m in ms),
        "grid_strict_doubling": all(a[m] < 2 * a[m + 1] for m in ms),
    }
    mids_ok = True
    for n in range(m0, m0 + min(60, N - 1)):
        r = Value(3, 1, -n - 2)  # midpoint of [2^-(n+1), 2^-n]
        if not inner.eval(2 * r) < 2 * inner.eval(r):
            mids_ok = False
            break
    checks["midpoint_strict_doubling"] = mids_ok
    r0, r1 = Value.pow2(-m0), Value.pow2(-m0 - 1)
    lower, upper = Value(1, 4), 1 + max(r0 / lo(base.eval(r0, ctx)), r1 / lo(base.eval(r1, ctx)))
    band_lo, band_hi = None, None
    for m in range(m0, m0 + N):
        q = a[m] / IntervalVal.of(base.eval(Value.pow2(-m), ctx))
        band_lo = lo(q) if band_lo is None else min(band_lo, lo(q))
        band_hi = hi(q) if band_hi is None else max(band_hi, hi(q))
    checks["band"] = [band_lo, band_hi]
    checks["band_bounds"] = [lower, upper]
    checks["band_ok"] = lower <= band_lo and band_hi <= upper
    checks["a_head"] = [a[m] for m in range(m0, m0 + 4)]
    ok = checks["strictly_increasing"] and checks["grid_strict_doubling"] and mids_ok and checks["band_ok"]
    return psi, Verdict(HOLDS if ok else FAILS, "doubling11", N, False, checks)


def two_gauges(phi: Gauge, s: Seq, N: int = 200, alpha=2, L=None, Q=None,
               ctx: NumCtx = DEFAULT_CTX):
    """(zeta, xi, Verdict) with zeta = tau_3∘phi, xi = tau_2∘phi after normalization."""
    c = compose_seq(phi, s)
    lp = lp_test(c, 1, min(N, 256), ctx=ctx)
    if lp.status != HOLDS:
        raise CertificateError("two_gauges needs phi∘s summable", lp.witness)
    f1 = phi.eval(s.at(1, ctx), ctx)
    scale_by = None
    base = phi
    if hi(f1) >= Value(1):
        scale_by = 1 / (2 * hi(f1))
        base = gscale(scale_by, phi)
    zeta, xi = tau(3, base), tau(2, base)
    zeta.label = f"zeta({base.describe()})"
    xi.label = f"xi({base.describe()})"
    start = None
    led_z, led_f = Ledger(), Ledger()
    termwise = True
    for n in range(1, N + 1):
        x = s.at(n, ctx)
        f = base.eval(x, ctx)
        if start is None and hi(f) <= HALF:
            start = n
        if start is not None:
            z = zeta.eval(x, ctx)
            led_z.add(z)
            led_f.add(f)
            if not hi(z) <= lo(f):
                termwise = False
    alpha = Value.of(alpha)
    phia = gpow(alpha, base)
    orders = {
        "xi_vs_zeta": gauge_order(xi, zeta, N, ctx).to_dict(),
        "zeta_vs_phi_alpha": gauge_order(zeta, phia, N, ctx).to_dict(),
        "xi_vs_phi_alpha": gauge_order(xi, phia, N, ctx).to_dict(),
    }
    wit = {"normalization": scale_by, "from_index": start, "termwise_zeta_le_phi": termwise,
           "zeta_ledger": led_z.value(), "phi_ledger": led_f.value(), "order": orders, "alpha": alpha}
    chain = (orders["xi_vs_zeta"]["verdict"] == PREC and orders["zeta_vs_phi_alpha"]["verdict"] == PREC
             and orders["xi_vs_phi_alpha"]["verdict"] == PREC)
    wit["chain_xi_zeta_phi_alpha"] = chain
    if L is not None and Q is not None:
        wit["Q_doubling"] = {
            "zeta": gauge_doubling(zeta, Q, False, N, ctx).to_dict(),
            "xi": gauge_doubling(xi, Q, False, N, ctx).to_dict(),
        }
    ok = termwise and chain and start is not None
    return zeta, xi, Verdict(HOLDS if ok else FAILS, "two gauges", N, False, wit)


def dim2_gauge(alpha, psi: Gauge, r: Seq, N: int = 8, ctx: NumCtx = DEFAULT_CTX):
    """Continuous spliced gauge phi <= psi with phi ≼ r^(alpha + 1/n) for every n <= N.

    The splice points s_n are powers of two whose exponents make every
    root in the construction exact.  Returns (phi, Verdict).
    """
    alpha = Value.of(alpha)
    if not (Value(0) <= alpha < Value(1)):
        raise ValueError("alpha must lie in [0, 1)")
    fa = alpha.to_fraction()
    A, B = fa.numerator, fa.denominator
    expo = lambda n: alpha + Value(1, n)
    phin = lambda n, x: pow_rational(x, expo(n), ctx)

    # hypothesis: psi >= phi_n on [r_{n+1}, r_n], checked at endpoints and dyadic points
    for n in range(1, N + 1):
        a, b = lo(r.at(n + 1, ctx)), hi(r.at(n, ctx))
        samples = {a, b}
        x = Value.pow2(b.magnitude())
        while x >= a:
            if x <= b:
                samples.add(x)
            x = x / 2
        for x in samples:
            if value_cmp(psi.eval(x, ctx), phin(n, x)) == LESS:
                raise CertificateError("psi < phi_n on a sample", {"n": n, "r": x})

    def exact_exponents(n, k):
        # plateau exponent k*(alpha + 1/n) and s'_n exponent must both be integers
        plat = k * expo(n)
        sp = plat / expo(n + 1)
        return plat.den == 1 and plat.exp >= 0 and sp.den == 1 and sp.exp >= 0

    period = math.lcm(*(B * n_ for n_ in range(1, N + 1))) * math.lcm(*(A * (n_ + 1) + B for n_ in range(1, N + 1)))
    s_exp, sp_exp = {}, {}
    for n in range(1, N + 1):
        if n == 1:
            bound = hi(r.at(1, ctx))
        else:
            bound = min(hi(r.at(n, ctx)), Value.pow2(-sp_exp[n - 1]))
        k = max(1, -(bound.magnitude() + 1))
        while Value.pow2(-k) > bound or (n > 1 and not Value.pow2(-k) < bound):
            k += 1
        k0 = k
        while not exact_exponents(n, k):
            k += 1
            if k > k0 + period:
                raise ArithmeticError("no exact splice exponent found")
        s_exp[n] = k
        sp_exp[n] = (k * expo(n) / expo(n + 1)).floor()
    pieces = []
    for n in range(1, N + 1):
        sn, spn = Value.pow2(-s_exp[n]), Value.pow2(-sp_exp[n])
        plateau = phin(n, sn)
        pieces.append((spn, sn, "const", (lo(plateau),)))
        if n < N:
            pieces.append((Value.pow2(-s_exp[n + 1]), spn, "pow", (expo(n + 1),)))
    first = Value.pow2(-sp_exp[N])
    phi = piecewise(pieces, ("pow", (expo(N + 1),)), kind="dim2",
                    valid_below=Value.pow2(-s_exp[1]), label=f"dim2({alpha},{psi.describe()},{r.describe()})")
    # continuity at every splice point
    cont = True
    for i in range(len(phi.pieces) - 1):
        p0, p1 = phi.pieces[i], phi.pieces[i + 1]
        lim = _piece_value(p0, p0[1], ctx, limit=True)
        val = _piece_value(p1, p1[0], ctx)
        if value_cmp(lim, val) != EQUAL:
            cont = False
    below_val = pow_rational(first, expo(N + 1), ctx)
    if value_cmp(below_val, _piece_value(phi.pieces[0], first, ctx)) != EQUAL:
        cont = False
    le_psi = True
    for a, b, _, _ in phi.pieces:
        for x in (a, b):
            if value_cmp(phi.eval(x, ctx), psi.eval(x, ctx)) == GREATER:
                le_psi = False
    preceq = {}
    for n in range(1, N + 1):
        worst = Value(0)
        for m in range(s_exp[1], sp_exp[N] + 1):
            x = Value.pow2(-m)
            q = hi(phin(n, x)) / lo(phi.eval(x, ctx))
            worst = max(worst, q)
        preceq[n] = worst
    wit = {"splice_exponents": [s_exp[n] for n in range(1, N + 1)],
           "plateau_exponents": [sp_exp[n] for n in range(1, N + 1)],
           "continuous": cont, "phi_le_psi": le_psi, "phi_n_over_phi_max": preceq}
    ok = cont and le_psi
    return phi, Verdict(HOLDS if ok else FAILS, "dim2 splice", N, False, wit)
