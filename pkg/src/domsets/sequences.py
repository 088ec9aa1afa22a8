"""Strictly decreasing positive null sequences and the machinery around them.

Indices start at 1.  Every structured kind also has a natural value at
``n = 0`` (see :meth:`Seq.radius`), which Cantor constructions use as the
diameter of the root interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .covers import FineCover, check_fine, diam
from .numerics import (
    DEFAULT_CTX, EQUAL, GREATER, LESS, UNKNOWN, IntervalVal, NumCtx, Value,
    eval_ln, eval_log2, exp2, hi, is_exact, lo, pow_rational, simplify,
    sqrt_floor_grid, value_cmp,
)
from .verdict import FAILS, HOLDS, Verdict

BASE_KINDS = ("geometric", "harmonic_power", "pow2exp", "dblexp", "factexp", "logfam")
TRANSFORMS = ("mshift", "ashift", "scale", "power")

# exact evaluation is attempted while the result stays below this many bits
EXACT_BITS = 1 << 20


class CertificateError(ValueError):
    """A premise check failed; ``witness`` says where."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


def _bits(v: Value) -> int:
    return abs(v.num).bit_length() + v.den.bit_length()


def _wide(ctx: NumCtx, factor: int) -> NumCtx:
    """Context with enough extra precision to survive multiplication by factor."""
    return NumCtx(ctx.precision_bits + max(0, int(factor).bit_length()) + 8, ctx.max_refine)


def _tidy(x, ctx: NumCtx):
    """Round an enclosure outward to absolute width about 2^-precision_bits."""
    if isinstance(x, IntervalVal):
        return x.round_out(ctx.precision_bits + max(0, x.hi.magnitude()) + 8)
    return x


class Seq:
    """A member of the class of strictly decreasing positive null sequences."""

    def __init__(self, kind: str, params: tuple = (), base: "Seq | None" = None,
                 op: tuple | None = None, tail_ratio: Value | None = None,
                 zero: Value | None = None, label: str | None = None):
        self.kind = kind
        self.params = params
        self.base = base
        self.op = op
        self.tail_ratio = tail_ratio
        self.zero = zero
        self.label = label
        self._memo: dict = {}

    # -- identity -----------------------------------------------------
    def _key(self):
        return (self.kind, self.params, self.base._key() if self.base else None, self.op,
                self.tail_ratio, self.zero)

    def __eq__(self, other):
        return isinstance(other, Seq) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def describe(self) -> str:
        if self.label:
            return self.label
        k, p = self.kind, self.params
        if k == "geometric":
            return f"geom({p[0]})"
        if k == "harmonic_power":
            return f"harm({p[0]})"
        if k in ("pow2exp", "dblexp", "factexp", "logfam"):
            return f"{k}({p[0]})"
        if k == "table":
            return f"table[{len(p)}]"
        if k == "composed":
            return f"{p[0].describe()}o{self.base.describe()}"
        name, arg = self.op
        return f"{name}({arg},{self.base.describe()})"

    def __repr__(self):
        return f"Seq({self.describe()})"

    # -- evaluation ---------------------------------------------------
    def at(self, n: int, ctx: NumCtx = DEFAULT_CTX):
        """s_n for n >= 1: exact Value where possible, else an enclosure."""
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"sequence index must be a positive integer, got {n!r}")
        return self._value(n, ctx)

    def radius(self, n: int, ctx: NumCtx = DEFAULT_CTX):
        """Like :meth:`at` but also defined at n = 0 (root diameter)."""
        if n < 0:
            raise ValueError("negative index")
        return self._value(n, ctx)

    def _value(self, n: int, ctx: NumCtx):
        key = (n, ctx.precision_bits)
        hit = self._memo.get(n)
        if hit is not None:
            return hit
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        v = simplify(self._compute(n, ctx))
        self._memo[n if is_exact(v) else key] = v
        return v

    def _compute(self, n: int, ctx: NumCtx):
        k, p = self.kind, self.params
        if k == "geometric":
            lam = p[0]
            if lam.is_pow2():
                return Value.pow2(lam.exp * n)
            if _bits(lam) * n <= EXACT_BITS:
                return lam ** n
            return exp2(-self.neglog2(n, ctx), ctx)
        if k == "harmonic_power":
            return pow_rational(Value(n + 1), -p[0], ctx)
        if k == "pow2exp":
            if n == 0:
                return Value(1)
            return exp2(-self.neglog2(n, ctx), ctx)
        if k in ("dblexp", "factexp"):
            eps = p[0]
            m = 2 ** n if k == "dblexp" else math.factorial(n)
            if eps.is_pow2():
                return Value.pow2(eps.exp * m)
            if _bits(eps) * m <= EXACT_BITS:
                return eps ** m
            return exp2(-self.neglog2(n, ctx), ctx)
        if k == "logfam":
            if n == 0:
                return Value(1)
            return exp2(-self.neglog2(n, ctx), ctx)
        if k == "table":
            if n == 0:
                return self.zero if self.zero is not None else Value(1)
            if n <= len(p):
                return p[n - 1]
            if self.tail_ratio is None:
                raise IndexError(f"index {n} beyond table of length {len(p)}")
            return p[-1] * self.tail_ratio ** (n - len(p))
        if k == "composed":
            return p[0].eval(self.base.radius(n, ctx), ctx)
        name, arg = self.op
        b = self.base
        if name == "mshift":
            return b.radius(arg * n, ctx)
        if name == "ashift":
            return b.radius(n + arg, ctx)
        if name == "scale":
            return arg * b.radius(n, ctx)
        if name == "power":
            return pow_rational(b.radius(n, ctx), arg, ctx)
        raise ValueError(f"unknown kind {k}")

    def neglog2(self, n: int, ctx: NumCtx = DEFAULT_CTX):
        """-log2 s_n, exact when possible; works far past float range."""
        k, p = self.kind, self.params
        if k == "geometric":
            return _tidy(n * -eval_log2(p[0], _wide(ctx, n)), ctx)
        if k == "harmonic_power":
            return p[0] * eval_log2(Value(n + 1), ctx) if n else Value(0)
        if k == "pow2exp":
            return pow_rational(Value(n), p[0], ctx) if n else Value(0)
        if k in ("dblexp", "factexp"):
            m = 2 ** n if k == "dblexp" else math.factorial(n)
            return _tidy(m * -eval_log2(p[0], _wide(ctx, m)), ctx)
        if k == "logfam":
            if n == 0:
                return Value(0)
            return eval_ln(Value(n + 1), ctx) * -eval_log2(p[0], ctx)
        if k in ("table", "composed"):
            return -eval_log2(self.radius(n, ctx), ctx)
        name, arg = self.op
        b = self.base
        if name == "mshift":
            return b.neglog2(arg * n, ctx)
        if name == "ashift":
            return b.neglog2(n + arg, ctx)
        if name == "scale":
            return b.neglog2(n, ctx) - eval_log2(arg, ctx)
        if name == "power":
            return arg * b.neglog2(n, ctx)
        raise ValueError(f"unknown kind {k}")

    def length(self) -> int | None:
        """Number of defined terms (None when infinite)."""
        if self.kind == "table":
            return None if self.tail_ratio is not None else len(self.params)
        if self.kind == "composed":
            return self.base.length()
        if self.kind == "derived":
            bl = self.base.length()
            if bl is None:
                return None
            name, arg = self.op
            if name == "mshift":
                return bl // arg
            if name == "ashift":
                return max(0, bl - arg)
            return bl
        return None

    # -- structure ----------------------------------------------------
    def geometric_form(self):
        """(coef, ratio) with s_n = coef * ratio**n for all n >= 1, or None."""
        if self.kind == "geometric":
            return Value(1), self.params[0]
        if self.kind == "composed":
            g = self.base.geometric_form()
            return None if g is None else self.params[0].compose_geometric(*g)
        if self.kind != "derived":
            return None
        g = self.base.geometric_form()
        if g is None:
            return None
        c, rho = g
        name, arg = self.op
        if name == "mshift":
            return c, rho ** arg
        if name == "ashift":
            return c * rho ** arg, rho
        if name == "scale":
            return arg * c, rho
        cp, rp = pow_rational(c, arg), pow_rational(rho, arg)
        if is_exact(cp) and is_exact(rp):
            return lo(cp), lo(rp)
        return None

    def profile(self):
        """Decay class: ("poly", q, b) for n^-q (log n)^-b, ("exp", d, e) for
        2^-(n^d log^e n), ("dexp", d, e) for 2^-2^(n^d log^e n), up to constants."""
        k, p = self.kind, self.params
        if k == "geometric":
            return ("exp", Value(1), Value(0))
        if k == "harmonic_power":
            return ("poly", p[0], Value(0))
        if k == "pow2exp":
            return ("exp", p[0], Value(0))
        if k == "dblexp":
            return ("dexp", Value(1), Value(0))
        if k == "factexp":
            return ("dexp", Value(1), Value(1))
        if k == "logfam":
            return ("poly", eval_ln(1 / p[0]), Value(0))
        if k == "table":
            return ("exp", Value(1), Value(0)) if self.tail_ratio is not None else None
        if k == "composed":
            return p[0].compose_profile(self.base)
        bp = self.base.profile()
        if bp is None:
            return None
        name, arg = self.op
        if name == "power" and bp[0] == "poly":
            return ("poly", bp[1] * arg, bp[2] * arg)
        return bp

    def gap_monotone(self) -> bool:
        """True when n -> -log2 s_kn + log2 s_n is nondecreasing for every k >= 2,
        so a doubling-type inequality that holds at n keeps holding beyond n."""
        if self.kind in BASE_KINDS:
            return True
        if self.kind in ("table", "composed"):
            return False
        if self.op[0] == "ashift":
            return self.geometric_form() is not None
        return self.base.gap_monotone()

    def is_dyadic_valued(self, upto: int) -> bool:
        try:
            return all(isinstance(v, Value) and v.is_dyadic for v in (self.at(n) for n in range(1, upto + 1)))
        except IndexError:
            return False


# ----------------------------------------------------------------------
# constructors
# ----------------------------------------------------------------------

def _unit_interval(x, what: str) -> Value:
    v = Value.of(x)
    if not (Value(0) < v < Value(1)):
        raise ValueError(f"{what} must lie in (0, 1), got {v}")
    return v


def _positive(x, what: str) -> Value:
    v = Value.of(x)
    if v.sign() <= 0:
        raise ValueError(f"{what} must be positive, got {v}")
    return v


def geometric(lam) -> Seq:
    return Seq("geometric", (_unit_interval(lam, "ratio"),))


def harmonic_power(p=1) -> Seq:
    return Seq("harmonic_power", (_positive(p, "exponent"),))


def pow2exp(p) -> Seq:
    return Seq("pow2exp", (_positive(p, "exponent"),))


def dblexp(eps) -> Seq:
    return Seq("dblexp", (_unit_interval(eps, "base"),))


def factexp(eps) -> Seq:
    return Seq("factexp", (_unit_interval(eps, "base"),))


def logfam(eps) -> Seq:
    return Seq("logfam", (_unit_interval(eps, "base"),))


def binary_geometric() -> Seq:
    """2^-n."""
    return geometric(Value(1, 2))


def harmonic() -> Seq:
    """1/(n+1)."""
    return harmonic_power(1)


def table(values, tail_ratio=None, zero=None, label: str | None = None) -> Seq:
    """Explicit sequence; with ``tail_ratio`` it continues geometrically past the table."""
    vals = tuple(Value.of(v) for v in values)
    if not vals:
        raise ValueError("empty table")
    for i, v in enumerate(vals):
        if v.sign() <= 0:
            raise ValueError(f"table entry {i + 1} is not positive: {v}")
        if i and not v < vals[i - 1]:
            raise ValueError(f"table not strictly decreasing at index {i + 1}")
    tr = None if tail_ratio is None else _unit_interval(tail_ratio, "tail ratio")
    z = None if zero is None else Value.of(zero)
    if z is not None and not z > vals[0]:
        raise ValueError("zero-index term must exceed the first term")
    return Seq("table", vals, tail_ratio=tr, zero=z, label=label)


def seq_transform(s: Seq, t) -> Seq:
    """Apply ("mshift", k), ("ashift", k), ("scale", q) or ("power", q)."""
    name, arg = t
    if name not in TRANSFORMS:
        raise ValueError(f"unknown transform {name!r}")
    if name in ("mshift", "ashift"):
        if not isinstance(arg, int) or arg < 1:
            raise ValueError(f"{name} needs an integer k >= 1, got {arg!r}")
    else:
        arg = _positive(arg, name)
    if name == "mshift" and arg == 1 or name == "power" and arg == Value(1) \
            or name == "scale" and arg == Value(1):
        return s
    return Seq("derived", base=s, op=(name, arg))


def mshift(s: Seq, k: int) -> Seq:
    return seq_transform(s, ("mshift", k))


def ashift(s: Seq, k: int) -> Seq:
    return seq_transform(s, ("ashift", k))


def scale(s: Seq, q) -> Seq:
    return seq_transform(s, ("scale", q))


def power(s: Seq, q) -> Seq:
    return seq_transform(s, ("power", q))


def compose_seq(gauge, s: Seq) -> Seq:
    """The sequence n -> gauge(s_n)."""
    return Seq("composed", (gauge,), base=s)


def seq_eval(s: Seq, n: int, ctx: NumCtx = DEFAULT_CTX):
    return s.at(n, ctx)


@dataclass
class SeqFamily:
    """Finite truncation of a family of sequences."""

    kind: str
    base: object
    K: int = 4

    def members(self, K: int | None = None) -> list[Seq]:
        K = K or self.K
        if self.kind == "closure":
            return [mshift(self.base, k) for k in range(1, K + 1)]
        if self.kind == "shift_completion":
            return [ashift(self.base, k) for k in range(1, K + 1)]
        if self.kind == "scaled_family":
            return [m for b in self.base for m in SeqFamily("closure", b, K).members()]
        if self.kind == "explicit":
            return list(self.base)[:K]
        raise ValueError(f"unknown family kind {self.kind!r}")


def closure(s: Seq, K: int = 4) -> SeqFamily:
    return SeqFamily("closure", s, K)


def shift_completion(s: Seq, K: int = 4) -> SeqFamily:
    return SeqFamily("shift_completion", s, K)


# ----------------------------------------------------------------------
# comparisons
# ----------------------------------------------------------------------

def compare_terms(s: Seq, n: int, t: Seq, m: int, cs=1, ct=1, ctx: NumCtx = DEFAULT_CTX) -> str:
    """Order of ``cs * s_n`` against ``ct * t_m``."""
    cs, ct = Value.of(cs), Value.of(ct)
    a, b = s.radius(n, ctx), t.radius(m, ctx)
    if is_exact(a) and is_exact(b):
        return value_cmp(cs * lo(a), ct * lo(b))
    for _ in range(ctx.max_refine):
        c = value_cmp(cs * a, ct * b)
        if c != UNKNOWN:
            return c
        # log domain copes with terms far below float range
        la = eval_log2(cs, ctx) - s.neglog2(n, ctx)
        lb = eval_log2(ct, ctx) - t.neglog2(m, ctx)
        c = value_cmp(la, lb)
        if c != UNKNOWN:
            return c
        ctx = ctx.finer()
        a, b = s.radius(n, ctx), t.radius(m, ctx)
    return UNKNOWN


_PARAM_ORDER = {
    # kind -> sign: +1 if a larger parameter gives larger terms
    "geometric": 1, "dblexp": 1, "factexp": 1, "logfam": 1,
    "harmonic_power": -1, "pow2exp": -1,
}


def seq_leq(s: Seq, t: Seq, N: int = 64, ctx: NumCtx = DEFAULT_CTX) -> Verdict:
    """Pointwise s_n <= t_n."""
    if s == t:
        return Verdict(HOLDS, "reflexive", N, True)
    symbolic, horizon, reason = False, N, "checked"
    if s.kind == t.kind and s.kind in _PARAM_ORDER:
        c = value_cmp(s.params[0], t.params[0])
        if c == EQUAL or (c == LESS) == (_PARAM_ORDER[s.kind] > 0):
            return Verdict(HOLDS, f"monotone in the {s.kind} parameter", N, True)
    elif s.kind == "geometric" and t.kind == "harmonic_power":
        # n*a - p*ln(n+1) is nondecreasing once n+1 >= p/a, a = ln(1/lam)
        a_lo = lo(eval_ln(1 / s.params[0], ctx))
        n_star = (t.params[0] / a_lo).ceil()
        horizon = max(N, n_star + 1)
        symbolic, reason = True, f"increasing difference beyond n={n_star}"
    for n in range(1, horizon + 1):
        try:
            c = compare_terms(s, n, t, n, ctx=ctx)
        except IndexError:
            horizon = n - 1
            symbolic = False
            break
        if c == GREATER:
            return Verdict(FAILS, "pointwise", n, True, {"index": n, "s_n": s.at(n), "t_n": t.at(n)})
        if c == UNKNOWN:
            return Verdict(UNKNOWN, "pointwise", n, False, {"index": n})
    return Verdict(HOLDS, reason, horizon, symbolic, {"horizon": horizon})


# ----------------------------------------------------------------------
# series
# ----------------------------------------------------------------------

class Ledger:
    """Running enclosure of a partial sum of positive terms.

    Sums stay exact until a term is an enclosure or the running value gets
    longer than ``exact_bits``; after that both ends are rounded outward to
    ``bits`` significant bits, and terms too small to register only bump the
    upper end by one unit in the last place.
    """

    def __init__(self, bits: int = 96, exact_bits: int = 4096):
        self.bits, self.exact_bits = bits, exact_bits
        self.lo = Value(0)
        self.hi = Value(0)
        self.count = 0

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def value(self):
        return simplify(IntervalVal(self.lo, self.hi))

    def add(self, term):
        tl, th = lo(term), hi(term)
        self.count += 1
        if self.exact and tl == th and (self.lo.is_zero() or abs(self.lo.magnitude() - tl.magnitude()) < 4096):
            v = self.lo + tl
            if _bits(v) <= self.exact_bits:
                self.lo = self.hi = v
                return self
        self.lo = self._add_side(self.lo, tl, up=False)
        self.hi = self._add_side(self.hi, th, up=True)
        return self

    def _add_side(self, acc: Value, t: Value, up: bool) -> Value:
        if t.is_zero():
            return acc
        if not acc.is_zero() and t.magnitude() < acc.magnitude() - self.bits - 8:
            if not up:
                return acc
            return acc + Value.pow2(acc.magnitude() - self.bits)
        v = acc + t
        return v.round_up(self.bits) if up else v.round_down(self.bits)


def _profile_in_lp(prof, p: Value) -> str:
    kind, q, b = prof
    if kind in ("exp", "dexp"):
        return HOLDS
    c = value_cmp(p * q, Value(1))
    if c == GREATER:
        return HOLDS
    if c == LESS:
        return FAILS
    if c == EQUAL:
        cb = value_cmp(p * b, Value(1))
        return HOLDS if cb == GREATER else FAILS if cb in (LESS, EQUAL) else UNKNOWN
    return UNKNOWN


def _checkpoints(N: int) -> list[int]:
    pts, k = [], 1
    while k < N:
        pts.append(k)
        k *= 2
    pts.append(N)
    return pts


def partial_sums(s: Seq, p=1, N: int = 128, ctx: NumCtx = DEFAULT_CTX, bound=None):
    """Ledger of sum_{n<=N} s_n^p; stops early once the lower end exceeds ``bound``."""
    p = Value.of(p)
    led = Ledger()
    marks = set(_checkpoints(N))
    rows = []
    crossed = None
    for n in range(1, N + 1):
        try:
            x = s.at(n, ctx)
        except IndexError:
            break
        if p != Value(1):
            if is_exact(x) and _bits(lo(x)) < 4096:
                x = pow_rational(x, p, ctx)
            else:
                x = exp2(-(p * s.neglog2(n, ctx)), ctx)
        led.add(x)
        if n in marks:
            rows.append((n, led.value()))
        if bound is not None and crossed is None and led.lo > Value.of(bound):
            crossed = n
            rows.append((n, led.value()))
            break
    return led, rows, crossed


def lp_test(s: Seq, p=1, N: int = 128, bound=None, ctx: NumCtx = DEFAULT_CTX) -> Verdict:
    """Membership of s in l^p."""
    p = _positive(p, "p")
    prof = s.profile()
    led, rows, crossed = partial_sums(s, p, N, ctx, bound)
    wit = {"ledger": rows, "partial_sum": led.value(), "terms": led.count}
    if crossed is not None:
        wit["exceeds_bound_at"] = crossed
        wit["bound"] = Value.of(bound)
    if prof is not None:
        st = _profile_in_lp(prof, p)
        if st != UNKNOWN:
            wit["profile"] = [prof[0], prof[1], prof[2]]
            if s.kind == "table" and s.tail_ratio is not None and st == HOLDS:
                wit["tail_model"] = f"geometric ratio {s.tail_ratio}"
            return Verdict(st, "decay profile", N, True, wit)
    if s.kind == "table" and s.length() is not None:
        wit["note"] = "finite table without tail model"
    if crossed is not None:
        return Verdict(FAILS, "partial sum exceeds bound", crossed, False, wit)
    return Verdict(UNKNOWN, "partial sums only", N, False, wit)


def lp_corridor_classify(s: Seq, alpha) -> dict:
    """Flags for l^{alpha+} (in every l^beta, beta > alpha) and l^{alpha-} (in some l^beta, beta < alpha)."""
    alpha = Value.of(alpha)
    if alpha.sign() < 0:
        raise ValueError("alpha must be nonnegative")
    prof = s.profile()
    if prof is None:
        return {"plus": UNKNOWN, "minus": UNKNOWN, "alpha": alpha, "profile": None}
    kind, q, b = prof
    if kind in ("exp", "dexp"):
        plus, minus = True, alpha.sign() > 0
    else:
        c = value_cmp(alpha * q, Value(1))
        if c == UNKNOWN:
            return {"plus": UNKNOWN, "minus": UNKNOWN, "alpha": alpha, "profile": list(prof)}
        plus = c in (GREATER, EQUAL)
        minus = c == GREATER
    return {"plus": plus, "minus": minus, "alpha": alpha, "profile": list(prof)}


# ----------------------------------------------------------------------
# doubling and growth
# ----------------------------------------------------------------------

def _first_failure(pred, N: int):
    """First n <= N where pred(n) is not LESS/EQUAL; also the last such n."""
    first = last = None
    unknown = None
    for n in range(1, N + 1):
        c = pred(n)
        if c == UNKNOWN and unknown is None:
            unknown = n
        if c in (GREATER, UNKNOWN):
            if first is None:
                first = n
            last = n
    return first, last, unknown


def seq_doubling_test(s: Seq, mode: str = "two_doubling", N: int = 64, kmax: int = 4,
                      ctx: NumCtx = DEFAULT_CTX) -> Verdict:
    """two_doubling: s_2n <= s_n/2; doubling(kmax): some k <= kmax with s_kn <= s_n/2."""
    if mode == "two_doubling":
        ks = [2]
    elif mode == "doubling":
        if kmax < 2:
            raise ValueError("kmax must be at least 2")
        ks = list(range(2, kmax + 1))
    else:
        raise ValueError(f"unknown doubling mode {mode!r}")
    tried = []
    for k in ks:
        first, last, unknown = _first_failure(
            lambda n: compare_terms(s, k * n, s, n, 1, Value(1, 2), ctx), N)
        tried.append({"k": k, "first_failure": first, "holds_from": None if last is None else last + 1})
        if first is None:
            return Verdict(HOLDS, mode, N, s.gap_monotone(), {"k": k, "tried": tried})
    if unknown is not None:
        return Verdict(UNKNOWN, mode, N, False, {"tried": tried})
    return Verdict(FAILS, mode, N, s.gap_monotone(), {"tried": tried, "index": tried[-1]["first_failure"]})


def growth_condition(s: Seq, cond: str, N: int = 1000, m_max: int = 4, j_max: int = 8,
                     ctx: NumCtx = DEFAULT_CTX) -> Verdict:
    """Growth conditions used by the additive-shift constructions.

    cond_1sn:     s_n >= 4^n s_{n+1} for all n <= N
    cond_3sn:     s_n > 2^n s_{mn} from some n0 on, for the least m <= m_max
    cond_simple3: s_{n+j} <= j s_{2n} from some n0 on, for the least j <= j_max

    For the eventual conditions, the reported parameter is the least one
    whose threshold n0 lies within the first half of the horizon.
    """
    if cond == "cond_1sn":
        for n in range(1, N + 1):
            c = compare_terms(s, n, s, n + 1, 1, Value.pow2(2 * n), ctx)
            if c in (LESS, UNKNOWN):
                st = FAILS if c == LESS else UNKNOWN
                return Verdict(st, cond, n, False, {"index": n})
        return Verdict(HOLDS, cond, N, False, {"n0": 1, "horizon": N})

    if cond == "cond_3sn":
        params = range(2, m_max + 1)

        def pred(m):
            return lambda n: compare_terms(s, m * n, s, n, Value.pow2(n), 1, ctx)
        strict, name = True, "m"
    elif cond == "cond_simple3":
        params = range(1, j_max + 1)

        def pred(j):
            return lambda n: compare_terms(s, n + j, s, 2 * n, 1, j, ctx)
        strict, name = False, "j"
    else:
        raise ValueError(f"unknown condition {cond!r}")

    tried = []
    for m in params:
        f = pred(m)
        last_bad = 0
        for n in range(N, 0, -1):
            c = f(n)
            ok = c == LESS or (not strict and c == EQUAL)
            if not ok:
                last_bad = n
                break
        n0 = last_bad + 1
        tried.append({name: m, "n0": n0 if n0 <= N else None})
        if n0 <= max(1, N // 2):
            return Verdict(HOLDS, cond, N, False, {name: m, "n0": n0, "horizon": N, "tried": tried})
    return Verdict(FAILS, cond, N, False, {"tried": tried, "horizon": N})


# ----------------------------------------------------------------------
# index interleaving
# ----------------------------------------------------------------------

def partition_encode(k: int, i: int) -> int:
    """2^k (2i+1): the k-th block of the partition of the positive integers."""
    if k < 0 or i < 0:
        raise ValueError("k and i must be nonnegative")
    return (2 * i + 1) << k


def partition_decode(n: int) -> tuple[int, int]:
    if n < 1:
        raise ValueError("n must be a positive integer")
    k = (n & -n).bit_length() - 1
    return k, ((n >> k) - 1) // 2


def partition_codec(direction: str, *args):
    if direction == "encode":
        return partition_encode(*args)
    if direction == "decode":
        return partition_decode(*args)
    raise ValueError(f"unknown direction {direction!r}")


@dataclass
class InterleaveResult:
    cover: FineCover
    index_map: dict
    verdict: Verdict
    multiplicity: int | None = None
    ledger: dict = field(default_factory=dict)


def interleave_covers(families: dict, s: Seq, mode: str = "ideal_union", target=None,
                      ctx: NumCtx = DEFAULT_CTX) -> InterleaveResult:
    """Merge families k -> {i: element} (i >= 1), each fine for the 2^(k+2)-fold
    multiplicative shift of s, into one s-fine cover indexed by 2^k (2i+1).

    In ``large_cover`` mode every family is expected to cover ``target`` (a
    list of intervals); the multiplicity of the merged cover is reported.
    """
    if mode not in ("ideal_union", "large_cover"):
        raise ValueError(f"unknown mode {mode!r}")
    for k, fam in families.items():
        v = check_fine(FineCover(dict(fam)), s, ("mult", 2 ** (k + 2)), ctx)
        if not v.holds:
            raise CertificateError(f"family {k} is not fine for its shift",
                                   {"family": k, **v.witness})
    elements, index_map = {}, {}
    for k, fam in sorted(families.items()):
        for i, el in sorted(fam.items()):
            if i < 1:
                raise CertificateError("family members are indexed from 1", {"family": k, "member": i})
            n = partition_encode(k, i)
            elements[n] = el
            index_map[n] = (k, i)
    cover = FineCover(elements, s)
    verdict = check_fine(cover, s, ctx=ctx)
    res = InterleaveResult(cover, index_map, verdict)
    if mode == "large_cover":
        counts = []
        for a, b in (target or []):
            a, b = Value.of(a), Value.of(b)
            counts.append(sum(
                any(isinstance(e, tuple) and Value.of(e[0]) <= a and b <= Value.of(e[1]) for e in fam.values())
                for fam in families.values()))
        res.multiplicity = min(counts) if counts else len(families)
    return res


# ----------------------------------------------------------------------
# Ash transforms
# ----------------------------------------------------------------------

def _exact_terms_and_tails(c: Seq, N: int):
    """Exact c_n and r_n = sum_{i>=n} c_i for n <= N+1, or None."""
    gf = c.geometric_form()
    if gf is not None:
        coef, rho = gf
        terms, t = [], coef
        for _ in range(N + 1):
            t = t * rho
            terms.append(t)
        inv = 1 / (1 - rho)
        tails = [t * inv for t in terms]
        return terms, tails, f"geometric closed form, ratio {rho}"
    if c.kind == "table" and c.tail_ratio is not None:
        L = len(c.params)
        M = max(N + 1, L)
        terms = [c.at(n) for n in range(1, M + 1)]
        rho = c.tail_ratio
        tails = [None] * M
        acc = terms[-1] * rho / (1 - rho)
        for i in range(M - 1, -1, -1):
            acc = acc + terms[i]
            tails[i] = acc
        return terms[:N + 1], tails[:N + 1], f"declared geometric tail, ratio {rho}"
    return None


def ash_transform(c: Seq, mode: str = "summable", N: int = 1000,
                  ctx: NumCtx = DEFAULT_CTX) -> tuple[Seq, Verdict]:
    """Return (c', certificate).

    summable: c' strictly decreasing, summable, with c_n / c'_n -> 0.
    divergent: c' strictly decreasing, not summable, with c'_n / c_n -> 0,
    built from the auxiliary d_n = c_n / S_n (partial sums S_n).
    """
    if N < 10:
        raise ValueError("depth must be at least 10")
    lp = lp_test(c, 1, min(N, 256), ctx=ctx)
    if mode == "summable":
        if lp.status == FAILS:
            raise CertificateError("summable mode needs a summable input", lp.witness)
        data = _exact_terms_and_tails(c, N)
        if data is None:
            raise CertificateError("no exact tail available; declare a geometric tail model",
                                   {"seq": c.describe()})
        terms, tails, tail_note = data
        out, hats = [], []
        best, best_j = None, 0
        for n in range(1, N + 1):
            D = terms[n - 1] ** 2 / tails[n - 1]  # d_n squared
            if best is None or D <= best:
                best, best_j = D, n
            hats.append(best_j)
            out.append(sqrt_floor_grid(best, -(n + 8)) + Value.pow2(-n))
        for n in range(1, N):
            if not out[n] < out[n - 1]:
                raise AssertionError(f"output not strictly decreasing at {n}")
        total = Value(0)
        for v in out:
            total = total + v
        r1_sqrt_hi = sqrt_floor_grid(tails[0], -64) + Value.pow2(-64)
        bound = 2 * r1_sqrt_hi + 1
        ratio = lambda n: terms[n - 1] / out[n - 1]
        m = max(1, N // 10)
        wit = {
            "tail": tail_note,
            "partial_sum": total,
            "bound": bound,
            "bounded": total <= bound,
            "ratio_at_N": ratio(N),
            "ratio_at_N_over_10": ratio(m),
            "ratio_trend_down": ratio(N) < ratio(m),
            "nhat_head": hats[:16],
            "first_terms": out[:4],
        }
        ok = wit["bounded"] and wit["ratio_trend_down"]
        cp = table(out, label=f"ash_summable({c.describe()},{N})")
        return cp, Verdict(HOLDS if ok else FAILS, "ash summable", N, False, wit)

    if mode == "divergent":
        if lp.status == HOLDS:
            raise CertificateError("divergent mode needs a non-summable input", lp.witness)
        S = Ledger(bits=128, exact_bits=1 << 14)
        d = []
        cs = []
        for n in range(1, N + 1):
            x = c.at(n, ctx)
            cs.append(x)
            S.add(x)
            d.append((hi(x) / S.lo).round_up(96))
        cpp = [None] * N
        run = Value(0)
        for i in range(N - 1, -1, -1):
            run = max(run, d[i])
            cpp[i] = run
        out = [(1 + Value.pow2(-(n + 1))) * cpp[n] for n in range(N)]
        dsum = Ledger()
        for v in d:
            dsum.add(v)
        ratio = lambda n: out[n - 1] / lo(cs[n - 1])
        m = max(1, N // 10)
        wit = {
            "auxiliary": "d_n = c_n / S_n (Abel-Dini)",
            "input_partial_sum": S.value(),
            "aux_partial_sum": dsum.value(),
            "output_partial_sum_lower": dsum.lo,
            "ratio_at_N": ratio(N),
            "ratio_at_N_over_10": ratio(m),
            "ratio_trend_down": ratio(N) < ratio(m),
            "first_terms": out[:4],
        }
        for n in range(1, N):
            if not out[n] < out[n - 1]:
                raise AssertionError(f"output not strictly decreasing at {n}")
        cp = table(out, label=f"ash_divergent({c.describe()},{N})")
        return cp, Verdict(HOLDS if wit["ratio_trend_down"] else FAILS, "ash divergent", N, False, wit)
    raise ValueError(f"unknown mode {mode!r}")


def fraction_of(x) -> Fraction:
    return Value.of(x).to_fraction()
