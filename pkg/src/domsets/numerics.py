"""Exact scalars and directed enclosures.

Every scalar is a :class:`Value`, stored as ``num/den * 2**exp`` with ``num``
and ``den`` odd and coprime.  Keeping the binary exponent separate means a
number like ``2**-(2**4000)`` costs a few hundred bytes instead of a
gigabyte.  A Value with ``den == 1`` is the *dyadic* variant, anything else is
the *rational* variant.

Transcendental results (logarithms, real powers) come back as
:class:`IntervalVal` enclosures whose endpoints are exact Values.  The
enclosures are produced with mpmath's interval context, which rounds outward.

:class:`DyadicSum` is a sparse sum of dyadic blocks used where exact interval
endpoints combine terms whose exponents differ by astronomically many bits.
"""

from __future__ import annotations

import math
import re
from contextlib import contextmanager
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import gmpy2
from mpmath import iv

LESS, EQUAL, GREATER, UNKNOWN = "less", "equal", "greater", "unknown"

# refuse to materialise shifts wider than this many bits
SHIFT_LIMIT = 1 << 26


def _tz(n: int) -> int:
    """Number of trailing zero bits of a nonzero integer."""
    return (n & -n).bit_length() - 1


def _log2_int(n: int) -> float:
    cut = max(0, n.bit_length() - 60)
    return math.log2(n >> cut) + cut


class Value:
    """Exact number ``num/den * 2**exp`` in canonical form."""

    __slots__ = ("num", "den", "exp")

    def __init__(self, num: int = 0, den: int = 1, exp: int = 0):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        if num == 0:
            self.num, self.den, self.exp = 0, 1, 0
            return
        t = _tz(num)
        if t:
            num >>= t
            exp += t
        t = _tz(den)
        if t:
            den >>= t
            exp -= t
        if den != 1:
            if den.bit_length() > 512:
                # gmpy2 is much faster than math.gcd on large operands
                g = int(gmpy2.gcd(num, den))
            else:
                g = math.gcd(num, den)
            if g != 1:
                num //= g
                den //= g
        self.num, self.den, self.exp = num, den, exp

    # -- construction -------------------------------------------------
    @classmethod
    def of(cls, x) -> "Value":
        if isinstance(x, Value):
            return x
        if isinstance(x, bool):
            return cls(int(x))
        if isinstance(x, int):
            return cls(x)
        if isinstance(x, Fraction):
            return cls(x.numerator, x.denominator)
        if isinstance(x, str):
            return parse_value(x)
        if isinstance(x, float):
            return cls.of(Fraction(x))
        raise TypeError(f"cannot make a Value from {type(x).__name__}")

    @classmethod
    def pow2(cls, e: int) -> "Value":
        return cls(1, 1, e)

    # -- inspection ---------------------------------------------------
    @property
    def variant(self) -> str:
        return "dyadic" if self.den == 1 else "rational"

    @property
    def is_dyadic(self) -> bool:
        return self.den == 1

    def sign(self) -> int:
        return (self.num > 0) - (self.num < 0)

    def is_zero(self) -> bool:
        return self.num == 0

    def is_pow2(self) -> bool:
        """True when the value is exactly ``2**k``."""
        return self.num == 1 and self.den == 1

    def magnitude(self) -> int:
        """L with ``2**(L-1) < |x| < 2**(L+1)``; only meaningful for x != 0."""
        return self.exp + abs(self.num).bit_length() - self.den.bit_length()

    def to_fraction(self) -> Fraction:
        if abs(self.exp) > SHIFT_LIMIT:
            raise OverflowError("binary exponent too large to expand")
        if self.exp >= 0:
            return Fraction(self.num << self.exp, self.den)
        return Fraction(self.num, self.den << -self.exp)

    @property
    def numerator(self) -> int:
        return self.to_fraction().numerator

    @property
    def denominator(self) -> int:
        return self.to_fraction().denominator

    def __float__(self) -> float:
        if self.num == 0:
            return 0.0
        m = self.magnitude()
        if m > 1100:
            return math.copysign(math.inf, self.num)
        if m < -1100:
            return math.copysign(0.0, self.num)
        return float(self.to_fraction())

    def log2_approx(self) -> float:
        """Approximate log2|x| that never overflows."""
        if self.num == 0:
            return -math.inf
        return self.exp + _log2_int(abs(self.num)) - _log2_int(self.den)

    def floor(self) -> int:
        if self.exp >= 0:
            if self.exp > SHIFT_LIMIT:
                raise OverflowError("binary exponent too large to expand")
            return (self.num << self.exp) // self.den
        if -self.exp > SHIFT_LIMIT:
            # |x| < 1 for any sane mantissa
            if self.magnitude() < 0:
                return 0 if self.num > 0 else -1
            raise OverflowError("binary exponent too large to expand")
        return self.num // (self.den << -self.exp)

    def ceil(self) -> int:
        return -((-self).floor())

    # -- arithmetic ---------------------------------------------------
    def __neg__(self) -> "Value":
        v = Value.__new__(Value)
        v.num, v.den, v.exp = -self.num, self.den, self.exp
        return v

    def __abs__(self) -> "Value":
        return self if self.num >= 0 else -self

    def __add__(self, other):
        if isinstance(other, IntervalVal):
            return NotImplemented
        o = Value.of(other)
        if o.num == 0:
            return self
        if self.num == 0:
            return o
        e = min(self.exp, o.exp)
        s1, s2 = self.exp - e, o.exp - e
        if s1 > SHIFT_LIMIT or s2 > SHIFT_LIMIT:
            raise OverflowError("operands differ by too many binary orders; use DyadicSum")
        a = (self.num * o.den) << s1
        b = (o.num * self.den) << s2
        return Value(a + b, self.den * o.den, e)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, IntervalVal):
            return NotImplemented
        return self + (-Value.of(other))

    def __rsub__(self, other):
        return Value.of(other) - self

    def __mul__(self, other):
        if isinstance(other, IntervalVal):
            return NotImplemented
        o = Value.of(other)
        return Value(self.num * o.num, self.den * o.den, self.exp + o.exp)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, IntervalVal):
            return NotImplemented
        o = Value.of(other)
        if o.num == 0:
            raise ZeroDivisionError("division by zero Value")
        return Value(self.num * o.den, self.den * o.num, self.exp - o.exp)

    def __rtruediv__(self, other):
        return Value.of(other) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k >= 0:
            return Value(self.num ** k, self.den ** k, self.exp * k)
        if self.num == 0:
            raise ZeroDivisionError("zero to a negative power")
        return Value(self.den ** -k, self.num ** -k, self.exp * k)

    def shift(self, k: int) -> "Value":
        """Multiply by ``2**k``."""
        v = Value.__new__(Value)
        v.num, v.den, v.exp = self.num, self.den, (self.exp + k if self.num else 0)
        return v

    # -- comparison ---------------------------------------------------
    def _cmp(self, other) -> int:
        o = Value.of(other)
        sa, sb = self.sign(), o.sign()
        if sa != sb:
            return (sa > sb) - (sa < sb)
        if sa == 0:
            return 0
        la, lb = self.magnitude(), o.magnitude()
        if la + 1 <= lb - 1:
            c = -1
        elif lb + 1 <= la - 1:
            c = 1
        else:
            e = min(self.exp, o.exp)
            a = (abs(self.num) * o.den) << (self.exp - e)
            b = (abs(o.num) * self.den) << (o.exp - e)
            c = (a > b) - (a < b)
        return c if sa > 0 else -c

    def _coerce_ok(self, other) -> bool:
        return isinstance(other, (Value, int, Fraction))

    def __eq__(self, other):
        if not self._coerce_ok(other):
            return NotImplemented
        o = Value.of(other)
        return self.num == o.num and self.den == o.den and self.exp == o.exp

    def __lt__(self, other):
        if not self._coerce_ok(other):
            return NotImplemented
        return self._cmp(other) < 0

    def __le__(self, other):
        if not self._coerce_ok(other):
            return NotImplemented
        return self._cmp(other) <= 0

    def __gt__(self, other):
        if not self._coerce_ok(other):
            return NotImplemented
        return self._cmp(other) > 0

    def __ge__(self, other):
        if not self._coerce_ok(other):
            return NotImplemented
        return self._cmp(other) >= 0

    def __hash__(self):
        return hash((self.num, self.den, self.exp))

    # -- rounding -----------------------------------------------------
    def round_down(self, bits: int) -> "Value":
        """Largest dyadic with ``bits`` significant bits that is <= self."""
        if self.num == 0 or (self.den == 1 and abs(self.num).bit_length() <= bits):
            return self
        if self.num < 0:
            return -((-self).round_up(bits))
        t = bits - (self.magnitude() - self.exp)
        if t >= 0:
            q = (self.num << t) // self.den
        else:
            q = self.num // (self.den << -t)
        return Value(q, 1, self.exp - t)

    def round_up(self, bits: int) -> "Value":
        if self.num == 0 or (self.den == 1 and abs(self.num).bit_length() <= bits):
            return self
        if self.num < 0:
            return -((-self).round_down(bits))
        t = bits - (self.magnitude() - self.exp)
        if t >= 0:
            q = -((-(self.num << t)) // self.den)
        else:
            q = -((-self.num) // (self.den << -t))
        return Value(q, 1, self.exp - t)

    # -- text ---------------------------------------------------------
    def __str__(self) -> str:
        return format_value(self)

    def __repr__(self) -> str:
        return f"Value({format_value(self)})"


def format_value(v: Value) -> str:
    """Render in the value grammar (``p/q``, ``m*2^e``, ``2^-K``)."""
    if v.num == 0:
        return "0"
    if v.den == 1:
        if 0 <= v.exp <= 64:
            return str(v.num << v.exp)
        if -64 <= v.exp < 0:
            return f"{v.num}/{1 << -v.exp}"
        if v.num == 1:
            return f"2^{v.exp}"
        if v.num == -1:
            return f"-2^{v.exp}"
        return f"{v.num}*2^{v.exp}"
    if abs(v.exp) <= 64:
        f = v.to_fraction()
        return f"{f.numerator}/{f.denominator}"
    return f"{v.num}/{v.den}*2^{v.exp}"


_VALUE_RE = re.compile(
    r"^\s*(?P<sign>-)?\s*(?:(?P<p>\d+)(?:\s*/\s*(?P<q>\d+))?(?:\s*\.\s*(?P<frac>\d+))?)?"
    r"\s*(?P<star>\*)?\s*(?:2\s*\^\s*(?P<e>[-+]?\d+))?\s*$"
)


def parse_value(text: str) -> Value:
    """Parse ``p/q``, ``m*2^e``, ``2^-K``, ``p/q*2^e``, integers and decimals."""
    s = text.strip()
    m = _VALUE_RE.match(s)
    if not m or not s:
        raise ValueError(f"unparseable value {text!r}")
    p, q, frac, star, e = m.group("p"), m.group("q"), m.group("frac"), m.group("star"), m.group("e")
    if p is None and e is None:
        raise ValueError(f"unparseable value {text!r}")
    if p is not None and e is not None and not star:
        # "12^3" style is not part of the grammar
        raise ValueError(f"unparseable value {text!r} at position {s.find('^')}")
    if star and (p is None or e is None):
        raise ValueError(f"unparseable value {text!r}")
    if frac is not None and q is not None:
        raise ValueError(f"unparseable value {text!r}")
    if p is None:
        base = Value(1)
    elif frac is not None:
        base = Value.of(Fraction(f"{p}.{frac}"))
    else:
        base = Value(int(p), int(q) if q is not None else 1)
    if e is not None:
        base = base.shift(int(e))
    return -base if m.group("sign") else base


# ----------------------------------------------------------------------
# enclosures
# ----------------------------------------------------------------------

class IntervalVal:
    """Closed enclosure ``[lo, hi]`` with exact Value endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Value.of(lo)
        hi = lo if hi is None else Value.of(hi)
        if lo > hi:
            raise ValueError(f"empty enclosure [{lo}, {hi}]")
        self.lo, self.hi = lo, hi

    @classmethod
    def of(cls, x) -> "IntervalVal":
        if isinstance(x, IntervalVal):
            return x
        v = Value.of(x)
        return cls(v, v)

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def width(self) -> Value:
        return self.hi - self.lo

    def mid(self) -> Value:
        return (self.lo + self.hi).shift(-1)

    def contains(self, x) -> bool:
        if isinstance(x, IntervalVal):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= Value.of(x) <= self.hi

    def __neg__(self):
        return IntervalVal(-self.hi, -self.lo)

    def __add__(self, other):
        o = IntervalVal.of(other)
        return IntervalVal(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other):
        o = IntervalVal.of(other)
        return IntervalVal(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return IntervalVal.of(other) - self

    def __mul__(self, other):
        o = IntervalVal.of(other)
        if self.lo.sign() >= 0 and o.lo.sign() >= 0:
            return IntervalVal(self.lo * o.lo, self.hi * o.hi)
        c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        return IntervalVal(min(c), max(c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = IntervalVal.of(other)
        if o.lo.sign() <= 0 <= o.hi.sign():
            raise ZeroDivisionError("enclosure of divisor contains zero")
        return self * IntervalVal(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        return IntervalVal.of(other) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** -k)
        if self.lo.sign() >= 0:
            return IntervalVal(self.lo ** k, self.hi ** k)
        c = [self.lo ** k, self.hi ** k]
        lo = Value(0) if (k % 2 == 0 and self.lo.sign() < 0 < self.hi.sign()) else min(c)
        return IntervalVal(lo, max(c))

    def round_out(self, bits: int) -> "IntervalVal":
        return IntervalVal(self.lo.round_down(bits), self.hi.round_up(bits))

    def __eq__(self, other):
        if isinstance(other, IntervalVal):
            return self.lo == other.lo and self.hi == other.hi
        return NotImplemented

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __str__(self):
        if self.is_exact():
            return format_value(self.lo)
        return f"[{format_value(self.lo)},{format_value(self.hi)}]"

    def __repr__(self):
        return f"IntervalVal({self})"

    def __float__(self):
        return float(self.mid())


Num = Union[Value, IntervalVal]


@dataclass(frozen=True)
class NumCtx:
    """Enclosure width target and refinement budget."""

    precision_bits: int = 64
    max_refine: int = 8

    def __post_init__(self):
        if self.precision_bits < 16:
            raise ValueError("precision_bits must be at least 16")
        if self.max_refine < 1:
            raise ValueError("max_refine must be positive")

    def finer(self, factor: int = 2) -> "NumCtx":
        return NumCtx(self.precision_bits * factor, self.max_refine)


DEFAULT_CTX = NumCtx()


def lo(x) -> Value:
    return x.lo if isinstance(x, IntervalVal) else Value.of(x)


def hi(x) -> Value:
    return x.hi if isinstance(x, IntervalVal) else Value.of(x)


def as_interval(x) -> IntervalVal:
    return IntervalVal.of(x)


def simplify(x) -> Num:
    """Collapse a degenerate enclosure to its exact Value."""
    if isinstance(x, IntervalVal) and x.is_exact():
        return x.lo
    return x


def is_exact(x) -> bool:
    return not isinstance(x, IntervalVal) or x.is_exact()


def value_cmp(a, b) -> str:
    """Exact order for Values; for enclosures, definite only when disjoint."""
    if not isinstance(a, IntervalVal) and not isinstance(b, IntervalVal):
        c = Value.of(a)._cmp(b)
        return LESS if c < 0 else GREATER if c > 0 else EQUAL
    A, B = IntervalVal.of(a), IntervalVal.of(b)
    if A.hi < B.lo:
        return LESS
    if B.hi < A.lo:
        return GREATER
    if A.is_exact() and B.is_exact():
        return EQUAL
    return UNKNOWN


def definitely_lt(a, b) -> bool:
    return value_cmp(a, b) == LESS


def definitely_le(a, b) -> bool:
    return value_cmp(a, b) in (LESS, EQUAL) or hi(a) <= lo(b)


def num_min(xs: Iterable) -> Num:
    xs = list(xs)
    return simplify(IntervalVal(min(lo(x) for x in xs), min(hi(x) for x in xs)))


def num_max(xs: Iterable) -> Num:
    xs = list(xs)
    return simplify(IntervalVal(max(lo(x) for x in xs), max(hi(x) for x in xs)))


def floor_num(x) -> int | None:
    """Floor when it is determined by the enclosure, else None."""
    a, b = lo(x).floor(), hi(x).floor()
    return a if a == b else None


# ----------------------------------------------------------------------
# mpmath bridge
# ----------------------------------------------------------------------

@contextmanager
def _ivprec(bits: int):
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _to_iv(v: Value):
    x = iv.mpf(v.num)
    if v.den != 1:
        x = x / iv.mpf(v.den)
    if v.exp:
        x = x * iv.mpf(2) ** v.exp
    return x


def _raw_to_value(t) -> Value:
    sign, man, exp, _bc = t
    if not man and exp:
        raise ArithmeticError("non-finite interval endpoint")
    return Value(-int(man) if sign else int(man), 1, int(exp))


def _from_iv(x) -> IntervalVal:
    a, b = x._mpi_
    return IntervalVal(_raw_to_value(a), _raw_to_value(b))


def _snap(enc: IntervalVal, grid_exp: int) -> IntervalVal:
    """Round endpoints outward onto the grid ``2**grid_exp``."""
    return IntervalVal(Value(lo(enc).shift(-grid_exp).floor(), 1, grid_exp),
                       Value(-((-hi(enc)).shift(-grid_exp).floor()), 1, grid_exp))


def eval_log2(x, ctx: NumCtx = DEFAULT_CTX) -> Num:
    """log2 of a positive Value: exact for powers of two, else an enclosure
    of absolute width at most ``2**-precision_bits``."""
    if isinstance(x, IntervalVal):
        if x.lo.sign() <= 0:
            raise ValueError("log2 of a nonpositive enclosure")
        if x.is_exact():
            return eval_log2(x.lo, ctx)
        return simplify(IntervalVal(lo(eval_log2(x.lo, ctx)), hi(eval_log2(x.hi, ctx))))
    x = Value.of(x)
    if x.sign() <= 0:
        raise ValueError("log2 of a nonpositive value")
    if x.is_pow2():
        return Value(x.exp)
    target = ctx.precision_bits
    size = max(abs(x.num).bit_length(), x.den.bit_length())
    prec = target + size.bit_length() + 24
    grid = -(target + 2)
    for _ in range(ctx.max_refine + 1):
        with _ivprec(prec):
            y = iv.log(iv.mpf(x.num) / iv.mpf(x.den)) / iv.log(2)
            enc = _snap(_from_iv(y), grid)
        if enc.width() <= Value.pow2(-target):
            base = Value(x.exp)
            return IntervalVal(enc.lo + base, enc.hi + base)
        prec *= 2
    raise ArithmeticError("log2 enclosure did not reach the requested width")


def eval_ln(x, ctx: NumCtx = DEFAULT_CTX) -> Num:
    """Natural log enclosure (exactly 0 at 1)."""
    l2 = eval_log2(x, ctx)
    if is_exact(l2) and lo(l2).is_zero():
        return Value(0)
    return IntervalVal.of(l2) * ln2_enclosure(ctx)


def ln2_enclosure(ctx: NumCtx = DEFAULT_CTX) -> IntervalVal:
    with _ivprec(ctx.precision_bits + 24):
        return _from_iv(iv.log(2))


def _exp2_frac(f: Value, ctx: NumCtx, upper: bool) -> Value:
    """One-sided bound for 2**f with 0 <= f < 1."""
    enc = _exp2_frac_enc(f, ctx.precision_bits)
    return enc.hi if upper else enc.lo


@lru_cache(maxsize=4096)
def _exp2_frac_enc(f: Value, bits: int) -> IntervalVal:
    # fractional exponents repeat a lot (x**q on dyadic grids), hence the cache
    with _ivprec(bits + 24):
        enc = _from_iv(iv.mpf(2) ** _to_iv(f))
    return enc.round_out(bits + 8)


def exp2(y, ctx: NumCtx = DEFAULT_CTX) -> Num:
    """Enclosure of ``2**y``; exact when y is an integer Value."""
    if isinstance(y, IntervalVal):
        if y.is_exact():
            return exp2(y.lo, ctx)
        return IntervalVal(_exp2_side(y.lo, ctx, False), _exp2_side(y.hi, ctx, True))
    y = Value.of(y)
    k = y.floor()
    f = y - k
    if f.is_zero():
        return Value.pow2(k)
    return IntervalVal(_exp2_frac(f, ctx, False).shift(k), _exp2_frac(f, ctx, True).shift(k))


def _exp2_side(y: Value, ctx: NumCtx, upper: bool) -> Value:
    k = y.floor()
    f = y - k
    if f.is_zero():
        return Value.pow2(k)
    return _exp2_frac(f, ctx, upper).shift(k)


def _iroot_exact(n: int, k: int) -> int | None:
    if n < 0:
        return None
    r, exact = gmpy2.iroot(n, k)
    return int(r) if exact else None


EXACT_POWER_BITS = 1 << 20


def pow_rational(x, q, ctx: NumCtx = DEFAULT_CTX) -> Num:
    """``x**q`` for positive x and rational q; exact when the root is exact."""
    q = Value.of(q)
    if isinstance(x, IntervalVal):
        if x.is_exact():
            return pow_rational(x.lo, q, ctx)
        a, b = pow_rational(x.lo, q, ctx), pow_rational(x.hi, q, ctx)
        if q.sign() >= 0:
            return IntervalVal(lo(a), hi(b))
        return IntervalVal(lo(b), hi(a))
    x = Value.of(x)
    if x.sign() <= 0:
        raise ValueError("real power of a nonpositive value")
    if q.is_zero():
        return Value(1)
    fq = q.to_fraction()
    a, b = fq.numerator, fq.denominator
    size = max(abs(x.num).bit_length(), x.den.bit_length()) * abs(a)
    if size <= EXACT_POWER_BITS and x.exp % b == 0:
        if b == 1:
            return x ** a
        rn, rd = _iroot_exact(x.num, b), _iroot_exact(x.den, b)
        if rn is not None and rd is not None:
            return Value(rn, rd, x.exp // b) ** a
    l2 = eval_log2(x, ctx)
    return exp2(IntervalVal.of(l2) * q if not is_exact(l2) else lo(l2) * q, ctx)


def sqrt_floor_grid(x: Value, grid_exp: int) -> Value:
    """Largest multiple of ``2**grid_exp`` that is <= sqrt(x)."""
    if x.sign() < 0:
        raise ValueError("sqrt of a negative value")
    scaled = x.shift(-2 * grid_exp).floor()
    return Value(math.isqrt(scaled), 1, grid_exp)


# ----------------------------------------------------------------------
# sparse dyadic sums
# ----------------------------------------------------------------------

class DyadicSum:
    """Exact sum of dyadic blocks ``m * 2**e`` with disjoint bit ranges.

    Blocks are kept in descending exponent order.  Because the ranges do not
    overlap, the sign of the whole sum is the sign of its leading block, so
    comparisons never expand the number.
    """

    __slots__ = ("blocks",)

    def __init__(self, blocks=()):
        self.blocks = _normalize_blocks(blocks)

    @classmethod
    def of(cls, x) -> "DyadicSum":
        if isinstance(x, DyadicSum):
            return x
        v = Value.of(x)
        if not v.is_dyadic:
            raise ValueError(f"{v} is not dyadic")
        return cls([(v.exp, v.num)] if v.num else [])

    def __add__(self, other):
        o = DyadicSum.of(other)
        return DyadicSum(list(self.blocks) + list(o.blocks))

    __radd__ = __add__

    def __neg__(self):
        s = DyadicSum.__new__(DyadicSum)
        s.blocks = tuple((e, -m) for e, m in self.blocks)
        return s

    def __sub__(self, other):
        return self + (-DyadicSum.of(other))

    def __rsub__(self, other):
        return DyadicSum.of(other) - self

    def scale(self, v) -> "DyadicSum":
        """Multiply by a dyadic Value (or int)."""
        v = Value.of(v)
        if not v.is_dyadic:
            raise ValueError("DyadicSum can only be scaled by dyadic values")
        return DyadicSum([(e + v.exp, m * v.num) for e, m in self.blocks])

    def half(self) -> "DyadicSum":
        return self.scale(Value.pow2(-1))

    def sign(self) -> int:
        if not self.blocks:
            return 0
        return 1 if self.blocks[0][1] > 0 else -1

    def _cmp(self, other) -> int:
        other = DyadicSum.of(other)
        a, b = self.blocks, other.blocks
        i = 0
        while i < len(a) and i < len(b) and a[i] == b[i]:
            i += 1
        # a common leading run of blocks cancels; the tails stay normalized
        x, y = DyadicSum._raw(a[i:]), DyadicSum._raw(b[i:])
        quick = _leading_cmp(x, y)
        if quick is not None:
            return quick
        return (x - y).sign()

    @classmethod
    def _raw(cls, blocks: tuple) -> "DyadicSum":
        s = cls.__new__(cls)
        s.blocks = blocks
        return s

    def __eq__(self, other):
        if isinstance(other, (DyadicSum, Value, int)):
            return self._cmp(other) == 0
        return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        return hash(self.blocks)

    def leading(self) -> Value:
        """Leading block as a Value (an approximation of the whole)."""
        if not self.blocks:
            return Value(0)
        e, m = self.blocks[0]
        return Value(m, 1, e)

    def to_value(self) -> Value:
        total = Value(0)
        for e, m in self.blocks:
            total = total + Value(m, 1, e)
        return total

    def terms(self) -> list[str]:
        return [format_value(Value(m, 1, e)) for e, m in self.blocks]

    def __str__(self):
        if not self.blocks:
            return "0"
        return " + ".join(self.terms()).replace("+ -", "- ")

    def __repr__(self):
        return f"DyadicSum({self})"


def _scaled_cmp(a: int, ea: int, b: int, eb: int) -> int:
    """Sign of a*2^ea - b*2^eb for a, b >= 0."""
    if a == 0 or b == 0:
        return (a > 0) - (b > 0)
    ha, hb = ea + a.bit_length(), eb + b.bit_length()
    if ha != hb:
        return 1 if ha > hb else -1
    base = min(ea, eb)
    x, y = a << (ea - base), b << (eb - base)
    return (x > y) - (x < y)


def _leading_cmp(x: "DyadicSum", y: "DyadicSum"):
    """Decide x vs y from the leading blocks alone, or None.

    A normalized sum with leading block m*2^e lies strictly between
    (m-1)*2^e and (m+1)*2^e, because the lower blocks occupy bits below e.
    """
    sx, sy = x.sign(), y.sign()
    if sx != sy or sx == 0:
        return (sx > sy) - (sx < sy)
    (ex, mx), (ey, my) = x.blocks[0], y.blocks[0]
    if sx < 0:
        # -X vs -Y orders like Y vs X
        (ex, mx), (ey, my) = (ey, -my), (ex, -mx)
    if _scaled_cmp(mx - 1, ex, my + 1, ey) >= 0:
        return 1
    if _scaled_cmp(my - 1, ey, mx + 1, ex) >= 0:
        return -1
    return None


def _normalize_blocks(blocks) -> tuple:
    items = sorted(((e, m) for e, m in blocks if m), key=lambda t: t[0])
    out: list[list[int]] = []
    for e, m in items:
        t = _tz(m)
        m >>= t
        e += t
        while out and out[-1][0] + abs(out[-1][1]).bit_length() > e:
            pe, pm = out.pop()
            base = min(e, pe)
            m = (pm << (pe - base)) + (m << (e - base))
            e = base
            if m == 0:
                break
            t = _tz(m)
            m >>= t
            e += t
        if m:
            out.append([e, m])
    return tuple((e, m) for e, m in reversed(out))


def to_sum(x) -> DyadicSum:
    return DyadicSum.of(x)
