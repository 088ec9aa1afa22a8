"""Fine covers and their re-check.

A cover element is either a closed interval ``(lo, hi)`` with exact
endpoints (Values, or DyadicSums for very deep constructions) or a bare
diameter when only the size matters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .numerics import (EQUAL, GREATER, LESS, UNKNOWN, DyadicSum, IntervalVal, Value, hi, is_exact, lo,
                       to_sum, value_cmp)
from .verdict import FAILS, HOLDS, Verdict

NO_SHIFT = ("none", 0)


def _point(x):
    return x if isinstance(x, DyadicSum) else Value.of(x)


def diam(el):
    if isinstance(el, tuple):
        a, b = el
        if isinstance(a, DyadicSum) or isinstance(b, DyadicSum):
            return to_sum(b) - to_sum(a)
        return Value.of(b) - Value.of(a)
    return el if isinstance(el, DyadicSum) else Value.of(el)


def _sum_cmp(x: DyadicSum, y: DyadicSum) -> str:
    c = x._cmp(y)
    return LESS if c < 0 else GREATER if c > 0 else EQUAL


def shifted_index(n: int, shift) -> int:
    kind, k = shift or NO_SHIFT
    if kind == "none":
        return n
    if kind == "mult":
        return k * n
    if kind == "add":
        return n + k
    raise ValueError(f"unknown shift {shift!r}")


def strictly_below(x, s, n: int, ctx=None) -> str:
    """Compare ``x`` with ``s_n``, refining enclosures when needed."""
    from .numerics import DEFAULT_CTX
    ctx = ctx or DEFAULT_CTX
    if isinstance(x, DyadicSum):
        b = s.at(n, ctx)
        if is_exact(b) and lo(b).is_dyadic:
            return _sum_cmp(x, to_sum(lo(b)))
        x = x.to_value()
    for _ in range(ctx.max_refine):
        c = value_cmp(x, s.at(n, ctx))
        if c != UNKNOWN:
            return c
        ctx = ctx.finer()
    return UNKNOWN


@dataclass
class FineCover:
    """Indexed cover ``n -> element`` with the sequence it is meant to fit."""

    elements: dict = field(default_factory=dict)
    seq: object = None
    shift: tuple = NO_SHIFT

    def diameters(self) -> dict:
        return {n: diam(e) for n, e in self.elements.items()}

    def covers_interval(self, a: Value, b: Value) -> int | None:
        """Index of an interval element containing [a, b], if any."""
        for n, e in self.elements.items():
            if isinstance(e, tuple) and _point(e[0]) <= a and b <= _point(e[1]):
                return n
        return None

    def contains_point(self, x) -> list[int]:
        out = []
        for n, e in self.elements.items():
            if isinstance(e, tuple) and _point(e[0]) <= x and x <= _point(e[1]):
                out.append(n)
        return out

    def to_dict(self):
        from .verdict import to_jsonable
        return {
            "elements": {str(n): to_jsonable(list(e) if isinstance(e, tuple) else e)
                         for n, e in sorted(self.elements.items())},
            "shift": list(self.shift),
            "seq": getattr(self.seq, "describe", lambda: None)(),
        }


def check_fine(cover, s=None, shift=None, ctx=None) -> Verdict:
    """Verify ``diam E_n < s_n`` (after the shift) for every index of the cover."""
    if not isinstance(cover, FineCover):
        cover = FineCover(dict(cover), s, shift or NO_SHIFT)
    s = s if s is not None else cover.seq
    shift = shift if shift is not None else cover.shift
    unknown = []
    for n in sorted(cover.elements):
        if n < 1:
            return Verdict(FAILS, "check_fine", witness={"index": n, "reason": "index below 1"})
        m = shifted_index(n, shift)
        d = diam(cover.elements[n])
        c = strictly_below(d, s, m, ctx)
        if c in (GREATER, EQUAL):
            return Verdict(FAILS, "check_fine", depth=len(cover.elements),
                           witness={"index": n, "diam": d, "bound": s.at(m), "shift": list(shift)})
        if c == UNKNOWN:
            unknown.append(n)
    if unknown:
        return Verdict("unknown", "check_fine", depth=len(cover.elements), witness={"unresolved": unknown})
    return Verdict(HOLDS, "check_fine", depth=len(cover.elements), symbolic=True,
                   witness={"indices": len(cover.elements), "shift": list(shift)})


__all__ = ["FineCover", "check_fine", "diam", "shifted_index", "strictly_below",
           "LESS", "IntervalVal", "hi", "lo"]
