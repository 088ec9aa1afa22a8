"""Cantor cubes, symmetric Cantor sets and the binary-sum map onto [0, 1]."""

from __future__ import annotations

from dataclasses import dataclass

from .numerics import (
    DEFAULT_CTX, IntervalVal, NumCtx, Value, eval_log2, hi, is_exact, lo, pow_rational,
    simplify, value_cmp, LESS,
)
from .sequences import CertificateError, Seq
from .verdict import FAILS, HOLDS, UNKNOWN, Verdict

MAX_TREE_DEPTH = 20


@dataclass(frozen=True)
class Word:
    """Binary (or integer) word: an explicit prefix, optionally followed by a
    constant tail repeated forever.  Without a tail only the prefix is known."""

    prefix: tuple = ()
    tail: int | None = None

    @classmethod
    def parse(cls, text: str) -> "Word":
        """'0110' is a finite prefix; '01(1)' means 0111...; '01...' is prefix only."""
        text = text.strip()
        if text.endswith(")") and "(" in text:
            head, rep = text[:-1].split("(")
            return cls(tuple(int(c) for c in head), int(rep))
        return cls(tuple(int(c) for c in text.rstrip(".")))

    def known(self, i: int) -> bool:
        return i < len(self.prefix) or self.tail is not None

    def __getitem__(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        if self.tail is None:
            raise IndexError(f"letter {i} beyond the stored prefix")
        return self.tail

    def take(self, m: int) -> tuple:
        return tuple(self[i] for i in range(m))

    def __str__(self):
        body = "".join(map(str, self.prefix))
        return f"{body}({self.tail})" if self.tail is not None else body + "..."


def meet_length(x: Word, y: Word) -> int | None:
    """|x ∧ y|: the first index where the words differ; None when equal."""
    i = 0
    end = max(len(x.prefix), len(y.prefix))
    while i < end:
        if not (x.known(i) and y.known(i)):
            raise ValueError("words are indistinguishable within the stored prefixes")
        if x[i] != y[i]:
            return i
        i += 1
    if x.tail is not None and y.tail is not None:
        return None if x.tail == y.tail else i
    raise ValueError("words are indistinguishable within the stored prefixes")


@dataclass
class CantorCube:
    """The cube of all words over an alphabet, with d(x, y) = r at |x ∧ y|.

    ``alphabet_size`` None stands for a countable alphabet (metric only).
    """

    alphabet_size: int | None
    radius: Seq

    def describe(self):
        a = "omega" if self.alphabet_size is None else self.alphabet_size
        return f"cube({a},{self.radius.describe()})"

    def to_dict(self):
        return {"set": self.describe()}


def cube_metric(X: CantorCube, x: Word, y: Word, ctx: NumCtx = DEFAULT_CTX):
    k = meet_length(x, y)
    if k is None:
        return Value(0)
    if X.alphabet_size is not None:
        for w in (x, y):
            if any(c < 0 or c >= X.alphabet_size for c in w.prefix[:k + 1]):
                raise ValueError("letter outside the alphabet")
    return X.radius.radius(k, ctx)


class SymCantor:
    """Symmetric Cantor set built to a finite depth with exact endpoints.

    Level k holds the left endpoints of the 2^k intervals I_p (|p| = k) in
    lexicographic order; each has length r_k.
    """

    def __init__(self, ratio: Seq, depth: int, base_left=Value(0), lengths=None, lefts=None):
        self.ratio = ratio
        self.depth = depth
        self.base_left = Value.of(base_left)
        self.lengths = lengths
        self.lefts = lefts

    def describe(self):
        return f"symcantor({self.ratio.describe()},{self.depth})"

    def length(self, k: int) -> Value:
        return self.lengths[k]

    def node(self, path: str):
        """(left, right) of I_p for a binary string p."""
        k = len(path)
        idx = int(path, 2) if path else 0
        a = self.lefts[k][idx]
        return a, a + self.lengths[k]

    def left_formula(self, path: str) -> Value:
        """Closed form a(p) = base + sum over letters 1 at i of (r_i - r_{i+1})."""
        r = self.lengths
        a = self.base_left
        for i, c in enumerate(path):
            if c == "1":
                a = a + (r[i] - r[i + 1])
        return a

    def leaves(self) -> list:
        r = self.lengths[self.depth]
        return [(a, a + r) for a in self.lefts[self.depth]]

    def gap(self, k: int) -> Value:
        """Gap between the two children of a level-k node."""
        return self.lengths[k] - 2 * self.lengths[k + 1]

    def to_dict(self, max_nodes: int = 64):
        nodes = {}
        for k in range(self.depth + 1):
            for i, a in enumerate(self.lefts[k]):
                if len(nodes) >= max_nodes:
                    break
                p = format(i, f"0{k}b") if k else ""
                nodes[p or "root"] = [str(a), str(a + self.lengths[k])]
        return {"set": self.describe(), "lengths": [str(x) for x in self.lengths],
                "nodes": nodes, "node_count": 2 ** (self.depth + 1) - 1}


def sym_build(r: Seq, depth: int, base_left=Value(0), ctx: NumCtx = DEFAULT_CTX) -> SymCantor:
    """Build 𝖢(r) to the given depth; rejects r unless r_{n+1} <= r_n / 2."""
    if depth < 0 or depth > MAX_TREE_DEPTH:
        raise ValueError(f"depth must lie in [0, {MAX_TREE_DEPTH}]")
    lengths = []
    for k in range(depth + 1):
        v = r.radius(k, ctx)
        if not is_exact(v):
            raise CertificateError("symmetric Cantor set needs exact lengths", {"index": k})
        lengths.append(lo(v))
    for k in range(depth):
        if lengths[k + 1] > lengths[k] / 2:
            raise CertificateError("ratio condition r_{n+1} <= r_n/2 fails",
                                   {"index": k + 1, "r_n": lengths[k], "r_next": lengths[k + 1]})
    base = Value.of(base_left)
    lefts = [[base]]
    for k in range(depth):
        step = lengths[k] - lengths[k + 1]
        nxt = []
        for a in lefts[-1]:
            nxt.append(a)
            nxt.append(a + step)
        lefts.append(nxt)
    return SymCantor(r, depth, base, lengths, lefts)


def t_map(x: Word, m: int | None = None) -> IntervalVal | Value:
    """T(x) = sum of x(n) 2^-(n+1); exact for eventually constant words,
    otherwise an enclosure of width 2^-m from the first m letters."""
    s = Value(0)
    L = len(x.prefix)
    for i, c in enumerate(x.prefix if m is None else x.prefix[:m]):
        if c:
            s = s + Value.pow2(-(i + 1))
    if x.tail is not None and (m is None or m >= L):
        return s + (Value.pow2(-L) if x.tail else Value(0))
    k = L if m is None else min(m, L)
    if x.tail is not None:
        for i in range(k, m):
            if x.tail:
                s = s + Value.pow2(-(i + 1))
        k = m
    return IntervalVal(s, s + Value.pow2(-k))


def expansions(v: Value, m: int) -> list[Word]:
    """Binary words w with T(w) = v (one or two), v in [0, 1] dyadic of level <= m,
    or prefix-only words of length m for other v."""
    v = Value.of(v)
    if v.sign() < 0 or v > Value(1):
        raise ValueError("point outside [0, 1]")
    if v == Value(1):
        return [Word((), 1)]
    scaled = v.shift(m)
    k = scaled.floor()
    bits = tuple(int(c) for c in format(k, f"0{m}b")) if m else ()
    if Value(k) == scaled:
        out = [Word(bits, 0)]
        if k > 0:
            prev = tuple(int(c) for c in format(k - 1, f"0{m}b")) if m else ()
            out.append(Word(prev, 1))
        return out
    return [Word(bits)]


@dataclass
class PreimagePiece:
    kind: str          # "cylinder" or "word"
    prefix: tuple
    word: Word | None = None

    def diameter(self) -> Value:
        return Value(0) if self.kind == "word" else Value.pow2(-len(self.prefix))

    def contains(self, w: Word) -> bool:
        if self.kind == "cylinder":
            return all(w.known(i) and w[i] == c for i, c in enumerate(self.prefix))
        if w.tail is None or self.word.tail is None:
            return False
        n = max(len(w.prefix), len(self.word.prefix)) + 1
        return w.take(n) == self.word.take(n) and w.tail == self.word.tail

    def to_dict(self):
        if self.kind == "cylinder":
            return {"cylinder": "".join(map(str, self.prefix)), "diam": str(self.diameter())}
        return {"word": str(self.word), "diam": "0"}


def t_preimage_cover(a, b) -> list[PreimagePiece]:
    """At most three pieces of cube diameter <= b - a covering T^-1([a, b]).

    With 2^-m <= b - a < 2^-(m-1), [a, b] meets at most three level-m dyadic
    intervals; each one met in positive length contributes its cylinder, and a
    bare contact at a level-m seam contributes the single word on that side.
    """
    a, b = Value.of(a), Value.of(b)
    if not (Value(0) <= a <= b <= Value(1)):
        raise ValueError("need 0 <= a <= b <= 1")
    w = b - a
    if w.is_zero():
        return [PreimagePiece("word", (), x) for x in expansions(a, _dyadic_level(a))]
    m = -w.magnitude() - 1
    while Value.pow2(-m) > w:
        m += 1
    while m > 0 and Value.pow2(-(m - 1)) <= w:
        m -= 1
    scale = Value.pow2(m)
    k_lo, k_hi = (a * scale).floor(), (b * scale).ceil() - 1
    pieces = []
    total = 1 << m
    for k in range(max(0, k_lo), min(total - 1, k_hi) + 1):
        bits = tuple(int(c) for c in format(k, f"0{m}b")) if m else ()
        pieces.append(PreimagePiece("cylinder", bits))
    # contact from the left of a at a level-m seam: the word ending in 1s
    if (a * scale) == Value(k_lo) and k_lo > 0:
        bits = tuple(int(c) for c in format(k_lo - 1, f"0{m}b"))
        pieces.insert(0, PreimagePiece("word", bits, Word(bits, 1)))
    # contact from the right of b at a level-m seam
    kb = (b * scale)
    if kb == Value(kb.floor()) and kb.floor() < total:
        bits = tuple(int(c) for c in format(kb.floor(), f"0{m}b"))
        pieces.append(PreimagePiece("word", bits, Word(bits, 0)))
    return pieces


def _dyadic_level(v: Value) -> int:
    if v.is_zero():
        return 0
    if v.den != 1:
        return 64
    return max(0, -v.exp)


def mf_test(r: Seq, p, mode: str = "cs1", N: int = 64, eps_grid=None,
            ctx: NumCtx = DEFAULT_CTX) -> Verdict:
    """Membership of 𝖢(r) in M(p^n) (holds = member).

    cs1: t_n = p^n / (-log2 r_n); members have liminf t_n = 0.
    direct: for each eps in the grid, indices n <= N with r_n < eps^(p^n).
    """
    p = Value.of(p)
    if not p > Value(1):
        raise ValueError("growth base must exceed 1")
    if mode == "cs1":
        ledger = []
        for n in range(1, N + 1):
            L = r.neglog2(n, ctx)
            t = p ** n / (lo(L) if is_exact(L) else IntervalVal.of(L))
            ledger.append(simplify(t) if isinstance(t, IntervalVal) else t)
        sym = _cs1_symbolic(r, p)
        tail = ledger[N // 2:]
        tmin = min(lo(t) for t in tail)
        wit = {"p": p, "ledger_head": ledger[:8], "ledger_last": ledger[-1], "tail_min": tmin}
        if sym is not None:
            wit["closed_form"] = sym[1]
            return Verdict(HOLDS if sym[0] else FAILS, "cs1 closed form", N, True, wit)
        q = max(1, len(tail) // 4)
        falling = max(hi(t) for t in tail[-q:]) < min(lo(t) for t in tail[:q]) / 4
        if tmin > Value(1, 1 << 20) and not falling:
            return Verdict(FAILS, "cs1 ledger", N, False, wit)
        return Verdict(UNKNOWN, "cs1 ledger", N, False, dict(wit, falling=falling))
    if mode == "direct":
        grid = [Value.of(e) for e in (eps_grid or [Value(1, 2), Value(1, 4), Value(1, 16)])]
        per = {}
        all_hit = True
        for e in grid:
            le = -eval_log2(e, ctx)
            hits = []
            for n in range(1, N + 1):
                # r_n < eps^(p^n)  iff  -log2 r_n > p^n * log2(1/eps)
                c = value_cmp(r.neglog2(n, ctx), p ** n * (lo(le) if is_exact(le) else IntervalVal.of(le)))
                if c == "greater":
                    hits.append(n)
            tail_hits = [n for n in hits if n > N // 2]
            per[str(e)] = {"hits": len(hits), "tail_hits": len(tail_hits),
                           "last_hit": hits[-1] if hits else None}
            all_hit = all_hit and bool(tail_hits)
        return Verdict(HOLDS if all_hit else FAILS, "direct condition on eps grid", N, False,
                       {"p": p, "per_eps": per})
    raise ValueError(f"unknown mode {mode!r}")


def _cs1_symbolic(r: Seq, p: Value):
    """(member?, description) when -log2 r_n has a recognized closed form."""
    k = r.kind
    if k == "dblexp":
        # -log2 r_n = 2^n log2(1/eps): t_n = (p/2)^n / log2(1/eps)
        return (p < Value(2), "t_n = (p/2)^n / log2(1/eps)")
    if k == "geometric":
        return (False, "t_n = p^n / (n log2(1/lambda))")
    if k == "pow2exp":
        return (False, "t_n = p^n / n^q")
    if k == "harmonic_power":
        return (False, "t_n = p^n / (q log2(n+1))")
    return None
