"""Parsers for the textual specs of sequences, gauges and sets.

    seq   := geom(v) | harm(v) | pow2exp(v) | dblexp(v) | factexp(v) | logfam(v)
           | table:PATH | mshift(k,seq) | ashift(k,seq) | scale(v,seq) | power(v,seq)
    gauge := pow(v) | reclog() | recloglog() | pwl:PATH | tau(v,gauge)
           | fromseq(seq) | scale(v,gauge) | gpow(v,gauge)
    set   := symcantor(seq,depth) | cube(a,seq)

Table files hold one value per line (s_1, s_2, ...); blank lines and ``#``
comments are skipped, except the directives ``# zero V`` (the index-0 term)
and ``# tail V`` (geometric continuation ratio).  pwl files hold ``r value``
pairs with strictly decreasing r.
"""

from __future__ import annotations

from pathlib import Path

from . import gauges as G
from . import sequences as S
from .numerics import Value, parse_value


class SpecError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}: {text}")
        self.text, self.pos = text, pos


class _Parser:
    def __init__(self, text: str, base_dir: Path):
        self.text = text
        self.pos = 0
        self.base = base_dir

    def error(self, msg, pos=None):
        raise SpecError(msg, self.text, self.pos if pos is None else pos)

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def name(self) -> str:
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        if start == self.pos:
            self.error("expected a name")
        return self.text[start:self.pos]

    def atom(self) -> tuple[str, int]:
        """Raw text up to the next top-level ',' or ')'."""
        self.ws()
        start, depth = self.pos, 0
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c == "(":
                depth += 1
            elif c == ")":
                if depth == 0:
                    break
                depth -= 1
            elif c == "," and depth == 0:
                break
            self.pos += 1
        return self.text[start:self.pos].strip(), start

    def value(self) -> Value:
        raw, at = self.atom()
        try:
            return parse_value(raw)
        except ValueError:
            self.error(f"bad value {raw!r}", at)

    def integer(self) -> int:
        raw, at = self.atom()
        try:
            return int(raw)
        except ValueError:
            self.error(f"expected an integer, got {raw!r}", at)

    def path(self) -> Path:
        raw, at = self.atom()
        if not raw:
            self.error("expected a file path", at)
        p = Path(raw)
        return p if p.is_absolute() else self.base / p

    def end(self):
        if self.peek():
            self.error("unexpected trailing text")

    # -- grammar ------------------------------------------------------
    def seq(self) -> S.Seq:
        at = self.pos
        head = self.name()
        if head == "table":
            self.expect(":")
            return read_table(self.path())
        self.expect("(")
        simple = {"geom": S.geometric, "harm": S.harmonic_power, "pow2exp": S.pow2exp,
                  "dblexp": S.dblexp, "factexp": S.factexp, "logfam": S.logfam}
        try:
            if head in simple:
                v = self.value()
                out = simple[head](v)
            elif head in ("mshift", "ashift"):
                k = self.integer()
                self.expect(",")
                inner = self.seq()
                out = (S.mshift if head == "mshift" else S.ashift)(inner, k)
            elif head in ("scale", "power"):
                q = self.value()
                self.expect(",")
                inner = self.seq()
                out = (S.scale if head == "scale" else S.power)(inner, q)
            else:
                self.error(f"unknown sequence {head!r}", at)
        except ValueError as e:
            if isinstance(e, SpecError):
                raise
            self.error(str(e), at)
        self.expect(")")
        return out

    def gauge(self) -> G.Gauge:
        at = self.pos
        head = self.name()
        if head == "pwl":
            self.expect(":")
            return read_pwl(self.path())
        self.expect("(")
        try:
            if head == "pow":
                out = G.power(self.value())
            elif head in ("reclog", "recloglog"):
                out = G.reclog() if head == "reclog" else G.recloglog()
            elif head in ("tau", "scale", "gpow"):
                v = self.value()
                self.expect(",")
                inner = self.gauge()
                out = {"tau": G.tau, "scale": G.gscale, "gpow": G.gpow}[head](v, inner)
            elif head == "fromseq":
                out = G.gauge_from_seq(self.seq())
            else:
                self.error(f"unknown gauge {head!r}", at)
        except ValueError as e:
            if isinstance(e, SpecError):
                raise
            self.error(str(e), at)
        self.expect(")")
        return out

    def set_(self):
        from .cantor import CantorCube, sym_build
        at = self.pos
        head = self.name()
        self.expect("(")
        if head == "symcantor":
            r = self.seq()
            self.expect(",")
            d = self.integer()
            self.expect(")")
            try:
                return sym_build(r, d)
            except ValueError as e:
                self.error(str(e), at)
        if head == "cube":
            a = self.integer()
            self.expect(",")
            r = self.seq()
            self.expect(")")
            return CantorCube(a, r)
        self.error(f"unknown set {head!r}", at)


def _parse(text: str, what: str, base_dir=None):
    p = _Parser(text, Path(base_dir) if base_dir else Path.cwd())
    out = {"seq": p.seq, "gauge": p.gauge, "set": p.set_}[what]()
    p.end()
    return out


def parse_seq(text: str, base_dir=None) -> S.Seq:
    return _parse(text, "seq", base_dir)


def parse_gauge(text: str, base_dir=None) -> G.Gauge:
    return _parse(text, "gauge", base_dir)


def parse_set(text: str, base_dir=None):
    return _parse(text, "set", base_dir)


def _lines(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ValueError(f"cannot read {path}: {e.strerror}") from None
    for no, line in enumerate(text.splitlines(), 1):
        yield no, line.strip()


def read_table(path: Path) -> S.Seq:
    vals, zero, tail = [], None, None
    for no, line in _lines(path):
        if not line:
            continue
        if line.startswith("#"):
            words = line[1:].split()
            if len(words) == 2 and words[0] in ("zero", "tail"):
                v = _file_value(words[1], path, no)
                zero, tail = (v, tail) if words[0] == "zero" else (zero, v)
            continue
        vals.append(_file_value(line, path, no))
    try:
        return S.table(vals, tail_ratio=tail, zero=zero, label=f"table:{path.name}")
    except ValueError as e:
        raise ValueError(f"{path}: {e}") from None


def read_pwl(path: Path) -> G.Gauge:
    pts = []
    for no, line in _lines(path):
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{no}: expected 'r value'")
        pts.append((_file_value(parts[0], path, no), _file_value(parts[1], path, no)))
    for (r0, _), (r1, _) in zip(pts, pts[1:]):
        if not r1 < r0:
            raise ValueError(f"{path}: radii must be strictly decreasing")
    return G.pwl(pts, label=f"pwl:{path.name}")


def _file_value(text: str, path: Path, no: int) -> Value:
    try:
        return parse_value(text)
    except ValueError:
        raise ValueError(f"{path}:{no}: bad value {text!r}") from None


__all__ = ["SpecError", "parse_seq", "parse_gauge", "parse_set", "read_table", "read_pwl"]
