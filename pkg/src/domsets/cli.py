"""Batch driver: every engine behind one argparse front end, JSON out.

Reports are UTF-8 JSON with sorted keys.  Exact quantities are printed in the
value grammar (``3/4``, ``2^-64``, ...), never as floats.  Wall-clock timing
is only included with ``--timing`` so that identical configs give identical
bytes.

Exit status: 0 ok, 1 verdict differs from ``--expect``, 2 malformed expression,
3 engine error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import adversary, cantor, domination, gauges, measure, sequences, suites
from .numerics import NumCtx, Value, parse_value
from .specs import SpecError, parse_gauge, parse_seq, parse_set
from .verdict import Verdict, to_jsonable

EXIT_EXPECT, EXIT_PARSE, EXIT_ENGINE = 1, 2, 3


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)

    def echo(self) -> dict:
        return {"command": self.command, **{k: v for k, v in self.params.items() if v is not None}}


class _Run:
    """Parsed arguments plus lazily parsed specs."""

    def __init__(self, args):
        self.args = args
        self.ctx = NumCtx(precision_bits=args.precision)
        self.base = Path.cwd()

    def seq(self, name="seq", required=True):
        text = getattr(self.args, name, None)
        if text is None:
            if required:
                raise SpecError(f"--{name.replace('_', '-')} is required", "", 0)
            return None
        return parse_seq(text, self.base)

    def gauge(self, name="gauge", required=True):
        text = getattr(self.args, name, None)
        if text is None:
            if required:
                raise SpecError(f"--{name.replace('_', '-')} is required", "", 0)
            return None
        return parse_gauge(text, self.base)

    def set(self):
        if self.args.set is None:
            raise SpecError("--set is required", "", 0)
        return parse_set(self.args.set, self.base)

    def value(self, name, default=None):
        text = getattr(self.args, name, None)
        if text is None:
            return default
        try:
            return parse_value(text)
        except ValueError as e:
            raise SpecError(str(e), text, 0) from None

    def N(self, default):
        return self.args.N if self.args.N is not None else default

    def depth(self, default):
        return self.args.depth if self.args.depth is not None else default


def _terms(s, count: int, ctx) -> list:
    out = []
    for n in range(1, count + 1):
        try:
            out.append(s.at(n, ctx))
        except IndexError:
            break
    return out


def _status(v) -> str | None:
    if isinstance(v, Verdict):
        return v.status
    if isinstance(v, dict):
        st = v.get("status")
        if isinstance(st, str):
            return st
        if isinstance(v.get("verdict"), Verdict):
            return v["verdict"].status
    return None


# ----------------------------------------------------------------------
# subcommands; each returns (result, status)
# ----------------------------------------------------------------------

def cmd_eval(run: _Run):
    a = run.args
    if a.seq is not None:
        s = run.seq()
        if a.n is not None:
            return {"seq": s.describe(), "n": a.n, "value": s.at(a.n, run.ctx)}, None
        return {"seq": s.describe(), "terms": _terms(s, run.N(8), run.ctx), "profile": s.profile()}, None
    phi = run.gauge()
    r = run.value("r")
    if r is None:
        raise SpecError("--r is required with --gauge", "", 0)
    out = {"gauge": phi.describe(), "r": r, "value": phi.eval(r, run.ctx)}
    if a.inverse:
        out["inverse"] = gauges.gauge_inverse(phi, r, ctx=run.ctx)
        del out["value"]
    return out, None


def cmd_compare(run: _Run):
    if run.args.gauge is not None:
        rep = gauges.gauge_order(run.gauge(), run.gauge("gauge2"), run.N(256), run.ctx)
        return rep, rep.verdict
    v = sequences.seq_leq(run.seq(), run.seq("seq2"), run.N(64), run.ctx)
    return v, v.status


def cmd_lp(run: _Run):
    v = sequences.lp_test(run.seq(), run.value("p", Value(1)), run.N(128), ctx=run.ctx)
    return v, v.status


def cmd_criterion(run: _Run):
    v = domination.versus1_criterion(run.gauge(), run.seq(), run.N(128), ctx=run.ctx)
    return v, v.status


def cmd_asymp(run: _Run):
    a, b, v = gauges.asymp_check(run.gauge(), run.seq(), run.N(1000), run.ctx)
    return {"a": a, "b": b, "verdict": v}, v.status


def cmd_doubling(run: _Run):
    a = run.args
    if a.seq is not None:
        v = sequences.seq_doubling_test(run.seq(), a.mode or "two_doubling", run.N(64), ctx=run.ctx)
    elif a.alpha is not None:
        v = gauges.doubling2_check(run.gauge(), run.value("alpha"), run.N(64), run.ctx)
    else:
        v = gauges.gauge_doubling(run.gauge(), run.value("L", Value(2)), a.strict, run.N(64), run.ctx)
    return v, v.status


def cmd_construct(run: _Run):
    a, ctx = run.args, run.ctx
    kind = a.kind
    if kind == "ash":
        out, v = sequences.ash_transform(run.seq(), a.mode or "summable", run.N(1000), ctx)
        return {"seq": out.describe(), "terms": _terms(out, 8, ctx), "verdict": v}, v.status
    if kind == "ash2":
        psi, v = gauges.ash2_transform(run.gauge(), run.seq(), a.mode or "shrink", run.N(200), ctx=ctx)
        return {"gauge": psi, "verdict": v}, v.status
    if kind == "doubling11":
        psi, v = gauges.doubling11_regularize(run.gauge(), run.value("L", Value(2)), run.N(200), ctx)
        return {"gauge": psi, "verdict": v}, v.status
    if kind == "twogauges":
        zeta, xi, v = gauges.two_gauges(run.gauge(), run.seq(), run.N(200), run.value("alpha", Value(2)), ctx=ctx)
        return {"zeta": zeta, "xi": xi, "verdict": v}, v.status
    if kind == "dim2":
        phi, v = gauges.dim2_gauge(run.value("alpha", Value(1, 2)), run.gauge(), run.seq(), run.N(8), ctx)
        return {"gauge": phi, "verdict": v}, v.status
    if kind == "fromseq":
        s = run.seq()
        g = gauges.gauge_from_seq(s, run.N(64))
        sample = [{"r": t, "value": g.eval(t, ctx)} for t in _terms(s, 6, ctx)]
        return {"gauge": g, "samples": sample}, None
    if kind == "versus4":
        rep = domination.versus4_example(a.K or 8, run.N(256), ctx)
        return rep, _status(rep)
    if kind == "domhaus":
        rep = domination.domhaus_example(a.variant or "paper", a.M or 24, ctx)
        return rep, _status(rep)
    if kind == "witness":
        rep = measure.separation_witness(a.witness or "versus1_cube", run.gauge(), run.gauge("gauge2", False),
                                         run.N(12), ctx=ctx)
        return rep, None
    raise SpecError(f"unknown construction {kind!r}", kind, 0)


def cmd_measure(run: _Run):
    X = run.set()
    if not isinstance(X, cantor.SymCantor):
        v = measure.cubes1_test(X.alphabet_size, X.radius, run.gauge(), run.N(64), ctx=run.ctx)
        return v, v.status
    br = measure.measure_bracket(X, run.gauge(), run.value("delta"), run.ctx)
    return br, None


def cmd_dim(run: _Run):
    rep = measure.hdim_estimate(run.set(), run.value("tol", Value(1, 50)), run.depth(14), run.ctx)
    return rep, None


def cmd_dominate(run: _Run):
    a = run.args
    X, s = run.set(), run.seq()
    if a.family is not None:
        rep = domination.dominate_family(X, sequences.closure(s, a.family), a.mode, run.ctx)
        return rep, rep["status"]
    d = domination.dominate_decide(X, s, mode=a.mode, ctx=run.ctx)
    return d, d.verdict.status


def cmd_adversary(run: _Run):
    a = run.args
    X = adversary.build_adversarial_set(run.seq(), a.variant, run.depth(4), a.m, a.K, run.ctx)
    if a.action == "build":
        chk = X.checks()
        ok = chk["room"] and all(st == "holds" for sts in chk["decomposition"].values() for st in sts)
        return {"set": X.to_dict(full=a.full), "checks": chk}, "holds" if ok else "fails"
    rep = adversary.refute_many(X, a.count, a.seed)
    return rep, _status(rep)


def cmd_condition(run: _Run):
    v = sequences.growth_condition(run.seq(), "cond_" + run.args.which, run.N(1000), ctx=run.ctx)
    return v, v.status


def selftest_report(seed: int = 0) -> dict:
    """Deterministic battery over every module; small enough for a smoke run."""
    from .gauges import power, reclog
    from .sequences import geometric, growth_condition, pow2exp, harmonic_power, dblexp

    g = geometric(Value(1, 2))
    checks = []

    def record(name, status, detail=None):
        checks.append({"name": name, "status": status, "detail": detail})

    a, b, v = gauges.asymp_check(reclog(), g, 1000)
    record("asymp reclog vs geom(1/2)", _holds_if(a == b == Value(1)), {"a": a, "b": b})
    record("criterion pow(1/2), geom(1/2)", domination.versus1_criterion(power(Value(1, 2)), g).status)
    crit = domination.versus1_criterion(reclog(), g)
    record("criterion reclog, geom(1/2) fails", _holds_if(crit.fails))
    X = cantor.sym_build(geometric(Value(1, 4)), 8)
    up = measure.hmeasure_upper(X, power(Value(1, 2)))
    record("hmeasure_upper C(1/4) depth 8", _holds_if(up.value == Value(1)), {"value": up.value})
    dim = measure.hdim_estimate(X, Value(1, 20), 10)
    lo_b, hi_b = dim["enclosure"]
    record("hdim C(1/4)", _holds_if(lo_b <= Value(1, 2) <= hi_b), {"enclosure": dim["enclosure"]})
    rng = random.Random(seed)
    bad = sum(not (t["clean"] and t["caught"]) for t in (suites.interleave_trial(rng) for _ in range(50)))
    record("interleave trials", _holds_if(bad == 0), {"trials": 50, "bad": bad})
    rng = random.Random(seed)
    dis = sum(not suites.decide_vs_oracle(rng)["agree"] for _ in range(50))
    record("decide vs oracle", _holds_if(dis == 0), {"instances": 50, "disagreements": dis})
    A = adversary.build_adversarial_set(sequences.mshift(dblexp(Value(1, 2)), 2), "snots", 4)
    ref = adversary.refute_many(A, 5, seed)
    record("snots refutations", ref["verdict"].status,
           {"refuted": ref["refuted"], "distinct_leaves": ref["distinct_leaves"]})
    v4 = domination.versus4_example(8, 128)
    record("versus4 worked example", v4["verdict"].status, {"r1": v4["r"][0], "s1": v4["s"][0]})
    dh = domination.domhaus_example("paper", 16)
    record("domhaus worked example", dh["verdict"].status, {"gamma": dh["gamma"][:4]})
    record("cond_3sn geom(1/2)", growth_condition(g, "cond_3sn", 200).status)
    record("cond_1sn pow2exp(2)", growth_condition(pow2exp(Value(2)), "cond_1sn", 200).status)
    record("cond_simple3 harm(2)", growth_condition(harmonic_power(Value(2)), "cond_simple3", 200).status)
    mf = cantor.mf_test(dblexp(Value(1, 2)), Value(2), N=16)
    record("mf_test dblexp(1/2), p=2", _holds_if(mf.fails), {"status": mf.status})
    overall = "holds" if all(c["status"] == "holds" for c in checks) else "fails"
    return {"seed": seed, "checks": checks, "status": overall}


def _holds_if(ok: bool) -> str:
    return "holds" if ok else "fails"


def cmd_selftest(run: _Run):
    rep = selftest_report(run.args.seed)
    return rep, rep["status"]


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global")
    g.add_argument("--precision", type=int, default=64, help="bits for enclosures")
    g.add_argument("--depth", type=int)
    g.add_argument("--N", type=int, help="horizon")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--expect", help="exit 1 unless the report status equals this")
    g.add_argument("--out", help="write the report here instead of stdout")
    g.add_argument("--timing", action="store_true", help="include wall-clock seconds")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="domsets", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("eval", cmd_eval, "evaluate a sequence term or a gauge")
    p.add_argument("--seq")
    p.add_argument("--n", type=int)
    p.add_argument("--gauge")
    p.add_argument("--r")
    p.add_argument("--inverse", action="store_true")

    p = add("compare", cmd_compare, "order of two gauges or two sequences")
    p.add_argument("--gauge")
    p.add_argument("--gauge2")
    p.add_argument("--seq")
    p.add_argument("--seq2")

    p = add("lp", cmd_lp, "membership of a sequence in l^p")
    p.add_argument("--seq", required=True)
    p.add_argument("--p")

    p = add("criterion", cmd_criterion, "gauge-null inclusion criterion")
    p.add_argument("--gauge", required=True)
    p.add_argument("--seq", required=True)

    p = add("asymp", cmd_asymp, "calibration band of n*phi(s_n)")
    p.add_argument("--gauge", required=True)
    p.add_argument("--seq", required=True)

    p = add("doubling", cmd_doubling, "doubling tests for gauges or sequences")
    p.add_argument("--gauge")
    p.add_argument("--seq")
    p.add_argument("--L")
    p.add_argument("--alpha")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--mode")

    p = add("construct", cmd_construct, "run a constructive lemma")
    p.add_argument("kind", choices=["ash", "ash2", "doubling11", "twogauges", "dim2", "fromseq",
                                    "versus4", "domhaus", "witness"])
    p.add_argument("--seq")
    p.add_argument("--gauge")
    p.add_argument("--gauge2")
    p.add_argument("--mode")
    p.add_argument("--L")
    p.add_argument("--alpha")
    p.add_argument("--K", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--variant", choices=["paper", "scaled"])
    p.add_argument("--witness", choices=["versus1_cube", "ideals_pair"])

    p = add("measure", cmd_measure, "Hausdorff measure bracket")
    p.add_argument("--set", required=True)
    p.add_argument("--gauge", required=True)
    p.add_argument("--delta")

    p = add("dim", cmd_dim, "Hausdorff dimension enclosure")
    p.add_argument("--set", required=True)
    p.add_argument("--tol")

    p = add("dominate", cmd_dominate, "decide s-fine coverability at finite depth")
    p.add_argument("--set", required=True)
    p.add_argument("--seq", required=True)
    p.add_argument("--mode", choices=["exact", "greedy"], default="exact")
    p.add_argument("--family", type=int, metavar="K", help="check the closure members 1..K")

    p = add("adversary", cmd_adversary, "build or attack an adversarial set")
    p.add_argument("action", choices=["build", "refute"])
    p.add_argument("--seq", required=True)
    p.add_argument("--variant", choices=["snots", "snots2"], default="snots")
    p.add_argument("--m", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--full", action="store_true", help="dump every leaf")

    p = add("condition", cmd_condition, "growth conditions on a sequence")
    p.add_argument("which", choices=["1sn", "3sn", "simple3"])
    p.add_argument("--seq", required=True)

    add("selftest", cmd_selftest, "deterministic smoke battery")
    return parser


def run(args) -> tuple[dict, str | None]:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command", "timing", "out")}
    cfg = RunConfig(args.command, params)
    t0 = time.perf_counter()
    result, status = args.func(_Run(args))
    report = {"config": cfg.echo(), "result": to_jsonable(result), "status": status}
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - t0, 3)}
    return report, status


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, status = run(args)
    except SpecError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, ArithmeticError, IndexError) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ENGINE
    text = dumps(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.expect is not None and status != args.expect:
        print(f"expected {args.expect}, got {status}", file=sys.stderr)
        return EXIT_EXPECT
    return 0


if __name__ == "__main__":
    sys.exit(main())
