"""Gauges against sequences: when are microscopic-type sets null, and how to
turn small covers back into sequences or summable index sets."""

from domsets.domination import domhaus_example, hdom_combine, sandwich_report, versus1_criterion, versus4_example
from domsets.gauges import asymp_check, gauge_order, power, reclog, two_gauges
from domsets.measure import separation_witness
from domsets.numerics import Value
from domsets.sequences import geometric, harmonic_power

HALF = Value(1, 2)
g = geometric(HALF)

# %% The reciprocal log matches 2^-n exactly: n * phi(2^-n) = 1
a, b, v = asymp_check(reclog(), g, N=10_000)
print("n*reclog(2^-n) on [5000, 10000]:", a, b, v.status)

# %% Summability of phi(s_n) decides the inclusion into the null ideal
for phi in (power(Value(1, 10)), power(HALF), reclog()):
    print(f"{phi.describe():>10}: {versus1_criterion(phi, g).status}")
w = separation_witness("versus1_cube", reclog())
print("witness cube radii:", [str(r) for r in w["radii"][:4]], "ledger constant", w["ledger_constant"])

# %% Power gauges on polynomial sequences: holds iff beta > alpha
for beta in (Value(1), Value(3, 2), Value(2)):
    print(f"pow({beta}) on (n+1)^-1:", versus1_criterion(power(beta), harmonic_power(Value(1))).status)

# %% Two smaller gauges below a summable one
zeta, xi, v = two_gauges(power(Value(1)), harmonic_power(Value(2)), 200)
print("zeta(1/4) =", zeta.eval(Value(1, 4)), " xi(1/4) =", xi.eval(Value(1, 4)))
print("  zeta vs xi:", gauge_order(zeta, xi).verdict, "  zeta vs phi^2:", gauge_order(zeta, power(Value(2))).verdict)

# %% From small covers back to one sequence
rep = versus4_example()
print("\nextracted r_1, s_1:", rep["r"][0], rep["s"][0], " Fubini ledger <=", rep["fubini_bound"])
for f in rep["fineness"]:
    print(f"  family {f['k']}: {f['indices']} indices fine for the {f['k']}-fold shift -> {f['verdict']}")

# %% ... or to a summable index set
dh = domhaus_example("paper")
print("\ngamma:", dh["gamma"][:8], "sum 1/gamma =", float(dh["ledger"]), "< eps =", dh["eps"])
c = hdom_combine({0: {2: (Value(0), Value.pow2(-9))}, 1: {2: (Value(0), Value.pow2(-17))}}, g)
print("combined index map:", c["index_map"], " weighted ledger:", c["weighted_ledger"])

# %% Where sequences sit between the null ideals
for s in (g, harmonic_power(Value(2))):
    rep = sandwich_report(s, N=64)
    print(s.describe(), [(str(r["alpha"]), r["status"]) for r in rep["rows"]], "corridor", rep["corridor"]["alpha"])
