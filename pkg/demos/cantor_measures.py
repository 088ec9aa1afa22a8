"""Hausdorff measures and dimensions of symmetric Cantor sets, computed exactly.

Run with ``python demos/cantor_measures.py`` after installing the package.
"""

# %% The middle-half Cantor set C(1/4)
from domsets.cantor import sym_build
from domsets.gauges import power
from domsets.measure import cubes1_test, hdim_estimate, hmeasure_lower, hmeasure_upper
from domsets.numerics import Value
from domsets.sequences import dblexp, geometric

HALF = Value(1, 2)
X = sym_build(geometric(Value(1, 4)), 12)
print("C(1/4), first nodes:", X.node("0"), X.node("1"), X.node("10"))

# Every level-n cover by construction intervals costs 2^n * (4^-n)^(1/2) = 1,
# so the antichain search never beats 1.
for d in (1, 4, 8, 12):
    print(f"  depth {d:2d}: upper H^(1/2) = {hmeasure_upper(X, power(HALF), depth=d).value}")

low, cert = hmeasure_lower(X, power(HALF), depth=8)
print("  mass-distribution lower bound:", low, "(spans tested:", cert.spans_tested, ")")

# %% Slightly larger exponents make the set null
for beta in (Value(3, 5), Value(3, 4)):
    up = hmeasure_upper(X, power(beta), depth=12).value
    print(f"  upper H^{beta} at depth 12 = {float(up):.6f}")

# %% Dimension by bisection on the null criterion
for q in (2, 3, 4, 8):
    rep = hdim_estimate(sym_build(geometric(Value(1, q)), 14), Value(1, 50), depth=14)
    a, b = rep["enclosure"]
    print(f"dim C(1/{q}) in [{float(a):.4f}, {float(b):.4f}]  closed form {rep['closed_form_approx']}")

# %% Radii 2^-2^n shrink so fast that every power gauge sees a null set
r = dblexp(HALF)
for beta in (Value(1, 8), Value(1, 64)):
    v = cubes1_test(2, r, power(beta), N=40)
    print(f"null for r^{beta}: {v.status}  ({v.method})")
