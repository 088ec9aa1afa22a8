"""Exact tools for dominated sets, gauges and Hausdorff measures of Cantor sets.

Submodules: ``numerics`` (exact dyadic/rational values and enclosures),
``sequences`` (decreasing null sequences and their tests), ``gauges``,
``cantor`` (symmetric Cantor sets and cubes), ``measure``, ``domination``,
``adversary`` (adversarial interval trees), ``specs`` (mini-language) and
``cli``.
"""

from .numerics import DyadicSum, IntervalVal, NumCtx, Value, parse_value, value_cmp
from .verdict import FAILS, HOLDS, UNKNOWN, Verdict
from .sequences import (CertificateError, Seq, closure, dblexp, geometric, harmonic_power,
                        interleave_covers, lp_test, mshift, ashift, pow2exp, table, growth_condition)
from .gauges import Gauge, asymp_check, gauge_from_seq, gauge_order, power, reclog, recloglog, tau
from .cantor import CantorCube, SymCantor, mf_test, sym_build
from .measure import hdim_estimate, hmeasure_lower, hmeasure_upper, measure_bracket, separation_witness
from .covers import FineCover, check_fine
from .domination import (assignment_oracle, dominate_decide, dominate_family, domhaus_cover,
                         versus1_criterion, versus4_extract)
from .adversary import build_adversarial_set, refute_cover
from .specs import parse_gauge, parse_seq, parse_set

__version__ = "0.1.0"
