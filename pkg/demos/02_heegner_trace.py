"""alpha(n) as a trace of the level 6 form F over Heegner points.

For n = 24 the discriminant -575 = 25 * (-23) is not fundamental, so the
trace picks up the classes of -23 with sign -1. Four terms of size
exp(pi sqrt|D| / 6) cancel to leave a quantity of size exp(pi sqrt|D| / 12).

    python3 demos/02_heegner_trace.py [n]
"""

import sys

import mpmath

from mocktheta.modular import trace_S
from mocktheta.series import mock_theta_coeffs

n = int(sys.argv[1]) if len(sys.argv) > 1 else 24
res = trace_S(n)
print(f"n = {n}, D = {1 - 24 * n}, {res.policy.working_bits} working bits")
for t in res.per_class_terms:
    A = t.assignment
    print(f"  u={t.u} eps={t.sign:+d} {str(t.form):>14} -> {A.cusp_class:>9} shift {A.shift}"
          f"  {mpmath.nstr(t.value, 12)}")
print("S(n) =", mpmath.nstr(res.S, 25))
print("alpha(n) from the trace:", res.alpha_int, " residual", mpmath.nstr(res.residual, 3))
print("alpha(n) from the series:", mock_theta_coeffs(n)[n])
