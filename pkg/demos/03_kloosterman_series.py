"""The constant term of F and its first coefficients from Kloosterman-Bessel
series. Both converge slowly, so we watch the partial sums settle.

    python3 demos/03_kloosterman_series.py
"""

import mpmath

from mocktheta.kloosterman import a_coefficient_plateau, b0_closed_forms, b0_series

for c_max in (100, 1000, 10_000):
    res = b0_series(c_max)
    print(f"b0 with c <= {c_max:>6}: {mpmath.nstr(res.total, 10)}")
closed = b0_closed_forms()
print("per-family limits:", {ell: mpmath.nstr(v, 8) for ell, v in closed.items()})

for n, exact in ((1, -83), (2, -296), (3, -1485)):
    state = a_coefficient_plateau(n)
    print(f"a({n}) ~ {state.total:10.3f} with c <= {state.c_max} (exact {exact})")
