"""Checks of the effective bounds and the convexity frontier at small scale.

    python3 demos/04_bounds_and_convexity.py
"""

import mpmath

from mocktheta import verifier as vf

for report in (vf.verify_theorem_main(500), vf.verify_partition_error(500),
               vf.verify_corollaries(500), vf.verify_sandwich(200, scan_threshold=False),
               vf.convexity_exact(400)):
    print(report.summary())

print("\nsandwich bound fails below its range at (r, n):", vf.verify_sandwich(
    20, scan_threshold=False).failures)
print("analytic condition: n=4542", vf.sandwich_condition(4542), " n=4543", vf.sandwich_condition(4543))

print("\n a   C_a            max b")
for fr in vf.table3():
    print(f"{fr.a:2d}  {mpmath.nstr(fr.C_a, 12):14s} {fr.max_b}")
