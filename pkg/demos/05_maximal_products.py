"""maxN(r,2;n): the largest product of rank counts over partitions of n.

    python3 demos/05_maximal_products.py
"""

from mocktheta.verifier import closed_form_maxn, maxn_dp

for r in (0, 1):
    print(f"r = {r}")
    for res in maxn_dp(r, 16)[1:]:
        sets = sorted(res.maximizers)
        print(f"  n={res.n:2d} maxN={res.value:5d}  maximizers {sets}")

for r, n in ((0, 301), (1, 301)):
    value, parts = closed_form_maxn(r, n)
    dp = maxn_dp(r, n, sets_upto=0)[n]
    print(f"r={r}, n={n}: closed form matches DP: {value == dp.value}, "
          f"{dp.count} maximizer(s), canonical {parts[:3]}...")
