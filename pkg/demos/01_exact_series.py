"""Coefficients of f(q), partition numbers and the even/odd rank split.

    python3 demos/01_exact_series.py
"""

from mocktheta.series import rank_histogram, rank_table

table = rank_table(30)
print(" n   p(n)  alpha(n)  N(0,2;n)  N(1,2;n)")
for n in range(1, 31):
    print(f"{n:2d} {table.p[n]:6d} {table.alpha[n]:9d} {table.N0[n]:9d} {table.N1[n]:9d}")

# the same split read off from the ranks of every partition of 12
hist = rank_histogram(12)
even = sum(c for r, c in hist.items() if r % 2 == 0)
print("\nranks of partitions of 12:", dict(sorted(hist.items())))
print("even - odd =", even - (sum(hist.values()) - even), "=", table.alpha[12])
