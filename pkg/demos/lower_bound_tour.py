"""Primes p whose class 4 has no small square-free member.

Forcing k p + 4 to be divisible by the square of the (k+1)-th prime for
k = 1..K makes 4, p + 4, ..., K p + 4 all non-square-free.
"""
# %%
from smoothsqf import booker_lower_bound

for K in range(1, 6):
    r = booker_lower_bound(K)
    print(f"K={K}  p={r.p:<12} least square-free s == 4: {r.s_min:<14} s/(K p) = {r.ratio:.3f}")
