"""Double Kloosterman sums over primes in a window [L, 2L]."""
# %%
import numpy as np

from smoothsqf.kloosterman import (
    all_residue_sums,
    average_over_prime_moduli,
    double_kloosterman,
    erdos_turan_bound,
    inverse_product_discrepancy,
    max_over_residues,
    observed_exponent,
)

# %% [markdown]
# One sum, then all residues at once through a DFT of the inverse-product
# histogram.

# %%
w = double_kloosterman(1009, 5, 8)
print(f"W = {w.value:.3f}, |W| = {w.abs:.3f}, K^2 = {w.trivial_bound}")

W = all_residue_sums(1009, 8)
print("W(0) =", W[0].real, " sum over a =", abs(W.sum()).round(9))

# %% [markdown]
# Observed exponent theta in max |W| = L^(3/2) p^theta, against 1/8.

# %%
for p in (1009, 10007, 100003):
    L = p**0.3
    a, mx = max_over_residues(p, L)
    print(f"p={p:<7} L={L:6.2f} max at a={a:<6} |W|={mx:8.2f} theta={observed_exponent(mx, p, L):.3f}")

# %% [markdown]
# Averaging over moduli p in [Q, 2Q].

# %%
avg = average_over_prime_moduli(500, 6)
print("total", round(avg.total, 2), "ratio to bound by k:", {k: round(v, 3) for k, v in avg.ratios().items()})

# %% [markdown]
# Equidistribution of a / (l1 l2) mod p: star discrepancy against the
# Erdos-Turan bound.

# %%
for H in (5, 20, 80):
    print(f"H={H:<3} discrepancy {inverse_product_discrepancy(10007, 1, 20):.4f}"
          f"   Erdos-Turan {erdos_turan_bound(10007, 1, 20, H):.4f}")
