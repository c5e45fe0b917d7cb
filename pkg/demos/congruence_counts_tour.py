"""Counting solutions of multiplicative congruences."""
# %%
from smoothsqf import congruences as cg
from smoothsqf.arith import prime_window

# %% [markdown]
# N counts l1 l2 u == a (mod p) with u <= h. The square-free variant is
# computed twice: a direct filter and a Moebius sum over d^2.

# %%
p, L, h = 10007, 12, 3000
K = prime_window(L, p).K
for a in (1, 2, 5000):
    n = cg.count_N(p, a, L, h)
    s = cg.count_N_squarefree(p, a, L, h)
    print(f"a={a:<5} N={n.exact_count:<4} main {n.main_term:7.1f}   "
          f"N#={s.exact_count:<4} (mu-sum {s.extras['inclusion_exclusion']}) main {s.main_term:7.1f}")

# %% [markdown]
# Summed over all classes, each pair contributes once per unit u <= h.

# %%
total = sum(cg.count_N(p, a, L, h).exact_count for a in range(1, p))
print(total, "=", K * K * h)

# %% [markdown]
# Reciprocal squares: a shift lambda never increases I.

# %%
zero = cg.count_I(1009, 2, 20, 0).exact_count
print("I(0) =", zero, " max over shifts:", max(cg.count_I(1009, 2, 20, lam).exact_count for lam in range(1, 200)))

# %% [markdown]
# Products of structured prime blocks, binned by reduced class. At this
# scale there are too few products per class for the spread to be flat.

# %%
blocks = [cg.PrimeBlock(2, 5.0), cg.PrimeBlock(1, 30.0)]
counts, n_k, n_r, _ = cg.structured_product_counts(211, 40, 0.9, 2.0, blocks)
units = [int(counts[a]) for a in range(1, 211)]
print(f"{n_k * n_r} products, per class mean {sum(units) / 210:.1f}, min {min(units)}, max {max(units)}")
