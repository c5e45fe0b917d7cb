"""Exact counts against their predicted main terms."""
# %%
from smoothsqf import lemma_lab as ll

c = ll.constants()
print(f"psi={c.psi:.6f} xi={c.xi:.6f} rho={c.rho:.6f} C={c.C:.8f} (tail < {c.C_tail_bound:g})")

# %% [markdown]
# Square-free integers in a short window, optionally coprime to q.

# %%
for M in (1e4, 1e5, 1e6):
    for q in (1, 30):
        r = ll.sqfap_count(M, q)
        print(f"M={M:<9g} q={q:<3} exact {r.exact_count:<6} main {r.main_term:9.1f} dev {r.relative_deviation:.2e}")

# %% [markdown]
# Smooth square-free multiples and sums of two square-free numbers.

# %%
for N in (1e3, 1e4, 1e5):
    r = ll.smooth_lemma_census(N, 0.6)
    print(f"smooth N={N:<7g} exact {r.exact_count:<6} main {r.main_term:9.1f} dev {r.relative_deviation:.3f}")
for N in (500, 1500, 3000):
    r = ll.sums_lemma_census(N, 1.0)
    print(f"sums   N={N:<7} exact {r.exact_count:<8} main {r.main_term:11.1f} dev {r.relative_deviation:.3f}")
