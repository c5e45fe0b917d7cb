"""Dirichlet characters and square-free character sums."""
# %%
import numpy as np

from smoothsqf.characters import (
    build_character_group,
    exceptional_prime_census,
    max_nonprincipal_sf_sum,
    mean_value_check,
    orthogonality_defect,
)

# %% [markdown]
# The unit group mod 105 splits into cyclic factors; every character is a
# tuple of exponents on their generators.

# %%
g = build_character_group(105)
print("orders", g.orders, "size", g.size, "orthogonality defect", orthogonality_defect(g))

# %% [markdown]
# The largest nonprincipal square-free sum stays far below t.

# %%
for q, t in ((101, 100), (1009, 1000), (10007, 5000)):
    m = max_nonprincipal_sf_sum(q, t)
    print(f"q={q:<6} t={t:<5} max |S| = {m.value:8.2f}   log|S|/log t = {m.exponent_ratio:.3f}")

# %% [markdown]
# Large-sieve style mean value: the character average never exceeds
# phi(q)(N/q + 1) times the coefficient energy.

# %%
rng = np.random.default_rng(0)
a = rng.standard_normal(300) + 1j * rng.standard_normal(300)
chk = mean_value_check(101, 300, a)
print(f"lhs {chk.lhs:.1f} <= rhs {chk.rhs:.1f}: {chk.holds}")

# %% [markdown]
# How many primes in [Q, 2Q] have a sum above t^(1 - delta)?

# %%
census = exceptional_prime_census(200, 150, 0.1)
print(f"{len(census.rows)} primes, {census.violation_count} above the bound {census.bound:.1f}")
print(f"gamma={census.gamma:.3f} theta={census.theta:.3f} predicted {census.predicted_exceptional:.1f}")
