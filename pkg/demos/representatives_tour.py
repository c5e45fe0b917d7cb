"""Smallest smooth square-free representatives of residue classes.

For each prime p we ask for the least p-smooth square-free integer in every
class mod p, then look at how the worst class grows with p.
"""
# %%
import math

import numpy as np

from smoothsqf import compute_M, compute_M_alpha_star, construct_thm13
from smoothsqf.arith import primes_between

# %% [markdown]
# Small primes first. For p = 5 and 7 some class is never reached, because
# the finitely many square-free products of primes <= p miss it.

# %%
for p in (5, 7, 11, 13):
    t = compute_M(p)
    print(f"p={p:>2}  status={t.status.value:<9} M={t.value}  uncovered={t.uncovered}")

# %%
for r in compute_M(13).records:
    print(f"{r.residue:>2} <- {r.s:<3} primes {[q for q, _ in r.factorization.factors]}")

# %% [markdown]
# The exponent log M(p) / log p over a range of primes.

# %%
primes = primes_between(11, 400).tolist()
exps = np.array([compute_M(p).exponent for p in primes])
print(f"mean exponent {exps.mean():.3f}, max {exps.max():.3f} at p={primes[int(exps.argmax())]}")

# %% [markdown]
# Restricting to reduced classes and to q^alpha-smooth representatives.

# %%
for alpha in (0.5, 0.75, 1.0):
    t = compute_M_alpha_star(101, alpha, 101**2)
    print(f"alpha={alpha:<4}  status={t.status.value:<9} value={t.value}  exponent={t.exponent}")

# %% [markdown]
# The two-prime construction s = l1 l2 u compared with the true minimum.

# %%
p = 1009
best = {r.residue: r.s for r in compute_M_alpha_star(p, 1.0, 4 * p * p).records}
for a in (1, 2, 3, 500):
    c = construct_thm13(p, a, 0.1)
    if c.record.found:
        print(f"a={a:<4} s={c.record.s} = {c.l1}*{c.l2}*{c.u}   minimum {best[a]}"
              f"   log_p s = {math.log(c.record.s, p):.3f}")
    else:
        print(f"a={a:<4} no representative from the {c.K}-prime window")
