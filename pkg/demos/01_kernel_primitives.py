"""Tour of the scalar kernel: divergence, index inversion, distribution identity.

Run with: python demos/01_kernel_primitives.py
"""

import math

import numpy as np

from unibandit import (
    beta_cdf_via_binomial,
    binomial_cdf,
    kl_bernoulli,
    klucb_index,
    sample_beta,
)

# --- binary relative entropy -------------------------------------------------
print("kl(0.25, 0.50) =", kl_bernoulli(0.25, 0.50))
print("kl(0.1875, 0.5625) =", kl_bernoulli(0.1875, 0.5625))
print("kl(0.3, 1.0)  =", kl_bernoulli(0.3, 1.0), " (no mass overlap)")
print("kl(x, x)      =", kl_bernoulli(0.7, 0.7))

# the divergence dominates twice the squared gap everywhere
xs = np.linspace(0.05, 0.95, 10)
gap = min(kl_bernoulli(x, y) - 2 * (x - y) ** 2 for x in xs for y in xs)
print("min kl - 2(x-y)^2 over a grid:", f"{gap:.3e}", "(never negative)")

# --- the upper-confidence index ------------------------------------------------
# klucb_index(mu, n, budget) returns the largest q with n * kl(mu, q) <= budget
mu, n, budget = 0.2, 5, 1.0
q = klucb_index(mu, n, budget)
print(f"\nindex for mean {mu} after {n} pulls with budget {budget}: {q:.12f}")
print("plugging back:", n * kl_bernoulli(mu, q), "(recovers the budget)")
print("zero budget pins the index at the mean:", klucb_index(0.5, 10, 0.0))

# --- Beta CDF through the Binomial complement ----------------------------------
# For integer shapes a, b: F_Beta(a,b)(y) = 1 - F_Bin(a+b-1, y)(a-1).
for a, b, y in [(1, 1, 0.3), (2, 1, 0.5), (1, 2, 0.5), (6, 3, 0.7)]:
    print(f"Beta({a},{b}) cdf at {y}: {beta_cdf_via_binomial(a, b, y):.10f}")
print("Bin(3, 0.2) cdf at 1:", binomial_cdf(3, 0.2, 1))

# --- posterior sampling ---------------------------------------------------------
# draws are a pure function of the generator state
rng = np.random.default_rng(7)
draws = np.array([sample_beta(3, 5, rng) for _ in range(50_000)])
print("\nBeta(3,5) sample mean:", draws.mean(), " (theory:", 3 / 8, ")")
cdf = np.asarray(beta_cdf_via_binomial(3, 5, np.sort(draws)))
ks = np.max(np.abs(cdf - np.arange(1, draws.size + 1) / draws.size))
print("KS distance between the draws and the identity CDF:", f"{ks:.4f}")
