"""Scalar statistical primitives shared by the policies and the bound computations.

Everything here is a pure function of its inputs; random draws take an explicit
``numpy.random.Generator``. The binary relative entropy uses the usual
information-theoretic boundary conventions (``0 * log 0 = 0``, divergence is
``+inf`` exactly when the second argument puts zero mass where the first does
not), which keeps it total on ``[0, 1]^2``.

``kl_bernoulli``, ``_klucb_core`` and ``_gamma_from_uniforms`` are written so
that they can be compiled verbatim by numba; the simulation engine wraps these
exact functions, so the compiled fast path and this reference path produce
bit-identical results.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln, logsumexp


def kl_bernoulli(x: float, y: float) -> float:
    """Binary relative entropy kl(x, y) = x ln(x/y) + (1-x) ln((1-x)/(1-y)).

    Total on [0, 1]^2: returns ``+inf`` iff (y == 0 and x > 0) or
    (y == 1 and x < 1), and 0 when x == y (including the corners).
    """
    if x == y:
        return 0.0
    if y <= 0.0:
        return math.inf if x > 0.0 else 0.0
    if y >= 1.0:
        return math.inf if x < 1.0 else 0.0
    # log1p form stays accurate when y is close to x
    div = 0.0
    if x > 0.0:
        div += x * math.log1p((x - y) / y)
    if x < 1.0:
        div += (1.0 - x) * math.log1p((y - x) / (1.0 - y))
    return div


def _klucb_core(mu_hat: float, n: float, budget: float) -> float:
    """Largest q in [mu_hat, 1] with n * kl(mu_hat, q) <= budget.

    Bisection with 64 fixed iterations (interval width 2^-64 < 1e-18), so the
    cost per call is fixed. The divergence is inlined; for mid in (mu_hat, 1)
    it evaluates the exact same floating-point expressions as ``kl_bernoulli``.
    """
    if mu_hat >= 1.0:
        return 1.0
    if budget <= 0.0:
        return mu_hat
    lo = mu_hat
    hi = 1.0
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        if mid >= 1.0:  # lo within one ulp of 1; divergence there is infinite
            hi = mid
            continue
        div = 0.0
        if mu_hat > 0.0:
            div += mu_hat * math.log1p((mu_hat - mid) / mid)
        div += (1.0 - mu_hat) * math.log1p((mid - mu_hat) / (1.0 - mid))
        if n * div <= budget:
            lo = mid
        else:
            hi = mid
    return lo


def klucb_index(mu_hat: float, n: int, budget: float) -> float:
    """kl-UCB index: the largest q <= 1 such that n * kl(mu_hat, q) <= budget.

    Nondecreasing in ``budget``, nonincreasing in ``n``; equals ``mu_hat`` when
    the budget is zero.
    """
    if not 0.0 <= mu_hat <= 1.0:
        raise ValueError(f"mu_hat = {mu_hat}: probability out of range [0, 1]")
    if n < 1:
        raise ValueError(f"n = {n}: need at least one observation")
    if budget < 0.0:
        raise ValueError(f"budget = {budget}: must be nonnegative")
    return _klucb_core(mu_hat, float(n), budget)


def binomial_cdf(n: int, p, k: int):
    """P(Bin(n, p) <= k), by direct log-space summation of the mass function.

    ``p`` may be a float or an ndarray of floats (the summation broadcasts);
    scalar input returns a float. Returns 0 for k < 0 and 1 for k >= n.
    Deliberately not routed through an incomplete-beta evaluation so that it
    can serve as one side of the Beta/Binomial cross-check.
    """
    if n < 0:
        raise ValueError(f"n = {n}: must be nonnegative")
    p_arr = np.asarray(p, dtype=float)
    scalar = p_arr.ndim == 0
    if np.any(p_arr < 0.0) or np.any(p_arr > 1.0):
        raise ValueError("p: probability out of range [0, 1]")
    if k < 0:
        out = np.zeros_like(p_arr)
        return float(out) if scalar else out
    if k >= n:
        out = np.ones_like(p_arr)
        return float(out) if scalar else out

    i = np.arange(k + 1)
    log_comb = gammaln(n + 1) - gammaln(i + 1) - gammaln(n - i + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_p = np.log(p_arr)
        log_q = np.log1p(-p_arr)
        log_terms = (
            log_comb.reshape((k + 1,) + (1,) * p_arr.ndim)
            + np.multiply.outer(i, log_p)
            + np.multiply.outer(n - i, log_q)
        )
        out = np.exp(logsumexp(log_terms, axis=0))
    # boundary masses: Bin(n, 0) = delta_0, Bin(n, 1) = delta_n (and k < n here)
    out = np.where(p_arr == 0.0, 1.0, out)
    out = np.where(p_arr == 1.0, 0.0, out)
    out = np.clip(out, 0.0, 1.0)
    return float(out) if scalar else out


def beta_cdf_via_binomial(alpha: int, beta: int, y):
    """Beta(alpha, beta) CDF at y through the Binomial complement identity.

    For integer shapes, F_Beta(alpha, beta)(y) = 1 - F_Bin(alpha+beta-1, y)(alpha-1).
    """
    _check_integer_shape("alpha", alpha)
    _check_integer_shape("beta", beta)
    return 1.0 - binomial_cdf(int(alpha) + int(beta) - 1, y, int(alpha) - 1)


def _gamma_from_uniforms(rng, shape: float) -> float:
    # Marsaglia-Tsang squeeze/rejection for shape >= 1, with the normal draw
    # produced by Box-Muller. Consumes only rng.random(), which makes the
    # draw sequence identical under the interpreted and compiled engines.
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        # the 1 - random() shifts keep every uniform strictly positive for log
        u1 = 1.0 - rng.random()
        u2 = rng.random()
        x = math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = 1.0 - rng.random()
        if u < 1.0 - 0.0331 * x * x * x * x:
            return d * v
        if math.log(u) < 0.5 * x * x + d * (1.0 - v + math.log(v)):
            return d * v


def sample_beta(alpha: int, beta: int, rng: np.random.Generator) -> float:
    """One Beta(alpha, beta) draw for integer shapes alpha, beta >= 1.

    Sampled as a ratio of two gamma variates driven purely by the uniform
    stream of ``rng``, so a given generator state always yields the same draw.
    """
    _check_integer_shape("alpha", alpha)
    _check_integer_shape("beta", beta)
    ga = _gamma_from_uniforms(rng, float(alpha))
    gb = _gamma_from_uniforms(rng, float(beta))
    return ga / (ga + gb)


def _check_integer_shape(name: str, value) -> None:
    if value != int(value) or int(value) < 1:
        raise ValueError(f"{name} = {value}: shape must be an integer >= 1")
