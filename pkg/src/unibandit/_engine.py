"""Compiled trajectory engine.

Wraps the exact scalar cores from :mod:`stats_kernel` and :mod:`policies` with
numba and fuses the round loop, so a full trajectory runs without interpreter
overhead. The generator methods consumed here (``random`` and ``integers``)
and the shared cores produce bit-identical streams under numba and CPython,
which is asserted by the engine-equivalence tests: a compiled run must equal
the interpreted reference run draw for draw.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from . import policies as _policies
from . import stats_kernel as _sk

KIND_CODES = {"uts": 0, "osub": 1, "klucb": 2, "ts": 3}

_kl = njit(cache=True)(_sk.kl_bernoulli)
_klucb = njit(cache=True)(_sk._klucb_core)
_gamma_draw = njit(cache=True)(_sk._gamma_from_uniforms)
_budget = njit(cache=True)(_policies._budget_core)


@njit(cache=True)
def _argmax_tie(values, size, rng):
    # ascending-index scan; consumes rng only on an exact tie, matching
    # policies._argmax_tiebreak
    best = values[0]
    for i in range(1, size):
        if values[i] > best:
            best = values[i]
    ties = 0
    for i in range(size):
        if values[i] == best:
            ties += 1
    if ties == 1:
        pick = 0
    else:
        pick = rng.integers(0, ties)
    seen = 0
    for i in range(size):
        if values[i] == best:
            if seen == pick:
                return i
            seen += 1
    return size - 1


@njit(cache=True)
def _klucb_scan(scores, cand, cand_size, pulls, successes, budget):
    # Fills scores with the kl-UCB index of each candidate, except that a
    # candidate provably below the running maximum is skipped and scored -1:
    # the bisection keeps its lower end feasible, so q_k < m exactly when
    # n_k * kl(mu_k, m) > budget. Skipped arms can therefore never tie with
    # the final maximum and the argmax (with ties) is unchanged.
    best = -1.0
    for ii in range(cand_size):
        k = cand[ii]
        n = float(pulls[k])
        mu = successes[k] / pulls[k]
        if mu >= best or n * _kl(mu, best) <= budget:
            q = _klucb(mu, n, budget)
            scores[ii] = q
            if q > best:
                best = q
        else:
            scores[ii] = -1.0


@njit(cache=True)
def _simulate(
    kind,
    gamma,
    means,
    nplus_ptr,
    nplus_idx,
    horizon,
    checkpoints,
    regret_out,
    actions_out,
    env_rng,
    pol_rng,
    check_invariant,
):
    """One trajectory; returns the first round violating the replay invariant, or -1.

    ``gamma == 0`` encodes "no forced leader replay" (the uts heuristic).
    ``actions_out`` may be empty; when sized to ``horizon`` it receives the
    selected arm of every round.
    """
    n_arms = means.shape[0]
    pulls = np.zeros(n_arms, np.int64)
    successes = np.zeros(n_arms, np.int64)
    leader_counts = np.zeros(n_arms, np.int64)
    mu_buf = np.empty(n_arms)
    score_buf = np.empty(n_arms)
    all_arms = np.arange(n_arms, dtype=np.int64)
    mu_star = means.max()

    n_cp = checkpoints.shape[0]
    record = actions_out.shape[0] > 0
    regret = 0.0
    t = 0
    ci = 0
    violation = -1

    for v in range(n_arms):
        reward = 1 if env_rng.random() < means[v] else 0
        pulls[v] = 1
        successes[v] = reward
        t += 1
        regret += mu_star - means[v]
        if record:
            actions_out[t - 1] = v
        if ci < n_cp and t == checkpoints[ci]:
            regret_out[ci] = regret
            ci += 1

    while t < horizon:
        if kind == 0 or kind == 1:  # uts / osub: leader-restricted selection
            for k in range(n_arms):
                mu_buf[k] = successes[k] / pulls[k]
            leader = _argmax_tie(mu_buf, n_arms, pol_rng)
            leader_counts[leader] += 1
            count = leader_counts[leader]
            if kind == 0:
                forced = gamma > 0 and count % gamma == 0
            else:
                forced = count % gamma == 1
            if forced:
                arm = leader
            else:
                lo = nplus_ptr[leader]
                size = nplus_ptr[leader + 1] - lo
                cand = nplus_idx[lo : lo + size]
                if kind == 0:
                    for ii in range(size):
                        k = cand[ii]
                        ga = _gamma_draw(pol_rng, successes[k] + 1.0)
                        gb = _gamma_draw(pol_rng, pulls[k] - successes[k] + 1.0)
                        score_buf[ii] = ga / (ga + gb)
                else:
                    budget = _budget(float(count))
                    _klucb_scan(score_buf, cand, size, pulls, successes, budget)
                arm = cand[_argmax_tie(score_buf, size, pol_rng)]
        elif kind == 2:  # klucb over all arms
            budget = _budget(float(t))
            _klucb_scan(score_buf, all_arms, n_arms, pulls, successes, budget)
            arm = _argmax_tie(score_buf, n_arms, pol_rng)
        else:  # ts over all arms
            for k in range(n_arms):
                ga = _gamma_draw(pol_rng, successes[k] + 1.0)
                gb = _gamma_draw(pol_rng, pulls[k] - successes[k] + 1.0)
                score_buf[k] = ga / (ga + gb)
            arm = _argmax_tie(score_buf, n_arms, pol_rng)

        reward = 1 if env_rng.random() < means[arm] else 0
        pulls[arm] += 1
        successes[arm] += reward
        t += 1
        regret += mu_star - means[arm]
        if record:
            actions_out[t - 1] = arm

        if check_invariant and violation < 0 and gamma > 0 and kind <= 1:
            for k in range(n_arms):
                if pulls[k] < leader_counts[k] // gamma:
                    violation = t

        if ci < n_cp and t == checkpoints[ci]:
            regret_out[ci] = regret
            ci += 1

    return violation
