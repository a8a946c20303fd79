"""Closed-form asymptotic regret constants (coefficients of ln T).

For a unimodal instance the constant sums gap/kl over the neighbors of the
unique maximizer only; the unstructured (full-sum) constant ranges over every
suboptimal arm and serves as the reference line for vanilla kl-UCB. A term
whose divergence is infinite (best mean equal to 1) contributes zero in the
limit; such vertices are flagged in the report rather than dropped silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import RankOneInstance, UnimodalGraph, check_unimodal, means_matrix
from .stats_kernel import kl_bernoulli


@dataclass(frozen=True)
class BoundTerm:
    vertex: int
    gap: float
    kl_value: float
    term: float


@dataclass(frozen=True)
class BoundReport:
    """A lower-bound constant with its per-arm decomposition."""

    constant: float
    per_arm_terms: tuple[BoundTerm, ...]
    flagged: tuple[int, ...]  # vertices whose divergence is infinite (term = 0)

    def term_for(self, vertex: int) -> BoundTerm:
        for term in self.per_arm_terms:
            if term.vertex == vertex:
                return term
        raise KeyError(f"no term for vertex {vertex}")


def _report(means: np.ndarray, mu_star: float, vertices) -> BoundReport:
    terms = []
    flagged = []
    for k in vertices:
        gap = mu_star - means[k]
        kl_value = kl_bernoulli(means[k], mu_star)
        if math.isinf(kl_value):
            flagged.append(k)
            terms.append(BoundTerm(k, gap, kl_value, 0.0))
        else:
            terms.append(BoundTerm(k, gap, kl_value, gap / kl_value))
    constant = math.fsum(t.term for t in terms)
    return BoundReport(constant, tuple(terms), tuple(flagged))


def lower_bound_rank1(inst: RankOneInstance) -> BoundReport:
    """Constant over the best column and best row of a rank-one instance."""
    K, L = inst.shape
    i_star, j_star = inst.best_entry
    means = means_matrix(inst)
    mu_star = float(means[i_star * L + j_star])
    vertices = [i * L + j_star for i in range(K) if i != i_star]
    vertices += [i_star * L + j for j in range(L) if j != j_star]
    return _report(means, mu_star, vertices)


def lower_bound_unimodal(graph: UnimodalGraph, means) -> BoundReport:
    """Constant over the neighbors of the unique maximizer of a unimodal vector."""
    means = np.asarray(means, dtype=float)
    verdict = check_unimodal(graph, means)
    if not verdict:
        raise ValueError(verdict.describe())
    k_star = int(np.argmax(means))
    return _report(means, float(means[k_star]), graph.neighbors(k_star))


def lai_robbins_constant(means) -> BoundReport:
    """Unstructured-bandit constant: the sum over every suboptimal arm."""
    means = np.asarray(means, dtype=float)
    top = np.flatnonzero(means == means.max())
    if top.size != 1:
        raise ValueError(
            f"means: argmax is not unique (entries {top.tolist()} tie at {means.max()})"
        )
    k_star = int(top[0])
    vertices = [k for k in range(means.size) if k != k_star]
    return _report(means, float(means[k_star]), vertices)


def instance_lower_bound(instance) -> BoundReport:
    """The structured lower-bound report for either instance flavor."""
    if isinstance(instance, RankOneInstance):
        return lower_bound_rank1(instance)
    return lower_bound_unimodal(instance.graph, instance.means)
