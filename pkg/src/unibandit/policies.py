"""Sequential decision policies sharing one select/update interface.

Four kinds are registered: ``uts`` (Thompson sampling restricted to the closed
neighborhood of the empirical leader, with periodic forced replay of the
leader), ``osub`` (the kl-UCB analogue of the same restriction, with the
exploration budget driven by the leader count), ``klucb`` (vanilla kl-UCB over
all arms) and ``ts`` (vanilla Thompson sampling). Further comparators, e.g.
staged elimination schemes, can be added by extending ``KINDS`` and the
dispatch in :meth:`Policy.select`; none are currently implemented.

Every policy pulls each arm exactly once, in vertex order, before the main
loop; the harness performs those initialization pulls through
:meth:`Policy.update`. Argmax ties (leader, posterior samples, indices) are
broken uniformly at random with the caller's generator, and the generator is
consumed in a fixed documented order so that runs are exactly reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import UnimodalGraph
from .stats_kernel import _gamma_from_uniforms, _klucb_core

KINDS = ("uts", "osub", "klucb", "ts")


def _budget_core(n: float) -> float:
    log_n = math.log(n)
    return log_n + 3.0 * math.log(max(log_n, 1.0))


def exploration_budget_f(n) -> float:
    """Exploration budget ln(n) + 3 ln(max(ln n, 1)) used by the kl-UCB indices."""
    if n < 1:
        raise ValueError(f"n = {n}: budget argument must be >= 1")
    return _budget_core(float(n))


@dataclass(frozen=True)
class PolicySpec:
    """Tagged policy configuration: a kind plus, for uts/osub, the replay period.

    ``gamma`` is an integer >= 2; every gamma-th time an arm holds the lead it
    is replayed outright, which guarantees pulls >= floor(lead count / gamma).
    ``gamma = inf`` disables that forced replay and is supported for uts only.
    """

    kind: str
    gamma: int | float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(
                f"unknown policy kind {self.kind!r}; expected one of {', '.join(KINDS)}"
            )
        if self.kind in ("uts", "osub"):
            if self.gamma is None:
                raise ValueError(f"{self.kind}: gamma is required")
            if self.gamma == math.inf:
                if self.kind == "osub":
                    raise ValueError("osub: gamma must be finite (>= 2)")
                return
            if float(self.gamma) != int(self.gamma) or int(self.gamma) < 2:
                raise ValueError(
                    f"gamma = {self.gamma}: leader exploration requires an integer"
                    " gamma >= 2 (or inf to disable it for uts)"
                )
            object.__setattr__(self, "gamma", int(self.gamma))
        elif self.gamma is not None:
            raise ValueError(f"{self.kind}: gamma is not a parameter of this policy")

    @property
    def label(self) -> str:
        if self.kind in ("uts", "osub"):
            g = "inf" if self.gamma == math.inf else str(self.gamma)
            return f"{self.kind}(gamma={g})"
        return self.kind

    @classmethod
    def from_config(cls, raw: dict) -> "PolicySpec":
        if not isinstance(raw, dict) or "kind" not in raw:
            raise ValueError(f"policy entry {raw!r}: expected a mapping with a 'kind'")
        extra = set(raw) - {"kind", "gamma"}
        if extra:
            raise ValueError(f"policy entry: unknown fields {sorted(extra)}")
        return cls(str(raw["kind"]).lower(), parse_gamma(raw.get("gamma")))


def parse_gamma(value) -> int | float | None:
    """Accept an integer, the string 'inf', or a float infinity."""
    if value is None:
        return None
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", ".inf"):
            return math.inf
        raise ValueError(f"gamma = {value!r}: expected an integer or 'inf'")
    if value == math.inf:
        return math.inf
    if float(value) != int(value):
        raise ValueError(f"gamma = {value}: expected an integer or 'inf'")
    return int(value)


def _argmax_tiebreak(values: np.ndarray, rng: np.random.Generator) -> int:
    """Index of the maximum; exact ties are resolved uniformly at random.

    Draws from ``rng`` only when there is more than one maximizer.
    """
    best = np.flatnonzero(values == values.max())
    if best.size == 1:
        return int(best[0])
    return int(best[rng.integers(0, best.size)])


class Policy:
    """Mutable per-run policy state plus the selection rules of all kinds.

    State: per-arm pull counts, success counts and leadership counts, the
    number of completed rounds ``t``, and instrumentation from the latest
    selection (``last_leader``, ``last_was_exploration``, ``last_candidates``,
    ``last_scores``).
    """

    def __init__(self, spec: PolicySpec, graph: UnimodalGraph):
        self.spec = spec
        self.graph = graph
        self.n_arms = graph.vertex_count
        self.pulls = np.zeros(self.n_arms, dtype=np.int64)
        self.successes = np.zeros(self.n_arms, dtype=np.int64)
        self.leader_counts = np.zeros(self.n_arms, dtype=np.int64)
        self.t = 0
        self.last_leader: int | None = None
        self.last_was_exploration: bool | None = None
        self.last_candidates: np.ndarray | None = None
        self.last_scores: np.ndarray | None = None
        self._nplus = [
            np.asarray(graph.extended_neighborhood(k), dtype=np.int64)
            for k in range(self.n_arms)
        ]

    @property
    def mu_hat(self) -> np.ndarray:
        """Empirical means; requires every arm pulled at least once."""
        self._require_initialized()
        return self.successes / self.pulls

    def _require_initialized(self) -> None:
        if np.any(self.pulls == 0):
            raise ValueError(
                "initialization incomplete: every arm must be pulled once first"
            )

    def leader(self, rng: np.random.Generator) -> int:
        """Arm with the largest empirical mean, ties uniform at random."""
        return _argmax_tiebreak(self.mu_hat, rng)

    def select(self, rng: np.random.Generator) -> int:
        """Choose the arm for the next round. Requires initialization complete."""
        mu_hat = self.mu_hat
        kind = self.spec.kind

        if kind in ("uts", "osub"):
            leader = _argmax_tiebreak(mu_hat, rng)
            self.leader_counts[leader] += 1
            count = int(self.leader_counts[leader])
            self.last_leader = leader
            gamma = self.spec.gamma
            if kind == "uts":
                forced = gamma != math.inf and count % gamma == 0
            else:
                forced = count % gamma == 1
            if forced:
                self.last_was_exploration = True
                self.last_candidates = None
                self.last_scores = None
                return leader
            candidates = self._nplus[leader]
            if kind == "uts":
                scores = self._posterior_draws(candidates, rng)
            else:
                budget = exploration_budget_f(count)
                scores = self._klucb_scores(candidates, mu_hat, budget)
            self.last_was_exploration = False
            self.last_candidates = candidates
            self.last_scores = scores
            return int(candidates[_argmax_tiebreak(scores, rng)])

        self.last_leader = None
        self.last_was_exploration = False
        all_arms = np.arange(self.n_arms, dtype=np.int64)
        if kind == "klucb":
            budget = exploration_budget_f(self.t)
            scores = self._klucb_scores(all_arms, mu_hat, budget)
        else:  # ts
            scores = self._posterior_draws(all_arms, rng)
        self.last_candidates = all_arms
        self.last_scores = scores
        return _argmax_tiebreak(scores, rng)

    def _posterior_draws(
        self, candidates: np.ndarray, rng: np.random.Generator
    ) -> np.ndarray:
        # fresh Beta(S+1, N-S+1) draws in ascending vertex order; the gamma
        # cores consume the same uniform stream as the compiled engine
        scores = np.empty(candidates.size)
        for i, k in enumerate(candidates):
            ga = _gamma_from_uniforms(rng, float(self.successes[k] + 1))
            gb = _gamma_from_uniforms(
                rng, float(self.pulls[k] - self.successes[k] + 1)
            )
            scores[i] = ga / (ga + gb)
        return scores

    def _klucb_scores(
        self, candidates: np.ndarray, mu_hat: np.ndarray, budget: float
    ) -> np.ndarray:
        scores = np.empty(candidates.size)
        for i, k in enumerate(candidates):
            scores[i] = _klucb_core(mu_hat[k], float(self.pulls[k]), budget)
        return scores

    def update(self, arm: int, reward: int) -> None:
        """Credit one observed reward to ``arm`` and advance the round counter."""
        if reward not in (0, 1):
            raise ValueError(f"reward = {reward}: must be 0 or 1")
        if not 0 <= arm < self.n_arms:
            raise ValueError(f"arm {arm} out of range [0, {self.n_arms})")
        self.pulls[arm] += 1
        self.successes[arm] += reward
        self.t += 1
