import math

import numpy as np
import pytest

from unibandit import (
    Policy,
    PolicySpec,
    UnimodalGraph,
    beta_cdf_via_binomial,
    build_g1,
    exploration_budget_f,
    means_matrix,
)
from unibandit.policies import parse_gamma

G22 = build_g1(2, 2)
G44 = build_g1(4, 4)
F100 = 9.186709063411795  # ln(100) + 3 ln(ln(100)), 50-digit evaluation


def _init_policy(spec: PolicySpec, graph: UnimodalGraph, means, env_rng) -> Policy:
    policy = Policy(spec, graph)
    for arm in range(graph.vertex_count):
        policy.update(arm, 1 if env_rng.random() < means[arm] else 0)
    return policy


def _step(policy: Policy, means, env_rng, pol_rng) -> int:
    arm = policy.select(pol_rng)
    policy.update(arm, 1 if env_rng.random() < means[arm] else 0)
    return arm


class TestPolicySpec:
    def test_labels(self):
        assert PolicySpec("uts", 2).label == "uts(gamma=2)"
        assert PolicySpec("uts", math.inf).label == "uts(gamma=inf)"
        assert PolicySpec("osub", 7).label == "osub(gamma=7)"
        assert PolicySpec("klucb").label == "klucb"
        assert PolicySpec("ts").label == "ts"

    def test_gamma_lower_limit(self):
        with pytest.raises(ValueError, match="gamma >= 2"):
            PolicySpec("uts", 1)
        with pytest.raises(ValueError, match="gamma >= 2"):
            PolicySpec("osub", 0)
        PolicySpec("uts", 2)

    def test_infinite_gamma_only_for_uts(self):
        assert PolicySpec("uts", math.inf).gamma == math.inf
        with pytest.raises(ValueError, match="finite"):
            PolicySpec("osub", math.inf)

    def test_gamma_required_or_forbidden(self):
        with pytest.raises(ValueError, match="gamma is required"):
            PolicySpec("uts")
        with pytest.raises(ValueError, match="not a parameter"):
            PolicySpec("klucb", 2)

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown policy kind"):
            PolicySpec("rank1elim", 2)

    def test_from_config(self):
        assert PolicySpec.from_config({"kind": "uts", "gamma": 2}) == PolicySpec("uts", 2)
        assert PolicySpec.from_config({"kind": "UTS", "gamma": "inf"}).gamma == math.inf
        with pytest.raises(ValueError, match="unknown fields"):
            PolicySpec.from_config({"kind": "ts", "alpha": 1})

    def test_parse_gamma(self):
        assert parse_gamma(None) is None
        assert parse_gamma(5) == 5
        assert parse_gamma("inf") == math.inf
        assert parse_gamma(float("inf")) == math.inf
        with pytest.raises(ValueError):
            parse_gamma("two")
        with pytest.raises(ValueError):
            parse_gamma(2.5)


class TestExplorationBudget:
    def test_anchor_values(self):
        assert exploration_budget_f(1) == 0.0
        assert exploration_budget_f(math.e) == pytest.approx(1.0, abs=1e-12)
        assert exploration_budget_f(100) == pytest.approx(F100, abs=1e-12)

    def test_nondecreasing(self):
        values = [exploration_budget_f(n) for n in range(1, 2000)]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_domain(self):
        with pytest.raises(ValueError):
            exploration_budget_f(0)


class TestLeader:
    def test_unique_argmax(self, rng):
        graph = UnimodalGraph.from_edges(3, [(0, 1), (1, 2)])
        policy = Policy(PolicySpec("ts"), graph)
        for arm, (n, s) in enumerate([(10, 2), (10, 9), (10, 5)]):
            policy.pulls[arm] = n
            policy.successes[arm] = s
        assert policy.leader(rng) == 1

    def test_tie_broken_uniformly(self):
        graph = UnimodalGraph.from_edges(3, [(0, 1), (1, 2)])
        policy = Policy(PolicySpec("ts"), graph)
        for arm, (n, s) in enumerate([(10, 9), (10, 9), (10, 5)]):
            policy.pulls[arm] = n
            policy.successes[arm] = s
        rng = np.random.default_rng(4)
        picks = np.array([policy.leader(rng) for _ in range(10_000)])
        assert set(picks) == {0, 1}
        assert abs(np.mean(picks == 0) - 0.5) < 0.02

    def test_single_arm(self, rng):
        policy = Policy(PolicySpec("ts"), UnimodalGraph(1, ((),)))
        policy.pulls[0] = 1
        assert policy.leader(rng) == 0

    def test_uninitialized_arm_rejected(self, rng):
        policy = Policy(PolicySpec("ts"), G22)
        policy.pulls[:2] = 1
        with pytest.raises(ValueError, match="initialization incomplete"):
            policy.leader(rng)


class TestUpdate:
    def test_counter_arithmetic(self):
        policy = Policy(PolicySpec("ts"), G22)
        policy.pulls[1], policy.successes[1] = 3, 1
        policy.t = 17
        policy.update(1, 1)
        assert (policy.pulls[1], policy.successes[1]) == (4, 2)
        policy.update(1, 0)
        assert (policy.pulls[1], policy.successes[1]) == (5, 2)
        assert policy.t == 19
        assert policy.pulls[0] == 0 and policy.successes[0] == 0

    def test_reward_domain(self):
        policy = Policy(PolicySpec("ts"), G22)
        with pytest.raises(ValueError, match="must be 0 or 1"):
            policy.update(0, 2)


class TestSelectUts:
    def test_select_requires_initialization(self, rng):
        policy = Policy(PolicySpec("uts", 2), G22)
        with pytest.raises(ValueError, match="initialization incomplete"):
            policy.select(rng)

    def test_even_leader_count_returns_leader(self, k4_instance):
        means = means_matrix(k4_instance)
        env = np.random.default_rng(0)
        pol = np.random.default_rng(1)
        policy = _init_policy(PolicySpec("uts", 2), G44, means, env)
        # force a known leader and an odd count: the next increment makes it even
        policy.pulls[:] = 10
        policy.successes[:] = 1
        policy.successes[5] = 9
        policy.leader_counts[5] = 1
        arm = policy.select(pol)
        assert arm == 5
        assert policy.last_was_exploration
        assert policy.leader_counts[5] == 2

    def test_sampling_round_stays_in_neighborhood(self, k4_instance):
        means = means_matrix(k4_instance)
        env = np.random.default_rng(2)
        pol = np.random.default_rng(3)
        policy = _init_policy(PolicySpec("uts", 2), G44, means, env)
        for _ in range(3000):
            arm = _step(policy, means, env, pol)
            leader = policy.last_leader
            if policy.last_was_exploration:
                assert arm == leader
            else:
                assert arm in G44.extended_neighborhood(leader)
                assert len(G44.extended_neighborhood(leader)) == 7

    def test_infinite_gamma_never_forces_replay(self, k4_instance):
        means = means_matrix(k4_instance)
        env = np.random.default_rng(4)
        pol = np.random.default_rng(5)
        policy = _init_policy(PolicySpec("uts", math.inf), G44, means, env)
        for _ in range(2000):
            _step(policy, means, env, pol)
            assert policy.last_was_exploration is False

    def test_leader_count_increments_every_round(self, k4_instance):
        means = means_matrix(k4_instance)
        env = np.random.default_rng(6)
        pol = np.random.default_rng(7)
        policy = _init_policy(PolicySpec("uts", 5), G44, means, env)
        for round_index in range(1, 1001):
            _step(policy, means, env, pol)
            assert int(policy.leader_counts.sum()) == round_index


class TestSelectOsub:
    def test_first_leadership_is_checked(self, k4_instance):
        # a fresh leader has count 1, and 1 = 1 mod gamma forces its replay
        means = means_matrix(k4_instance)
        env = np.random.default_rng(8)
        pol = np.random.default_rng(9)
        policy = _init_policy(PolicySpec("osub", 7), G44, means, env)
        policy.pulls[:] = 10
        policy.successes[:] = 1
        policy.successes[9] = 9
        arm = policy.select(pol)
        assert arm == 9
        assert policy.last_was_exploration

    def test_sampling_round_uses_neighborhood_indices(self, k4_instance):
        means = means_matrix(k4_instance)
        env = np.random.default_rng(10)
        pol = np.random.default_rng(11)
        policy = _init_policy(PolicySpec("osub", 7), G44, means, env)
        for _ in range(2000):
            arm = _step(policy, means, env, pol)
            leader = policy.last_leader
            if not policy.last_was_exploration:
                assert arm in G44.extended_neighborhood(leader)


class TestSelectKlucb:
    def test_symmetric_start_breaks_ties_uniformly(self):
        # two arms, both at N=1, S=0, t=2: budget ln 2 makes both indices 1/2
        graph2 = UnimodalGraph.from_edges(2, [(0, 1)])
        picks = []
        for seed in range(4000):
            policy = Policy(PolicySpec("klucb"), graph2)
            policy.pulls[:] = 1
            policy.successes[:] = 0
            policy.t = 2
            picks.append(policy.select(np.random.default_rng(seed)))
        assert np.allclose(policy.last_scores, 0.5, atol=1e-9)
        assert abs(np.mean(np.array(picks) == 0) - 0.5) < 0.03

    def test_budget_uses_completed_rounds(self, k4_instance):
        means = means_matrix(k4_instance)
        env = np.random.default_rng(12)
        policy = _init_policy(PolicySpec("klucb"), G44, means, env)
        assert policy.t == 16
        policy.select(np.random.default_rng(0))
        # all sixteen arms scored
        assert policy.last_candidates.size == 16


class TestInvariants:
    @pytest.mark.parametrize(
        "spec",
        [PolicySpec("uts", 2), PolicySpec("uts", 5), PolicySpec("osub", 7)],
        ids=lambda s: s.label,
    )
    def test_leader_exploration_invariant(self, spec, k4_instance):
        means = means_matrix(k4_instance)
        env = np.random.default_rng(13)
        pol = np.random.default_rng(14)
        policy = _init_policy(spec, G44, means, env)
        gamma = spec.gamma
        for _ in range(20_000):
            _step(policy, means, env, pol)
            assert np.all(policy.pulls >= policy.leader_counts // gamma)

    @pytest.mark.parametrize("kind, gamma", [("uts", 2), ("osub", 7), ("klucb", None), ("ts", None)])
    def test_budget_conservation(self, kind, gamma, k4_instance):
        means = means_matrix(k4_instance)
        spec = PolicySpec(kind, gamma)
        env = np.random.default_rng(15)
        pol = np.random.default_rng(16)
        policy = _init_policy(spec, G44, means, env)
        for round_index in range(1, 501):
            _step(policy, means, env, pol)
            assert int(policy.pulls.sum()) == policy.t == 16 + round_index
            if kind in ("uts", "osub"):
                assert int(policy.leader_counts.sum()) == round_index

    @pytest.mark.parametrize("kind, gamma", [("uts", 2), ("osub", 7), ("klucb", None), ("ts", None)])
    def test_determinism(self, kind, gamma, k4_instance):
        means = means_matrix(k4_instance)
        spec = PolicySpec(kind, gamma)
        sequences = []
        for _ in range(2):
            env = np.random.default_rng(17)
            pol = np.random.default_rng(18)
            policy = _init_policy(spec, G44, means, env)
            sequences.append([_step(policy, means, env, pol) for _ in range(2000)])
        assert sequences[0] == sequences[1]


class TestPosteriorCorrectness:
    def test_sampling_branch_matches_beta_posterior(self):
        # freeze the arm statistics and harvest the posterior draw of one arm
        # over many sampling rounds; its empirical law must match the
        # Beta(S+1, N-S+1) CDF computed through the binomial identity
        policy = Policy(PolicySpec("uts", math.inf), G22)
        policy.pulls[:] = [5, 3, 2, 4]
        policy.successes[:] = [4, 1, 1, 1]
        policy.t = 14
        pol = np.random.default_rng(19)
        draws = np.empty(100_000)
        for i in range(draws.size):
            policy.select(pol)
            cands = policy.last_candidates
            draws[i] = policy.last_scores[np.flatnonzero(cands == 1)[0]]
        cdf_values = np.asarray(beta_cdf_via_binomial(2, 3, draws))
        order = np.argsort(draws)
        n = draws.size
        ecdf_hi = np.arange(1, n + 1) / n
        ecdf_lo = np.arange(0, n) / n
        ks = max(
            float(np.max(ecdf_hi - cdf_values[order])),
            float(np.max(cdf_values[order] - ecdf_lo)),
        )
        assert ks < 0.01
