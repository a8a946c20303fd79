import numpy as np
import pytest

from unibandit import (
    RankOneInstance,
    UnimodalGraph,
    UnimodalInstance,
    build_g1,
    check_unimodal,
    increasing_path,
    means_matrix,
    random_rank_one,
    sample_reward,
)

PATH3 = UnimodalGraph.from_edges(3, [(0, 1), (1, 2)])


class TestRankOneInstance:
    def test_valid(self, k4_instance):
        assert k4_instance.shape == (4, 4)
        assert k4_instance.best_entry == (0, 0)

    def test_probability_range(self):
        with pytest.raises(ValueError, match=r"u\[1\] = 1.3: probability out of range"):
            RankOneInstance([0.5, 1.3], [0.5, 0.2])

    def test_unique_argmax_required(self):
        with pytest.raises(ValueError, match="argmax is not unique"):
            RankOneInstance([0.5, 0.5], [0.7, 0.2])

    def test_positivity_requirement(self):
        # a zero in each factor is rejected, a zero in only one is allowed
        with pytest.raises(ValueError, match="u > 0 entrywise or v > 0"):
            RankOneInstance([0.9, 0.0], [0.8, 0.0])
        RankOneInstance([0.9, 0.5], [0.8, 0.0])

    def test_nonzero_vectors(self):
        with pytest.raises(ValueError):
            RankOneInstance([0.0, 0.0], [0.7, 0.2])

    def test_immutable(self, k4_instance):
        with pytest.raises(ValueError):
            k4_instance.u[0] = 0.1


class TestBuildG1:
    def test_small_sizes_rejected(self):
        with pytest.raises(ValueError):
            build_g1(1, 4)
        with pytest.raises(ValueError):
            build_g1(4, 1)

    def test_degrees(self):
        for K, L in [(2, 2), (4, 4), (3, 5)]:
            g = build_g1(K, L)
            assert g.vertex_count == K * L
            assert all(g.degree(k) == K + L - 2 for k in range(K * L))

    def test_neighborhood_of_entry_22(self):
        # entry (2, 2) of the 4x4 grid: six neighbors on its row and column
        g = build_g1(4, 4)
        v = 2 * 4 + 2
        assert g.degree(v) == 6
        assert len(g.extended_neighborhood(v)) == 7
        assert set(g.neighbors(v)) == {8, 9, 11, 2, 6, 14}

    def test_smallest_case_excludes_diagonal(self):
        g = build_g1(2, 2)
        assert set(g.neighbors(0)) == {1, 2}  # (0,1) and (1,0), not (1,1)

    def test_row_major_vertex_order(self, k4_instance):
        means = means_matrix(k4_instance)
        u, v = k4_instance.u, k4_instance.v
        for i in range(4):
            for j in range(4):
                assert means[i * 4 + j] == u[i] * v[j]

    def test_diameter_two(self):
        g = build_g1(4, 5)
        n = g.vertex_count
        for s in range(n):
            dist = {s: 0}
            frontier = [s]
            while frontier:
                nxt = []
                for a in frontier:
                    for b in g.neighbors(a):
                        if b not in dist:
                            dist[b] = dist[a] + 1
                            nxt.append(b)
                frontier = nxt
            assert len(dist) == n
            assert max(dist.values()) <= 2


class TestUnimodalGraph:
    def test_self_edge_rejected(self):
        with pytest.raises(ValueError, match="self-edge"):
            UnimodalGraph.from_edges(3, [(0, 0)])

    def test_symmetry_enforced(self):
        with pytest.raises(ValueError, match="not symmetric"):
            UnimodalGraph(2, ((1,), ()))

    def test_extended_neighborhood_sorted(self):
        g = UnimodalGraph.from_edges(4, [(2, 0), (2, 3)])
        assert g.extended_neighborhood(2) == (0, 2, 3)


class TestMeansMatrix:
    def test_experiment_instance_entries(self, k4_instance):
        means = means_matrix(k4_instance)
        assert means[0] == pytest.approx(0.5625)
        assert means[1] == pytest.approx(0.1875)
        assert means[5] == pytest.approx(0.0625)

    def test_direct_products(self):
        inst = RankOneInstance([1.0, 0.5], [1.0, 0.5])
        assert means_matrix(inst) == pytest.approx([1.0, 0.5, 0.5, 0.25])

    def test_unique_maximum_at_best_entry(self, rng):
        for _ in range(50):
            inst = random_rank_one(int(rng.integers(2, 6)), int(rng.integers(2, 6)), rng)
            means = means_matrix(inst)
            i, j = inst.best_entry
            L = inst.shape[1]
            assert np.flatnonzero(means == means.max()).tolist() == [i * L + j]


class TestCheckUnimodal:
    def test_rank_one_on_g1(self, k4_instance):
        verdict = check_unimodal(build_g1(4, 4), means_matrix(k4_instance))
        assert verdict.ok
        assert verdict.describe() == "unimodal"

    def test_duplicate_maximum(self):
        verdict = check_unimodal(PATH3, [0.5, 0.1, 0.5])
        assert not verdict
        assert verdict.reason == "duplicate global maximizer"
        assert verdict.vertex == 2

    def test_local_maximum(self):
        verdict = check_unimodal(PATH3, [0.5, 0.1, 0.4])
        assert not verdict
        assert verdict.vertex == 2
        assert "local maximum" in verdict.reason

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length"):
            check_unimodal(PATH3, [0.5, 0.1])

    def test_rank_one_always_unimodal(self, rng):
        # executable form of the structural claim, at property scale
        for _ in range(200):
            K = int(rng.integers(2, 7))
            L = int(rng.integers(2, 7))
            inst = random_rank_one(K, L, rng)
            assert check_unimodal(build_g1(K, L), means_matrix(inst)).ok


class TestUnimodalInstance:
    def test_accepts_unimodal(self):
        inst = UnimodalInstance(PATH3, [0.9, 0.5, 0.4])
        assert inst.k_star == 0

    def test_rejects_violation(self):
        with pytest.raises(ValueError, match="local maximum"):
            UnimodalInstance(PATH3, [0.5, 0.1, 0.4])

    def test_rejects_bad_probability(self):
        with pytest.raises(ValueError, match="probability out of range"):
            UnimodalInstance(PATH3, [0.9, 0.5, 1.4])


class TestIncreasingPath:
    def test_detour_through_best_row(self, k4_instance):
        assert increasing_path(k4_instance, (2, 2)) == [(2, 2), (0, 2), (0, 0)]

    def test_same_row_direct_edge(self, k4_instance):
        assert increasing_path(k4_instance, (0, 2)) == [(0, 2), (0, 0)]

    def test_zero_column_forces_column_detour(self):
        inst = RankOneInstance([0.9, 0.5], [0.8, 0.0])
        path = increasing_path(inst, (1, 1))
        assert path == [(1, 1), (1, 0), (0, 0)]
        means = [inst.u[i] * inst.v[j] for i, j in path]
        assert means == sorted(means) and len(set(means)) == 3

    def test_rejects_best_entry(self, k4_instance):
        with pytest.raises(ValueError, match="suboptimal"):
            increasing_path(k4_instance, (0, 0))

    def test_strictly_increasing_everywhere(self, rng):
        for _ in range(100):
            K = int(rng.integers(2, 6))
            L = int(rng.integers(2, 6))
            inst = random_rank_one(K, L, rng)
            for i in range(K):
                for j in range(L):
                    if (i, j) == inst.best_entry:
                        continue
                    path = increasing_path(inst, (i, j))
                    assert 2 <= len(path) <= 3
                    assert path[-1] == inst.best_entry
                    means = [inst.u[a] * inst.v[b] for a, b in path]
                    assert all(x < y for x, y in zip(means, means[1:]))
                    for (a, b), (c, d) in zip(path, path[1:]):
                        assert a == c or b == d


class TestSampleReward:
    def test_degenerate_means(self, rng):
        assert all(sample_reward([1.0, 0.3], 0, rng) == 1 for _ in range(50))
        assert all(sample_reward([0.0, 0.3], 0, rng) == 0 for _ in range(50))

    def test_empirical_mean(self):
        rng = np.random.default_rng(99)
        draws = sum(sample_reward([0.5], 0, rng) for _ in range(100_000))
        assert abs(draws / 100_000 - 0.5) < 0.006  # 3-sigma band

    def test_out_of_range_arm(self, rng):
        with pytest.raises(ValueError, match="out of range"):
            sample_reward([0.5, 0.5], 2, rng)
