"""Bandit environments: rank-one instances, neighborhood graphs, unimodality checks.

Matrix entries are flattened row-major, vertex id = i * L + j, and every module
downstream uses that same ordering. Instances and graphs are immutable after
construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np


def _as_probability_vector(name: str, values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name}: expected a nonempty 1-d vector")
    for idx, val in enumerate(arr):
        if not 0.0 <= val <= 1.0:
            raise ValueError(f"{name}[{idx}] = {val}: probability out of range [0, 1]")
    arr.setflags(write=False)
    return arr


def _unique_argmax(name: str, arr: np.ndarray) -> int:
    top = np.flatnonzero(arr == arr.max())
    if top.size != 1:
        raise ValueError(
            f"{name}: argmax is not unique (entries {top.tolist()} tie at {arr.max()})"
        )
    return int(top[0])


@dataclass(frozen=True, eq=False)
class RankOneInstance:
    """A K x L Bernoulli bandit whose mean matrix is the outer product u v^T.

    Requires a unique best row and a unique best column, and at least one of
    the factors strictly positive everywhere (otherwise the mean matrix need
    not be unimodal on the row/column graph).
    """

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u", _as_probability_vector("u", self.u))
        object.__setattr__(self, "v", _as_probability_vector("v", self.v))
        if self.u.size < 2 or self.v.size < 2:
            raise ValueError("u and v must each have at least two entries")
        if not self.u.any() or not self.v.any():
            raise ValueError("u and v must be nonzero vectors")
        _unique_argmax("u", self.u)
        _unique_argmax("v", self.v)
        if not (np.all(self.u > 0.0) or np.all(self.v > 0.0)):
            raise ValueError("need u > 0 entrywise or v > 0 entrywise")

    @property
    def shape(self) -> tuple[int, int]:
        return self.u.size, self.v.size

    @property
    def i_star(self) -> int:
        return int(np.argmax(self.u))

    @property
    def j_star(self) -> int:
        return int(np.argmax(self.v))

    @property
    def best_entry(self) -> tuple[int, int]:
        return self.i_star, self.j_star


@dataclass(frozen=True, eq=False)
class UnimodalGraph:
    """Undirected graph given by per-vertex sorted neighbor lists.

    No self-edges; the adjacency must be symmetric.
    """

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("vertex_count must be positive")
        if len(self.adjacency) != self.vertex_count:
            raise ValueError("adjacency length must equal vertex_count")
        neighbor_sets = [frozenset(ns) for ns in self.adjacency]
        for k, ns in enumerate(self.adjacency):
            if list(ns) != sorted(set(ns)):
                raise ValueError(f"adjacency[{k}] must be sorted and duplicate-free")
            for other in ns:
                if other == k:
                    raise ValueError(f"self-edge at vertex {k}")
                if not 0 <= other < self.vertex_count:
                    raise ValueError(f"adjacency[{k}]: vertex {other} out of range")
                if k not in neighbor_sets[other]:
                    raise ValueError(f"edge ({k}, {other}) is not symmetric")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]]) -> "UnimodalGraph":
        neighbors: list[set[int]] = [set() for _ in range(vertex_count)]
        for edge in edges:
            a, b = int(edge[0]), int(edge[1])
            if a == b:
                raise ValueError(f"self-edge at vertex {a}")
            if not (0 <= a < vertex_count and 0 <= b < vertex_count):
                raise ValueError(f"edge ({a}, {b}): vertex out of range")
            neighbors[a].add(b)
            neighbors[b].add(a)
        return cls(vertex_count, tuple(tuple(sorted(ns)) for ns in neighbors))

    def neighbors(self, k: int) -> tuple[int, ...]:
        return self.adjacency[k]

    def extended_neighborhood(self, k: int) -> tuple[int, ...]:
        """The closed neighborhood: k together with its neighbors, sorted."""
        return tuple(sorted(self.adjacency[k] + (k,)))

    def degree(self, k: int) -> int:
        return len(self.adjacency[k])

    def extended_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Closed neighborhoods in CSR layout (ptr, idx), for the compiled engine."""
        ptr = np.zeros(self.vertex_count + 1, dtype=np.int64)
        chunks = []
        for k in range(self.vertex_count):
            nbhd = self.extended_neighborhood(k)
            chunks.append(np.asarray(nbhd, dtype=np.int64))
            ptr[k + 1] = ptr[k] + len(nbhd)
        idx = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
        ptr.setflags(write=False)
        idx.setflags(write=False)
        return ptr, idx


@lru_cache(maxsize=None)
def build_g1(K: int, L: int) -> UnimodalGraph:
    """Row/column graph on the K x L entries: (i,j) ~ (k,l) iff same row or column.

    Every vertex has degree K + L - 2 and the graph has diameter two.
    """
    if K < 2 or L < 2:
        raise ValueError(f"need K >= 2 and L >= 2, got K={K}, L={L}")
    adjacency = []
    for i in range(K):
        for j in range(L):
            row = [i * L + jj for jj in range(L) if jj != j]
            col = [ii * L + j for ii in range(K) if ii != i]
            adjacency.append(tuple(sorted(row + col)))
    return UnimodalGraph(K * L, tuple(adjacency))


def means_matrix(inst: RankOneInstance) -> np.ndarray:
    """Entry means u_i * v_j, flattened row-major to match build_g1 vertex ids."""
    means = np.outer(inst.u, inst.v).ravel()
    means.setflags(write=False)
    return means


@dataclass(frozen=True)
class UnimodalVerdict:
    """Outcome of a unimodality check; falsy when a violation was found."""

    ok: bool
    vertex: int | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "unimodal"
        return f"not unimodal: {self.reason} at vertex {self.vertex}"


def check_unimodal(graph: UnimodalGraph, means) -> UnimodalVerdict:
    """Verify a unique global maximizer reachable by strict ascent from everywhere.

    On a finite graph this is equivalent to the local condition: apart from the
    unique maximizer, every vertex has some neighbor with strictly larger mean
    (greedy ascent then terminates at the maximizer).
    """
    means = np.asarray(means, dtype=float)
    if means.ndim != 1 or means.size != graph.vertex_count:
        raise ValueError(
            f"means has length {means.size}, expected {graph.vertex_count}"
        )
    top = np.flatnonzero(means == means.max())
    if top.size != 1:
        return UnimodalVerdict(False, int(top[1]), "duplicate global maximizer")
    k_star = int(top[0])
    for k in range(graph.vertex_count):
        if k == k_star:
            continue
        if not any(means[n] > means[k] for n in graph.neighbors(k)):
            return UnimodalVerdict(False, k, "local maximum with no increasing edge")
    return UnimodalVerdict(True)


@dataclass(frozen=True, eq=False)
class UnimodalInstance:
    """A graph plus a mean vector certified unimodal at construction."""

    graph: UnimodalGraph
    means: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "means", _as_probability_vector("means", self.means)
        )
        verdict = check_unimodal(self.graph, self.means)
        if not verdict:
            raise ValueError(verdict.describe())

    @property
    def k_star(self) -> int:
        return int(np.argmax(self.means))


def increasing_path(
    inst: RankOneInstance, from_entry: tuple[int, int]
) -> list[tuple[int, int]]:
    """A strictly increasing path of at most two edges from an entry to the best one.

    Same row or column: the direct edge. Otherwise detour through the best row
    at (i_star, j) when v_j > 0, else through the best column at (i, j_star);
    consecutive entries always share a row or a column.
    """
    K, L = inst.shape
    i, j = from_entry
    if not (0 <= i < K and 0 <= j < L):
        raise ValueError(f"entry {from_entry} out of range for shape {inst.shape}")
    i_star, j_star = inst.best_entry
    if (i, j) == (i_star, j_star):
        raise ValueError("path must start at a suboptimal entry")
    if i == i_star or j == j_star:
        return [(i, j), (i_star, j_star)]
    if inst.v[j] > 0.0:
        return [(i, j), (i_star, j), (i_star, j_star)]
    return [(i, j), (i, j_star), (i_star, j_star)]


def sample_reward(means, arm: int, rng: np.random.Generator) -> int:
    """One Bernoulli reward from the given arm."""
    means = np.asarray(means, dtype=float)
    if not 0 <= arm < means.size:
        raise ValueError(f"arm {arm} out of range [0, {means.size})")
    return 1 if rng.random() < means[arm] else 0


def random_rank_one(
    K: int, L: int, rng: np.random.Generator, low: float = 0.05, high: float = 0.95
) -> RankOneInstance:
    """A random instance with strictly positive factors and unique argmaxes."""
    while True:
        u = low + (high - low) * rng.random(K)
        v = low + (high - low) * rng.random(L)
        if (
            np.flatnonzero(u == u.max()).size == 1
            and np.flatnonzero(v == v.max()).size == 1
        ):
            return RankOneInstance(u, v)
