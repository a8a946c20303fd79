"""Monte-Carlo regret experiments: seeded trajectories, aggregation, CSV output.

A run accumulates pseudo-regret (the mean gap of the selected arm, not the
realized reward difference) and records it on a logarithmic checkpoint grid.
Each (policy, run) pair gets its own seed derived from the base seed, expanded
into separate environment and policy streams, so results do not depend on how
runs are scheduled across workers and reward noise is not shared between
policies.

Two trajectory engines produce identical results: a compiled one (the
default) and an interpreted reference built on :class:`unibandit.policies.Policy`.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _engine
from .bounds import BoundReport, instance_lower_bound
from .model import RankOneInstance, UnimodalGraph, UnimodalInstance, build_g1, means_matrix
from .policies import Policy, PolicySpec

ENGINES = ("compiled", "python")


def instance_arms(instance) -> tuple[UnimodalGraph, np.ndarray]:
    """The (graph, means) pair a policy plays on, for either instance flavor."""
    if isinstance(instance, RankOneInstance):
        K, L = instance.shape
        return build_g1(K, L), means_matrix(instance)
    return instance.graph, instance.means


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """Everything one experiment needs: instance, policies, horizon, seeding, grid.

    ``grid`` is the number of log-spaced checkpoints between the arm count and
    the horizon; ``checkpoints`` overrides the grid with explicit times (must
    be strictly increasing and end at the horizon).
    """

    instance: RankOneInstance | UnimodalInstance
    policies: tuple[PolicySpec, ...]
    horizon: int
    runs: int
    base_seed: int
    grid: int = 200
    checkpoints: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "policies", tuple(self.policies))
        if not self.policies:
            raise ValueError("policies: need at least one policy")
        if self.runs < 1:
            raise ValueError(f"runs = {self.runs}: must be >= 1")
        if self.base_seed < 0:
            raise ValueError(f"seed = {self.base_seed}: must be nonnegative")
        if self.horizon < self.n_arms:
            raise ValueError(
                f"horizon = {self.horizon}: must cover the {self.n_arms}-arm"
                " initialization"
            )
        if self.checkpoints is not None:
            cps = tuple(int(c) for c in self.checkpoints)
            if not cps or any(b <= a for a, b in zip(cps, cps[1:])):
                raise ValueError("checkpoints: must be strictly increasing")
            if cps[0] < 1 or cps[-1] != self.horizon:
                raise ValueError("checkpoints: must lie in [1, horizon] and end at it")
            object.__setattr__(self, "checkpoints", cps)
        elif self.grid < 2:
            raise ValueError(f"grid = {self.grid}: need at least 2 checkpoints")

    @property
    def n_arms(self) -> int:
        graph, _ = instance_arms(self.instance)
        return graph.vertex_count

    def checkpoint_array(self) -> np.ndarray:
        if self.checkpoints is not None:
            return np.asarray(self.checkpoints, dtype=np.int64)
        first = min(self.n_arms, self.horizon)
        cps = np.unique(
            np.rint(np.geomspace(first, self.horizon, self.grid)).astype(np.int64)
        )
        cps = cps[(cps >= 1) & (cps <= self.horizon)]
        if cps[-1] != self.horizon:
            cps = np.append(cps, self.horizon)
        return cps


@dataclass(frozen=True, eq=False)
class RegretTrace:
    """Cumulative pseudo-regret of one run, sampled at the checkpoint times."""

    checkpoints: np.ndarray
    regret: np.ndarray
    seed: int


@dataclass(frozen=True, eq=False)
class PolicyAggregate:
    spec: PolicySpec
    label: str
    mean: np.ndarray
    p10: np.ndarray
    p90: np.ndarray
    traces: tuple[RegretTrace, ...]


@dataclass(frozen=True, eq=False)
class AggregateResult:
    config: ExperimentConfig
    checkpoints: np.ndarray
    policies: tuple[PolicyAggregate, ...]
    lower_bound: BoundReport
    lb_curve: np.ndarray


def derive_run_seed(base_seed: int, policy_index: int, run_index: int) -> int:
    """Deterministic per-run seed; independent of scheduling and worker count."""
    ss = np.random.SeedSequence([int(base_seed), int(policy_index), int(run_index)])
    return int(ss.generate_state(1, np.uint64)[0])


def _spawn_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    env_ss, pol_ss = np.random.SeedSequence(int(seed)).spawn(2)
    return np.random.default_rng(env_ss), np.random.default_rng(pol_ss)


class LeaderExplorationError(RuntimeError):
    """Raised in debug mode when pulls drop below floor(lead count / gamma)."""


def _simulate_run(
    config: ExperimentConfig,
    spec: PolicySpec,
    seed: int,
    engine: str,
    check_invariant: bool,
    record_actions: bool,
) -> tuple[RegretTrace, np.ndarray | None]:
    if engine not in ENGINES:
        raise ValueError(f"engine = {engine!r}: expected one of {ENGINES}")
    graph, means = instance_arms(config.instance)
    checkpoints = config.checkpoint_array()
    env_rng, pol_rng = _spawn_streams(seed)

    if engine == "compiled":
        ptr, idx = graph.extended_csr()
        regret_out = np.zeros(checkpoints.size)
        actions = np.empty(config.horizon if record_actions else 0, dtype=np.int64)
        gamma = spec.gamma if spec.kind in ("uts", "osub") else 0
        gamma_code = 0 if gamma in (None, math.inf) else int(gamma)
        violation = _engine._simulate(
            _engine.KIND_CODES[spec.kind],
            gamma_code,
            means,
            ptr,
            idx,
            config.horizon,
            checkpoints,
            regret_out,
            actions,
            env_rng,
            pol_rng,
            check_invariant,
        )
        if violation >= 0:
            raise LeaderExplorationError(
                f"{spec.label}: replay invariant violated at round {violation}"
            )
        trace = RegretTrace(checkpoints, regret_out, seed)
        return trace, (actions if record_actions else None)

    policy = Policy(spec, graph)
    return _python_loop(
        config, policy, means, checkpoints, env_rng, pol_rng, seed,
        check_invariant=check_invariant, record_actions=record_actions,
    )


def _python_loop(
    config, policy, means, checkpoints, env_rng, pol_rng, seed,
    check_invariant=False, record_actions=False,
):
    spec = getattr(policy, "spec", None)
    gamma = spec.gamma if spec is not None else None
    check = (
        check_invariant
        and spec is not None
        and spec.kind in ("uts", "osub")
        and gamma not in (None, math.inf)
    )
    mu_star = means.max()
    n_arms = means.size
    regret = 0.0
    regret_out = np.zeros(checkpoints.size)
    actions = np.empty(config.horizon, dtype=np.int64) if record_actions else None
    ci = 0
    t = 0
    for arm in range(n_arms):
        reward = 1 if env_rng.random() < means[arm] else 0
        policy.update(arm, reward)
        t += 1
        regret += mu_star - means[arm]
        if record_actions:
            actions[t - 1] = arm
        if ci < checkpoints.size and t == checkpoints[ci]:
            regret_out[ci] = regret
            ci += 1
    while t < config.horizon:
        arm = policy.select(pol_rng)
        reward = 1 if env_rng.random() < means[arm] else 0
        policy.update(arm, reward)
        t += 1
        regret += mu_star - means[arm]
        if record_actions:
            actions[t - 1] = arm
        if check and np.any(policy.pulls < policy.leader_counts // gamma):
            raise LeaderExplorationError(
                f"{policy.spec.label}: replay invariant violated at round {t}"
            )
        if ci < checkpoints.size and t == checkpoints[ci]:
            regret_out[ci] = regret
            ci += 1
    return RegretTrace(checkpoints, regret_out, seed), actions


def run_once(
    config: ExperimentConfig,
    spec: PolicySpec,
    seed: int,
    engine: str = "compiled",
    check_invariant: bool = False,
) -> RegretTrace:
    """Simulate one seeded trajectory of one policy; fully determined by the seed."""
    trace, _ = _simulate_run(config, spec, seed, engine, check_invariant, False)
    return trace


def trajectory_actions(
    config: ExperimentConfig, spec: PolicySpec, seed: int, engine: str = "compiled"
) -> np.ndarray:
    """The full per-round action sequence of one trajectory (for verification)."""
    _, actions = _simulate_run(config, spec, seed, engine, False, True)
    return actions


def run_once_with_policy(
    config: ExperimentConfig, policy, seed: int
) -> RegretTrace:
    """Run an arbitrary select/update object through the interpreted loop.

    ``policy`` needs ``update(arm, reward)`` and ``select(rng) -> arm``; this
    is the hook used to exercise the trace semantics with scripted policies.
    """
    graph, means = instance_arms(config.instance)
    checkpoints = config.checkpoint_array()
    env_rng, pol_rng = _spawn_streams(seed)
    trace, _ = _python_loop(config, policy, means, checkpoints, env_rng, pol_rng, seed)
    return trace


def _experiment_task(args) -> tuple[int, int, RegretTrace]:
    config, spec, policy_index, run_index, engine = args
    seed = derive_run_seed(config.base_seed, policy_index, run_index)
    trace = run_once(config, spec, seed, engine=engine)
    return policy_index, run_index, trace


def _nearest_rank(sorted_column: np.ndarray, percentile: float) -> float:
    rank = math.ceil(percentile / 100.0 * sorted_column.size)
    return float(sorted_column[max(rank, 1) - 1])


def run_experiment(
    config: ExperimentConfig, workers: int = 1, engine: str = "compiled"
) -> AggregateResult:
    """All runs of all policies, aggregated into mean and 10/90 percentile traces.

    Results are identical for any ``workers`` value: seeds depend only on the
    (policy, run) position and the gather is ordered.
    """
    checkpoints = config.checkpoint_array()
    jobs = [
        (config, spec, p, r, engine)
        for p, spec in enumerate(config.policies)
        for r in range(config.runs)
    ]
    gathered: dict[tuple[int, int], RegretTrace] = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for p, r, trace in pool.map(_experiment_task, jobs, chunksize=1):
                gathered[(p, r)] = trace
    else:
        for job in jobs:
            p, r, trace = _experiment_task(job)
            gathered[(p, r)] = trace

    aggregates = []
    for p, spec in enumerate(config.policies):
        traces = tuple(gathered[(p, r)] for r in range(config.runs))
        matrix = np.vstack([tr.regret for tr in traces])
        sorted_matrix = np.sort(matrix, axis=0)
        p10 = np.array([_nearest_rank(col, 10.0) for col in sorted_matrix.T])
        p90 = np.array([_nearest_rank(col, 90.0) for col in sorted_matrix.T])
        aggregates.append(
            PolicyAggregate(spec, spec.label, matrix.mean(axis=0), p10, p90, traces)
        )

    report = instance_lower_bound(config.instance)
    lb_curve = report.constant * np.log(checkpoints)
    return AggregateResult(config, checkpoints, tuple(aggregates), report, lb_curve)


def slope_estimate(checkpoints, values, window: float = 1.0) -> float:
    """Least-squares slope of regret against ln(t) over the trailing window.

    ``window`` is measured in decades back from the final time: 1.0 covers
    [T/10, T]. The trace must span at least one decade overall.
    """
    cps = np.asarray(checkpoints, dtype=float)
    vals = np.asarray(values, dtype=float)
    if cps.size != vals.size:
        raise ValueError("checkpoints and values must have equal length")
    if cps.size < 2 or cps[-1] / cps[0] < 10.0:
        raise ValueError("trace must cover at least one decade of time")
    mask = cps >= cps[-1] * 10.0 ** (-window)
    if mask.sum() < 2:
        raise ValueError("insufficient checkpoints in the slope window")
    slope, _ = np.polyfit(np.log(cps[mask]), vals[mask], 1)
    return float(slope)


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def write_runs_csv(result: AggregateResult, path) -> None:
    """Per-run traces: columns policy, run, t, regret."""
    lines = ["policy,run,t,regret"]
    for agg in result.policies:
        for run_index, trace in enumerate(agg.traces):
            for t, value in zip(trace.checkpoints, trace.regret):
                lines.append(f"{agg.label},{run_index},{int(t)},{_fmt(value)}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_aggregate_csv(result: AggregateResult, path) -> None:
    """Aggregate traces: columns policy, t, mean, p10, p90, lb_curve."""
    lines = ["policy,t,mean,p10,p90,lb_curve"]
    for agg in result.policies:
        for i, t in enumerate(result.checkpoints):
            lines.append(
                f"{agg.label},{int(t)},{_fmt(agg.mean[i])},{_fmt(agg.p10[i])},"
                f"{_fmt(agg.p90[i])},{_fmt(result.lb_curve[i])}"
            )
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
