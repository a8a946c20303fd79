"""Rank-one and graphical unimodal Bernoulli bandits: policies, bounds, experiments."""

from .bounds import (
    BoundReport,
    BoundTerm,
    instance_lower_bound,
    lai_robbins_constant,
    lower_bound_rank1,
    lower_bound_unimodal,
)
from .harness import (
    AggregateResult,
    ExperimentConfig,
    RegretTrace,
    derive_run_seed,
    run_experiment,
    run_once,
    run_once_with_policy,
    slope_estimate,
    write_aggregate_csv,
    write_runs_csv,
)
from .model import (
    RankOneInstance,
    UnimodalGraph,
    UnimodalInstance,
    UnimodalVerdict,
    build_g1,
    check_unimodal,
    increasing_path,
    means_matrix,
    random_rank_one,
    sample_reward,
)
from .policies import KINDS, Policy, PolicySpec, exploration_budget_f
from .stats_kernel import (
    beta_cdf_via_binomial,
    binomial_cdf,
    kl_bernoulli,
    klucb_index,
    sample_beta,
)

__all__ = [
    "AggregateResult",
    "BoundReport",
    "BoundTerm",
    "ExperimentConfig",
    "KINDS",
    "Policy",
    "PolicySpec",
    "RankOneInstance",
    "RegretTrace",
    "UnimodalGraph",
    "UnimodalInstance",
    "UnimodalVerdict",
    "beta_cdf_via_binomial",
    "binomial_cdf",
    "build_g1",
    "check_unimodal",
    "derive_run_seed",
    "exploration_budget_f",
    "increasing_path",
    "instance_lower_bound",
    "kl_bernoulli",
    "klucb_index",
    "lai_robbins_constant",
    "lower_bound_rank1",
    "lower_bound_unimodal",
    "means_matrix",
    "random_rank_one",
    "run_experiment",
    "run_once",
    "run_once_with_policy",
    "sample_beta",
    "sample_reward",
    "slope_estimate",
    "write_aggregate_csv",
    "write_runs_csv",
]

__version__ = "0.1.0"
