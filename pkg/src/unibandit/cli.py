"""Command-line entry point: simulate, sweep-gamma, bounds, check-unimodal, plot.

Config files are YAML with the following shape::

    instance:                 # rank-one flavor
      u: [0.75, 0.25, 0.25, 0.25]
      v: [0.75, 0.25, 0.25, 0.25]
    # or the generic graph flavor:
    # instance:
    #   graph: {edges: [[0, 1], [1, 2]], vertices: 3}   # vertices optional
    #   means: [0.9, 0.5, 0.4]
    policies:
      - {kind: uts, gamma: 2}      # kinds: uts, osub, klucb, ts
      - {kind: klucb}
    horizon: 50000
    runs: 50
    seed: 1234
    grid: 200                  # optional, log-spaced checkpoint count
    gammas: [2, 5, 10, 20, inf]  # used by sweep-gamma only

Exit codes: 0 success, 2 config error, 3 instance invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np
import yaml

from .bounds import BoundReport, instance_lower_bound, lai_robbins_constant
from .harness import (
    ExperimentConfig,
    instance_arms,
    run_experiment,
    write_aggregate_csv,
    write_runs_csv,
)
from .model import (
    RankOneInstance,
    UnimodalGraph,
    UnimodalInstance,
    check_unimodal,
)
from .plotting import ChartSeries, render_regret_chart
from .policies import PolicySpec

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INSTANCE = 3


class ConfigError(Exception):
    """Malformed configuration or command input."""


class InstanceError(Exception):
    """A structurally valid config describing an invalid bandit instance."""


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except yaml.YAMLError as exc:
        raise ConfigError(f"config parse failure in {path}: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path}: top level must be a mapping")
    return raw


def _require(cfg: dict, field: str):
    if field not in cfg:
        raise ConfigError(f"config: missing field '{field}'")
    return cfg[field]


def _positive_int(cfg_value, field: str) -> int:
    if not isinstance(cfg_value, int) or isinstance(cfg_value, bool) or cfg_value < 1:
        raise ConfigError(f"config: field '{field}' must be a positive integer")
    return cfg_value


def parse_instance(cfg: dict):
    """Return a RankOneInstance, or (graph, means) for the generic flavor."""
    raw = _require(cfg, "instance")
    if not isinstance(raw, dict):
        raise ConfigError("config: field 'instance' must be a mapping")
    if "u" in raw or "v" in raw:
        if not ("u" in raw and "v" in raw):
            raise ConfigError("config: rank-one instance needs both 'u' and 'v'")
        try:
            return RankOneInstance(raw["u"], raw["v"])
        except (ValueError, TypeError) as exc:
            raise InstanceError(f"instance: {exc}")
    if "graph" in raw or "means" in raw:
        if not ("graph" in raw and "means" in raw):
            raise ConfigError("config: graph instance needs both 'graph' and 'means'")
        graph_raw = raw["graph"]
        if not isinstance(graph_raw, dict) or "edges" not in graph_raw:
            raise ConfigError("config: field 'instance.graph' needs an 'edges' list")
        means = raw["means"]
        if not isinstance(means, list) or not means:
            raise ConfigError("config: field 'instance.means' must be a nonempty list")
        edges = graph_raw["edges"]
        vertex_count = graph_raw.get("vertices", len(means))
        vertex_count = _positive_int(vertex_count, "instance.graph.vertices")
        if vertex_count != len(means):
            raise ConfigError(
                "config: 'instance.means' length must equal the vertex count"
            )
        try:
            graph = UnimodalGraph.from_edges(vertex_count, edges)
            means_arr = np.asarray(means, dtype=float)
            if np.any(means_arr < 0.0) or np.any(means_arr > 1.0):
                bad = int(np.flatnonzero((means_arr < 0.0) | (means_arr > 1.0))[0])
                raise ValueError(
                    f"means[{bad}] = {means_arr[bad]}: probability out of range [0, 1]"
                )
        except (ValueError, TypeError) as exc:
            raise InstanceError(f"instance: {exc}")
        return graph, means_arr
    raise ConfigError("config: 'instance' needs either u/v or graph/means fields")


def _instance_for_experiment(cfg: dict):
    parsed = parse_instance(cfg)
    if isinstance(parsed, RankOneInstance):
        return parsed
    graph, means = parsed
    try:
        return UnimodalInstance(graph, means)
    except ValueError as exc:
        raise InstanceError(f"instance: {exc}")


def parse_policies(cfg: dict) -> tuple[PolicySpec, ...]:
    raw = _require(cfg, "policies")
    if not isinstance(raw, list) or not raw:
        raise ConfigError("config: field 'policies' must be a nonempty list")
    specs = []
    for i, entry in enumerate(raw):
        try:
            specs.append(PolicySpec.from_config(entry))
        except ValueError as exc:
            raise ConfigError(f"config: policies[{i}]: {exc}")
    return tuple(specs)


def build_experiment(cfg: dict, args, policies=None) -> ExperimentConfig:
    instance = _instance_for_experiment(cfg)
    if policies is None:
        policies = parse_policies(cfg)
    horizon = args.horizon if args.horizon is not None else _require(cfg, "horizon")
    runs = args.runs if args.runs is not None else _require(cfg, "runs")
    seed = args.seed if args.seed is not None else _require(cfg, "seed")
    grid = cfg.get("grid", 200)
    horizon = _positive_int(horizon, "horizon")
    runs = _positive_int(runs, "runs")
    grid = _positive_int(grid, "grid")
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError("config: field 'seed' must be a nonnegative integer")
    try:
        return ExperimentConfig(
            instance=instance,
            policies=policies,
            horizon=horizon,
            runs=runs,
            base_seed=seed,
            grid=grid,
        )
    except ValueError as exc:
        raise ConfigError(f"config: {exc}")


def _write_summary(path: Path, config: ExperimentConfig, result) -> None:
    graph, means = instance_arms(config.instance)
    lines = [
        "experiment summary",
        f"effective seed: {config.base_seed}",
        f"horizon: {config.horizon}",
        f"runs: {config.runs}",
        f"arms: {graph.vertex_count}",
        "lower-bound constant (coefficient of ln T): "
        + _fmt(result.lower_bound.constant),
        "full-matrix constant (all suboptimal arms): "
        + _fmt(lai_robbins_constant(means).constant),
        f"final mean regret at T={config.horizon}:",
    ]
    for agg in result.policies:
        lines.append(f"  {agg.label}: {_fmt(agg.mean[-1])}")
    path.write_text("\n".join(lines) + "\n")


def _run_and_emit(config: ExperimentConfig, out_dir: Path, workers: int) -> None:
    result = run_experiment(config, workers=workers)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_runs_csv(result, out_dir / "runs.csv")
    write_aggregate_csv(result, out_dir / "aggregate.csv")
    _write_summary(out_dir / "summary.txt", config, result)
    print(f"effective seed: {config.base_seed}")
    for name in ("runs.csv", "aggregate.csv", "summary.txt"):
        print(f"wrote {out_dir / name}")


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    config = build_experiment(cfg, args)
    _run_and_emit(config, Path(args.out), args.workers)
    return EXIT_OK


def cmd_sweep_gamma(args) -> int:
    cfg = load_config(args.config)
    gammas = _require(cfg, "gammas")
    if not isinstance(gammas, list) or not gammas:
        raise ConfigError("config: field 'gammas' must be a nonempty list")
    specs = []
    for i, value in enumerate(gammas):
        try:
            specs.append(PolicySpec.from_config({"kind": "uts", "gamma": value}))
        except ValueError as exc:
            raise ConfigError(f"config: gammas[{i}]: {exc}")
    config = build_experiment(cfg, args, policies=tuple(specs))
    _run_and_emit(config, Path(args.out), args.workers)
    return EXIT_OK


def _print_report(report: BoundReport, heading: str) -> None:
    print(heading)
    print("vertex  gap             kl              term")
    for term in report.per_arm_terms:
        kl_text = "inf" if term.kl_value == float("inf") else _fmt(term.kl_value)
        print(
            f"{term.vertex:>6}  {_fmt(term.gap):<14}  {kl_text:<14}  {_fmt(term.term)}"
        )
    print(f"total (coefficient of ln T): {_fmt(report.constant)}")
    if report.flagged:
        flagged = ", ".join(str(v) for v in report.flagged)
        print(f"flagged (infinite divergence, term = 0): {flagged}")


def cmd_bounds(args) -> int:
    cfg = load_config(args.config)
    instance = _instance_for_experiment(cfg)
    if args.seed is not None:
        print(f"effective seed: {args.seed}")
    try:
        report = instance_lower_bound(instance)
    except ValueError as exc:
        raise InstanceError(str(exc))
    _print_report(report, "lower-bound report (neighbors of the optimum)")
    _, means = instance_arms(instance)
    full = lai_robbins_constant(means)
    print(f"full-matrix constant (all suboptimal arms): {_fmt(full.constant)}")
    return EXIT_OK


def cmd_check_unimodal(args) -> int:
    cfg = load_config(args.config)
    parsed = parse_instance(cfg)
    if args.seed is not None:
        print(f"effective seed: {args.seed}")
    if isinstance(parsed, RankOneInstance):
        graph, means = instance_arms(parsed)
    else:
        graph, means = parsed
    verdict = check_unimodal(graph, means)
    print(verdict.describe())
    return EXIT_OK if verdict.ok else EXIT_INSTANCE


def _read_aggregate_csv(path) -> tuple[list[ChartSeries], tuple | None]:
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            fields = reader.fieldnames or []
            required = ["policy", "t", "mean", "p10", "p90"]
            missing = [c for c in required if c not in fields]
            if missing:
                raise ConfigError(f"{path}: missing column '{missing[0]}'")
            has_lb = "lb_curve" in fields
            rows = list(reader)
    except FileNotFoundError:
        raise ConfigError(f"aggregate csv not found: {path}")
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    order: list[str] = []
    grouped: dict[str, list] = {}
    for row in rows:
        label = row["policy"]
        if label not in grouped:
            grouped[label] = []
            order.append(label)
        grouped[label].append(row)
    series = []
    lb = None
    for label in order:
        block = grouped[label]
        t = np.array([float(r["t"]) for r in block])
        series.append(
            ChartSeries(
                label=label,
                t=t,
                mean=np.array([float(r["mean"]) for r in block]),
                p10=np.array([float(r["p10"]) for r in block]),
                p90=np.array([float(r["p90"]) for r in block]),
            )
        )
        if has_lb and lb is None:
            lb = (t, np.array([float(r["lb_curve"]) for r in block]))
    return series, lb


def cmd_plot(args) -> int:
    series, lb = _read_aggregate_csv(args.infile)
    if args.seed is not None:
        print(f"effective seed: {args.seed}")
    svg = render_regret_chart(
        series,
        lb_curve=lb if args.log_time else None,
        log_time=args.log_time,
        title=Path(args.infile).stem,
    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(svg)
    print(f"wrote {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bandit",
        description="Simulate rank-one / graphical unimodal Bernoulli bandits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_out=True):
        p.add_argument("--config", required=True, help="YAML experiment config")
        if with_out:
            p.add_argument("--out", required=True, help="output directory")
            p.add_argument("--workers", type=int, default=1)
            p.add_argument("--horizon", type=int, default=None)
            p.add_argument("--runs", type=int, default=None)
        p.add_argument("--seed", type=int, default=None, help="override config seed")

    p_sim = sub.add_parser("simulate", help="run the configured experiment")
    add_common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep-gamma", help="replay-period sweep for uts")
    add_common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep_gamma)

    p_bounds = sub.add_parser("bounds", help="print the lower-bound report")
    add_common(p_bounds, with_out=False)
    p_bounds.set_defaults(func=cmd_bounds)

    p_check = sub.add_parser("check-unimodal", help="verify the instance is unimodal")
    add_common(p_check, with_out=False)
    p_check.set_defaults(func=cmd_check_unimodal)

    p_plot = sub.add_parser("plot", help="render an aggregate CSV to SVG")
    p_plot.add_argument("--in", dest="infile", required=True)
    p_plot.add_argument("--out", required=True)
    p_plot.add_argument("--log-time", action="store_true")
    p_plot.add_argument("--seed", type=int, default=None)
    p_plot.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InstanceError as exc:
        print(f"invalid instance: {exc}", file=sys.stderr)
        return EXIT_INSTANCE


if __name__ == "__main__":
    sys.exit(main())
