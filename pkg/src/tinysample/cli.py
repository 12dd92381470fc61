"""Command line entry point: ``tinysample <command> ...``."""

from __future__ import annotations

import argparse
import csv
import logging
import random
import sys

from . import harness
from .generator import BaConfig, generate_ba
from .graph import CrawlOracle, GraphFormatError, load_edge_list, save_edge_list
from .metrics import MetricError, assortativity, avg_clustering, ccdf, fit_degree_exponent
from .samplers import (
    SamplingError,
    brwfb_sample,
    forest_fire_sample,
    mrw_sample,
    snowball_sample,
    tiny_sample_extractor,
)

log = logging.getLogger("tinysample")


def _write_lines(path: str, lines) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(f"{line}\n")


def cmd_generate(args: argparse.Namespace) -> int:
    g = generate_ba(BaConfig(args.nodes, args.edges_per_node, args.seed))
    save_edge_list(g, args.out)
    log.info("wrote %d nodes / %d edges to %s", g.node_count, g.edge_count, args.out)
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    loaded = load_edge_list(args.graph)
    g = loaded.graph
    start = loaded.internal_id(args.start) if args.start is not None else None
    stats: dict[str, object] = {}

    if args.algo == "tse":
        trace, report = tiny_sample_extractor(lambda: CrawlOracle(g), args.size, args.seed, start)
        stats.update(
            distinct_visited=report.total_distinct_visited,
            neighbor_queries=report.total_neighbor_queries,
            alpha_used=report.alpha,
            D=report.D,
            D0=report.D0,
            D1=report.D1,
        )
        for name, s in report.stage_stats.items():
            stats[f"{name}.distinct_visited"] = s.distinct_visited
            stats[f"{name}.neighbor_queries"] = s.neighbor_queries
    else:
        oracle = CrawlOracle(g)
        if args.algo == "brwfb":
            trace = brwfb_sample(oracle, args.size, args.alpha, args.seed, start)
        elif args.algo == "mrw":
            trace = mrw_sample(oracle, args.size, args.seed, start)
        elif args.algo == "snowball":
            trace = snowball_sample(oracle, args.size, args.seed, start)
        else:
            trace = forest_fire_sample(oracle, args.size, args.pf, args.seed, start)
        stats.update(
            distinct_visited=trace.stats.distinct_visited,
            neighbor_queries=trace.stats.neighbor_queries,
        )
        if trace.alpha is not None:
            stats["alpha_used"] = trace.alpha

    ids = loaded.original_ids
    _write_lines(args.out_nodes, (ids[x] for x in trace.nodes))
    _write_lines(args.out_stats, (f"{k}={harness.fmt(v)}" for k, v in stats.items()))
    return 0


def cmd_metrics(args: argparse.Namespace) -> int:
    g = load_edge_list(args.graph).graph
    degrees = g.degrees()
    try:
        fit = fit_degree_exponent(degrees)
        exponent, r2 = harness.fmt(fit.slope), harness.fmt(fit.r_squared)
    except MetricError:
        exponent = r2 = "nan"
    try:
        assort = harness.fmt(assortativity(g))
    except MetricError:
        assort = "undefined"
    out = sys.stdout
    out.write(f"nodes={g.node_count}\n")
    out.write(f"edges={g.edge_count}\n")
    out.write(f"degree_exponent={exponent}\n")
    out.write(f"r_squared={r2}\n")
    out.write(f"assortativity={assort}\n")
    out.write(f"avg_clustering={harness.fmt(avg_clustering(g))}\n")
    if args.ccdf_out:
        with open(args.ccdf_out, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["degree", "fraction"])
            for d, f in ccdf(degrees):
                w.writerow([d, harness.fmt(f)])
    return 0


def cmd_convergence(args: argparse.Namespace) -> int:
    cfg = harness.ExperimentConfig.from_toml(args.config)
    records = harness.run_convergence(cfg)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        harness.write_convergence_csv(records, fh)
    return 0


def cmd_sweep_alpha(args: argparse.Namespace) -> int:
    cfg = harness.ExperimentConfig.from_toml(args.config)
    rows, summary = harness.run_alpha_sweep(cfg, args.size)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        harness.write_sweep_csv(rows, summary, fh)
    log.info("alpha line: slope=%.4f intercept=%.4f r2=%.4f", summary.slope, summary.intercept, summary.r_squared)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tinysample", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a Barabasi-Albert graph as an edge list")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--edges-per-node", type=int, default=2)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sample", help="extract a sample with one sampler")
    p.add_argument("--graph", required=True)
    p.add_argument("--algo", choices=["mrw", "brwfb", "snowball", "forestfire", "tse"], required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.0, help="bias exponent for brwfb")
    p.add_argument("--pf", type=float, default=0.7, help="forward burning probability for forestfire")
    p.add_argument("--start", type=int, default=None, help="start node id as written in the edge list")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-nodes", required=True)
    p.add_argument("--out-stats", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("metrics", help="print degree exponent, assortativity and clustering")
    p.add_argument("--graph", required=True)
    p.add_argument("--ccdf-out")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("convergence", help="metrics of growing samples at each checkpoint")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("sweep-alpha", help="exponent of BRW-FB samples across alpha values")
    p.add_argument("--config", required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep_alpha)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (GraphFormatError, SamplingError, harness.ConfigError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
