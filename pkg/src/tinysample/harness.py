"""Convergence and alpha-sweep experiments over many seeds, written as CSV."""

from __future__ import annotations

import csv
import math
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .graph import CrawlOracle, Graph, induced_degrees, induced_subgraph, load_edge_list
from .metrics import MetricError, assortativity, avg_clustering, fit_degree_exponent
from .samplers import (
    SamplingError,
    calibrate,
    iter_brwfb,
    iter_forest_fire,
    iter_mrw,
    iter_snowball,
    stage_seed,
)
from .samplers.extractor import STAGE_FINAL

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SAMPLERS = ("mrw", "brwfb", "snowball", "forestfire", "tse")
SAMPLER_DEFAULTS = {"brwfb": {"alpha": 0.0}, "forestfire": {"pf": 0.7}}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SamplerSpec:
    name: str
    params: tuple[tuple[str, float], ...] = ()

    @classmethod
    def parse(cls, text: str) -> "SamplerSpec":
        """Parse ``name`` or ``name:key=value,key=value``."""
        name, _, rest = text.strip().partition(":")
        if name not in SAMPLERS:
            raise ConfigError(f"unknown sampler {name!r}; expected one of {', '.join(SAMPLERS)}")
        params = dict(SAMPLER_DEFAULTS.get(name, {}))
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, eq, value = item.partition("=")
            if not eq or key not in SAMPLER_DEFAULTS.get(name, {}):
                raise ConfigError(f"bad parameter {item!r} for sampler {name}")
            params[key] = float(value)
        return cls(name, tuple(sorted(params.items())))

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v:g}" for k, v in self.params)

    def get(self, key: str) -> float:
        return dict(self.params)[key]


def default_checkpoints(max_fraction: float = 0.20) -> list[float]:
    """0.5% steps up to 2%, then 1% steps up to ``max_fraction``."""
    pts = [k / 1000 for k in (5, 10, 15, 20)]
    pts += [k / 100 for k in range(3, int(math.floor(max_fraction * 100 + 1e-9)) + 1)]
    pts = [p for p in pts if p <= max_fraction + 1e-12]
    if not pts or pts[-1] < max_fraction - 1e-12:
        pts.append(max_fraction)
    return pts


def default_alpha_sweep() -> list[float]:
    return [k / 4 for k in range(-8, 5)]


@dataclass
class ExperimentConfig:
    graph_path: str
    samplers: list[SamplerSpec]
    seeds: list[int]
    max_fraction: float = 0.20
    checkpoints: list[float] = field(default_factory=list)
    alpha_sweep: list[float] = field(default_factory=default_alpha_sweep)
    parallelism: int = 1
    record_wall_ms: bool = False

    def __post_init__(self):
        self.samplers = [s if isinstance(s, SamplerSpec) else SamplerSpec.parse(s) for s in self.samplers]
        if not 0 < self.max_fraction <= 1:
            raise ConfigError("max_fraction must lie in (0, 1]")
        if not self.checkpoints:
            self.checkpoints = default_checkpoints(self.max_fraction)
        cps = self.checkpoints
        if any(not 0 < f <= 1 for f in cps):
            raise ConfigError("checkpoints must lie in (0, 1]")
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise ConfigError("checkpoints must be strictly increasing")
        if cps[-1] > self.max_fraction + 1e-12:
            raise ConfigError("checkpoints exceed max_fraction")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be positive")

    @classmethod
    def from_toml(cls, path: str | os.PathLike) -> "ExperimentConfig":
        path = Path(path)
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        for key in ("graph_path", "samplers", "seeds"):
            if key not in raw:
                raise ConfigError(f"missing required key {key!r}")
        graph_path = Path(raw["graph_path"])
        if not graph_path.is_absolute():
            graph_path = path.parent / graph_path
        raw["graph_path"] = str(graph_path)
        raw["seeds"] = [int(s) for s in raw["seeds"]]
        for key in ("checkpoints", "alpha_sweep"):
            if key in raw:
                raw[key] = [float(v) for v in raw[key]]
        return cls(**raw)


@dataclass
class ConvergenceRecord:
    sampler: str
    seed: int
    alpha: float | None
    fraction: float
    sample_size: int
    degree_exponent: float
    r_squared: float
    assortativity: float | None
    avg_clustering: float
    distinct_visited: int
    neighbor_queries: int
    wall_ms: int | None
    error: str = ""


CONVERGENCE_FIELDS = [f.name for f in fields(ConvergenceRecord)]


def checkpoint_size(fraction: float, n: int) -> int:
    return max(1, int(math.floor(fraction * n + 0.5)))


def largest_component_size(g: Graph) -> int:
    adj = g.adjacency
    seen = bytearray(g.node_count)
    best = 0
    for s in range(g.node_count):
        if seen[s]:
            continue
        seen[s] = 1
        stack = [s]
        size = 1
        while stack:
            for y in adj[stack.pop()]:
                if not seen[y]:
                    seen[y] = 1
                    size += 1
                    stack.append(y)
        best = max(best, size)
    return best


def sample_metrics(g: Graph, nodes: Sequence[int]) -> tuple[float, float, float | None, float]:
    """Exponent, R^2, assortativity (None if undefined), clustering of the induced sample."""
    sub, _ = induced_subgraph(g, nodes)
    try:
        fit = fit_degree_exponent(sub.degrees())
        exponent, r2 = fit.slope, fit.r_squared
    except MetricError:
        exponent = r2 = math.nan
    try:
        assort = assortativity(sub)
    except MetricError:
        assort = None
    return exponent, r2, assort, avg_clustering(sub)


def _open_run(g: Graph, spec: SamplerSpec, seed: int, h: int):
    """Return (node iterator, final oracle, calibration report or None, alpha)."""
    oracle = CrawlOracle(g)
    if spec.name == "tse":
        report = calibrate(lambda: CrawlOracle(g), h, seed)
        rng = random.Random(stage_seed(seed, STAGE_FINAL))
        return iter_brwfb(oracle, h, report.alpha, rng), oracle, report, report.alpha
    rng = random.Random(seed)
    if spec.name == "brwfb":
        alpha = spec.get("alpha")
        return iter_brwfb(oracle, h, alpha, rng), oracle, None, alpha
    if spec.name == "mrw":
        return iter_mrw(oracle, h, rng), oracle, None, None
    if spec.name == "snowball":
        return iter_snowball(oracle, h, rng), oracle, None, None
    return iter_forest_fire(oracle, h, spec.get("pf"), rng), oracle, None, None


def _convergence_task(g: Graph, spec: SamplerSpec, seed: int, checkpoints: Sequence[float], timing: bool):
    n = g.node_count
    sizes = [checkpoint_size(f, n) for f in checkpoints]
    records: list[ConvergenceRecord] = []
    t0 = time.perf_counter()
    report = None
    oracle = None
    alpha = None
    nodes: list[int] = []

    def failed(i: int, msg: str) -> None:
        for f, size in zip(checkpoints[i:], sizes[i:]):
            records.append(ConvergenceRecord(
                spec.label, seed, alpha, f, size, math.nan, math.nan, None, math.nan,
                _visited(oracle, report), _queries(oracle, report), None, msg,
            ))

    try:
        it, oracle, report, alpha = _open_run(g, spec, seed, sizes[-1])
    except (SamplingError, ValueError) as exc:
        failed(0, str(exc))
        return records

    i = 0
    try:
        for node in it:
            nodes.append(node)
            while i < len(sizes) and len(nodes) == sizes[i]:
                elapsed = int((time.perf_counter() - t0) * 1000) if timing else None
                exponent, r2, assort, clust = sample_metrics(g, nodes)
                records.append(ConvergenceRecord(
                    spec.label, seed, alpha, checkpoints[i], sizes[i], exponent, r2, assort, clust,
                    _visited(oracle, report), _queries(oracle, report), elapsed,
                ))
                i += 1
    except SamplingError as exc:
        failed(i, str(exc))
    return records


def _visited(oracle: CrawlOracle | None, report) -> int:
    if oracle is None:
        return len(report.visited) if report else 0
    if report is None:
        return oracle.distinct_visited
    return len(report.visited | oracle.visited)


def _queries(oracle: CrawlOracle | None, report) -> int:
    q = oracle.neighbor_queries if oracle is not None else 0
    return q + (report.total_neighbor_queries if report else 0)


_WORKER_GRAPH: Graph | None = None


def _init_worker(g: Graph) -> None:
    global _WORKER_GRAPH
    _WORKER_GRAPH = g


def _call_in_worker(fn, *args):
    return fn(_WORKER_GRAPH, *args)


def _map_tasks(g: Graph, fn, tasks: list[tuple], parallelism: int) -> list:
    if parallelism <= 1 or len(tasks) <= 1:
        return [fn(g, *t) for t in tasks]
    with ProcessPoolExecutor(max_workers=parallelism, initializer=_init_worker, initargs=(g,)) as pool:
        futures = [pool.submit(_call_in_worker, fn, *t) for t in tasks]
        return [f.result() for f in futures]


def _load(cfg: ExperimentConfig, graph: Graph | None) -> Graph:
    return graph if graph is not None else load_edge_list(cfg.graph_path).graph


def run_convergence(cfg: ExperimentConfig, graph: Graph | None = None) -> list[ConvergenceRecord]:
    """One growing run per (sampler, seed), snapshotted at every checkpoint.

    Returns records sorted by (sampler, seed, fraction).
    """
    g = _load(cfg, graph)
    h = checkpoint_size(cfg.checkpoints[-1], g.node_count)
    if largest_component_size(g) < h:
        raise ConfigError(f"largest component is smaller than the final checkpoint size {h}")
    tasks = [(spec, seed, tuple(cfg.checkpoints), cfg.record_wall_ms) for spec in cfg.samplers for seed in cfg.seeds]
    results = _map_tasks(g, _convergence_task, tasks, cfg.parallelism)
    records = [r for batch in results for r in batch]
    records.sort(key=lambda r: (r.sampler, r.seed, r.fraction))
    return records


@dataclass
class SweepRow:
    alpha: float
    seed: int
    degree_exponent: float
    r_squared: float


@dataclass
class SweepSummary:
    slope: float
    intercept: float
    r_squared: float
    means: dict[float, float]


def _sweep_task(g: Graph, alpha: float, seed: int, h: int) -> SweepRow:
    rng = random.Random(seed)
    try:
        nodes = list(iter_brwfb(CrawlOracle(g), h, alpha, rng))
        fit = fit_degree_exponent(induced_degrees(g, nodes))
        return SweepRow(alpha, seed, fit.slope, fit.r_squared)
    except (SamplingError, MetricError):
        return SweepRow(alpha, seed, math.nan, math.nan)


def linear_fit(x: Sequence[float], y: Sequence[float]) -> tuple[float, float, float]:
    """OLS slope, intercept and R^2; NaNs when fewer than two points or no x-variance."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if len(xa) < 2 or np.ptp(xa) == 0:
        return math.nan, math.nan, math.nan
    xm, ym = xa.mean(), ya.mean()
    slope = float(np.sum((xa - xm) * (ya - ym)) / np.sum((xa - xm) ** 2))
    intercept = float(ym - slope * xm)
    syy = float(np.sum((ya - ym) ** 2))
    ss_res = float(np.sum((ya - intercept - slope * xa) ** 2))
    r2 = 1.0 if syy == 0 else 1.0 - ss_res / syy
    return slope, intercept, r2


def summarize_sweep(rows: Iterable[SweepRow]) -> SweepSummary:
    by_alpha: dict[float, list[float]] = {}
    for r in rows:
        by_alpha.setdefault(r.alpha, [])
        if not math.isnan(r.degree_exponent):
            by_alpha[r.alpha].append(r.degree_exponent)
    means = {a: float(np.mean(v)) for a, v in by_alpha.items() if v}
    slope, intercept, r2 = linear_fit(list(means), list(means.values()))
    return SweepSummary(slope, intercept, r2, means)


def run_alpha_sweep(
    cfg: ExperimentConfig, h: int, graph: Graph | None = None
) -> tuple[list[SweepRow], SweepSummary]:
    """BRW-FB sample of size ``h`` for every (alpha, seed); fit the mean exponent against alpha."""
    if not cfg.alpha_sweep:
        raise ConfigError("alpha_sweep is empty")
    if h < 1:
        raise ConfigError("sample size must be positive")
    g = _load(cfg, graph)
    tasks = [(a, s, h) for a in cfg.alpha_sweep for s in cfg.seeds]
    rows = _map_tasks(g, _sweep_task, tasks, cfg.parallelism)
    return rows, summarize_sweep(rows)


def fmt(value) -> str:
    """CSV cell text: ``nan`` for NaN, empty for missing, ``repr`` for floats."""
    if value is None:
        return ""
    if isinstance(value, float):
        return "nan" if math.isnan(value) else repr(value)
    return str(value)


def write_convergence_csv(records: Iterable[ConvergenceRecord], fh: IO[str]) -> None:
    w = csv.writer(fh)
    w.writerow(CONVERGENCE_FIELDS)
    for r in records:
        row = []
        for name in CONVERGENCE_FIELDS:
            v = getattr(r, name)
            if name == "assortativity" and v is None:
                row.append("undefined")
            elif name == "wall_ms" and v is None:
                row.append("nan")
            else:
                row.append(fmt(v))
        w.writerow(row)


SWEEP_FIELDS = ["kind", "alpha", "seed", "degree_exponent", "r_squared", "slope", "intercept"]


def write_sweep_csv(rows: Iterable[SweepRow], summary: SweepSummary, fh: IO[str]) -> None:
    w = csv.writer(fh)
    w.writerow(SWEEP_FIELDS)
    for r in rows:
        w.writerow(["data", fmt(r.alpha), r.seed, fmt(r.degree_exponent), fmt(r.r_squared), "", ""])
    w.writerow(["summary", "", "", "", fmt(summary.r_squared), fmt(summary.slope), fmt(summary.intercept)])
