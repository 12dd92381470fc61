"""Tiny Sample Extractor: calibrated biased walk with fly-back."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from ..graph import CrawlOracle, OracleStats, SampleTrace
from ..metrics import MetricError, fit_degree_exponent
from ._crawl import LocalView, SamplingError, mix64
from .walks import estimate_exponent_mrw, iter_brwfb

OracleFactory = Callable[[], CrawlOracle]

STAGE_MRW, STAGE_ALPHA0, STAGE_ALPHA1, STAGE_FINAL = range(4)
CALIBRATION_ALPHAS = (0.0, -1.0)


class CalibrationError(SamplingError):
    pass


@dataclass
class CalibrationReport:
    """Outcome of the three calibration stages (and, once run, the final one)."""

    D: float
    D0: float
    D1: float
    alpha: float
    stage_stats: dict[str, OracleStats] = field(default_factory=dict)
    visited: set[int] = field(default_factory=set, repr=False)

    @property
    def total_distinct_visited(self) -> int:
        """Distinct nodes touched across all stages recorded so far."""
        return len(self.visited)

    @property
    def total_neighbor_queries(self) -> int:
        return sum(s.neighbor_queries for s in self.stage_stats.values())

    def record(self, stage: str, oracle: CrawlOracle) -> None:
        self.stage_stats[stage] = oracle.stats()
        self.visited |= oracle.visited


def interpolate_alpha(D: float, D0: float, D1: float, eps: float = 1e-3) -> float:
    """Alpha on the line through (0, D0) and (-1, D1) that hits exponent D."""
    if abs(D1 - D0) < eps:
        raise CalibrationError(f"calibration degenerate: |D1 - D0| = {abs(D1 - D0):.3g} < {eps}")
    return -((D - D0) / (D1 - D0))


def stage_seed(seed: int, stage: int) -> int:
    return mix64(seed, stage)


def sample_exponent(oracle: CrawlOracle, nodes: list[int]) -> float:
    """Exponent of the subgraph induced by ``nodes``, learned through the oracle.

    Fetches the neighbor list of every sampled node, as a crawler would to
    reconstruct the sample's edges.
    """
    view = LocalView(oracle)
    members = set(nodes)
    degrees = [sum(1 for y in view.neighbors(x) if y in members) for x in nodes]
    try:
        return fit_degree_exponent(degrees).slope
    except MetricError as exc:
        raise SamplingError(f"cannot fit calibration sample: {exc}") from exc


def calibrate(
    oracle_factory: OracleFactory,
    h: int,
    seed: int,
    start: int | None = None,
    eps: float = 1e-3,
) -> CalibrationReport:
    """Estimate the target exponent by MRW and fit the alpha -> exponent line."""
    if h < 100:
        raise ValueError(f"h must be >= 100, got {h}")
    o = oracle_factory()
    D = estimate_exponent_mrw(o, h, stage_seed(seed, STAGE_MRW), start).slope
    stats = {"mrw": o}

    fitted = []
    for stage, a in zip((STAGE_ALPHA0, STAGE_ALPHA1), CALIBRATION_ALPHAS):
        o = oracle_factory()
        rng = random.Random(stage_seed(seed, stage))
        nodes = list(iter_brwfb(o, h, a, rng, start))
        fitted.append(sample_exponent(o, nodes))
        stats[f"brwfb_alpha{a:g}"] = o
    D0, D1 = fitted

    report = CalibrationReport(D, D0, D1, interpolate_alpha(D, D0, D1, eps))
    for name, oracle in stats.items():
        report.record(name, oracle)
    return report


def tiny_sample_extractor(
    oracle_factory: OracleFactory,
    h: int,
    seed: int,
    start: int | None = None,
    eps: float = 1e-3,
) -> tuple[SampleTrace, CalibrationReport]:
    """Run calibration, then extract ``h`` nodes at the interpolated alpha.

    Every stage gets a fresh oracle and its own sub-seed.
    """
    report = calibrate(oracle_factory, h, seed, start, eps)
    o = oracle_factory()
    rng = random.Random(stage_seed(seed, STAGE_FINAL))
    nodes = list(iter_brwfb(o, h, report.alpha, rng, start))
    report.record("final", o)
    trace = SampleTrace(nodes, o.stats(), "tse", seed, report.alpha)
    return trace, report
