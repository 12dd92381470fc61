"""Random-walk samplers: Metropolized random walk and biased walk with fly-back."""

from __future__ import annotations

import random
from bisect import bisect_right
from typing import Iterator

from ..graph import CrawlOracle, SampleTrace
from ..metrics import ExponentFit, MetricError, fit_degree_exponent
from ._crawl import LocalView, SamplingError, check_size, resolve_start

GUARD_TRIPS = 50


def mrw_acceptance(deg_x: int, deg_y: int) -> float:
    return min(1.0, deg_x / deg_y)


def _mrw_chain(view: LocalView, start: int, rng: random.Random) -> Iterator[int]:
    """Yield the chain state after every Metropolis-Hastings step."""
    x = start
    dx = view.degree(x)
    if dx == 0:
        raise SamplingError(f"start node {start} is isolated")
    while True:
        nbrs = view.neighbors(x)
        y = nbrs[int(rng.random() * dx)]
        dy = view.degree(y)
        # moves toward equal-or-lower degree are always accepted
        if dy <= dx or rng.random() * dy < dx:
            x, dx = y, dy
        yield x


def mrw_walk(oracle: CrawlOracle, start: int, steps: int, seed: int) -> list[int]:
    """Degree of the current node after each of ``steps`` MH steps.

    Rejected proposals re-record the current node's degree.
    """
    if steps < 1:
        raise ValueError("steps must be positive")
    view = LocalView(oracle)
    rng = random.Random(seed)
    chain = _mrw_chain(view, start, rng)
    out = []
    for _ in range(steps):
        out.append(view.degree(next(chain)))
    return out


def estimate_exponent_mrw(
    oracle: CrawlOracle, h: int, seed: int, start: int | None = None
) -> ExponentFit:
    """Fit the CCDF exponent of degrees seen along an ``h``-step MRW after burn-in."""
    if h < 100:
        raise ValueError(f"h must be >= 100 for an exponent estimate, got {h}")
    rng = random.Random(seed)
    start = resolve_start(oracle, start, rng)
    view = LocalView(oracle)
    chain = _mrw_chain(view, start, rng)
    for _ in range(max(100, h // 10)):
        next(chain)
    degrees = [view.degree(next(chain)) for _ in range(h)]
    try:
        return fit_degree_exponent(degrees)
    except MetricError as exc:
        raise SamplingError(f"cannot fit MRW degree sample: {exc}") from exc


def iter_mrw(
    oracle: CrawlOracle, h: int, rng: random.Random, start: int | None = None
) -> Iterator[int]:
    """Distinct nodes in first-visit order along a Metropolized random walk."""
    check_size(h)
    p = resolve_start(oracle, start, rng)
    seen = {p}
    yield p
    if h == 1:
        return
    view = LocalView(oracle)
    stall = 0
    for x in _mrw_chain(view, p, rng):
        if x in seen:
            stall += 1
            if stall > GUARD_TRIPS * max(10 * len(seen), 1000):
                raise SamplingError("component too small or walk trapped")
            continue
        stall = 0
        seen.add(x)
        yield x
        if len(seen) >= h:
            return


def transition_probabilities(oracle: CrawlOracle, x: int, alpha: float) -> list[tuple[int, float]]:
    """Exact biased-walk transition law from ``x``: ``deg(y)**alpha`` normalized over neighbors."""
    view = LocalView(oracle)
    nbrs, cum, total = view.weight_table(x, alpha)
    if not nbrs:
        raise SamplingError(f"node {x} is isolated")
    out = []
    prev = 0.0
    for y, c in zip(nbrs, cum):
        out.append((y, (c - prev) / total))
        prev = c
    return out


def _draw(table: tuple[list[int], list[float], float], rng: random.Random) -> int:
    nbrs, cum, total = table
    i = bisect_right(cum, rng.random() * total)
    return nbrs[i if i < len(nbrs) else len(nbrs) - 1]


def brwfb_transition(
    oracle: CrawlOracle, x: int, alpha: float, rng: random.Random, view: LocalView | None = None
) -> int:
    """Step from ``x`` to a neighbor chosen with probability proportional to ``deg**alpha``."""
    table = (view or LocalView(oracle)).weight_table(x, alpha)
    if not table[0]:
        raise SamplingError(f"node {x} is isolated")
    return _draw(table, rng)


def iter_brwfb(
    oracle: CrawlOracle,
    h: int,
    alpha: float,
    rng: random.Random,
    start: int | None = None,
) -> Iterator[int]:
    """Biased random walk with fly-back, yielding nodes as they join the sample.

    Every walk starts at the start node and moves through already-sampled
    nodes until it steps onto an unsampled one, which is added before the
    walk flies back. A walk that runs ``max(10 * |sample|, 1000)`` steps
    without a discovery is abandoned; 50 abandoned walks in a row is an
    error.
    """
    check_size(h)
    p = resolve_start(oracle, start, rng)
    sampled = {p}
    yield p
    view = LocalView(oracle)
    trips = 0
    weight_table = view.weight_table
    while len(sampled) < h:
        limit = max(10 * len(sampled), 1000)
        x = p
        found = None
        for _ in range(limit):
            table = weight_table(x, alpha)
            if not table[0]:
                raise SamplingError("component too small or walk trapped")
            y = _draw(table, rng)
            if y not in sampled:
                found = y
                break
            x = y
        if found is None:
            trips += 1
            if trips >= GUARD_TRIPS:
                raise SamplingError("component too small or walk trapped")
            continue
        trips = 0
        sampled.add(found)
        yield found


def _collect(it: Iterator[int], oracle: CrawlOracle, label: str, seed: int, alpha=None) -> SampleTrace:
    nodes = list(it)
    return SampleTrace(nodes, oracle.stats(), label, seed, alpha)


def brwfb_sample(
    oracle: CrawlOracle, h: int, alpha: float, seed: int, start: int | None = None
) -> SampleTrace:
    rng = random.Random(seed)
    return _collect(iter_brwfb(oracle, h, alpha, rng, start), oracle, "brwfb", seed, alpha)


def mrw_sample(oracle: CrawlOracle, h: int, seed: int, start: int | None = None) -> SampleTrace:
    rng = random.Random(seed)
    return _collect(iter_mrw(oracle, h, rng, start), oracle, "mrw", seed)
