"""Breadth-first samplers: snowball and forest fire."""

from __future__ import annotations

import random
from collections import deque
from typing import Iterator

from ..graph import CrawlOracle, SampleTrace
from ._crawl import LocalView, SamplingError, check_size, resolve_start

REIGNITE_LIMIT = 100


def iter_snowball(
    oracle: CrawlOracle, h: int, rng: random.Random, start: int | None = None
) -> Iterator[int]:
    check_size(h)
    p = resolve_start(oracle, start, rng)
    seen = {p}
    yield p
    if h == 1:
        return
    level = [p]
    while level:
        rng.shuffle(level)
        nxt = []
        for x in level:
            fresh = [y for y in oracle.neighbors(x) if y not in seen]
            rng.shuffle(fresh)
            for y in fresh:
                seen.add(y)
                yield y
                if len(seen) >= h:
                    return
                nxt.append(y)
        level = nxt
    raise SamplingError(f"component exhausted after {len(seen)} nodes (wanted {h})")


def geometric_burn_count(pf: float, rng: random.Random) -> int:
    """Number of links to burn: P(k) = (1 - pf) * pf**k, k >= 0."""
    k = 0
    while rng.random() < pf:
        k += 1
    return k


def iter_forest_fire(
    oracle: CrawlOracle,
    h: int,
    pf: float,
    rng: random.Random,
    start: int | None = None,
) -> Iterator[int]:
    """Forest fire with FIFO burning.

    When the fire dies the sampler reignites from a random sampled node.
    After 100 reignitions in a row that burn nothing, it restarts from a
    random unsampled node adjacent to the sample.
    """
    if not 0 < pf < 1:
        raise ValueError(f"pf must lie in (0, 1), got {pf}")
    check_size(h)
    p = resolve_start(oracle, start, rng)
    view = LocalView(oracle)
    order = [p]
    sampled = {p}
    yield p
    if h == 1:
        return
    # unsampled neighbors of expanded nodes; complete whenever the queue is empty
    frontier: set[int] = set()
    queue = deque([p])
    failed_reignitions = 0

    while True:
        reignited = False
        if queue:
            v = queue.popleft()
        elif not frontier:
            raise SamplingError(f"component exhausted after {len(sampled)} nodes (wanted {h})")
        elif failed_reignitions < REIGNITE_LIMIT:
            v = order[rng.randrange(len(order))]
            reignited = True
        else:
            candidates = sorted(frontier)
            v = candidates[rng.randrange(len(candidates))]
            frontier.discard(v)
            sampled.add(v)
            order.append(v)
            yield v
            if len(sampled) >= h:
                return
            failed_reignitions = 0
            queue.append(v)
            continue

        unburned = [y for y in view.neighbors(v) if y not in sampled]
        frontier.update(unburned)
        k = geometric_burn_count(pf, rng)
        burned = rng.sample(unburned, min(k, len(unburned))) if k and unburned else []
        if reignited:
            failed_reignitions = 0 if burned else failed_reignitions + 1
        for y in burned:
            frontier.discard(y)
            sampled.add(y)
            order.append(y)
            yield y
            if len(sampled) >= h:
                return
            queue.append(y)


def snowball_sample(oracle: CrawlOracle, h: int, seed: int, start: int | None = None) -> SampleTrace:
    rng = random.Random(seed)
    nodes = list(iter_snowball(oracle, h, rng, start))
    return SampleTrace(nodes, oracle.stats(), "snowball", seed)


def forest_fire_sample(
    oracle: CrawlOracle, h: int, pf: float, seed: int, start: int | None = None
) -> SampleTrace:
    rng = random.Random(seed)
    nodes = list(iter_forest_fire(oracle, h, pf, rng, start))
    return SampleTrace(nodes, oracle.stats(), "forestfire", seed, extra={"pf": pf})
