"""Barabasi-Albert preferential attachment graphs."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import Graph, _from_canonical


@dataclass(frozen=True)
class BaConfig:
    n: int
    m: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.n < 3 or self.n < self.m + 1:
            raise ValueError(f"n must be >= max(3, m + 1), got n={self.n}, m={self.m}")


def generate_ba(cfg: BaConfig) -> Graph:
    """Grow a BA graph from ``m`` unconnected seed nodes.

    Node ``m`` links to every seed node (all degrees are zero before that,
    so attachment probabilities would be undefined). Each later node links
    to ``m`` distinct existing nodes drawn with probability proportional to
    their current degree. The result is connected with ``m * (n - m)``
    edges.
    """
    n, m = cfg.n, cfg.m
    rng = random.Random(cfg.seed)
    adj: list[list[int]] = [[] for _ in range(n)]
    # one entry per unit of degree; uniform draws give d / sum(d_i)
    repeated: list[int] = []

    for t in range(m):
        adj[m].append(t)
        adj[t].append(m)
        repeated.append(t)
        repeated.append(m)

    for v in range(m + 1, n):
        targets: list[int] = []
        while len(targets) < m:
            u = repeated[int(rng.random() * len(repeated))]
            if u not in targets:
                targets.append(u)
        for u in targets:
            adj[v].append(u)
            adj[u].append(v)
            repeated.append(u)
            repeated.append(v)

    return _from_canonical(tuple(tuple(sorted(a)) for a in adj))
