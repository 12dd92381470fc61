from __future__ import annotations

from itertools import accumulate

from ..graph import CrawlOracle


class SamplingError(RuntimeError):
    """A sampler could not reach its target size."""


class LocalView:
    """Per-run memo of what a crawler has already fetched from the oracle.

    Each node's neighbor list and each degree is queried at most once; the
    oracle's counters therefore measure distinct fetches.
    """

    def __init__(self, oracle: CrawlOracle):
        self.oracle = oracle
        self._nbrs: dict[int, list[int]] = {}
        self._deg: dict[int, int] = {}
        self._tables: dict[int, tuple[list[int], list[float], float]] = {}

    def neighbors(self, x: int) -> list[int]:
        nbrs = self._nbrs.get(x)
        if nbrs is None:
            nbrs = self.oracle.neighbors(x)
            self._nbrs[x] = nbrs
        return nbrs

    def degree(self, x: int) -> int:
        d = self._deg.get(x)
        if d is None:
            d = self.oracle.degree(x)
            self._deg[x] = d
        return d

    def weight_table(self, x: int, alpha: float) -> tuple[list[int], list[float], float]:
        """Neighbors of ``x`` with cumulative ``degree ** alpha`` weights."""
        entry = self._tables.get(x)
        if entry is None:
            nbrs = self.neighbors(x)
            if alpha == 0:
                weights = [1.0] * len(nbrs)
            else:
                weights = [float(self.degree(y)) ** alpha for y in nbrs]
            cum = list(accumulate(weights))
            entry = (nbrs, cum, cum[-1] if cum else 0.0)
            self._tables[x] = entry
        return entry


def resolve_start(oracle: CrawlOracle, start: int | None, rng) -> int:
    if start is None:
        return oracle.random_node(rng)
    if not oracle.is_valid(start):
        raise SamplingError(f"invalid start node {start}")
    return start


def check_size(h: int) -> None:
    if h < 1:
        raise ValueError(f"sample size must be positive, got {h}")


def mix64(seed: int, stage: int) -> int:
    """Derive a 64-bit sub-seed (splitmix64 finalizer over seed and stage)."""
    mask = (1 << 64) - 1
    z = (seed + (stage + 1) * 0x9E3779B97F4A7C15) & mask
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
    return z ^ (z >> 31)
