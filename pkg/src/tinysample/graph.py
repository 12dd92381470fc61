"""Undirected simple graphs, edge-list I/O and the crawl oracle.

Samplers never see a :class:`Graph` directly. They receive a
:class:`CrawlOracle`, which answers local degree/neighbor queries and counts
how much of the graph has been touched.
"""

from __future__ import annotations

import logging
import os
import random
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

logger = logging.getLogger(__name__)


class GraphFormatError(ValueError):
    """Raised when an edge-list file cannot be parsed."""


class Graph:
    """Immutable undirected simple graph on nodes ``0 .. node_count - 1``.

    Adjacency lists are stored as sorted tuples, so instances are hashable
    by identity only but safe to share between workers.
    """

    __slots__ = ("_adj", "_edge_count")

    def __init__(self, adjacency: Sequence[Iterable[int]]):
        adj = tuple(tuple(sorted(set(nbrs))) for nbrs in adjacency)
        n = len(adj)
        half_edges = 0
        for x, nbrs in enumerate(adj):
            half_edges += len(nbrs)
            for y in nbrs:
                if y == x:
                    raise ValueError(f"self-loop on node {x}")
                if not 0 <= y < n:
                    raise ValueError(f"neighbor {y} of node {x} out of range")
        for x, nbrs in enumerate(adj):
            for y in nbrs:
                if not _contains(adj[y], x):
                    raise ValueError(f"edge {x}-{y} is not symmetric")
        self._adj = adj
        self._edge_count = half_edges // 2

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from an edge iterable, dropping loops and duplicates."""
        adj: list[set[int]] = [set() for _ in range(node_count)]
        for u, v in edges:
            if u == v:
                continue
            adj[u].add(v)
            adj[v].add(u)
        return cls(adj)

    @property
    def node_count(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._adj

    def neighbors(self, x: int) -> tuple[int, ...]:
        return self._adj[x]

    def degree(self, x: int) -> int:
        return len(self._adj[x])

    def degrees(self) -> np.ndarray:
        return np.fromiter((len(a) for a in self._adj), dtype=np.int64, count=len(self._adj))

    def has_edge(self, x: int, y: int) -> bool:
        return _contains(self._adj[x], y)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield each edge once as ``(u, v)`` with ``u < v``."""
        for u, nbrs in enumerate(self._adj):
            for v in nbrs[bisect_left(nbrs, u):]:
                yield u, v

    def is_connected(self) -> bool:
        n = self.node_count
        if n == 0:
            return True
        seen = bytearray(n)
        seen[0] = 1
        stack = [0]
        count = 1
        while stack:
            x = stack.pop()
            for y in self._adj[x]:
                if not seen[y]:
                    seen[y] = 1
                    count += 1
                    stack.append(y)
        return count == n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        return id(self)

    def __repr__(self) -> str:
        return f"Graph(nodes={self.node_count}, edges={self.edge_count})"

    def __reduce__(self):
        return (_from_canonical, (self._adj,))


def _from_canonical(adj: tuple[tuple[int, ...], ...]) -> Graph:
    # caller guarantees sorted, symmetric, loop-free tuples
    g = Graph.__new__(Graph)
    g._adj = adj
    g._edge_count = sum(len(a) for a in adj) // 2
    return g


def _contains(sorted_nbrs: tuple[int, ...], y: int) -> bool:
    i = bisect_left(sorted_nbrs, y)
    return i < len(sorted_nbrs) and sorted_nbrs[i] == y


@dataclass(frozen=True)
class LoadedGraph:
    """Result of :func:`load_edge_list`.

    ``original_ids[i]`` is the id used in the file for internal node ``i``.
    """

    graph: Graph
    original_ids: tuple[int, ...]
    self_loops_dropped: int = 0
    duplicates_collapsed: int = 0

    def internal_id(self, original: int) -> int:
        try:
            return self._index[original]
        except KeyError:
            raise KeyError(f"node id {original} not present in edge list") from None

    @property
    def _index(self) -> dict[int, int]:
        idx = self.__dict__.get("_index_cache")
        if idx is None:
            idx = {orig: i for i, orig in enumerate(self.original_ids)}
            object.__setattr__(self, "_index_cache", idx)
        return idx


def parse_edge_list(lines: Iterable[str]) -> LoadedGraph:
    ids: dict[int, int] = {}
    edges: set[tuple[int, int]] = set()
    loops = 0
    dups = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected two node ids, got {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: node ids must be integers, got {line!r}") from None
        if a < 0 or b < 0:
            raise GraphFormatError(f"line {lineno}: node ids must be non-negative")
        u = ids.setdefault(a, len(ids))
        v = ids.setdefault(b, len(ids))
        if u == v:
            loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in edges:
            dups += 1
            continue
        edges.add(key)
    if not edges:
        raise GraphFormatError("no edges")
    if loops:
        logger.warning("dropped %d self-loop(s)", loops)
    graph = Graph.from_edges(len(ids), edges)
    return LoadedGraph(graph, tuple(ids), loops, dups)


def load_edge_list(path: str | os.PathLike) -> LoadedGraph:
    """Read a whitespace-separated edge list; ``#`` lines are comments.

    Node ids are compacted to ``0 .. n-1`` in order of first appearance.
    """
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh)


def save_edge_list(g: Graph, path: str | os.PathLike, original_ids: Sequence[int] | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for u, v in g.edges():
            if original_ids is not None:
                u, v = original_ids[u], original_ids[v]
            fh.write(f"{u} {v}\n")


def induced_subgraph(g: Graph, nodes: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Subgraph of ``g`` on ``nodes`` plus the old-to-new id map.

    New ids follow ascending old id order.
    """
    n = g.node_count
    keep = sorted(set(nodes))
    if keep and (keep[0] < 0 or keep[-1] >= n):
        bad = keep[0] if keep[0] < 0 else keep[-1]
        raise IndexError(f"node id {bad} out of range for graph with {n} nodes")
    remap = {old: new for new, old in enumerate(keep)}
    adj = g.adjacency
    sub = []
    for old in keep:
        sub.append(tuple(remap[y] for y in adj[old] if y in remap))
    return _from_canonical(tuple(sub)), remap


def induced_degrees(g: Graph, nodes: Iterable[int]) -> np.ndarray:
    """Degrees inside the subgraph induced by ``nodes`` (in input order)."""
    node_list = list(nodes)
    members = set(node_list)
    adj = g.adjacency
    return np.fromiter(
        (sum(1 for y in adj[x] if y in members) for x in node_list),
        dtype=np.int64,
        count=len(node_list),
    )


@dataclass(frozen=True)
class OracleStats:
    neighbor_queries: int
    degree_queries: int
    distinct_visited: int


class CrawlOracle:
    """Local-only view of a graph, as a crawler would see it.

    Exposes degree and neighbor lookups and an entry point for picking a
    start node. Nothing global about the target is reachable from here.
    """

    def __init__(self, target: Graph):
        self._target = target
        self.neighbor_queries = 0
        self.degree_queries = 0
        self.visited: set[int] = set()

    def _check(self, x: int) -> None:
        if not 0 <= x < len(self._target.adjacency):
            raise IndexError(f"invalid node id {x}")

    def degree(self, x: int) -> int:
        self._check(x)
        self.degree_queries += 1
        self.visited.add(x)
        return len(self._target.adjacency[x])

    def neighbors(self, x: int) -> list[int]:
        self._check(x)
        nbrs = self._target.adjacency[x]
        self.neighbor_queries += 1
        self.visited.add(x)
        self.visited.update(nbrs)
        return list(nbrs)

    def is_valid(self, x: int) -> bool:
        return 0 <= x < len(self._target.adjacency)

    def random_node(self, rng: random.Random) -> int:
        """Entry point into the graph, e.g. a seed profile handed to a crawler."""
        return rng.randrange(len(self._target.adjacency))

    @property
    def distinct_visited(self) -> int:
        return len(self.visited)

    def stats(self) -> OracleStats:
        return OracleStats(self.neighbor_queries, self.degree_queries, len(self.visited))


@dataclass
class SampleTrace:
    nodes: list[int]
    stats: OracleStats
    sampler_label: str
    rng_seed: int
    alpha: float | None = None
    extra: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.nodes)
