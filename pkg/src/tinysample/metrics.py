"""Degree exponent, degree assortativity and average clustering."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .graph import Graph


class MetricError(ValueError):
    """A metric is undefined for the given input."""


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    r_squared: float
    points_used: int


def ccdf(degrees: Iterable[int]) -> list[tuple[int, float]]:
    """``(d, fraction of entries with degree > d)`` for each distinct ``d``."""
    counts = Counter(int(d) for d in degrees)
    total = sum(counts.values())
    if total == 0:
        raise MetricError("empty degree multiset")
    out = []
    above = total
    for d in sorted(counts):
        above -= counts[d]
        out.append((d, above / total))
    return out


def fit_ccdf_points(points: Iterable[tuple[int, float]]) -> ExponentFit:
    usable = [(d, f) for d, f in points if d >= 1 and f > 0]
    if len(usable) < 3:
        raise MetricError(f"cannot fit: {len(usable)} usable CCDF point(s), need 3")
    x = np.log10(np.array([d for d, _ in usable], dtype=float))
    y = np.log10(np.array([f for _, f in usable], dtype=float))
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0.0:
        raise MetricError("cannot fit: zero variance in log-degree")
    sxy = float(np.sum((x - xm) * (y - ym)))
    slope = sxy / sxx
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    syy = float(np.sum((y - ym) ** 2))
    r2 = 1.0 if syy == 0.0 else 1.0 - float(np.sum(resid**2)) / syy
    return ExponentFit(slope, intercept, min(1.0, max(0.0, r2)), len(usable))


def fit_degree_exponent(degrees: Iterable[int]) -> ExponentFit:
    """OLS slope of log10 CCDF(d) against log10 d, one point per distinct degree.

    Degree-0 entries count toward the CCDF denominator but are not fitted.
    """
    return fit_ccdf_points(ccdf(degrees))


def graph_exponent(g: Graph) -> ExponentFit:
    return fit_degree_exponent(g.degrees())


def assortativity(g: Graph) -> float:
    """Pearson correlation of endpoint degrees over both orientations of every edge."""
    if g.edge_count == 0:
        raise MetricError("assortativity undefined: graph has no edges")
    adj = g.adjacency
    deg = [len(a) for a in adj]
    # exact integer sums, one rounding at the end
    s1 = s2 = sp = 0
    for u, nbrs in enumerate(adj):
        du = deg[u]
        for v in nbrs:
            if v > u:
                dv = deg[v]
                s1 += du + dv
                s2 += du * du + dv * dv
                sp += 2 * du * dv
    count = 2 * g.edge_count
    num = count * sp - s1 * s1
    den = count * s2 - s1 * s1
    if den == 0:
        raise MetricError("assortativity undefined: zero degree variance")
    return num / den


def local_clustering(g: Graph) -> np.ndarray:
    adj = g.adjacency
    n = len(adj)
    nbr_sets = [frozenset(a) for a in adj]
    tri = np.zeros(n, dtype=np.int64)
    # each triangle u<v<w is found once from its lowest edge (u, v)
    for u in range(n):
        su = nbr_sets[u]
        for v in adj[u]:
            if v <= u:
                continue
            for w in su & nbr_sets[v]:
                if w > v:
                    tri[u] += 1
                    tri[v] += 1
                    tri[w] += 1
    deg = np.fromiter((len(a) for a in adj), dtype=np.int64, count=n)
    coef = np.zeros(n, dtype=float)
    ok = deg >= 2
    coef[ok] = 2.0 * tri[ok] / (deg[ok] * (deg[ok] - 1))
    return coef


def avg_clustering(g: Graph) -> float:
    """Mean local clustering over all nodes; degree <= 1 nodes count as 0."""
    if g.node_count == 0:
        raise MetricError("clustering undefined: empty graph")
    return float(local_clustering(g).mean())
