"""Small representative subgraphs of large graphs via calibrated biased walks."""

from .generator import BaConfig, generate_ba
from .graph import (
    CrawlOracle,
    Graph,
    GraphFormatError,
    LoadedGraph,
    OracleStats,
    SampleTrace,
    induced_degrees,
    induced_subgraph,
    load_edge_list,
    save_edge_list,
)
from .metrics import (
    ExponentFit,
    MetricError,
    assortativity,
    avg_clustering,
    ccdf,
    fit_degree_exponent,
)

__version__ = "0.1.0"
