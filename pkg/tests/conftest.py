import random
import sys

import pytest

from tinysample import BaConfig, Graph, generate_ba

BA_N = 100_000
BA_SEED = 1


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_graph(rng: random.Random, max_nodes=30, p=None):
    n = rng.randint(1, max_nodes)
    p = rng.random() if p is None else p
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def star4():
    return star_graph(4)


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture(scope="session")
def ba_graph():
    """The 100k-node BA graph shared by the statistical tests."""
    return generate_ba(BaConfig(BA_N, 2, BA_SEED))


@pytest.fixture(scope="session")
def ba_exponent(ba_graph):
    from tinysample.metrics import graph_exponent

    return graph_exponent(ba_graph).slope


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
