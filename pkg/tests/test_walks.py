import inspect
import math
import random
from collections import Counter

import pytest
from scipy import stats

from conftest import complete_graph, path_graph, random_graph
from tinysample import BaConfig, CrawlOracle, Graph, generate_ba
from tinysample.graph import induced_degrees
from tinysample.metrics import fit_degree_exponent
from tinysample import samplers
from tinysample.samplers import (
    LocalView,
    SamplingError,
    brwfb_sample,
    brwfb_transition,
    estimate_exponent_mrw,
    mrw_acceptance,
    mrw_sample,
    mrw_walk,
    transition_probabilities,
)


def hub_fixture():
    """Node 0 has neighbors 1, 2, 3 with degrees 1, 2, 4."""
    edges = [(0, 1), (0, 2), (0, 3), (2, 4), (3, 5), (3, 6), (3, 7)]
    return Graph.from_edges(8, edges)


def test_mrw_acceptance_examples():
    assert mrw_acceptance(2, 1) == 1.0
    assert mrw_acceptance(1, 4) == 0.25
    assert mrw_acceptance(3, 3) == 1.0


class AlwaysHigh(random.Random):
    def random(self):
        return 1 - 1e-9


def test_mrw_never_rejects_downhill_moves():
    # with draws pinned near 1 the proposal is the last neighbor and any
    # randomized acceptance fails, so the chain moves iff deg(y) <= deg(x)
    g = generate_ba(BaConfig(300, 2, 4))
    view = LocalView(CrawlOracle(g))
    from tinysample.samplers.walks import _mrw_chain

    chain = _mrw_chain(view, 0, AlwaysHigh())
    x = 0
    for _ in range(200):
        y = g.neighbors(x)[-1]
        expected = y if g.degree(y) <= g.degree(x) else x
        nxt = next(chain)
        assert nxt == expected
        x = nxt


def test_mrw_walk_records_every_step():
    g = generate_ba(BaConfig(100, 2, 11))
    degs = mrw_walk(CrawlOracle(g), 0, 500, seed=3)
    assert len(degs) == 500
    assert set(degs) <= set(g.degrees().tolist())
    assert mrw_walk(CrawlOracle(g), 0, 500, seed=3) == degs


def test_mrw_walk_isolated_start():
    g = Graph([[1], [0], []])
    with pytest.raises(SamplingError, match="isolated"):
        mrw_walk(CrawlOracle(g), 2, 10, seed=1)


def test_mrw_short_run_tracks_degree_histogram():
    g = generate_ba(BaConfig(100, 2, 11))
    true = Counter(g.degrees().tolist())
    degs = mrw_walk(CrawlOracle(g), 0, 201_000, seed=9)[1000:]
    emp = Counter(degs)
    tv = 0.5 * sum(abs(emp[d] / len(degs) - true[d] / 100) for d in set(emp) | set(true))
    assert tv < 0.05


def test_estimate_regular_graph_cannot_fit():
    cycle = Graph.from_edges(500, [(i, (i + 1) % 500) for i in range(500)])
    with pytest.raises(SamplingError, match="cannot fit"):
        estimate_exponent_mrw(CrawlOracle(cycle), 200, seed=1)


def test_estimate_requires_h_100():
    with pytest.raises(ValueError):
        estimate_exponent_mrw(CrawlOracle(complete_graph(5)), 99, seed=1)


def test_synthetic_power_law_fit_slope_minus_two():
    # #(deg > d) = C / d**2 for d = 1 .. K, rounded; bypasses the walk
    c, k = 1_000_000, 100
    above = {d: round(c / d**2) for d in range(1, k + 1)}
    degrees = []
    prev = 4 * c
    for d in range(1, k + 1):
        degrees += [d] * (prev - above[d])
        prev = above[d]
    degrees += [k + 1] * above[k]
    fit = fit_degree_exponent(degrees)
    assert fit.slope == pytest.approx(-2.0, abs=0.05)


@pytest.mark.slow
def test_estimate_close_to_full_graph(ba_graph, ba_exponent):
    for seed in range(1, 6):
        d = estimate_exponent_mrw(CrawlOracle(ba_graph), 5000, seed).slope
        assert abs(d - ba_exponent) <= 0.3, (seed, d, ba_exponent)


@pytest.mark.parametrize(
    "alpha, expected",
    [(1, [1 / 7, 2 / 7, 4 / 7]), (-1, [4 / 7, 2 / 7, 1 / 7]), (0, [1 / 3, 1 / 3, 1 / 3])],
)
def test_transition_probabilities_exact(alpha, expected):
    probs = transition_probabilities(CrawlOracle(hub_fixture()), 0, alpha)
    assert [y for y, _ in probs] == [1, 2, 3]
    assert [p for _, p in probs] == pytest.approx(expected, abs=1e-15)


def test_transition_alpha_zero_is_uniform():
    g = generate_ba(BaConfig(200, 2, 2))
    for x in range(0, 200, 17):
        probs = transition_probabilities(CrawlOracle(g), x, 0.0)
        assert all(p == pytest.approx(1 / g.degree(x)) for _, p in probs)


def test_transition_probabilities_sum_to_one():
    rng = random.Random(21)
    for _ in range(300):
        g = random_graph(rng, 40, 0.2)
        x = rng.randrange(g.node_count)
        if g.degree(x) == 0:
            with pytest.raises(SamplingError):
                transition_probabilities(CrawlOracle(g), x, 1.0)
            continue
        alpha = rng.uniform(-3, 3)
        total = sum(p for _, p in transition_probabilities(CrawlOracle(g), x, alpha))
        assert abs(total - 1) <= 1e-9


@pytest.mark.parametrize("alpha", [-1.0, 0.0, 1.0])
def test_transition_empirical_frequencies(alpha):
    g = hub_fixture()
    oracle = CrawlOracle(g)
    view = LocalView(oracle)
    rng = random.Random(1000 + int(alpha))
    n = 100_000
    counts = Counter(brwfb_transition(oracle, 0, alpha, rng, view) for _ in range(n))
    for y, p in transition_probabilities(CrawlOracle(g), 0, alpha):
        sd = math.sqrt(n * p * (1 - p))
        assert abs(counts[y] - n * p) <= 3 * sd


def test_transition_isolated_node():
    with pytest.raises(SamplingError):
        brwfb_transition(CrawlOracle(Graph([[], []])), 0, 0.0, random.Random(1))


def test_brwfb_single_node():
    o = CrawlOracle(generate_ba(BaConfig(50, 2, 1)))
    trace = brwfb_sample(o, 1, 0.0, seed=4, start=7)
    assert trace.nodes == [7]
    assert o.neighbor_queries == 0


def test_brwfb_path_forced_order():
    for seed in range(20):
        trace = brwfb_sample(CrawlOracle(path_graph(4)), 3, 0.0, seed, start=0)
        assert trace.nodes == [0, 1, 2]


def test_brwfb_trace_fields():
    g = generate_ba(BaConfig(2000, 2, 5))
    trace = brwfb_sample(CrawlOracle(g), 300, -0.5, seed=8)
    assert len(trace.nodes) == len(set(trace.nodes)) == 300
    assert trace.alpha == -0.5 and trace.rng_seed == 8 and trace.sampler_label == "brwfb"
    assert trace.stats.distinct_visited >= 300


def test_brwfb_walks_stay_connected():
    g = generate_ba(BaConfig(2000, 2, 5))
    nodes = brwfb_sample(CrawlOracle(g), 400, 1.0, seed=2).nodes
    assert (induced_degrees(g, nodes) >= 1).all()


def first_two_discoveries_exact(g: Graph, p: int, max_steps: int = 30):
    """Joint law of the 2nd and 3rd sampled nodes of an unbiased walk with fly-back."""
    law = {}
    for y1 in g.neighbors(p):
        p1 = 1 / g.degree(p)
        sampled = {p, y1}
        mass = {p: 1.0}
        for _ in range(max_steps):
            nxt = {}
            for x, m in mass.items():
                share = m / g.degree(x)
                for y in g.neighbors(x):
                    if y in sampled:
                        nxt[y] = nxt.get(y, 0.0) + share
                    else:
                        law[(y1, y)] = law.get((y1, y), 0.0) + p1 * share
            mass = nxt
    return law


def test_brwfb_alpha_zero_matches_unbiased_walk():
    g = generate_ba(BaConfig(20, 2, 5))
    p = 3
    law = first_two_discoveries_exact(g, p)
    assert sum(law.values()) == pytest.approx(1.0, abs=1e-6)
    runs = 10_000
    seen = Counter(
        tuple(brwfb_sample(CrawlOracle(g), 3, 0.0, seed=s, start=p).nodes[1:]) for s in range(runs)
    )
    assert set(seen) <= set(law)
    # pool cells with small expectation into one bin
    keys = sorted(law, key=lambda k: -law[k])
    big = [k for k in keys if law[k] * runs >= 5]
    small = [k for k in keys if law[k] * runs < 5]
    obs = [seen[k] for k in big] + ([sum(seen[k] for k in small)] if small else [])
    exp = [law[k] * runs for k in big] + ([sum(law[k] for k in small) * runs] if small else [])
    scale = sum(obs) / sum(exp)
    result = stats.chisquare(obs, [e * scale for e in exp])
    assert result.pvalue > 1e-3


@pytest.mark.slow
def test_alpha_ordering_on_ba(ba_graph):
    def exponent(alpha, seed):
        nodes = brwfb_sample(CrawlOracle(ba_graph), 5000, alpha, seed).nodes
        return fit_degree_exponent(induced_degrees(ba_graph, nodes)).slope

    # negative alpha steers away from hubs, so the sample's CCDF is steeper
    for seed in range(1, 11):
        assert exponent(-1.0, seed) < exponent(0.0, seed)
    means = {a: sum(exponent(a, s) for s in range(1, 6)) / 5 for a in (-1.0, 0.0, 1.0)}
    assert means[-1.0] < means[0.0] < means[1.0]


def test_mrw_sample_distinct_nodes():
    g = generate_ba(BaConfig(1000, 2, 6))
    trace = mrw_sample(CrawlOracle(g), 200, seed=3)
    assert len(set(trace.nodes)) == 200
    assert mrw_sample(CrawlOracle(g), 200, seed=3).nodes == trace.nodes


two_triangles = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


@pytest.mark.parametrize(
    "run",
    [
        lambda o: brwfb_sample(o, 4, 0.0, 1, start=0),
        lambda o: mrw_sample(o, 4, 1, start=0),
    ],
)
def test_walks_component_too_small(run):
    with pytest.raises(SamplingError, match="component too small"):
        run(CrawlOracle(two_triangles))


def test_invalid_start():
    with pytest.raises(SamplingError, match="invalid start"):
        brwfb_sample(CrawlOracle(two_triangles), 2, 0.0, 1, start=99)


def test_isolated_start_brwfb():
    with pytest.raises(SamplingError):
        brwfb_sample(CrawlOracle(Graph([[1], [0], []])), 2, 0.0, 1, start=2)


@pytest.mark.parametrize("seed", [0, 1, 2**40 + 3])
def test_walk_determinism(seed):
    g = generate_ba(BaConfig(3000, 2, 1))
    for alpha in (-1.0, 0.0, 0.7):
        a = brwfb_sample(CrawlOracle(g), 300, alpha, seed)
        b = brwfb_sample(CrawlOracle(g), 300, alpha, seed)
        assert a.nodes == b.nodes and a.stats == b.stats


def test_samplers_only_take_oracles():
    funcs = [
        samplers.mrw_walk,
        samplers.estimate_exponent_mrw,
        samplers.brwfb_transition,
        samplers.brwfb_sample,
        samplers.iter_brwfb,
        samplers.mrw_sample,
        samplers.iter_mrw,
        samplers.snowball_sample,
        samplers.iter_snowball,
        samplers.forest_fire_sample,
        samplers.iter_forest_fire,
    ]
    for fn in funcs:
        params = list(inspect.signature(fn).parameters.values())
        assert params[0].annotation == "CrawlOracle", fn.__name__
        assert all("Graph" not in str(p.annotation) for p in params), fn.__name__
