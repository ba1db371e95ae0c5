import math

import numpy as np
import pytest

from conftest import triangle_bcw
from rwgraph.errors import TooLarge
from rwgraph.estimators import monte_carlo_moment
from rwgraph.graph import BCWEdge, BCWGraph, is_connected, validate
from rwgraph.oracle import (
    ExactDistribution,
    bundle_min_distribution,
    critical_ratio_mean,
    exact_distribution,
    gen_critical_ratio,
    gen_random_bcw,
    gen_random_rw,
    merge_support,
    outcome_count,
    set_partitions,
)
from rwgraph.properties import PropertyKind
from rwgraph.transform import rw_to_bcw

DIAM = PropertyKind.diameter()


def test_two_vertex_example():
    d = exact_distribution(BCWGraph(2, (BCWEdge(0, 1, 3, 1, 0.5),)), DIAM)
    assert d.support == ((1.0, 0.5), (3.0, 0.5))
    assert d.mean == 2


def test_triangle_example():
    d = exact_distribution(triangle_bcw(), DIAM)
    assert d.support == ((0.0, 0.5), (1.0, 0.5))
    assert d.mean == 0.5


def test_guard():
    g = BCWGraph(2, tuple(BCWEdge(0, 1, 2, 1, 0.5) for _ in range(25)))
    assert outcome_count(g) == 2**25
    with pytest.raises(TooLarge):
        exact_distribution(g, DIAM)


def test_critical_ratio_small():
    g = gen_critical_ratio(1)
    assert g.m == 1 and (g.edges[0].light, g.edges[0].heavy, g.edges[0].p) == (1, 4, 0.5)
    assert exact_distribution(g, DIAM).mean == 2.5


def test_critical_ratio_m10():
    d = exact_distribution(gen_critical_ratio(10), DIAM)
    assert d.mean == 1024.9990234375 == critical_ratio_mean(10)
    ratio = d.central_moment(2) / d.mean**2
    assert 2**10 / 2 <= ratio <= 2**10 * 2


def test_critical_ratio_guards():
    with pytest.raises(TooLarge):
        gen_critical_ratio(31)
    with pytest.raises(ValueError):
        gen_critical_ratio(0)


def test_generators():
    g = gen_random_bcw(1, 0)
    assert g.n == 1 and g.m == 0
    assert gen_random_bcw(5, 8, seed=3) == gen_random_bcw(5, 8, seed=3)
    for s in range(20):
        g = gen_random_bcw(5, 8, seed=s)
        validate(g)
        assert g.m == 8 and is_connected(g.n, [(e.u, e.v) for e in g.edges])
        assert all(e.light <= e.heavy for e in g.edges)
        r = gen_random_rw(5, 8, seed=s)
        validate(r)
    with pytest.raises(ValueError):
        gen_random_bcw(5, 3)


def test_probabilities_sum_to_one():
    for s in range(10):
        d = exact_distribution(gen_random_rw(4, 6, seed=s), PropertyKind.mst())
        assert math.fsum(d.probs) == pytest.approx(1, abs=1e-9)
        assert list(d.values) == sorted(d.values)


def test_log_space_matches_direct():
    # 2^21 instances crosses into log space; the answer is known in closed form
    g = BCWGraph(2, tuple(BCWEdge(0, 1, 2, 1, 0.5) for _ in range(21)))
    d = exact_distribution(g, DIAM)
    assert d.support[0][0] == 1 and d.support[0][1] == pytest.approx(1 - 2.0**-21, rel=1e-12)
    assert d.support[1][1] == pytest.approx(2.0**-21, rel=1e-9)


def test_transformed_graph_matches():
    for s in range(10):
        g = gen_random_rw(4, 5, seed=s, max_phases=4)
        for prop in (DIAM, PropertyKind.radius(0), PropertyKind.mst()):
            a = exact_distribution(g, prop)
            b = exact_distribution(rw_to_bcw(g), prop)
            vals = sorted(set(a.values) | set(b.values))
            tv = 0.5 * sum(abs(dict(a.support).get(v, 0) - dict(b.support).get(v, 0)) for v in vals)
            assert tv <= 1e-9


def test_tails_right_continuous():
    d = exact_distribution(gen_random_bcw(4, 6, seed=1), DIAM)
    support = set(d.values)
    for x in np.linspace(0, d.values.max() + 1, 97):
        if x not in support:
            assert d.tail(x) == d.tail(x - 1e-12)
    for v in support:
        if v > 0:
            assert d.tail(v) - d.tail(v + 1e-9) == pytest.approx(dict(d.support)[v])


def test_monte_carlo_sanity():
    for s in range(4):
        g = gen_random_bcw(4, 6, seed=s)
        d = exact_distribution(g, DIAM)
        S = 100_000
        mean = monte_carlo_moment(g, DIAM, 1, S, s)
        se = math.sqrt(d.central_moment(2) / S)
        assert abs(mean - d.mean) <= 4 * se + 1e-12


def test_infinite_value_gives_infinite_moment():
    d = exact_distribution(BCWGraph(2, (BCWEdge(0, 1, 3, 1, 0.5),)), DIAM)
    assert math.isfinite(d.moment(2))
    assert ExactDistribution(((1.0, 0.5), (math.inf, 0.5))).moment(1) == math.inf


def test_helpers():
    assert merge_support(np.array([1.0, 1.0 + 1e-14, 2.0]), np.array([0.25, 0.25, 0.5])) == ((1.0, 0.5), (2.0, 0.5))
    bell = [1, 1, 2, 5, 15, 52]
    assert [sum(1 for _ in set_partitions(n)) for n in range(6)] == bell
    bundle = bundle_min_distribution([BCWEdge(0, 1, 4, 1, 0.5), BCWEdge(0, 1, 3, 2, 0.5)])
    assert bundle == ((1.0, 0.5), (2.0, 0.25), (3.0, 0.25))
