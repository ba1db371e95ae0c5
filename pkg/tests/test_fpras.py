import math

import numpy as np
import pytest

from conftest import all_heavy_masks
from rwgraph.errors import MixedParameters
from rwgraph.fpras import (
    ApproxResult,
    boost,
    boosted_confidence,
    estimate_moment,
    estimate_moment_boosted,
    make_ladder,
    runs_for_confidence,
    shrunk_graph,
)
from rwgraph.graph import BCWEdge, BCWGraph, contract_zero_edges, normalize, realize_weights
from rwgraph.oracle import critical_ratio_mean, exact_distribution, gen_critical_ratio, gen_random_bcw
from rwgraph.properties import PropertyKind, bind, evaluate_batch

DIAM = PropertyKind.diameter()
PROPS = [DIAM, PropertyKind.radius(0), PropertyKind.mst()]


def prepared(g, prop):
    prop, g = bind(prop, g)
    return prop, contract_zero_edges(normalize(g)).graph


def small_graphs(count=12):
    for s in range(count):
        n = 2 + s % 4
        yield gen_random_bcw(n, min(n + 2 + s % 3, 9), seed=s, weight_range=(0, 12), light_zero=0.3), PROPS[s % 3]


# ---------------------------------------------------------------- ladder


def test_ladder_constants():
    lad = make_ladder(2, 5.0, 1, 1.0)
    assert lad.kappa == 3
    # Xmax = 20 < 2^5
    assert lad.N == 5 and lad.Xmax == 20
    for n, mp, k, eps in [(3, 7.0, 1, 0.2), (5, 100.0, 2, 0.2), (4, 1.0, 3, 0.1)]:
        lad = make_ladder(n, mp, k, eps)
        e = eps / k
        assert lad.Xmax**k < (1 + e) ** lad.N
        assert lad.N == 1 or lad.Xmax**k >= (1 + e) ** (lad.N - 1)
        assert lad.rho ** lad.kappa >= n * n * lad.rho / (lad.rho - 1)
        assert lad.rho ** (lad.kappa - 1) < n * n * lad.rho / (lad.rho - 1)


def test_shrunk_graph_example():
    # eps = 1, n = 2: kappa = 3, level 5 zeroes phases below 4
    g = BCWGraph(2, (BCWEdge(0, 1, 3, 1, 0.5), BCWEdge(0, 1, 5, 5, 1.0)))
    gs = shrunk_graph(g, 5, 1.0)
    assert [(e.heavy, e.light) for e in gs.edges] == [(0, 0), (5, 5)]


def test_low_levels_unchanged():
    g = gen_random_bcw(4, 7, seed=3, weight_range=(1, 9))
    lad = make_ladder(g.n, g.max_phase(), 1, 0.2)
    for i in range(lad.kappa + 1):
        assert shrunk_graph(g, i, 0.2) == g


@pytest.mark.parametrize("k", [1, 2])
def test_shrinking_bound(k):
    eps = 0.5
    for g, prop in small_graphs():
        prop, gc = prepared(g, prop)
        lad = make_ladder(gc.n, gc.max_phase(), k, eps)
        a = gc.arrays
        w = realize_weights(gc, all_heavy_masks(gc.m))
        x = evaluate_batch(prop, gc.n, a.us, a.vs, w, gc.designated)
        prev = x
        for i in range(lad.N):
            wi = np.where(w >= lad.rho ** (i - lad.kappa), w, 0.0)
            xi = evaluate_batch(prop, gc.n, a.us, a.vs, wi, gc.designated)
            assert np.all(xi <= prev + 1e-9)
            hit = x >= lad.rho**i * (1 - 1e-12)
            assert np.all(xi[hit] <= x[hit] + 1e-9)
            assert np.all(xi[hit] > x[hit] / lad.rho)
            prev = xi


@pytest.mark.parametrize("k", [1, 2, 3])
def test_ladder_identity_on_exact_tails(k):
    eps = 0.2
    for g, prop in small_graphs():
        bprop, gc = prepared(g, prop)
        d = exact_distribution(gc, bprop)
        lad = make_ladder(gc.n, gc.max_phase(), k, eps)
        A = lad.combine([d.prob_positive()] + [d.tail(lad.rho**i) for i in range(1, lad.N)])
        m = d.moment(k)
        assert m / (1 + eps) * (1 - 1e-12) <= A <= m * (1 + 1e-12)


def test_power_mean_monotone():
    for g, prop in small_graphs():
        d = exact_distribution(g, prop)
        means = [d.moment(k) ** (1 / k) for k in (1, 2, 3, 4)]
        assert all(a <= b * (1 + 1e-12) for a, b in zip(means, means[1:]))


# ---------------------------------------------------------------- estimates


def test_deterministic_graph_is_exact():
    g = BCWGraph(3, (BCWEdge(0, 1, 2, 2, 0.9), BCWEdge(1, 2, 3, 3, 0.1), BCWEdge(0, 2, 7, 7, 0.5)))
    for k in (1, 2):
        r = estimate_moment(g, DIAM, k, 0.3, 0)
        assert r.estimate == pytest.approx(5.0**k)
        assert r.branch_stats["deterministic"]


def test_degenerate_zero():
    g = BCWGraph(2, (BCWEdge(0, 1, 0, 0, 0.5),))
    r = estimate_moment(g, DIAM)
    assert r.estimate == 0.0 and r.branch_stats["degenerate_zero"]


def test_second_moment_example():
    g = BCWGraph(2, (BCWEdge(0, 1, 3, 1, 0.5),))
    assert exact_distribution(g, DIAM).moment(2) == pytest.approx(5)
    r = estimate_moment_boosted(g, DIAM, 2, 0.2, 1)
    assert 5 / 1.2**4 <= r.estimate <= 5 * 1.2**4
    assert r.moment_order == 2 and r.runs == 9


def test_critical_ratio_m10():
    g = gen_critical_ratio(10)
    assert critical_ratio_mean(10) == 1024.9990234375
    runs = [estimate_moment(g, DIAM, 1, 0.2, s).estimate for s in range(8)]
    good = sum(1024.9990234375 / 1.2**4 <= r <= 1024.9990234375 * 1.2**4 for r in runs)
    assert good >= 6


def test_scale_invariance():
    g = gen_random_bcw(3, 4, seed=5, weight_range=(1, 6))
    scaled = BCWGraph(g.n, tuple(BCWEdge(e.u, e.v, 2.5 * e.heavy, 2.5 * e.light, e.p) for e in g.edges), g.designated)
    a = estimate_moment(g, DIAM, 1, 0.2, 3).estimate
    b = estimate_moment(scaled, DIAM, 1, 0.2, 3).estimate
    assert b == pytest.approx(2.5 * a)


def test_seeded_runs_repeat():
    g = gen_random_bcw(4, 6, seed=2)
    a = estimate_moment(g, PROPS[2], 1, 0.2, 7)
    b = estimate_moment(g, PROPS[2], 1, 0.2, 7)
    assert a.estimate == b.estimate and a.branch_stats == b.branch_stats


def test_practical_schedule_close():
    g = gen_random_bcw(4, 6, seed=4)
    exact = exact_distribution(g, DIAM).mean
    r = estimate_moment_boosted(g, DIAM, 1, 0.2, 0, schedule="practical")
    assert r.schedule == "practical"
    assert exact / 1.2**4 <= r.estimate <= exact * 1.2**4


def test_rejects_bad_arguments():
    g = gen_random_bcw(3, 3)
    with pytest.raises(ValueError):
        estimate_moment(g, DIAM, 0)
    with pytest.raises(ValueError):
        estimate_moment(g, DIAM, 1, -0.1)


# ---------------------------------------------------------------- boosting


def result(v, k=1, eps=0.2):
    return ApproxResult(v, k, eps, 0.75, 0, 0.0, {}, "diameter")


def test_boost_examples():
    assert boost([result(3.0)]) == result(3.0)
    out = boost([result(1.0), result(1.1), result(50.0)])
    assert out.estimate == 1.1 and out.runs == 3


def test_boost_failure_probability():
    fail = math.fsum(math.comb(9, j) * 0.25**j * 0.75 ** (9 - j) for j in range(5, 10))
    assert 1 - boosted_confidence(9) == pytest.approx(fail)
    assert fail == pytest.approx(0.0489, abs=5e-5)
    assert runs_for_confidence(0.95) == 9
    assert runs_for_confidence(0.75) == 1


def test_boost_mixed_parameters():
    with pytest.raises(MixedParameters):
        boost([result(1.0), result(1.0, k=2)])
    with pytest.raises(MixedParameters):
        boost([result(1.0), result(1.0, eps=0.1)])
    with pytest.raises(ValueError):
        boost([])
