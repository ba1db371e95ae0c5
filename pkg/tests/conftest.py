import itertools

import numpy as np
import pytest

from rwgraph.graph import BCWEdge, BCWGraph, WeightedGraph


def triangle_bcw(p=0.5, heavy=1.0, light=0.0):
    return BCWGraph(3, tuple(BCWEdge(u, v, heavy, light, p) for u, v in [(0, 1), (1, 2), (0, 2)]))


def three_vertex_example():
    # e1=(a,b) L=0 H=5 p=0.01; e2=(b,c) L=0 H=5 p=0.01; e3=(a,c) L=2 H=4 p=0.5
    return BCWGraph(3, (BCWEdge(0, 1, 5, 0, 0.01), BCWEdge(1, 2, 5, 0, 0.01), BCWEdge(0, 2, 4, 2, 0.5)), 0)


def random_weighted(rng, n_max=8, m_max=14, w_max=9, min_n=1):
    n = int(rng.integers(min_n, n_max + 1))
    order = rng.permutation(n)
    edges = [(int(order[i]), int(order[rng.integers(i)])) for i in range(1, n)]
    extra = int(rng.integers(0, max(0, m_max - len(edges)) + 1))
    for _ in range(extra):
        edges.append(tuple(int(x) for x in rng.integers(0, n, size=2)))
    return WeightedGraph(n, [(u, v, float(rng.integers(0, w_max + 1))) for u, v in edges], int(rng.integers(n)))


def all_heavy_masks(m):
    return np.array(list(itertools.product((False, True), repeat=m)), dtype=bool).reshape(-1, m)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
