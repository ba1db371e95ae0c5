"""Reduction of multi-phase RW graphs to two-phase BCW graphs."""

from __future__ import annotations

from .graph import BCWEdge, BCWGraph, RWEdge, RWGraph, bcw_edge

MERGE_TOL = 1e-12


def merge_phases(phases, tol: float = MERGE_TOL) -> list[tuple[float, float]]:
    """Sort phases by weight, summing the probabilities of weights within ``tol``."""
    merged: list[list[float]] = []
    for w, p in sorted(phases):
        if merged and abs(w - merged[-1][0]) <= tol * max(1.0, abs(w)):
            merged[-1][1] += p
        else:
            merged.append([w, p])
    return [(w, p) for w, p in merged]


def bundle(e: RWEdge) -> list[BCWEdge]:
    """Two-phase parallel edges whose minimum weight is distributed like ``e``.

    Bundle edge ``i`` has light phase ``W^i``, heavy phase ``W^m`` and heavy
    probability ``S_{i+1} / S_i`` where ``S_i`` is the mass of phases ``i..m``.
    """
    phases = merge_phases(e.phases)
    if len(phases) <= 2:
        return [bcw_edge(e.u, e.v, phases)]
    weights = [w for w, _ in phases]
    # suffix masses avoid the cancellation in 1 - sum(prefix)
    suffix = [0.0] * (len(phases) + 1)
    for i in range(len(phases) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + phases[i][1]
    top = weights[-1]
    return [
        BCWEdge(e.u, e.v, top, weights[i], suffix[i + 1] / suffix[i])
        for i in range(len(phases) - 1)
    ]


def rw_to_bcw(g: RWGraph) -> BCWGraph:
    edges = [b for e in g.edges for b in bundle(e)]
    return BCWGraph(g.n, tuple(edges), g.designated)

