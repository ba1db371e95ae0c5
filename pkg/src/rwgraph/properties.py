"""Distance-cumulative properties of weighted graphs.

:func:`evaluate` is the exact scalar reference: heap-based Dijkstra for
distances and Kruskal with union-find for spanning trees. The batched kernels
in :mod:`rwgraph.kernels` compute the same values with adjacency-matrix
algorithms and are cross-checked against it in the tests.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace
from typing import Literal, Optional

from . import kernels
from .errors import BadWitness, MissingDesignatedVertex
from .graph import WeightedGraph, component_labels, is_connected

REL_TOL = 1e-9

Tag = Literal["diameter", "radius", "mst"]
_KERNEL_KIND = {"diameter": kernels.DIAMETER, "radius": kernels.RADIUS, "mst": kernels.MST}


@dataclass(frozen=True)
class PropertyKind:
    """Which property to evaluate.

    A radius property may name its designated vertex; when it does not, the
    graph's own ``designated`` vertex is used. Estimators rely on the latter so
    that the designated vertex follows the graph through contractions.
    """

    tag: Tag
    designated: Optional[int] = None

    def __post_init__(self):
        if self.tag not in _KERNEL_KIND:
            raise ValueError(f"unknown property {self.tag!r}")

    @classmethod
    def diameter(cls) -> "PropertyKind":
        return cls("diameter")

    @classmethod
    def radius(cls, designated: Optional[int] = None) -> "PropertyKind":
        return cls("radius", designated)

    @classmethod
    def mst(cls) -> "PropertyKind":
        return cls("mst")

    @classmethod
    def parse(cls, name: str, designated: Optional[int] = None) -> "PropertyKind":
        name = name.strip().lower().replace("-", "_")
        aliases = {"mst_weight": "mst", "mstweight": "mst"}
        name = aliases.get(name, name)
        return cls(name, designated if name == "radius" else None)  # type: ignore[arg-type]

    @property
    def kernel_kind(self) -> int:
        return _KERNEL_KIND[self.tag]


def bind(prop: PropertyKind, g):
    """Move an explicit radius vertex onto the graph: returns ``(unbound prop, graph)``."""
    if prop.tag != "radius":
        return prop, g
    v = prop.designated if prop.designated is not None else g.designated
    if v is None:
        raise MissingDesignatedVertex("radius needs a designated vertex")
    if not 0 <= v < g.n:
        raise MissingDesignatedVertex(f"designated vertex {v} is not in the graph")
    return PropertyKind.radius(), replace(g, designated=v)


def _dijkstra(n: int, adj: list[list[tuple[int, float]]], src: int) -> list[float]:
    dist = [math.inf] * n
    dist[src] = 0.0
    heap = [(0.0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def _adjacency(g: WeightedGraph) -> list[list[tuple[int, float]]]:
    adj: list[list[tuple[int, float]]] = [[] for _ in range(g.n)]
    for u, v, w in g.edges:
        if u != v:
            adj[u].append((v, w))
            adj[v].append((u, w))
    return adj


def _mst_weight(g: WeightedGraph) -> float:
    parent = list(range(g.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    total, joined = 0.0, 0
    for u, v, w in sorted(g.edges, key=lambda e: e[2]):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            total += w
            joined += 1
    return total if joined == g.n - 1 else math.inf


def evaluate(prop: PropertyKind, g: WeightedGraph) -> float:
    """Exact property value, ``math.inf`` for a disconnected graph."""
    if prop.tag == "mst":
        return _mst_weight(g)
    adj = _adjacency(g)
    if prop.tag == "radius":
        _, g = bind(prop, g)
        return max(_dijkstra(g.n, adj, g.designated))
    return max(max(_dijkstra(g.n, adj, s)) for s in range(g.n))


def evaluate_batch(prop: PropertyKind, n: int, us, vs, weights, designated: Optional[int] = None):
    """Vectorized evaluation of many realizations of one edge list."""
    if prop.tag == "radius":
        designated = prop.designated if prop.designated is not None else designated
        if designated is None:
            raise MissingDesignatedVertex("radius needs a designated vertex")
    return kernels.batch_property(prop.kernel_kind, n, us, vs, weights, designated or 0)


# ---------------------------------------------------------------- requirements


def _close(a: float, b: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return math.isclose(a, b, rel_tol=REL_TOL, abs_tol=1e-12)


def _le(a: float, b: float) -> bool:
    return a <= b or _close(a, b)


def _contract(g: WeightedGraph, e: int) -> WeightedGraph:
    u, v, _ = g.edges[e]
    labels = component_labels(g.n, [(u, v)])
    edges = [(labels[a], labels[b], w) for i, (a, b, w) in enumerate(g.edges) if i != e]
    designated = None if g.designated is None else labels[g.designated]
    return WeightedGraph(max(labels) + 1, edges, designated)


def _edge(g: WeightedGraph, witness: dict, key: str = "edge") -> int:
    e = witness.get(key)
    if not isinstance(e, int) or not 0 <= e < len(g.edges):
        raise BadWitness(f"witness needs a valid edge id under {key!r}")
    return e


def _factor(witness: dict) -> float:
    r = witness.get("r")
    if r is None or not r >= 0 or math.isinf(r):
        raise BadWitness("witness needs a finite factor r >= 0")
    return float(r)


def check_requirement(req: str, prop: PropertyKind, g: WeightedGraph, **witness) -> bool:
    """Check one distance-cumulative requirement on a concrete graph.

    ``req`` is ``"P1"`` .. ``"P6"``. Witnesses: P1 ``r``; P2 ``edge`` and ``r``;
    P3 ``edge`` (a zero-weight edge); P4 ``edge`` and ``other`` (parallel, with
    the first at least as heavy); P5 and P6 take none.
    """
    base = evaluate(prop, g)
    req = req.upper()
    if req == "P1":
        r = _factor(witness)
        return _close(evaluate(prop, g.scaled(r)), r * base)
    if req == "P2":
        e, r = _edge(g, witness), _factor(witness)
        edges = list(g.edges)
        u, v, w = edges[e]
        edges[e] = (u, v, w + r)
        bumped = evaluate(prop, replace(g, edges=tuple(edges)))
        return _le(base, bumped) and _le(bumped, base + r)
    if req == "P3":
        e = _edge(g, witness)
        if g.edges[e][2] != 0:
            raise BadWitness(f"edge {e} has positive weight; P3 needs a zero-weight edge")
        return _close(evaluate(prop, _contract(g, e)), base)
    if req == "P4":
        e, f = _edge(g, witness), _edge(g, witness, "other")
        (a, b, we), (c, d, wf) = g.edges[e], g.edges[f]
        if e == f or {a, b} != {c, d}:
            raise BadWitness("P4 needs two distinct parallel edges")
        if we < wf:
            raise BadWitness("P4 removes the heavier edge; pass it as 'edge'")
        rest = tuple(x for i, x in enumerate(g.edges) if i != e)
        return _close(evaluate(prop, replace(g, edges=rest)), base)
    if req == "P5":
        if base > 0 and g.edges:
            return _le(min(w for _, _, w in g.edges), base)
        return True
    if req == "P6":
        zero_connected = is_connected(g.n, ((u, v) for u, v, w in g.edges if w == 0))
        return (base == 0) == zero_connected
    raise BadWitness(f"unknown requirement {req!r}")
