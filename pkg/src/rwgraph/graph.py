"""Randomly weighted multigraphs.

Two random models are supported: :class:`RWGraph`, where every edge carries a
finite list of ``(weight, probability)`` phases, and the two-phase
:class:`BCWGraph` used by the estimators. Realizations are plain
:class:`WeightedGraph` values. All graph values are immutable; edge ids are
positions in the ``edges`` tuple.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    Disconnected,
    EmptyPhaseList,
    InvalidProbability,
    InvalidVertex,
    MissingAssignment,
    NegativeWeight,
    ProbSumMismatch,
)
from .rng import StreamLike, as_stream

PROB_TOL = 1e-9


class Phase(str, enum.Enum):
    HEAVY = "H"
    LIGHT = "L"


@dataclass(frozen=True)
class RWEdge:
    u: int
    v: int
    phases: tuple[tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple((float(w), float(p)) for w, p in self.phases))


@dataclass(frozen=True)
class RWGraph:
    n: int
    edges: tuple[RWEdge, ...]
    designated: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class BCWEdge:
    u: int
    v: int
    heavy: float
    light: float
    p: float

    @property
    def deterministic(self) -> bool:
        return self.heavy == self.light


class BCWArrays(NamedTuple):
    us: np.ndarray
    vs: np.ndarray
    heavy: np.ndarray
    light: np.ndarray
    p: np.ndarray


@dataclass(frozen=True)
class BCWGraph:
    n: int
    edges: tuple[BCWEdge, ...]
    designated: Optional[int] = None
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def arrays(self) -> BCWArrays:
        arr = BCWArrays(
            np.array([e.u for e in self.edges], dtype=np.int64),
            np.array([e.v for e in self.edges], dtype=np.int64),
            np.array([e.heavy for e in self.edges], dtype=np.float64),
            np.array([e.light for e in self.edges], dtype=np.float64),
            np.array([e.p for e in self.edges], dtype=np.float64),
        )
        for a in arr:
            a.setflags(write=False)
        return arr

    def max_phase(self) -> float:
        return max((e.heavy for e in self.edges), default=0.0)


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    edges: tuple[tuple[int, int, float], ...]
    designated: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(
            self, "edges", tuple((int(u), int(v), float(w)) for u, v, w in self.edges)
        )

    def scaled(self, r: float) -> "WeightedGraph":
        return replace(self, edges=tuple((u, v, w * r) for u, v, w in self.edges))


@dataclass(frozen=True)
class Instance:
    """Phase labels for the edges of a declared subset ``F``."""

    assignment: Mapping[int, Phase] = field(default_factory=dict)

    @property
    def domain(self) -> frozenset:
        return frozenset(self.assignment)

    def __getitem__(self, e: int) -> Phase:
        return self.assignment[e]


# ---------------------------------------------------------------- connectivity


def component_labels(n: int, pairs: Iterable[tuple[int, int]]) -> list[int]:
    """Label vertices by connected component, labels in order of first appearance."""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    relabel: dict[int, int] = {}
    return [relabel.setdefault(find(a), len(relabel)) for a in range(n)]


def is_connected(n: int, pairs: Iterable[tuple[int, int]]) -> bool:
    return n <= 1 or max(component_labels(n, pairs)) == 0


# ---------------------------------------------------------------- validation


def _check_vertices(n: int, u: int, v: int, where: str):
    if not (0 <= u < n and 0 <= v < n):
        raise InvalidVertex(f"{where}: endpoint out of range 0..{n - 1}")


def validate(g) -> None:
    """Raise a :class:`ValidationError` unless ``g`` satisfies its model's invariants.

    Accepts RW, BCW and weighted graphs. Connectivity is checked with every edge
    present; self-loops and parallel edges are allowed.
    """
    if g.n < 1:
        raise InvalidVertex("a graph needs at least one vertex")
    if g.designated is not None and not 0 <= g.designated < g.n:
        raise InvalidVertex(f"designated vertex {g.designated} out of range")
    if isinstance(g, RWGraph):
        for i, e in enumerate(g.edges):
            _check_vertices(g.n, e.u, e.v, f"edge {i}")
            if not e.phases:
                raise EmptyPhaseList(f"edge {i} has no phases")
            for w, p in e.phases:
                if not (w >= 0 and math.isfinite(w)):
                    raise NegativeWeight(f"edge {i} has phase weight {w}")
                if not 0 < p <= 1:
                    raise InvalidProbability(f"edge {i} has phase probability {p}")
            total = sum(p for _, p in e.phases)
            if abs(total - 1.0) > PROB_TOL:
                raise ProbSumMismatch(f"edge {i} probabilities sum to {total!r}")
    elif isinstance(g, BCWGraph):
        for i, e in enumerate(g.edges):
            _check_vertices(g.n, e.u, e.v, f"edge {i}")
            if not (0 <= e.light <= e.heavy and math.isfinite(e.heavy)):
                raise NegativeWeight(f"edge {i} needs 0 <= light <= heavy, got {e.light}, {e.heavy}")
            if not 0 < e.p < 1:
                raise InvalidProbability(f"edge {i} heavy probability {e.p} not in (0, 1)")
        if not g.scale > 0:
            raise NegativeWeight(f"scale must be positive, got {g.scale}")
    elif isinstance(g, WeightedGraph):
        for i, (u, v, w) in enumerate(g.edges):
            _check_vertices(g.n, u, v, f"edge {i}")
            if not (w >= 0 and math.isfinite(w)):
                raise NegativeWeight(f"edge {i} has weight {w}")
    else:
        raise TypeError(f"cannot validate {type(g).__name__}")
    if not is_connected(g.n, ((e[0], e[1]) if isinstance(e, tuple) else (e.u, e.v) for e in g.edges)):
        raise Disconnected("the graph is disconnected even with every edge present")


# ---------------------------------------------------------------- BCW construction


def bcw_edge(u: int, v: int, phases: Sequence[tuple[float, float]], tol: float = 1e-12) -> BCWEdge:
    """Build a two-phase edge from at most two ``(weight, prob)`` phases.

    Zero-probability phases are dropped and equal weights merged. An edge left
    with a single phase becomes deterministic: heavy = light and p = 0.5.
    """
    merged: list[list[float]] = []
    for w, p in sorted((float(w), float(p)) for w, p in phases if p > 0):
        if merged and abs(w - merged[-1][0]) <= tol * max(1.0, abs(w)):
            merged[-1][1] += p
        else:
            merged.append([w, p])
    if not merged:
        raise EmptyPhaseList(f"edge ({u}, {v}) has no phase with positive probability")
    if len(merged) > 2:
        raise ValueError("bcw_edge takes at most two distinct phases; use rw_to_bcw")
    if len(merged) == 1 or merged[1][1] >= 1.0 or merged[0][1] >= 1.0:
        w = merged[-1][0] if merged[-1][1] >= merged[0][1] else merged[0][0]
        return BCWEdge(u, v, w, w, 0.5)
    (wl, _), (wh, ph) = merged
    return BCWEdge(u, v, wh, wl, ph)


def bcw_from_rw(g: RWGraph) -> BCWGraph:
    """Reinterpret an RW graph whose edges have at most two phases."""
    return BCWGraph(g.n, tuple(bcw_edge(e.u, e.v, e.phases) for e in g.edges), g.designated)


def as_rw(g: BCWGraph) -> RWGraph:
    edges = []
    for e in g.edges:
        if e.deterministic:
            phases = ((e.light, 1.0),)
        else:
            phases = ((e.light, 1.0 - e.p), (e.heavy, e.p))
        edges.append(RWEdge(e.u, e.v, phases))
    return RWGraph(g.n, tuple(edges), g.designated)


# ---------------------------------------------------------------- transforms


def normalize(g: BCWGraph) -> BCWGraph:
    """Divide all phases by the smallest positive phase, recording it in ``scale``."""
    positive = [w for e in g.edges for w in (e.heavy, e.light) if w > 0]
    if not positive:
        return g
    s = min(positive)
    if s == 1.0:
        return g
    edges = tuple(replace(e, heavy=e.heavy / s, light=e.light / s) for e in g.edges)
    return BCWGraph(g.n, edges, g.designated, g.scale * s)


@dataclass(frozen=True)
class Contraction:
    graph: BCWGraph
    vertex_map: tuple[int, ...]  # original vertex -> contracted vertex
    edge_ids: tuple[int, ...]  # contracted edge id -> original edge id


def contract_zero_edges(g: BCWGraph) -> Contraction:
    """Contract every edge whose heavy and light phases are both zero."""
    zero = [(e.u, e.v) for e in g.edges if e.heavy == 0 and e.light == 0]
    labels = component_labels(g.n, zero)
    n = max(labels) + 1 if labels else 0
    edges, ids = [], []
    for i, e in enumerate(g.edges):
        u, v = labels[e.u], labels[e.v]
        if e.heavy == 0 and e.light == 0:
            continue
        edges.append(replace(e, u=u, v=v))
        ids.append(i)
    designated = None if g.designated is None else labels[g.designated]
    return Contraction(BCWGraph(n, tuple(edges), designated, g.scale), tuple(labels), tuple(ids))


def contract_deterministic_zeros(g: BCWGraph) -> BCWGraph:
    return contract_zero_edges(g).graph


# ---------------------------------------------------------------- instances


def sample_instance(g: BCWGraph, subset: Iterable[int], rng: StreamLike) -> Instance:
    """Label each edge of ``subset`` Heavy with probability ``p_e``, independently."""
    edges = sorted(set(subset))
    for e in edges:
        if not 0 <= e < g.m:
            raise MissingAssignment(f"edge id {e} is not an edge of the graph")
    u = as_stream(rng).generator().random(len(edges))
    p = g.arrays.p[edges] if edges else np.empty(0)
    return Instance({e: Phase.HEAVY if x < q else Phase.LIGHT for e, x, q in zip(edges, u, p)})


def instance_probability(g: BCWGraph, inst: Instance) -> float:
    prob = 1.0
    for e, label in inst.assignment.items():
        prob *= g.edges[e].p if label is Phase.HEAVY else 1.0 - g.edges[e].p
    return prob


def realize(g: BCWGraph, inst: Instance) -> WeightedGraph:
    """Weighted graph where every edge takes the phase its instance label names."""
    missing = [i for i in range(g.m) if i not in inst.assignment]
    if missing:
        raise MissingAssignment(f"instance does not label edges {missing[:10]}")
    edges = tuple(
        (e.u, e.v, e.heavy if inst.assignment[i] is Phase.HEAVY else e.light)
        for i, e in enumerate(g.edges)
    )
    return WeightedGraph(g.n, edges, g.designated)


def realize_weights(g: BCWGraph, heavy_mask: np.ndarray) -> np.ndarray:
    """Vectorized :func:`realize`: a boolean ``(S, m)`` mask to an ``(S, m)`` weight matrix."""
    a = g.arrays
    return np.where(heavy_mask, a.heavy, a.light)
