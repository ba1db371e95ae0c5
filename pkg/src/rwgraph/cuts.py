"""Minimum cuts and enumeration of small compact multiway cuts.

Costs encode heavy-phase probabilities as ``ln(1/p_e)``, so a cut of cost
``c`` has all its edges heavy with probability ``exp(-c)``. Enumeration runs
independent trials of random contraction (edges picked with probability
proportional to cost) down to ``ceil(2 alpha)`` super-vertices, followed by a
uniformly random set partition of those super-vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels
from .errors import NotAPartition, TooSmall
from .graph import component_labels, is_connected
from .rng import StreamLike, as_stream

#: branch constant separating Monte Carlo from cut enumeration.
C_CONST = (5 + math.sqrt(17)) / 2
#: a compact cut family of cost at most alpha * chi has fewer than COUNT_FACTOR * n^(2 alpha) members.
COUNT_FACTOR = 13
COST_TOL = 1e-9


@dataclass(frozen=True)
class CostGraph:
    """Multigraph with positive edge costs; ``edge_ids`` name the edges in a parent graph."""

    n: int
    us: tuple[int, ...]
    vs: tuple[int, ...]
    costs: tuple[float, ...]
    edge_ids: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "us", tuple(int(x) for x in self.us))
        object.__setattr__(self, "vs", tuple(int(x) for x in self.vs))
        object.__setattr__(self, "costs", tuple(float(x) for x in self.costs))
        if self.edge_ids is None:
            object.__setattr__(self, "edge_ids", tuple(range(len(self.us))))
        if not (len(self.us) == len(self.vs) == len(self.costs) == len(self.edge_ids)):
            raise ValueError("edge arrays differ in length")
        if any(not c > 0 for c in self.costs):
            raise ValueError("edge costs must be positive")

    @classmethod
    def unit(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "CostGraph":
        pairs = list(pairs)
        return cls(n, [u for u, _ in pairs], [v for _, v in pairs], [1.0] * len(pairs))

    @property
    def m(self) -> int:
        return len(self.us)

    @cached_property
    def arrays(self):
        return (
            np.array(self.us, dtype=np.int64),
            np.array(self.vs, dtype=np.int64),
            np.array(self.costs, dtype=np.float64),
        )

    def pairs(self):
        return zip(self.us, self.vs)


@dataclass(frozen=True)
class CompactCut:
    clusters: tuple[tuple[int, ...], ...]
    crossing: tuple[int, ...]
    cost: float

    @property
    def size(self) -> int:
        return len(self.crossing)

    @property
    def r(self) -> int:
        return len(self.clusters)

    def labels(self, n: int) -> list[int]:
        out = [0] * n
        for i, cluster in enumerate(self.clusters):
            for v in cluster:
                out[v] = i
        return out


@dataclass(frozen=True)
class CutParams:
    alpha: float
    chi: float
    eta: float
    c: float = C_CONST


def cut_params(n: int, chi: float, delta: float) -> CutParams:
    """Enumeration factor ``alpha`` for accuracy ``delta`` on an ``n``-vertex graph.

    ``chi`` is the min cut cost (so ``p^chi = exp(-chi)``) and ``eta`` solves
    ``p^chi = n^-(2 + eta)``.
    """
    if n < 2:
        raise TooSmall("cut parameters need at least two vertices")
    ln_n = math.log(n)
    alpha = max(1.0, (C_CONST - 1 + math.log(1 / delta) / ln_n) / 2)
    return CutParams(alpha, chi, chi / ln_n - 2)


def make_cut(g: CostGraph, labels: Sequence[int]) -> CompactCut:
    """Cut with the given cluster labels, in canonical form."""
    clusters: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        clusters.setdefault(lab, []).append(v)
    ordered = tuple(tuple(c) for c in sorted(clusters.values(), key=lambda c: c[0]))
    crossing = [i for i, (u, v) in enumerate(g.pairs()) if labels[u] != labels[v]]
    cost = math.fsum(g.costs[i] for i in crossing)
    return CompactCut(ordered, tuple(g.edge_ids[i] for i in crossing), cost)


def _check_partition(n: int, partition) -> list[int]:
    labels = [-1] * n
    clusters = [list(c) for c in partition]
    if len(clusters) < 2:
        raise NotAPartition("a cut needs at least two clusters")
    for i, cluster in enumerate(clusters):
        if not cluster:
            raise NotAPartition("clusters must be nonempty")
        for v in cluster:
            if not 0 <= v < n or labels[v] != -1:
                raise NotAPartition(f"vertex {v} is out of range or in two clusters")
            labels[v] = i
    if -1 in labels:
        raise NotAPartition("clusters do not cover every vertex")
    return labels


def _compact_labels(g: CostGraph, labels: Sequence[int]) -> bool:
    inside = [(u, v) for u, v in g.pairs() if labels[u] == labels[v]]
    comps = component_labels(g.n, inside)
    return max(comps) + 1 == max(labels) + 1


def is_compact(g: CostGraph, partition) -> bool:
    """Whether every cluster of ``partition`` induces a connected subgraph of ``g``."""
    return _compact_labels(g, _check_partition(g.n, partition))


def min_cost_cut(g: CostGraph) -> tuple[CompactCut, float]:
    """Deterministic minimum-cost 2-way cut (maximum-adjacency phases)."""
    n = g.n
    if n < 2:
        raise TooSmall("a cut needs at least two vertices")
    W = np.zeros((n, n))
    for u, v, c in zip(g.us, g.vs, g.costs):
        if u != v:
            W[u, v] += c
            W[v, u] += c
    members = [[i] for i in range(n)]
    alive = np.ones(n, bool)
    best, best_side = math.inf, None
    for _ in range(n - 1):
        start = int(np.flatnonzero(alive)[0])
        in_a = np.zeros(n, bool)
        in_a[start] = True
        w = W[start].copy()
        prev = last = start
        cut_w = 0.0
        for _ in range(int(alive.sum()) - 1):
            cand = np.where(alive & ~in_a, w, -np.inf)
            z = int(np.argmax(cand))
            cut_w = cand[z]
            in_a[z] = True
            prev, last = last, z
            w += W[z]
        if cut_w < best:
            best, best_side = cut_w, list(members[last])
        W[prev] += W[last]
        W[:, prev] += W[:, last]
        W[prev, prev] = 0.0
        alive[last] = False
        members[prev].extend(members[last])
    side = set(best_side)
    cut = make_cut(g, [0 if v in side else 1 for v in range(n)])
    return cut, cut.cost


@lru_cache(maxsize=None)
def bell_numbers(k: int) -> tuple[int, ...]:
    bell = [1]
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        bell.append(row[0])
    return tuple(bell)


@lru_cache(maxsize=None)
def partition_size_table(K: int) -> np.ndarray:
    """``table[s, j]`` = P(the first element's block has at most ``j`` other members).

    Drawn this way, block by block, an ``s``-set partition is uniform over all
    ``B_s`` partitions.
    """
    bell = bell_numbers(K)
    table = np.ones((K + 1, max(K, 1)))
    for s in range(1, K + 1):
        acc = 0
        for j in range(s):
            acc += math.comb(s - 1, j) * bell[s - 1 - j]
            table[s, j] = acc / bell[s]
        table[s, s - 1] = 1.0
    table.setflags(write=False)
    return table


def trial_count(n: int, alpha: float, fail_prob: float) -> int:
    target = COUNT_FACTOR * n ** (2 * alpha)
    return math.ceil(target * math.log(target / fail_prob))


def generate_partitions(g: CostGraph, alpha: float, trials: int, rng: StreamLike) -> np.ndarray:
    """Distinct canonical labelings produced by ``trials`` contraction+partition trials."""
    k = max(2, math.ceil(2 * alpha - 1e-12))
    K = min(k, g.n)
    us, vs, costs = g.arrays
    table = partition_size_table(K)
    stream = as_stream(rng)
    found: set[bytes] = set()
    rows = []
    for u in stream.uniform_chunks(trials, g.m + 2 * K):
        labels = kernels.contraction_trials(
            g.n, us, vs, costs, k, u[:, : g.m], u[:, g.m : g.m + K], u[:, g.m + K :], table
        )
        for row in np.unique(labels, axis=0):
            key = row.tobytes()
            if key not in found:
                found.add(key)
                rows.append(row)
    return np.array(rows, dtype=np.int16).reshape(len(rows), g.n)


def enumerate_compact_cuts(
    g: CostGraph,
    alpha: float,
    fail_prob: float = 1e-3,
    rng: StreamLike = None,
    chi: Optional[float] = None,
    trials: Optional[int] = None,
) -> list[CompactCut]:
    """Compact cuts of cost at most ``alpha * chi``, most probable first.

    With probability at least ``1 - fail_prob`` every such cut is returned;
    every returned cut is compact and within the cost bound.
    """
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    if g.n < 2 or not is_connected(g.n, g.pairs()):
        return []
    if chi is None:
        chi = min_cost_cut(g)[1]
    if trials is None:
        trials = trial_count(g.n, alpha, fail_prob)
    limit = alpha * chi * (1 + COST_TOL)
    cuts = []
    for labels in generate_partitions(g, alpha, trials, rng):
        labels = labels.tolist()
        if max(labels) == 0:
            continue
        cut = make_cut(g, labels)
        if cut.cost <= limit and _compact_labels(g, labels):
            cuts.append(cut)
    cuts.sort(key=lambda c: (c.cost, c.clusters))
    return cuts
