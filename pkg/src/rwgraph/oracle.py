"""Exact ground truth by brute force, and instance generators."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from . import kernels
from .cuts import CompactCut, CostGraph, _compact_labels, make_cut
from .errors import TooLarge
from .graph import BCWEdge, BCWGraph, RWEdge, RWGraph, validate
from .properties import PropertyKind, bind
from .transform import merge_phases

MAX_OUTCOMES = 1 << 24
#: above this many instances probabilities are accumulated in log space.
LOG_SPACE_ABOVE = 1 << 20
MERGE_TOL = 1e-12
_CHUNK = 1 << 16


@dataclass(frozen=True)
class ExactDistribution:
    support: tuple[tuple[float, float], ...]  # ascending values, inf last

    @property
    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.support])

    @property
    def probs(self) -> np.ndarray:
        return np.array([p for _, p in self.support])

    def moment(self, k: int = 1) -> float:
        if any(math.isinf(v) and p > 0 for v, p in self.support):
            return math.inf
        return math.fsum(p * v**k for v, p in self.support)

    @property
    def mean(self) -> float:
        return self.moment(1)

    def central_moment(self, k: int) -> float:
        mu = self.mean
        return math.fsum(p * (v - mu) ** k for v, p in self.support)

    def tail(self, x: float) -> float:
        """``Pr(X >= x)``."""
        return math.fsum(p for v, p in self.support if v >= x)

    def prob_positive(self) -> float:
        return math.fsum(p for v, p in self.support if v > 0)


def _edge_outcomes(g: Union[RWGraph, BCWGraph]):
    """Per edge: (us, vs, list of weight options, list of probabilities)."""
    out = []
    if isinstance(g, BCWGraph):
        for e in g.edges:
            if e.deterministic:
                out.append((e.u, e.v, [e.light], [1.0]))
            else:
                out.append((e.u, e.v, [e.light, e.heavy], [1.0 - e.p, e.p]))
    else:
        for e in g.edges:
            phases = [(w, p) for w, p in e.phases if p > 0]
            out.append((e.u, e.v, [w for w, _ in phases], [p for _, p in phases]))
    return out


def outcome_count(g: Union[RWGraph, BCWGraph]) -> int:
    return math.prod(len(w) for _, _, w, _ in _edge_outcomes(g))


def merge_support(values: np.ndarray, probs: np.ndarray, tol: float = MERGE_TOL):
    order = np.argsort(values, kind="stable")
    merged: list[list[float]] = []
    for v, p in zip(values[order], probs[order]):
        if merged and (v == merged[-1][0] or abs(v - merged[-1][0]) <= tol * max(1.0, abs(v))):
            merged[-1][1] += float(p)
        else:
            merged.append([float(v), float(p)])
    return tuple((v, p) for v, p in merged)


def exact_distribution(g: Union[RWGraph, BCWGraph], prop: PropertyKind) -> ExactDistribution:
    """Distribution of the property over every instance (mixed-radix enumeration)."""
    validate(g)
    prop, g = bind(prop, g)
    outcomes = _edge_outcomes(g)
    total = math.prod(len(w) for _, _, w, _ in outcomes)
    if total > MAX_OUTCOMES:
        raise TooLarge(f"{total} instances exceed the {MAX_OUTCOMES} enumeration guard")
    us = np.array([u for u, _, _, _ in outcomes], dtype=np.int64)
    vs = np.array([v for _, v, _, _ in outcomes], dtype=np.int64)
    radix = np.array([len(w) for _, _, w, _ in outcomes], dtype=np.int64)
    width = int(radix.max(initial=1))
    wtab = np.zeros((len(outcomes), width))
    ptab = np.zeros((len(outcomes), width))
    for i, (_, _, w, p) in enumerate(outcomes):
        wtab[i, : len(w)] = w
        ptab[i, : len(p)] = p
    log_space = total > LOG_SPACE_ABOVE
    if log_space:
        with np.errstate(divide="ignore"):
            ptab = np.log(ptab)
    stride = np.cumprod(np.concatenate([[1], radix[:-1]])) if len(radix) else radix
    rows = np.arange(len(outcomes))
    values, probs = [], []
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = (idx[:, None] // stride) % radix if len(radix) else np.zeros((len(idx), 0), np.int64)
        w = wtab[rows, digits]
        p = ptab[rows, digits]
        probs.append(np.exp(p.sum(axis=1)) if log_space else np.prod(p, axis=1))
        values.append(kernels.batch_property(prop.kernel_kind, g.n, us, vs, w, g.designated or 0))
    return ExactDistribution(merge_support(np.concatenate(values), np.concatenate(probs)))


def bundle_min_distribution(edges: Sequence[BCWEdge]) -> tuple[tuple[float, float], ...]:
    """Exact distribution of the minimum weight over a set of parallel BCW edges."""
    dist: dict[float, float] = {}
    for labels in itertools.product((False, True), repeat=len(edges)):
        prob, w = 1.0, math.inf
        for heavy, e in zip(labels, edges):
            prob *= e.p if heavy else 1.0 - e.p
            w = min(w, e.heavy if heavy else e.light)
        dist[w] = dist.get(w, 0.0) + prob
    return tuple(merge_phases([(w, p) for w, p in dist.items() if p > 0]))


# ---------------------------------------------------------------- cuts by brute force


def set_partitions(n: int) -> Iterator[list[int]]:
    """Every partition of ``range(n)`` as a restricted growth string."""
    if n == 0:
        yield []
        return
    labels = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield list(labels)
            return
        for lab in range(top + 2):
            labels[i] = lab
            yield from rec(i + 1, max(top, lab))

    labels[0] = 0
    yield from rec(1, 0)


def brute_force_compact_cuts(g: CostGraph, max_cost: Optional[float] = None) -> list[CompactCut]:
    if g.n > 10:
        raise TooLarge("brute-force cut enumeration is limited to 10 vertices")
    cuts = []
    for labels in set_partitions(g.n):
        if max(labels, default=0) == 0 or not _compact_labels(g, labels):
            continue
        cut = make_cut(g, labels)
        if max_cost is None or cut.cost <= max_cost * (1 + 1e-9):
            cuts.append(cut)
    cuts.sort(key=lambda c: (c.cost, c.clusters))
    return cuts


# ---------------------------------------------------------------- generators


def gen_critical_ratio(m: int) -> BCWGraph:
    """Two vertices joined by ``m`` parallel edges of weight 1 or ``2^(2m)``, each w.p. 1/2."""
    if m < 1:
        raise ValueError("m must be at least 1")
    if m > 30:
        raise TooLarge("m > 30 makes the heavy phase 2^(2m) too large")
    heavy = float(2 ** (2 * m))
    return BCWGraph(2, tuple(BCWEdge(0, 1, heavy, 1.0, 0.5) for _ in range(m)))


def critical_ratio_mean(m: int) -> float:
    return (1 - 2.0**-m) + 2.0**-m * 2.0 ** (2 * m)


def _random_pairs(n: int, edge_count: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    if n < 1:
        raise ValueError("n must be at least 1")
    if edge_count < n - 1:
        raise ValueError("a connected graph needs at least n - 1 edges")
    order = rng.permutation(n)
    pairs = [(int(order[i]), int(order[rng.integers(i)])) for i in range(1, n)]
    while len(pairs) < edge_count:
        if n == 1:
            pairs.append((0, 0))
            continue
        u, v = rng.choice(n, size=2, replace=False)
        pairs.append((int(u), int(v)))
    rng.shuffle(pairs)
    return pairs


def gen_random_bcw(
    n: int,
    edge_count: int,
    seed: int = 0,
    weight_range: tuple[int, int] = (0, 9),
    p_range: tuple[float, float] = (0.1, 0.9),
    light_zero: float = 0.0,
    designated: Optional[int] = 0,
) -> BCWGraph:
    """Random connected BCW multigraph with integer phases.

    ``light_zero`` is the chance that an edge's light phase is forced to 0,
    which puts the edge in the zero-light subgraph.
    """
    rng = np.random.default_rng(seed)
    lo, hi = weight_range
    edges = []
    for u, v in _random_pairs(n, edge_count, rng):
        a, b = (int(x) for x in rng.integers(lo, hi + 1, size=2))
        light, heavy = min(a, b), max(a, b)
        if rng.random() < light_zero:
            light = 0
            heavy = max(heavy, 1)
        p = float(rng.uniform(*p_range))
        edges.append(BCWEdge(u, v, float(heavy), float(light), p))
    return BCWGraph(n, tuple(edges), designated)


def gen_random_rw(
    n: int,
    edge_count: int,
    seed: int = 0,
    max_phases: int = 3,
    weight_range: tuple[int, int] = (0, 9),
    designated: Optional[int] = 0,
) -> RWGraph:
    """Random connected RW multigraph with 1..max_phases distinct integer phases per edge."""
    rng = np.random.default_rng(seed)
    lo, hi = weight_range
    edges = []
    for u, v in _random_pairs(n, edge_count, rng):
        count = int(rng.integers(1, min(max_phases, hi - lo + 1) + 1))
        weights = np.sort(rng.choice(np.arange(lo, hi + 1), size=count, replace=False))
        probs = rng.dirichlet(np.ones(count))
        probs[-1] = 1.0 - probs[:-1].sum()
        edges.append(RWEdge(u, v, tuple(zip(weights.astype(float), probs))))
    return RWGraph(n, tuple(edges), designated)
