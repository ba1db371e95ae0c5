"""Additive-error estimators of ``Pr(X > 0)`` and ``Pr(X >= x)`` on BCW graphs.

Both errors are relative to ``q0 = Pr(X > 0)``, which depends only on the
edges whose light phase is zero (``E0``): ``X > 0`` exactly when deleting the
heavy ``E0`` edges disconnects the zero-weight subgraph. Each estimate picks
one of two branches from the exactly computable lower bound
``p^chi = exp(-mincost) <= q0`` (cost ``ln(1/p_e)`` per ``E0`` edge):

* ``p^chi >= n^-c``: plain Monte Carlo over full instances;
* otherwise: enumerate the compact cuts of ``G0`` of cost at most
  ``alpha * chi``, sample instances of the other edges, and for each one
  measure with the DNF estimator the probability that the heavy ``E0`` edges
  induce a cut whose conditioned graph reaches the threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .cuts import C_CONST, CompactCut, CostGraph, cut_params, enumerate_compact_cuts, min_cost_cut
from .dnf import DNFFormula, klm_estimate, klm_sample_count
from .errors import NonPositiveThreshold
from .graph import BCWGraph, Instance, Phase, WeightedGraph, contract_zero_edges, is_connected
from .properties import REL_TOL, PropertyKind, bind
from .rng import Stream, StreamLike, as_stream

#: internal cap on the accuracy parameter.
EPS_CAP = 0.5


@dataclass(frozen=True)
class PerfParams:
    eps: float
    eps_hat: float
    seed: int = 0

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if not 0 < self.eps_hat < 1:
            raise ValueError("eps_hat must lie in (0, 1)")


@dataclass(frozen=True)
class Split:
    e0: tuple[int, ...]
    rest: tuple[int, ...]
    g0: CostGraph  # E0 without self-loops, costs ln(1/p_e), edge ids into the parent graph


def split(g: BCWGraph) -> Split:
    e0 = tuple(i for i, e in enumerate(g.edges) if e.light == 0)
    rest = tuple(i for i, e in enumerate(g.edges) if e.light != 0)
    loopfree = [i for i in e0 if g.edges[i].u != g.edges[i].v]
    g0 = CostGraph(
        g.n,
        [g.edges[i].u for i in loopfree],
        [g.edges[i].v for i in loopfree],
        [math.log(1 / g.edges[i].p) for i in loopfree],
        tuple(loopfree),
    )
    return Split(e0, rest, g0)


def build_conditioned_graph(g: BCWGraph, sp: Split, cut: CompactCut, inst: Instance) -> WeightedGraph:
    """One vertex per cluster; crossing ``E0`` edges heavy, crossing other edges as ``inst`` says."""
    labels = cut.labels(g.n)
    e0 = set(sp.e0)
    edges = []
    for i, e in enumerate(g.edges):
        a, b = labels[e.u], labels[e.v]
        if a == b:
            continue
        if i in e0:
            w = e.heavy
        else:
            w = e.heavy if inst[i] is Phase.HEAVY else e.light
        edges.append((a, b, w))
    designated = None if g.designated is None else labels[g.designated]
    return WeightedGraph(cut.r, tuple(edges), designated)


@dataclass
class EstimateStats:
    branch: str = "trivial"
    samples: int = 0
    cuts: int = 0
    instances: int = 0
    klm_calls: int = 0
    klm_samples: int = 0


@dataclass
class EstimateCache:
    """Min cuts and cut enumerations shared by estimates on equal ``G0`` graphs."""

    min_cuts: dict = field(default_factory=dict)
    enumerations: dict = field(default_factory=dict)

    def chi(self, g0: CostGraph) -> float:
        if g0 not in self.min_cuts:
            self.min_cuts[g0] = min_cost_cut(g0)[1]
        return self.min_cuts[g0]

    def cuts(self, g0: CostGraph, alpha: float, fail: float, rng: Stream, chi: float):
        key = (g0, alpha)
        if key not in self.enumerations:
            self.enumerations[key] = enumerate_compact_cuts(g0, alpha, fail, rng, chi=chi)
        return self.enumerations[key]


@dataclass(frozen=True)
class TailEstimates:
    tails: tuple[float, ...]
    positive: Optional[float]
    stats: EstimateStats


def meets(values: np.ndarray, x: float) -> np.ndarray:
    return values >= x - REL_TOL * abs(x)


def mc_sample_count(delta: float, delta_hat: float, p_chi: float) -> int:
    return math.ceil(4 * math.log(2 / delta_hat) / (delta**2 * p_chi))


def instance_count(delta: float, delta_hat: float) -> int:
    return math.ceil(2 * math.log(4 / delta_hat) / delta**2)


def prepare(g: BCWGraph, prop: PropertyKind) -> tuple[PropertyKind, BCWGraph]:
    prop, g = bind(prop, g)
    return prop, contract_zero_edges(g).graph


def estimate_tails(
    g: BCWGraph,
    prop: PropertyKind,
    xs: Sequence[float],
    delta: float,
    delta_hat: float,
    rng: StreamLike = None,
    positive: bool = True,
    cache: Optional[EstimateCache] = None,
) -> TailEstimates:
    """Estimates of ``Pr(X >= x)`` for every ``x`` in ``xs`` and, optionally, of ``Pr(X > 0)``.

    Every estimate separately is within ``delta * Pr(X > 0)`` of its target
    with probability at least ``1 - delta_hat``. All of them are computed from
    one shared set of samples.
    """
    xs = [float(x) for x in xs]
    if any(not x > 0 for x in xs):
        raise NonPositiveThreshold("thresholds must be positive")
    if not 0 < delta < 1 or not 0 < delta_hat < 1:
        raise ValueError("delta and delta_hat must lie in (0, 1)")
    prop, g = prepare(g, prop)
    stream = as_stream(rng)
    cache = cache if cache is not None else EstimateCache()
    stats = EstimateStats()
    branch, sp, chi = choose_branch(g, cache)
    if branch == "trivial":
        return TailEstimates(tuple(0.0 for _ in xs), 0.0 if positive else None, stats)
    if branch == "monte_carlo":
        return _monte_carlo(g, prop, xs, delta, delta_hat, math.exp(-chi), stream, positive, stats)
    return _enumeration(g, prop, sp, xs, delta, delta_hat, chi, stream, positive, cache, stats)


def choose_branch(g: BCWGraph, cache: Optional[EstimateCache] = None):
    """``(branch, split, chi)`` for a zero-contracted graph; ``chi = 0`` when ``G0`` is disconnected."""
    if g.n == 1:
        return "trivial", None, 0.0
    sp = split(g)
    chi = 0.0
    if is_connected(g.n, sp.g0.pairs()):
        chi = (cache or EstimateCache()).chi(sp.g0)
    branch = "monte_carlo" if math.exp(-chi) >= g.n**-C_CONST else "enumeration"
    return branch, sp, chi


def _monte_carlo(g, prop, xs, delta, delta_hat, p_chi, stream, positive, stats):
    a = g.arrays
    samples = mc_sample_count(delta, delta_hat, p_chi)
    hits = np.zeros(len(xs), dtype=np.int64)
    nonzero = 0
    for u in stream.spawn(0).uniform_chunks(samples, g.m):
        w = np.where(u < a.p, a.heavy, a.light)
        vals = kernels.batch_property(prop.kernel_kind, g.n, a.us, a.vs, w, g.designated or 0)
        for j, x in enumerate(xs):
            hits[j] += int(meets(vals, x).sum())
        nonzero += int((vals > 0).sum())
    stats.branch, stats.samples = "monte_carlo", samples
    tails = tuple(float(h) / samples for h in hits)
    return TailEstimates(tails, nonzero / samples if positive else None, stats)


def _prune(clauses) -> tuple[tuple[int, ...], ...]:
    """Drop clauses implied by a smaller one; the disjunction is unchanged."""
    kept: list[frozenset] = []
    for c in sorted(set(clauses), key=lambda c: (len(c), c)):
        s = frozenset(c)
        if not any(k <= s for k in kept):
            kept.append(s)
    return tuple(sorted(tuple(sorted(k)) for k in kept))


def _enumeration(g, prop, sp, xs, delta, delta_hat, chi, stream, positive, cache, stats):
    a = g.arrays
    params = cut_params(g.n, chi, delta)
    cuts = cache.cuts(sp.g0, params.alpha, delta_hat / 8, stream.spawn(1), chi)
    remaining = 7 * delta_hat / 8
    stats.branch, stats.cuts = "enumeration", len(cuts)
    if not cuts:
        return TailEstimates(tuple(0.0 for _ in xs), 0.0 if positive else None, stats)

    var = {e: i for i, e in enumerate(sp.e0)}
    q = tuple(float(a.p[e]) for e in sp.e0)
    clause_of = [tuple(var[e] for e in c.crossing) for c in cuts]
    memo: dict = {}

    def klm(clauses, d, dh):
        key = (_prune(clauses), d, dh)
        if key not in memo:
            phi = DNFFormula(q, key[0])
            memo[key] = klm_estimate(phi, d, dh, stream.spawn(3, len(memo)))
            stats.klm_calls += 1
            stats.klm_samples += klm_sample_count(len(key[0]), d, dh)
        return memo[key]

    pos = klm(clause_of, 3 * delta / 4, remaining) if positive else None
    if not xs:
        return TailEstimates((), pos, stats)

    rest = np.array(sp.rest, dtype=np.int64)
    labels = np.array([c.labels(g.n) for c in cuts], dtype=np.int64)
    crossing_rest = [rest[labels[c][a.us[rest]] != labels[c][a.vs[rest]]] for c in range(len(cuts))]
    varies = any(len(cr) for cr in crossing_rest)
    k = instance_count(delta, remaining) if varies else 1
    stats.instances = k
    if varies:
        u = np.concatenate(list(stream.spawn(2).uniform_chunks(k, len(rest))))
        heavy = u < a.p[rest]
    else:
        heavy = np.zeros((1, len(rest)), dtype=bool)
    col = {int(e): j for j, e in enumerate(rest)}

    values = np.empty((len(cuts), k))
    for c, cut in enumerate(cuts):
        lab = labels[c]
        e0c = np.array(cut.crossing, dtype=np.int64)
        rc = crossing_rest[c]
        if len(rc):
            uniq, inv = np.unique(heavy[:, [col[int(e)] for e in rc]], axis=0, return_inverse=True)
        else:
            uniq, inv = np.zeros((1, 0), dtype=bool), np.zeros(k, dtype=np.int64)
        w = np.concatenate(
            [np.broadcast_to(a.heavy[e0c], (len(uniq), len(e0c))), np.where(uniq, a.heavy[rc], a.light[rc])],
            axis=1,
        )
        ids = np.concatenate([e0c, rc])
        des = lab[g.designated] if g.designated is not None else 0
        vals = kernels.batch_property(prop.kernel_kind, cut.r, lab[a.us[ids]], lab[a.vs[ids]], w, des)
        values[c] = vals[np.asarray(inv).reshape(-1)]

    tails = []
    for x in xs:
        ok = meets(values, x)
        cols, inv, counts = np.unique(ok.T, axis=0, return_inverse=True, return_counts=True)
        total = 0.0
        for pattern, count in zip(cols, counts):
            chosen = [clause_of[c] for c in np.flatnonzero(pattern)]
            if chosen:
                total += count * klm(chosen, delta / 4, remaining / (2 * k))
        tails.append(float(total / k))
    return TailEstimates(tuple(tails), pos, stats)


def atnr_estimate(
    g: BCWGraph, prop: PropertyKind, delta: float, delta_hat: float, rng: StreamLike = None
) -> float:
    """Estimate of ``Pr(X > 0)`` within relative error ``delta`` w.p. ``1 - delta_hat``."""
    return estimate_tails(g, prop, [], min(delta, EPS_CAP), delta_hat, rng).positive


def estimate_tail(g: BCWGraph, prop: PropertyKind, x: float, pp: PerfParams) -> float:
    """Estimate of ``Pr(X >= x)`` within ``eps * Pr(X > 0)`` w.p. ``1 - eps_hat``."""
    if not x > 0:
        raise NonPositiveThreshold(f"threshold must be positive, got {x}")
    est = estimate_tails(g, prop, [x], min(pp.eps, EPS_CAP), pp.eps_hat, pp.seed, positive=False)
    return est.tails[0]


def monte_carlo_moment(
    g: BCWGraph, prop: PropertyKind, k: int = 1, samples: int = 10_000, rng: StreamLike = None
) -> float:
    """Naive sample mean of ``X^k`` over full instances."""
    prop, g = bind(prop, g)
    a = g.arrays
    total = 0.0
    for u in as_stream(rng).uniform_chunks(samples, g.m):
        w = np.where(u < a.p, a.heavy, a.light)
        vals = kernels.batch_property(prop.kernel_kind, g.n, a.us, a.vs, w, g.designated or 0)
        total += math.fsum(vals**k)
    return total / samples
