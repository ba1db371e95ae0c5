"""Moment estimation by a geometric ladder of tail probabilities.

For ``Z = X^k`` with ``e = eps/k``, ``E[Z]`` is approximated from below by

    A = P_0 + sum_{i=1}^{N-1} e (1+e)^(i-1) P_i,    P_i = Pr(Z >= (1+e)^i),

and ``Pr(Z >= (1+e)^i) = Pr(X >= rho^i)`` with ``rho = (1+e)^(1/k)``. Level
``i`` is estimated on the shrunk graph ``G_i``, where every phase below
``rho^(i-kappa)`` is set to zero; shrinking loses less than a ``rho`` factor
of ``X`` on the event ``X >= rho^i`` and keeps the estimator's additive error,
proportional to ``Pr(X_i > 0)``, small relative to the tail. The local
estimates come from :mod:`rwgraph.estimators`, with all levels that share a
shrunk graph served by one batch of samples.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field, replace
from typing import Literal, Optional, Sequence, Union

from .errors import MixedParameters
from .cuts import cut_params, trial_count
from .dnf import klm_sample_count
from .estimators import (
    EPS_CAP,
    EstimateCache,
    choose_branch,
    estimate_tails,
    instance_count,
    mc_sample_count,
)
from .graph import BCWGraph, RWGraph, WeightedGraph, contract_zero_edges, normalize, validate
from .properties import PropertyKind, bind, evaluate
from .rng import Stream, StreamLike, as_stream
from .transform import rw_to_bcw

Schedule = Literal["theory", "practical", "auto"]
#: success probability of a single run.
BASE_CONFIDENCE = 0.75
#: "auto" uses the theory schedule while its predicted sample work stays below this.
THEORY_BUDGET = 3e6


@dataclass(frozen=True)
class Level:
    i: int
    threshold: float  # X-space threshold rho^i
    shrink: float  # phases below this are zeroed in G_i
    p2: float  # combined estimate P''_i


@dataclass(frozen=True)
class TailLadder:
    N: int
    kappa: int
    Xmax: float
    eps: float  # internal eps/k
    rho: float
    levels: tuple[Level, ...] = ()

    def weight(self, i: int) -> float:
        return 1.0 if i == 0 else self.eps * (1 + self.eps) ** (i - 1)

    def combine(self, tails: Sequence[float]) -> float:
        return math.fsum(self.weight(i) * t for i, t in enumerate(tails))


def make_ladder(n: int, max_phase: float, k: int, eps: float) -> TailLadder:
    e = eps / k
    rho = (1 + e) ** (1 / k)
    xmax = n * n * max_phase
    # smallest N with Xmax^k < (1+e)^N, compared in log space
    log_step = math.log1p(e)
    target = k * math.log(xmax) if xmax > 0 else -math.inf
    N = max(1, math.floor(target / log_step) + 1) if xmax > 0 else 1
    while N > 1 and (N - 1) * log_step > target:
        N -= 1
    while N * log_step <= target:
        N += 1
    kappa = max(1, math.ceil(math.log(n * n * rho / (rho - 1)) / math.log(rho) - 1e-12))
    return TailLadder(N, kappa, xmax, e, rho)


def shrink(g: BCWGraph, threshold: float) -> BCWGraph:
    """Set every phase strictly below ``threshold`` to zero."""
    edges = tuple(
        replace(
            e,
            heavy=e.heavy if e.heavy >= threshold else 0.0,
            light=e.light if e.light >= threshold else 0.0,
        )
        for e in g.edges
    )
    return replace(g, edges=edges)


def shrunk_graph(g: BCWGraph, i: int, eps: float, k: int = 1) -> BCWGraph:
    """``G_i`` for a normalized graph: phases below ``rho^(i - kappa)`` zeroed."""
    lad = make_ladder(g.n, max(g.max_phase(), 1.0), k, eps)
    return shrink(g, lad.rho ** (i - lad.kappa))


def perf_params(lad: TailLadder, n: int, k: int, schedule: str) -> tuple[float, float]:
    delta_hat = 1 / (8 * lad.N)
    if schedule == "theory":
        delta = lad.eps * ((lad.rho - 1) / (n * n * lad.rho**2)) ** k
    elif schedule == "practical":
        delta = lad.eps / 2
    else:
        raise ValueError(f"unknown schedule {schedule!r}")
    return min(delta, EPS_CAP), delta_hat


def predicted_work(graphs, delta: float, delta_hat: float, cache: EstimateCache) -> float:
    """Rough count of samples, instances and cut trials needed for one run."""
    total = 0.0
    for gj in graphs:
        branch, _, chi = choose_branch(gj, cache)
        if branch == "monte_carlo":
            total += mc_sample_count(delta, delta_hat, math.exp(-chi))
        elif branch == "enumeration":
            k = instance_count(delta, delta_hat)
            alpha = cut_params(gj.n, chi, delta).alpha
            total += trial_count(gj.n, alpha, delta_hat / 8) + k
            if gj.n > 2:  # two vertices have a single cut, whose DNF is evaluated exactly
                total += klm_sample_count(1, delta / 4, delta_hat / (2 * k))
    return total


@dataclass(frozen=True)
class ApproxResult:
    estimate: float
    moment_order: int
    eps: float
    confidence: float
    seed: Union[int, str]
    elapsed: float
    branch_stats: dict = field(default_factory=dict)
    prop: str = ""
    schedule: str = "auto"
    runs: int = 1
    ladder: Optional[TailLadder] = field(default=None, compare=False, repr=False)

    def params(self) -> tuple:
        return (self.moment_order, self.eps, self.prop, self.schedule)


def _seed_label(rng: StreamLike) -> Union[int, str]:
    s = as_stream(rng)
    return s.seed if not s.key else f"{s.seed}/{'/'.join(map(str, s.key))}"


def estimate_moment(
    g: Union[RWGraph, BCWGraph],
    prop: PropertyKind,
    k: int = 1,
    eps: float = 0.2,
    seed: StreamLike = 0,
    schedule: Schedule = "auto",
) -> ApproxResult:
    """Estimate of ``E[X^k]``.

    Under the ``"theory"`` schedule the estimate is within a ``(1+eps)^4``
    factor with probability at least 3/4. Its sample counts grow like
    ``n^(4k)/eps^(2k+2)``, so ``"practical"`` uses ``delta = eps/(2k)`` per level
    instead, a heuristic with no proven guarantee. ``"auto"`` picks the theory
    schedule whenever its predicted work fits :data:`THEORY_BUDGET`.
    ``branch_stats["schedule"]`` records the choice.
    """
    start = time.perf_counter()
    if k < 1 or int(k) != k:
        raise ValueError("k must be a positive integer")
    if not eps > 0:
        raise ValueError("eps must be positive")
    k, eps = int(k), min(float(eps), EPS_CAP)
    validate(g)
    if isinstance(g, RWGraph):
        g = rw_to_bcw(g)
    prop, g = bind(prop, g)
    gn = normalize(g)
    gc = contract_zero_edges(gn).graph
    stats: dict = {"monte_carlo": 0, "enumeration": 0, "trivial": 0}

    def result(value, lad=None):
        return ApproxResult(
            value, k, eps, BASE_CONFIDENCE, _seed_label(seed), time.perf_counter() - start,
            stats, prop.tag, schedule, 1, lad,
        )

    if gc.n == 1:
        stats["degenerate_zero"] = True
        return result(0.0)
    if all(e.deterministic for e in gc.edges):
        wg = WeightedGraph(gc.n, tuple((e.u, e.v, e.light) for e in gc.edges), gc.designated)
        stats["deterministic"] = True
        return result((evaluate(prop, wg) * gn.scale) ** k)

    lad = make_ladder(gc.n, gc.max_phase(), k, eps)
    N, kappa = lad.N, lad.kappa

    # which estimates each shrunk graph must supply
    graph_of: list[BCWGraph] = []
    groups: dict[BCWGraph, dict] = {}
    for j in range(N):
        gj = contract_zero_edges(shrink(gc, lad.rho ** (j - kappa))).graph
        graph_of.append(gj)
        groups.setdefault(gj, {"xs": set(), "positive": False})
    groups[graph_of[0]]["positive"] = True
    for i in range(1, N):
        groups[graph_of[i]]["xs"].add(lad.rho**i)
        if i < N - kappa:
            groups[graph_of[i + kappa]]["positive"] = True

    cache = EstimateCache()
    used = schedule
    if schedule == "auto":
        delta, delta_hat = perf_params(lad, gc.n, k, "theory")
        used = "theory" if predicted_work(groups, delta, delta_hat, cache) <= THEORY_BUDGET else "practical"
    delta, delta_hat = perf_params(lad, gc.n, k, used)
    stats["schedule"] = schedule = used

    stream = as_stream(seed)
    tail_at: dict = {}
    pos_of: dict = {}
    samples = klm_calls = 0
    for idx, (gj, need) in enumerate(groups.items()):
        xs = sorted(need["xs"])
        est = estimate_tails(gj, prop, xs, delta, delta_hat, stream.spawn(idx), need["positive"], cache)
        stats[est.stats.branch] += 1
        samples += est.stats.samples + est.stats.instances
        klm_calls += est.stats.klm_calls
        for x, t in zip(xs, est.tails):
            tail_at[(gj, x)] = t
        pos_of[gj] = est.positive

    levels = []
    for i in range(N):
        if i == 0:
            p2 = pos_of[graph_of[0]]
        else:
            p2 = tail_at[(graph_of[i], lad.rho**i)]
            if i < N - kappa:
                p2 = max(p2, pos_of[graph_of[i + kappa]])
        levels.append(Level(i, lad.rho**i, lad.rho ** (i - kappa), p2))
    lad = replace(lad, levels=tuple(levels))
    stats.update(
        levels=N, kappa=kappa, graphs=len(groups), delta=delta, delta_hat=delta_hat,
        samples=samples, klm_calls=klm_calls,
    )
    return result(lad.combine([lv.p2 for lv in levels]) * gn.scale**k, lad)


def boosted_confidence(runs: int, base: float = BASE_CONFIDENCE) -> float:
    """Probability that the median of ``runs`` independent runs succeeds."""
    need = math.ceil(runs / 2)
    q = 1 - base
    fail = math.fsum(math.comb(runs, j) * q**j * base ** (runs - j) for j in range(need, runs + 1))
    return 1 - fail


def runs_for_confidence(confidence: float) -> int:
    if not 0.5 < confidence < 1:
        raise ValueError("confidence must lie in (0.5, 1)")
    r = 1
    while boosted_confidence(r) < confidence:
        r += 2
    return r


def boost(results: Sequence[ApproxResult]) -> ApproxResult:
    """Median of independent runs with identical parameters."""
    if not results:
        raise ValueError("boost needs at least one estimate")
    first = results[0]
    if any(r.params() != first.params() for r in results):
        raise MixedParameters("estimates were produced with different parameters")
    if len(results) == 1:
        return first
    stats: dict = {"schedule": first.schedule}
    for r in results:
        for key in ("monte_carlo", "enumeration", "trivial", "samples", "klm_calls"):
            if key in r.branch_stats:
                stats[key] = stats.get(key, 0) + r.branch_stats[key]
    return replace(
        first,
        estimate=statistics.median_low([r.estimate for r in results]),
        confidence=boosted_confidence(len(results)),
        elapsed=sum(r.elapsed for r in results),
        branch_stats=stats,
        runs=len(results),
        ladder=None,
    )


def estimate_moment_boosted(
    g: Union[RWGraph, BCWGraph],
    prop: PropertyKind,
    k: int = 1,
    eps: float = 0.2,
    seed: int = 0,
    runs: int = 9,
    schedule: Schedule = "auto",
) -> ApproxResult:
    """Median of ``runs`` independent :func:`estimate_moment` runs on substreams of ``seed``."""
    master = as_stream(seed)
    out = boost([estimate_moment(g, prop, k, eps, master.spawn(r), schedule) for r in range(runs)])
    return replace(out, seed=_seed_label(seed))


def central_moment_estimate(
    g: Union[RWGraph, BCWGraph],
    prop: PropertyKind,
    k: int = 2,
    eps: float = 0.2,
    seed: int = 0,
    runs: int = 9,
    schedule: Schedule = "auto",
) -> float:
    """``E[(X - E[X])^k]`` assembled from raw-moment estimates.

    No accuracy guarantee: the binomial expansion subtracts nearly equal
    terms, so multiplicative errors in the raw moments are not preserved.
    """
    master = as_stream(seed)
    raw = [1.0] + [
        estimate_moment_boosted(g, prop, j, eps, master.spawn(j), runs, schedule).estimate
        for j in range(1, k + 1)
    ]
    mu = raw[1]
    return math.fsum(math.comb(k, j) * raw[j] * (-mu) ** (k - j) for j in range(k + 1))
