"""Satisfaction probability of monotone DNF formulas over independent variables."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import TooLarge
from .rng import StreamLike, as_stream

#: multiplier in the fixed sample count ceil(SAMPLE_CONST * clauses * ln(2/dh) / d^2).
SAMPLE_CONST = 4
MAX_EXACT_VARS = 24


@dataclass(frozen=True)
class DNFFormula:
    """Disjunction of conjunctions of positive literals.

    ``q[i]`` is the probability that variable ``i`` is true. An empty clause is
    the constant-true clause.
    """

    q: tuple[float, ...]
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(float(x) for x in self.q))
        clauses = tuple(tuple(sorted(set(int(v) for v in c))) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        for c in clauses:
            for v in c:
                if not 0 <= v < len(self.q):
                    raise ValueError(f"clause references unknown variable {v}")
        if any(not 0 <= x <= 1 for x in self.q):
            raise ValueError("variable probabilities must lie in [0, 1]")

    @property
    def size(self) -> int:
        return sum(len(c) for c in self.clauses)

    def log_clause_probs(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            logq = np.log(np.array(self.q, dtype=np.float64))
        return np.array([logq[list(c)].sum() if c else 0.0 for c in self.clauses])


def exact_dnf_probability(phi: DNFFormula) -> float:
    """Exact probability by enumerating assignments of the variables the clauses use."""
    if not phi.clauses:
        return 0.0
    if any(not c for c in phi.clauses):
        return 1.0
    used = sorted({v for c in phi.clauses for v in c})
    if len(used) > MAX_EXACT_VARS:
        raise TooLarge(f"{len(used)} variables exceed the 2^{MAX_EXACT_VARS} enumeration guard")
    pos = {v: i for i, v in enumerate(used)}
    masks = np.array([sum(1 << pos[v] for v in c) for c in phi.clauses], dtype=np.int64)
    q = np.array([phi.q[v] for v in used])
    total = 0.0
    V = len(used)
    step = 1 << min(V, 18)
    bits = np.arange(V, dtype=np.int64)
    for start in range(0, 1 << V, step):
        a = np.arange(start, min(start + step, 1 << V), dtype=np.int64)
        on = (a[:, None] >> bits) & 1
        prob = np.prod(np.where(on == 1, q, 1.0 - q), axis=1)
        sat = ((a[:, None] & masks) == masks).any(axis=1)
        total += prob[sat].sum()
    return float(min(1.0, total))


def klm_sample_count(clauses: int, delta: float, delta_hat: float) -> int:
    return math.ceil(SAMPLE_CONST * clauses * math.log(2 / delta_hat) / delta**2)


def klm_estimate(
    phi: DNFFormula, delta: float, delta_hat: float, rng: StreamLike = None, samples: int | None = None
) -> float:
    """Estimate within relative error ``delta`` with probability at least ``1 - delta_hat``.

    Importance sampling over clauses: draw clause ``j`` with probability
    proportional to ``P(C_j)``, draw an assignment conditioned on ``C_j``, and
    count it when ``j`` is the first satisfied clause. The estimate is
    ``sum_j P(C_j)`` times the hit rate.
    """
    if not 0 < delta < 1 or not 0 < delta_hat < 1:
        raise ValueError("delta and delta_hat must lie in (0, 1)")
    if not phi.clauses:
        return 0.0
    logp = phi.log_clause_probs()
    if np.any(logp == 0.0) and any(
        not c or all(phi.q[v] == 1.0 for v in c) for c in phi.clauses
    ):
        return 1.0
    keep = np.isfinite(logp)
    if not keep.any():
        return 0.0
    clauses = [c for c, k in zip(phi.clauses, keep) if k]
    logp = logp[keep]
    top = logp.max()
    weights = np.exp(logp - top)
    log_union_bound = top + math.log(weights.sum())
    cum = np.cumsum(weights / weights.sum())
    cum[-1] = 1.0
    if len(clauses) == 1:
        return float(math.exp(log_union_bound))

    indptr = np.zeros(len(clauses) + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(c) for c in clauses])
    indices = np.array([v for c in clauses for v in c], dtype=np.int64)
    q = np.array(phi.q)
    if samples is None:
        samples = klm_sample_count(len(clauses), delta, delta_hat)
    hits = 0
    for u in as_stream(rng).uniform_chunks(samples, 1 + len(q)):
        hits += int(kernels.klm_indicators(indptr, indices, q, cum, u[:, 0], u[:, 1:]).sum())
    return float(math.exp(log_union_bound) * hits / samples)
