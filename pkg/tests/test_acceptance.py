"""Acceptance criteria, one test and one PASS/FAIL line each.

Run standalone with ``python tests/test_acceptance.py`` or through pytest;
the verdict lines are printed either way.
"""

import os
import subprocess
import sys
import tempfile
import time

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from conftest import all_heavy_masks, random_weighted, triangle_bcw  # noqa: E402
from rwgraph.cli import serialize_graph  # noqa: E402
from rwgraph.cuts import CostGraph, enumerate_compact_cuts, is_compact  # noqa: E402
from rwgraph.dnf import DNFFormula, exact_dnf_probability, klm_estimate  # noqa: E402
from rwgraph.estimators import PerfParams, atnr_estimate, estimate_tail, monte_carlo_moment  # noqa: E402
from rwgraph.fpras import estimate_moment_boosted, make_ladder  # noqa: E402
from rwgraph.graph import WeightedGraph, contract_zero_edges, normalize, realize_weights  # noqa: E402
from rwgraph.oracle import (  # noqa: E402
    brute_force_compact_cuts,
    critical_ratio_mean,
    exact_distribution,
    gen_critical_ratio,
    gen_random_bcw,
    gen_random_rw,
    outcome_count,
)
from rwgraph.properties import PropertyKind, bind, check_requirement, evaluate_batch  # noqa: E402
from rwgraph.transform import rw_to_bcw  # noqa: E402

PROPS = [PropertyKind.diameter(), PropertyKind.radius(0), PropertyKind.mst()]
DIAM = PROPS[0]


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


# ---------------------------------------------------------------- criteria


def crit1():
    """P1..P6 on 200 random graphs for all three properties, under 10 s."""
    rng = np.random.default_rng(2024)
    props = [PropertyKind.diameter(), PropertyKind.radius(), PropertyKind.mst()]

    def run():
        bad = 0
        for _ in range(200):
            g = random_weighted(rng)
            u, v, w = g.edges[0] if g.edges else (0, 0, 0.0)
            g = WeightedGraph(g.n, list(g.edges) + [(u, v, w + 1)], g.designated)
            m = len(g.edges)
            for prop in props:
                checks = [check_requirement("P1", prop, g, r=r) for r in (0.0, 0.5, 3.7)]
                for e in range(m):
                    checks.append(check_requirement("P2", prop, g, edge=e, r=float(rng.integers(0, 6))))
                    if g.edges[e][2] == 0:
                        checks.append(check_requirement("P3", prop, g, edge=e))
                    for f in range(m):
                        (a, b, we), (c, d, wf) = g.edges[e], g.edges[f]
                        if e != f and {a, b} == {c, d} and we >= wf:
                            checks.append(check_requirement("P4", prop, g, edge=e, other=f))
                checks += [check_requirement("P5", prop, g), check_requirement("P6", prop, g)]
                bad += not all(checks)
        return bad

    bad, secs = timed(run)
    return bad == 0 and secs < 10, f"{bad} failing graph/property pairs, {secs:.1f}s (limit 10s)"


def crit2():
    """Transformed BCW graph has the same oracle distribution, TV <= 1e-9, under 60 s."""

    def run():
        worst, seed, done = 0.0, 0, 0
        while done < 50:
            seed += 1
            rng = np.random.default_rng(seed)
            n = int(rng.integers(2, 6))
            g = gen_random_rw(n, int(rng.integers(n - 1, n + 4)), seed=seed, max_phases=4)
            if outcome_count(g) > 2**16 or outcome_count(rw_to_bcw(g)) > 2**22:
                continue
            for prop in PROPS:
                a = dict(exact_distribution(g, prop).support)
                b = dict(exact_distribution(rw_to_bcw(g), prop).support)
                tv = 0.5 * sum(abs(a.get(v, 0.0) - b.get(v, 0.0)) for v in set(a) | set(b))
                worst = max(worst, tv)
            done += 1
        return worst

    worst, secs = timed(run)
    return worst <= 1e-9 and secs < 60, f"max TV {worst:.2e} over 50 graphs, {secs:.1f}s (limit 60s)"


def crit3():
    """6-cycle at alpha = 1.5: all 35 compact cuts in >= 49/50 trials, nothing invalid, under 30 s."""
    g = CostGraph.unit(6, [(i, (i + 1) % 6) for i in range(6)])
    brute = {c.clusters for c in brute_force_compact_cuts(g, max_cost=3)}
    bound = 13 * 6 ** (2 * 1.5)

    def run():
        exact = invalid = over = 0
        for t in range(50):
            cuts = enumerate_compact_cuts(g, 1.5, 0.02, 1000 + t)
            exact += {c.clusters for c in cuts} == brute
            invalid += sum(not is_compact(g, c.clusters) or c.cost > 3 + 1e-9 for c in cuts)
            over += len(cuts) >= bound
        return exact, invalid, over

    (exact, invalid, over), secs = timed(run)
    ok = len(brute) == 35 and exact >= 49 and invalid == 0 and over == 0 and secs < 30
    return ok, f"{exact}/50 complete, {invalid} invalid cuts, {over} over 13n^(2a), {secs:.1f}s (limit 30s)"


def crit4():
    """KLM within delta * exact in >= (1 - 0.05) - 0.03 of 400 runs (20 formulas), under 60 s."""
    rng = np.random.default_rng(44)

    def run():
        good = 0
        for f in range(20):
            V = int(rng.integers(2, 13))
            q = rng.uniform(0.05, 0.95, size=V)
            clauses = tuple(
                tuple(rng.choice(V, size=int(rng.integers(1, min(V, 4) + 1)), replace=False))
                for _ in range(int(rng.integers(2, 11)))
            )
            phi = DNFFormula(tuple(q), clauses)
            exact = exact_dnf_probability(phi)
            good += sum(abs(klm_estimate(phi, 0.1, 0.05, 100 * f + r) - exact) <= 0.1 * exact for r in range(20))
        return good

    good, secs = timed(run)
    return good / 400 >= 0.92 and secs < 60, f"{good}/400 within 0.1*exact (need 368), {secs:.1f}s (limit 60s)"


def crit5():
    """ATNR on the light-zero triangle, exact 1/2, estimate within 0.05 in >= 92 of 100 runs."""
    exact = exact_distribution(triangle_bcw(), DIAM).prob_positive()
    good = sum(abs(atnr_estimate(triangle_bcw(), DIAM, 0.1, 0.05, s) - 0.5) <= 0.05 for s in range(100))
    return exact == 0.5 and good >= 92, f"exact {exact}, {good}/100 within 0.05"


def tail_graph(i):
    # odd graphs have rare failures and take the cut-enumeration branch
    if i % 2:
        return gen_random_bcw(3 + i % 4 // 2, 10, seed=100 + i, light_zero=0.8, p_range=(0.01, 0.06))
    return gen_random_bcw(3 + i % 4, min(10, 5 + i % 5), seed=i, light_zero=0.3)


def crit6():
    """Tail estimate within eps * q0 in >= 85% of runs on 20 graphs, eps = 0.2, eps_hat = 0.1, under 5 min."""
    rng = np.random.default_rng(66)

    def run():
        good = total = 0
        for i in range(20):
            g, prop = tail_graph(i), PROPS[i % 3]
            d = exact_distribution(g, prop)
            top = max(float(d.values[np.isfinite(d.values)].max()), 1.0)
            q0 = d.prob_positive()
            for r in range(10):
                x = float(rng.uniform(0, top)) + 1e-3
                est = estimate_tail(g, prop, x, PerfParams(0.2, 0.1, 1000 * i + r))
                good += abs(est - d.tail(x)) <= 0.2 * q0 + 1e-15
                total += 1
        return good, total

    (good, total), secs = timed(run)
    return good / total >= 0.85 and secs < 300, f"{good}/{total} within eps*q0, {secs:.1f}s (limit 300s)"


def moment_graph(i):
    n = 2 + i % 4
    return gen_random_bcw(n, min(9, n + i % 5), seed=700 + i, light_zero=0.4 if i % 3 == 0 else 0.0)


def crit7():
    """Median-of-9 within (1.2)^4 of E[X] on >= 18/20 instances (all three properties), k = 2 on 10, under 10 min."""
    f = 1.2**4

    schedules = {"theory": 0, "practical": 0}

    def within(g, p, k, seed):
        r = estimate_moment_boosted(g, p, k, 0.2, seed)
        schedules[r.schedule] += 1
        exact = exact_distribution(g, p).moment(k)
        return exact / f <= r.estimate <= exact * f

    def run():
        ok1 = sum(all([within(moment_graph(i), p, 1, i) for p in PROPS]) for i in range(20))
        ok2 = sum(within(moment_graph(100 + i), PROPS[i % 3], 2, i) for i in range(10))
        return ok1, ok2

    (ok1, ok2), secs = timed(run)
    detail = (f"k=1 {ok1}/20, k=2 {ok2}/10, schedules {schedules['theory']} theory / "
              f"{schedules['practical']} practical, {secs:.1f}s (limit 600s)")
    return ok1 >= 18 and ok2 >= 9 and secs < 600, detail


def crit8():
    """m = 20: 10^4-sample MC underestimates >100x in >= 90% of runs; FPRAS median-of-9 at eps 0.25 within 1.25^4."""
    g = gen_critical_ratio(20)
    mean = critical_ratio_mean(20)

    def run():
        low = sum(monte_carlo_moment(g, DIAM, 1, 10_000, s) * 100 < mean for s in range(100))
        est = estimate_moment_boosted(g, DIAM, 1, 0.25, 8).estimate
        return low, est

    (low, est), secs = timed(run)
    f = 1.25**4
    ok = low >= 90 and mean / f <= est <= mean * f and secs < 300
    return ok, f"MC low by >100x in {low}/100, FPRAS {est:.6g} vs {mean:.6g}, {secs:.1f}s (limit 300s)"


def crit9():
    """Exact-tail ladder sandwich and the shrinking bound on every enumerable test instance."""
    eps = 0.2
    sandwich = shrink_bad = 0
    count = 0
    for s in range(30):
        n = 2 + s % 4
        g = gen_random_bcw(n, min(9, n + 1 + s % 4), seed=900 + s, weight_range=(0, 12), light_zero=0.3)
        for prop in PROPS:
            bprop, gb = bind(prop, g)
            gc = contract_zero_edges(normalize(gb)).graph
            d = exact_distribution(gc, bprop)
            for k in (1, 2):
                lad = make_ladder(gc.n, gc.max_phase(), k, eps)
                A = lad.combine([d.prob_positive()] + [d.tail(lad.rho**i) for i in range(1, lad.N)])
                m = d.moment(k)
                sandwich += not (m / (1 + eps) * (1 - 1e-12) <= A <= m * (1 + 1e-12))
            lad = make_ladder(gc.n, gc.max_phase(), 1, eps)
            a = gc.arrays
            w = realize_weights(gc, all_heavy_masks(gc.m))
            x = evaluate_batch(bprop, gc.n, a.us, a.vs, w, gc.designated)
            for i in range(lad.N):
                wi = np.where(w >= lad.rho ** (i - lad.kappa), w, 0.0)
                xi = evaluate_batch(bprop, gc.n, a.us, a.vs, wi, gc.designated)
                hit = x >= lad.rho**i * (1 - 1e-12)
                shrink_bad += int(np.sum(~((x[hit] / lad.rho < xi[hit]) & (xi[hit] <= x[hit] + 1e-9))))
            count += 1
    ok = sandwich == 0 and shrink_bad == 0
    return ok, f"{count} instances: {sandwich} sandwich violations, {shrink_bad} shrinking violations"


def crit10():
    """Same seed, byte-identical CLI output across two runs."""
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "g.json")
        with open(path, "w") as fh:
            fh.write(serialize_graph(gen_random_bcw(4, 7, seed=10, light_zero=0.3)))
        outs = []
        for argv in (["moment", path, "--seed", "5", "--runs", "3"], ["tail", path, "--x", "3", "--seed", "5"],
                     ["cuts", path, "--seed", "5"]):
            runs = [
                subprocess.run([sys.executable, "-m", "rwgraph", *argv], capture_output=True, text=True)
                for _ in range(2)
            ]
            outs.append(runs[0].returncode == 0 and runs[0].stdout == runs[1].stdout and bool(runs[0].stdout))
    return all(outs), f"{sum(outs)}/3 commands byte-identical"


CRITERIA = [crit1, crit2, crit3, crit4, crit5, crit6, crit7, crit8, crit9, crit10]


def verdict(i, fn):
    ok, detail = fn()
    line = f"{'PASS' if ok else 'FAIL'} criterion {i}: {fn.__doc__.strip()} -- {detail}"
    return ok, line


@pytest.mark.slow
@pytest.mark.parametrize("i", range(1, len(CRITERIA) + 1))
def test_criterion(i, capsys):
    ok, line = verdict(i, CRITERIA[i - 1])
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [verdict(i, fn) for i, fn in enumerate(CRITERIA, 1)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
