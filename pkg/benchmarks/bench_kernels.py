"""Time the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--json]

Each case runs once per backend to warm up (numba compiles on first call),
then the best of ``--repeat`` timings is reported.
"""

import argparse
import json
import time

import numpy as np

from rwgraph import kernels
from rwgraph.cuts import CostGraph, enumerate_compact_cuts
from rwgraph.dnf import DNFFormula, klm_estimate
from rwgraph.fpras import estimate_moment
from rwgraph.oracle import gen_random_bcw
from rwgraph.properties import PropertyKind


def property_case(kind, n=8, m=16, samples=20_000):
    g = gen_random_bcw(n, m, seed=1)
    a = g.arrays
    w = np.where(np.random.default_rng(0).random((samples, m)) < a.p, a.heavy, a.light)
    return lambda: kernels.batch_property(kind, n, a.us, a.vs, w)


def cuts_case():
    g = CostGraph.unit(7, [(i, (i + 1) % 7) for i in range(7)])
    return lambda: enumerate_compact_cuts(g, 1.5, 0.01, 3)


def klm_case():
    rng = np.random.default_rng(5)
    q = tuple(rng.uniform(0.05, 0.5, size=12))
    clauses = tuple(tuple(rng.choice(12, size=3, replace=False)) for _ in range(10))
    return lambda: klm_estimate(DNFFormula(q, clauses), 0.05, 0.05, 1)


def moment_case():
    g = gen_random_bcw(4, 7, seed=3)
    return lambda: estimate_moment(g, PropertyKind.diameter(), 1, 0.2, 0, "practical")


CASES = {
    "diameter x20000": lambda: property_case(kernels.DIAMETER),
    "radius x20000": lambda: property_case(kernels.RADIUS),
    "mst x20000": lambda: property_case(kernels.MST),
    "cuts C7 a=1.5": cuts_case,
    "klm 10 clauses": klm_case,
    "moment n=4": moment_case,
}


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="one JSON record per case")
    args = ap.parse_args()
    backends = kernels.available()
    rows = []
    for name, make in CASES.items():
        fn = make()
        row = {"case": name}
        for b in backends:
            with kernels.use_backend(b):
                row[b] = best_of(fn, args.repeat)
        if "numba" in row:
            row["speedup"] = row["numpy"] / row["numba"]
        rows.append(row)
    if args.json:
        for r in rows:
            print(json.dumps(r))
        return
    print(f"{'case':<18}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for r in rows:
        cells = "".join(f"{r[b] * 1000:>10.1f}ms" for b in backends)
        print(f"{r['case']:<18}{cells}{r.get('speedup', float('nan')):>9.1f}x")


if __name__ == "__main__":
    main()
