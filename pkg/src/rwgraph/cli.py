"""``rwg`` command line: graph files in, one JSON (or human-readable) record out.

Graph files are JSON objects::

    {"n": 3, "designated": 0,
     "edges": [{"u": 0, "v": 1, "phases": [{"w": 0, "p": 0.5}, {"w": 1, "p": 0.5}]}, ...]}

A file where every edge has exactly two phases is read as a BCW graph; any
other file is an RW graph. ``"kind": "rw"`` forces the RW reading, and BCW
graphs may carry an extra ``"scale"``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from typing import Any, Optional, Sequence, Union

from . import kernels
from .cuts import enumerate_compact_cuts, min_cost_cut
from .errors import (
    EmptyPhaseList,
    InvalidProbability,
    NegativeWeight,
    ParseError,
    ProbSumMismatch,
    RWGraphError,
    ValidationError,
)
from .estimators import PerfParams, atnr_estimate, estimate_tail, split
from .fpras import estimate_moment_boosted, runs_for_confidence
from .graph import (
    PROB_TOL,
    BCWEdge,
    BCWGraph,
    RWEdge,
    RWGraph,
    bcw_edge,
    contract_zero_edges,
    is_connected,
    validate,
)
from .oracle import exact_distribution, gen_critical_ratio, gen_random_bcw, gen_random_rw
from .properties import PropertyKind
from .transform import rw_to_bcw

Graph = Union[RWGraph, BCWGraph]


# ---------------------------------------------------------------- graph files


def _int(obj: dict, key: str, where: str) -> int:
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{where}: {key!r} must be an integer")
    return v


def _num(obj: dict, key: str, where: str) -> float:
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{where}: {key!r} must be a number")
    return float(v)


def graph_from_obj(doc: Any) -> Graph:
    if isinstance(doc, dict) and "graph" in doc and "edges" not in doc:
        doc = doc["graph"]  # a result record that embeds a graph
    if not isinstance(doc, dict):
        raise ParseError("a graph file must hold a JSON object")
    n = _int(doc, "n", "graph")
    designated = doc.get("designated")
    if designated is not None:
        designated = _int(doc, "designated", "graph")
    raw = doc.get("edges")
    if not isinstance(raw, list):
        raise ParseError("graph: 'edges' must be a list")
    edges = []
    for i, e in enumerate(raw):
        where = f"edge {i}"
        if not isinstance(e, dict) or not isinstance(e.get("phases"), list):
            raise ParseError(f"{where}: needs 'u', 'v' and a 'phases' list")
        u, v = _int(e, "u", where), _int(e, "v", where)
        phases = []
        for ph in e["phases"]:
            if not isinstance(ph, dict):
                raise ParseError(f"{where}: phases must be objects with 'w' and 'p'")
            w, p = _num(ph, "w", where), _num(ph, "p", where)
            if not (w >= 0 and math.isfinite(w)):
                raise NegativeWeight(f"{where}: phase weight {w}")
            if not 0 <= p <= 1:
                raise InvalidProbability(f"{where}: phase probability {p}")
            phases.append((w, p))
        if not phases:
            raise EmptyPhaseList(f"{where} has no phases")
        total = math.fsum(p for _, p in phases)
        if abs(total - 1) > PROB_TOL:
            raise ProbSumMismatch(f"{where}: probabilities sum to {total!r}")
        edges.append((u, v, phases))
    kind = doc.get("kind")
    if kind not in (None, "rw", "bcw"):
        raise ParseError(f"graph: unknown kind {kind!r}")
    if kind == "bcw" and not all(len(ph) == 2 for _, _, ph in edges):
        raise ParseError("graph: a bcw graph needs exactly two phases per edge")
    if kind != "rw" and raw and all(len(ph) == 2 for _, _, ph in edges):
        out = []
        for u, v, phases in edges:
            (wl, pl), (wh, ph) = sorted(phases, key=lambda t: t[0])
            if 0 < ph < 1:
                out.append(BCWEdge(u, v, wh, wl, ph))
            else:
                out.append(bcw_edge(u, v, phases))
        scale = _num(doc, "scale", "graph") if "scale" in doc else 1.0
        g: Graph = BCWGraph(n, tuple(out), designated, scale)
    else:
        rw = [RWEdge(u, v, tuple((w, p) for w, p in phases if p > 0)) for u, v, phases in edges]
        g = RWGraph(n, tuple(rw), designated)
    validate(g)
    return g


def parse_graph(text: str) -> Graph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    return graph_from_obj(doc)


def graph_to_obj(g: Graph) -> dict:
    doc: dict = {"n": g.n}
    if g.designated is not None:
        doc["designated"] = g.designated
    if isinstance(g, BCWGraph):
        edges = [
            {"u": e.u, "v": e.v, "phases": [{"w": e.light, "p": 1.0 - e.p}, {"w": e.heavy, "p": e.p}]}
            for e in g.edges
        ]
        if g.scale != 1.0:
            doc["scale"] = g.scale
    else:
        edges = [
            {"u": e.u, "v": e.v, "phases": [{"w": w, "p": p} for w, p in e.phases]} for e in g.edges
        ]
        if g.edges and all(len(e.phases) == 2 for e in g.edges):
            doc["kind"] = "rw"  # would otherwise read back as BCW
    doc["edges"] = edges
    return doc


def serialize_graph(g: Graph) -> str:
    return json.dumps(graph_to_obj(g))


def load_graph(path: str) -> Graph:
    if path == "-":
        return parse_graph(sys.stdin.read())
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_graph(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def as_bcw(g: Graph) -> BCWGraph:
    return rw_to_bcw(g) if isinstance(g, RWGraph) else g


# ---------------------------------------------------------------- commands


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _check_args(args) -> None:
    eps = getattr(args, "eps", None)
    if eps is not None and not 0 < eps <= 0.5:
        raise UsageError(f"--eps must lie in (0, 0.5], got {eps}")
    conf = getattr(args, "confidence", None)
    if conf is not None and not 0.5 < conf < 1:
        raise UsageError(f"--confidence must lie in (0.5, 1), got {conf}")
    k = getattr(args, "k", None)
    if k is not None and k < 1:
        raise UsageError(f"--k must be at least 1, got {k}")
    runs = getattr(args, "runs", None)
    if runs is not None and runs < 1:
        raise UsageError(f"--runs must be at least 1, got {runs}")


def _prop(args) -> PropertyKind:
    return PropertyKind.parse(args.property, args.designated)


def _record(args, **fields) -> dict:
    rec = {
        "command": args.command,
        "estimate": None,
        "eps": getattr(args, "eps", None),
        "k": getattr(args, "k", None),
        "confidence": getattr(args, "confidence", None),
        "seed": getattr(args, "seed", None),
        "elapsed_ms": None,
        "branch_stats": {},
    }
    rec.update(fields)
    return rec


def _write_graph(args, g: Graph, rec: dict) -> dict:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize_graph(g) + "\n")
        rec["out"] = args.out
    else:
        rec["graph"] = graph_to_obj(g)
    return rec


def cmd_moment(args) -> dict:
    runs = args.runs if args.runs else runs_for_confidence(args.confidence)
    g = load_graph(args.input)
    res = estimate_moment_boosted(g, _prop(args), args.k, args.eps, args.seed, runs, args.schedule)
    stats = dict(res.branch_stats, runs=res.runs)
    return _record(args, estimate=res.estimate, eps=res.eps, confidence=res.confidence, branch_stats=stats)


def cmd_tail(args) -> dict:
    g = as_bcw(load_graph(args.input))
    pp = PerfParams(args.eps, 1 - args.confidence, args.seed)
    return _record(args, estimate=estimate_tail(g, _prop(args), args.x, pp), x=args.x, k=None)


def cmd_atnr(args) -> dict:
    g = as_bcw(load_graph(args.input))
    est = atnr_estimate(g, _prop(args), args.eps, 1 - args.confidence, args.seed)
    return _record(args, estimate=est, k=None)


def cmd_exact(args) -> dict:
    dist = exact_distribution(load_graph(args.input), _prop(args))
    stats = {"support": [[v if math.isfinite(v) else "inf", p] for v, p in dist.support]}
    if args.x is not None:
        return _record(args, estimate=dist.tail(args.x), x=args.x, eps=None, confidence=1.0,
                       seed=None, k=None, branch_stats=stats)
    return _record(args, estimate=dist.moment(args.k), eps=None, confidence=1.0, seed=None,
                   branch_stats=stats)


def cmd_cuts(args) -> dict:
    g = as_bcw(load_graph(args.input))
    con = contract_zero_edges(g)
    g0 = split(con.graph).g0
    groups: list[list[int]] = [[] for _ in range(con.graph.n)]
    for v, c in enumerate(con.vertex_map):
        groups[c].append(v)
    if g0.n < 2 or not is_connected(g0.n, g0.pairs()):
        cuts, chi = [], None
    else:
        chi = min_cost_cut(g0)[1]
        cuts = enumerate_compact_cuts(g0, args.alpha, 1 - args.confidence, args.seed, chi=chi)
    listing = [
        {
            "clusters": [sorted(v for c in cl for v in groups[c]) for cl in cut.clusters],
            "crossing": [con.edge_ids[e] for e in cut.crossing],
            "cost": cut.cost,
        }
        for cut in cuts
    ]
    return _record(args, estimate=len(cuts), eps=None, k=None,
                   branch_stats={"alpha": args.alpha, "chi": chi, "cuts": listing})


def cmd_transform(args) -> dict:
    g = load_graph(args.input)
    out = as_bcw(g)
    rec = _record(args, eps=None, k=None, confidence=None, seed=None,
                  branch_stats={"edges_in": g.m, "edges_out": out.m})
    return _write_graph(args, out, rec)


def cmd_gen(args) -> dict:
    if args.critical_ratio is not None:
        g: Graph = gen_critical_ratio(args.critical_ratio)
        kind = "critical_ratio"
    else:
        if args.nodes is None:
            raise UsageError("gen needs --critical-ratio M or --nodes N")
        edges = args.edges if args.edges is not None else args.nodes - 1
        wr = (args.weight_min, args.weight_max)
        if args.rw:
            g = gen_random_rw(args.nodes, edges, args.seed, args.max_phases, wr)
            kind = "random_rw"
        else:
            g = gen_random_bcw(args.nodes, edges, args.seed, wr, (args.p_min, args.p_max), args.light_zero)
            kind = "random_bcw"
    rec = _record(args, eps=None, k=None, confidence=None, branch_stats={"generator": kind})
    return _write_graph(args, g, rec)


COMMANDS = {
    "moment": cmd_moment,
    "tail": cmd_tail,
    "atnr": cmd_atnr,
    "exact": cmd_exact,
    "cuts": cmd_cuts,
    "transform": cmd_transform,
    "gen": cmd_gen,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "human"), default="json")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--timing", action="store_true", help="report elapsed_ms (breaks byte-identical output)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None)

    def prop_args(p, k=True):
        p.add_argument("input", help="graph file, or - for stdin")
        p.add_argument("--property", default="diameter", help="diameter, radius or mst")
        p.add_argument("--designated", type=int, default=None, help="radius source vertex")
        if k:
            p.add_argument("--k", type=int, default=1)

    def accuracy(p, eps=0.2, conf=0.95):
        p.add_argument("--eps", type=float, default=eps)
        p.add_argument("--confidence", type=float, default=conf)

    parser = _Parser(prog="rwg", description=__doc__.split("\n")[0], parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("moment", parents=[common], help="estimate E[X^k]")
    prop_args(p)
    accuracy(p)
    p.add_argument("--runs", type=int, default=None, help="independent runs (default: from --confidence)")
    p.add_argument("--schedule", choices=("auto", "theory", "practical"), default="auto")

    p = sub.add_parser("tail", parents=[common], help="estimate Pr(X >= x)")
    prop_args(p, k=False)
    accuracy(p, conf=0.9)
    p.add_argument("--x", type=float, required=True)

    p = sub.add_parser("atnr", parents=[common], help="estimate Pr(X > 0)")
    prop_args(p, k=False)
    accuracy(p, eps=0.1, conf=0.95)

    p = sub.add_parser("exact", parents=[common], help="exact moment or tail by enumeration")
    prop_args(p)
    p.add_argument("--x", type=float, default=None, help="report Pr(X >= x) instead of a moment")

    p = sub.add_parser("cuts", parents=[common], help="enumerate small compact cuts of G0")
    p.add_argument("input")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--confidence", type=float, default=0.999)

    p = sub.add_parser("transform", parents=[common], help="rewrite an RW graph as a BCW graph")
    p.add_argument("input")

    p = sub.add_parser("gen", parents=[common], help="generate a graph")
    p.add_argument("--critical-ratio", type=int, default=None, metavar="M")
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--edges", type=int, default=None)
    p.add_argument("--rw", action="store_true", help="multi-phase RW graph instead of BCW")
    p.add_argument("--max-phases", type=int, default=3)
    p.add_argument("--weight-min", type=int, default=0)
    p.add_argument("--weight-max", type=int, default=9)
    p.add_argument("--p-min", type=float, default=0.1)
    p.add_argument("--p-max", type=float, default=0.9)
    p.add_argument("--light-zero", type=float, default=0.0)
    return parser


def _emit(rec: dict, fmt: str, stream) -> None:
    if fmt == "json":
        stream.write(json.dumps(rec) + "\n")
        return
    for key, value in rec.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value)
        stream.write(f"{key}: {value}\n")


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    fmt, command = "json", None
    try:
        args = parser.parse_args(argv)
        fmt, command = args.format, args.command
        _check_args(args)
        threads = args.threads or (int(os.environ["RWG_THREADS"]) if os.environ.get("RWG_THREADS") else None)
        kernels.set_threads(threads)
        start = time.perf_counter()
        rec = COMMANDS[command](args)
        if args.timing:
            rec["elapsed_ms"] = round((time.perf_counter() - start) * 1000, 3)
        code = 0
    except (RWGraphError, ValueError) as exc:
        name = exc.name if isinstance(exc, RWGraphError) else "InvalidArgument"
        rec = {"command": command, "estimate": None, "error": name, "message": str(exc)}
        code = exc.exit_code if isinstance(exc, RWGraphError) else 1
    _emit(rec, fmt, stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
