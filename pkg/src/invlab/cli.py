"""Command line: verify, exact, construct, random, gadget, table, census.

Exit codes: 0 true / found, 1 false, 2 error, 3 unknown (budget or retries ran out).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import construct, gadgets
from .certificate import check_property
from .connectivity import is_eulerian
from .core import Graph, InvlabError, random_tournament, transitive_tournament
from .exact import SearchBudget, census_m_k, sinv_exact
from .formats import ParseError, emit, emit_dot, read_digraph
from .median import EXACT_CAP
from .randomized import (
    RandomizedConfig,
    RetryExhausted,
    estimate_success_probability,
    dot_pair_bound,
    mkstrich_pipeline,
    random_kstrong_vectors,
    upper_mprime_driver,
)

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2, 3


class UsageError(InvlabError):
    pass


# --------------------------------------------------------------------- output

def _spec(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _write(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload: dict) -> None:
    _write(args, json.dumps({"spec": _spec(args), **payload}, indent=2) + "\n")


def _emit_csv(args, header: list[str], rows) -> None:
    buf = io.StringIO()
    buf.write("# spec: " + json.dumps(_spec(args)) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    _write(args, buf.getvalue())


def _dot(args, d, highlight: int = 0) -> None:
    if getattr(args, "dot", None):
        with open(args.dot, "w") as fh:
            fh.write(emit_dot(d, highlight=highlight))


def _range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


def _tournament(path: str):
    d = read_digraph(path)
    if not d.is_tournament():
        raise UsageError(f"{path} is not a tournament")
    return d


# ------------------------------------------------------------------- commands

def cmd_verify(args) -> int:
    d = read_digraph(args.file)
    if args.property == "eulerian":
        payload = {"property": "eulerian", "k": args.k, "verdict": is_eulerian(d), "witness": None}
    else:
        payload = check_property(d, args.property, args.k).to_json()
    _emit_json(args, payload)
    _dot(args, d, sum(1 << v for v in (payload["witness"] or {}).get("members", [])))
    return EXIT_TRUE if payload["verdict"] else EXIT_FALSE


def cmd_exact(args) -> int:
    d = read_digraph(args.file)
    budget = SearchBudget(max_t=args.max_t, node_cap=args.node_cap)
    k = 0 if args.property == "acyclic" else args.k
    result = sinv_exact(d, k, args.property, budget, jobs=args.jobs)
    _emit_json(args, result.to_json())
    return EXIT_TRUE if result.known else EXIT_UNKNOWN


def _needs_seed(method: str, n: int, order: str) -> bool:
    return method in ("one19k", "three11k") and (order == "local" or (order == "auto" and n > EXACT_CAP))


def cmd_construct(args) -> int:
    m = args.method
    if m == "tt":
        if args.n is None:
            raise UsageError("--method tt needs --n")
        cert = construct.tt_construct(args.n, args.k)
        d = transitive_tournament(args.n)
    else:
        if args.file is None:
            raise UsageError(f"--method {m} needs an input file")
        d = _tournament(args.file)
        if m == "transform":
            if args.target is None:
                raise UsageError("--method transform needs --target")
            cert = construct.transform_certificate(d, _tournament(args.target))
        elif m in ("one19k", "three11k"):
            if _needs_seed(m, d.n, args.order) and args.seed is None:
                raise UsageError(f"the local-search order used at n={d.n} needs --seed")
            cert = construct.METHODS[m](d, args.k, seed=args.seed, order_method=args.order)
        else:
            cert = construct.METHODS[m](d, args.k)
    _emit_json(args, cert.to_json())
    _dot(args, cert.apply(d), cert.family.sets[0] if cert.family_size else 0)
    return EXIT_TRUE


RANDOM_METHODS = {
    "vectors": random_kstrong_vectors,
    "mkstrich": mkstrich_pipeline,
    "upperm": upper_mprime_driver,
}


def cmd_random(args) -> int:
    if args.seed is None:
        raise UsageError("random needs --seed")
    if args.experiment:
        return _experiment(args)
    if args.method is None or args.file is None:
        raise UsageError("random needs --method and an input file, or --experiment")
    t = _tournament(args.file)
    fn = RANDOM_METHODS[args.method]
    if args.trials is None:
        try:
            cert = fn(t, args.k, RandomizedConfig(seed=args.seed, max_retries=args.retries))
        except RetryExhausted as e:
            _emit_json(args, {"status": "retries-exhausted", "message": str(e), "stats": e.stats})
            return EXIT_UNKNOWN
        _emit_json(args, cert.to_json())
        _dot(args, cert.apply(t))
        return EXIT_TRUE
    rows = []
    for i in range(args.trials):
        cfg = RandomizedConfig(seed=f"{args.seed}:{i}", max_retries=args.retries)
        try:
            cert = fn(t, args.k, cfg)
            rows.append((i, cert.provenance, cert.family_size))
        except RetryExhausted:
            rows.append((i, "retries-exhausted", ""))
    _emit_csv(args, ["trial", "outcome", "family_size"], rows)
    return EXIT_TRUE


def _experiment(args) -> int:
    trials = args.trials or 100000
    if args.experiment == "linear-image":
        params = {"q": args.q, "q_prime": args.q_prime}
        reference = 2.0 ** -args.q
    else:
        params = {"t": args.t}
        reference = dot_pair_bound(args.t)
    est = estimate_success_probability(args.experiment, params, trials, args.seed)
    _emit_csv(args, ["experiment", "trials", "successes", "rate", "ci_low", "ci_high", "reference"],
              [(args.experiment, trials, est.successes, f"{est.rate:.6f}",
                f"{est.low:.6f}", f"{est.high:.6f}", f"{reference:.6f}")])
    return EXIT_TRUE


def _graph(args) -> Graph:
    if args.graph:
        kind, size = args.graph[0].upper(), int(args.graph[1:])
        makers = {"K": Graph.complete, "P": Graph.path, "C": Graph.cycle}
        if kind not in makers:
            raise UsageError("--graph takes Kn, Pn or Cn")
        return makers[kind](size)
    if args.edges is None or args.vertices is None:
        raise UsageError("cut-cover gadgets need --graph or --edges with --vertices")
    edges = [tuple(int(x) for x in e.split("-")) for e in args.edges.split(",") if e]
    return Graph(args.vertices, tuple(edges))


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--kind {args.kind} needs --{name.replace('_', '-')}")


def build_gadget(args):
    kind = args.kind
    params: dict = {}
    if kind == "meksat":
        _need(args, "vars", "clauses", "k")
        clauses = [frozenset(int(x) for x in c.split(",")) for c in args.clauses.split(";") if c]
        inst = gadgets.MEkSATInstance(args.vars, tuple(clauses), args.k)
        for _ in range(args.lift):
            inst = gadgets.meksat_lift(inst)
        d = gadgets.meksat_digraph(inst)
        params = {"k": inst.k, "vars": inst.num_vars, "clauses": [sorted(c) for c in inst.clauses],
                  "satisfiable": inst.satisfiable() if inst.num_vars <= 20 else None}
    elif kind in ("cc-arc", "cc-vertex"):
        _need(args, "k")
        g = _graph(args)
        fn = gadgets.cutcover_to_arcstrong if kind == "cc-arc" else gadgets.cutcover_to_strong
        d = fn(g, args.k)
        params = {"k": args.k, "graph_vertices": g.n, "graph_edges": [list(e) for e in g.edges],
                  "upper_family": gadgets.cutcover_family(g, args.k).as_lists()}
    elif kind == "sizet":
        _need(args, "t")
        d, s = gadgets.witness_sizet(args.t)
        params = {"t": args.t, "s": s}
    elif kind == "arbn1":
        _need(args, "n")
        d = gadgets.witness_arbn1(args.n)
        params = {"n": args.n, "s": 0, "base_t": gadgets.witness_arbn1_t(args.n)}
    elif kind == "extreminf":
        _need(args, "n", "k")
        d = gadgets.witness_extreminf(args.n, args.k)
        params = {"n": args.n, "k": args.k}
    else:
        _need(args, "k")
        d = gadgets.witness_T1(args.k) if kind == "t1" else gadgets.witness_T2(args.k)
        params = {"k": args.k}
    _, prop, claim = gadgets.GADGETS[kind]
    fmt = "trn" if d.is_tournament() else "dg"
    sidecar = {"kind": kind, "n": d.n, "format": fmt, "claim": claim, "expected_property": prop,
               "params": params}
    return d, sidecar


def cmd_gadget(args) -> int:
    d, sidecar = build_gadget(args)
    text = emit(d)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        with open(args.output + ".json", "w") as fh:
            json.dump({"spec": _spec(args), **sidecar}, fh, indent=2)
            fh.write("\n")
    else:
        sys.stdout.write(json.dumps({"spec": _spec(args), **sidecar, "digraph": text}, indent=2) + "\n")
    _dot(args, d)
    return EXIT_TRUE


def _threshold(n: int, k: int):
    """The smallest proven bound on m_k(n) and the construction behind it."""
    if n >= 19 * k - 2:
        return 1, "one19k"
    if n >= 11 * k - 2:
        return 3, "three11k"
    return 2 * k, "sweep2k"


def cmd_table(args) -> int:
    ns = _range(args.n)
    ks = _range(args.k)
    budget = SearchBudget(max_t=args.max_t, node_cap=args.node_cap)
    rows = []
    if args.kind == "m_k":
        for k in ks:
            for n in ns:
                row = census_m_k(n, k, None if args.property == "both" else args.property, budget, args.jobs)
                for r in row.csv_rows():
                    rows.append((n, k, r[2], r[3], f"census over {row.count_of_classes} classes"))
        header = ["n", "k", "property", "value", "provenance"]
    elif args.kind == "tt":
        for k in ks:
            for n in ns:
                cert = construct.tt_construct(n, k)
                prov = "construction, verified"
                if n <= args.exact_up_to:
                    res = sinv_exact(transitive_tournament(n), k, "k-strong", budget)
                    if res.known and res.value != cert.family_size:
                        raise InvlabError(f"TT_{n}: construction {cert.family_size} but exact {res.value}")
                    prov = "construction, exact search agrees" if res.known else prov
                rows.append((n, k, "k-strong", cert.family_size, prov))
        header = ["n", "k", "property", "value", "provenance"]
    else:
        if args.seed is None:
            raise UsageError("table --kind thresholds needs --seed")
        for k in ks:
            for n in ns:
                if n < 2 * k + 1:
                    continue
                bound, method = _threshold(n, k)
                worst = 0
                for i in range(args.samples):
                    t = random_tournament(n, f"{args.seed}:{n}:{k}:{i}")
                    if method == "sweep2k":
                        cert = construct.make_kstrong_2k(t, k)
                    else:
                        cert = construct.METHODS[method](t, k, seed=f"{args.seed}:{i}", short_circuit=False)
                    worst = max(worst, cert.family_size)
                if worst > bound:
                    raise InvlabError(f"n={n}, k={k}: {method} used {worst} sets, bound {bound}")
                rows.append((n, k, bound, method, args.samples, worst, f"{method} on seeded samples, verified"))
        header = ["n", "k", "bound", "method", "samples", "max_family", "provenance"]
    _emit_csv(args, header, rows)
    return EXIT_TRUE


def cmd_census(args) -> int:
    budget = SearchBudget(max_t=args.max_t, node_cap=args.node_cap)
    prop = None if args.property == "both" else args.property
    rows = []
    for n in _range(args.n):
        rows.extend(census_m_k(n, args.k, prop, budget, args.jobs).csv_rows())
    _emit_csv(args, ["n", "k", "property", "value", "witness_trn"], rows)
    return EXIT_UNKNOWN if any(r[3] is None for r in rows) else EXIT_TRUE


# --------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="invlab", description="Inversions of digraphs and tournaments.")
    sub = p.add_subparsers(dest="command", required=True)

    def budget_opts(sp):
        sp.add_argument("--max-t", type=int, default=6)
        sp.add_argument("--node-cap", type=int, default=None, help="overrides INVLAB_NODE_CAP")
        sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("verify", help="check k-strong, k-arc-strong, eulerian or acyclic")
    sp.add_argument("file")
    sp.add_argument("--property", choices=["k-strong", "k-arc-strong", "eulerian", "acyclic"], default="k-strong")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--dot")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("exact", help="minimum number of inversions by exhaustive search")
    sp.add_argument("file")
    sp.add_argument("--property", choices=["k-strong", "k-arc-strong", "acyclic"], default="k-strong")
    sp.add_argument("--k", type=int, default=1)
    budget_opts(sp)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("construct", help="build and verify an inversion family")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--method", required=True,
                    choices=["k1", "k2", "sweep2k", "tt", "one19k", "three11k", "layered", "transform"])
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--n", type=int, help="order of TT_n for --method tt")
    sp.add_argument("--target", help="second tournament for --method transform")
    sp.add_argument("--order", choices=["auto", "exact", "local"], default="auto")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--dot")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("random", help="randomized constructions and Monte-Carlo estimates")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--method", choices=sorted(RANDOM_METHODS))
    sp.add_argument("--experiment", choices=["linear-image", "dot-pair"])
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--retries", type=int, default=50)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--q", type=int, default=3)
    sp.add_argument("--q-prime", type=int, default=5)
    sp.add_argument("--t", type=int, default=5)
    sp.add_argument("--dot")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_random)

    sp = sub.add_parser("gadget", help="reduction gadgets and lower-bound witnesses")
    sp.add_argument("--kind", required=True, choices=sorted(gadgets.GADGETS))
    sp.add_argument("--k", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--t", type=int)
    sp.add_argument("--vars", type=int)
    sp.add_argument("--clauses", help='e.g. "0,1,2;1,2,3"')
    sp.add_argument("--lift", type=int, default=0, help="raise k this many times")
    sp.add_argument("--graph", help="Kn, Pn or Cn")
    sp.add_argument("--edges", help='e.g. "0-1,1-2"')
    sp.add_argument("--vertices", type=int)
    sp.add_argument("--dot")
    sp.add_argument("--output", help="digraph file; the sidecar goes to OUTPUT.json")
    sp.set_defaults(func=cmd_gadget)

    sp = sub.add_parser("table", help="CSV tables of small values and bounds")
    sp.add_argument("--kind", required=True, choices=["m_k", "tt", "thresholds"])
    sp.add_argument("--k", required=True, help="value, list or range lo..hi")
    sp.add_argument("--n", required=True, help="value, list or range lo..hi")
    sp.add_argument("--property", choices=["k-strong", "k-arc-strong", "both"], default="both")
    sp.add_argument("--exact-up-to", type=int, default=9)
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--seed", type=int)
    budget_opts(sp)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("census", help="exhaustive maximum over tournament classes")
    sp.add_argument("--n", required=True, help="value, list or range lo..hi")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--property", choices=["k-strong", "k-arc-strong", "both"], default="both")
    budget_opts(sp)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_census)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"invlab: parse error: {e}", file=sys.stderr)
    except (InvlabError, ValueError, OSError) as e:
        print(f"invlab: {e}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
