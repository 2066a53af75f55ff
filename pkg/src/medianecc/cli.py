"""Command line interface.

Subcommands: gen, theta, stats, ecc, reach, wopp, verify, crosscheck, bench.
Exit codes: 0 success, 1 disagreement or verification failure, 2 usage error
(including unreadable or malformed input).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .graph import (Graph, GraphFormatError, GraphStructureError, SizeCapError,
                    DEFAULT_MATRIX_CAP, eccentricities_oracle, load_graph,
                    verify_median)
from .theta import ThetaStructureError, compute_theta, dimension, mask_members, orient
from .pof import build_pof_index, enumerate_hypercubes, enumerate_mops, maximal_pofs
from .wopp import WoppError, simplex_central_vertex, solve_wopp, system_from_index
from .labels import build_structures
from .reach import reach_fpt, reach_oracle
from .harness import (ECC_ALGOS, bench, crosscheck, render_bench_figures,
                      rows_to_csv, run_ecc)
from .generators import GenError, gen, parse_spec

USAGE_ERROR = 2
DISAGREEMENT = 1


def _read_graph(args) -> Graph:
    if args.input is None or args.input == "-":
        text = sys.stdin.read()
    else:
        text = Path(args.input).read_text()
    return load_graph(text)


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _cmd_gen(args) -> int:
    spec = parse_spec(args.spec, seed=args.seed)
    g = gen(spec)
    _emit(args, g.to_edge_list())
    return 0


def _cmd_theta(args) -> int:
    g = _read_graph(args)
    ts = compute_theta(g, basepoint=0)
    ori = orient(g, ts)
    payload = {
        "n": g.n, "m": g.m, "q": ts.q, "d": dimension(ori),
        "class_sizes": [len(e) for e in ts.class_edges],
    }
    if args.json:
        payload["classes"] = [
            [list(g.edges[e]) for e in eids] for eids in ts.class_edges]
        _emit(args, json.dumps(payload, indent=2))
    else:
        lines = [f"n={g.n} m={g.m} q={ts.q} d={payload['d']}",
                 "class sizes: " + " ".join(str(s) for s in payload["class_sizes"])]
        _emit(args, "\n".join(lines))
    return 0


def _cmd_stats(args) -> int:
    g = _read_graph(args)
    index = build_structures(g, basepoint=0)
    payload = {
        "n": g.n, "m": g.m, "q": index.q, "d": index.dim,
        "pofs": len(index.vertex_of_pof),
        "hypercubes": len(enumerate_hypercubes(index)),
        "mops": len(enumerate_mops(index)),
        "maximal_pofs": len(maximal_pofs(index)),
    }
    _emit(args, json.dumps(payload, indent=2))
    return 0


def _cmd_ecc(args) -> int:
    g = _read_graph(args)
    start = time.perf_counter()
    ecc = run_ecc(g, args.algo, c=args.c, backend=args.backend, cap=args.cap)
    elapsed = (time.perf_counter() - start) * 1000.0
    index = build_structures(g, basepoint=0)
    payload = {
        "n": g.n, "d": index.dim, "q": index.q, "algo": args.algo,
        "ecc": ecc, "diameter": max(ecc), "radius": min(ecc),
        "elapsed_ms": round(elapsed, 3),
    }
    _emit(args, json.dumps(payload, indent=2))
    return 0


def _cmd_reach(args) -> int:
    g = _read_graph(args)
    if args.algo == "oracle":
        rc = reach_oracle(g, cap=args.cap)
    else:
        rc = reach_fpt(g)
    _emit(args, json.dumps({"n": g.n, "algo": args.algo, "rc": rc}, indent=2))
    return 0


def _cmd_wopp(args) -> int:
    g = _read_graph(args)
    ts = compute_theta(g, basepoint=0)
    central = simplex_central_vertex(ts)
    if central is None:
        print("input is not a simplex graph (no vertex meets every class)",
              file=sys.stderr)
        return DISAGREEMENT
    index = build_structures(g, basepoint=central)
    weights = None
    if args.weights:
        weights = {}
        for line in Path(args.weights).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            v, w = line.split()
            weights[int(v)] = int(w)

    # cardinality weights are shifted by one internally to stay positive;
    # report them back on the user scale
    shift = 1 if weights is None else 0

    def weight_of(v: int, mask: int) -> int:
        if weights is None:
            return mask.bit_count() + 1
        return weights[v]

    system = system_from_index(index, weight_of)
    result = solve_wopp(system)
    entries = []
    for v in range(g.n):
        mask = index.in_pof(v)
        opp = result.opposites[mask]
        entries.append({
            "vertex": v,
            "pof": list(mask_members(mask)),
            "opposite": list(mask_members(opp)),
            "weight": result.weights[mask] - shift,
        })
    _emit(args, json.dumps({"central": central, "opposites": entries}, indent=2))
    return 0


def _cmd_verify(args) -> int:
    g = _read_graph(args)
    check = verify_median(g, cap=args.cap)
    payload = {"n": g.n, "m": g.m, "median": check.ok,
               "violation": list(check.violation) if check.violation else None}
    _emit(args, json.dumps(payload, indent=2))
    return 0 if check.ok else DISAGREEMENT


def _cmd_crosscheck(args) -> int:
    if args.spec:
        g = gen(parse_spec(args.spec, seed=args.seed))
        label = args.spec
    else:
        g = _read_graph(args)
        label = args.input or "stdin"
    report = crosscheck(g, matrix_cap=args.cap, instance_label=label)
    if args.json:
        _emit(args, report.to_json())
    else:
        lines = [f"instance {label}: n={g.n} m={g.m}"]
        for c in report.checks:
            lines.append(f"  [{c.status:4s}] {c.name}"
                         + (f" ({c.detail})" if c.detail else ""))
        lines.append("OK" if report.ok else "FAILED")
        _emit(args, "\n".join(lines))
    return 0 if report.ok else DISAGREEMENT


def _cmd_bench(args) -> int:
    specs = [parse_spec(s, seed=args.seed) for s in args.spec]
    algos = args.algos.split(",") if args.algos else ["oracle", "split"]
    for algo in algos:
        if algo not in ECC_ALGOS:
            raise GenError(f"unknown algorithm {algo!r}")
    rows = bench(specs, algos, c=args.c, backend=args.backend, cap=args.cap)
    _emit(args, rows_to_csv(rows))
    if args.plot:
        written = render_bench_figures(rows, args.plot)
        for path in written:
            print(f"wrote {path}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="medianecc",
        description="Exact metric quantities on median graphs")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--input", help="edge-list file ('-' for stdin)")
        if output:
            p.add_argument("--output", help="write result to this file")
        p.add_argument("--cap", type=int, default=DEFAULT_MATRIX_CAP,
                       help="distance-matrix size cap for oracle paths")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", action="store_true", help="JSON output")

    p = sub.add_parser("gen", help="generate a median graph instance")
    p.add_argument("spec", help="family:key=val,... (see README)")
    common(p)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("theta", help="Theta-class summary")
    common(p)
    p.set_defaults(fn=_cmd_theta)

    p = sub.add_parser("stats", help="structural counts (POFs, cubes, MOPs)")
    common(p)
    p.set_defaults(fn=_cmd_stats)

    p = sub.add_parser("ecc", help="all eccentricities")
    common(p)
    p.add_argument("--algo", choices=ECC_ALGOS, default="split")
    p.add_argument("--c", type=float, default=3.5394,
                   help="base of the leaf FPT cost, sets the split threshold")
    p.add_argument("--backend", choices=("naive", "mop", "minpar"),
                   default="minpar")
    p.set_defaults(fn=_cmd_ecc)

    p = sub.add_parser("reach", help="all reach centralities")
    common(p)
    p.add_argument("--algo", choices=("oracle", "labels"), default="labels")
    p.set_defaults(fn=_cmd_reach)

    p = sub.add_parser("wopp", help="weighted opposites on a simplex graph")
    common(p)
    p.add_argument("--weights", help="per-vertex weight file: lines 'vertex weight'")
    p.set_defaults(fn=_cmd_wopp)

    p = sub.add_parser("verify", help="exhaustive median verification")
    common(p)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("crosscheck", help="validate all algorithms on one instance")
    common(p)
    p.add_argument("--spec", help="generate the instance instead of reading it")
    p.set_defaults(fn=_cmd_crosscheck)

    p = sub.add_parser("bench", help="timing sweep, CSV output")
    common(p)
    p.add_argument("spec", nargs="*", help="instance specs to time")
    p.add_argument("--algos", help="comma-separated algorithm list")
    p.add_argument("--c", type=float, default=3.5394)
    p.add_argument("--backend", choices=("naive", "mop", "minpar"),
                   default="minpar")
    p.add_argument("--plot", metavar="DIR",
                   help="also render per-family runtime figures to DIR")
    p.set_defaults(fn=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (GraphFormatError, GraphStructureError, GenError, FileNotFoundError,
            SizeCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ThetaStructureError, WoppError) as exc:
        print(f"structure error: {exc}", file=sys.stderr)
        return DISAGREEMENT


if __name__ == "__main__":
    sys.exit(main())
