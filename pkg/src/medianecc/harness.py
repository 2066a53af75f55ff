"""Cross-validation campaigns, timing sweeps and machine-readable reports.

``crosscheck`` runs every implemented algorithm against its brute-force
oracle on one instance and aggregates pass/fail flags; ``bench`` times
algorithms over generated sweeps, fits log-log slopes per family, and can
render the sweep as matplotlib figures next to the CSV.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .graph import (Graph, DEFAULT_MATRIX_CAP, SizeCapError, distance_matrix,
                    eccentricities_oracle, verify_median)
from .theta import ThetaStructureError, compute_theta, orient, theta_oracle
from .pof import (build_pof_index, crossing_graph, enumerate_hypercubes,
                  enumerate_mops, maximal_pofs, pof_counts_by_size)
from .wopp import simplex_central_vertex, simplex_eccentricities, \
    solve_wopp, system_from_index
from .labels import build_structures, compute_labels, ecc_from_labels
from .reach import compute_reach, reach_oracle
from .driver import build_split_tree, default_threshold, ecc_subquadratic, \
    induced_subgraph
from .generators import GenSpec, gen

REPORT_SCHEMA = 1

# Default workload limits for the expensive oracles inside a crosscheck.
VERIFY_LIMIT = 400
REACH_LIMIT = 300
WOPP_LIMIT = 2000


@dataclass
class Check:
    name: str
    status: str               # "pass" | "fail" | "skip"
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


@dataclass
class Report:
    instance: dict
    checks: list[Check] = field(default_factory=list)
    timings_ms: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def add(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, "pass" if ok else "fail", detail))
        return ok

    def skip(self, name: str, detail: str = "") -> None:
        self.checks.append(Check(name, "skip", detail))

    def as_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "instance": self.instance,
            "ok": self.ok,
            "checks": [c.as_dict() for c in self.checks],
            "timings_ms": self.timings_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)


def _timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, (time.perf_counter() - start) * 1000.0


def max_cliques(n: int, adj: list[set[int]]) -> list[tuple[int, ...]]:
    """Maximal cliques by pivoting Bron-Kerbosch (fine at class-graph scale)."""
    out: list[tuple[int, ...]] = []

    def expand(r: list[int], p: set[int], x: set[int]) -> None:
        if not p and not x:
            out.append(tuple(sorted(r)))
            return
        pivot = max(p | x, key=lambda v: len(adj[v] & p))
        for v in sorted(p - adj[pivot]):
            expand(r + [v], p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    if n == 0:
        return []
    expand([], set(range(n)), set())
    return out


def crosscheck(g: Graph, matrix_cap: int = DEFAULT_MATRIX_CAP,
               verify_limit: int = VERIFY_LIMIT,
               reach_limit: int = REACH_LIMIT,
               instance_label: str = "input") -> Report:
    """Run every algorithm against its oracle on one graph.

    A failed median verification short-circuits the remaining checks, since
    nothing downstream is defined on non-median inputs.
    """
    report = Report(instance={"label": instance_label, "n": g.n, "m": g.m})

    if g.n <= min(matrix_cap, verify_limit):
        check, ms = _timed(verify_median, g, matrix_cap)
        report.timings_ms["verify_median"] = ms
        if not report.add("verify-median", check.ok,
                          "" if check.ok else f"violating triple {check.violation}"):
            return report
    else:
        report.skip("verify-median", f"n={g.n} above verification limit")

    try:
        ts = compute_theta(g, basepoint=0, validate=True)
        ori = orient(g, ts)
        index = build_pof_index(g, ts, ori)
    except ThetaStructureError as exc:
        report.add("theta-structure", False, str(exc))
        return report
    report.add("theta-structure", True)
    report.instance.update({"q": ts.q, "d": index.dim})

    report.add("euler-formula", 2 * g.n - g.m - ts.q <= 2,
               f"2n-m-q = {2 * g.n - g.m - ts.q}")

    dmat = None
    if g.n <= matrix_cap:
        dmat, ms = _timed(distance_matrix, g, matrix_cap)
        report.timings_ms["distance_matrix"] = ms

    if dmat is not None:
        ok = True
        sig = ts.sig
        for u in range(g.n):
            row = dmat[u]
            su = sig[u]
            for v in range(u + 1, g.n):
                if (su ^ sig[v]).bit_count() != row[v]:
                    ok = False
                    break
            if not ok:
                break
        report.add("signature-distances", ok)
        oracle_parts = {frozenset(p) for p in theta_oracle(g, cap=matrix_cap)}
        mine = {frozenset(eids) for eids in ts.class_edges}
        report.add("theta-oracle", oracle_parts == mine)
    else:
        report.skip("signature-distances", "distance matrix above cap")
        report.skip("theta-oracle", "distance matrix above cap")

    cubes = enumerate_hypercubes(index)
    beta = pof_counts_by_size(index)
    eq1 = len(cubes) + g.n == sum((1 << i) * b for i, b in enumerate(beta))
    report.add("pof-bijection", len(index.vertex_of_pof) == g.n)
    report.add("hypercube-count", eq1,
               f"{len(cubes)} cubes + n vs sum 2^i*beta_i")
    dim_ok = index.dim <= math.floor(math.log2(g.n)) if g.n > 1 else index.dim == 0
    dmax = max((len(e) for e in ts.class_edges), default=0)
    if dmax > 0:
        dim_ok = dim_ok and index.dim <= math.floor(math.log2(dmax)) + 1
    report.add("dimension-bounds", dim_ok, f"d={index.dim}, max class size {dmax}")

    mops = enumerate_mops(index)
    cg = crossing_graph(index)
    adj = [set(nb) for nb in cg.adjacency]
    cor2 = sum(2 ** len(c) for c in max_cliques(cg.n, adj))
    ok2 = len(mops) <= cor2
    detail = f"mops={len(mops)}, clique bound={cor2}"
    if index.dim >= 2:
        cor3 = (2.0 * (g.n ** (1.0 / index.dim) - 1.0)) ** index.dim
        ok2 = ok2 and len(mops) <= cor3
        detail += f", turan bound={cor3:.1f}"
    report.add("mop-bounds", ok2, detail)

    oracle, ms = _timed(eccentricities_oracle, g, matrix_cap)
    report.timings_ms["ecc_oracle"] = ms
    label_sets = {}
    for backend in ("naive", "mop", "minpar"):
        labels, ms = _timed(compute_labels, index, backend)
        report.timings_ms[f"labels_{backend}"] = ms
        label_sets[backend] = labels
        ecc = ecc_from_labels(index, labels.phi, labels.psi)
        report.add(f"ecc-fpt-{backend}", ecc == oracle)
    base = label_sets["naive"]
    same = all(
        label_sets[b].phi.values == base.phi.values
        and label_sets[b].phi.witness == base.phi.witness
        and label_sets[b].psi.values == base.psi.values
        for b in ("mop", "minpar"))
    report.add("backend-tables", same)

    for c_value, backend in ((4.0, "naive"), (3.5394, "minpar")):
        ecc, ms = _timed(ecc_subquadratic, g, c_value, backend, None, ts)
        report.timings_ms[f"ecc_split_c{c_value}"] = ms
        report.add(f"ecc-split-c{c_value}", ecc == oracle)

    report.add("split-structure", *_split_structure_ok(g, ts))

    if g.n <= reach_limit:
        rc_oracle, ms = _timed(reach_oracle, g, matrix_cap)
        report.timings_ms["reach_oracle"] = ms
        rc = compute_reach(index, base.phi, base.op, base.psi)
        report.add("reach-agreement", rc == rc_oracle)
    else:
        report.skip("reach-agreement", f"n={g.n} above reach oracle limit")

    _check_wopp(report, g, oracle)
    return report


def _split_structure_ok(g: Graph, ts) -> tuple[bool, str]:
    threshold = default_threshold(g.n, 3.5394)
    tree = build_split_tree(g, ts, threshold)
    bound = math.floor(math.log2(threshold)) + 1
    for nid in tree.leaves():
        node = tree.nodes[nid]
        sub, mapping = induced_subgraph(g, node.vertices)
        sub_ts = compute_theta(sub, basepoint=0)
        if sub.m:
            from .theta import dimension as _dim
            d_leaf = _dim(orient(sub, sub_ts))
            if d_leaf > bound:
                return False, f"leaf dimension {d_leaf} exceeds {bound}"
        mine = {frozenset(g.edge_id(mapping[sub.edges[e][0]], mapping[sub.edges[e][1]])
                          for e in eids)
                for eids in sub_ts.class_edges}
        restricted: dict[int, set[int]] = {}
        leaf_set = set(node.vertices)
        for eid, (u, v) in enumerate(g.edges):
            if u in leaf_set and v in leaf_set:
                restricted.setdefault(ts.class_of_edge[eid], set()).add(eid)
        if mine != {frozenset(s) for s in restricted.values()}:
            return False, "leaf classes differ from restricted parent classes"
    return True, f"D={threshold}, {len(tree.leaves())} leaves"


def _check_wopp(report: Report, g: Graph, oracle: list[int]) -> None:
    ts0 = compute_theta(g, basepoint=0)
    central = simplex_central_vertex(ts0)
    if central is None:
        report.skip("wopp", "not a simplex graph")
        return
    if g.n > WOPP_LIMIT:
        report.skip("wopp", f"n={g.n} above brute-force limit")
        return
    index = build_structures(g, basepoint=central)
    system = system_from_index(index, lambda v, mask: mask.bit_count() + 1)
    result = solve_wopp(system, validate=True)
    ok = True
    masks = system.pofs
    for x in masks:
        best = max(system.weight[y] for y in masks if x & y == 0)
        if system.weight[result.opposites[x]] != best:
            ok = False
            break
    report.add("wopp-brute-force", ok, f"memo={result.memo_size}")
    ecc = simplex_eccentricities(g, index.ts, index)
    report.add("wopp-simplex-ecc", ecc == eccentricities_oracle(g))


ECC_ALGOS = ("oracle", "fpt-naive", "fpt-mop", "fpt-minpar", "split")


def run_ecc(g: Graph, algo: str, c: float = 3.5394, backend: str = "minpar",
            cap: int = DEFAULT_MATRIX_CAP) -> list[int]:
    if algo == "oracle":
        return eccentricities_oracle(g, cap=cap)
    if algo.startswith("fpt-"):
        index = build_structures(g)
        labels = compute_labels(index, backend=algo[4:])
        return ecc_from_labels(index, labels.phi, labels.psi)
    if algo == "split":
        return ecc_subquadratic(g, c=c, backend=backend)
    raise ValueError(f"unknown ecc algorithm {algo!r}")


BENCH_FIELDS = ("row", "family", "label", "algo", "n", "m", "q", "d", "D",
                "elapsed_ms", "slope")


def bench(specs: list[GenSpec], algos: list[str], c: float = 3.5394,
          backend: str = "minpar",
          cap: int = DEFAULT_MATRIX_CAP) -> list[dict]:
    """Timing rows per (instance, algorithm) plus per-family log-log slopes."""
    rows: list[dict] = []
    for spec in specs:
        g = gen(spec)
        ts = compute_theta(g, basepoint=0)
        ori = orient(g, ts)
        from .theta import dimension as _dim
        d = _dim(ori)
        threshold = default_threshold(g.n, c)
        for algo in algos:
            _, ms = _timed(run_ecc, g, algo, c, backend, cap)
            rows.append({
                "row": "timing", "family": spec.family, "label": spec.label(),
                "algo": algo, "n": g.n, "m": g.m, "q": ts.q, "d": d,
                "D": threshold if algo == "split" else "",
                "elapsed_ms": round(ms, 3), "slope": "",
            })
    for family, algo, slope in fit_slopes(rows):
        rows.append({
            "row": "slope", "family": family, "label": "", "algo": algo,
            "n": "", "m": "", "q": "", "d": "", "D": "",
            "elapsed_ms": "", "slope": round(slope, 4),
        })
    return rows


def fit_slopes(rows: list[dict]) -> list[tuple[str, str, float]]:
    series: dict[tuple[str, str], list[tuple[int, float]]] = {}
    for r in rows:
        if r["row"] != "timing":
            continue
        series.setdefault((r["family"], r["algo"]), []).append(
            (r["n"], max(r["elapsed_ms"], 1e-3)))
    out = []
    for (family, algo), pts in sorted(series.items()):
        sizes = sorted({n for n, _ in pts})
        if len(sizes) < 2:
            continue
        xs = np.log([n for n, _ in pts])
        ys = np.log([t for _, t in pts])
        slope = float(np.polyfit(xs, ys, 1)[0])
        out.append((family, algo, slope))
    return out


def rows_to_csv(rows: list[dict]) -> str:
    import csv
    import io
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_FIELDS)
    writer.writeheader()
    for r in rows:
        writer.writerow(r)
    return buf.getvalue()


def render_bench_figures(rows: list[dict], outdir) -> list[str]:
    """One log-log runtime figure per family, written as PNG files."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from pathlib import Path

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    families: dict[str, dict[str, list[tuple[int, float]]]] = {}
    for r in rows:
        if r["row"] != "timing":
            continue
        families.setdefault(r["family"], {}).setdefault(r["algo"], []).append(
            (r["n"], max(r["elapsed_ms"], 1e-3)))
    written = []
    for family, by_algo in sorted(families.items()):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        for algo, pts in sorted(by_algo.items()):
            pts = sorted(pts)
            ax.loglog([p[0] for p in pts], [p[1] for p in pts],
                      marker="o", label=algo)
        ax.set_xlabel("vertices")
        ax.set_ylabel("elapsed [ms]")
        ax.set_title(f"eccentricity runtimes: {family}")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
        path = outdir / f"bench_{family.replace('-', '_')}.png"
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        written.append(str(path))
    return written
