"""Subquadratic eccentricities: split on large Theta-classes, solve leaves
with the FPT labeling pipeline, merge upward through gates.

Classes with at least D edges are deleted one by one, splitting every leaf
they touch into its two halfspaces (convex, hence median, subgraphs).  The
surviving leaves have dimension at most floor(log2 D) + 1, so the label
algorithms run fast on them; a gated multi-source BFS then stitches child
eccentricities back together level by level.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .graph import Graph, from_edges
from .theta import ThetaStructure, compute_theta
from .labels import build_structures, compute_labels, ecc_from_labels, BACKENDS


@dataclass
class SplitNode:
    vertices: list[int]              # global vertex ids of this convex piece
    split_class: int = -1            # global class id, -1 at leaves
    child_near: int = -1             # side of the class toward the basepoint
    child_far: int = -1
    ecc: Optional[dict[int, int]] = None

    @property
    def is_leaf(self) -> bool:
        return self.split_class < 0


@dataclass
class SplitTree:
    graph: Graph
    ts: ThetaStructure
    threshold: int
    split_classes: list[int]         # classes of size >= D, largest first
    nodes: list[SplitNode]

    @property
    def root(self) -> int:
        return 0

    def leaves(self) -> list[int]:
        return [i for i, nd in enumerate(self.nodes) if nd.is_leaf]


def build_split_tree(g: Graph, ts: ThetaStructure, threshold: int) -> SplitTree:
    """Binary tree of halfspace splits for every class of size >= threshold.

    Classes are processed by decreasing size (ties by class id).  A leaf
    splits at class c exactly when it holds vertices on both sides, which
    for a connected convex piece means it contains edges of c.
    """
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    big = sorted((c for c in range(ts.q) if len(ts.class_edges[c]) >= threshold),
                 key=lambda c: (-len(ts.class_edges[c]), c))
    nodes = [SplitNode(vertices=list(range(g.n)))]
    frontier = [0]
    sig = ts.sig
    for c in big:
        nxt: list[int] = []
        for nid in frontier:
            node = nodes[nid]
            near = [v for v in node.vertices if not (sig[v] >> c) & 1]
            far = [v for v in node.vertices if (sig[v] >> c) & 1]
            if not near or not far:
                nxt.append(nid)
                continue
            node.split_class = c
            node.child_near = len(nodes)
            nodes.append(SplitNode(vertices=near))
            node.child_far = len(nodes)
            nodes.append(SplitNode(vertices=far))
            nxt.extend((node.child_near, node.child_far))
        frontier = nxt
    return SplitTree(graph=g, ts=ts, threshold=threshold, split_classes=big,
                     nodes=nodes)


def induced_subgraph(g: Graph, vertices: list[int]) -> tuple[Graph, list[int]]:
    """Induced subgraph on ``vertices`` plus the local->global id mapping."""
    ordered = sorted(vertices)
    local = {v: i for i, v in enumerate(ordered)}
    edges = []
    for v in ordered:
        for w in g.adjacency[v]:
            if v < w and w in local:
                edges.append((local[v], local[w]))
    return from_edges(len(ordered), edges), ordered


def gate_bfs(g: Graph, ts: ThetaStructure, members: set[int], c: int,
             side_bit: int) -> dict[int, tuple[int, int]]:
    """Gates into the opposite boundary for one side of a split.

    For every vertex v of the chosen side, returns (gate, d(v, gate)) where
    the gate is the matched endpoint across class c of the nearest boundary
    vertex; ties resolve to the smallest gate id.  The search never leaves
    the side: halfspaces of a convex piece are convex, so restricted
    distances are exact.
    """
    sig = ts.sig
    seeds = []
    for eid in ts.class_edges[c]:
        u, v = g.edges[eid]
        if u not in members or v not in members:
            continue
        if (sig[u] >> c) & 1 != side_bit:
            u, v = v, u
        seeds.append((u, v))  # u on our side, v is its gate across the class
    seeds.sort(key=lambda t: t[1])
    result: dict[int, tuple[int, int]] = {}
    queue = deque()
    for v, gate in seeds:
        if v not in result:
            result[v] = (gate, 1)
            queue.append(v)
    while queue:
        v = queue.popleft()
        gate, dist = result[v]
        for w in g.adjacency[v]:
            if w in members and (sig[w] >> c) & 1 == side_bit and w not in result:
                result[w] = (gate, dist + 1)
                queue.append(w)
    return result


def merge_ecc(node_vertices: list[int], near_ecc: dict[int, int],
              far_ecc: dict[int, int],
              near_gates: dict[int, tuple[int, int]],
              far_gates: dict[int, tuple[int, int]]) -> dict[int, int]:
    """Combine child eccentricities: local value vs gate distance + remote value."""
    merged: dict[int, int] = {}
    for v, local in near_ecc.items():
        gate, dist = near_gates[v]
        merged[v] = max(local, dist + far_ecc[gate])
    for v, local in far_ecc.items():
        gate, dist = far_gates[v]
        merged[v] = max(local, dist + near_ecc[gate])
    assert len(merged) == len(node_vertices)
    return merged


def default_threshold(n: int, c: float) -> int:
    """D = n^(1 / (log2 c + 1)), clamped to [2, n]."""
    if n <= 1:
        return 2
    d = round(n ** (1.0 / (math.log2(c) + 1.0)))
    return max(2, min(n, d))


@dataclass
class SplitRunInfo:
    threshold: int
    split_class_count: int
    leaf_count: int
    max_leaf_dim: int


def ecc_subquadratic(g: Graph, c: float = 3.5394, backend: str = "minpar",
                     threshold: Optional[int] = None,
                     ts: Optional[ThetaStructure] = None,
                     info: Optional[list] = None) -> list[int]:
    """Exact eccentricities via the halfspace splitting scheme.

    Leaves are solved independently by the labeling pipeline (re-running the
    Theta machinery on each induced subgraph, which is legitimate because
    convex pieces are median and inherit restricted classes), then merged
    bottom-up with gate distances.
    """
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if ts is None:
        ts = compute_theta(g, basepoint=0)
    if threshold is None:
        threshold = default_threshold(g.n, c)
    tree = build_split_tree(g, ts, threshold)

    max_leaf_dim = 0
    for nid in tree.leaves():
        node = tree.nodes[nid]
        sub, mapping = induced_subgraph(g, node.vertices)
        index = build_structures(sub, basepoint=0)
        max_leaf_dim = max(max_leaf_dim, index.dim)
        labels = compute_labels(index, backend=backend)
        local_ecc = ecc_from_labels(index, labels.phi, labels.psi)
        node.ecc = {mapping[i]: e for i, e in enumerate(local_ecc)}

    for nid in range(len(tree.nodes) - 1, -1, -1):
        node = tree.nodes[nid]
        if node.is_leaf:
            continue
        members = set(node.vertices)
        c_id = node.split_class
        near = tree.nodes[node.child_near]
        far = tree.nodes[node.child_far]
        near_gates = gate_bfs(g, ts, members, c_id, side_bit=0)
        far_gates = gate_bfs(g, ts, members, c_id, side_bit=1)
        node.ecc = merge_ecc(node.vertices, near.ecc, far.ecc,
                             near_gates, far_gates)

    if info is not None:
        info.append(SplitRunInfo(
            threshold=threshold,
            split_class_count=len(tree.split_classes),
            leaf_count=len(tree.leaves()),
            max_leaf_dim=max_leaf_dim))
    root = tree.nodes[tree.root].ecc
    return [root[v] for v in range(g.n)]
