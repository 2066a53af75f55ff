"""Immutable undirected graph, BFS machinery and desk-scale metric oracles.

Vertices are dense 0-based integers.  Edge ids follow input order after
deduplication, which keeps every structure derived from them (classes,
orientations, splits) reproducible across runs.

The oracles in this module (all-pairs distances, eccentricities by repeated
BFS, triple-scan median verification) are the ground truth that every
smarter algorithm in the package is tested against.  They materialize an
n x n distance matrix and are therefore guarded by a size cap.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

DEFAULT_MATRIX_CAP = 4096

# Exact triple scan switches to a vectorized path above this vertex count.
_DIRECT_TRIPLE_LIMIT = 160


class GraphFormatError(ValueError):
    """Malformed edge-list input (bad line, self-loop, duplicate edge)."""


class GraphStructureError(ValueError):
    """Input violates a structural requirement (e.g. disconnected)."""


class SizeCapError(ValueError):
    """An oracle was asked to materialize a distance matrix beyond its cap."""


@dataclass(frozen=True)
class Graph:
    """Simple connected undirected graph with stable vertex and edge ids."""

    n: int
    edges: tuple[tuple[int, int], ...]          # (u, v) with u < v, index = edge id
    adjacency: tuple[tuple[int, ...], ...]      # sorted neighbor lists
    input_labels: Optional[tuple[int, ...]] = None  # original labels when remapped

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edge_id(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self._edge_index[(u, v)]

    @property
    def _edge_index(self) -> dict[tuple[int, int], int]:
        idx = self.__dict__.get("_edge_index_cache")
        if idx is None:
            idx = {e: i for i, e in enumerate(self.edges)}
            object.__setattr__(self, "_edge_index_cache", idx)
        return idx

    def to_edge_list(self) -> str:
        lines = [f"# vertices: {self.n}"]
        lines.extend(f"{u} {v}" for u, v in self.edges)
        return "\n".join(lines) + "\n"


def from_edges(n: int, edges: Iterable[tuple[int, int]],
               input_labels: Optional[Sequence[int]] = None,
               require_connected: bool = True) -> Graph:
    """Build a :class:`Graph` from an edge iterable, validating structure."""
    seen: dict[tuple[int, int], int] = {}
    norm: list[tuple[int, int]] = []
    for u, v in edges:
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key}")
        seen[key] = len(norm)
        norm.append(key)
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in norm:
        adj[u].append(v)
        adj[v].append(u)
    adjacency = tuple(tuple(sorted(a)) for a in adj)
    g = Graph(n=n, edges=tuple(norm), adjacency=adjacency,
              input_labels=tuple(input_labels) if input_labels is not None else None)
    if require_connected and n > 0 and _component_size(g, 0) != n:
        raise GraphStructureError("graph is not connected")
    return g


def load_graph(text: str) -> Graph:
    """Parse an edge-list document.

    Lines are ``u v`` with decimal ids; ``#`` starts a comment.  Ids already
    equal to 0..n-1 are kept as they are; otherwise they are remapped to
    0..n-1 in first-appearance order and the original labels are kept on
    ``Graph.input_labels``.  A ``# vertices: N`` comment allows
    single-vertex graphs (no edges).
    """
    seen_order: list[int] = []
    seen: set[int] = set()
    raw_edges: list[tuple[int, int]] = []
    declared_n: Optional[int] = None

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if body.lower().startswith("vertices:"):
                try:
                    declared_n = int(body.split(":", 1)[1])
                except ValueError:
                    raise GraphFormatError(f"line {lineno}: bad vertex count comment")
            continue
        if not stripped:
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {stripped!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer vertex id in {stripped!r}")
        if a == b:
            raise GraphFormatError(f"line {lineno}: self-loop at vertex {a}")
        for raw in (a, b):
            if raw not in seen:
                seen.add(raw)
                seen_order.append(raw)
        raw_edges.append((a, b))

    n = len(seen_order)
    if declared_n is not None:
        if raw_edges and declared_n != n:
            raise GraphFormatError(
                f"declared vertex count {declared_n} does not match {n} ids seen")
        n = declared_n
    if n == 0:
        raise GraphFormatError("empty graph")
    if seen == set(range(n)):
        return from_edges(n, raw_edges)
    remap = {raw: i for i, raw in enumerate(seen_order)}
    edges = [(remap[a], remap[b]) for a, b in raw_edges]
    return from_edges(n, edges, input_labels=seen_order)


def _component_size(g: Graph, start: int) -> int:
    seen = bytearray(g.n)
    seen[start] = 1
    queue = deque([start])
    count = 1
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if not seen[w]:
                seen[w] = 1
                count += 1
                queue.append(w)
    return count


@dataclass(frozen=True)
class DistRow:
    """Single-source BFS result with deterministic parents."""

    source: int
    dist: tuple[int, ...]
    parent: tuple[int, ...]  # -1 at the source

    def ecc(self) -> int:
        return max(self.dist)


def bfs(g: Graph, s: int) -> DistRow:
    """Hop distances from ``s``; parent is the smallest-id neighbor one level up."""
    if not (0 <= s < g.n):
        raise ValueError(f"source {s} out of range")
    dist = [-1] * g.n
    dist[s] = 0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        du = dist[u]
        for w in g.adjacency[u]:
            if dist[w] < 0:
                dist[w] = du + 1
                queue.append(w)
    parent = [-1] * g.n
    for v in range(g.n):
        if v == s:
            continue
        dv = dist[v]
        for u in g.adjacency[v]:  # sorted, so first hit is the smallest id
            if dist[u] == dv - 1:
                parent[v] = u
                break
    return DistRow(source=s, dist=tuple(dist), parent=tuple(parent))


def distance_matrix(g: Graph, cap: int = DEFAULT_MATRIX_CAP) -> np.ndarray:
    """All-pairs hop distances as an int32 matrix (n BFS runs, size-capped)."""
    if g.n > cap:
        raise SizeCapError(f"n={g.n} exceeds distance matrix cap {cap}")
    if g.m == 0:
        return np.zeros((g.n, g.n), dtype=np.int32)
    rows = [u for u, v in g.edges] + [v for u, v in g.edges]
    cols = [v for u, v in g.edges] + [u for u, v in g.edges]
    data = np.ones(2 * g.m, dtype=np.int8)
    sp = csr_matrix((data, (rows, cols)), shape=(g.n, g.n))
    dist = shortest_path(sp, method="D", unweighted=True)
    return dist.astype(np.int32)


def eccentricities_oracle(g: Graph, cap: int = DEFAULT_MATRIX_CAP) -> list[int]:
    """Ground-truth eccentricities from n BFS runs."""
    dist = distance_matrix(g, cap=cap)
    return [int(x) for x in dist.max(axis=1)]


def median_of(g: Graph, x: int, y: int, z: int,
              dist: Optional[np.ndarray] = None,
              cap: int = DEFAULT_MATRIX_CAP) -> Optional[int]:
    """The unique vertex of I(x,y) & I(y,z) & I(z,x), or None when not unique.

    "Not unique" covers both an empty intersection and several candidates;
    it is a value, not an error.
    """
    if dist is None:
        dist = distance_matrix(g, cap=cap)
    dxy, dyz, dxz = dist[x, y], dist[y, z], dist[x, z]
    dx, dy, dz = dist[x], dist[y], dist[z]
    on = np.flatnonzero((dx + dy == dxy) & (dy + dz == dyz) & (dx + dz == dxz))
    if len(on) == 1:
        return int(on[0])
    return None


@dataclass(frozen=True)
class MedianCheck:
    ok: bool
    violation: Optional[tuple[int, int, int]] = None  # first bad triple, if known


def verify_median(g: Graph, cap: int = DEFAULT_MATRIX_CAP) -> MedianCheck:
    """Exhaustive check that every vertex triple has a unique median.

    Small graphs use the literal triple scan over the distance matrix and
    report the first violating triple.  Larger graphs use an equivalent
    vectorized path: hop distances must agree with basepoint signature
    distances (partial-cube condition), after which a triple has a unique
    median iff the bitwise majority of the three signatures is realized.
    """
    if g.n > cap:
        raise SizeCapError(f"n={g.n} exceeds verification cap {cap}")
    if g.n <= 2:
        return MedianCheck(ok=True)
    if g.n <= _DIRECT_TRIPLE_LIMIT:
        return _verify_median_direct(g, cap)
    return _verify_median_signatures(g, cap)


def _verify_median_direct(g: Graph, cap: int) -> MedianCheck:
    dist = distance_matrix(g, cap=cap)
    n = g.n
    d = dist
    for x in range(n):
        between_x = d[x][:, None] + d == d[x][None, :]  # [v, w] -> v in I(x, w)
        for y in range(x + 1, n):
            col = between_x[:, y]
            for z in range(y + 1, n):
                cnt = int(np.count_nonzero(
                    col & between_x[:, z] & (d[y] + d[:, z] == d[y, z])))
                if cnt != 1:
                    return MedianCheck(ok=False, violation=(x, y, z))
    return MedianCheck(ok=True)


def _verify_median_signatures(g: Graph, cap: int) -> MedianCheck:
    # Basepoint signatures: crossing any edge toggles exactly one bit in a
    # median graph.  First confirm the graph is a partial cube under this
    # labeling, then scan triples for realized majority signatures.
    from . import theta as _theta  # local import to avoid a cycle

    try:
        ts = _theta.compute_theta(g, basepoint=0, validate=True)
    except (GraphStructureError, _theta.ThetaStructureError):
        small = _verify_median_direct(g, cap) if g.n <= 1024 else None
        return small if small is not None else MedianCheck(ok=False)

    dist_ok = True
    sig = ts.sig
    dmat = distance_matrix(g, cap=cap)
    for u in range(g.n):
        su = sig[u]
        row = dmat[u]
        for v in range(u + 1, g.n):
            if (su ^ sig[v]).bit_count() != row[v]:
                dist_ok = False
                break
        if not dist_ok:
            break
    if not dist_ok:
        if g.n <= 1024:
            return _verify_median_direct(g, cap)
        return MedianCheck(ok=False)

    n = g.n
    if ts.q <= 64:
        arr = np.array(sig, dtype=np.uint64)
        realized = np.sort(arr)
        for x in range(n):
            sx = arr[x]
            for y in range(x + 1, n):
                common = sx & arr[y]
                either = sx | arr[y]
                maj = common | (either & arr[y + 1:])
                pos = np.searchsorted(realized, maj)
                pos[pos == n] = n - 1
                bad = np.flatnonzero(realized[pos] != maj)
                if len(bad):
                    return MedianCheck(ok=False, violation=(x, y, y + 1 + int(bad[0])))
        return MedianCheck(ok=True)

    realized_set = set(sig)
    for x in range(n):
        sx = sig[x]
        for y in range(x + 1, n):
            common = sx & sig[y]
            either = sx | sig[y]
            for z in range(y + 1, n):
                if (common | (either & sig[z])) not in realized_set:
                    return MedianCheck(ok=False, violation=(x, y, z))
    return MedianCheck(ok=True)
