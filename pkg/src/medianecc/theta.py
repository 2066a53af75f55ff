"""Theta-classes of a median graph: construction, halfspaces, orientation.

The class partition is the transitive closure of "opposite edges of some
4-cycle", built with a union-find while scanning squares.  The same scan
records which class pairs are orthogonal (share a square), which the POF
machinery consumes later.

Halfspace membership is stored as one basepoint signature per vertex: bit c
of ``sig[v]`` is set iff v lies on the far side of class c from the
basepoint.  Crossing an edge toggles exactly the bit of its own class; this
is validated for every edge and doubles as a cheap non-median detector.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import Graph, SizeCapError, bfs, distance_matrix, DEFAULT_MATRIX_CAP


class ThetaStructureError(ValueError):
    """The edge partition does not behave like median-graph Theta-classes."""


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, a: int) -> int:
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass
class ThetaStructure:
    """Edge -> class partition plus halfspace data for one basepoint."""

    graph: Graph
    v0: int
    q: int
    class_of_edge: list[int]
    class_edges: list[list[int]]            # edge ids per class
    sig: list[int]                          # per-vertex far-side class bitmask
    dist0: tuple[int, ...]                  # BFS distances from v0
    ortho_pairs: set[tuple[int, int]]       # orthogonal class pairs (a < b)

    def class_size(self, c: int) -> int:
        return len(self.class_edges[c])

    def halfspace_side(self, c: int, v: int) -> bool:
        """True when v is on the basepoint side H' of class c."""
        return not (self.sig[v] >> c) & 1

    def halfspace(self, c: int) -> tuple[list[int], list[int]]:
        """Vertex sets (H', H'') of class c; H' contains the basepoint."""
        near = [v for v in range(self.graph.n) if not (self.sig[v] >> c) & 1]
        far = [v for v in range(self.graph.n) if (self.sig[v] >> c) & 1]
        return near, far

    def boundary(self, c: int) -> tuple[list[int], list[int]]:
        """Boundary vertex sets (dH', dH'') read off the class edges."""
        near, far = [], []
        for eid in self.class_edges[c]:
            u, v = self.graph.edges[eid]
            if (self.sig[u] >> c) & 1:
                u, v = v, u
            near.append(u)
            far.append(v)
        return near, far

    def signature_mask(self, u: int, v: int) -> int:
        return self.sig[u] ^ self.sig[v]

    def separation(self, u: int, v: int) -> int:
        """Number of classes separating u and v (= d(u,v) on median graphs)."""
        return (self.sig[u] ^ self.sig[v]).bit_count()


def signature(ts: ThetaStructure, u: int, v: int) -> tuple[int, ...]:
    """Sorted class ids separating u from v."""
    return mask_members(ts.signature_mask(u, v))


def mask_members(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def compute_theta(g: Graph, basepoint: int = 0, validate: bool = True) -> ThetaStructure:
    """Partition edges into Theta-classes and derive halfspace signatures.

    Raises :class:`ThetaStructureError` when the partition misbehaves
    (a class is not a matching, a halfspace is inconsistent or splits into
    more than one piece) -- all symptoms of a non-median input.
    """
    n, m = g.n, g.m
    uf = _UnionFind(m)
    ortho_edge_pairs: set[tuple[int, int]] = set()
    adjacency = g.adjacency
    eid = g.edge_id

    for u in range(n):
        nbrs = adjacency[u]
        deg = len(nbrs)
        for i in range(deg):
            v = nbrs[i]
            ev = eid(u, v)
            for j in range(i + 1, deg):
                x = nbrs[j]
                # complete square u-v-y-x: y adjacent to both v and x, y != u
                for y in _common_neighbors(adjacency[v], adjacency[x], u):
                    ex = eid(u, x)
                    uf.union(ev, eid(x, y))
                    uf.union(ex, eid(v, y))
                    a, b = (ev, ex) if ev < ex else (ex, ev)
                    ortho_edge_pairs.add((a, b))

    class_of_edge = [-1] * m
    roots: dict[int, int] = {}
    class_edges: list[list[int]] = []
    for e in range(m):
        r = uf.find(e)
        c = roots.get(r)
        if c is None:
            c = len(class_edges)
            roots[r] = c
            class_edges.append([])
        class_of_edge[e] = c
        class_edges[c].append(e)
    q = len(class_edges)

    ortho_pairs: set[tuple[int, int]] = set()
    for e1, e2 in ortho_edge_pairs:
        c1, c2 = class_of_edge[e1], class_of_edge[e2]
        if c1 != c2:
            ortho_pairs.add((c1, c2) if c1 < c2 else (c2, c1))

    row = bfs(g, basepoint)
    dist0 = row.dist
    sig = [0] * n
    order = sorted(range(n), key=lambda v: dist0[v])
    for v in order:
        p = row.parent[v]
        if p >= 0:
            sig[v] = sig[p] ^ (1 << class_of_edge[eid(p, v)])

    ts = ThetaStructure(graph=g, v0=basepoint, q=q, class_of_edge=class_of_edge,
                        class_edges=class_edges, sig=sig, dist0=dist0,
                        ortho_pairs=ortho_pairs)
    if validate:
        _validate(ts)
    return ts


def _common_neighbors(a: tuple[int, ...], b: tuple[int, ...], skip: int):
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        x, y = a[i], b[j]
        if x == y:
            if x != skip:
                yield x
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1


def _validate(ts: ThetaStructure) -> None:
    g = ts.graph
    # each class must be a matching
    for c, eids in enumerate(ts.class_edges):
        seen: set[int] = set()
        for e in eids:
            u, v = g.edges[e]
            if u in seen or v in seen:
                raise ThetaStructureError(
                    f"class {c} is not a matching (vertex shared by two class edges)")
            seen.add(u)
            seen.add(v)
    # every edge toggles exactly its own class bit, and crosses one BFS level
    for e, (u, v) in enumerate(g.edges):
        if abs(ts.dist0[u] - ts.dist0[v]) != 1:
            raise ThetaStructureError("graph is not bipartite under BFS layering")
        if ts.sig[u] ^ ts.sig[v] != 1 << ts.class_of_edge[e]:
            raise ThetaStructureError(
                f"inconsistent halfspace sides across edge {g.edges[e]} "
                "(class deletion would not leave two components)")
    # classes with >= 2 edges: both halfspaces must be connected
    # (single-edge classes are bridges once the edge consistency holds)
    for c, eids in enumerate(ts.class_edges):
        if len(eids) < 2:
            continue
        for side_bit in (0, 1):
            members = [v for v in range(g.n) if (ts.sig[v] >> c) & 1 == side_bit]
            if not members:
                raise ThetaStructureError(f"class {c} has an empty halfspace")
            if not _side_connected(g, ts, c, side_bit, members):
                raise ThetaStructureError(
                    f"halfspace of class {c} is disconnected (not a median graph)")


def _side_connected(g: Graph, ts: ThetaStructure, c: int, side_bit: int,
                    members: list[int]) -> bool:
    target = len(members)
    seen = {members[0]}
    queue = deque([members[0]])
    count = 1
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if w not in seen and (ts.sig[w] >> c) & 1 == side_bit:
                seen.add(w)
                count += 1
                queue.append(w)
    return count == target


def theta_oracle(g: Graph, cap: int = DEFAULT_MATRIX_CAP) -> list[list[int]]:
    """Independent class partition from the Djokovic condition.

    Two edges are equivalent iff they induce the same distance split
    {W(u,v), W(v,u)}; splits are compared wholesale via the distance matrix,
    with no reference to squares or union-find.  Used only to cross-validate
    :func:`compute_theta`.
    """
    if g.n > cap:
        raise SizeCapError(f"n={g.n} exceeds distance matrix cap {cap}")
    dist = distance_matrix(g, cap=cap)
    groups: dict[bytes, list[int]] = {}
    for e, (u, v) in enumerate(g.edges):
        near = dist[:, u] < dist[:, v]
        key_a, key_b = near.tobytes(), (~near).tobytes()
        key = key_a if key_a < key_b else key_b
        groups.setdefault(key, []).append(e)
    return sorted(groups.values(), key=lambda eids: eids[0])


@dataclass
class Orientation:
    """Basepoint orientation: each edge points away from v0."""

    v0: int
    dist: tuple[int, ...]
    head: list[int]                 # farther endpoint per edge
    tail: list[int]
    in_mask: list[int]              # classes of edges entering v
    out_mask: list[int]             # classes of edges leaving v
    incident_mask: list[int]
    cross: list[dict[int, int]]     # cross[v][c] = opposite endpoint of v's c-edge
    q: int

    def in_classes(self, v: int) -> tuple[int, ...]:
        return mask_members(self.in_mask[v])

    def out_classes(self, v: int) -> tuple[int, ...]:
        return mask_members(self.out_mask[v])


def orient(g: Graph, ts: ThetaStructure, v0: Optional[int] = None) -> Orientation:
    """Direct every edge toward its endpoint farther from the basepoint."""
    if v0 is None or v0 == ts.v0:
        v0 = ts.v0
        dist = ts.dist0
    else:
        dist = bfs(g, v0).dist
    n = g.n
    head = [0] * g.m
    tail = [0] * g.m
    in_mask = [0] * n
    out_mask = [0] * n
    incident = [0] * n
    cross: list[dict[int, int]] = [dict() for _ in range(n)]
    for e, (u, v) in enumerate(g.edges):
        du, dv = dist[u], dist[v]
        if du == dv:
            raise ThetaStructureError(
                f"edge {(u, v)} has equidistant endpoints from v0 (not bipartite)")
        if du > dv:
            u, v = v, u
        tail[e], head[e] = u, v
        c = ts.class_of_edge[e]
        bit = 1 << c
        out_mask[u] |= bit
        in_mask[v] |= bit
        incident[u] |= bit
        incident[v] |= bit
        cross[u][c] = v
        cross[v][c] = u
    return Orientation(v0=v0, dist=tuple(dist), head=head, tail=tail,
                       in_mask=in_mask, out_mask=out_mask,
                       incident_mask=incident, cross=cross, q=ts.q)


def dimension(ori: Orientation) -> int:
    """Largest induced hypercube dimension = max in-degree under the orientation."""
    return max((mask.bit_count() for mask in ori.in_mask), default=0)
