"""Pairwise Orthogonal Families and everything hanging off them.

POFs are canonicalized as class bitmasks (ints).  Under a basepoint
orientation every vertex v owns the POF of its ingoing classes, and that
map is a bijection; hypercubes are (anti-basis, signature) pairs where the
signature is a subset of the anti-basis' ingoing POF.

This module also enumerates the two "parallel adjacency" streams consumed
by the label algorithms: the naive stream of all triplets (L, u, L+) where
the outgoing POF L+ is L-parallel at u, and the restricted stream of
minimal such L.  Both are delivered through visitor callbacks so nothing
quadratic in the output needs to stay resident.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .graph import Graph, from_edges
from .theta import Orientation, ThetaStructure, ThetaStructureError, mask_members


@dataclass(frozen=True)
class Hypercube:
    anti_basis: int
    basis: int
    signature: int  # class bitmask, nonempty

    def dim(self) -> int:
        return self.signature.bit_count()


@dataclass
class PofIndex:
    """Vertex <-> POF bijection plus the orthogonality relation."""

    graph: Graph
    ts: ThetaStructure
    ori: Orientation
    ortho: list[int]                 # per class: bitmask of orthogonal classes
    vertex_of_pof: dict[int, int]    # POF mask -> unique vertex with that in-POF
    dim: int

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def q(self) -> int:
        return self.ts.q

    def in_pof(self, v: int) -> int:
        return self.ori.in_mask[v]

    def is_pof(self, mask: int) -> bool:
        rest = mask
        while rest:
            low = rest & -rest
            c = low.bit_length() - 1
            rest ^= low
            if rest & ~self.ortho[c]:
                return False
        return True

    def traverse(self, v: int, mask: int) -> int:
        """Walk from a hypercube vertex across every class of ``mask``."""
        cur = v
        rest = mask
        cross = self.ori.cross
        while rest:
            low = rest & -rest
            cur = cross[cur][low.bit_length() - 1]
            rest ^= low
        return cur

    def anti_basis_of(self, basis: int, mask: int) -> int:
        return self.traverse(basis, mask)

    def basis_of(self, anti_basis: int, mask: int) -> int:
        return self.traverse(anti_basis, mask)

    def level(self, v: int) -> int:
        return self.ori.dist[v]

    def vertices_by_level(self, descending: bool = False) -> list[int]:
        return sorted(range(self.n), key=lambda v: (self.ori.dist[v], v),
                      reverse=descending)

    def out_pofs_at(self, u: int, include_empty: bool = False) -> list[int]:
        """Signatures of the hypercubes based at u (POF subsets of out-classes)."""
        out = [0] if include_empty else []
        self._extend_pofs(self.ori.out_mask[u], 0, ~0, out)
        return out

    def _extend_pofs(self, avail: int, cur: int, allowed: int, sink: list[int]) -> None:
        rest = avail & allowed
        while rest:
            low = rest & -rest
            rest ^= low
            c = low.bit_length() - 1
            nxt = cur | low
            sink.append(nxt)
            # classes above c keep ascending order; orthogonality prunes early
            self._extend_pofs(rest, nxt, allowed & self.ortho[c], sink)

    def cube_vertices(self, basis: int, mask: int) -> Iterator[tuple[int, int]]:
        """All (subset, vertex) pairs of the hypercube (basis, mask)."""
        yield 0, basis
        stack = [(0, basis, mask)]
        while stack:
            sub, vertex, rest = stack.pop()
            r = rest
            while r:
                low = r & -r
                r ^= low
                c = low.bit_length() - 1
                w = self.ori.cross[vertex][c]
                yield sub | low, w
                stack.append((sub | low, w, r))

    def aligned_classes(self, mask: int) -> int:
        """Classes E_i the POF is E_i-aligned to (adjacent but not orthogonal).

        Computed as the in-POF of the basis of the canonical hypercube whose
        anti-basis realizes ``mask``.
        """
        cached = self._aligned_cache.get(mask)
        if cached is None:
            anti = self.vertex_of_pof[mask]
            basis = self.basis_of(anti, mask)
            cached = self.ori.in_mask[basis]
            self._aligned_cache[mask] = cached
        return cached

    @property
    def _aligned_cache(self) -> dict[int, int]:
        cache = self.__dict__.get("_aligned")
        if cache is None:
            cache = {}
            self.__dict__["_aligned"] = cache
        return cache


def build_pof_index(g: Graph, ts: ThetaStructure, ori: Orientation) -> PofIndex:
    """Index the vertex <-> POF bijection; duplicates signal non-median input."""
    ortho = [0] * ts.q
    for a, b in ts.ortho_pairs:
        ortho[a] |= 1 << b
        ortho[b] |= 1 << a
    vertex_of_pof: dict[int, int] = {}
    for v in range(g.n):
        mask = ori.in_mask[v]
        if mask in vertex_of_pof:
            raise ThetaStructureError(
                f"vertices {vertex_of_pof[mask]} and {v} share the in-POF "
                f"{mask_members(mask)} (not a median graph)")
        vertex_of_pof[mask] = v
    dim = max((m.bit_count() for m in ori.in_mask), default=0)
    return PofIndex(graph=g, ts=ts, ori=ori, ortho=ortho,
                    vertex_of_pof=vertex_of_pof, dim=dim)


def enumerate_hypercubes(index: PofIndex) -> list[Hypercube]:
    """All hypercubes of dimension >= 1 as (anti-basis, basis, signature).

    Anti-bases appear by nondecreasing distance from the basepoint, so any
    consumer that processes the list front to back sees a hypercube only
    after every hypercube anchored closer to v0.
    """
    cubes: list[Hypercube] = []
    cross = index.ori.cross
    for v in index.vertices_by_level():
        sink: list[tuple[int, int]] = []
        _expand_with_vertex(cross, index.in_pof(v), 0, v, sink)
        for mask, basis in sink:
            cubes.append(Hypercube(anti_basis=v, basis=basis, signature=mask))
    return cubes


def _expand_with_vertex(cross, avail: int, cur_mask: int, cur_vertex: int,
                        sink: list[tuple[int, int]]) -> None:
    rest = avail
    while rest:
        low = rest & -rest
        rest ^= low
        c = low.bit_length() - 1
        w = cross[cur_vertex][c]
        sink.append((cur_mask | low, w))
        _expand_with_vertex(cross, rest, cur_mask | low, w, sink)


def pof_counts_by_size(index: PofIndex) -> list[int]:
    """beta_i: number of POFs of each cardinality i."""
    beta = [0] * (index.dim + 1)
    for v in range(index.n):
        beta[index.in_pof(v).bit_count()] += 1
    return beta


def maximal_pofs(index: PofIndex) -> list[tuple[int, Hypercube]]:
    """Inclusion-maximal POFs, each with its unique realizing hypercube."""
    out: list[tuple[int, Hypercube]] = []
    for v in range(index.n):
        mask = index.in_pof(v)
        if mask == 0:
            if index.q == 0:
                out.append((0, Hypercube(v, v, 0)))
            continue
        if _extension_candidates(index, mask) == 0:
            basis = index.basis_of(v, mask)
            out.append((mask, Hypercube(anti_basis=v, basis=basis, signature=mask)))
    out.sort(key=lambda t: t[0])
    return out


def _extension_candidates(index: PofIndex, mask: int) -> int:
    allowed = ~0
    rest = mask
    while rest:
        low = rest & -rest
        rest ^= low
        allowed &= index.ortho[low.bit_length() - 1]
    return allowed & ~mask & ((1 << index.q) - 1)


def crossing_graph(index: PofIndex) -> Graph:
    """Graph on class ids with orthogonal pairs adjacent (may be disconnected)."""
    edges = sorted(index.ts.ortho_pairs)
    return from_edges(index.q, edges, require_connected=False)


def star_graph(g: Graph, index: PofIndex, u: int) -> tuple[Graph, list[int]]:
    """Induced subgraph on vertices of hypercubes based at u, plus id mapping.

    The result is a simplex graph with u as its central vertex; its vertices
    are in bijection with the POFs outgoing from u.
    """
    members = {u}
    for mask in index.out_pofs_at(u):
        members.add(index.anti_basis_of(u, mask))
    ordered = sorted(members)
    local = {v: i for i, v in enumerate(ordered)}
    edges = []
    for v in ordered:
        for w in g.adjacency[v]:
            if v < w and w in members:
                edges.append((local[v], local[w]))
    sub = from_edges(len(ordered), edges, require_connected=False)
    return sub, ordered


def enumerate_mops(index: PofIndex) -> list[tuple[int, int]]:
    """All MOPs as (basis vertex, signature mask), nonempty signatures only.

    A pair qualifies when no further outgoing class at the basis can extend
    the signature while keeping it a POF.
    """
    mops: list[tuple[int, int]] = []
    for u in range(index.n):
        for mask in index.out_pofs_at(u):
            if _extension_candidates(index, mask) & index.ori.out_mask[u] & ~mask == 0:
                mops.append((u, mask))
    return mops


def mops_by_basis(index: PofIndex) -> list[list[int]]:
    per: list[list[int]] = [[] for _ in range(index.n)]
    for u, mask in enumerate_mops(index):
        per[u].append(mask)
    return per


def ortho_adjacent_classes(index: PofIndex) -> dict[int, int]:
    """For every POF L+, the classes whose addition stays a POF (as a mask)."""
    acc: dict[int, int] = {index.in_pof(v): 0 for v in range(index.n)}
    for v in range(index.n):
        mask = index.in_pof(v)
        rest = mask
        while rest:
            low = rest & -rest
            rest ^= low
            acc[mask ^ low] = acc.get(mask ^ low, 0) | low
    return acc


def iter_parallel_at(index: PofIndex, w: int) -> Iterator[tuple[int, int]]:
    """(L, L+) pairs at w: L ingoing, L+ outgoing, L+ entirely blocked by L.

    A class e is blocked when some class of L is parallel to it; blocked
    masks shrink to intersections of orthogonality masks, so they update in
    O(1) while walking the subset tree of the in-POF.
    """
    in_mask = index.ori.in_mask[w]
    out_mask = index.ori.out_mask[w]
    if not in_mask or not out_mask:
        return
    classes = mask_members(in_mask)
    stack: list[tuple[int, int, int]] = [(0, 0, ~0)]  # (start idx, L, allowed)
    while stack:
        start, cur, allowed = stack.pop()
        for i in range(start, len(classes)):
            c = classes[i]
            nl = cur | (1 << c)
            nallowed = allowed & index.ortho[c]
            stack.append((i + 1, nl, nallowed))
            blocked = out_mask & ~nallowed
            if blocked:
                sink: list[int] = []
                index._extend_pofs(blocked, 0, ~0, sink)
                for lplus in sink:
                    yield nl, lplus


def parallel_adjacent_naive(index: PofIndex,
                            visit: Callable[[int, int, int], None]) -> None:
    """Stream every triplet (L, u, L+) with L+ being (L, u)-parallel."""
    for w in range(index.n):
        for l_mask, lplus in iter_parallel_at(index, w):
            visit(l_mask, w, lplus)


def minimal_parallel_for(index: PofIndex, w: int, lplus: int) -> list[int]:
    """Minimal ingoing POFs L at w such that L+ is (L, w)-parallel.

    Candidates live inside aligned(L+) & in(w); minimality only needs the
    single-class removals checked because blocking is monotone.
    """
    cand_mask = index.aligned_classes(lplus) & index.ori.in_mask[w]
    if not cand_mask:
        return []
    classes = mask_members(cand_mask)
    k = len(classes)
    ortho = index.ortho
    out: list[int] = []
    for bits in range(1, 1 << k):
        members = [classes[i] for i in range(k) if bits >> i & 1]
        # prefix/suffix products of orthogonality masks over the members
        pre = [~0] * (len(members) + 1)
        for i, c in enumerate(members):
            pre[i + 1] = pre[i] & ortho[c]
        if pre[-1] & lplus:
            continue  # not fully blocked: some class of L+ stays orthogonal
        suf = [~0] * (len(members) + 1)
        for i in range(len(members) - 1, -1, -1):
            suf[i] = suf[i + 1] & ortho[members[i]]
        minimal = True
        for i in range(len(members)):
            if not (pre[i] & suf[i + 1]) & lplus:
                minimal = False  # dropping members[i] still blocks everything
                break
        if minimal:
            out.append(sum(1 << c for c in members))
    return out


def iter_minimal_parallel_at(index: PofIndex, w: int) -> Iterator[tuple[int, int]]:
    for lplus in index.out_pofs_at(w):
        for l_mask in minimal_parallel_for(index, w, lplus):
            yield l_mask, lplus


def minimal_parallel(index: PofIndex,
                     visit: Callable[[int, int, int], None]) -> None:
    """Stream every triplet (L, u, L+) with L+ minimal (L, u)-parallel."""
    for w in range(index.n):
        for l_mask, lplus in iter_minimal_parallel_at(index, w):
            visit(l_mask, w, lplus)
