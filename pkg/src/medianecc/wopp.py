"""Weighted Opposites on simplex POF systems in quasilinear time.

The solver works on an abstract "POF system": the n POF masks of a simplex
graph (or of a star graph, which is the per-vertex use), a positive weight
per POF, and the class orthogonality masks.  It builds a partition
refinement tree over the weight ordering, truncated below layer d, then
answers every opposite query with a two-way dynamic program over
(node, POF) constraint pairs.

Only pairs that genuinely recurse are memoized; pairs whose answer is the
node's own index POF cost O(1) and are never stored.  With that accounting
the number of stored pairs never exceeds d^2 times the number of POFs.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Callable, Optional

from .graph import Graph
from .theta import ThetaStructure, mask_members
from .pof import PofIndex


class WoppError(ValueError):
    pass


@dataclass
class PofSystem:
    """A simplex graph abstracted to its POFs, weights and orthogonality."""

    pofs: list[int]
    weight: dict[int, int]
    tiebreak: dict[int, int]
    ortho: list[int]
    dim: int

    def __post_init__(self) -> None:
        if len(set(self.pofs)) != len(self.pofs):
            raise WoppError("duplicate POF in system")
        for mask in self.pofs:
            if self.weight[mask] <= 0:
                raise WoppError(f"non-positive weight for POF {mask_members(mask)}")

    def is_pof(self, mask: int) -> bool:
        rest = mask
        while rest:
            low = rest & -rest
            c = low.bit_length() - 1
            rest ^= low
            if rest & ~self.ortho[c]:
                return False
        return True


@dataclass
class _Node:
    omega: list[int]
    rplus: int
    rminus: int
    layer: int
    depth: int
    block_root: bool
    split_class: int = -1
    child_plus: int = -1
    child_minus: int = -1
    is_leaf: bool = False

    @property
    def index_pof(self) -> int:
        return self.omega[0]


@dataclass
class RefinementTree:
    system: PofSystem
    nodes: list[_Node]
    order: list[int]          # tau_omega: POFs by decreasing weight
    rank: dict[int, int]
    depth: int

    @property
    def root(self) -> int:
        return 0


def build_refinement_tree(system: PofSystem) -> RefinementTree:
    """Ordered internal partition refinement over the weight ordering.

    Each block refines on the fresh classes of its root's index POF; block
    leaves start the next layer.  Construction stops at layer d (deeper
    nodes are never needed by the DP) and at parts whose index POF equals
    the accumulated positive constraints, where every query is trivially
    answered by the index.
    """
    weight, tiebreak = system.weight, system.tiebreak
    order = sorted(system.pofs, key=lambda m: (-weight[m], tiebreak[m]))
    rank = {m: i for i, m in enumerate(order)}
    nodes: list[_Node] = [_Node(omega=order, rplus=0, rminus=0, layer=0,
                                depth=0, block_root=True)]
    queue = [0]
    max_depth = 0
    while queue:
        b = queue.pop()
        node = nodes[b]
        fresh = node.index_pof & ~node.rplus
        if node.layer >= system.dim or fresh == 0 or len(node.omega) == 1:
            node.is_leaf = True
            continue
        frontier = [b]
        rest = fresh
        while rest:
            low = rest & -rest
            rest ^= low
            c = low.bit_length() - 1
            nxt: list[int] = []
            for a in frontier:
                cur = nodes[a]
                plus = [x for x in cur.omega if x & low]
                minus = [x for x in cur.omega if not x & low]
                cur.split_class = c
                for side, bucket in (("+", plus), ("-", minus)):
                    if not bucket:
                        continue  # defensive: cannot happen on subset-closed systems
                    child = _Node(
                        omega=bucket,
                        rplus=cur.rplus | (low if side == "+" else 0),
                        rminus=cur.rminus | (low if side == "-" else 0),
                        layer=node.layer,
                        depth=cur.depth + 1,
                        block_root=False)
                    cid = len(nodes)
                    nodes.append(child)
                    max_depth = max(max_depth, child.depth)
                    if side == "+":
                        cur.child_plus = cid
                    else:
                        cur.child_minus = cid
                    if len(bucket) == 1:
                        child.is_leaf = True  # part pinned to its constraints
                    else:
                        nxt.append(cid)
            frontier = nxt
        for a in frontier:
            nodes[a].layer = node.layer + 1
            nodes[a].block_root = True
            queue.append(a)
    return RefinementTree(system=system, nodes=nodes, order=order, rank=rank,
                          depth=max_depth)


@dataclass
class WoppResult:
    opposites: dict[int, int]     # POF mask -> opposite POF mask
    weights: dict[int, int]       # POF mask -> weight of that opposite
    memo_size: int


def solve_wopp(system: PofSystem, tree: Optional[RefinementTree] = None,
               validate: bool = False) -> WoppResult:
    """Opposite of every POF via the constraint-pair DP."""
    if tree is None:
        tree = build_refinement_tree(system)
    nodes = tree.nodes
    weight, rank, ortho = system.weight, tree.rank, system.ortho
    memo: dict[tuple[int, int], int] = {}

    limit = 4 * (tree.depth + 8) + 1000
    if sys.getrecursionlimit() < limit:
        sys.setrecursionlimit(limit)

    def better(m1: int, m2: int) -> int:
        w1, w2 = weight[m1], weight[m2]
        if w1 != w2:
            return m1 if w1 > w2 else m2
        return m1 if rank[m1] < rank[m2] else m2

    def h(a: int, x: int) -> int:
        node = nodes[a]
        la = node.index_pof
        if x & la == 0:
            return la                             # Case A, never stored
        if node.is_leaf:
            raise WoppError("DP reached a truncated node with a live constraint")
        key = (a, x)
        res = memo.get(key)
        if res is not None:
            return res
        c = node.split_class
        bit = 1 << c
        if x & bit:                               # Case B
            res = h(node.child_minus, x & ~bit)
        elif not x & ~ortho[c]:                   # Case C: x + c stays a POF
            res = better(h(node.child_minus, x), h(node.child_plus, x))
        else:                                     # Case D
            res = better(h(node.child_minus, x), h(node.child_plus, x & ortho[c]))
        memo[key] = res
        return res

    opposites = {}
    for mask in system.pofs:
        opposites[mask] = h(tree.root, mask)
    n = len(system.pofs)
    if len(memo) > system.dim * system.dim * n:
        raise WoppError(
            f"memo grew to {len(memo)} > d^2*n = {system.dim * system.dim * n}")
    if validate:
        _validate_pairs(tree, memo)
    return WoppResult(
        opposites=opposites,
        weights={m: system.weight[o] for m, o in opposites.items()},
        memo_size=len(memo))


def _validate_pairs(tree: RefinementTree, memo: dict[tuple[int, int], int]) -> None:
    system = tree.system
    for (a, x), _ in memo.items():
        node = tree.nodes[a]
        if x & (node.rplus | node.rminus):
            raise WoppError("constraint pair intersects its node's decided classes")
        if not system.is_pof(x | node.rplus):
            raise WoppError("constraint pair union R+ is not a POF")
        if x.bit_count() > system.dim - node.layer:
            raise WoppError("constraint pair exceeds the layer size bound")
    for node in tree.nodes:
        if not system.is_pof(node.rplus):
            raise WoppError("node R+ is not a POF")


def simplex_central_vertex(ts: ThetaStructure) -> Optional[int]:
    """A vertex meeting every Theta-class, or None when the graph isn't simplex."""
    incident = [0] * ts.graph.n
    for c, eids in enumerate(ts.class_edges):
        bit = 1 << c
        for e in eids:
            u, v = ts.graph.edges[e]
            incident[u] |= bit
            incident[v] |= bit
    for v in range(ts.graph.n):
        if incident[v].bit_count() == ts.q:
            return v
    return None


def system_from_index(index: PofIndex,
                      weight_of: Callable[[int, int], int],
                      ) -> PofSystem:
    """POF system of a whole simplex graph (POFs = vertex in-POFs).

    ``weight_of(vertex, mask)`` supplies the weight; ties in the ordering
    break on the owning vertex id.
    """
    pofs, weight, tiebreak = [], {}, {}
    for v in range(index.n):
        mask = index.in_pof(v)
        pofs.append(mask)
        weight[mask] = weight_of(v, mask)
        tiebreak[mask] = v
    return PofSystem(pofs=pofs, weight=weight, tiebreak=tiebreak,
                     ortho=list(index.ortho), dim=index.dim)


def simplex_eccentricities(g: Graph, ts: ThetaStructure, index: PofIndex) -> list[int]:
    """Exact eccentricities of a simplex graph from one WOPP run.

    Requires the structures to be rooted at a central vertex; then
    ecc(u) = |X_u| + |op(X_u)| for X_u the in-POF of u, with opposites taken
    under cardinality weights (shifted by one to stay positive -- the
    argmax, hence the opposite itself, is unchanged).
    """
    central = simplex_central_vertex(ts)
    if central is None:
        raise WoppError("graph is not simplex: no vertex meets every class")
    if ts.v0 != central:
        raise WoppError(
            f"structures rooted at {ts.v0} but the central vertex is {central}")
    system = system_from_index(index, lambda v, mask: mask.bit_count() + 1)
    result = solve_wopp(system)
    ecc = []
    for v in range(index.n):
        mask = index.in_pof(v)
        ecc.append(mask.bit_count() + result.opposites[mask].bit_count())
    return ecc
