"""Ladder, opposite and anti-ladder labelings, and eccentricities from them.

phi(u, L): farthest distance from u among vertices v with u between the
basepoint and v whose ladder set at u is exactly L.  op_u(L): the outgoing
POF disjoint from L with the best phi, obtained by solving weighted
opposites on the star of u.  psi(u, R): farthest distance arriving at u
through the hypercube R from below.  Every eccentricity is the maximum
label centered at the vertex.

Three interchangeable backends fill the phi/psi tables:

* ``naive``   -- relax over every (L, u, L+) parallel triplet;
* ``mop``     -- relax only at maximal outgoing POFs, then push subset
                 maxima through per-vertex Hasse diagrams;
* ``minpar``  -- relax only at minimal ingoing POFs, then spread along
                 inclusion chains.

All three produce identical tables entrywise: updates combine by larger
value then smaller witness id, which makes the result independent of
enumeration order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph import Graph
from .theta import ThetaStructure, compute_theta, mask_members, orient
from .pof import PofIndex, build_pof_index, mops_by_basis, iter_parallel_at, \
    iter_minimal_parallel_at
from .wopp import PofSystem, WoppError, solve_wopp

BACKENDS = ("naive", "mop", "minpar")

_NEG = (-1, -1)  # neutral element for (value, preferred-witness) combining


class LabelsError(ValueError):
    pass


@dataclass
class PhiTable:
    values: dict[tuple[int, int], int]
    witness: dict[tuple[int, int], int]

    def value(self, u: int, mask: int) -> int:
        return self.values[(u, mask)]


@dataclass
class OpTable:
    values: dict[tuple[int, int], int]

    def value(self, u: int, mask: int) -> int:
        return self.values[(u, mask)]


@dataclass
class PsiTable:
    values: dict[tuple[int, int], int]

    def value(self, u: int, mask: int) -> int:
        return self.values[(u, mask)]


@dataclass(frozen=True)
class MilestoneChain:
    vertices: tuple[int, ...]
    ladders: tuple[int, ...]   # ladder mask of each hop, len = len(vertices) - 1

    @property
    def penultimate(self) -> int:
        return self.vertices[-2]

    @property
    def anti_ladder(self) -> int:
        return self.ladders[-1]


def ladder_set(index: PofIndex, u: int, v: int) -> int:
    """Classes separating u from v that have an edge at u (as a mask)."""
    sig = index.ts.sig
    if sig[u] & ~sig[v]:
        raise LabelsError(f"vertex {u} is not between the basepoint and {v}")
    return (sig[u] ^ sig[v]) & index.ori.incident_mask[u]


def milestones(index: PofIndex, u: int, v: int) -> MilestoneChain:
    """Chain of anti-bases of the successive ladder hypercubes from u to v."""
    verts = [u]
    ladders = []
    cur = u
    while cur != v:
        lad = ladder_set(index, cur, v)
        ladders.append(lad)
        cur = index.anti_basis_of(cur, lad)
        verts.append(cur)
    if len(verts) < 2:
        return MilestoneChain(vertices=(u, u), ladders=(0,))
    return MilestoneChain(vertices=tuple(verts), ladders=tuple(ladders))


def _relax(values, witness, key, val, wit) -> None:
    cur = values[key]
    if val > cur or (val == cur and wit < witness[key]):
        values[key] = val
        witness[key] = wit


def _init_phi(index: PofIndex) -> PhiTable:
    values: dict[tuple[int, int], int] = {}
    witness: dict[tuple[int, int], int] = {}
    for u in range(index.n):
        values[(u, 0)] = 0
        witness[(u, 0)] = u
        for mask in index.out_pofs_at(u):
            values[(u, mask)] = mask.bit_count()
            witness[(u, mask)] = index.anti_basis_of(u, mask)
    return PhiTable(values=values, witness=witness)


def compute_phi(index: PofIndex, backend: str = "naive") -> PhiTable:
    if backend == "naive":
        return _phi_naive(index)
    if backend == "mop":
        return _phi_mop(index)
    if backend == "minpar":
        return _phi_minpar(index)
    raise LabelsError(f"unknown backend {backend!r}")


def _phi_naive(index: PofIndex) -> PhiTable:
    phi = _init_phi(index)
    values, witness = phi.values, phi.witness
    for w in index.vertices_by_level(descending=True):
        for l_mask, lplus in iter_parallel_at(index, w):
            u = index.basis_of(w, l_mask)
            _relax(values, witness, (u, l_mask),
                   l_mask.bit_count() + values[(w, lplus)], witness[(w, lplus)])
    return phi


def phi_subset_closure_at(index: PofIndex, phi: PhiTable, w: int
                          ) -> dict[int, tuple[int, int]]:
    """For every outgoing POF S at w: max phi(w, S') over subsets S' of S."""
    closure: dict[int, tuple[int, int]] = {0: (0, w)}
    for mask in sorted(index.out_pofs_at(w), key=lambda m: (m.bit_count(), m)):
        best = (phi.values[(w, mask)], phi.witness[(w, mask)])
        rest = mask
        while rest:
            low = rest & -rest
            rest ^= low
            cand = closure[mask ^ low]
            if cand[0] > best[0] or (cand[0] == best[0] and cand[1] < best[1]):
                best = cand
        closure[mask] = best
    return closure


def _in_subsets_with_context(index: PofIndex, w: int) -> list[tuple[int, int, int]]:
    """(L, basis, allowed) for every nonempty ingoing POF L at w.

    ``allowed`` is the intersection of the orthogonality masks of L's
    classes: an outgoing class e is blocked by L exactly when e is outside
    ``allowed``.
    """
    classes = mask_members(index.ori.in_mask[w])
    out: list[tuple[int, int, int]] = []
    stack = [(0, 0, w, ~0)]
    while stack:
        start, cur, basis, allowed = stack.pop()
        for i in range(start, len(classes)):
            c = classes[i]
            nb = index.ori.cross[basis][c]
            na = allowed & index.ortho[c]
            out.append((cur | (1 << c), nb, na))
            stack.append((i + 1, cur | (1 << c), nb, na))
    return out


def _phi_mop(index: PofIndex) -> PhiTable:
    phi = _init_phi(index)
    values, witness = phi.values, phi.witness
    mops = mops_by_basis(index)
    for w in index.vertices_by_level(descending=True):
        if not mops[w] or not index.ori.in_mask[w]:
            continue
        closure = phi_subset_closure_at(index, phi, w)
        for l_mask, basis, allowed in _in_subsets_with_context(index, w):
            size = l_mask.bit_count()
            for mop_mask in mops[w]:
                lperp = mop_mask & ~allowed
                if not lperp:
                    continue
                val, wit = closure[lperp]
                _relax(values, witness, (basis, l_mask), size + val, wit)
    return phi


def _phi_minpar(index: PofIndex) -> PhiTable:
    phi = _init_phi(index)
    values, witness = phi.values, phi.witness
    for w in index.vertices_by_level(descending=True):
        for l_mask, lplus in iter_minimal_parallel_at(index, w):
            u = index.basis_of(w, l_mask)
            _relax(values, witness, (u, l_mask),
                   l_mask.bit_count() + values[(w, lplus)], witness[(w, lplus)])
        if not index.ori.in_mask[w]:
            continue
        # spread slack over the ingoing-POF inclusion diagram at w
        ctx = _in_subsets_with_context(index, w)
        ctx.sort(key=lambda t: t[0].bit_count())
        slack: dict[int, tuple[int, int]] = {0: (0, w)}
        for l_mask, basis, _allowed in ctx:
            key = (basis, l_mask)
            size = l_mask.bit_count()
            best = (values[key] - size, witness[key])
            rest = l_mask
            while rest:
                low = rest & -rest
                rest ^= low
                cand = slack[l_mask ^ low]
                if cand[0] > best[0] or (cand[0] == best[0] and cand[1] < best[1]):
                    best = cand
            slack[l_mask] = best
            values[key] = size + best[0]
            witness[key] = best[1]
    return phi


def compute_op(index: PofIndex, phi: PhiTable) -> OpTable:
    """Opposite labels by solving WOPP on every star graph.

    The star of u is a simplex graph whose POFs are exactly the POFs
    outgoing from u, so the solver can run on that abstract system directly;
    weights are the phi labels shifted by one to stay positive.
    """
    values: dict[tuple[int, int], int] = {}
    for u in range(index.n):
        pofs = index.out_pofs_at(u, include_empty=True)
        weight = {}
        tiebreak = {}
        dim_u = 0
        for mask in pofs:
            weight[mask] = phi.values[(u, mask)] + 1
            tiebreak[mask] = index.anti_basis_of(u, mask)
            dim_u = max(dim_u, mask.bit_count())
        system = PofSystem(pofs=pofs, weight=weight, tiebreak=tiebreak,
                           ortho=index.ortho, dim=dim_u)
        result = solve_wopp(system)
        for mask in pofs:
            values[(u, mask)] = result.opposites[mask]
    return OpTable(values=values)


def _init_psi(index: PofIndex, phi: PhiTable, op: OpTable
              ) -> dict[tuple[int, int], int]:
    """psi start values: the best continuation through the basis itself.

    Covers both the basepoint base case and the median-at-basis case, which
    share the formula |R| + phi(basis, op_basis(R)).
    """
    values: dict[tuple[int, int], int] = {}
    for w in range(index.n):
        for r_mask, anti, _allowed in _in_subsets_with_context_up(index, w):
            opp = op.values[(w, r_mask)]
            values[(anti, r_mask)] = r_mask.bit_count() + phi.values[(w, opp)]
    return values


def _in_subsets_with_context_up(index: PofIndex, w: int):
    """(R, anti-basis, allowed) for every nonempty POF R outgoing from w."""
    for r_mask in index.out_pofs_at(w):
        yield r_mask, index.anti_basis_of(w, r_mask), None


def compute_psi(index: PofIndex, phi: PhiTable, op: OpTable,
                backend: str = "naive") -> PsiTable:
    if backend not in BACKENDS:
        raise LabelsError(f"unknown backend {backend!r}")
    values = _init_psi(index, phi, op)
    if backend == "naive":
        for w in index.vertices_by_level():
            for r_minus, r_mask in iter_parallel_at(index, w):
                u = index.anti_basis_of(w, r_mask)
                cand = r_mask.bit_count() + values[(w, r_minus)]
                if cand > values[(u, r_mask)]:
                    values[(u, r_mask)] = cand
    elif backend == "minpar":
        for w in index.vertices_by_level():
            sup = _superset_max_psi(index, values, w)
            for r_minus, r_mask in iter_minimal_parallel_at(index, w):
                u = index.anti_basis_of(w, r_mask)
                cand = r_mask.bit_count() + sup[r_minus]
                if cand > values[(u, r_mask)]:
                    values[(u, r_mask)] = cand
    else:  # mop
        mops = mops_by_basis(index)
        for w in index.vertices_by_level():
            if not mops[w] or not index.ori.in_mask[w]:
                continue
            arrivals: dict[int, int] = {}
            for r_minus, _basis, allowed in _in_subsets_with_context(index, w):
                val = values[(w, r_minus)]
                for mop_mask in mops[w]:
                    rperp = mop_mask & ~allowed
                    if rperp and arrivals.get(rperp, -1) < val:
                        arrivals[rperp] = val
            if not arrivals:
                continue
            best = _spread_down_out_lattice(index, w, arrivals)
            for r_mask, val in best.items():
                u = index.anti_basis_of(w, r_mask)
                cand = r_mask.bit_count() + val
                if cand > values[(u, r_mask)]:
                    values[(u, r_mask)] = cand
    return PsiTable(values=values)


def _superset_max_psi(index: PofIndex, values, w: int) -> dict[int, int]:
    """max psi(w, T) over ingoing supersets T of each nonempty ingoing POF."""
    in_mask = index.ori.in_mask[w]
    subsets = [l for l, _b, _a in _in_subsets_with_context(index, w)]
    subsets.sort(key=lambda m: -m.bit_count())
    best: dict[int, int] = {}
    for s in subsets:
        val = max(values[(w, s)], best.get(s, -1))
        best[s] = val
        rest = s
        while rest:
            low = rest & -rest
            rest ^= low
            sub = s ^ low
            if sub and best.get(sub, -1) < val:
                best[sub] = val
    return best


def _spread_down_out_lattice(index: PofIndex, w: int,
                             seeds: dict[int, int]) -> dict[int, int]:
    """max seed over outgoing-POF supersets, pushed down one class at a time."""
    out_pofs = sorted(index.out_pofs_at(w), key=lambda m: -m.bit_count())
    best: dict[int, int] = {}
    for s in out_pofs:
        val = max(seeds.get(s, -1), best.get(s, -1))
        if val < 0:
            continue
        best[s] = val
        rest = s
        while rest:
            low = rest & -rest
            rest ^= low
            sub = s ^ low
            if sub and best.get(sub, -1) < val:
                best[sub] = val
    return best


def ecc_from_labels(index: PofIndex, phi: PhiTable, psi: PsiTable) -> list[int]:
    """ecc(u) = max over phi(u, .) and psi(u, .)."""
    ecc = [0] * index.n
    for (u, _mask), val in phi.values.items():
        if val > ecc[u]:
            ecc[u] = val
    for (u, _mask), val in psi.values.items():
        if val > ecc[u]:
            ecc[u] = val
    return ecc


@dataclass
class LabelSet:
    index: PofIndex
    phi: PhiTable
    op: OpTable
    psi: PsiTable
    backend: str


def compute_labels(index: PofIndex, backend: str = "naive") -> LabelSet:
    phi = compute_phi(index, backend=backend)
    op = compute_op(index, phi)
    psi = compute_psi(index, phi, op, backend=backend)
    return LabelSet(index=index, phi=phi, op=op, psi=psi, backend=backend)


def build_structures(g: Graph, basepoint: int = 0,
                     validate: bool = True) -> PofIndex:
    ts = compute_theta(g, basepoint=basepoint, validate=validate)
    ori = orient(g, ts)
    return build_pof_index(g, ts, ori)


def eccentricities_fpt(g: Graph, backend: str = "naive", basepoint: int = 0,
                       index: Optional[PofIndex] = None) -> list[int]:
    """All eccentricities through the label pipeline with the chosen backend."""
    if index is None:
        index = build_structures(g, basepoint=basepoint)
    labels = compute_labels(index, backend=backend)
    return ecc_from_labels(index, labels.phi, labels.psi)
