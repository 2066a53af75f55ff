"""Reach centralities: cubic oracle and the label-driven computation.

RC(u) is the largest min(d(s,u), d(u,t)) over pairs s,t whose interval
contains u.  The fast path derives it from the phi / op / psi tables with
four update families.  Each update is certified by an explicit witness
pair whose separating-class sets are disjoint, so it never overshoots;
families are max-merged, hence order-independent:

* anchored spans: at a vertex m, two disjoint outgoing POFs L1, L2 have
  witnesses on opposite sides of m; ascending part of L1 and part of L2
  from m stays between them, trading distance from one witness for the
  other.
* witness sweeps: the full interval between the witnesses of (m, L) and
  (m, op_m(L)) is between a valid pair, and both distances are signature
  popcounts.
* mixed spans: for L outgoing and R ingoing at w with L entirely blocked
  by R, the phi and psi witnesses straddle w; vertices reached by
  ascending part of L while descending part of R stay between them.
* descent medians: phi(u, L) pairs with the best opposite anchored at any
  vertex m below u, constrained by the ladder of the phi-witness at m.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .graph import Graph, distance_matrix, DEFAULT_MATRIX_CAP
from .theta import mask_members
from .pof import PofIndex, iter_parallel_at
from .labels import PhiTable, OpTable, PsiTable, compute_labels, build_structures


def reach_oracle(g: Graph, cap: int = DEFAULT_MATRIX_CAP) -> list[int]:
    """RC by scanning all (s, t) pairs per vertex on the distance matrix."""
    dist = distance_matrix(g, cap=cap)
    n = g.n
    rc = [0] * n
    for u in range(n):
        du = dist[:, u]
        through = du[:, None] + du[None, :] == dist
        closer = np.minimum(du[:, None], du[None, :])
        vals = closer[through]
        if len(vals):
            rc[u] = int(vals.max())
    return rc


def compute_reach(index: PofIndex, phi: PhiTable, op: OpTable, psi: PsiTable,
                  trace: Optional[list] = None) -> list[int]:
    """All reach centralities from the phi/op/psi tables."""
    n = index.n
    chi = [0] * n
    sig = index.ts.sig
    phiv, phiw, opv, psiv = phi.values, phi.witness, op.values, psi.values
    adjacency = index.graph.adjacency

    def bump(step: str, vertex: int, value: int) -> None:
        if value > chi[vertex]:
            chi[vertex] = value
            if trace is not None:
                trace.append((step, vertex, value))

    for m in range(n):
        out_pofs = index.out_pofs_at(m)
        if not out_pofs:
            continue
        out_mask = index.ori.out_mask[m]
        for l1 in out_pofs:
            phi1 = phiv[(m, l1)]

            # witness sweep against the opposite branch
            opp = opv[(m, l1)]
            s1, s2 = sig[phiw[(m, l1)]], sig[phiw[(m, opp)]]
            seen = {m}
            stack = [m]
            while stack:
                x = stack.pop()
                sx = sig[x]
                bump("sweep", x, min((sx ^ s1).bit_count(), (sx ^ s2).bit_count()))
                for w in adjacency[x]:
                    if w not in seen and (sig[w] ^ s1) & (sig[w] ^ s2) == 0:
                        seen.add(w)
                        stack.append(w)

            # anchored spans against every disjoint branch
            partners: list[int] = []
            index._extend_pofs(out_mask & ~l1, 0, ~0, partners)
            for l2 in partners:
                phi2 = phiv[(m, l2)]
                for p, q, vertex in _span_vertices(index, m, l1, l2):
                    bump("span", vertex, min(phi1 - p + q, phi2 - q + p))

    # mixed spans over parallel (R, L) pairs at w
    for w in range(n):
        for r_mask, l_mask in iter_parallel_at(index, w):
            phi_l = phiv[(w, l_mask)]
            psi_r = psiv[(w, r_mask)]
            for p, q, vertex in _span_vertices(index, w, l_mask, r_mask):
                bump("mixed", vertex, min(phi_l - p + q, psi_r - q + p))

    # descent medians
    incident = index.ori.incident_mask
    for u in range(n):
        out_pofs = index.out_pofs_at(u)
        if not out_pofs:
            continue
        below = _downset(index, u)
        if len(below) <= 1:
            continue
        su = sig[u]
        for l_mask in out_pofs:
            phi_l = phiv[(u, l_mask)]
            if phi_l <= chi[u]:
                continue
            smu = sig[phiw[(u, l_mask)]]
            for m in below:
                if m == u:
                    continue
                lad = (sig[m] ^ smu) & incident[m]
                partner = opv[(m, lad)]
                val = min(phi_l,
                          (su ^ sig[m]).bit_count() + phiv[(m, partner)])
                bump("descent", u, val)

    # median pairs: for p, r below u with disjoint descents (and at least one
    # parallel class pair, otherwise the span family already covered it),
    # pair the phi witnesses above p and above r directly; the signature
    # test certifies u between them.
    witness_pool: dict[int, list[tuple[int, int]]] = {}
    for u in range(n):
        below = _downset(index, u)
        if len(below) <= 2:
            continue
        su = sig[u]
        cands = []
        for p in below:
            pool = witness_pool.get(p)
            if pool is None:
                pool = [(sig[phiw[(p, l)]], phiv[(p, l)])
                        for l in index.out_pofs_at(p, include_empty=True)]
                witness_pool[p] = pool
            cands.append((su ^ sig[p], pool))
        for i in range(len(cands)):
            down1, pool1 = cands[i]
            for j in range(len(cands)):
                if i == j:
                    continue
                down2, pool2 = cands[j]
                if down1 & down2:
                    continue
                if _is_pof_mask(index, down1 | down2):
                    continue  # span family handles orthogonal descents
                for s1, _f1 in pool1:
                    a = su ^ s1
                    va = a.bit_count()
                    if va <= chi[u]:
                        continue
                    for s2, _f2 in pool2:
                        if a & (su ^ s2):
                            continue
                        bump("median-pair", u, min(va, (su ^ s2).bit_count()))
    return chi


def _is_pof_mask(index: PofIndex, mask: int) -> bool:
    rest = mask
    while rest:
        low = rest & -rest
        c = low.bit_length() - 1
        rest ^= low
        if rest & ~index.ortho[c]:
            return False
    return True


def _span_vertices(index: PofIndex, base: int, first: int, second: int):
    """(p, q, vertex) for subsets P of ``first`` and Q of ``second``.

    P | Q must stay a POF so the walked vertex exists; the walk crosses one
    class per step (ascending or descending as the edge lies), so it covers
    exactly the cube spanned at ``base`` by the chosen classes.
    """
    cross = index.ori.cross
    ortho = index.ortho
    combo = mask_members(first | second)
    k = len(combo)
    stack = [(0, 0, 0, base, ~0)]
    while stack:
        start, p, q, vertex, allowed = stack.pop()
        yield p, q, vertex
        for i in range(start, k):
            c = combo[i]
            bit = 1 << c
            if not allowed & bit:
                continue
            nxt = cross[vertex][c]
            if bit & first:
                stack.append((i + 1, p + 1, q, nxt, allowed & ortho[c]))
            else:
                stack.append((i + 1, p, q + 1, nxt, allowed & ortho[c]))


def _downset(index: PofIndex, u: int) -> list[int]:
    """Vertices of I(v0, u): connected, signatures below sig[u]."""
    sig = index.ts.sig
    su = sig[u]
    seen = {u}
    members = [u]
    for x in members:
        for w in index.graph.adjacency[x]:
            if w not in seen and sig[w] & ~su == 0:
                seen.add(w)
                members.append(w)
    return members


def reach_fpt(g: Graph, basepoint: int = 0) -> list[int]:
    """Convenience pipeline: structures, labels, then reach centralities."""
    index = build_structures(g, basepoint=basepoint)
    labels = compute_labels(index, backend="naive")
    return compute_reach(index, labels.phi, labels.op, labels.psi)
