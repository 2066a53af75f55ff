"""POF bijection, hypercubes, MOPs, crossing/star graphs, parallel streams."""

from __future__ import annotations

from itertools import combinations

from medianecc.graph import verify_median
from medianecc.theta import compute_theta, mask_members, orient
from medianecc.pof import (build_pof_index, crossing_graph, enumerate_hypercubes,
                           enumerate_mops, iter_minimal_parallel_at,
                           iter_parallel_at, maximal_pofs, minimal_parallel_for,
                           ortho_adjacent_classes, pof_counts_by_size, star_graph)
from medianecc.labels import build_structures
from medianecc.generators import cogwheel, grid, hypercube, mulder_random, \
    random_tree, simplex_of_random

from conftest import FIG4_POF_TABLE, path_graph


def count_squares(g) -> int:
    # independent 4-cycle count: each square contributes two diagonal pairs
    total = 0
    adj = [set(nb) for nb in g.adjacency]
    for u, v in combinations(range(g.n), 2):
        if u in adj[v]:
            continue
        common = len(adj[u] & adj[v])
        total += common * (common - 1) // 2
    return total // 2


def test_fig4_bijection_table(fig4):
    index = build_structures(fig4)
    ts = index.ts
    label_of = {ts.class_of_edge[fig4.edge_id(0, 1)]: "A",
                ts.class_of_edge[fig4.edge_id(0, 2)]: "B",
                ts.class_of_edge[fig4.edge_id(2, 5)]: "C",
                ts.class_of_edge[fig4.edge_id(3, 4)]: "D"}
    for v in range(8):
        got = frozenset(label_of[c] for c in mask_members(index.in_pof(v)))
        assert got == FIG4_POF_TABLE[v], f"vertex {v}"
    assert len(index.vertex_of_pof) == 8


def test_hypercube_pofs_are_all_subsets():
    index = build_structures(hypercube(4))
    assert set(index.vertex_of_pof) == set(range(16))


def test_tree_pofs_are_singletons():
    index = build_structures(random_tree(25, 4))
    sizes = sorted(m.bit_count() for m in index.vertex_of_pof)
    assert sizes == [0] + [1] * 24


def test_hypercube_enumeration_counts():
    # Q2: 4 edges + 1 square; Q3: 12 + 6 + 1; P3: its two edges
    assert len(enumerate_hypercubes(build_structures(hypercube(2)))) == 5
    q3 = hypercube(3)
    assert len(enumerate_hypercubes(build_structures(q3))) == 19
    assert q3.m + count_squares(q3) + 1 == 19
    assert len(enumerate_hypercubes(build_structures(path_graph(3)))) == 2


def test_hypercube_count_formula():
    for g in (hypercube(4), grid(5, 6), cogwheel(7), mulder_random(130, 6)):
        index = build_structures(g)
        cubes = enumerate_hypercubes(index)
        beta = pof_counts_by_size(index)
        assert len(cubes) + g.n == sum((1 << i) * b for i, b in enumerate(beta))
        # dimension <= 2 lets the square oracle recount everything
        if index.dim <= 2:
            assert len(cubes) == g.m + count_squares(g)
        levels = [index.level(c.anti_basis) for c in cubes]
        assert levels == sorted(levels)


def test_maximal_pofs_examples(fig4):
    assert [m.bit_count() for m, _ in maximal_pofs(build_structures(hypercube(3)))] == [3]
    tree = random_tree(20, 0)
    assert len(maximal_pofs(build_structures(tree))) == tree.m

    index = build_structures(fig4)
    got = {mask for mask, _ in maximal_pofs(index)}
    # brute force over all class subsets using the orthogonality relation
    brute = set()
    q = index.q
    for size in range(q + 1):
        for combo in combinations(range(q), size):
            mask = sum(1 << c for c in combo)
            if index.is_pof(mask) and mask in index.vertex_of_pof:
                ext = [e for e in range(q)
                       if not mask >> e & 1 and index.is_pof(mask | 1 << e)]
                if not ext and mask:
                    brute.add(mask)
    assert got == brute
    assert len(got) == 3
    for mask, cube in maximal_pofs(index):
        assert index.in_pof(cube.anti_basis) == mask


def test_crossing_graph_shapes():
    assert crossing_graph(build_structures(hypercube(4))).m == 6  # K4
    tree = build_structures(random_tree(15, 7))
    assert crossing_graph(tree).m == 0
    kc5 = build_structures(cogwheel(5))
    cg = crossing_graph(kc5)
    # crossing graph of K(C5) is C5 again: 5 vertices of degree 2, one cycle
    assert cg.n == 5 and cg.m == 5
    assert all(cg.degree(v) == 2 for v in range(5))


def test_star_graph_examples(fig6):
    g = hypercube(3)
    index = build_structures(g)
    sub, mapping = star_graph(g, index, 0)
    assert sub.n == 8 and sorted(mapping) == list(range(8))
    sub, mapping = star_graph(g, index, 7)  # sink corner
    assert sub.n == 1 and mapping == [7]

    assert verify_median(fig6).ok
    from conftest import FIG6_STAR_VERTICES, FIG6_U, FIG6_V0
    index = build_structures(fig6, basepoint=FIG6_V0)
    sub, mapping = star_graph(fig6, index, FIG6_U)
    assert sub.n == 11
    assert frozenset(mapping) == FIG6_STAR_VERTICES


def brute_force_mops(index):
    out = []
    for u in range(index.n):
        for mask in index.out_pofs_at(u):
            bigger = False
            for e in mask_members(index.ori.out_mask[u]):
                if not mask >> e & 1 and index.is_pof(mask | 1 << e):
                    bigger = True
                    break
            if not bigger:
                out.append((u, mask))
    return out


def test_mops_square_golden():
    index = build_structures(hypercube(2))
    mops = enumerate_mops(index)
    assert len(mops) == 3
    by_basis = {u: mask for u, mask in mops}
    assert by_basis[0].bit_count() == 2
    assert by_basis[1].bit_count() == 1 and by_basis[2].bit_count() == 1


def test_mops_tree_and_hypercube_counts():
    tree = random_tree(30, 5)
    assert len(enumerate_mops(build_structures(tree))) == tree.m
    for d in (2, 3, 4, 5):
        index = build_structures(hypercube(d))
        mops = enumerate_mops(index)
        assert len(mops) == 2 ** d - 1
        assert sorted(mops) == sorted(brute_force_mops(index))


def test_mops_match_brute_force():
    for g in (cogwheel(7), mulder_random(80, 9), simplex_of_random(8, 0.4, 1)):
        index = build_structures(g)
        assert sorted(enumerate_mops(index)) == sorted(brute_force_mops(index))


def test_aligned_classes(fig13b):
    index = build_structures(hypercube(4))
    for mask in index.vertex_of_pof:
        if mask:
            assert index.aligned_classes(mask) == 0

    p3 = build_structures(path_graph(3))
    ts = p3.ts
    first = 1 << ts.class_of_edge[p3.graph.edge_id(0, 1)]
    second = 1 << ts.class_of_edge[p3.graph.edge_id(1, 2)]
    assert p3.aligned_classes(second) == first

    from conftest import FIG13B_E1_EDGE, FIG13B_E3_EDGE, FIG13B_E4_EDGE
    idx = build_structures(fig13b)
    e1 = 1 << idx.ts.class_of_edge[fig13b.edge_id(*FIG13B_E1_EDGE)]
    e3 = 1 << idx.ts.class_of_edge[fig13b.edge_id(*FIG13B_E3_EDGE)]
    e4 = 1 << idx.ts.class_of_edge[fig13b.edge_id(*FIG13B_E4_EDGE)]
    assert idx.is_pof(e1 | e4)
    assert idx.aligned_classes(e1 | e4) & e3


def test_ortho_adjacent_classes():
    q3 = build_structures(hypercube(3))
    table = ortho_adjacent_classes(q3)
    assert table[1] == 0b110  # {E1} extends by E2 or E3
    assert table[0b111] == 0
    # the square example: {E1,E2} gains E3
    assert table[0b011] == 0b100

    tree = build_structures(random_tree(12, 3))
    table = ortho_adjacent_classes(tree)
    assert all(v == 0 for mask, v in table.items() if mask)


def test_aligned_and_ortho_partition_adjacent():
    for g in (cogwheel(6), mulder_random(70, 11)):
        index = build_structures(g)
        table = ortho_adjacent_classes(index)
        for v in range(index.n):
            mask = index.in_pof(v)
            if not mask:
                continue
            adjacent = 0
            for w in range(index.n):
                if mask & index.ori.out_mask[w] == mask:
                    adjacent |= index.ori.in_mask[w]
            adjacent &= ~mask
            assert adjacent == (index.aligned_classes(mask) | table[mask])
            assert index.aligned_classes(mask) & table[mask] == 0


def test_parallel_stream_examples(fig7):
    q4 = build_structures(hypercube(4))
    assert all(not list(iter_parallel_at(q4, w)) for w in range(16))

    p3 = build_structures(path_graph(3))
    ts = p3.ts
    first = 1 << ts.class_of_edge[p3.graph.edge_id(0, 1)]
    second = 1 << ts.class_of_edge[p3.graph.edge_id(1, 2)]
    assert list(iter_parallel_at(p3, 1)) == [(first, second)]

    idx = build_structures(fig7)
    ts = idx.ts
    e2 = ts.class_of_edge[fig7.edge_id(1, 3)]
    e3 = ts.class_of_edge[fig7.edge_id(1, 2)]
    e4 = ts.class_of_edge[fig7.edge_id(3, 11)]
    l_mask = (1 << e2) | (1 << e3)
    anti = idx.anti_basis_of(1, l_mask)
    assert anti == 4
    assert (l_mask, 1 << e4) in set(iter_parallel_at(idx, anti))


def test_minimal_parallel_contained_and_covering():
    for g in (cogwheel(8), mulder_random(60, 12), grid(4, 5)):
        index = build_structures(g)
        for w in range(g.n):
            naive = set(iter_parallel_at(index, w))
            minimal = set(iter_minimal_parallel_at(index, w))
            assert minimal <= naive
            by_lplus: dict[int, list[int]] = {}
            for l_mask, lplus in minimal:
                by_lplus.setdefault(lplus, []).append(l_mask)
            for l_mask, lplus in naive:
                assert any(small & ~l_mask == 0 for small in by_lplus[lplus])
            # minimality: dropping any class must break parallelism
            for l_mask, lplus in minimal:
                for c in mask_members(l_mask):
                    assert (l_mask ^ (1 << c), lplus) not in naive


def test_minimal_parallel_count_bound():
    for g in (mulder_random(90, 13), cogwheel(9), simplex_of_random(9, 0.4, 2)):
        index = build_structures(g)
        bound = 1.7697 ** index.dim
        for w in range(g.n):
            for lplus in index.out_pofs_at(w):
                assert len(minimal_parallel_for(index, w, lplus)) <= bound
