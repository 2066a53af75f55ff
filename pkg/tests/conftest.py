"""Shared fixtures: small reference graphs and independent mini-oracles.

The figure graphs are hand-transcribed adjacency data used for golden
tests; each carries the vertex roles needed by the tests.  The distance
oracle here is a plain Floyd-Warshall, deliberately separate from both the
package BFS and the scipy-backed matrix.
"""

from __future__ import annotations

import pytest

from medianecc.graph import Graph, from_edges


def floyd_distances(g: Graph) -> list[list[int]]:
    inf = 10 ** 9
    d = [[inf] * g.n for _ in range(g.n)]
    for v in range(g.n):
        d[v][v] = 0
    for u, v in g.edges:
        d[u][v] = d[v][u] = 1
    for k in range(g.n):
        dk = d[k]
        for i in range(g.n):
            dik = d[i][k]
            if dik == inf:
                continue
            di = d[i]
            for j in range(g.n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    return d


# 8-vertex example with four classes; vertex roles: v0..v7 as drawn.
# Paper-label classes: A = {01,23,56}, B = {02,13}, C = {25,36,47}, D = {34,67}.
FIG4_EDGES = [(0, 1), (0, 2), (1, 3), (2, 3), (2, 5), (3, 4), (3, 6),
              (4, 7), (5, 6), (6, 7)]
FIG4_CLASS_A = frozenset({(0, 1), (2, 3), (5, 6)})
FIG4_CLASS_B = frozenset({(0, 2), (1, 3)})
FIG4_CLASS_C = frozenset({(2, 5), (3, 6), (4, 7)})
FIG4_CLASS_D = frozenset({(3, 4), (6, 7)})
FIG4_POF_TABLE = {0: frozenset(), 1: frozenset("A"), 2: frozenset("B"),
                  3: frozenset("AB"), 4: frozenset("D"), 5: frozenset("C"),
                  6: frozenset("AC"), 7: frozenset("CD")}
# paper labels: A = E3, B = E1, C = E2, D = E4


@pytest.fixture(scope="session")
def fig4() -> Graph:
    return from_edges(8, FIG4_EDGES)


# 13-vertex ladder-set example; v0=0, u=1, x=8, v=10.
# Classes by paper label: E1..E5 plus the lone (0,1) class.
FIG7_EDGES = [(0, 1),
              (1, 2), (3, 4), (5, 6), (7, 8), (11, 12),        # E3
              (1, 3), (2, 4), (5, 7), (6, 8),                  # E2
              (1, 5), (2, 6), (3, 7), (4, 8),                  # E1
              (4, 9), (10, 12),                                # E5
              (3, 11), (4, 12), (9, 10)]                       # E4
FIG7_V0, FIG7_U, FIG7_X, FIG7_V = 0, 1, 8, 10


@pytest.fixture(scope="session")
def fig7() -> Graph:
    return from_edges(13, FIG7_EDGES)


# 19-vertex milestone example; v0=0, u=3, v=18; milestones 3, 9, 12, 18.
FIG9_EDGES = [(0, 1), (0, 3), (1, 4), (3, 4), (3, 8), (4, 9), (8, 9),
              (4, 5), (5, 10), (9, 10), (4, 6), (5, 7), (6, 7), (2, 7),
              (8, 11), (9, 12), (11, 12), (11, 13), (12, 14), (13, 14),
              (11, 15), (12, 16), (13, 17), (14, 18), (15, 16), (15, 17),
              (16, 18), (17, 18)]
FIG9_V0, FIG9_U, FIG9_V = 0, 3, 18
FIG9_MILESTONES = (3, 9, 12, 18)
FIG9_ANTI_LADDER_EDGES = ((12, 14), (12, 16))


@pytest.fixture(scope="session")
def fig9() -> Graph:
    return from_edges(19, FIG9_EDGES)


# 21-vertex star-graph example; u = 0, basepoint = 17.  The star of u is
# the 11-vertex subgraph {0,1,2,3,4,5,6,7,8,9,12}.
FIG6_EDGES = [(0, 1), (0, 2), (1, 3), (2, 3), (0, 4), (1, 5), (2, 6),
              (3, 7), (4, 5), (4, 6), (5, 7), (6, 7), (0, 8), (4, 9),
              (8, 9), (10, 0), (11, 8), (10, 11), (0, 12), (12, 13),
              (13, 14), (15, 0), (16, 8), (17, 10), (18, 11), (19, 4),
              (20, 9), (17, 15), (15, 16), (18, 16), (17, 18), (15, 19),
              (16, 20), (19, 20)]
FIG6_U, FIG6_V0 = 0, 17
FIG6_STAR_VERTICES = frozenset({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 12})


@pytest.fixture(scope="session")
def fig6() -> Graph:
    return from_edges(21, FIG6_EDGES)


# 8-vertex aligned/orthogonal example (same shape as fig4); v0 = 0.
# Paper labels: E3 = {01,23,67}, E2 = {02,13}, E1 = {14,75}, E4 = {06,17,45}.
FIG13B_EDGES = [(0, 1), (2, 3), (6, 7),
                (0, 2), (1, 3),
                (1, 4), (7, 5),
                (0, 6), (1, 7), (4, 5)]
FIG13B_E1_EDGE, FIG13B_E3_EDGE, FIG13B_E4_EDGE = (1, 4), (0, 1), (0, 6)


@pytest.fixture(scope="session")
def fig13b() -> Graph:
    return from_edges(8, FIG13B_EDGES)


# 9-vertex splitting example: two classes of size 3 reach threshold D=3.
FIG12_EDGES = [(0, 1), (0, 2), (1, 3), (2, 3), (2, 5), (3, 6), (5, 6),
               (3, 4), (4, 7), (6, 7), (7, 8)]


@pytest.fixture(scope="session")
def fig12() -> Graph:
    return from_edges(9, FIG12_EDGES)


def path_graph(n: int) -> Graph:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def k23_graph() -> Graph:
    return from_edges(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])
