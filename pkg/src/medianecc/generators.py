"""Deterministic median-graph instance generators.

Every family is a pure function of (parameters, seed): the same spec yields
a byte-identical edge list.  Randomness comes from ``random.Random(seed)``
(the stdlib Mersenne Twister, stable across platforms), consumed in a fixed
order.

Families: hypercube, grid, tree, cogwheel, simplex-of-random (the simplex
graph of a random base graph), mulder-random (repeated peripheral convex
expansions over random intervals, which preserve medianness exactly), and
cartesian products of the above.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .graph import Graph, from_edges

FAMILIES = ("hypercube", "grid", "tree", "cogwheel", "simplex-of-random",
            "mulder-random", "cartesian-product")


class GenError(ValueError):
    pass


@dataclass(frozen=True)
class GenSpec:
    family: str
    params: tuple[tuple[str, str], ...]  # sorted key/value pairs
    seed: int = 0

    def get(self, key: str, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default

    def label(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.family}:{inner}" if inner else self.family


def make_spec(family: str, seed: int = 0, **params) -> GenSpec:
    return GenSpec(family=family,
                   params=tuple(sorted((k, str(v)) for k, v in params.items())),
                   seed=seed)


def parse_spec(text: str, seed: int = 0) -> GenSpec:
    """Parse ``family:key=val,key=val``; products use ``cartesian-product:A|B``."""
    if ":" in text:
        family, rest = text.split(":", 1)
    else:
        family, rest = text, ""
    family = family.strip()
    if family == "cartesian-product":
        if "|" not in rest:
            raise GenError("cartesian-product needs two sub-specs split by '|'")
        left, right = rest.split("|", 1)
        return make_spec(family, seed=seed, left=left.strip(), right=right.strip())
    if family not in FAMILIES:
        raise GenError(f"unknown family {family!r} (expected one of {FAMILIES})")
    params = {}
    if rest.strip():
        for item in rest.split(","):
            if "=" not in item:
                raise GenError(f"bad parameter {item!r} (expected key=val)")
            k, v = item.split("=", 1)
            params[k.strip()] = v.strip()
    return make_spec(family, seed=seed, **params)


def gen(spec: GenSpec) -> Graph:
    """Generate the median graph described by ``spec``."""
    fam = spec.family
    if fam == "hypercube":
        return hypercube(int(spec.get("d", 3)))
    if fam == "grid":
        return grid(int(spec.get("rows", 4)), int(spec.get("cols", 4)))
    if fam == "tree":
        return random_tree(int(spec.get("n", 10)), spec.seed)
    if fam == "cogwheel":
        return cogwheel(int(spec.get("k", 5)))
    if fam == "simplex-of-random":
        return simplex_of_random(int(spec.get("base", 6)),
                                 float(spec.get("p", 0.5)), spec.seed)
    if fam == "mulder-random":
        return mulder_random(int(spec.get("n", 50)), spec.seed)
    if fam == "cartesian-product":
        left = parse_spec(str(spec.get("left")), seed=spec.seed)
        right = parse_spec(str(spec.get("right")), seed=spec.seed + 1)
        return cartesian_product(gen(left), gen(right))
    raise GenError(f"unknown family {fam!r}")


def hypercube(d: int) -> Graph:
    if d < 0:
        raise GenError("hypercube dimension must be >= 0")
    n = 1 << d
    edges = []
    for v in range(n):
        for b in range(d):
            w = v | (1 << b)
            if w != v:
                edges.append((v, w))
    return from_edges(n, edges)


def grid(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1:
        raise GenError("grid dimensions must be >= 1")
    def vid(r, c):
        return r * cols + c
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return from_edges(rows * cols, edges)


def random_tree(n: int, seed: int) -> Graph:
    if n < 1:
        raise GenError("tree needs n >= 1")
    rng = random.Random(seed)
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    return from_edges(n, edges)


def cogwheel(k: int) -> Graph:
    """Simplex graph of the cycle C_k: a wheel with subdivided rim edges."""
    if k < 4:
        raise GenError("cogwheel needs k >= 4 (C_3 is a clique, not a proper cycle)")
    edges = []
    for i in range(k):
        single = 1 + i
        pair = 1 + k + i            # clique {i, i+1 mod k}
        edges.append((0, single))
        edges.append((single, pair))
        edges.append((1 + (i + 1) % k, pair))
    return from_edges(2 * k + 1, edges)


def enumerate_cliques(n: int, adj: list[set[int]]) -> list[tuple[int, ...]]:
    """All induced cliques of a small graph (including the empty one)."""
    cliques: list[tuple[int, ...]] = [()]
    stack = [((), tuple(range(n)))]
    while stack:
        clique, candidates = stack.pop()
        for i, v in enumerate(candidates):
            ext = clique + (v,)
            cliques.append(ext)
            nxt = tuple(w for w in candidates[i + 1:] if w in adj[v])
            if nxt:
                stack.append((ext, nxt))
    return cliques


def simplex_of_random(base_n: int, p: float, seed: int) -> Graph:
    """K(G) for a seeded Erdos-Renyi base graph G(base_n, p)."""
    if base_n < 1:
        raise GenError("simplex base needs >= 1 vertex")
    if not 0.0 <= p <= 1.0:
        raise GenError("p must lie in [0, 1]")
    rng = random.Random(seed)
    adj: list[set[int]] = [set() for _ in range(base_n)]
    for i in range(base_n):
        for j in range(i + 1, base_n):
            if rng.random() < p:
                adj[i].add(j)
                adj[j].add(i)
    cliques = sorted(enumerate_cliques(base_n, adj), key=lambda c: (len(c), c))
    ids = {c: i for i, c in enumerate(cliques)}
    edges = []
    for c in cliques:
        if not c:
            continue
        cid = ids[c]
        for x in c:
            parent = tuple(y for y in c if y != x)
            edges.append((ids[parent], cid))
    return from_edges(len(cliques), edges)


def mulder_random(target_n: int, seed: int) -> Graph:
    """Grow a median graph by peripheral convex expansions over intervals.

    Each step copies a random interval I(a, b) (intervals are convex in
    median graphs) and matches the copy to the original, which is exactly a
    peripheral case of Mulder's convex expansion and therefore keeps the
    graph median.  Steps that would overshoot the target size are retried
    with fresh endpoints; a singleton interval always fits, so the target is
    reached exactly.
    """
    if target_n < 1:
        raise GenError("mulder-random needs n >= 1")
    rng = random.Random(seed)
    n = 1
    edges: list[tuple[int, int]] = []
    adj: list[list[int]] = [[]]
    attempts = 0
    while n < target_n:
        if attempts > 20:
            a = b = rng.randrange(n)
        else:
            a, b = rng.randrange(n), rng.randrange(n)
        da = _dists(adj, a)
        db = _dists(adj, b)
        dab = da[b]
        interval = [v for v in range(n) if da[v] + db[v] == dab]
        if n + len(interval) > target_n:
            attempts += 1
            continue
        attempts = 0
        copy_of = {v: n + i for i, v in enumerate(interval)}
        inset = set(interval)
        new_edges = [(v, copy_of[v]) for v in interval]
        for v in interval:
            for w in adj[v]:
                if w in inset and v < w:
                    new_edges.append((copy_of[v], copy_of[w]))
        edges.extend(new_edges)
        for _ in interval:
            adj.append([])
        for a_end, b_end in new_edges:
            adj[a_end].append(b_end)
            adj[b_end].append(a_end)
        n += len(interval)
    return from_edges(n, edges)


def _dists(adj: list[list[int]], s: int) -> list[int]:
    dist = [-1] * len(adj)
    dist[s] = 0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def cartesian_product(a: Graph, b: Graph) -> Graph:
    """Cartesian product; median whenever both factors are median."""
    def vid(i, j):
        return i * b.n + j
    edges = []
    for i in range(a.n):
        for (u, v) in b.edges:
            edges.append((vid(i, u), vid(i, v)))
    for (u, v) in a.edges:
        for j in range(b.n):
            edges.append((vid(u, j), vid(v, j)))
    return from_edges(a.n * b.n, edges)
