"""Named fixture graphs and an exhaustive enumerator of small graphs.

The enumerator lists connected directed multigraphs (loops allowed) up to
isomorphism. Canonical forms are found by brute force over vertex
permutations, which is cheap at the sizes used here (at most 5 vertices).
"""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement, permutations
from typing import Iterator, Optional

from .graph import Graph


def rose(n: int) -> Graph:
    """One vertex v with n loops y1..yn."""
    return Graph.build(["v"], [(f"y{i}", "v", "v") for i in range(1, n + 1)])


def infinite_clock(samples: int = 0) -> Graph:
    """Flagged centre v, edge f: v -> w, plus ``samples`` further sample edges."""
    verts = ["v", "w"] + [f"w{i}" for i in range(1, samples + 1)]
    edges = [("f", "v", "w")] + [(f"f{i}", "v", f"w{i}") for i in range(1, samples + 1)]
    return Graph.build(verts, edges, infinite_emitters=["v"])


def line(n: int) -> Graph:
    """v1 -e1-> v2 -> ... -> vn."""
    verts = [f"v{i}" for i in range(1, n + 1)]
    edges = [(f"e{i}", f"v{i}", f"v{i + 1}") for i in range(1, n)]
    return Graph.build(verts, edges)


def loop() -> Graph:
    return Graph.build(["v"], [("x", "v", "v")])


def two_cycle() -> Graph:
    return Graph.build(["v", "w"], [("e", "v", "w"), ("f", "w", "v")])


def finite_clock(k: int) -> Graph:
    """Centre v with k edges f1..fk to sinks w1..wk."""
    verts = ["v"] + [f"w{i}" for i in range(1, k + 1)]
    edges = [(f"f{i}", "v", f"w{i}") for i in range(1, k + 1)]
    return Graph.build(verts, edges)


def isolated_vertex() -> Graph:
    return Graph.build(["u"], [])


FIXTURES = {
    "rose2": lambda: rose(2),
    "rose3": lambda: rose(3),
    "infinite_clock": infinite_clock,
    "line2": lambda: line(2),
    "line3": lambda: line(3),
    "loop": loop,
    "two_cycle": two_cycle,
    "finite_clock2": lambda: finite_clock(2),
    "isolated": isolated_vertex,
}


# -- exhaustive enumeration ----------------------------------------------------------


def _labellings(n: int, inv: list) -> Iterator[tuple[int, ...]]:
    """Relabellings perm (old -> new) under which ``inv`` is nondecreasing.

    ``inv`` is an isomorphism invariant of vertices, so restricting to these
    labellings still yields a canonical form.
    """
    order = sorted(range(n), key=lambda v: inv[v])
    groups, start = [], 0
    for i in range(1, n + 1):
        if i == n or inv[order[i]] != inv[order[start]]:
            groups.append(order[start:i])
            start = i

    def rec(k, acc):
        if k == len(groups):
            perm = [0] * n
            for new, old in enumerate(acc):
                perm[old] = new
            yield tuple(perm)
            return
        for arr in permutations(groups[k]):
            yield from rec(k + 1, acc + list(arr))

    yield from rec(0, [])


def _canonical(n: int, pairs, flags=frozenset(), marked=()) -> tuple:
    """Least relabelling of (edge multiset, flagged vertices, marked edge multiset)."""
    inv = [[0, 0, 0, v in flags, 0, 0] for v in range(n)]
    for a, b in pairs:
        inv[a][0] += 1
        inv[b][1] += 1
        inv[a][2] += a == b
    for a, b in marked:
        inv[a][4] += 1
        inv[b][5] += 1
    inv = [tuple(x) for x in inv]
    best = None
    for perm in _labellings(n, inv):
        key = (tuple(sorted((perm[a], perm[b]) for a, b in pairs)),
               tuple(sorted(perm[v] for v in flags)),
               tuple(sorted((perm[a], perm[b]) for a, b in marked)))
        if best is None or key < best:
            best = key
    return best


def _connected(n: int, pairs) -> bool:
    adj = {i: set() for i in range(n)}
    for a, b in pairs:
        adj[a].add(b)
        adj[b].add(a)
    seen, stack = {0}, [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def _to_graph(n: int, pairs, flags=()) -> Graph:
    verts = [f"v{i}" for i in range(n)]
    edges = [(f"e{j}", f"v{a}", f"v{b}") for j, (a, b) in enumerate(pairs)]
    return Graph.build(verts, edges, infinite_emitters=[f"v{i}" for i in flags])


def _acyclic_pairs(n: int, pairs) -> bool:
    indeg = [0] * n
    for _, b in pairs:
        indeg[b] += 1
    stack = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for a, b in pairs:
            if a == v:
                indeg[b] -= 1
                if indeg[b] == 0:
                    stack.append(b)
    return seen == n


def edge_multisets(max_vertices: int, max_edges: int,
                   acyclic_only: bool = False) -> Iterator[tuple[int, tuple]]:
    """(n, sorted edge pairs) for connected graphs up to isomorphism."""
    for n in range(1, max_vertices + 1):
        if acyclic_only:
            all_pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
        else:
            all_pairs = [(a, b) for a in range(n) for b in range(n)]
        seen = set()
        for m in range(0, max_edges + 1):
            for pairs in combinations_with_replacement(all_pairs, m):
                if not _connected(n, pairs):
                    continue
                if acyclic_only and not _acyclic_pairs(n, pairs):
                    continue
                key = _canonical(n, pairs)
                if key in seen:
                    continue
                seen.add(key)
                yield n, key[0]


def graph_corpus(max_vertices: int = 4, max_edges: int = 5, flags: bool = False,
                 acyclic_only: bool = False) -> list[Graph]:
    """Connected graphs up to isomorphism; with ``flags``, also every one-flag variant."""
    out = []
    for n, pairs in edge_multisets(max_vertices, max_edges, acyclic_only):
        g = _to_graph(n, pairs)
        out.append(g)
        if flags:
            seen = set()
            for v in range(n):
                key = _canonical(n, pairs, frozenset([v]))
                if key not in seen:
                    seen.add(key)
                    out.append(_to_graph(n, pairs, [v]))
    return out


def edge_subsets(g: Graph, min_size: int = 1, max_size: int = 3,
                 up_to_symmetry: bool = True) -> list[tuple[str, ...]]:
    """Edge sets F of g; with ``up_to_symmetry``, one per automorphism orbit."""
    ids = g.edge_ids
    vidx = {v: i for i, v in enumerate(g.vertices)}
    pairs = [(vidx[g.s(e)], vidx[g.r(e)]) for e in ids]
    flags = frozenset(vidx[v] for v in g.infinite_emitters)
    out, seen = [], set()
    for k in range(min_size, min(max_size, len(ids)) + 1):
        for f in combinations(range(len(ids)), k):
            if up_to_symmetry:
                rest = [p for j, p in enumerate(pairs) if j not in f]
                key = _canonical(len(g.vertices), rest, flags, [pairs[j] for j in f])
                if key in seen:
                    continue
                seen.add(key)
            out.append(tuple(ids[j] for j in f))
    return out


def theta_cases(max_vertices: int = 4, max_edges: int = 5,
                max_f: int = 3) -> Iterator[tuple[Graph, tuple[str, ...]]]:
    for g in graph_corpus(max_vertices, max_edges, flags=True):
        for f in edge_subsets(g, 1, max_f):
            yield g, f


def find_fixture(name: str) -> Optional[Graph]:
    make = FIXTURES.get(name)
    return make() if make else None
