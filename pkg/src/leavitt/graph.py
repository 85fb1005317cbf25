"""Directed graphs with infinite-emitter flags, and the finite graph E_F.

A :class:`Graph` is immutable. Vertices flagged as infinite emitters may
carry a finite sample of their outgoing edges; the flag records that more
edges exist than are materialized, so such a vertex is never regular.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence


class GraphError(ValueError):
    """Raised for malformed graphs or queries outside a graph's domain."""


class Edge(NamedTuple):
    id: str
    src: str
    dst: str


@dataclass(frozen=True)
class Path:
    """A path ``e_1 ... e_n``; when ``edges`` is empty it is the vertex ``base``."""

    edges: tuple[str, ...]
    base: str

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True, eq=False)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    infinite_emitters: frozenset[str] = frozenset()
    _src: dict = field(init=False, repr=False)
    _dst: dict = field(init=False, repr=False)
    _out: dict = field(init=False, repr=False)
    _in: dict = field(init=False, repr=False)
    # memo for the rewriting engine; not part of the value
    _nf_cache: dict = field(init=False, repr=False)

    def __post_init__(self):
        verts = tuple(sorted(set(self.vertices)))
        if len(verts) != len(self.vertices):
            raise GraphError("duplicate vertex id")
        edges = tuple(sorted((Edge(*e) for e in self.edges), key=lambda e: e.id))
        vset = set(verts)
        src, dst = {}, {}
        out: dict[str, list[str]] = {v: [] for v in verts}
        inc: dict[str, list[str]] = {v: [] for v in verts}
        for e in edges:
            if e.id in src:
                raise GraphError(f"duplicate edge id {e.id!r}")
            if e.id in vset:
                raise GraphError(f"id {e.id!r} used for both a vertex and an edge")
            if e.src not in vset or e.dst not in vset:
                raise GraphError(f"edge {e.id!r} has an undeclared endpoint")
            src[e.id] = e.src
            dst[e.id] = e.dst
            out[e.src].append(e.id)
            inc[e.dst].append(e.id)
        flags = frozenset(self.infinite_emitters)
        if not flags <= vset:
            raise GraphError("infinite-emitter flag on an undeclared vertex")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "infinite_emitters", flags)
        object.__setattr__(self, "_src", src)
        object.__setattr__(self, "_dst", dst)
        object.__setattr__(self, "_out", {v: tuple(es) for v, es in out.items()})
        object.__setattr__(self, "_in", {v: tuple(es) for v, es in inc.items()})
        object.__setattr__(self, "_nf_cache", {})

    def _key(self):
        return (self.vertices, self.edges, tuple(sorted(self.infinite_emitters)))

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return isinstance(other, Graph) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]],
              infinite_emitters: Iterable[str] = ()) -> "Graph":
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges), frozenset(infinite_emitters))

    # -- basic structure ---------------------------------------------------

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def has_vertex(self, v: str) -> bool:
        return v in self._out

    def has_edge(self, e: str) -> bool:
        return e in self._src

    def s(self, e: str) -> str:
        try:
            return self._src[e]
        except KeyError:
            raise GraphError(f"unknown edge {e!r}") from None

    def r(self, e: str) -> str:
        try:
            return self._dst[e]
        except KeyError:
            raise GraphError(f"unknown edge {e!r}") from None

    def out_edges(self, v: str) -> tuple[str, ...]:
        """Materialized edges emitted by ``v``, sorted by id."""
        try:
            return self._out[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def in_edges(self, v: str) -> tuple[str, ...]:
        try:
            return self._in[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def is_infinite_emitter(self, v: str) -> bool:
        return v in self.infinite_emitters

    def is_regular(self, v: str) -> bool:
        """True iff ``v`` emits a finite, nonzero number of edges."""
        out = self.out_edges(v)
        return bool(out) and v not in self.infinite_emitters

    def is_sink(self, v: str) -> bool:
        return not self.out_edges(v) and v not in self.infinite_emitters

    def sinks(self) -> list[str]:
        return [v for v in self.vertices if self.is_sink(v)]

    def regular_vertices(self) -> list[str]:
        return [v for v in self.vertices if self.is_regular(v)]

    def special_edge(self, v: str) -> Optional[str]:
        """The edge used by the CK2 rewrite at ``v``: the least edge id, or None."""
        if not self.is_regular(v):
            return None
        return self._out[v][0]

    def special_edge_choice(self) -> dict[str, str]:
        return {v: self._out[v][0] for v in self.regular_vertices()}

    def is_finite_acyclic_regular(self) -> bool:
        return not self.infinite_emitters and find_cycle(self) is None

    # -- paths ---------------------------------------------------------------

    def path_ok(self, edges: Sequence[str]) -> bool:
        for a, b in zip(edges, edges[1:]):
            if self._dst[a] != self._src[b]:
                return False
        return True

    def path(self, edges: Sequence[str], base: Optional[str] = None) -> Path:
        edges = tuple(edges)
        for e in edges:
            if e not in self._src:
                raise GraphError(f"unknown edge {e!r}")
        if not self.path_ok(edges):
            raise GraphError(f"edges {edges!r} do not form a path")
        if edges:
            base = self._src[edges[0]]
        elif base is None or base not in self._out:
            raise GraphError("a length-0 path needs a known base vertex")
        return Path(edges, base)

    def source(self, p: Path) -> str:
        return self._src[p.edges[0]] if p.edges else p.base

    def range(self, p: Path) -> str:
        return self._dst[p.edges[-1]] if p.edges else p.base

    def is_cycle(self, p: Path) -> bool:
        if not p.edges or not self.path_ok(p.edges):
            return False
        sources = [self._src[e] for e in p.edges]
        return self.source(p) == self.range(p) and len(set(sources)) == len(sources)

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v, "infinite_emitter": v in self.infinite_emitters}
                         for v in self.vertices],
            "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in self.edges],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Graph":
        _check_keys(data, {"vertices", "edges"}, {"vertices", "edges"}, "graph")
        verts, flags, edges = [], [], []
        for item in data["vertices"]:
            _check_keys(item, {"id", "infinite_emitter"}, {"id"}, "vertex")
            verts.append(str(item["id"]))
            if item.get("infinite_emitter", False):
                flags.append(str(item["id"]))
        for item in data["edges"]:
            _check_keys(item, {"id", "src", "dst"}, {"id", "src", "dst"}, "edge")
            edges.append((str(item["id"]), str(item["src"]), str(item["dst"])))
        return cls.build(verts, edges, flags)

    @classmethod
    def load(cls, path) -> "Graph":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def _check_keys(obj, allowed: set, required: set, what: str) -> None:
    if not isinstance(obj, Mapping):
        raise GraphError(f"{what} entry must be an object")
    unknown = set(obj) - allowed
    if unknown:
        raise GraphError(f"unknown key(s) in {what}: {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise GraphError(f"missing key(s) in {what}: {sorted(missing)}")


# -- cycles and paths ----------------------------------------------------------


def is_acyclic(g: Graph) -> bool:
    indeg = {v: 0 for v in g.vertices}
    for e in g.edges:
        indeg[e.dst] += 1
    queue = deque(v for v in g.vertices if indeg[v] == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for e in g.out_edges(v):
            w = g.r(e)
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == len(g.vertices)


def find_cycle(g: Graph) -> Optional[Path]:
    """Least cycle under (length, edge-id sequence), or None if ``g`` is acyclic.

    A cycle is a closed path whose edges have pairwise distinct sources, so
    its length is at most the number of vertices.
    """
    if is_acyclic(g):
        return None
    # dist[v][u]: shortest number of edges from v to u
    dist = {v: _bfs_dist(g, v) for v in g.vertices}
    for length in range(1, len(g.vertices) + 1):
        for first in g.edge_ids:
            start = g.s(first)
            found = _extend_cycle(g, [first], {start}, start, length, dist)
            if found is not None:
                return Path(tuple(found), start)
    return None


def _bfs_dist(g: Graph, v: str) -> dict[str, int]:
    dist = {v: 0}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        for e in g.out_edges(x):
            y = g.r(e)
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def _extend_cycle(g, edges, used_sources, start, length, dist):
    here = g.r(edges[-1])
    if len(edges) == length:
        return list(edges) if here == start else None
    if here == start or here in used_sources:
        return None
    remaining = length - len(edges)
    if dist[here].get(start, remaining + 1) > remaining:
        return None
    used_sources.add(here)
    try:
        for e in g.out_edges(here):
            edges.append(e)
            found = _extend_cycle(g, edges, used_sources, start, length, dist)
            edges.pop()
            if found is not None:
                return found
    finally:
        used_sources.discard(here)
    return None


def _path_sort_key(p: Path):
    return (len(p.edges), p.edges)


def paths_to(g: Graph, v: str) -> list[Path]:
    """All paths ending at ``v`` (including the vertex itself), sorted by (length, ids)."""
    if not g.has_vertex(v):
        raise GraphError(f"unknown vertex {v!r}")
    if not is_acyclic(g):
        raise GraphError("paths_to needs an acyclic graph: the path set would be infinite")
    result = [Path((), v)]
    frontier = [()]
    while frontier:
        nxt = []
        for tail in frontier:
            head = g.s(tail[0]) if tail else v
            for e in g.in_edges(head):
                p = (e,) + tail
                nxt.append(p)
                result.append(Path(p, g.s(e)))
        frontier = nxt
    result.sort(key=_path_sort_key)
    return result


def paths_from(g: Graph, v: str, max_length: int) -> list[tuple[str, ...]]:
    """Edge sequences starting at ``v`` of length at most ``max_length`` (the empty one included)."""
    result = [()]
    frontier = [()]
    for _ in range(max_length):
        nxt = []
        for p in frontier:
            head = g.r(p[-1]) if p else v
            for e in g.out_edges(head):
                nxt.append(p + (e,))
        result.extend(nxt)
        frontier = nxt
    return result


def paths_ending_at(g: Graph, v: str, max_length: int) -> list[tuple[str, ...]]:
    result = [()]
    frontier = [()]
    for _ in range(max_length):
        nxt = []
        for p in frontier:
            head = g.s(p[0]) if p else v
            for e in g.in_edges(head):
                nxt.append((e,) + p)
        result.extend(nxt)
        frontier = nxt
    return result


# -- the finite graph E_F -------------------------------------------------------


class VertexKind(str, Enum):
    EDGE = "edge"            # e in F
    BOUNDARY = "boundary"    # v in r(F) & s(F) & s(E^1 \ F)
    TERMINAL = "terminal"    # v in r(F) \ s(F)


class EdgeKind(str, Enum):
    INTO_F = "into_f"            # (e, f) with f in F
    INTO_BOUNDARY = "into_boundary"
    INTO_TERMINAL = "into_terminal"


@dataclass(frozen=True)
class VertexProvenance:
    kind: VertexKind
    origin: str          # the edge e of E (EDGE) or the vertex v of E


@dataclass(frozen=True)
class EdgeProvenance:
    edge: str            # e in F
    target: str          # E_F vertex id x with r(e) = s(x)
    kind: EdgeKind


@dataclass(frozen=True)
class EFGraph:
    underlying: Graph
    vertex_provenance: Mapping[str, VertexProvenance]
    edge_provenance: Mapping[str, EdgeProvenance]
    f_set: tuple[str, ...]

    def to_json(self) -> dict:
        data = self.underlying.to_json()
        for item in data["vertices"]:
            prov = self.vertex_provenance[item["id"]]
            item["provenance"] = {"kind": prov.kind.value, "origin": prov.origin}
        for item in data["edges"]:
            prov = self.edge_provenance[item["id"]]
            item["provenance"] = {"kind": prov.kind.value, "edge": prov.edge,
                                  "target": prov.target}
        data["f_set"] = list(self.f_set)
        return data


def ef_edge_id(e: str, x: str) -> str:
    return f"({e},{x})"


def s_of_f(g: Graph, f_set: Iterable[str]) -> set[str]:
    return {g.s(e) for e in f_set}


def r_of_f(g: Graph, f_set: Iterable[str]) -> set[str]:
    return {g.r(e) for e in f_set}


def emits_outside(g: Graph, v: str, f_set: frozenset[str]) -> bool:
    """v in s(E^1 \\ F); a flagged infinite emitter always qualifies."""
    if v in g.infinite_emitters:
        return True
    return any(e not in f_set for e in g.out_edges(v))


def _check_f_set(g: Graph, f_set: Iterable[str]) -> frozenset[str]:
    fs = frozenset(f_set)
    if not fs:
        raise GraphError("F must be a nonempty set of edges")
    unknown = sorted(e for e in fs if not g.has_edge(e))
    if unknown:
        raise GraphError(f"edges not in the graph: {unknown}")
    return fs


def classify_ef_vertices(g: Graph, f_set: Iterable[str]) -> dict[str, VertexProvenance]:
    fs = _check_f_set(g, f_set)
    rF, sF = r_of_f(g, fs), s_of_f(g, fs)
    prov = {e: VertexProvenance(VertexKind.EDGE, e) for e in sorted(fs)}
    for v in sorted(rF):
        if v in sF:
            if emits_outside(g, v, fs):
                prov[v] = VertexProvenance(VertexKind.BOUNDARY, v)
        else:
            prov[v] = VertexProvenance(VertexKind.TERMINAL, v)
    return prov


def build_ef(g: Graph, f_set: Iterable[str]) -> EFGraph:
    """The finite graph E_F attached to a finite edge set F."""
    fs = _check_f_set(g, f_set)
    vprov = classify_ef_vertices(g, fs)

    def s_ef(x: str) -> str:
        # s(v) = v for vertex-typed E_F vertices
        return g.s(x) if vprov[x].kind is VertexKind.EDGE else x

    edges, eprov = [], {}
    for e in sorted(fs):
        for x in vprov:
            if g.r(e) != s_ef(x):
                continue
            kind = {VertexKind.EDGE: EdgeKind.INTO_F,
                    VertexKind.BOUNDARY: EdgeKind.INTO_BOUNDARY,
                    VertexKind.TERMINAL: EdgeKind.INTO_TERMINAL}[vprov[x].kind]
            hid = ef_edge_id(e, x)
            edges.append((hid, e, x))
            eprov[hid] = EdgeProvenance(e, x, kind)
    under = Graph.build(vprov.keys(), edges)
    return EFGraph(under, dict(sorted(vprov.items())), dict(sorted(eprov.items())),
                   tuple(sorted(fs)))
