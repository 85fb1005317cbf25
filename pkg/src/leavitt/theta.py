"""The homomorphism theta: L_K(E_F) -> L_K(E) and machine checks of its properties.

Generator images (F a finite edge set):

    vertex e in F                          -> e e*
    boundary vertex v                      -> v - sum_{f in F, s(f)=v} f f*
    terminal vertex v in r(F) \\ s(F)       -> v
    edge (e, f), f in F                    -> e f f*
    edge (e, v), v boundary                -> e - sum_{f in F, s(f)=r(e)} e f f*
    edge (e, v), v terminal                -> e

Ghost edges map to the involution of the edge image.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .algebra import Element
from .fields import QQ, Field
from .graph import EdgeKind, EFGraph, Graph, VertexKind, build_ef
from .linalg import SpanBasis


@dataclass(frozen=True)
class ThetaMap:
    graph: Graph
    field: Field
    ef: EFGraph
    vertex_images: dict            # E_F vertex id -> Element of L_K(E)
    edge_images: dict              # E_F edge id -> Element
    ghost_images: dict             # E_F edge id -> Element (image of h*)

    @property
    def g0(self) -> list[Element]:
        return [self.vertex_images[x] for x in sorted(self.vertex_images)]

    @property
    def g1(self) -> list[Element]:
        return [self.edge_images[h] for h in sorted(self.edge_images)]

    @property
    def g1_star(self) -> list[Element]:
        return [self.ghost_images[h] for h in sorted(self.ghost_images)]

    def generators(self) -> list[Element]:
        return self.g0 + self.g1 + self.g1_star

    def image_of_monomial(self, real: Sequence[str], ghost: Sequence[str],
                          vertex: Optional[str] = None) -> Element:
        """theta applied to the E_F monomial ``real . ghost*``."""
        if not real and not ghost:
            return self.vertex_images[vertex]
        out = None
        for h in real:
            out = self.edge_images[h] if out is None else out * self.edge_images[h]
        for h in reversed(ghost):
            out = self.ghost_images[h] if out is None else out * self.ghost_images[h]
        return out

    def apply(self, x: Element) -> Element:
        """theta on an element of L_K(E_F)."""
        total = Element.zero(self.graph, self.field)
        for m, c in x.terms.items():
            total = total + self.image_of_monomial(m.real, m.ghost, m.vertex).scale(c)
        return total


def build_theta(g: Graph, f_set: Iterable[str], field: Field = QQ) -> ThetaMap:
    ef = build_ef(g, f_set)
    fs = ef.f_set

    def e_(x):
        return Element.edge(g, x, field)

    def ee_star(x):
        return Element.monomial(g, (x,), (x,), field)

    def sum_out_f(v):
        """sum_{f in F, s(f) = v} f f*"""
        total = Element.zero(g, field)
        for f in fs:
            if g.s(f) == v:
                total = total + ee_star(f)
        return total

    vimg = {}
    for x, prov in ef.vertex_provenance.items():
        if prov.kind is VertexKind.EDGE:
            vimg[x] = ee_star(prov.origin)
        elif prov.kind is VertexKind.BOUNDARY:
            vimg[x] = Element.vertex(g, prov.origin, field) - sum_out_f(prov.origin)
        else:
            vimg[x] = Element.vertex(g, prov.origin, field)

    eimg = {}
    for h, prov in ef.edge_provenance.items():
        e = prov.edge
        if prov.kind is EdgeKind.INTO_F:
            eimg[h] = Element.monomial(g, (e, prov.target), (prov.target,), field)
        elif prov.kind is EdgeKind.INTO_BOUNDARY:
            eimg[h] = e_(e) - e_(e) * sum_out_f(g.r(e))
        else:
            eimg[h] = e_(e)
    gimg = {h: x.involute() for h, x in eimg.items()}
    return ThetaMap(g, field, ef, vimg, eimg, gimg)


# -- relation checks ---------------------------------------------------------------


@dataclass(frozen=True)
class RelationResult:
    relation: str      # "vertex" | "source" | "range" | "CK1" | "CK2"
    site: str
    passed: bool
    lhs: str
    rhs: str

    def to_json(self) -> dict:
        return {"relation": self.relation, "site": self.site, "pass": self.passed,
                "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class RelationReport:
    results: list = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list:
        return [r for r in self.results if not r.passed]

    def to_json(self) -> dict:
        return {"all_pass": self.all_pass, "count": len(self.results),
                "failures": len(self.failures()),
                "relations": [r.to_json() for r in self.results]}


def check_relations(t: ThetaMap) -> RelationReport:
    """Evaluate every defining relation of L_K(E_F) under theta, in L_K(E)."""
    report = RelationReport()
    efg = t.ef.underlying
    V, H, Hs = t.vertex_images, t.edge_images, t.ghost_images
    zero = Element.zero(t.graph, t.field)

    def record(rel, site, lhs, rhs):
        report.results.append(RelationResult(rel, site, lhs == rhs, str(lhs), str(rhs)))

    verts = efg.vertices
    for i, x in enumerate(verts):
        record("vertex", f"{x}.{x}", V[x] * V[x], V[x])
        for y in verts[i + 1:]:
            record("vertex", f"{x}.{y}", V[x] * V[y], zero)
            record("vertex", f"{y}.{x}", V[y] * V[x], zero)
    for h in efg.edge_ids:
        s, r = efg.s(h), efg.r(h)
        record("source", f"s({h}).{h}", V[s] * H[h], H[h])
        record("source", f"{h}.r({h})", H[h] * V[r], H[h])
        record("range", f"r({h}).{h}*", V[r] * Hs[h], Hs[h])
        record("range", f"{h}*.s({h})", Hs[h] * V[s], Hs[h])
    for h in efg.edge_ids:
        for k in efg.edge_ids:
            rhs = V[efg.r(h)] if h == k else zero
            record("CK1", f"{h}*.{k}", Hs[h] * H[k], rhs)
    for x in efg.vertices:
        if not efg.is_regular(x):
            continue
        total = zero
        for h in efg.out_edges(x):
            total = total + H[h] * Hs[h]
        record("CK2", x, total, V[x])
    return report


def sandwich(t: ThetaMap, y: Element) -> Optional[tuple[Element, Element]]:
    """Find g, g' in G^0 with g y g' = y, or None."""
    for a in t.g0:
        left = a * y
        if left != y:
            continue
        for b in t.g0:
            if left * b == y:
                return a, b
    return None


def orthogonal_to_image(t: ThetaMap, x: Element) -> bool:
    """True iff x annihilates every element of G^0 on both sides."""
    return all((x * g).is_zero() and (g * x).is_zero() for g in t.g0)


# -- bounded span saturation ---------------------------------------------------------


@dataclass
class SpanSearch:
    """Span of all products of at most ``depth`` generators."""

    basis: SpanBasis
    depth: int
    saturated: bool           # a further level added nothing: the span is an algebra
    dims: list                # dimension after each level

    def contains(self, x: Element) -> bool:
        return self.basis.contains(x.terms)


def product_span(generators: Sequence[Element], length_bound: int,
                 field: Field, probe_saturation: bool = True,
                 targets: Sequence[Element] = ()) -> SpanSearch:
    """Saturate span{products of <= length_bound generators}.

    Level k adds new_basis_{k-1} * generators; multiplying only the vectors
    that entered at the previous level suffices by bilinearity. With
    ``targets``, stop as soon as the span holds all of them (membership only
    grows, so this decides the same question; ``dims`` then ends mid-level).
    """
    if length_bound < 1:
        raise ValueError("length_bound must be >= 1")
    basis = SpanBasis(field)
    gens = [x for x in generators if not x.is_zero()]
    frontier = [x for x in gens if basis.add(x.terms)]
    dims = [len(basis)]
    depth = 1
    saturated = not frontier

    pending = list(targets)

    def done():
        # targets already in the span stay there; only recheck the rest
        pending[:] = [x for x in pending if not basis.contains(x.terms)]
        return bool(targets) and not pending

    finished = done()
    while depth < length_bound and frontier and not finished:
        nxt = []
        for b in frontier:
            grew = False
            for x in gens:
                p = b * x
                if p and basis.add(p.terms):
                    nxt.append(p)
                    grew = True
            if grew and targets and done():
                finished = True
                break
        depth += 1
        dims.append(len(basis))
        frontier = nxt
        if not frontier:
            saturated = True
    if frontier and probe_saturation and depth == length_bound and not finished:
        saturated = _level_adds_nothing(frontier, gens, basis)
    return SpanSearch(basis, depth, saturated, dims)


def _level_adds_nothing(frontier, gens, basis) -> bool:
    for b in frontier:
        for x in gens:
            p = b * x
            if p and not basis.contains(p.terms):
                return False
    return True


def image_span(t: ThetaMap, length_bound: int, probe_saturation: bool = False,
               targets: Sequence[Element] = ()) -> SpanSearch:
    return product_span(t.generators(), length_bound, t.field, probe_saturation, targets)


def image_contains(t: ThetaMap, x: Element, length_bound: int) -> bool:
    """True iff x is in the span of products of <= length_bound generator images."""
    return image_span(t, length_bound, targets=[x]).contains(x)


def keylemma_targets(t: ThetaMap) -> dict[str, list[tuple[str, Element]]]:
    """Elements that must lie in Im(theta): F and F* (1), r(F) (2), vertices with
    nonempty s^-1(w) inside F (3)."""
    g, field, fs = t.graph, t.field, set(t.ef.f_set)
    p1 = []
    for f in sorted(fs):
        p1.append((f, Element.edge(g, f, field)))
        p1.append((f + "*", Element.ghost_edge(g, f, field)))
    p2 = [(w, Element.vertex(g, w, field)) for w in sorted({g.r(f) for f in fs})]
    p3 = [(w, Element.vertex(g, w, field)) for w in g.vertices
          if g.out_edges(w) and not g.is_infinite_emitter(w) and set(g.out_edges(w)) <= fs]
    return {"1": p1, "2": p2, "3": p3}


def check_keylemma_properties(t: ThetaMap, length_bound: int = 4) -> dict[str, bool]:
    targets = keylemma_targets(t)
    span = image_span(t, length_bound, targets=[x for v in targets.values() for _, x in v])
    return {k: all(span.contains(x) for _, x in items)
            for k, items in targets.items()}
