"""Exact arithmetic in the Leavitt path algebra L_K(E).

Elements are finite linear combinations of monomials ``p q*`` with
``r(p) = r(q)``, stored in a fixed normal form: the CK2 relation at each
regular vertex ``v`` is used as the rewrite rule

    p' g g* q'*  ->  p' q'*  -  sum_{e in s^-1(v), e != g} (p' e)(q' e)*

where ``g`` is the special (least-id) edge emitted by ``v``. A monomial has
at most one redex (its two final edges), so the rewrite terminates: each
step either shortens the monomial or leaves a non-special final edge.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

from .fields import QQ, Field, Scalar
from .graph import Graph, GraphError, Path


class Monomial(NamedTuple):
    """``real . ghost*`` with common range ``vertex``."""

    real: tuple[str, ...]
    ghost: tuple[str, ...]
    vertex: str

    @property
    def degree(self) -> int:
        return len(self.real) - len(self.ghost)

    @property
    def length(self) -> int:
        return len(self.real) + len(self.ghost)

    def adjoint(self) -> "Monomial":
        return Monomial(self.ghost, self.real, self.vertex)


def vertex_monomial(v: str) -> Monomial:
    return Monomial((), (), v)


def monomial_sort_key(m: Monomial):
    return (m.length, m.real, m.ghost, m.vertex)


def real_source(g: Graph, m: Monomial) -> str:
    return g.s(m.real[0]) if m.real else m.vertex


def ghost_source(g: Graph, m: Monomial) -> str:
    return g.s(m.ghost[0]) if m.ghost else m.vertex


def make_monomial(g: Graph, real: Sequence[str], ghost: Sequence[str],
                  vertex: Optional[str] = None) -> Optional[Monomial]:
    """Build ``real . ghost*``; returns None when the ranges do not match (the zero monomial)."""
    real, ghost = tuple(real), tuple(ghost)
    for e in real + ghost:
        if not g.has_edge(e):
            raise GraphError(f"unknown edge {e!r}")
    if not (g.path_ok(real) and g.path_ok(ghost)):
        return None
    ends = {g.r(p[-1]) for p in (real, ghost) if p}
    if vertex is not None:
        if not g.has_vertex(vertex):
            raise GraphError(f"unknown vertex {vertex!r}")
        ends.add(vertex)
    if len(ends) != 1:
        if not ends:
            raise GraphError("a vertex monomial needs its vertex")
        return None
    return Monomial(real, ghost, ends.pop())


def monomial_product(g: Graph, a: Monomial, b: Monomial) -> Optional[Monomial]:
    """Raw product of two monomials using only relations (1)-(3); None means zero."""
    if ghost_source(g, a) != real_source(g, b):
        return None
    q, r = a.ghost, b.real
    if r[:len(q)] == q:
        # q* r = t with r = q t
        return Monomial(a.real + r[len(q):], b.ghost, b.vertex)
    if q[:len(r)] == r:
        # q* r = t* with q = r t
        return Monomial(a.real, b.ghost + q[len(r):], a.vertex)
    return None


def monomial_normal_form(g: Graph, m: Monomial) -> tuple[tuple[Monomial, int], ...]:
    """Normal form of one monomial as integer combination of irreducible monomials."""
    cache = g._nf_cache
    hit = cache.get(m)
    if hit is not None:
        return hit
    p, q = m.real, m.ghost
    if p and q and p[-1] == q[-1]:
        e = p[-1]
        v = g.s(e)
        if g.special_edge(v) == e:
            shorter = monomial_normal_form(g, Monomial(p[:-1], q[:-1], v))
            rest = [(Monomial(p[:-1] + (f,), q[:-1] + (f,), g.r(f)), -1)
                    for f in g.out_edges(v) if f != e]
            out = tuple(shorter) + tuple(rest)
            cache[m] = out
            return out
    out = ((m, 1),)
    cache[m] = out
    return out


def is_normal(g: Graph, m: Monomial) -> bool:
    p, q = m.real, m.ghost
    return not (p and q and p[-1] == q[-1] and g.special_edge(g.s(p[-1])) == p[-1])


class Element:
    """An element of L_K(E): a mapping from normal-form monomials to nonzero scalars.

    Instances are treated as immutable values.
    """

    __slots__ = ("graph", "field", "terms", "_hash")

    def __init__(self, graph: Graph, field: Field, terms: dict):
        self.graph = graph
        self.field = field
        self.terms = terms
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, g: Graph, field: Field = QQ) -> "Element":
        return cls(g, field, {})

    @classmethod
    def from_raw(cls, g: Graph, field: Field, raw: Iterable[tuple[Monomial, object]]) -> "Element":
        return normalize(g, field, raw)

    @classmethod
    def vertex(cls, g: Graph, v: str, field: Field = QQ) -> "Element":
        if not g.has_vertex(v):
            raise GraphError(f"unknown vertex {v!r}")
        return cls(g, field, {vertex_monomial(v): field.one})

    @classmethod
    def edge(cls, g: Graph, e: str, field: Field = QQ) -> "Element":
        return cls.path(g, (e,), field)

    @classmethod
    def ghost_edge(cls, g: Graph, e: str, field: Field = QQ) -> "Element":
        return cls.monomial(g, (), (e,), field)

    @classmethod
    def path(cls, g: Graph, p, field: Field = QQ) -> "Element":
        if isinstance(p, Path):
            return cls.monomial(g, p.edges, (), field, vertex=g.range(p))
        return cls.monomial(g, p, (), field)

    @classmethod
    def monomial(cls, g: Graph, real: Sequence[str], ghost: Sequence[str],
                 field: Field = QQ, coeff=None, vertex: Optional[str] = None) -> "Element":
        m = make_monomial(g, real, ghost, vertex)
        if m is None:
            return cls.zero(g, field)
        c = field.one if coeff is None else field(coeff)
        return normalize(g, field, [(m, c)])

    @classmethod
    def identity(cls, g: Graph, field: Field = QQ) -> "Element":
        """The sum of all vertices (the unit when the vertex set is finite)."""
        return cls(g, field, {vertex_monomial(v): field.one for v in g.vertices})

    @classmethod
    def scalar(cls, g: Graph, c, field: Field = QQ) -> "Element":
        return cls.identity(g, field).scale(field(c))

    # -- ring structure ------------------------------------------------------

    def _check(self, other: "Element") -> None:
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if other.graph is not self.graph and other.graph != self.graph:
            raise ValueError("elements live over different graphs")
        if other.field != self.field:
            raise ValueError("elements live over different fields")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m)
            s = c if s is None else s + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Element(self.graph, self.field, terms)

    def __neg__(self) -> "Element":
        return Element(self.graph, self.field, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c) -> "Element":
        c = self.field(c)
        if not c:
            return Element(self.graph, self.field, {})
        return Element(self.graph, self.field, {m: c * x for m, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> "Element":
        if n < 1:
            raise ValueError("only positive powers are defined in a nonunital algebra")
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return (self.graph == other.graph and self.field == other.field
                and self.terms == other.terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self) -> Iterator[tuple[Monomial, Scalar]]:
        for m in sorted(self.terms, key=monomial_sort_key):
            yield m, self.terms[m]

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, m: Monomial):
        return self.terms.get(m, self.field.zero)

    # -- structure -------------------------------------------------------------

    def involute(self) -> "Element":
        return involute(self)

    def component(self, n: int) -> "Element":
        return homogeneous_component(self, n)

    def degrees(self) -> list[int]:
        return sorted({m.degree for m in self.terms})

    def top_degree(self) -> Optional[int]:
        return top_degree(self)

    def support_edges(self) -> set[str]:
        return {e for m in self.terms for e in m.real + m.ghost}

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"Element({to_text(self)!r})"


def normalize(g: Graph, field: Field, raw: Iterable[tuple[Monomial, object]],
              rng: Optional[random.Random] = None) -> Element:
    """Reduce a raw term list to normal form.

    With ``rng`` given, terms are rewritten one step at a time in a random
    order instead of through the memoized per-monomial normal form; the
    result must not depend on the order.
    """
    if rng is not None:
        return _normalize_stepwise(g, field, raw, rng)
    acc: dict = {}
    for m, c in raw:
        c = field(c)
        if not c:
            continue
        for mm, k in monomial_normal_form(g, m):
            val = c if k == 1 else c * k
            prev = acc.get(mm)
            acc[mm] = val if prev is None else prev + val
    return Element(g, field, {m: c for m, c in acc.items() if c})


def _normalize_stepwise(g, field, raw, rng):
    pending = [(m, field(c)) for m, c in raw]
    done: dict = {}
    while pending:
        i = rng.randrange(len(pending))
        pending[i], pending[-1] = pending[-1], pending[i]
        m, c = pending.pop()
        if not c:
            continue
        if is_normal(g, m):
            prev = done.get(m)
            done[m] = c if prev is None else prev + c
            continue
        p, q = m.real, m.ghost
        v = g.s(p[-1])
        pending.append((Monomial(p[:-1], q[:-1], v), c))
        for f in g.out_edges(v):
            if f != p[-1]:
                pending.append((Monomial(p[:-1] + (f,), q[:-1] + (f,), g.r(f)), -c))
    return Element(g, field, {m: c for m, c in done.items() if c})


def multiply(a: Element, b: Element) -> Element:
    a._check(b)
    g = a.graph
    raw = []
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            m = monomial_product(g, ma, mb)
            if m is not None:
                raw.append((m, ca * cb))
    return normalize(g, a.field, raw)


def involute(a: Element) -> Element:
    """The K-linear involution p q* -> q p*."""
    # the adjoint of a normal monomial is normal: the redex test is symmetric
    return Element(a.graph, a.field, {m.adjoint(): c for m, c in a.terms.items()})


def homogeneous_component(a: Element, n: int) -> Element:
    return Element(a.graph, a.field, {m: c for m, c in a.terms.items() if m.degree == n})


def top_degree(a: Element) -> Optional[int]:
    if not a.terms:
        return None
    return max(m.degree for m in a.terms)


def random_element(g: Graph, field: Field, rng: random.Random, n_terms: int = 4,
                   max_length: int = 3, basis: Optional[Sequence[Monomial]] = None) -> Element:
    """A random element supported on normal monomials of total length <= max_length."""
    if basis is None:
        basis = normal_monomials(g, max_length)
    raw = []
    for _ in range(n_terms):
        m = rng.choice(basis)
        raw.append((m, field.random(rng)))
    return normalize(g, field, raw)


def normal_monomials(g: Graph, max_length: int,
                     vertices: Optional[Iterable[str]] = None) -> list[Monomial]:
    """All irreducible monomials p q* with len(p) + len(q) <= max_length.

    ``vertices`` restricts the common range vertex.
    """
    from .graph import paths_ending_at

    out = []
    for v in (g.vertices if vertices is None else vertices):
        ending = paths_ending_at(g, v, max_length)
        for p in ending:
            for q in ending:
                if len(p) + len(q) > max_length:
                    continue
                m = Monomial(p, q, v)
                if is_normal(g, m):
                    out.append(m)
    out.sort(key=monomial_sort_key)
    return out


# -- canonical text form -----------------------------------------------------------


def monomial_text(m: Monomial) -> str:
    if not m.real and not m.ghost:
        return m.vertex
    factors = list(m.real) + [e + "*" for e in reversed(m.ghost)]
    return ".".join(factors)


def to_text(a: Element) -> str:
    if not a.terms:
        return "0"
    parts = []
    for i, (m, c) in enumerate(a):
        body = monomial_text(m)
        negative = isinstance(c, Fraction) and c < 0
        mag = -c if negative else c
        coef = a.field.format(mag)
        term = body if coef == "1" else f"{coef}*{body}"
        if i == 0:
            parts.append("-" + term if negative else term)
        else:
            parts.append((" - " if negative else " + ") + term)
    return "".join(parts)
