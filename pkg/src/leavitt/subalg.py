"""The subalgebra B(a_1, ..., a_l) generated by Im(theta), S_3 and S_4.

From a finite set of nonzero elements we read off the edge set F (edges in
monomials of positive length) and the vertex set S (length-0 monomials),
split S into

    S1 = S & r(F)
    S2 = {v in T : s^-1(v) nonempty, inside F}
    S3 = {v in T : s^-1(v) & F empty}
    S4 = {v in T : s^-1(v) meets both F and E^1 \\ F}

with T = S \\ S1, and attach u_w = w - sum_{f in F, s(f)=w} f f* to w in S4.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import Element
from .graph import Graph
from .theta import ThetaMap, build_theta, product_span


class SubalgebraError(ValueError):
    pass


@dataclass(frozen=True)
class SubalgebraData:
    inputs: tuple
    f_set: tuple[str, ...]
    s_all: tuple[str, ...]
    s1: tuple[str, ...]
    s2: tuple[str, ...]
    s3: tuple[str, ...]
    s4: tuple[str, ...]
    u_elements: dict
    theta: Optional[ThetaMap]

    @property
    def graph(self) -> Graph:
        return self.inputs[0].graph

    @property
    def field(self):
        return self.inputs[0].field

    @property
    def g0(self) -> list[Element]:
        return self.theta.g0 if self.theta else []

    def generators(self) -> list[Element]:
        """G^0, G^1, (G^1)*, the S3 vertices, and the u_w."""
        gens = list(self.theta.generators()) if self.theta else []
        gens += [Element.vertex(self.graph, v, self.field) for v in self.s3]
        gens += [self.u_elements[w] for w in self.s4]
        return gens

    def to_json(self) -> dict:
        return {
            "F": list(self.f_set),
            "S": list(self.s_all),
            "S1": list(self.s1), "S2": list(self.s2),
            "S3": list(self.s3), "S4": list(self.s4),
            "u": {w: str(u) for w, u in self.u_elements.items()},
            "inputs": [str(a) for a in self.inputs],
        }


def _edge_sum(g: Graph, field, edges, v) -> Element:
    total = Element.zero(g, field)
    for f in edges:
        if g.s(f) == v:
            total = total + Element.monomial(g, (f,), (f,), field)
    return total


def build_bs(inputs: Sequence[Element]) -> SubalgebraData:
    if not inputs:
        raise SubalgebraError("need at least one element")
    g, field = inputs[0].graph, inputs[0].field
    for a in inputs:
        if a.is_zero():
            raise SubalgebraError("inputs must be nonzero")
        if a.graph != g or a.field != field:
            raise SubalgebraError("inputs live over different graphs or fields")
    f_set, s_all = set(), set()
    for a in inputs:
        for m in a.terms:
            if m.length:
                f_set.update(m.real)
                f_set.update(m.ghost)
            else:
                s_all.add(m.vertex)
    r_f = {g.r(e) for e in f_set}
    s1 = sorted(v for v in s_all if v in r_f)
    s2, s3, s4 = [], [], []
    for v in sorted(s_all - set(s1)):
        out = set(g.out_edges(v))
        in_f = out & f_set
        outside = bool(out - f_set) or g.is_infinite_emitter(v)
        if not in_f:
            s3.append(v)
        elif outside:
            s4.append(v)
        else:
            s2.append(v)
    u = {w: Element.vertex(g, w, field) - _edge_sum(g, field, sorted(f_set), w) for w in s4}
    theta = build_theta(g, f_set, field) if f_set else None
    return SubalgebraData(tuple(inputs), tuple(sorted(f_set)), tuple(sorted(s_all)),
                          tuple(s1), tuple(s2), tuple(s3), tuple(s4), u, theta)


def verify_direct_sum(d: SubalgebraData) -> bool:
    """Orthogonality behind B = Im(theta) + (+ K v, v in S3) + (+ K u_w, w in S4)."""
    g, field = d.graph, d.field
    idems = [Element.vertex(g, v, field) for v in d.s3] + [d.u_elements[w] for w in d.s4]
    for i, x in enumerate(idems):
        if x * x != x:
            return False
        for y in idems[i + 1:]:
            if not (x * y).is_zero() or not (y * x).is_zero():
                return False
    for x in idems:
        for h in d.g0:
            if not (x * h).is_zero() or not (h * x).is_zero():
                return False
    return True


def verify_membership(d: SubalgebraData, length_bound: int) -> bool:
    """Every input lies in the span of products of <= length_bound generators of B."""
    span = product_span(d.generators(), length_bound, d.field, probe_saturation=False,
                        targets=d.inputs)
    return all(span.contains(a) for a in d.inputs)


def verify_directedness(s1_inputs: Sequence[Element], s2_inputs: Sequence[Element],
                        length_bound: int) -> bool:
    """B(S1) and B(S2) both sit inside B(T), T the union of their generator sets."""
    b1, b2 = build_bs(s1_inputs), build_bs(s2_inputs)
    gens = b1.generators() + b2.generators()
    t_inputs = list(dict.fromkeys(x for x in gens if not x.is_zero()))
    bt = build_bs(t_inputs)
    span = product_span(bt.generators(), length_bound, bt.field, probe_saturation=False,
                        targets=gens)
    return all(span.contains(x) for x in gens)
