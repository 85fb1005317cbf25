import random
from collections import defaultdict
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from leavitt import corpus
from leavitt.algebra import (Element, Monomial, is_normal, monomial_product, normal_monomials,
                             normalize, random_element)
from leavitt.fields import GF, QQ, field_from_name
from leavitt.graph import GraphError

GRAPHS = [corpus.loop(), corpus.two_cycle(), corpus.rose(2), corpus.line(3),
          corpus.infinite_clock(samples=1), corpus.finite_clock(2)]
GRAPHS += [g for g in corpus.graph_corpus(3, 3, flags=True) if g.edges][::7]
FIELDS = [QQ, GF(5), GF(2)]


def elements(n=3):
    @st.composite
    def draw(draw_):
        g = draw_(st.sampled_from(GRAPHS))
        field = draw_(st.sampled_from(FIELDS))
        seed = draw_(st.integers(0, 2 ** 32))
        rng = random.Random(seed)
        return [random_element(g, field, rng, n_terms=rng.randint(0, 5)) for _ in range(n)]
    return draw()


def test_field_arithmetic():
    f = GF(7)
    assert f(3) * f(5) == 1
    assert f(3) / f(5) * f(5) == f(3)
    assert -f(1) == 6
    assert f(Fraction(1, 2)) * 2 == 1
    with pytest.raises(ValueError):
        GF(6)
    assert field_from_name("gf:5") == GF(5)
    assert field_from_name("q") == QQ
    with pytest.raises(ValueError):
        field_from_name("r")


def test_ck1_and_ck2_on_rose():
    g = corpus.rose(2)
    y1, y2 = Element.edge(g, "y1"), Element.edge(g, "y2")
    v = Element.vertex(g, "v")
    assert y1.involute() * y1 == v
    assert (y1.involute() * y2).is_zero()
    assert y1 * y1.involute() + y2 * y2.involute() == v


def test_loop_ck2_normalizes_to_vertex():
    g = corpus.loop()
    x = Element.edge(g, "x")
    assert x * x.involute() == Element.vertex(g, "v")


def test_flagged_vertex_has_no_ck2():
    g = corpus.infinite_clock()
    f = Element.edge(g, "f")
    v = Element.vertex(g, "v")
    assert f * f.involute() != v
    assert f.involute() * f == Element.vertex(g, "w")


def test_vertices_are_orthogonal_idempotents():
    g = corpus.line(3)
    vs = [Element.vertex(g, v) for v in g.vertices]
    for i, a in enumerate(vs):
        for j, b in enumerate(vs):
            assert a * b == (a if i == j else Element.zero(g))


def test_monomial_product_rules():
    g = corpus.line(3)
    m = monomial_product(g, Monomial(("e1",), ("e1",), "v2"), Monomial(("e1", "e2"), (), "v3"))
    assert m == Monomial(("e1", "e2"), (), "v3")
    assert monomial_product(g, Monomial((), (), "v1"), Monomial((), (), "v2")) is None


def test_unknown_ids_raise():
    with pytest.raises(GraphError):
        Element.edge(corpus.loop(), "y")


def test_path_discontinuity_is_zero():
    g = corpus.line(3)
    assert (Element.edge(g, "e2") * Element.edge(g, "e1")).is_zero()


@settings(max_examples=150, deadline=None)
@given(elements(3))
def test_ring_axioms(xs):
    a, b, c = xs
    g, field = a.graph, a.field
    one = Element.identity(g, field)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert one * a == a == a * one
    assert a - a == Element.zero(g, field)


@settings(max_examples=150, deadline=None)
@given(elements(2))
def test_involution_is_antihomomorphism(xs):
    a, b = xs
    assert (a * b).involute() == b.involute() * a.involute()
    assert a.involute().involute() == a


@settings(max_examples=150, deadline=None)
@given(elements(2))
def test_grading(xs):
    a, b = xs
    for i in a.degrees():
        for j in b.degrees():
            prod = a.component(i) * b.component(j)
            assert set(prod.degrees()) <= {i + j}


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(GRAPHS), st.integers(0, 2 ** 32))
def test_normal_form_is_confluent(g, seed):
    """Stepwise rewriting in a random order reaches the same normal form."""
    rng = random.Random(seed)
    field = QQ
    basis = [m for m in _all_monomials(g, 4)]
    raw = [(rng.choice(basis), field.random(rng)) for _ in range(5)]
    reference = normalize(g, field, raw)
    for _ in range(3):
        assert normalize(g, field, raw, rng=random.Random(rng.random())) == reference
    assert all(is_normal(g, m) for m in reference.terms)


def _all_monomials(g, max_len):
    """Every monomial p q* (normal or not) with len(p) + len(q) <= max_len."""
    from leavitt.graph import paths_ending_at
    out = []
    for v in g.vertices:
        ps = paths_ending_at(g, v, max_len)
        out += [Monomial(p, q, v) for p in ps for q in ps if len(p) + len(q) <= max_len]
    return out


# -- Laurent polynomial oracle on the loop ------------------------------------------


def _laurent(a):
    """L(loop) -> K[t, 1/t], x -> t, x* -> 1/t."""
    out = defaultdict(lambda: a.field.zero)
    for m, c in a.terms.items():
        out[m.degree] += c
    return {k: v for k, v in out.items() if v}


def _laurent_mul(p, q, field):
    out = defaultdict(lambda: field.zero)
    for i, a in p.items():
        for j, b in q.items():
            out[i + j] += a * b
    return {k: v for k, v in out.items() if v}


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 32), st.sampled_from([QQ, GF(3)]))
def test_loop_matches_laurent_polynomials(seed, field):
    g = corpus.loop()
    rng = random.Random(seed)
    a = random_element(g, field, rng, n_terms=4, max_length=4)
    b = random_element(g, field, rng, n_terms=4, max_length=4)
    assert _laurent(a * b) == _laurent_mul(_laurent(a), _laurent(b), field)
    # normal monomials are x^k and (x*)^k: one per degree
    assert len({m.degree for m in a.terms}) == len(a.terms)


def test_loop_normal_basis_counts():
    g = corpus.loop()
    # x^i (x*)^j normal iff i = 0 or j = 0
    assert len(normal_monomials(g, 4)) == 1 + 2 * 4


def test_text_form():
    g = corpus.line(2)
    a = (Element.monomial(g, ("e1",), (), QQ, coeff=2)
         + Element.vertex(g, "v1").scale(Fraction(1, 3))
         - Element.ghost_edge(g, "e1"))
    assert str(a) == "1/3*v1 - e1* + 2*e1"
    assert str(Element.zero(g)) == "0"
