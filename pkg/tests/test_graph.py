import json

import pytest
from hypothesis import given, settings, strategies as st

from leavitt import corpus
from leavitt.graph import (EdgeKind, Graph, GraphError, VertexKind, build_ef, find_cycle,
                           is_acyclic, paths_to)


def test_is_regular_examples():
    assert corpus.loop().is_regular("v")
    clock = corpus.infinite_clock()
    assert not clock.is_regular("v")
    assert not clock.is_regular("w")
    with pytest.raises(GraphError):
        clock.is_regular("nope")


def test_find_cycle_examples():
    assert find_cycle(corpus.loop()).edges == ("x",)
    assert find_cycle(corpus.line(4)) is None
    assert find_cycle(corpus.two_cycle()).edges == ("e", "f")


def test_find_cycle_prefers_short_then_lexicographic():
    g = Graph.build(["a", "b", "c"], [("z", "a", "a"), ("b1", "b", "c"), ("c1", "c", "b"),
                                      ("a1", "a", "b")])
    assert find_cycle(g).edges == ("z",)
    g = Graph.build(["a", "b"], [("p", "a", "b"), ("q", "b", "a"), ("m", "a", "b")])
    assert find_cycle(g).edges == ("m", "q")


def test_find_cycle_has_distinct_sources():
    for g in corpus.graph_corpus(3, 4):
        c = find_cycle(g)
        if c is None:
            assert is_acyclic(g)
            continue
        assert g.is_cycle(c)
        srcs = [g.s(e) for e in c.edges]
        assert len(set(srcs)) == len(srcs)


def test_ef_rose():
    for n in (2, 3):
        ef = build_ef(corpus.rose(n), ["y1"])
        assert set(ef.underlying.vertices) == {"y1", "v"}
        assert set(ef.underlying.edge_ids) == {"(y1,y1)", "(y1,v)"}
        assert ef.vertex_provenance["v"].kind is VertexKind.BOUNDARY


def test_ef_infinite_clock():
    ef = build_ef(corpus.infinite_clock(samples=2), ["f"])
    assert set(ef.underlying.vertices) == {"f", "w"}
    assert ef.underlying.edge_ids == ("(f,w)",)
    assert ef.edge_provenance["(f,w)"].kind is EdgeKind.INTO_TERMINAL


def test_ef_two_line():
    ef = build_ef(corpus.line(2), ["e1"])
    assert set(ef.underlying.vertices) == {"e1", "v2"}
    assert ef.underlying.edge_ids == ("(e1,v2)",)
    assert ef.vertex_provenance["v2"].kind is VertexKind.TERMINAL


def test_ef_rejects_bad_f():
    with pytest.raises(GraphError):
        build_ef(corpus.line(2), [])
    with pytest.raises(GraphError):
        build_ef(corpus.line(2), ["zz"])


def test_paths_to_examples():
    ps = paths_to(corpus.line(3), "v3")
    assert [p.edges for p in ps] == [(), ("e2",), ("e1", "e2")]
    assert [p.edges for p in paths_to(corpus.isolated_vertex(), "u")] == [()]
    with pytest.raises(GraphError):
        paths_to(corpus.loop(), "v")


def test_graph_json_roundtrip_and_strict_keys():
    g = corpus.infinite_clock(samples=1)
    assert Graph.from_json(json.loads(json.dumps(g.to_json()))) == g
    bad = g.to_json()
    bad["colour"] = 1
    with pytest.raises(GraphError):
        Graph.from_json(bad)
    bad = g.to_json()
    bad["edges"][0]["weight"] = 2
    with pytest.raises(GraphError):
        Graph.from_json(bad)


def test_graph_invariants_enforced():
    with pytest.raises(GraphError):
        Graph.build(["v"], [("e", "v", "w")])
    with pytest.raises(GraphError):
        Graph.build(["v", "e"], [("e", "v", "v")])


def test_corpus_sizes_are_stable():
    # connected multigraphs up to isomorphism on <= 2 vertices, <= 2 edges:
    # 1 vertex: 0, 1, 2 loops; 2 vertices: a->b; a->b twice; a->b,b->a;
    # a->b plus a loop at a or at b
    assert len(corpus.graph_corpus(2, 2)) == 3 + 5


def _ef_invariants(g, f):
    ef = build_ef(g, f)
    fs = set(f)
    rF = {g.r(e) for e in fs}
    sF = {g.s(e) for e in fs}
    expected = set(fs)
    for v in rF:
        if v not in sF:
            expected.add(v)
        elif g.is_infinite_emitter(v) or set(g.out_edges(v)) - fs:
            expected.add(v)
    assert set(ef.underlying.vertices) == expected
    for h, prov in ef.edge_provenance.items():
        x = prov.target
        s_x = g.s(x) if ef.vertex_provenance[x].kind is VertexKind.EDGE else x
        assert g.r(prov.edge) == s_x
        assert ef.underlying.s(h) == prov.edge and ef.underlying.r(h) == x
    # every admissible pair (e, x) is present
    count = sum(1 for e in fs for x in expected
                if g.r(e) == (g.s(x) if x in fs else x))
    assert count == len(ef.underlying.edges)
    return ef


SMALL = corpus.graph_corpus(3, 4, flags=True)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_ef_invariants_random(data):
    g = data.draw(st.sampled_from([g for g in SMALL if g.edges]))
    f = data.draw(st.lists(st.sampled_from(g.edge_ids), min_size=1, max_size=3, unique=True))
    _ef_invariants(g, f)


def test_lemma_acyclic_over_corpus():
    """E acyclic implies E_F acyclic, for every F with |F| <= 3."""
    checked = 0
    for g in corpus.graph_corpus(5, 6, acyclic_only=True):
        for f in corpus.edge_subsets(g, 1, 3):
            assert find_cycle(build_ef(g, f).underlying) is None
            checked += 1
    assert checked > 1000


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_canonical_form_is_relabelling_invariant(data):
    from leavitt.corpus import _canonical

    n = data.draw(st.integers(1, 4))
    pairs = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                               max_size=5))
    flags = frozenset(data.draw(st.sets(st.integers(0, n - 1), max_size=1)))
    perm = data.draw(st.permutations(range(n)))
    moved = [(perm[a], perm[b]) for a, b in pairs]
    assert _canonical(n, pairs, flags) == _canonical(n, moved, frozenset(perm[v] for v in flags))
