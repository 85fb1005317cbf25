from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from leavitt import corpus
from leavitt.algebra import Element, Monomial
from leavitt.expr import parse_element
from leavitt.fields import GF, QQ
from leavitt.obstruction import (ObstructionError, brute_force_inner_inverse_gf2,
                                 check_candidate, default_basis, forced_coefficients,
                                 refutation_report, search_inner_inverse, series_consistent,
                                 solve_inner_inverse_bounded)


def loop_c():
    g = corpus.loop()
    return g, g.path(["x"])


def cycle2():
    g = corpus.two_cycle()
    return g, g.path(["e", "f"])


def test_forced_examples():
    s = forced_coefficients(1, 1, 3)
    assert s.coeffs == [[1], [0, -1], [0, 0, 1], [0, 0, 0, -1]]
    assert forced_coefficients(1, 2, 2).lambdas[1] == -2
    for n in range(1, 5):
        lam = forced_coefficients(2, n, 1).lambdas
        assert lam[0] == 1 and lam[1] == -comb(n, 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_forced_matches_inverse_binomial_series(n):
    """lambda_k are the coefficients of (1 + c)^(-n)."""
    lam = forced_coefficients(1, n, 8).lambdas
    assert list(lam) == [(-1) ** k * comb(n + k - 1, k) for k in range(9)]


def test_forced_errors():
    with pytest.raises(ObstructionError):
        forced_coefficients(0, 1, 1)
    with pytest.raises(ObstructionError):
        forced_coefficients(1, 2, 2, GF(2))     # C(2,1) = 0 mod 2
    forced_coefficients(1, 2, 2, GF(3))


def test_check_candidate_examples():
    g, c = loop_c()
    assert not check_candidate(g, c, 1, parse_element("v", g))
    assert not check_candidate(g, c, 1, parse_element("v - x", g))
    assert not check_candidate(g, c, 1, Element.zero(g))
    with pytest.raises(ObstructionError):
        check_candidate(corpus.line(2), corpus.line(2).path(["e1"]), 1, Element.zero(corpus.line(2)))


@pytest.mark.parametrize("s", [1, 2])
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("t", [0, 1, 2, 3, 4])
def test_series_consistency(s, n, t):
    g, c = loop_c() if s == 1 else cycle2()
    assert series_consistent(g, c, n, t)


def test_series_inconsistent_when_perturbed():
    from leavitt.obstruction import _truncate_below, cycle_power, gamma, series_element
    g, c = loop_c()
    ser = forced_coefficients(1, 2, 3)
    alpha = series_element(g, c, ser, 3) + cycle_power(g, c, 2)
    gn = gamma(g, c) ** 2
    assert _truncate_below(gn * alpha * gn, 4) != _truncate_below(gn, 4)


def test_refutation_reports():
    g, c = loop_c()
    rep = refutation_report(g, c, 1, 3)
    js = rep.to_json()
    assert js["verdict"] == "CONTRADICTION"
    assert js["forced_coefficients"] == [[1], [0, -1], [0, 0, 1], [0, 0, 0, -1]]
    assert js["degree_comparison"]["lhs_degree"] == 2
    assert js["degree_comparison"]["rhs_degree"] == 1
    rep = refutation_report(g, c, 2, 2)
    assert rep.series.lambdas[1] == -2 and rep.lhs_degree == 4 and rep.rhs_degree == 2
    g2, c2 = cycle2()
    rep = refutation_report(g2, c2, 1, 2, basis_length=4)
    assert rep.contradiction and rep.lhs_degree == 4 and rep.rhs_degree == 2
    ls = rep.to_json()["linear_system"]
    assert not ls["feasible"] and ls["rank_augmented"] == ls["rank"] + 1


def test_refutation_rejects_non_cycle():
    g = corpus.line(3)
    with pytest.raises(ObstructionError):
        refutation_report(g, g.path(["e1", "e2"]), 1, 1)


def test_solver_examples():
    g, c = loop_c()
    basis = [Monomial(("x",) * k, (), "v") for k in range(4)]
    basis += [Monomial((), ("x",) * k, "v") for k in range(1, 4)]
    assert solve_inner_inverse_bounded(g, parse_element("v + x", g), 1, basis) is None
    line = corpus.line(2)
    y = solve_inner_inverse_bounded(line, parse_element("e1", line), 1,
                                    [Monomial((), ("e1",), "v2")])
    assert y == parse_element("e1*", line)
    y = solve_inner_inverse_bounded(g, parse_element("v", g), 1, [Monomial((), (), "v")])
    assert y == parse_element("v", g)


def test_gf2_brute_force_agrees_on_feasible_case():
    line = corpus.line(3)
    f2 = GF(2)
    x = parse_element("e1 + e2", line, f2)
    basis = default_basis_all(line, 2)
    sol = brute_force_inner_inverse_gf2(line, x, 1, basis)
    assert sol is not None
    y = search_inner_inverse(line, x, 1, basis).solution
    assert y is not None and x * y * x == x


def default_basis_all(g, max_length):
    from leavitt.algebra import normal_monomials
    return normal_monomials(g, max_length)


@pytest.mark.parametrize("graph", ["loop", "two_cycle"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_bounded_refutation_and_gf2_cross_check(graph, n):
    g, c = loop_c() if graph == "loop" else cycle2()
    v = g.s(c.edges[0])
    for field in (QQ, GF(3)):
        x = Element.vertex(g, v, field) + Element.path(g, c, field)
        for length in range(0, 7):
            assert solve_inner_inverse_bounded(g, x, n, default_basis(g, c, length)) is None
    x2 = Element.vertex(g, v, GF(2)) + Element.path(g, c, GF(2))
    for length in range(0, 4):
        assert brute_force_inner_inverse_gf2(g, x2, n, default_basis(g, c, length)) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_solutions_reverify(seed):
    import random
    from leavitt.algebra import random_element
    rng = random.Random(seed)
    g = rng.choice([corpus.line(3), corpus.finite_clock(2), corpus.loop()])
    x = random_element(g, QQ, rng, 3, 2)
    basis = default_basis_all(g, 3)
    res = search_inner_inverse(g, x, 1, basis)
    if res.solution is not None:
        assert x * res.solution * x == x
        assert res.rank_matrix == res.rank_augmented
    else:
        assert res.rank_augmented == res.rank_matrix + 1
