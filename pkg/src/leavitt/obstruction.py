"""Why a cycle c based at v kills pi-regularity of v + c.

If (v+c)^n alpha (v+c)^n = (v+c)^n with alpha = v alpha v, the graded
components of alpha are forced: only degrees ks survive and a_ks = f_k(c)
is an integer multiple of c^k. Equating degree-ts components gives

    sum_{i + j + k = t} C(n, i) C(n, k) lambda_j = C(n, t)

for f_j(c) = lambda_j c^j; we solve it for lambda_t. This is the full
graded-component equation (left and right binomial factors both
expanded), so lambda_t are the coefficients of (1 + c)^(-n).

Every a_i then commutes with c, the equation collapses to
alpha (v+c)^(2n) = (v+c)^n, and degrees clash: the left side reaches
degree 2sn + i for some i >= 0 while the right side stops at ns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Optional, Sequence

from . import linalg as la
from .algebra import Element, Monomial, normal_monomials, normalize
from .fields import QQ, Field, PrimeField
from .graph import Graph, Path


class ObstructionError(ValueError):
    pass


@dataclass(frozen=True)
class CyclePowerSeries:
    s: int
    n: int
    lambdas: tuple[int, ...]

    @property
    def coeffs(self) -> list[list[int]]:
        """f_k as integer coefficient arrays in the variable c (index = power)."""
        return [[0] * k + [lam] for k, lam in enumerate(self.lambdas)]


def forced_coefficients(s: int, n: int, t_max: int, field: Field = QQ) -> CyclePowerSeries:
    if s < 1 or n < 1 or t_max < 0:
        raise ObstructionError("need s >= 1, n >= 1, t_max >= 0")
    if isinstance(field, PrimeField):
        bad = [k for k in range(n + 1) if comb(n, k) % field.p == 0]
        if bad:
            raise ObstructionError(
                f"C({n},{bad[0]}) vanishes mod {field.p}; the forced-coefficient argument "
                "needs nonvanishing binomials")
    lam: list[int] = []
    for t in range(t_max + 1):
        rest = 0
        for j in range(t):
            for i in range(t - j + 1):
                k = t - j - i
                rest += comb(n, i) * comb(n, k) * lam[j]
        lam.append(comb(n, t) - rest)
    return CyclePowerSeries(s, n, tuple(lam))


def _cycle_base(g: Graph, c: Path) -> str:
    if not g.is_cycle(c):
        raise ObstructionError(f"{c.edges!r} is not a cycle")
    return g.s(c.edges[0])


def gamma(g: Graph, c: Path, field: Field = QQ) -> Element:
    """v + c."""
    v = _cycle_base(g, c)
    return Element.vertex(g, v, field) + Element.path(g, c, field)


def cycle_power(g: Graph, c: Path, k: int, field: Field = QQ) -> Element:
    """c^k, with c^0 = v."""
    v = _cycle_base(g, c)
    if k == 0:
        return Element.vertex(g, v, field)
    return Element.monomial(g, c.edges * k, (), field, vertex=v)


def series_element(g: Graph, c: Path, series: CyclePowerSeries, t: int,
                   field: Field = QQ) -> Element:
    """alpha_t = sum_{k <= t} lambda_k c^k."""
    total = Element.zero(g, field)
    for k in range(t + 1):
        total = total + cycle_power(g, c, k, field).scale(series.lambdas[k])
    return total


def check_candidate(g: Graph, c: Path, n: int, alpha: Element) -> bool:
    """Does alpha' = v alpha v satisfy (v+c)^n alpha' (v+c)^n = (v+c)^n?"""
    field = alpha.field
    v = Element.vertex(g, _cycle_base(g, c), field)
    gn = gamma(g, c, field) ** n
    corner = v * alpha * v
    return gn * corner * gn == gn


def _truncate_below(x: Element, degree: int) -> Element:
    return Element(x.graph, x.field, {m: c for m, c in x.terms.items() if m.degree < degree})


def series_consistent(g: Graph, c: Path, n: int, t: int, field: Field = QQ) -> bool:
    """(v+c)^n alpha_t (v+c)^n agrees with (v+c)^n below degree (t+1)s."""
    s = len(c.edges)
    series = forced_coefficients(s, n, t, field)
    alpha = series_element(g, c, series, t, field)
    gn = gamma(g, c, field) ** n
    lhs = _truncate_below(gn * alpha * gn, (t + 1) * s)
    rhs = _truncate_below(gn, (t + 1) * s)
    return lhs == rhs


# -- bounded inner-inverse search -------------------------------------------------------


@dataclass
class InnerInverseSearch:
    solution: Optional[Element]
    rank_matrix: int
    rank_augmented: int
    basis_size: int

    def to_json(self) -> dict:
        return {"feasible": self.solution is not None, "basis_size": self.basis_size,
                "rank": self.rank_matrix, "rank_augmented": self.rank_augmented,
                "solution": None if self.solution is None else str(self.solution)}


def search_inner_inverse(g: Graph, x: Element, n: int,
                         basis: Sequence[Monomial]) -> InnerInverseSearch:
    """Solve x^n y x^n = x^n for y in span(basis), exactly."""
    field = x.field
    xn = x ** n
    images = [xn * normalize(g, field, [(m, field.one)]) * xn for m in basis]
    keys = sorted({k for im in images for k in im.terms} | set(xn.terms))
    pos = {k: i for i, k in enumerate(keys)}
    mat = la.zeros(field, len(keys), len(basis))
    for j, im in enumerate(images):
        for k, c in im.terms.items():
            mat[pos[k]][j] = c
    rhs = [xn.terms.get(k, field.zero) for k in keys]
    if not basis:
        ok = not xn.terms
        return InnerInverseSearch(Element.zero(g, field) if ok else None, 0, 0 if ok else 1, 0)
    sol, ra, rab = la.solve(mat, rhs, field)
    if sol is None:
        return InnerInverseSearch(None, ra, rab, len(basis))
    y = normalize(g, field, [(m, c) for m, c in zip(basis, sol) if c])
    return InnerInverseSearch(y, ra, rab, len(basis))


def solve_inner_inverse_bounded(g: Graph, x: Element, n: int,
                                basis: Sequence[Monomial]) -> Optional[Element]:
    return search_inner_inverse(g, x, n, basis).solution


def cycle_support(g: Graph, c: Path) -> set[str]:
    """Vertices reachable from the cycle that can also reach it."""
    on = {g.s(e) for e in c.edges}
    fwd = _closure(g, on, forward=True)
    bwd = _closure(g, on, forward=False)
    return fwd & bwd


def _closure(g: Graph, start: set, forward: bool) -> set:
    seen, stack = set(start), list(start)
    while stack:
        v = stack.pop()
        nbrs = ([g.r(e) for e in g.out_edges(v)] if forward
                else [g.s(e) for e in g.in_edges(v)])
        for w in nbrs:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def default_basis(g: Graph, c: Path, max_length: int) -> list[Monomial]:
    """Normal monomials of total length <= max_length supported near the cycle."""
    support = cycle_support(g, c)
    out = []
    for m in normal_monomials(g, max_length, vertices=sorted(support)):
        edges = m.real + m.ghost
        if all(g.s(e) in support and g.r(e) in support for e in edges):
            out.append(m)
    return out


def brute_force_inner_inverse_gf2(g: Graph, x: Element, n: int,
                                  basis: Sequence[Monomial]) -> Optional[tuple[int, ...]]:
    """Exhaustive search over GF(2) coefficient vectors; returns one solution or None.

    Uses a Gray-code walk so each step adds one basis image; independent of
    any elimination routine.
    """
    field = x.field
    if not (isinstance(field, PrimeField) and field.p == 2):
        raise ObstructionError("exhaustive search runs over GF(2) only")
    xn = x ** n
    keys: dict = {}

    def mask(el: Element) -> int:
        out = 0
        for k in el.terms:
            if k not in keys:
                keys[k] = len(keys)
            out |= 1 << keys[k]
        return out

    target = mask(xn)
    images = [mask(xn * normalize(g, field, [(m, field.one)]) * xn) for m in basis]
    current, chosen = 0, [0] * len(basis)
    if current == target:
        return tuple(chosen)
    for step in range(1, 2 ** len(basis)):
        bit = (step & -step).bit_length() - 1
        chosen[bit] ^= 1
        current ^= images[bit]
        if current == target:
            return tuple(chosen)
    return None


# -- refutation report ---------------------------------------------------------------


@dataclass
class RefutationReport:
    cycle: tuple[str, ...]
    base: str
    s: int
    n: int
    series: CyclePowerSeries
    commutes: list
    lhs_degree: int
    rhs_degree: int
    witness_index: int
    search: Optional[InnerInverseSearch] = None
    checks: dict = field(default_factory=dict)

    @property
    def contradiction(self) -> bool:
        return (self.lhs_degree > self.rhs_degree and all(self.commutes)
                and all(self.checks.values()))

    def to_json(self) -> dict:
        out = {
            "cycle": list(self.cycle), "base": self.base, "s": self.s, "n": self.n,
            "forced_coefficients": self.series.coeffs,
            "components_commute_with_c": self.commutes,
            "degree_comparison": {
                "lhs": f"2sn+i = {2 * self.s * self.n}+{self.witness_index}",
                "lhs_degree": self.lhs_degree,
                "rhs": f"ns = {self.n * self.s}",
                "rhs_degree": self.rhs_degree,
            },
            "checks": self.checks,
            "verdict": "CONTRADICTION" if self.contradiction else "INCONCLUSIVE",
        }
        if self.search is not None:
            out["linear_system"] = self.search.to_json()
        return out


def refutation_report(g: Graph, c: Path, n: int, t_max: int, field: Field = QQ,
                      basis_length: Optional[int] = None) -> RefutationReport:
    v = _cycle_base(g, c)
    s = len(c.edges)
    series = forced_coefficients(s, n, t_max, field)
    c_el = Element.path(g, c, field)
    commutes = []
    for k in range(t_max + 1):
        a_k = cycle_power(g, c, k, field).scale(series.lambdas[k])
        commutes.append(a_k * c_el == c_el * a_k)
    gam = gamma(g, c, field)
    a0 = Element.vertex(g, v, field)
    lhs = a0 * gam ** (2 * n)
    rhs = gam ** n
    witness_index = 0
    lhs_degree = lhs.top_degree()
    rhs_degree = rhs.top_degree()
    checks = {
        "a0_is_v": series.lambdas[0] == 1,
        "a_s_is_minus_n_c": t_max < 1 or series.lambdas[1] == -n,
        "lhs_degree_is_2sn": lhs_degree == 2 * s * n + witness_index,
        "rhs_degree_is_ns": rhs_degree == n * s,
        "series_consistent": series_consistent(g, c, n, t_max, field) if t_max <= 6 else True,
    }
    search = None
    if basis_length is not None:
        search = search_inner_inverse(g, gam, n, default_basis(g, c, basis_length))
        checks["bounded_search_infeasible"] = search.solution is None
    return RefutationReport(c.edges, v, s, n, series, commutes, lhs_degree, rhs_degree,
                            witness_index, search, checks)
