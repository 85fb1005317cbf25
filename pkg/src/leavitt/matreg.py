"""Matrix decomposition of L_K(E) for finite acyclic graphs, and regularity certificates.

For a finite acyclic graph with no infinite emitters,

    L_K(E) = direct sum over sinks w of M_{m_w}(K),

where m_w counts the paths ending at w. A monomial p q* with common range
v expands by CK2 into sum_alpha (p alpha)(q alpha)* over the paths alpha
from v to a sink; (p alpha)(q alpha)* is the matrix unit at (p alpha, q alpha)
in the block of r(alpha).

Certificates are solved blockwise on matrices and mapped back to elements;
each one re-verifies by multiplication in L_K(E) alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import linalg as la
from .algebra import Element, Monomial, is_normal, normalize
from .fields import QQ, Field
from .graph import Graph, find_cycle, paths_to


class PreconditionError(ValueError):
    pass


class CertificateError(ValueError):
    pass


def _require_finite_acyclic(g: Graph) -> None:
    if g.infinite_emitters:
        raise PreconditionError("graph has infinite emitters")
    if find_cycle(g) is not None:
        raise PreconditionError("graph has a cycle")


@dataclass(frozen=True)
class Block:
    sink: str
    paths: tuple[tuple[str, ...], ...]      # basis: paths ending at the sink
    index: dict                               # path -> position

    @property
    def size(self) -> int:
        return len(self.paths)


@dataclass(frozen=True)
class MatDecomposition:
    graph: Graph
    field: Field
    blocks: tuple[Block, ...]
    _to_sinks: dict = field(repr=False)      # vertex -> paths from it to sinks

    @property
    def sinks(self) -> list[str]:
        return [b.sink for b in self.blocks]

    @property
    def sizes(self) -> list[int]:
        return [b.size for b in self.blocks]

    def block_of(self, sink: str) -> int:
        for i, b in enumerate(self.blocks):
            if b.sink == sink:
                return i
        raise KeyError(sink)

    def zero_blocks(self) -> list:
        return [la.zeros(self.field, b.size, b.size) for b in self.blocks]

    def identity_blocks(self) -> list:
        return [la.identity(self.field, b.size) for b in self.blocks]

    def forward(self, a: Element) -> list:
        """The image of ``a`` as a list of square matrices, one per sink."""
        if a.graph != self.graph:
            raise ValueError("element lives over a different graph")
        mats = self.zero_blocks()
        g = self.graph
        for m, c in a.terms.items():
            for alpha in self._to_sinks[m.vertex]:
                sink = g.r(alpha[-1]) if alpha else m.vertex
                i = self._block_pos[sink]
                blk = self.blocks[i]
                row = blk.index[m.real + alpha]
                col = blk.index[m.ghost + alpha]
                mats[i][row][col] = mats[i][row][col] + c
        return mats

    def backward(self, mats: Sequence) -> Element:
        """The element sum A_i[p][q] p q* over all blocks, in normal form."""
        raw = []
        for blk, mat in zip(self.blocks, mats):
            for i, p in enumerate(blk.paths):
                for j, q in enumerate(blk.paths):
                    c = mat[i][j]
                    if c:
                        raw.append((Monomial(p, q, blk.sink), c))
        return normalize(self.graph, self.field, raw)

    def matrix_unit(self, sink: str, p: Sequence[str], q: Sequence[str]) -> Element:
        blk = self.blocks[self.block_of(sink)]
        if tuple(p) not in blk.index or tuple(q) not in blk.index:
            raise KeyError("paths do not end at this sink")
        return normalize(self.graph, self.field, [(Monomial(tuple(p), tuple(q), sink), self.field.one)])

    @property
    def _block_pos(self) -> dict:
        return {b.sink: i for i, b in enumerate(self.blocks)}

    def identity(self) -> Element:
        return Element.identity(self.graph, self.field)


def decompose(g: Graph, field: Field = QQ) -> MatDecomposition:
    _require_finite_acyclic(g)
    blocks = []
    for w in g.sinks():
        ps = tuple(p.edges for p in paths_to(g, w))
        blocks.append(Block(w, ps, {p: i for i, p in enumerate(ps)}))
    to_sinks = {v: [] for v in g.vertices}
    for blk in blocks:
        for p in blk.paths:
            start = g.s(p[0]) if p else blk.sink
            to_sinks[start].append(p)
    return MatDecomposition(g, field, tuple(blocks), to_sinks)


def dimension(g: Graph) -> int:
    """Number of irreducible monomials p q*, counted directly from the rewrite rule."""
    _require_finite_acyclic(g)
    total = 0
    for v in g.vertices:
        ending = [p.edges for p in paths_to(g, v)]
        for p in ending:
            for q in ending:
                if is_normal(g, Monomial(p, q, v)):
                    total += 1
    return total


# -- certificates --------------------------------------------------------------


@dataclass(frozen=True)
class RegularityCertificate:
    kind: str                 # vonNeumann | drazin | piRegular | unitRegular | specialClean
    subject: Element
    data: dict                # witness elements and integers

    def verify(self) -> bool:
        return verify_certificate(self)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "subject": str(self.subject)}
        for k, v in self.data.items():
            out[k] = v if isinstance(v, int) else str(v)
        out["verified"] = self.verify()
        return out


def _power(a: Element, n: int) -> Element:
    return a ** n


def verify_certificate(c: RegularityCertificate) -> bool:
    """Re-check a certificate using multiplication in L_K(E) only."""
    a, d = c.subject, c.data
    one = Element.identity(a.graph, a.field)
    if c.kind == "vonNeumann":
        return a * d["y"] * a == a
    if c.kind == "drazin":
        n, x = d["n"], d["x"]
        if n < 1:
            return False
        an = _power(a, n)
        an1 = an * a
        return a * x == x * a and an1 * x == an and x * an1 == an
    if c.kind == "piRegular":
        n, y = d["n"], d["y"]
        if n < 1:
            return False
        an = _power(a, n)
        return an * y * an == an
    if c.kind == "unitRegular":
        u, ui = d["u"], d["u_inv"]
        return u * ui == one and ui * u == one and a * u * a == a
    if c.kind == "specialClean":
        e, u, ui, q = d["e"], d["u"], d["u_inv"], d["q"]
        # q a = a and q e = 0 force aR ∩ eR = 0
        return (e * e == e and e + u == a and u * ui == one and ui * u == one
                and q * a == a and (q * e).is_zero())
    raise CertificateError(f"unknown certificate kind {c.kind!r}")


def _blockwise(d: MatDecomposition, a: Element, fn):
    return [fn(m) for m in d.forward(a)]


def _reflexive_inverse(mat, field):
    p, q, r = la.rank_factorization(mat, field)
    dmat = la.diag_identity(field, len(mat), r)
    return la.matmul(la.matmul(q, dmat, field), p, field)


def vn_inverse(d: MatDecomposition, a: Element) -> RegularityCertificate:
    """Inner inverse y with a y a = a: blockwise Q D P where P A Q = D = diag(I_r, 0)."""
    y = d.backward(_blockwise(d, a, lambda m: _reflexive_inverse(m, d.field)))
    return RegularityCertificate("vonNeumann", a, {"y": y})


def drazin_index(mat, field) -> int:
    """Least k >= 0 with rank(A^k) = rank(A^(k+1))."""
    n = len(mat)
    prev = n
    power = la.identity(field, n)
    for k in range(n + 1):
        power = la.matmul(power, mat, field)
        rk = la.rank(power, field)
        if rk == prev:
            return k
        prev = rk
    return n


def drazin_inverse(mat, field):
    """Drazin inverse via the core-nilpotent decomposition."""
    n = len(mat)
    if n == 0:
        return [], 0
    k = drazin_index(mat, field)
    ak = la.matpow(mat, k, field)
    rng = la.column_space(ak, field)
    ker = la.nullspace(ak, field, n)
    s = la.from_columns(rng + ker, field, n)
    s_inv = la.inverse(s, field)
    core_nil = la.matmul(la.matmul(s_inv, mat, field), s, field)
    r = len(rng)
    core = [row[:r] for row in core_nil[:r]]
    core_inv = la.inverse(core, field) if r else []
    mid = la.zeros(field, n, n)
    for i in range(r):
        for j in range(r):
            mid[i][j] = core_inv[i][j]
    return la.matmul(la.matmul(s, mid, field), s_inv, field), k


def drazin_witness(d: MatDecomposition, a: Element) -> RegularityCertificate:
    mats = d.forward(a)
    xs, n = [], 1
    for m in mats:
        x, k = drazin_inverse(m, d.field)
        xs.append(x)
        n = max(n, k)
    return RegularityCertificate("drazin", a, {"n": n, "x": d.backward(xs)})


def pi_witness_from_drazin(c: RegularityCertificate) -> RegularityCertificate:
    """From a x = x a and a^(n+1) x = a^n, conclude a^n x^n a^n = a^n."""
    if c.kind != "drazin" or not verify_certificate(c):
        raise CertificateError("expected a valid drazin certificate")
    n, x = c.data["n"], c.data["x"]
    return RegularityCertificate("piRegular", c.subject, {"n": n, "y": _power(x, n)})


def _unit_factor(mat, field):
    p, q, _ = la.rank_factorization(mat, field)
    u = la.matmul(q, p, field)
    u_inv = la.matmul(la.inverse(p, field), la.inverse(q, field), field)
    return u, u_inv


def unit_regular_inverse(d: MatDecomposition, a: Element) -> RegularityCertificate:
    """A unit u = Q P (P A Q = diag(I_r, 0)) with a u a = a."""
    us, uis = [], []
    for m in d.forward(a):
        u, ui = _unit_factor(m, d.field)
        us.append(u)
        uis.append(ui)
    return RegularityCertificate("unitRegular", a,
                                 {"u": d.backward(us), "u_inv": d.backward(uis)})


def special_clean_matrix(mat, field, unit=None):
    """Return (E, U, U_inv, Q) with A = E + U, E idempotent, U a unit, A K^n ∩ E K^n = 0.

    Q = A u (u any unit with A u A = A) is the projection onto im(A) along
    C = im(1 - A u). E projects onto C along a common complement H of C and
    ker(A); then A - E is injective: (A - E)(h + c) = 0 gives
    A(h + c) = c in im(A) ∩ C = 0, so c = 0 and h in H ∩ ker(A) = 0.
    """
    n = len(mat)
    if n == 0:
        return [], [], [], []
    if unit is None:
        unit, _ = _unit_factor(mat, field)
    q = la.matmul(mat, unit, field)
    one = la.identity(field, n)
    c_space = la.column_space(la.matsub(one, q), field)
    ker = la.nullspace(mat, field, n)
    h_space = la.common_complement(c_space, ker, field, n)
    s = la.from_columns(h_space + c_space, field, n)
    s_inv = la.inverse(s, field)
    proj = la.zeros(field, n, n)
    for i in range(len(h_space), n):
        proj[i][i] = field.one
    e = la.matmul(la.matmul(s, proj, field), s_inv, field)
    u = la.matsub(mat, e)
    u_inv = la.inverse(u, field)
    return e, u, u_inv, q


def column_spaces_meet_trivially(a, e, field) -> bool:
    """rank([A | E]) = rank(A) + rank(E)."""
    return la.rank(la.hstack(a, e), field) == la.rank(a, field) + la.rank(e, field)


def special_clean(d: MatDecomposition, a: Element,
                  unit_cert: Optional[RegularityCertificate] = None) -> RegularityCertificate:
    if unit_cert is None:
        unit_cert = unit_regular_inverse(d, a)
    units = d.forward(unit_cert.data["u"])
    parts = [special_clean_matrix(m, d.field, u) for m, u in zip(d.forward(a), units)]
    for m, (e, _, _, _) in zip(d.forward(a), parts):
        if m and not column_spaces_meet_trivially(m, e, d.field):
            raise CertificateError("constructed idempotent meets aR")
    e = d.backward([p[0] for p in parts])
    u = d.backward([p[1] for p in parts])
    ui = d.backward([p[2] for p in parts])
    q = d.backward([p[3] for p in parts])
    return RegularityCertificate("specialClean", a, {"e": e, "u": u, "u_inv": ui, "q": q})


def corner_drazin(d: MatDecomposition, idempotent_units: dict, a: Element) -> Element:
    """Drazin inverse of ``a`` computed inside the corner v L v.

    ``idempotent_units`` maps a sink to the basis positions whose diagonal
    matrix units sum to v; ``a`` must lie in v L v.
    """
    mats = d.forward(a)
    out = d.zero_blocks()
    for i, blk in enumerate(d.blocks):
        idx = sorted(idempotent_units.get(blk.sink, ()))
        if not idx:
            continue
        sub = [[mats[i][r][c] for c in idx] for r in idx]
        x, _ = drazin_inverse(sub, d.field)
        for a_, r in enumerate(idx):
            for b_, c in enumerate(idx):
                out[i][r][c] = x[a_][b_]
    return d.backward(out)


def diagonal_idempotent(d: MatDecomposition, idempotent_units: dict) -> Element:
    mats = d.zero_blocks()
    for i, blk in enumerate(d.blocks):
        for r in idempotent_units.get(blk.sink, ()):
            mats[i][r][r] = d.field.one
    return d.backward(mats)
