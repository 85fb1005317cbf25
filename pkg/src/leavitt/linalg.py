"""Exact linear algebra over Q and GF(p).

Dense matrices are lists of rows. Pivoting takes the first nonzero entry
in a column; there are no numerical concerns over exact fields.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .fields import Field

Matrix = list  # list[list[Scalar]]


def zeros(field: Field, m: int, n: int) -> Matrix:
    z = field.zero
    return [[z] * n for _ in range(m)]


def identity(field: Field, n: int) -> Matrix:
    out = zeros(field, n, n)
    for i in range(n):
        out[i][i] = field.one
    return out


def copy(a: Matrix) -> Matrix:
    return [list(row) for row in a]


def shape(a: Matrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def matmul(a: Matrix, b: Matrix, field: Field) -> Matrix:
    m, k = shape(a)
    k2, n = shape(b)
    if k != k2:
        raise ValueError(f"shape mismatch {shape(a)} x {shape(b)}")
    z = field.zero
    out = []
    for i in range(m):
        row = [z] * n
        ai = a[i]
        for t in range(k):
            x = ai[t]
            if not x:
                continue
            bt = b[t]
            for j in range(n):
                y = bt[j]
                if y:
                    row[j] = row[j] + x * y
        out.append(row)
    return out


def matadd(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matsub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matneg(a: Matrix) -> Matrix:
    return [[-x for x in row] for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def matpow(a: Matrix, k: int, field: Field) -> Matrix:
    out = identity(field, len(a))
    for _ in range(k):
        out = matmul(out, a, field)
    return out


def is_zero(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def hstack(a: Matrix, b: Matrix) -> Matrix:
    return [list(ra) + list(rb) for ra, rb in zip(a, b)]


def rref(a: Matrix, field: Field) -> tuple[Matrix, list[int], Matrix]:
    """Reduced row echelon form.

    Returns ``(R, pivots, P)`` with ``P`` invertible and ``P a = R``.
    """
    m, n = shape(a)
    r = copy(a)
    p = identity(field, m)
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        piv = next((i for i in range(row, m) if r[i][col]), None)
        if piv is None:
            continue
        if piv != row:
            r[row], r[piv] = r[piv], r[row]
            p[row], p[piv] = p[piv], p[row]
        inv = 1 / r[row][col]
        r[row] = [x * inv for x in r[row]]
        p[row] = [x * inv for x in p[row]]
        for i in range(m):
            if i != row and r[i][col]:
                f = r[i][col]
                r[i] = [x - f * y for x, y in zip(r[i], r[row])]
                p[i] = [x - f * y for x, y in zip(p[i], p[row])]
        pivots.append(col)
        row += 1
    return r, pivots, p


def rank(a: Matrix, field: Field) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a, field)[1])


def inverse(a: Matrix, field: Field) -> Matrix:
    n = len(a)
    r, pivots, p = rref(a, field)
    if len(pivots) != n:
        raise ZeroDivisionError("matrix is singular")
    return p


def rank_factorization(a: Matrix, field: Field) -> tuple[Matrix, Matrix, int]:
    """Invertible ``P, Q`` and rank ``r`` with ``P a Q = diag(I_r, 0)``."""
    m, n = shape(a)
    r_mat, pivots, p = rref(a, field)
    r = len(pivots)
    nonpiv = [j for j in range(n) if j not in set(pivots)]
    order = pivots + nonpiv
    # column permutation putting pivot columns first
    perm = zeros(field, n, n)
    for new, old in enumerate(order):
        perm[old][new] = field.one
    # clear the block to the right of the identity
    clear = identity(field, n)
    for i in range(r):
        for k, j in enumerate(nonpiv):
            clear[i][r + k] = -r_mat[i][j]
    q = matmul(perm, clear, field)
    return p, q, r


def diag_identity(field: Field, n: int, r: int) -> Matrix:
    out = zeros(field, n, n)
    for i in range(r):
        out[i][i] = field.one
    return out


def nullspace(a: Matrix, field: Field, ncols: Optional[int] = None) -> list[list]:
    """Basis of {x : a x = 0} as column vectors (lists)."""
    m, n = shape(a)
    if ncols is not None:
        n = ncols
    if m == 0:
        return [[field.one if i == j else field.zero for i in range(n)] for j in range(n)]
    r, pivots, _ = rref(a, field)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        x = [field.zero] * n
        x[f] = field.one
        for i, pc in enumerate(pivots):
            x[pc] = -r[i][f]
        basis.append(x)
    return basis


def column_space(a: Matrix, field: Field) -> list[list]:
    """Basis of the column space: the pivot columns of ``a``."""
    if not a:
        return []
    _, pivots, _ = rref(a, field)
    return [[row[j] for row in a] for j in pivots]


def from_columns(cols: Sequence[Sequence], field: Field, nrows: int) -> Matrix:
    if not cols:
        return [[] for _ in range(nrows)]
    return [[col[i] for col in cols] for i in range(nrows)]


def extend_to_basis(vectors: Sequence[Sequence], field: Field, n: int) -> list[list]:
    """Vectors completing the given independent set to a basis of K^n, from the standard basis."""
    current = [list(v) for v in vectors]
    extra = []
    for j in range(n):
        unit = [field.one if i == j else field.zero for i in range(n)]
        trial = current + extra + [unit]
        if rank(transpose(trial), field) == len(trial):
            extra.append(unit)
        if len(current) + len(extra) == n:
            break
    return extra


def intersection(u: Sequence[Sequence], w: Sequence[Sequence], field: Field, n: int) -> list[list]:
    """Basis of span(u) ∩ span(w)."""
    if not u or not w:
        return []
    # solve sum a_i u_i - sum b_j w_j = 0
    cols = [list(x) for x in u] + [[-y for y in x] for x in w]
    kernel = nullspace(from_columns(cols, field, n), field, len(cols))
    vecs = []
    for k in kernel:
        v = [field.zero] * n
        for coef, x in zip(k[:len(u)], u):
            if coef:
                v = [a + coef * b for a, b in zip(v, x)]
        vecs.append(v)
    if not vecs:
        return []
    return column_space(from_columns(vecs, field, n), field)


def common_complement(u: Sequence[Sequence], w: Sequence[Sequence], field: Field, n: int) -> list[list]:
    """A subspace complementary to both span(u) and span(w), which must have equal dimension.

    Works over any field: write U = I + U', W = I + W' with I = U ∩ W and
    take span(u'_i + w'_i) plus a complement of U + W.
    """
    u = column_space(from_columns(u, field, n), field) if u else []
    w = column_space(from_columns(w, field, n), field) if w else []
    if len(u) != len(w):
        raise ValueError("common complement needs subspaces of equal dimension")
    inter = intersection(u, w, field, n)
    u_extra = extend_within(inter, u, field, n)
    w_extra = extend_within(inter, w, field, n)
    diag = [[a + b for a, b in zip(x, y)] for x, y in zip(u_extra, w_extra)]
    total = inter + u_extra + w_extra
    rest = extend_to_basis(total, field, n)
    return diag + rest


def extend_within(base: Sequence[Sequence], span: Sequence[Sequence], field: Field, n: int) -> list[list]:
    """Vectors from ``span`` completing ``base`` to a basis of span(base + span)."""
    current = [list(v) for v in base]
    extra = []
    for v in span:
        trial = current + extra + [list(v)]
        if rank(transpose(trial), field) == len(trial):
            extra.append(list(v))
    return extra


def solve(a: Matrix, b: Sequence, field: Field) -> tuple[Optional[list], int, int]:
    """Solve ``a x = b``. Returns ``(x or None, rank(a), rank([a|b]))``."""
    m, n = shape(a)
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    r, pivots, _ = rref(aug, field)
    rank_ab = len(pivots)
    rank_a = len([p for p in pivots if p < n])
    if rank_ab != rank_a:
        return None, rank_a, rank_ab
    x = [field.zero] * n
    for i, pc in enumerate(pivots):
        x[pc] = r[i][n]
    return x, rank_a, rank_ab


class SpanBasis:
    """Incrementally maintained echelon basis of a space of sparse vectors.

    Vectors are mappings from comparable keys to nonzero scalars. Each stored
    row has its pivot at its largest key, which makes reduction terminate.
    """

    def __init__(self, field: Field):
        self.field = field
        self.rows: dict[Hashable, dict] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping) -> dict:
        v = {k: c for k, c in vec.items() if c}
        rows = self.rows
        while True:
            hits = [k for k in v if k in rows]
            if not hits:
                return v
            k = max(hits)
            c = v[k]
            for kk, cc in rows[k].items():
                val = v.get(kk)
                val = -c * cc if val is None else val - c * cc
                if val:
                    v[kk] = val
                else:
                    v.pop(kk, None)

    def add(self, vec: Mapping) -> bool:
        """Insert ``vec``; returns True when it enlarged the span."""
        v = self.reduce(vec)
        if not v:
            return False
        k = max(v)
        inv = 1 / v[k]
        self.rows[k] = {kk: c * inv for kk, c in v.items()}
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def extend(self, vecs: Iterable[Mapping]) -> int:
        return sum(self.add(v) for v in vecs)
