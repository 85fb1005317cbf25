"""Independent brute-force oracles over GF(2), written with plain integer arithmetic."""

import itertools


def _mm(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) % 2 for j in range(n))
                 for i in range(n))


def all_mats(n):
    for bits in itertools.product((0, 1), repeat=n * n):
        yield tuple(tuple(bits[i * n:(i + 1) * n]) for i in range(n))


def _eye(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _units(n):
    return [u for u in all_mats(n) if any(_mm(u, w) == _eye(n) for w in all_mats(n))]


def _image(a):
    n = len(a)
    return {tuple(sum(a[i][k] * x[k] for k in range(n)) % 2 for i in range(n))
            for x in itertools.product((0, 1), repeat=n)}


def oracle_units(a):
    return {u for u in _units(len(a)) if _mm(_mm(a, u), a) == a}


def oracle_clean_pairs(a):
    n = len(a)
    zero = tuple([0] * n)
    out = set()
    for e in all_mats(n):
        if _mm(e, e) != e:
            continue
        u = tuple(tuple((a[i][j] - e[i][j]) % 2 for j in range(n)) for i in range(n))
        if u in _UNITS[n] and _image(a) & _image(e) == {zero}:
            out.add((e, u))
    return out


_UNITS = {1: set(_units(1)), 2: set(_units(2))}


def as_bits(mat):
    return tuple(tuple(int(x) for x in row) for row in mat)


def gf2_contract_failures(d, unit_fn, clean_fn) -> int:
    """Run unit_fn/clean_fn on every element of a decomposition over GF(2) with
    blocks of size <= 2; count blocks whose answer lies outside the oracle's sets."""
    f2 = d.field
    bad = 0
    for combo in itertools.product(*[list(all_mats(m)) for m in d.sizes]):
        a = d.backward([[[f2(x) for x in row] for row in m] for m in combo])
        uc, sc = unit_fn(d, a), clean_fn(d, a)
        if not (uc.verify() and sc.verify()):
            bad += 1
            continue
        for m, u, e, v in zip(combo, d.forward(uc.data["u"]), d.forward(sc.data["e"]),
                              d.forward(sc.data["u"])):
            units, clean = oracle_units(m), oracle_clean_pairs(m)
            if as_bits(u) not in units or (as_bits(e), as_bits(v)) not in clean:
                bad += 1
    return bad
