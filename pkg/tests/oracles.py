"""Brute-force reference computations used as independent oracles in tests.

Nothing here imports the package's linear algebra: spans are enumerated
outright and field arithmetic is redone from the polynomial representation.
"""

from itertools import product

import numpy as np

# irreducible moduli, constant term first (independent copy)
POLYS = {2: (2, (1, 1)), 3: (3, (1, 1)), 4: (2, (1, 1, 1)), 5: (5, (3, 1)), 7: (7, (4, 1)),
         8: (2, (1, 1, 0, 1)), 9: (3, (2, 2, 1)), 16: (2, (1, 1, 0, 0, 1))}


def _digits(a, p, e):
    return [(a // p**i) % p for i in range(e)]


def _pack(d, p):
    return sum(int(x) * p**i for i, x in enumerate(d))


def add(a, b, q):
    p, mod = POLYS[q]
    e = len(mod) - 1
    return _pack([(x + y) % p for x, y in zip(_digits(a, p, e), _digits(b, p, e))], p)


def mul(a, b, q):
    p, mod = POLYS[q]
    e = len(mod) - 1
    da, db = _digits(a, p, e), _digits(b, p, e)
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(2 * e - 2, e - 1, -1):
        c = prod[d]
        for i in range(e + 1):
            prod[d - e + i] = (prod[d - e + i] - c * mod[i]) % p
    return _pack(prod[:e], p)


def span(rows, q):
    rows = [tuple(int(x) for x in r) for r in rows]
    width = len(rows[0]) if rows else 0
    out = set()
    for coeffs in product(range(q), repeat=len(rows)):
        v = [0] * width
        for c, r in zip(coeffs, rows):
            v = [add(a, mul(c, b, q), q) for a, b in zip(v, r)]
        out.add(tuple(v))
    return out


def rank(a, q):
    a = np.asarray(a)
    if a.size == 0:
        return 0
    size = len(span(a, q))
    r = 0
    while q**r < size:
        r += 1
    return r


def vmin(columns, delta):
    """Count surviving cells of an explicit dot grid after each admissible deletion."""
    m, n = max(columns), len(columns)
    grid = [[r < columns[c] for c in range(n)] for r in range(m)]
    best = None
    for i in range(delta):
        cut = delta - 1 - i
        count = sum(grid[r][c] for r in range(i, m) for c in range(n - cut))
        best = count if best is None else min(best, count)
    return best


def min_rank_exhaustive(basis, q):
    """Smallest rank over all nonzero combinations of a list of matrices."""
    basis = [np.asarray(b) for b in basis]
    best = None
    for coeffs in product(range(q), repeat=len(basis)):
        if not any(coeffs):
            continue
        m = np.zeros_like(basis[0], dtype=np.int64)
        for c, b in zip(coeffs, basis):
            m = np.vectorize(lambda x, y: add(int(x), mul(c, int(y), q), q))(m, b)
        r = rank(m, q)
        best = r if best is None else min(best, r)
    return best


def theorem_cardinality(q, n, t):
    """Closed-form lower bound transcribed term by term, branch by branch."""
    if n >= 6:
        if t == 2:
            total = q ** (6 * n) + sum(q ** (2 * (3 * n - i - 1 - 2 * j)) for i in range(1, n - 3) for j in range(i + 1, n + 1))
            total += q ** (6 * n - 18) + 3 * q ** (6 * n - 19)
            if q > 2:
                total += 3 * q ** (6 * n - 20) + q ** (6 * n - 21)
            return total + q**12 + q**8 + 2 * q**4 + q**2 + 1
        base = (t * t + t) * n
        N = (
            q ** (base - 13 * t * t // 4 - 5 * t // 2)
            + q ** (base - 13 * t * t // 4 - 3 * t)
            + 2 * q ** (base - 7 * t * t // 2 - 5 * t // 2)
            + 2 * q ** (base - 7 * t * t // 2 - 3 * t)
            + q ** (base - 15 * t * t // 4 - 5 * t // 2)
            + q ** (base - 15 * t * t // 4 - 3 * t)
        )
        total = q ** (n * t * (t + 1))
        total += sum(q ** ((n - i - 1) * t + (n - j) * t * t) for i in range(1, n - 3) for j in range(i + 1, n + 1))
        return total + q ** (2 * t * t + 2 * t) + q ** (t * t + 2 * t) + 2 * q ** (2 * t) + q**t + N + 1
    assert n == 5
    if t == 2:
        if q > 2:
            return q**30 + q**18 + q**14 + q**12 + 7 * q**10 + 2 * q**9 + q**8 + q**6 + 2 * q**4 + q**2 + 1
        return q**30 + q**18 + q**14 + q**12 + 5 * q**10 + q**8 + q**6 + 2 * q**4 + q**2 + 1
    total = q ** (5 * t * (t + 1)) + sum(q ** (3 * t + (5 - j) * t * t) for j in range(2, 6)) + q ** (t * t + 3 * t)
    total += 2 * q ** (t * t + 5 * t // 2) + 4 * q ** (3 * t * t // 4 + 5 * t // 2) + q ** (7 * t // 2)
    if q >= 4:
        total += q ** (t * t + 2 * t) + q ** (3 * t)
    else:
        total += 2 * q ** (3 * t)
    return total + 2 * q ** (2 * t) + q**t + 1
