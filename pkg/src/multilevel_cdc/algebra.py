"""Finite fields GF(q) for small q and dense matrix algebra over them.

Elements are encoded as integers 0..q-1 by packing the coefficients of
their polynomial representative in radix p (constant term lowest).  Every
field keeps full addition/multiplication tables, so matrix arithmetic is
plain numpy fancy indexing on ``uint8`` arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

DTYPE = np.uint8

# Conway polynomials, coefficients from the constant term upwards.
MODULI: dict[int, tuple[int, ...]] = {
    2: (1, 1),
    3: (1, 1),
    4: (1, 1, 1),
    5: (3, 1),
    7: (4, 1),
    8: (1, 1, 0, 1),
    9: (2, 2, 1),
    16: (1, 1, 0, 0, 1),
}

SUPPORTED_ORDERS = tuple(sorted(MODULI))


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1:
                break
            return p, e
    raise ValueError(f"{q} is not a prime power")


def is_prime_power(q: int) -> bool:
    try:
        return q >= 2 and _prime_power(q)[0] > 1
    except ValueError:
        return False


class GF:
    """The finite field of order ``q`` with table-driven arithmetic.

    Attributes ``add``, ``sub`` and ``mul`` are ``q x q`` tables; ``neg`` and
    ``inv`` are length-``q`` vectors (``inv[0]`` is 0 by convention).
    """

    def __init__(self, q: int) -> None:
        if q not in MODULI:
            raise ValueError(f"unsupported field order q={q}; choose from {SUPPORTED_ORDERS}")
        self.q = q
        self.p, self.e = _prime_power(q)
        self.modulus = MODULI[q]
        p, e = self.p, self.e
        digits = np.array([[(a // p**i) % p for i in range(e)] for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(e)

        add = (digits[:, None, :] + digits[None, :, :]) % p
        self.add = (add @ weights).astype(DTYPE)
        neg = (-digits) % p
        self.neg = (neg @ weights).astype(DTYPE)

        mul = np.zeros((q, q), dtype=DTYPE)
        for a in range(q):
            for b in range(q):
                mul[a, b] = self._mul_slow(digits[a], digits[b]) @ weights
        self.mul = mul
        self.sub = self.add[:, self.neg]
        inv = np.zeros(q, dtype=DTYPE)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.inv = inv

    def _mul_slow(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p, e = self.p, self.e
        prod = np.zeros(2 * e - 1, dtype=np.int64)
        for i in range(e):
            prod[i : i + e] += a[i] * b
        prod %= p
        mod = self.modulus
        for d in range(2 * e - 2, e - 1, -1):
            c = prod[d]
            if c:
                for i in range(e + 1):
                    prod[d - e + i] = (prod[d - e + i] - c * mod[i]) % p
        return prod[:e]

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("GF", self.q))

    def elements(self) -> range:
        return range(self.q)


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    """Return the (cached) field of order ``q``."""
    return GF(q)


def as_field(gf: GF | int) -> GF:
    return gf if isinstance(gf, GF) else field(int(gf))


def matrix(rows: Sequence[Sequence[int]] | np.ndarray, gf: GF | int) -> np.ndarray:
    """Validate and convert ``rows`` to a ``uint8`` matrix over ``gf``."""
    gf = as_field(gf)
    a = np.asarray(rows, dtype=np.int64)
    if a.ndim != 2:
        if a.size == 0:
            return np.zeros((0, 0), dtype=DTYPE)
        raise ValueError("a matrix must be two-dimensional")
    if a.size and (a.min() < 0 or a.max() >= gf.q):
        raise ValueError(f"entries must be element codes in 0..{gf.q - 1}")
    return a.astype(DTYPE)


def mat_add(a: np.ndarray, b: np.ndarray, gf: GF | int) -> np.ndarray:
    return as_field(gf).add[a, b]


def mat_sub(a: np.ndarray, b: np.ndarray, gf: GF | int) -> np.ndarray:
    return as_field(gf).sub[a, b]


def mat_scale(c: int, a: np.ndarray, gf: GF | int) -> np.ndarray:
    return as_field(gf).mul[c, a]


def mat_mul(a: np.ndarray, b: np.ndarray, gf: GF | int) -> np.ndarray:
    gf = as_field(gf)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} x {b.shape}")
    if gf.e == 1:
        return ((a.astype(np.int64) @ b.astype(np.int64)) % gf.p).astype(DTYPE)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=DTYPE)
    for k in range(a.shape[1]):
        out = gf.add[out, gf.mul[a[:, k, None], b[None, k, :]]]
    return out


def rref(a: np.ndarray, gf: GF | int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns (0-based).

    The pivot in each column is the first nonzero entry at or below the
    current row; the input is not modified.
    """
    gf = as_field(gf)
    r_mat = np.array(a, dtype=DTYPE, copy=True)
    if r_mat.ndim != 2:
        raise ValueError("rref expects a two-dimensional matrix")
    rows, cols = r_mat.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(r_mat[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            r_mat[[r, p]] = r_mat[[p, r]]
        r_mat[r] = gf.mul[gf.inv[r_mat[r, c]], r_mat[r]]
        f = r_mat[:, c].copy()
        f[r] = 0
        hit = np.flatnonzero(f)
        if hit.size:
            r_mat[hit] = gf.sub[r_mat[hit], gf.mul[f[hit, None], r_mat[r][None, :]]]
        pivots.append(c)
        r += 1
    return r_mat, tuple(pivots)


def _rank_gf2(a: np.ndarray) -> int:
    rows = [int("".join("1" if x else "0" for x in row[::-1]) or "0", 2) for row in a]
    rank = 0
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
    return rank


def rank(a: np.ndarray, gf: GF | int) -> int:
    """Rank of ``a`` over GF(q)."""
    gf = as_field(gf)
    a = np.asarray(a)
    if a.size == 0:
        return 0
    if gf.q == 2:
        return _rank_gf2(a)
    return len(rref(a, gf)[1])


def nullspace(a: np.ndarray, gf: GF | int) -> np.ndarray:
    """Basis (as rows) of the right kernel ``{x : a @ x = 0}``."""
    gf = as_field(gf)
    a = np.asarray(a, dtype=DTYPE)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=DTYPE)
    r_mat, pivots = rref(a, gf)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=DTYPE)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = gf.neg[r_mat[row, f]]
    return basis


def _batch_rank_gf2(stack: np.ndarray) -> np.ndarray:
    count, m, n = stack.shape
    bits = (stack.astype(np.uint64) << np.arange(n, dtype=np.uint64)).sum(axis=-1, dtype=np.uint64)
    used = np.zeros((count, m), dtype=bool)
    ranks = np.zeros(count, dtype=np.int64)
    ar = np.arange(count)
    for c in range(n):
        has = ((bits >> np.uint64(c)) & np.uint64(1)).astype(bool)
        cand = has & ~used
        found = cand.any(axis=1)
        if not found.any():
            continue
        piv = cand.argmax(axis=1)
        idx = ar[found]
        pv = piv[found]
        prow = bits[idx, pv]
        elim = cand[idx]
        elim[np.arange(idx.size), pv] = False
        bits[idx] ^= np.where(elim, prow[:, None], np.uint64(0))
        used[idx, pv] = True
        ranks[idx] += 1
    return ranks


def batch_rank(stack: np.ndarray, gf: GF | int) -> np.ndarray:
    """Ranks of a stack of equally shaped matrices, shape ``(N, m, n)``."""
    gf = as_field(gf)
    stack = np.asarray(stack, dtype=DTYPE)
    count, m, n = stack.shape
    if count == 0 or m == 0 or n == 0:
        return np.zeros(count, dtype=np.int64)
    if n > m:
        stack = stack.transpose(0, 2, 1)
        m, n = n, m
    if gf.q == 2 and n <= 64:
        return _batch_rank_gf2(stack)
    work = stack.copy()
    used = np.zeros((count, m), dtype=bool)
    ranks = np.zeros(count, dtype=np.int64)
    ar = np.arange(count)
    for c in range(n):
        cand = (work[:, :, c] != 0) & ~used
        found = cand.any(axis=1)
        if not found.any():
            continue
        idx = ar[found]
        pv = cand[idx].argmax(axis=1)
        prow = work[idx, pv]
        scale = gf.mul[work[idx, :, c], gf.inv[prow[:, c]][:, None]]
        elim = cand[idx]
        elim[np.arange(idx.size), pv] = False
        scale = np.where(elim, scale, 0).astype(DTYPE)
        work[idx] = gf.sub[work[idx], gf.mul[scale[:, :, None], prow[:, None, :]]]
        used[idx, pv] = True
        ranks[idx] += 1
    return ranks


def combine(coeffs: np.ndarray, basis: np.ndarray, gf: GF | int) -> np.ndarray:
    """Linear combinations ``sum_j coeffs[:, j] * basis[j]`` for a batch of coefficient rows."""
    gf = as_field(gf)
    coeffs = np.asarray(coeffs, dtype=DTYPE)
    basis = np.asarray(basis, dtype=DTYPE)
    shape = (coeffs.shape[0],) + basis.shape[1:]
    if basis.shape[0] == 0:
        return np.zeros(shape, dtype=DTYPE)
    flat = basis.reshape(basis.shape[0], -1)
    if gf.e == 1:
        out = (coeffs.astype(np.int64) @ flat.astype(np.int64)) % gf.p
        return out.astype(DTYPE).reshape(shape)
    out = np.zeros((coeffs.shape[0], flat.shape[1]), dtype=DTYPE)
    for j in range(flat.shape[0]):
        out = gf.add[out, gf.mul[coeffs[:, j, None], flat[None, j, :]]]
    return out.reshape(shape)


def index_digits(indices: Iterable[int] | np.ndarray, k: int, q: int) -> np.ndarray:
    """Base-``q`` digits (least significant first) of each index, shape ``(N, k)``."""
    idx = np.asarray(indices, dtype=object if k * np.log2(max(q, 2)) > 62 else np.int64)
    if idx.dtype == object:
        return np.array([[(int(v) // q**j) % q for j in range(k)] for v in idx], dtype=DTYPE).reshape(-1, k)
    powers = q ** np.arange(k, dtype=np.int64)
    return ((idx[:, None] // powers[None, :]) % q).astype(DTYPE)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of GF(q)^n stored through its RREF generator matrix."""

    generator: np.ndarray
    pivots: tuple[int, ...]
    gf: GF = dc_field(repr=False)

    @classmethod
    def from_generator(cls, a: np.ndarray, gf: GF | int, ambient: int | None = None) -> "Subspace":
        gf = as_field(gf)
        a = np.asarray(a, dtype=DTYPE)
        if a.ndim != 2:
            a = a.reshape(0, ambient or 0)
        r_mat, pivots = rref(a, gf)
        return cls(r_mat[: len(pivots)].copy(), pivots, gf)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def ambient(self) -> int:
        return self.generator.shape[1]

    def identifying_vector(self) -> tuple[int, ...]:
        v = [0] * self.ambient
        for p in self.pivots:
            v[p] = 1
        return tuple(v)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subspace)
            and other.gf == self.gf
            and other.pivots == self.pivots
            and np.array_equal(other.generator, self.generator)
        )

    def __hash__(self) -> int:
        return hash((self.gf.q, self.pivots, self.generator.tobytes()))


def subspace_distance(u: Subspace, v: Subspace) -> int:
    """``dim U + dim V - 2 dim(U ∩ V)``, computed as ``2 rank[U; V] - dim U - dim V``."""
    if u.ambient != v.ambient:
        raise ValueError(f"ambient dimensions differ: {u.ambient} != {v.ambient}")
    if u.gf != v.gf:
        raise ValueError("subspaces live over different fields")
    stacked = np.vstack([u.generator, v.generator])
    return 2 * rank(stacked, u.gf) - u.dim - v.dim


def format_matrix(a: np.ndarray, q: int) -> str:
    """Render ``a`` in the text format: a header ``r c q`` then one line per row."""
    a = np.asarray(a)
    lines = [f"{a.shape[0]} {a.shape[1]} {q}"]
    lines += [" ".join(str(int(x)) for x in row) for row in a]
    return "\n".join(lines) + "\n"


def parse_matrices(text: str) -> list[tuple[np.ndarray, int]]:
    """Parse a sequence of matrices written by :func:`format_matrix`."""
    tokens = [line.split() for line in text.splitlines() if line.strip()]
    out = []
    i = 0
    while i < len(tokens):
        if len(tokens[i]) != 3:
            raise ValueError(f"line {i + 1}: expected header 'r c q'")
        r, c, q = (int(x) for x in tokens[i])
        rows = tokens[i + 1 : i + 1 + r]
        if len(rows) != r or any(len(row) != c for row in rows):
            raise ValueError(f"matrix at line {i + 1} is truncated or ragged")
        a = np.array([[int(x) for x in row] for row in rows], dtype=np.int64).reshape(r, c)
        out.append((matrix(a, q) if a.size else np.zeros((r, c), dtype=DTYPE), q))
        i += 1 + r
    return out


def parse_matrix(text: str) -> tuple[np.ndarray, int]:
    mats = parse_matrices(text)
    if len(mats) != 1:
        raise ValueError(f"expected one matrix, found {len(mats)}")
    return mats[0]
