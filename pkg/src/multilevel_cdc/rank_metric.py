"""Linear rank-metric codes: Gabidulin MRD codes, minimum-rank checks and
the block constructions used to assemble Ferrers-diagram codes."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterator

import numpy as np

from .algebra import (
    DTYPE,
    GF,
    as_field,
    batch_rank,
    combine,
    format_matrix,
    index_digits,
    mat_mul,
    nullspace,
    parse_matrices,
    rank,
)
from .ferrers import FerrersDiagram

DEFAULT_BUDGET = 1 << 20


# --------------------------------------------------------------------------
# GF(q^N) as GF(q)[x] / (f)


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class _PolyOps:
    """Polynomial arithmetic over a base field, coefficients low to high."""

    def __init__(self, gf: GF) -> None:
        self.gf = gf
        self.add = gf.add.tolist()
        self.sub = gf.sub.tolist()
        self.mul = gf.mul.tolist()
        self.inv = gf.inv.tolist()

    @staticmethod
    def trim(a: list[int]) -> list[int]:
        while a and a[-1] == 0:
            a.pop()
        return a

    def polymul(self, a: list[int], b: list[int]) -> list[int]:
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        add, mul = self.add, self.mul
        for i, x in enumerate(a):
            if x:
                row = mul[x]
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add[out[i + j]][row[y]]
        return self.trim(out)

    def polymod(self, a: list[int], f: list[int]) -> list[int]:
        a = self.trim(list(a))
        df = len(f) - 1
        lead_inv = self.inv[f[-1]]
        sub, mul = self.sub, self.mul
        while len(a) - 1 >= df:
            c = mul[a[-1]][lead_inv]
            shift = len(a) - 1 - df
            for i, y in enumerate(f):
                if y:
                    a[shift + i] = sub[a[shift + i]][mul[c][y]]
            self.trim(a)
        return a

    def polysub(self, a: list[int], b: list[int]) -> list[int]:
        n = max(len(a), len(b))
        a = a + [0] * (n - len(a))
        b = b + [0] * (n - len(b))
        return self.trim([self.sub[x][y] for x, y in zip(a, b)])

    def gcd(self, a: list[int], b: list[int]) -> list[int]:
        a, b = self.trim(list(a)), self.trim(list(b))
        while b:
            a, b = b, self.polymod(a, b)
        return a

    def powmod(self, a: list[int], e: int, f: list[int]) -> list[int]:
        result = [1]
        base = self.polymod(a, f)
        while e:
            if e & 1:
                result = self.polymod(self.polymul(result, base), f)
            base = self.polymod(self.polymul(base, base), f)
            e >>= 1
        return result

    def is_irreducible(self, f: list[int]) -> bool:
        deg = len(f) - 1
        if deg <= 1:
            return deg == 1
        q = self.gf.q
        x = [0, 1]
        frob = [x]
        h = x
        for _ in range(deg):
            h = self.powmod(h, q, f)
            frob.append(h)
        if self.polysub(frob[deg], x):
            return False
        for r in _prime_factors(deg):
            g = self.gcd(f, self.polysub(frob[deg // r], x))
            if len(g) > 1:
                return False
        return True


@lru_cache(maxsize=None)
def extension_modulus(q: int, degree: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of ``degree`` over GF(q).

    Candidates are ordered by the base-q integer formed by their lower
    coefficients, so the choice is fixed for each ``(q, degree)``.
    """
    ops = _PolyOps(as_field(q))
    if degree == 1:
        return (0, 1)
    for idx in range(q**degree):
        low = [(idx // q**i) % q for i in range(degree)]
        if low[0] == 0:
            continue
        f = low + [1]
        if ops.is_irreducible(f):
            return tuple(f)
    raise RuntimeError(f"no irreducible polynomial of degree {degree} over GF({q})")


# --------------------------------------------------------------------------
# Codes


@dataclass(eq=False)
class LinearMatrixCode:
    """An F_q-linear space of ``m x n`` matrices given by a basis ``(k, m, n)``."""

    gf: GF
    m: int
    n: int
    basis: np.ndarray
    delta: int
    support: FerrersDiagram | None = None
    label: str = dc_field(default="", compare=False)

    def __post_init__(self) -> None:
        self.gf = as_field(self.gf)
        self.basis = np.asarray(self.basis, dtype=DTYPE).reshape(-1, self.m, self.n)
        k = self.basis.shape[0]
        if k and rank(self.basis.reshape(k, -1), self.gf) != k:
            raise ValueError("basis matrices are linearly dependent")
        if self.support is not None:
            if self.support.n != self.n or self.support.m > self.m:
                raise ValueError(f"support {self.support} does not fit a {self.m}x{self.n} frame")
            if not self.respects_support():
                raise ValueError(f"a basis matrix has entries outside the support {self.support}")

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def size(self) -> int:
        return self.gf.q**self.dim

    def support_mask(self) -> np.ndarray:
        mask = np.zeros((self.m, self.n), dtype=bool)
        if self.support is not None and not self.support.is_empty:
            mask[: self.support.m] = self.support.mask()
        elif self.support is None:
            mask[:] = True
        return mask

    def respects_support(self) -> bool:
        if self.support is None:
            return True
        off = ~self.support_mask()
        return not self.basis[:, off].any()

    def codewords(self, coeffs: np.ndarray) -> np.ndarray:
        return combine(coeffs, self.basis, self.gf)

    def codeword(self, index: int) -> np.ndarray:
        """The ``index``-th codeword under base-q coefficient ordering (index 0 is zero)."""
        if not 0 <= index < self.size:
            raise IndexError(f"codeword index {index} out of range for {self.size} codewords")
        return self.codewords(index_digits([index], self.dim, self.gf.q))[0]

    def transpose(self) -> "LinearMatrixCode":
        """Reflect every codeword in the anti-diagonal.

        This is the matrix transpose followed by reversing rows and columns;
        ranks are unchanged and a Ferrers support maps to its transpose.
        """
        support = self.support.transpose() if self.support is not None and self.support.m == self.m else None
        basis = self.basis[:, ::-1, ::-1].transpose(0, 2, 1)
        return LinearMatrixCode(self.gf, self.n, self.m, basis, self.delta, support, label=self.label)

    def truncate(self, k: int) -> "LinearMatrixCode":
        """Subcode spanned by the first ``k`` basis matrices."""
        return LinearMatrixCode(self.gf, self.m, self.n, self.basis[:k], self.delta, self.support)

    def dump(self) -> str:
        head = f"{self.dim} {self.m} {self.n} {self.gf.q} {self.delta}\n"
        return head + "".join(format_matrix(b, self.gf.q) for b in self.basis)

    @classmethod
    def load(cls, text: str) -> "LinearMatrixCode":
        header, _, rest = text.lstrip().partition("\n")
        k, m, n, q, delta = (int(x) for x in header.split())
        mats = parse_matrices(rest)
        if len(mats) != k or any(a.shape != (m, n) or mq != q for a, mq in mats):
            raise ValueError("basis dump does not match its header")
        basis = np.array([a for a, _ in mats], dtype=DTYPE).reshape(k, m, n)
        return cls(as_field(q), m, n, basis, delta)

    def __repr__(self) -> str:
        sup = f", support={self.support}" if self.support is not None else ""
        return f"LinearMatrixCode([{self.m}x{self.n}, {self.dim}, {self.delta}]_{self.gf.q}{sup})"


def zero_code(gf: GF | int, m: int, n: int, delta: int, support: FerrersDiagram | None = None) -> LinearMatrixCode:
    return LinearMatrixCode(as_field(gf), m, n, np.zeros((0, m, n), dtype=DTYPE), delta, support)


@lru_cache(maxsize=256)
def _gabidulin_basis(m: int, n: int, delta: int, q: int) -> np.ndarray:
    gf = as_field(q)
    big, small = max(m, n), min(m, n)
    k = small - delta + 1
    f = list(extension_modulus(q, big))
    ops = _PolyOps(gf)

    def coords(a: list[int]) -> list[int]:
        return a + [0] * (big - len(a))

    # frob[j][i] = (x^i)^(q^j) for evaluation point x^i
    frob = []
    points = [ops.polymod([0] * i + [1], f) for i in range(small)]
    cur = points
    for _ in range(k):
        frob.append(cur)
        cur = [ops.powmod(g, q, f) for g in cur]
    basis = np.zeros((k * big, big, small), dtype=DTYPE)
    for j in range(k):
        for b in range(big):
            beta = [0] * b + [1]
            for i in range(small):
                basis[j * big + b, :, i] = coords(ops.polymod(ops.polymul(beta, frob[j][i]), f))
    if m < n:
        basis = basis.transpose(0, 2, 1)
    return np.ascontiguousarray(basis)


def gabidulin(m: int, n: int, delta: int, q: GF | int) -> LinearMatrixCode:
    """Linear MRD code of ``m x n`` matrices over GF(q) with minimum rank ``delta``.

    Codewords are evaluations of linearized polynomials ``sum_j a_j y^(q^j)``,
    ``j < min(m, n) - delta + 1``, at the points ``1, x, ..., x^(min-1)`` of
    GF(q^max(m, n)); coordinates of each image form one column, and the
    result is transposed when ``m < n``.
    """
    gf = as_field(q)
    if not 1 <= delta <= min(m, n):
        raise ValueError(f"delta={delta} must lie in 1..min(m, n)={min(m, n)}")
    basis = _gabidulin_basis(m, n, delta, gf.q).copy()
    return LinearMatrixCode(gf, m, n, basis, delta, FerrersDiagram.full(m, n), label="gabidulin")


def gabidulin_dimension(m: int, n: int, delta: int) -> int:
    return max(m, n) * (min(m, n) - delta + 1)


# --------------------------------------------------------------------------
# Minimum rank


@dataclass(frozen=True)
class MinRankVerdict:
    kind: str  # "exact", "sampled" or "vacuous"
    min_rank: int | None
    count: int
    seed: int | None = None

    def passes(self, bound: int) -> bool:
        return self.kind == "vacuous" or (self.min_rank is not None and self.min_rank >= bound)


def iter_codeword_batches(
    code: LinearMatrixCode, start: int = 1, stop: int | None = None, chunk: int = 1 << 15
) -> Iterator[np.ndarray]:
    """Codewords with indices in ``[start, stop)`` in chunks (base-q coefficient order)."""
    stop = code.size if stop is None else stop
    for lo in range(start, stop, chunk):
        hi = min(lo + chunk, stop)
        yield code.codewords(index_digits(np.arange(lo, hi), code.dim, code.gf.q))


def random_coefficients(gf: GF, k: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` uniformly random nonzero coefficient vectors of length ``k``."""
    out = rng.integers(0, gf.q, size=(count, k), dtype=np.int64)
    zero = ~out.any(axis=1)
    while zero.any():
        out[zero] = rng.integers(0, gf.q, size=(int(zero.sum()), k), dtype=np.int64)
        zero = ~out.any(axis=1)
    return out.astype(DTYPE)


def sampler(seed: int) -> np.random.Generator:
    """Counter-based generator so independent streams are replayable from ``seed``."""
    return np.random.Generator(np.random.Philox(seed))


def code_min_rank(code: LinearMatrixCode, budget: int = DEFAULT_BUDGET, seed: int = 0) -> MinRankVerdict:
    """Exact minimum rank when ``q^k <= budget``; otherwise a sampled estimate over ``budget`` codewords."""
    if code.dim == 0:
        return MinRankVerdict("vacuous", None, 0)
    if code.size <= budget:
        best = None
        for batch in iter_codeword_batches(code):
            r = int(batch_rank(batch, code.gf).min())
            best = r if best is None else min(best, r)
        return MinRankVerdict("exact", best, code.size - 1)
    rng = sampler(seed)
    best = None
    done = 0
    while done < budget:
        count = min(1 << 15, budget - done)
        coeffs = random_coefficients(code.gf, code.dim, count, rng)
        r = int(batch_rank(code.codewords(coeffs), code.gf).min())
        best = r if best is None else min(best, r)
        done += count
    return MinRankVerdict("sampled", best, done, seed)


# --------------------------------------------------------------------------
# Constructions


def restrict_to_support(code: LinearMatrixCode, support: FerrersDiagram) -> LinearMatrixCode:
    """Subcode of ``code`` whose codewords vanish outside ``support``."""
    mask = np.zeros((code.m, code.n), dtype=bool)
    if not support.is_empty:
        mask[: support.m] = support.mask()
    off = ~mask
    constraints = code.basis[:, off].T  # rows: off-support cells, cols: basis index
    kernel = nullspace(constraints, code.gf) if constraints.shape[0] else np.eye(code.dim, dtype=DTYPE)
    basis = combine(kernel, code.basis, code.gf) if kernel.shape[0] else np.zeros((0, code.m, code.n), dtype=DTYPE)
    return LinearMatrixCode(code.gf, code.m, code.n, basis, code.delta, support)


def mrd_subfilter(
    diagram: FerrersDiagram, delta: int, q: GF | int, orientation: str = "best"
) -> LinearMatrixCode:
    """Largest Gabidulin subcode supported on ``diagram``.

    ``orientation`` is ``"as-is"`` (an ``m x n`` MRD code), ``"transposed"``
    (built on the transpose and transposed back) or ``"best"`` (the larger of
    the two, ties going to ``"as-is"``).
    """
    gf = as_field(q)
    m, n = diagram.m, diagram.n
    if not 1 <= delta <= min(m, n):
        raise ValueError(f"delta={delta} must lie in 1..{min(m, n)} for diagram {diagram}")
    if orientation == "best":
        a = mrd_subfilter(diagram, delta, gf, "as-is")
        b = mrd_subfilter(diagram, delta, gf, "transposed")
        return b if b.dim > a.dim else a
    if orientation == "as-is":
        code = restrict_to_support(gabidulin(m, n, delta, gf), diagram)
    elif orientation == "transposed":
        code = restrict_to_support(gabidulin(n, m, delta, gf), diagram.transpose()).transpose()
    else:
        raise ValueError(f"unknown orientation {orientation!r}")
    code.label = f"subfilter:{orientation}"
    return code


def embed(code: LinearMatrixCode, diagram: FerrersDiagram, col_offset: int = 0) -> LinearMatrixCode:
    """Place ``code`` in the top rows of ``diagram``'s frame, starting at column ``col_offset``."""
    m, n = diagram.m, diagram.n
    if code.m > m or code.n + col_offset > n:
        raise ValueError(f"{code} does not fit inside {diagram} at column {col_offset}")
    basis = np.zeros((code.dim, m, n), dtype=DTYPE)
    basis[:, : code.m, col_offset : col_offset + code.n] = code.basis
    return LinearMatrixCode(code.gf, m, n, basis, code.delta, diagram, label=code.label)


def combine_codes(c1: LinearMatrixCode, c2: LinearMatrixCode, diagram: FerrersDiagram) -> LinearMatrixCode:
    """Block-diagonal pairing ``[A_i D; 0 B_i]`` (with ``D = 0``) of two codes of equal dimension.

    ``c1`` occupies the top-left corner and ``c2`` the bottom-right corner of
    ``diagram``; nonzero codewords have both blocks nonzero, so ranks add.
    """
    if c1.gf != c2.gf:
        raise ValueError("codes live over different fields")
    if c1.dim != c2.dim:
        raise ValueError(f"dimension mismatch: {c1.dim} != {c2.dim}")
    m, n = diagram.m, diagram.n
    m3 = m - c2.m
    n3 = n - c1.n
    if m3 < c1.m or n3 < c2.n or m3 < 0 or n3 < 0:
        raise ValueError(f"{diagram} cannot hold a {c1.m}x{c1.n} and a {c2.m}x{c2.n} block")
    cols = diagram.columns
    if any(g > m3 for g in cols[: c1.n]) or any(g < m3 for g in cols[c1.n :]):
        raise ValueError(f"{diagram} does not split as [[F1, D], [0, F2]] with a {m3}-row top band")
    basis = np.zeros((c1.dim, m, n), dtype=DTYPE)
    basis[:, : c1.m, : c1.n] = c1.basis
    basis[:, m3:, n - c2.n :] = c2.basis
    code = LinearMatrixCode(c1.gf, m, n, basis, c1.delta + c2.delta, diagram, label="combine")
    return code


def upper_block_pair(
    c1: LinearMatrixCode, c2: LinearMatrixCode, sigma: str = "identity", diagram: FerrersDiagram | None = None
) -> LinearMatrixCode:
    """The code ``{[A B; 0 sigma(A)] : A in c1, B in c2}``.

    ``B`` fills an ``m3 x n3`` top band to the right of ``A``; ``sigma(A)`` sits
    right-aligned below it.  Its minimum rank is at least
    ``min(2 * d(c1), d(c2))`` because ``rank [A B; 0 C] >= rank A + rank C``.
    """
    if c1.gf != c2.gf:
        raise ValueError("codes live over different fields")
    if sigma not in ("identity", "transpose"):
        raise ValueError(f"sigma must be 'identity' or 'transpose', got {sigma!r}")
    m1, n1 = c1.m, c1.n
    m3, n3 = c2.m, c2.n
    m2, n2 = (m1, n1) if sigma == "identity" else (n1, m1)
    if m1 > m3 or n2 > n3:
        raise ValueError(f"shape mismatch: A is {m1}x{n1}, B is {m3}x{n3}, sigma(A) is {m2}x{n2}")
    m, n = m3 + m2, n1 + n3
    layout = FerrersDiagram([m1] * n1 + [m3] * (n3 - n2) + [m] * n2)
    if diagram is None:
        diagram = layout
    elif diagram.n != n or diagram.m != m or not diagram.contains(layout):
        raise ValueError(f"block layout {layout} is not inside {diagram}")
    basis = np.zeros((c1.dim + c2.dim, m, n), dtype=DTYPE)
    for i, a in enumerate(c1.basis):
        basis[i, :m1, :n1] = a
        basis[i, m3:, n - n2 :] = a if sigma == "identity" else a.T
    basis[c1.dim :, :m3, n1:] = c2.basis
    if c2.dim == 0:
        delta = 2 * c1.delta
    elif c1.dim == 0:
        delta = c2.delta
    else:
        delta = min(2 * c1.delta, c2.delta)
    return LinearMatrixCode(c1.gf, m, n, basis, delta, diagram, label=f"upper-block:{sigma}")


def _random_invertible(gf: GF, size: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        a = rng.integers(0, gf.q, size=(size, size)).astype(DTYPE)
        if rank(a, gf) == size:
            return a


def twist(code: LinearMatrixCode, trial: int, seed: int = 0) -> LinearMatrixCode:
    """The equivalent code ``P C Q`` for invertible ``P, Q`` drawn from stream ``(seed, trial)``.

    Rank distances are preserved, while the intersection with a Ferrers
    support can grow beyond what the plain Gabidulin code gives.
    """
    gf = code.gf
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, trial])))
    p = _random_invertible(gf, code.m, rng)
    q = _random_invertible(gf, code.n, rng)
    basis = np.array([mat_mul(mat_mul(p, b, gf), q, gf) for b in code.basis], dtype=DTYPE)
    return LinearMatrixCode(gf, code.m, code.n, basis.reshape(code.basis.shape), code.delta)


def twisted_subfilter(
    diagram: FerrersDiagram, delta: int, q: GF | int, target: int, trials: int, seed: int = 0, start: int = 0
) -> tuple[LinearMatrixCode, int | None]:
    """Search twists of the ``m x n`` Gabidulin code for an F-supported subcode of dimension ``target``.

    Returns the best code seen and the trial index that reached ``target``
    (``None`` if the budget ran out first).  Trials are independent streams,
    so a known index rebuilds its code directly via ``start=index, trials=1``.
    """
    gf = as_field(q)
    base = gabidulin(diagram.m, diagram.n, delta, gf)
    mask = np.zeros((diagram.m, diagram.n), dtype=bool)
    mask[:] = diagram.mask()
    off = ~mask
    best: LinearMatrixCode | None = None
    for trial in range(start, start + trials):
        cand = twist(base, trial, seed)
        kernel_rank = rank(cand.basis[:, off].T, gf)
        if best is not None and base.dim - kernel_rank <= best.dim:
            continue
        best = restrict_to_support(cand, diagram)
        best.label = f"twisted-subfilter:{seed}:{trial}"
        if best.dim >= target:
            return best, trial
    if best is None:
        best = restrict_to_support(base, diagram)
    return best, None
