"""Skeleton codes: the identifying vectors of the multilevel construction
together with their quasi-pending blocks and fill assignments."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Sequence

import numpy as np

from .algebra import as_field
from .ferrers import FerrersDiagram
from .rank_metric import LinearMatrixCode, gabidulin

BinaryVector = tuple  # tuple of 0/1 ints


def bits(text: str) -> BinaryVector:
    text = text.strip().strip("()").replace(" ", "")
    if not text or set(text) - {"0", "1"}:
        raise ValueError(f"not a bit string: {text!r}")
    return tuple(int(c) for c in text)


def bitstring(v: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in v)


def weight(v: Sequence[int]) -> int:
    return int(sum(v))


def hamming(u: Sequence[int], v: Sequence[int]) -> int:
    if len(u) != len(v):
        raise ValueError("vectors have different lengths")
    return sum(a != b for a, b in zip(u, v))


def extend(nu: Sequence[int], t: int) -> BinaryVector:
    """Repeat every coordinate ``t`` times."""
    if t < 1:
        raise ValueError(f"ratio must be >= 1, got {t}")
    return tuple(int(b) for b in nu for _ in range(t))


def one_factorization(m: int) -> list[list[BinaryVector]]:
    """Partition the weight-2 vectors of length ``m`` into classes with disjoint supports.

    Circle method: vertex ``m - 1`` stays fixed while the others rotate.  For
    odd ``m`` a dummy vertex is added and the pairs touching it are dropped.
    """
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    size = m if m % 2 == 0 else m + 1
    ring = size - 1
    classes = []
    for r in range(ring):
        pairs = [(r, ring)]
        for k in range(1, size // 2):
            pairs.append(((r + k) % ring, (r - k) % ring))
        vecs = []
        for a, b in sorted(tuple(sorted(p)) for p in pairs):
            if b >= m:
                continue
            v = [0] * m
            v[a] = v[b] = 1
            vecs.append(tuple(v))
        classes.append(vecs)
    return classes


@dataclass(frozen=True)
class PendingBlock:
    """A full ``rows x cols`` quasi-pending block in the leftmost tableau columns."""

    rows: int
    cols: int
    fill_index: int
    code: str  # name of the fill code in Skeleton.fill_codes

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "fill_index": self.fill_index, "code": self.code}


@dataclass(frozen=True)
class SkeletonEntry:
    vector: BinaryVector
    kind: str  # "A", "B", "C" or "EXTRA"
    label: str
    pair: tuple[int, int] | None = None  # B: 1-based support of the base weight-2 vector
    class_index: int | None = None  # B: 1-based one-factor class
    index: int | None = None  # C: which u_i
    pending: PendingBlock | None = None
    min_qt: int | None = None  # entry used only when q^t >= min_qt
    listed_dim: int | None = None  # explicit tables carry their dimension

    @property
    def diagram(self) -> FerrersDiagram:
        return FerrersDiagram.from_vector(self.vector)

    def pending_columns(self) -> tuple[int, ...]:
        """Ambient coordinates of the pending block's columns."""
        if self.pending is None:
            return ()
        cols = []
        ones = 0
        for pos, b in enumerate(self.vector):
            if b:
                ones += 1
            elif ones:
                cols.append(pos)
        return tuple(cols[: self.pending.cols])

    def active(self, q: int, t: int) -> bool:
        return self.min_qt is None or q**t >= self.min_qt

    def to_json(self) -> dict:
        out = {"vector": bitstring(self.vector), "class": self.kind, "label": self.label}
        if self.pair is not None:
            out["pair"] = list(self.pair)
        if self.class_index is not None:
            out["class_index"] = self.class_index
        if self.index is not None:
            out["index"] = self.index
        out["pending"] = self.pending.to_json() if self.pending is not None else None
        return out


@dataclass
class Skeleton:
    q: int
    n: int  # base length of the weight-2 vectors
    t: int
    length: int
    weight: int
    s: int
    entries: list[SkeletonEntry]
    fill_shapes: dict[str, tuple[int, int, int]] = field(default_factory=dict)  # name -> (m, n, delta)
    explicit: int | None = None

    @property
    def a(self) -> int:
        return self.t // 2

    def fill_code(self, name: str) -> LinearMatrixCode:
        m, n, delta = self.fill_shapes[name]
        return gabidulin(m, n, delta, self.q)

    def fill_matrix(self, entry: SkeletonEntry) -> np.ndarray | None:
        if entry.pending is None:
            return None
        return self.fill_code(entry.pending.code).codeword(entry.pending.fill_index)

    def check(self) -> None:
        """Structural invariants; raises ValueError on the first violation."""
        seen = set()
        for e in self.entries:
            if len(e.vector) != self.length or weight(e.vector) != self.weight:
                raise ValueError(f"{e.label}: wrong length or weight")
            if e.vector in seen:
                raise ValueError(f"{e.label}: duplicate vector")
            seen.add(e.vector)
            if e.pending is not None:
                check_quasi_pending(e.diagram, e.pending.rows, e.pending.cols)
        for name in {e.pending.code for e in self.entries if e.pending is not None}:
            m, n, delta = self.fill_shapes[name]
            used = [e.pending.fill_index for e in self.entries if e.pending is not None and e.pending.code == name]
            if max(used) >= self.q ** gabidulin_dim(m, n, delta):
                raise ValueError(f"fill code {name} has too few codewords")

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "t": self.t,
            "length": self.length,
            "weight": self.weight,
            "s": self.s,
            "explicit": self.explicit,
            "fill_codes": {k: list(v) for k, v in self.fill_shapes.items()},
            "entries": [e.to_json() for e in self.entries],
        }


def gabidulin_dim(m: int, n: int, delta: int) -> int:
    return max(m, n) * (min(m, n) - delta + 1)


def check_quasi_pending(F: FerrersDiagram, rows: int, cols: int) -> None:
    """Leftmost ``cols`` columns are a full ``rows``-high block and row ``rows + 1``
    is shorter than row ``rows``; a block spanning every row is accepted as is."""
    if cols >= F.n or any(g != rows for g in F.columns[:cols]):
        raise ValueError(f"{F} has no full {rows}x{cols} block in its leftmost columns")
    r = F.rows()
    if rows < F.m:
        if not (r[rows] < r[rows - 1] and r[rows] <= F.n - cols):
            raise ValueError(f"{rows}x{cols} block of {F} is not quasi-pending")


def u_vectors(n: int, t: int) -> list[BinaryVector]:
    """The eight vectors ``u_1..u_8`` of length ``n t`` built from the half blocks alpha and beta."""
    a = t // 2
    alpha = (1,) * a + (0,) * a
    beta = (0,) * a + (1,) * a
    pattern = ["AAAA", "BBAA", "BABA", "BAAB", "ABAB", "AABB", "ABBA", "BBBB"]
    out = []
    for p in pattern:
        v = ()
        for c in p:
            v += alpha if c == "A" else beta
        out.append(v + (0,) * ((n - 4) * t))
    return out


def _s(n: int) -> int:
    return n - 1 if n % 2 == 0 else n


def skeleton_theorem31(q: int, n: int, t: int) -> Skeleton:
    as_field(q)
    if t < 2 or t % 2:
        raise ValueError(f"t must be even and >= 2, got {t}")
    if n < 5:
        raise ValueError(f"n must be >= 5, got {n}")
    s = _s(n)
    if q ** (2 * t) < s:
        raise ValueError(f"requires q^{{2t}} >= s: q^(2t) = {q ** (2 * t)} < s = {s}")
    if q**t < 4:
        raise ValueError("requires q^t >= 4")
    head_a = (1,) * (3 * t)
    head_b = (1,) * t + (0,) * (2 * t)
    head_c = (0,) * t + (1,) * t + (0,) * t
    entries = [SkeletonEntry(head_a + (0,) * (n * t), "A", "A")]
    for l, cls in enumerate(one_factorization(n), start=1):
        for nu in cls:
            i, j = (k + 1 for k, b in enumerate(nu) if b)
            entries.append(
                SkeletonEntry(
                    head_b + extend(nu, t),
                    "B",
                    f"B{l}:{i}{j}" if n < 10 else f"B{l}:{i},{j}",
                    pair=(i, j),
                    class_index=l,
                    pending=PendingBlock(t, 2 * t, l - 1, "M"),
                )
            )
    for idx, u in enumerate(u_vectors(n, t), start=1):
        entry = SkeletonEntry(
            head_c + u,
            "C",
            f"C{idx}",
            index=idx,
            pending=PendingBlock(t, t, idx - 1, "N"),
            min_qt=None if idx <= 4 else 8,
        )
        if entry.active(q, t):
            entries.append(entry)
    sk = Skeleton(q, n, t, (n + 3) * t, 3 * t, s, entries, {"M": (t, 2 * t, t), "N": (t, t, t)})
    sk.check()
    return sk


# Explicit tables: (vector, listed exponent); entries are labelled in table order.
LISTED17 = {
    "A": [("11111100000000000", 33)],
    "B": [
        ("11000011110000000", 21), ("11000011001100000", 17), ("11000011000011000", 13),
        ("11000011000000110", 9), ("11000000111100000", 14), ("11000000110011000", 10),
        ("11000000110000110", 6), ("11000000001111000", 6), ("11000000001100110", 4),
        ("11000000000011110", 0),
    ],
    "C": [
        ("00110010101010000", 15), ("00110001011010000", 14), ("00110001101001000", 14),
        ("00110001100110000", 14), ("00110010011001000", 13), ("00110010100101000", 13),
        ("00110010010110000", 13), ("00110001010101000", 12),
    ],
}

LISTED19 = {
    "A": [("1111110000000000000", 39)],
    "B": [
        ("1100001111000000000", 27), ("1100001100110000000", 23), ("1100001100001100000", 19),
        ("1100001100000011000", 15), ("1100001100000000110", 11), ("1100000011110000000", 21),
        ("1100000011001100000", 17), ("1100000011000011000", 13), ("1100000011000000110", 9),
        ("1100000000111100000", 15), ("1100000000110011000", 11), ("1100000000110000110", 7),
        ("1100000000001111000", 7), ("1100000000001100110", 4), ("1100000000000011110", 0),
    ],
    "C": [
        ("0011001010101000000", 21), ("0011000101101000000", 20), ("0011000110100100000", 20),
        ("0011000110011000000", 20), ("0011001001100100000", 19), ("0011001010010100000", 19),
        ("0011001001011000000", 19), ("0011000101010100000", 18),
    ],
    "EXTRA": [("0000111010000010100", 13), ("0000110101000001010", 10)],
}

EXTRA18 = [("000011101000001010", 10), ("000011010100000101", 7)]


def _pair_of(vec: BinaryVector, t: int, n: int) -> tuple[int, int]:
    blocks = [vec[3 * t + k * t] for k in range(n)]
    i, j = (k + 1 for k, b in enumerate(blocks) if b)
    return i, j


def _class_of(n: int) -> dict[tuple[int, int], int]:
    out = {}
    for l, cls in enumerate(one_factorization(n), start=1):
        for nu in cls:
            i, j = (k + 1 for k, b in enumerate(nu) if b)
            out[(i, j)] = l
    return out


def _listed_skeleton(table: dict, q: int, n: int, t: int, b_cols: int, target: int) -> Skeleton:
    classes = _class_of(n)
    entries = []
    for vec, dim in table["A"]:
        entries.append(SkeletonEntry(bits(vec), "A", "A", listed_dim=dim))
    for k, (vec, dim) in enumerate(table["B"], start=1):
        v = bits(vec)
        i, j = _pair_of(v, t, n)
        l = classes[(i, j)]
        entries.append(
            SkeletonEntry(
                v, "B", f"nu2_{k}", pair=(i, j), class_index=l,
                pending=PendingBlock(t, b_cols, l - 1, "M"), listed_dim=dim,
            )
        )
    for k, (vec, dim) in enumerate(table["C"], start=1):
        entry = SkeletonEntry(
            bits(vec), "C", f"nu3_{k}", index=k, pending=PendingBlock(t, t, k - 1, "N"),
            min_qt=None if k <= 4 else 8, listed_dim=dim,
        )
        if entry.active(q, t):
            entries.append(entry)
    for k, (vec, dim) in enumerate(table.get("EXTRA", []), start=len(table["C"]) + 1):
        entries.append(SkeletonEntry(bits(vec), "EXTRA", f"nu3_{k}", listed_dim=dim))
    length = len(entries[0].vector)
    shapes = {"M": (t, b_cols, t), "N": (t, t, t)}
    sk = Skeleton(q, n, t, length, 3 * t, _s(n), entries, shapes, explicit=target)
    sk.check()
    return sk


def skeleton_explicit(target_length: int, q: int) -> Skeleton:
    """The skeletons of the explicit length-17, 18 and 19 constructions."""
    as_field(q)
    if target_length == 17:
        return _listed_skeleton(LISTED17, q, 5, 2, 4, 17)
    if target_length == 19:
        return _listed_skeleton(LISTED19, q, 6, 2, 3, 19)
    if target_length == 18:
        base = skeleton_theorem31(q, 6, 2)
        extras = [
            SkeletonEntry(bits(v), "EXTRA", f"nu_{k}", listed_dim=d) for k, (v, d) in enumerate(EXTRA18, start=1)
        ]
        sk = replace(base, entries=base.entries + extras, explicit=18)
        sk.check()
        return sk
    raise ValueError(f"explicit skeletons exist for lengths 17, 18 and 19, not {target_length}")


def assign_pending(sk: Skeleton) -> dict[str, np.ndarray]:
    """Fill matrix of every entry with a pending block, keyed by label.

    Entries of one B-class share a codeword of ``M``; distinct classes and
    distinct C-entries get distinct codewords, so any two different fills of
    the same block differ in rank by at least the fill code's distance.
    """
    fills = {}
    for name in {e.pending.code for e in sk.entries if e.pending is not None}:
        code = sk.fill_code(name)
        need = max(e.pending.fill_index for e in sk.entries if e.pending is not None and e.pending.code == name)
        if need >= code.size:
            raise ValueError(f"fill code {name} has {code.size} codewords, index {need} requested")
    for e in sk.entries:
        if e.pending is not None:
            fills[e.label] = sk.fill_matrix(e)
    return fills


def pairs(entries: Sequence[SkeletonEntry]):
    return combinations(range(len(entries)), 2)
