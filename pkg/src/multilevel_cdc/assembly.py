"""Lifting, code plans for whole skeletons, and the closed-form cardinalities."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .algebra import DTYPE, Subspace, as_field, is_prime_power
from .catalog import FdrmcRecord, component_dim_plan, realize
from .ferrers import FerrersDiagram
from .skeleton import Skeleton, SkeletonEntry, bitstring, skeleton_explicit, skeleton_theorem31


def tableau_positions(v) -> tuple[list[int], list[int]]:
    """Pivot coordinates and ambient coordinates of the tableau columns of ``v``."""
    pivots, free = [], []
    for pos, b in enumerate(v):
        if b:
            pivots.append(pos)
        elif pivots:
            free.append(pos)
    return pivots, free


def lift(v, pending_fill: np.ndarray | None, codeword: np.ndarray | None, q=2) -> Subspace:
    """Subspace with identifying vector ``v`` whose Ferrers tableau is ``[pending_fill | codeword]``.

    ``pending_fill`` fills the top rows of the leftmost tableau columns;
    ``codeword`` covers the remaining columns, all rows of the diagram.
    """
    gf = as_field(q)
    v = tuple(int(b) for b in v)
    F = FerrersDiagram.from_vector(v)
    pivots, free = tableau_positions(v)
    k = len(pivots)
    tableau = np.zeros((F.m, F.n), dtype=DTYPE)
    n1 = 0
    if pending_fill is not None:
        pending_fill = np.asarray(pending_fill, dtype=DTYPE)
        m1, n1 = pending_fill.shape
        if n1 > F.n or any(g != m1 for g in F.columns[:n1]):
            raise ValueError(f"pending fill of shape {m1}x{n1} does not match {F}")
        tableau[:m1, :n1] = pending_fill
    if codeword is not None:
        codeword = np.asarray(codeword, dtype=DTYPE)
        if codeword.shape[1] != F.n - n1 or codeword.shape[0] > F.m:
            raise ValueError(f"codeword of shape {codeword.shape} does not fit {F} after {n1} pending columns")
        tableau[: codeword.shape[0], n1:] = codeword
    if F.n and (tableau[~F.mask()] != 0).any():
        raise ValueError("tableau has entries outside the Ferrers diagram")
    gen = np.zeros((k, len(v)), dtype=DTYPE)
    gen[np.arange(k), pivots] = 1
    if F.n:
        gen[: F.m, free] = tableau
    return Subspace(gen, tuple(pivots), gf)


# --------------------------------------------------------------------------
# Closed forms


def _q_sum(q: int, terms: dict[int, int]) -> int:
    return sum(c * q**e for e, c in terms.items())


def _half(x: int) -> int:
    if x % 2:
        raise ValueError(f"{x} is odd")
    return x // 2


def _quarter(x: int) -> int:
    if x % 4:
        raise ValueError(f"{x} is not divisible by 4")
    return x // 4


def closed_form_terms(q: int, n: int, t: int) -> dict[int, int]:
    """Exponent -> multiplicity of the closed form lower bound for ``((n+3)t, 4t, 3t)_q`` codes."""
    if not is_prime_power(q):
        raise ValueError(f"q must be a prime power, got {q}")
    if t < 2 or t % 2:
        raise ValueError(f"t must be even and >= 2, got {t}")
    if n < 5:
        raise ValueError(f"n must be >= 5, got {n}")
    s = n - 1 if n % 2 == 0 else n
    if q ** (2 * t) < s:
        raise ValueError(f"requires q^{{2t}} >= s: q^(2t) = {q ** (2 * t)} < s = {s}")
    terms: dict[int, int] = {}

    def add(e: int, c: int = 1) -> None:
        terms[e] = terms.get(e, 0) + c

    if n >= 6:
        if t == 2:
            add(6 * n)
            for i in range(1, n - 3):
                for j in range(i + 1, n + 1):
                    add(2 * (3 * n - i - 1 - 2 * j))
            add(6 * n - 18)
            add(6 * n - 19, 3)
            if q > 2:
                add(6 * n - 20, 3)
                add(6 * n - 21)
            for e, c in ((12, 1), (8, 1), (4, 2), (2, 1), (0, 1)):
                add(e, c)
        else:
            add(n * t * (t + 1))
            for i in range(1, n - 3):
                for j in range(i + 1, n + 1):
                    add((n - i - 1) * t + (n - j) * t * t)
            for e, c in ((2 * t * t + 2 * t, 1), (t * t + 2 * t, 1), (2 * t, 2), (t, 1), (0, 1)):
                add(e, c)
            base = (t * t + t) * n
            tt = t * t
            add(base - _quarter(13 * tt) - _half(5 * t))
            add(base - _quarter(13 * tt) - 3 * t)
            add(base - _half(7 * tt) - _half(5 * t), 2)
            add(base - _half(7 * tt) - 3 * t, 2)
            add(base - _quarter(15 * tt) - _half(5 * t))
            add(base - _quarter(15 * tt) - 3 * t)
        return terms
    if t == 2:
        for e, c in ((30, 1), (18, 1), (14, 1), (12, 1), (8, 1), (6, 1), (4, 2), (2, 1), (0, 1)):
            add(e, c)
        if q > 2:
            add(10, 7)
            add(9, 2)
        else:
            add(10, 5)
        return terms
    add(5 * t * (t + 1))
    for j in range(2, 6):
        add(3 * t + (5 - j) * t * t)
    add(t * t + 3 * t)
    add(t * t + _half(5 * t), 2)
    add(_quarter(3 * t * t) + _half(5 * t), 4)
    add(_half(7 * t))
    if q >= 4:
        add(t * t + 2 * t)
        add(3 * t)
    else:
        add(3 * t, 2)
    for e, c in ((2 * t, 2), (t, 1), (0, 1)):
        add(e, c)
    return terms


def cardinality_theorem32(q: int, n: int, t: int) -> int:
    return _q_sum(q, closed_form_terms(q, n, t))


EXPLICIT_TERMS = {
    16: (
        {30: 1, 18: 1, 14: 1, 12: 1, 10: 7, 9: 2, 8: 1, 6: 1, 4: 2, 2: 1, 0: 1},
        {30: 1, 18: 1, 14: 1, 12: 1, 10: 5, 8: 1, 6: 1, 4: 2, 2: 1, 0: 1},
    ),
    17: (
        {33: 1, 21: 1, 17: 1, 15: 1, 14: 4, 13: 4, 12: 1, 10: 1, 9: 1, 6: 2, 4: 1, 0: 1},
        {33: 1, 21: 1, 17: 1, 15: 1, 14: 4, 13: 1, 10: 1, 9: 1, 6: 2, 4: 1, 0: 1},
    ),
    18: (
        {36: 1, 24: 1, 20: 1, 18: 2, 17: 3, 16: 4, 15: 1, 14: 1, 12: 2, 10: 2, 8: 2, 7: 1, 6: 1, 4: 2, 2: 1, 0: 1},
        {36: 1, 24: 1, 20: 1, 18: 2, 17: 3, 16: 1, 14: 1, 12: 2, 10: 2, 8: 2, 7: 1, 6: 1, 4: 2, 2: 1, 0: 1},
    ),
    19: (
        {39: 1, 27: 1, 23: 1, 21: 2, 20: 3, 19: 4, 18: 1, 17: 1, 15: 2, 13: 2, 11: 2, 10: 1, 9: 1, 7: 2, 4: 1, 0: 1},
        {39: 1, 27: 1, 23: 1, 21: 2, 20: 3, 19: 1, 17: 1, 15: 2, 13: 2, 11: 2, 10: 1, 9: 1, 7: 2, 4: 1, 0: 1},
    ),
}


def explicit_terms(target_n: int, q: int) -> dict[int, int]:
    if target_n not in EXPLICIT_TERMS:
        raise ValueError(f"bounds are given for lengths 16..19, not {target_n}")
    if not is_prime_power(q):
        raise ValueError(f"q must be a prime power, got {q}")
    general, binary = EXPLICIT_TERMS[target_n]
    return dict(binary if q == 2 else general)


def corollary_bound(target_n: int, q: int) -> int:
    return _q_sum(q, explicit_terms(target_n, q))


def q_polynomial(terms: dict[int, int]) -> str:
    parts = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        if not c:
            continue
        mono = "1" if e == 0 else ("q" if e == 1 else f"q^{e}")
        parts.append(mono if c == 1 else (f"{c}" if e == 0 else f"{c}{mono}"))
    return " + ".join(parts) if parts else "0"


# --------------------------------------------------------------------------
# Plans


@dataclass
class CdcPlan:
    skeleton: Skeleton
    records: list[FdrmcRecord]
    promised_cardinality: int
    achieved_cardinality: int | None = None
    gaps: list[tuple[str, int, int]] = field(default_factory=list)
    fills: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def q(self) -> int:
        return self.skeleton.q

    @property
    def delta(self) -> int:
        return 2 * self.skeleton.t

    @property
    def distance(self) -> int:
        return 4 * self.skeleton.t

    def items(self) -> Iterator[tuple[SkeletonEntry, FdrmcRecord]]:
        return zip(self.skeleton.entries, self.records)

    def exponents(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for r in self.records:
            out[r.promised_dim] = out.get(r.promised_dim, 0) + 1
        return out

    def subspace(self, i: int, index: int) -> Subspace:
        """Lifted subspace for codeword ``index`` of entry ``i``."""
        entry, rec = self.skeleton.entries[i], self.records[i]
        if rec.basis is None:
            raise ValueError(f"entry {entry.label} has no constructed code")
        fill = self.fills.get(entry.label)
        word = rec.basis.codeword(index) if rec.basis.dim else np.zeros((rec.diagram.m, rec.diagram.n), DTYPE)
        return lift(entry.vector, fill, word if rec.diagram.n else None, self.q)

    def subspaces(self, i: int) -> Iterator[Subspace]:
        """All lifted subspaces of entry ``i``, lazily."""
        rec = self.records[i]
        size = rec.basis.size if rec.basis is not None else 0
        for index in range(size):
            yield self.subspace(i, index)

    def to_json(self) -> dict:
        sk = self.skeleton
        entries = []
        for e, r in self.items():
            d = e.to_json()
            d.update(r.to_json())
            d["ferrers"] = list(e.diagram.columns)
            d["diagram"] = list(r.diagram.columns)
            if e.listed_dim is not None:
                d["listed_dim"] = e.listed_dim
            entries.append(d)
        out = {
            "q": sk.q,
            "n": sk.n,
            "t": sk.t,
            "length": sk.length,
            "weight": sk.weight,
            "distance": self.distance,
            "explicit": sk.explicit,
            "fill_codes": {k: list(v) for k, v in sk.fill_shapes.items()},
            "entries": entries,
            "promised_cardinality": str(self.promised_cardinality),
            "achieved_cardinality": None if self.achieved_cardinality is None else str(self.achieved_cardinality),
            "gaps": [{"entry": lbl, "promised": p, "achieved": a} for lbl, p, a in self.gaps],
        }
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def plan_skeleton(sk: Skeleton, construct: bool = False) -> CdcPlan:
    records = [component_dim_plan(e, sk.q, sk.n, sk.t) for e in sk.entries]
    promised = sum(sk.q**r.promised_dim for r in records)
    plan = CdcPlan(sk, records, promised)
    if construct:
        construct_plan(plan)
    return plan


def construct_plan(plan: CdcPlan, search_trials: int = 0) -> CdcPlan:
    """Build every component code, record achieved dimensions and gaps, assign pending fills."""
    from .skeleton import assign_pending

    plan.gaps = []
    for e, r in plan.items():
        realize(r, plan.q, search_trials)
        if r.achieved_dim != r.promised_dim:
            plan.gaps.append((e.label, r.promised_dim, r.achieved_dim))
    plan.achieved_cardinality = sum(plan.q**r.achieved_dim for r in plan.records)
    plan.fills = assign_pending(plan.skeleton)
    return plan


def build_plan(q: int, n: int, t: int, construct: bool = False) -> CdcPlan:
    return plan_skeleton(skeleton_theorem31(q, n, t), construct)


def build_plan_explicit(length: int, q: int, construct: bool = False) -> CdcPlan:
    return plan_skeleton(skeleton_explicit(length, q), construct)


def load_manifest(text: str) -> dict:
    data = json.loads(text)
    for key in ("q", "n", "t", "entries"):
        if key not in data:
            raise ValueError(f"plan manifest lacks {key!r}")
    return data


def plan_from_manifest(data: dict, construct: bool = False) -> CdcPlan:
    """Rebuild a plan from its manifest and check that the entries match."""
    if data.get("explicit"):
        plan = build_plan_explicit(int(data["explicit"]), int(data["q"]), construct)
    else:
        plan = build_plan(int(data["q"]), int(data["n"]), int(data["t"]), construct)
    vectors = [e["vector"] for e in data["entries"]]
    if vectors != [bitstring(e.vector) for e in plan.skeleton.entries]:
        raise ValueError("manifest entries do not match the regenerated skeleton")
    return plan
