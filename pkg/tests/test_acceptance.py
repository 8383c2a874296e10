"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line (visible even without ``-s``)
before asserting. Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import time

import numpy as np
import pytest

from multilevel_cdc.algebra import SUPPORTED_ORDERS, Subspace, rank, subspace_distance
from multilevel_cdc.assembly import build_plan, lift, tableau_positions
from multilevel_cdc.catalog import check_firstcons, check_stcons, oracle_optimal_dim
from multilevel_cdc.ferrers import FerrersDiagram
from multilevel_cdc.rank_metric import code_min_rank, gabidulin
from multilevel_cdc.skeleton import _s, extend, hamming, skeleton_explicit, skeleton_theorem31
from multilevel_cdc.verification import (
    verify_consistency,
    verify_cross_sampled,
    verify_explicit_consistency,
    verify_skeleton,
    verify_table5,
)

GRID = [(q, n, t) for q in (2, 3, 4, 5) for n in range(5, 10) for t in (2, 4) if q ** (2 * t) >= _s(n)]
EXPLICIT = [(length, q) for length in (17, 18, 19) for q in (2, 3, 4, 5)]


@pytest.fixture
def emit(capsys):
    def _emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return _emit


def test_criterion_1_table5(emit):
    start = time.perf_counter()
    rep = verify_table5()
    elapsed = time.perf_counter() - start
    emit(1, rep.ok and elapsed < 1.0, f"{len(rep.checks)} bound checks, {len(rep.failures)} failures, {elapsed:.3f}s (< 1s)")


def test_criterion_2_consistency(emit):
    bad = [(q, n, t) for q, n, t in GRID if not verify_consistency(q, n, t).ok]
    emit(2, not bad, f"{len(GRID)} parameter sets, mismatches: {bad}")


def test_criterion_3_constructed_2_5_2(emit):
    start = time.perf_counter()
    plan = build_plan(2, 5, 2, construct=True)
    problems = []
    if plan.gaps or plan.achieved_cardinality != 1074029925:
        problems.append(f"achieved {plan.achieved_cardinality}, gaps {plan.gaps}")
    for entry, rec in plan.items():
        code = rec.basis
        if code is None or code.dim == 0:
            continue
        if code.size <= 1 << 20:
            v = code_min_rank(code, budget=1 << 20)
            if v.kind != "exact" or v.min_rank < rec.delta:
                problems.append(f"{entry.label}: {v}")
        else:
            v = code_min_rank(code, budget=100_000, seed=0)
            if entry.kind != "A" or v.min_rank < rec.delta:
                problems.append(f"{entry.label}: {v}")
    cross = verify_cross_sampled(plan, pairs=100_000, seed=0)
    if not cross.ok or cross.min_distance.get("overall") != 8:
        problems.append(f"cross min {cross.min_distance}")
    elapsed = time.perf_counter() - start
    if elapsed > 600:
        problems.append(f"runtime {elapsed:.0f}s")
    emit(3, not problems, f"(2,5,2) size {plan.achieved_cardinality}, cross min d_S {cross.min_distance.get('overall')}, {elapsed:.1f}s; problems: {problems}")


def test_criterion_4_skeletons(emit):
    bad = []
    count = 0
    for q, n, t in GRID:
        count += 1
        if not verify_skeleton(skeleton_theorem31(q, n, t)).ok:
            bad.append((q, n, t))
    for length, q in EXPLICIT:
        count += 1
        if not (verify_skeleton(skeleton_explicit(length, q)).ok and verify_explicit_consistency(length, q).ok):
            bad.append((length, q))
    emit(4, not bad, f"{count} skeletons, failing: {bad}")


def test_criterion_5_gabidulin(emit):
    bad = []
    count = 0
    for q in SUPPORTED_ORDERS:
        for m in range(1, 17):
            for n in range(1, 17):
                for d in range(1, min(m, n) + 1):
                    k = max(m, n) * (min(m, n) - d + 1)
                    if q**k > 1 << 16:
                        continue
                    count += 1
                    code = gabidulin(m, n, d, q)
                    v = code_min_rank(code, budget=1 << 16)
                    if code.dim != k or v.kind != "exact" or v.min_rank != d:
                        bad.append((m, n, d, q))
    emit(5, not bad, f"{count} Gabidulin codes with q^dim <= 2^16, failing: {bad}")


def _partitions(total: int, largest: int):
    if total == 0:
        yield []
        return
    for p in range(min(total, largest), 0, -1):
        for rest in _partitions(total - p, p):
            yield [p] + rest


def test_criterion_6_oracle_agreement(emit):
    bad = []
    count = 0
    for dots in range(1, 11):
        for part in _partitions(dots, dots):
            F = FerrersDiagram(sorted(part))
            for d in range(1, min(F.m, F.n) + 1):
                promised = [
                    x for G in (F, F.transpose()) for x in (check_firstcons(G, d), check_stcons(G, d)) if x is not None
                ]
                if not promised:
                    continue
                count += 1
                got = oracle_optimal_dim(F, d).dim
                if not (got == max(promised) == F.vmin(d)):
                    bad.append((F.columns, d, got, promised))
    emit(6, not bad, f"{count} (diagram, delta) cases with |F| <= 10, q=2, disagreements: {bad}")


def test_criterion_7_properties(emit):
    rng = np.random.default_rng(20260)
    failures = []

    for _ in range(500):
        m, n = rng.integers(1, 8, size=2)
        cols = np.sort(rng.integers(1, m + 1, size=n))
        cols[-1] = m
        F = FerrersDiagram(cols.tolist())
        d = int(rng.integers(1, min(F.m, F.n) + 1))
        if F.vmin(d) != F.transpose().vmin(d):
            failures.append(("transpose", F.columns, d))

    for _ in range(1000):
        length = int(rng.integers(1, 13))
        u, v = (tuple(rng.integers(0, 2, size=length).tolist()) for _ in range(2))
        t = int(rng.integers(1, 6))
        if hamming(extend(u, t), extend(v, t)) != t * hamming(u, v):
            failures.append(("extend", u, v, t))

    q, length = 2, 10
    for _ in range(1000):
        a = Subspace.from_generator(rng.integers(0, q, size=(int(rng.integers(1, 6)), length)).astype(np.uint8), q)
        b = Subspace.from_generator(rng.integers(0, q, size=(int(rng.integers(1, 6)), length)).astype(np.uint8), q)
        if subspace_distance(a, b) < hamming(a.identifying_vector(), b.identifying_vector()):
            failures.append(("d_S >= d_H", a, b))

    def vector_and_tableaux(length, k, q):
        v = np.zeros(length, dtype=int)
        v[rng.choice(length, size=k, replace=False)] = 1
        v = tuple(int(b) for b in v)
        F = FerrersDiagram.from_vector(v)
        if F.n == 0:
            return v, None, None
        tabs = [(rng.integers(0, q, size=(F.m, F.n)) * F.mask()).astype(np.uint8) for _ in range(2)]
        return v, *tabs

    for _ in range(1000):
        v, ta, tb = vector_and_tableaux(10, int(rng.integers(1, 10)), 2)
        if ta is None:
            continue
        if subspace_distance(lift(v, None, ta, 2), lift(v, None, tb, 2)) != 2 * rank(ta ^ tb, 2):
            failures.append(("d_S = 2 d_R", v))

    for _ in range(100):
        q = int(rng.choice([2, 3, 4]))
        size = int(rng.integers(4, 12))
        v, tab, _ = vector_and_tableaux(size, int(rng.integers(1, size)), q)
        U = lift(v, None, tab, q)
        ok = U.identifying_vector() == v
        if tab is not None:
            _, free = tableau_positions(v)
            ok = ok and np.array_equal(U.generator[: tab.shape[0]][:, free], tab)
        if not ok:
            failures.append(("lift", v))

    emit(7, not failures, f"transpose 500, extend 1000, d_S >= d_H 1000, d_S = 2 d_R 1000, lift 100; failures: {failures[:3]}")
