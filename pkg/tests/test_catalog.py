import numpy as np
import pytest

from multilevel_cdc.algebra import batch_rank
from multilevel_cdc.catalog import (
    FdrmcRecord,
    applicable_lemmas,
    best_effort_code,
    best_truncation,
    check_firstcons,
    check_gecons,
    check_ratlem,
    check_stcons,
    find_combine_split,
    find_gecons_chain,
    oracle_optimal_dim,
    plan_b_entry,
    plan_c_entry,
    realize,
)
from multilevel_cdc.ferrers import FerrersDiagram
from multilevel_cdc.rank_metric import code_min_rank

import oracles

D = FerrersDiagram


def brute_optimal_dim(cols, delta):
    """Largest k such that some k good vectors span a space of good vectors (q = 2)."""
    F = D(cols)
    cells = F.cells()
    d = len(cells)
    vecs = []
    for x in range(1, 2**d):
        m = np.zeros((F.m, F.n), dtype=np.uint8)
        for b, (r, c) in enumerate(cells):
            m[r, c] = (x >> b) & 1
        vecs.append((x, m))
    good = {x for x, m in vecs if oracles.rank(m, 2) >= delta}
    order = sorted(good)

    def grow(span, start):
        best = 0
        for idx in range(start, len(order)):
            v = order[idx]
            if v in span:
                continue
            new = span | {s ^ v for s in span}
            if new - {0} <= good:
                best = max(best, 1 + grow(new, idx + 1))
        return best

    return grow({0}, 0)


def test_firstcons_examples():
    assert check_firstcons(D([6] * 6), 4) == 18
    assert check_firstcons(D([1, 3, 3]), 2) == 4
    assert check_firstcons(D([2, 2, 4, 4, 6, 6]), 4) is None


def test_stcons_examples():
    assert check_stcons(D([2, 3, 4, 5, 6, 6]), 4) == 9
    assert check_stcons(D([2, 2, 4, 4, 6, 6]), 4) is None
    assert check_stcons(D([1, 2, 3]), 2) == 3


def test_gecons_examples():
    F = D([4, 4, 4, 4, 8, 8])
    assert check_gecons(F, 4, (4, 8)) == F.vmin(4)
    assert find_gecons_chain(F, 4) == (4, 8)
    with pytest.raises(ValueError):
        check_gecons(F, 4, (3, 8))
    assert find_gecons_chain(D([2, 2, 4, 4]), 4) is not None


def test_ratlem_examples():
    assert check_ratlem(D([2, 2, 4, 4]), 2, 3) == D([2, 2, 4, 4]).vmin(2)
    assert check_ratlem(D([2, 2, 4, 4]), 2, 2) is None
    assert check_ratlem(D([1]), 1, 2) == 1


def test_applicable_lemmas_stay_below_vmin():
    for cols in ([2, 3, 4, 5, 6, 6], [3, 4, 5, 6, 6, 6], [2, 2, 6, 6, 6, 6], [4, 4, 4, 4, 8, 8]):
        F = D(cols)
        for value in applicable_lemmas(F, 4, 4).values():
            assert value <= F.vmin(4)


@pytest.mark.parametrize(
    "cols, delta",
    [([1, 2], 2), ([2, 2], 2), ([1, 1, 2], 2), ([1, 2, 3], 2), ([2, 2, 2], 2), ([1, 1, 2, 2], 2), ([2, 2, 2], 3)],
)
def test_oracle_matches_bruteforce(cols, delta):
    res = oracle_optimal_dim(D(cols), delta)
    assert res.dim == brute_optimal_dim(cols, delta)
    if res.dim:
        assert res.witness.shape[0] == res.dim
        assert batch_rank(res.witness, 2).min() >= delta


def test_oracle_budget_and_examples():
    assert oracle_optimal_dim(D([2, 2, 4, 4]), 4).dim == 2
    assert oracle_optimal_dim(D([1, 2]), 2).dim == 1
    assert oracle_optimal_dim(D([2, 2, 4, 4]), 2, node_budget=1).dim is None


def test_truncation_realizes_promised_dimension():
    for cols, delta in (([3, 4, 5, 6, 6, 6], 4), ([2, 6, 6, 6, 6, 6], 4), ([1, 3, 3], 2)):
        F = D(cols)
        trunc = best_truncation(F, delta)
        code = best_effort_code(F, delta, 2)
        assert code.dim >= trunc.dim
        assert code_min_rank(code).min_rank >= delta


def test_record_rejects_overpromise():
    with pytest.raises(ValueError):
        FdrmcRecord(D([2, 2, 4, 4]), 4, 3, "gecons")
    with pytest.raises(ValueError):
        FdrmcRecord(D([2, 2, 4, 4]), 4, 1, "magic")


def test_b_plans_n5_t2():
    got = {(i, j): plan_b_entry(i, j, 5, 2, 2)[0] for i in range(1, 6) for j in range(i + 1, 6)}
    assert got == {
        (1, 2): 18, (1, 3): 14, (1, 4): 10, (1, 5): 6, (2, 3): 10,
        (2, 4): 8, (2, 5): 4, (3, 4): 4, (3, 5): 2, (4, 5): 0,
    }
    assert plan_b_entry(2, 4, 5, 2, 2)[1] == "external"
    assert plan_b_entry(3, 4, 5, 2, 2)[1] == "combine"
    assert plan_b_entry(4, 5, 5, 2, 2)[1] == "singleton"


def test_c_plans():
    assert plan_c_entry(1, 5, 2, 3)[0] == 12
    assert plan_c_entry(8, 5, 2, 3)[:2] == (9, "stcons")
    assert plan_c_entry(4, 5, 2, 2)[0] == 10
    assert plan_c_entry(4, 5, 2, 3)[0] == 9
    with pytest.raises(ValueError):
        plan_c_entry(9, 5, 2, 2)


def test_combine_split_with_ferrers_corners():
    F = D([2, 2, 2, 2, 4, 4, 6])
    split = find_combine_split(F, 4, 4)
    assert split is not None
    rec = FdrmcRecord(F, 4, 4, "combine", recipe=split)
    code = realize(rec, 2)
    assert rec.achieved_dim == 4 and code.respects_support()
    assert code_min_rank(code).min_rank == 4


def test_realize_external_uses_recorded_twist():
    F = D([2, 2, 4, 4, 6, 6])
    rec = FdrmcRecord(F, 4, 8, "external", recipe={"fallback": "upper-block"})
    code = realize(rec, 2)
    assert rec.achieved_dim == 8 and rec.gap == 0
    assert code_min_rank(code).min_rank == 4
    rec3 = FdrmcRecord(F, 4, 8, "external", recipe={"fallback": "upper-block"})
    realize(rec3, 3)
    assert rec3.achieved_dim == 6 and rec3.gap == 2
