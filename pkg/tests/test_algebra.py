import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multilevel_cdc.algebra import (
    SUPPORTED_ORDERS,
    Subspace,
    batch_rank,
    combine,
    field,
    format_matrix,
    index_digits,
    mat_mul,
    mat_sub,
    matrix,
    nullspace,
    parse_matrices,
    parse_matrix,
    rank,
    rref,
    subspace_distance,
)

import oracles


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_tables_match_polynomial_arithmetic(q):
    gf = field(q)
    for a in range(q):
        for b in range(q):
            assert gf.add[a, b] == oracles.add(a, b, q)
            assert gf.mul[a, b] == oracles.mul(a, b, q)


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_field_axioms(q):
    gf = field(q)
    for a in range(1, q):
        assert gf.mul[a, gf.inv[a]] == 1
        assert gf.add[a, gf.neg[a]] == 0
    # multiplicative group is cyclic of order q - 1
    orders = []
    for g in range(1, q):
        x, k = g, 1
        while x != 1:
            x, k = gf.mul[x, g], k + 1
        orders.append(k)
    assert max(orders) == q - 1


def test_unsupported_order():
    with pytest.raises(ValueError):
        field(6)
    with pytest.raises(ValueError):
        matrix([[3]], 3)


def small_matrices(q_values=(2, 3, 4)):
    return st.sampled_from(q_values).flatmap(
        lambda q: st.tuples(
            st.just(q),
            st.integers(1, 4).flatmap(
                lambda r: st.integers(1, 4).flatmap(
                    lambda c: st.lists(st.lists(st.integers(0, q - 1), min_size=c, max_size=c), min_size=r, max_size=r)
                )
            ),
        )
    )


@settings(max_examples=150, deadline=None)
@given(small_matrices())
def test_rank_against_span_enumeration(case):
    q, rows = case
    a = matrix(rows, q)
    assert rank(a, q) == oracles.rank(a, q)


@settings(max_examples=100, deadline=None)
@given(small_matrices((2, 3, 5, 8)))
def test_rref_properties(case):
    q, rows = case
    a = matrix(rows, q)
    r, piv = rref(a, q)
    assert len(piv) == rank(a, q)
    for i, p in enumerate(piv):
        assert r[i, p] == 1
        assert np.count_nonzero(r[:, p]) == 1
        assert not r[i, :p].any()
    r2, piv2 = rref(r, q)
    assert np.array_equal(r, r2) and piv == piv2


@settings(max_examples=100, deadline=None)
@given(small_matrices((2, 3, 4, 7)))
def test_nullspace(case):
    q, rows = case
    a = matrix(rows, q)
    ns = nullspace(a, q)
    assert ns.shape[0] == a.shape[1] - rank(a, q)
    if ns.size:
        assert not mat_mul(a, ns.T, q).any()


@pytest.mark.parametrize("q", [2, 3, 4, 9])
def test_batch_rank_matches_rank(q):
    rng = np.random.default_rng(q)
    stack = rng.integers(0, q, size=(200, 4, 6)).astype(np.uint8)
    stack[::7, 2] = stack[::7, 0]
    got = batch_rank(stack, q)
    assert list(got) == [rank(m, q) for m in stack]


def test_combine_and_digits():
    q = 3
    basis = np.array([[[1, 0], [0, 1]], [[0, 2], [1, 0]]], dtype=np.uint8)
    coeffs = index_digits(np.arange(9), 2, q)
    words = combine(coeffs, basis, q)
    assert len({w.tobytes() for w in words}) == 9
    assert np.array_equal(words[5], np.array([[2, 2], [1, 2]]))  # digits (2, 1)


def test_matrix_text_roundtrip():
    a = matrix([[1, 0, 3], [2, 2, 0]], 4)
    b = matrix([[1]], 4)
    text = format_matrix(a, 4) + format_matrix(b, 4)
    assert text.splitlines()[0] == "2 3 4"
    mats = parse_matrices(text)
    assert np.array_equal(mats[0][0], a) and mats[0][1] == 4
    assert np.array_equal(mats[1][0], b)
    with pytest.raises(ValueError):
        parse_matrix(text)
    with pytest.raises(ValueError):
        parse_matrices("2 2 2\n1 0\n")


def test_subspace_distance_basics():
    q = 2
    u = Subspace.from_generator(matrix([[1, 0, 0, 0], [0, 1, 0, 0]], q), q)
    v = Subspace.from_generator(matrix([[0, 0, 1, 0], [0, 0, 0, 1]], q), q)
    w = Subspace.from_generator(matrix([[1, 1, 0, 0], [1, 0, 0, 0]], q), q)
    assert subspace_distance(u, v) == 4
    assert subspace_distance(u, w) == 0 and u == w and hash(u) == hash(w)
    assert u.identifying_vector() == (1, 1, 0, 0)
    with pytest.raises(ValueError):
        subspace_distance(u, Subspace.from_generator(matrix([[1, 0, 0]], q), q))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**40), st.integers(1, 4), st.integers(1, 4))
def test_subspace_distance_is_a_metric_on_random_triples(seed, k1, k2):
    rng = np.random.default_rng(seed)
    q, n = 3, 6
    subs = [Subspace.from_generator(rng.integers(0, q, size=(k, n)).astype(np.uint8), q) for k in (k1, k2, 2)]
    a, b, c = subs
    assert subspace_distance(a, b) == subspace_distance(b, a) >= 0
    assert subspace_distance(a, c) <= subspace_distance(a, b) + subspace_distance(b, c)
    # intersection dimension by brute force
    inter = len(oracles.span(a.generator, q) & oracles.span(b.generator, q))
    dim_inter = round(np.log(inter) / np.log(q))
    assert subspace_distance(a, b) == a.dim + b.dim - 2 * dim_inter


def test_mat_sub_inverse_of_add():
    q = 9
    rng = np.random.default_rng(0)
    a = rng.integers(0, q, size=(3, 3)).astype(np.uint8)
    assert not mat_sub(a, a, q).any()
