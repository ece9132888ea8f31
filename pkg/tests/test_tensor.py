import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geomrank import (
    QQ,
    Axis,
    BasisChange,
    DimensionMismatch,
    DuplicateEntry,
    ExactMatrix,
    IndexOutOfRange,
    PrimeField,
    SingularMatrix,
    Tensor3,
    build_tensor,
    catalog_make,
    change_basis,
    direct_sum,
    kronecker,
    permute_factors,
    random_basis_change,
    stratum_counts,
)
from geomrank.tensor import random_invertible
from geomrank.tensor import slice as tslice

W = catalog_make("W")


@st.composite
def tensors(draw, max_dim=3):
    dims = tuple(draw(st.integers(1, max_dim)) for _ in range(3))
    cells = [(i, j, k) for i in range(dims[0]) for j in range(dims[1]) for k in range(dims[2])]
    chosen = draw(st.lists(st.sampled_from(cells), unique=True, max_size=len(cells)))
    return Tensor3(dims, {c: draw(st.integers(-3, 3)) for c in chosen})


def test_build_rank_one_and_w():
    T = build_tensor((1, 1, 1), [(0, 0, 0, 1)])
    assert T.entries == {(0, 0, 0): 1}
    assert len(build_tensor((2, 2, 2), [(0, 0, 1, 1), (0, 1, 0, 1), (1, 0, 0, 1)])) == 3


def test_build_rejects_bad_input():
    with pytest.raises(IndexOutOfRange):
        build_tensor((2, 2, 2), [(5, 0, 0, 1)])
    with pytest.raises(DuplicateEntry):
        build_tensor((2, 2, 2), [(0, 0, 0, 1), (0, 0, 0, 2)])
    assert len(build_tensor((2, 2, 2), [(0, 0, 0, 0), (1, 1, 1, 3)])) == 1


def test_fraction_coefficients_normalize():
    T = Tensor3((1, 1, 2), {(0, 0, 0): Fraction(4, 2), (0, 0, 1): Fraction(1, 3)})
    assert T[0, 0, 0] == 2 and isinstance(T[0, 0, 0], int)
    assert T.denominator_lcm() == 3
    assert T.integer_scaled().entries == {(0, 0, 0): 6, (0, 0, 1): 1}


def test_w_slices():
    assert tslice(W, Axis.A, [1, 0]).tolist() == [[0, 1], [1, 0]]
    assert tslice(W, Axis.A, [0, 1]).tolist() == [[1, 0], [0, 0]]
    D = catalog_make("diag", 3)
    assert tslice(D, "A", [2, 3, 5]).tolist() == [[2, 0, 0], [0, 3, 0], [0, 0, 5]]
    with pytest.raises(DimensionMismatch):
        tslice(W, Axis.B, [1, 2, 3])


def test_kronecker_and_direct_sum_dims():
    assert kronecker(W, W).dims == (4, 4, 4)
    assert direct_sum(build_tensor((1, 1, 1), [(0, 0, 0, 1)]), Tensor3((2, 3, 4), {})).dims == (3, 4, 5)
    assert direct_sum(catalog_make("diag", 2), catalog_make("diag", 3)) == catalog_make("diag", 5)


def test_direct_sum_slices_are_block_diagonal():
    T, S = catalog_make("utriv", 3), W
    M = tslice(direct_sum(T, S), Axis.A, [1, 2, 3, 0, 0]).tolist()
    top = tslice(T, Axis.A, [1, 2, 3]).tolist()
    assert [row[:3] for row in M[:3]] == top
    assert all(x == 0 for row in M[3:] for x in row)
    assert all(x == 0 for row in M[:3] for x in row[3:])


def test_w_kron_w_matches_cw_big_2_strata():
    WW, CW = kronecker(W, W), catalog_make("cw_big", 2)
    for p in (3, 5):
        for ax in Axis:
            assert stratum_counts(WW, ax, p).counts == stratum_counts(CW, ax, p).counts


def test_diag_kron_diag_same_strata_as_diag():
    K, D = kronecker(catalog_make("diag", 2), catalog_make("diag", 3)), catalog_make("diag", 6)
    assert stratum_counts(K, Axis.A, 3).counts == stratum_counts(D, Axis.A, 3).counts


def test_change_basis_identity_and_permutation():
    D = catalog_make("diag", 3)
    assert change_basis(D, BasisChange.identity(D.dims)) == D
    P = ExactMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert change_basis(D, BasisChange(P, P, P)) == D
    with pytest.raises(SingularMatrix):
        change_basis(D, BasisChange(ExactMatrix.zeros(3, 3), P, P))


def test_change_basis_round_trip_mod_101():
    F = PrimeField(101)
    rng = random.Random(7)
    T = catalog_make("matmul", 2)
    g = random_basis_change(T.dims, F, rng)
    back = change_basis(change_basis(T, g), g.inverse())
    assert back == Tensor3(T.dims, {k: v % 101 for k, v in T.items()})


@given(tensors(), st.integers(0, 2**32))
def test_slice_transforms_with_basis_change(T, seed):
    rnd = random.Random(seed)
    g = random_basis_change(T.dims, QQ, rnd)
    alpha = [rnd.randint(-4, 4) for _ in range(T.dims[0])]
    lhs = tslice(change_basis(T, g), Axis.A, alpha)
    rhs = g.g_B @ tslice(T, Axis.A, g.g_A.T.apply(alpha)) @ g.g_C.T
    assert lhs == rhs


@given(tensors(), st.data())
def test_slice_is_linear(T, data):
    ax = data.draw(st.sampled_from(list(Axis)))
    d = T.dims[ax]
    u = data.draw(st.lists(st.integers(-5, 5), min_size=d, max_size=d))
    v = data.draw(st.lists(st.integers(-5, 5), min_size=d, max_size=d))
    assert tslice(T, ax, [x + y for x, y in zip(u, v)]) == tslice(T, ax, u) + tslice(T, ax, v)


@given(tensors(), st.permutations([0, 1, 2]))
def test_permute_factors_round_trip(T, perm):
    inv = [perm.index(k) for k in range(3)]
    assert permute_factors(permute_factors(T, perm), inv) == T


@given(tensors(max_dim=2), tensors(max_dim=2))
def test_kronecker_and_sum_dims(T, S):
    assert kronecker(T, S).dims == tuple(x * y for x, y in zip(T.dims, S.dims))
    assert direct_sum(T, S).dims == tuple(x + y for x, y in zip(T.dims, S.dims))


def test_random_invertible_is_invertible():
    rng = random.Random(3)
    for n in range(1, 6):
        assert random_invertible(n, QQ, rng).is_invertible()
