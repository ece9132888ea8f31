import pytest
from hypothesis import given
from hypothesis import strategies as st

from geomrank import (
    Axis,
    BudgetExceeded,
    NotApplicable,
    Tensor3,
    bounded_rank_test,
    build_tensor,
    catalog_make,
    generic_rank_report,
    generic_slice_rank,
    genericity_flags,
    is_concise,
    is_one_generic,
    multilinear_ranks,
)
from geomrank.genericity import grid_max_rank, multilinear_ranks_mod
from geomrank.tensor import slice as tslice
from oracles import flattening_rank_q, max_slice_rank_mod
from test_tensor import tensors


def test_multilinear_ranks_examples():
    assert tuple(multilinear_ranks(catalog_make("matmul", 2))) == (4, 4, 4)
    b = 4
    T = build_tensor((1, b, b), [(0, j, j, 1) for j in range(b)])
    ml = multilinear_ranks(T)
    assert ml.ml_A == 1 and ml.ml_B == b
    assert tuple(multilinear_ranks(catalog_make("diag", 5))) == (5, 5, 5)


def test_conciseness_examples():
    assert is_concise(catalog_make("utriv", 5))
    m = 3
    padded = build_tensor((m, m + 1, m), [(i, i, i, 1) for i in range(m)])
    assert not is_concise(padded)
    for q in (2, 3, 4):
        assert is_concise(catalog_make("strassen", q))


@given(tensors())
def test_multilinear_ranks_against_sympy(T):
    assert tuple(multilinear_ranks(T)) == tuple(flattening_rank_q(T, ax) for ax in range(3))


@given(tensors())
def test_multilinear_rank_bounds(T):
    ml = multilinear_ranks(T)
    a, b, c = T.dims
    assert ml.ml_A <= min(a, b * c) and ml.ml_B <= min(b, a * c) and ml.ml_C <= min(c, a * b)


def test_generic_slice_rank_examples():
    assert generic_slice_rank(catalog_make("diag", 4), Axis.A) == 4
    assert generic_slice_rank(catalog_make("strassen", 2), Axis.A) == 2
    assert generic_slice_rank(catalog_make("matmul", 2), Axis.A) == 4


def test_generic_slice_rank_grid_certified():
    rep = generic_rank_report(catalog_make("skew3"), Axis.A)
    assert rep.rank == 2 and rep.method == "grid" and rep.exact


@given(tensors())
def test_generic_rank_bracketed(T):
    for ax in Axis:
        r = generic_slice_rank(T, ax)
        rows, cols = (T.dims[o] for o in ax.others())
        assert r <= min(rows, cols)
        units = [tslice(T, ax, [int(i == j) for j in range(T.dims[ax])]).rank() for i in range(T.dims[ax])]
        assert r >= max(units)


def test_one_genericity():
    ok, w = is_one_generic(catalog_make("matmul", 2), Axis.A)
    assert ok and w == (1, 0, 0, 1)
    ok3, w3 = is_one_generic(catalog_make("matmul", 3), Axis.A)
    assert ok3 and w3 == (1, 0, 0, 0, 1, 0, 0, 0, 1)
    assert is_one_generic(catalog_make("skew3"), Axis.A) == (False, None)
    assert not is_one_generic(catalog_make("gr3_1deg", 8), Axis.A)[0]
    with pytest.raises(NotApplicable):
        is_one_generic(catalog_make("strassen", 2), Axis.A)


def test_flags_invariants():
    f = genericity_flags(catalog_make("gr3_1deg", 8))
    assert f.concise and not f.one_star and not f.one_generic
    g = genericity_flags(catalog_make("utriv", 4))
    assert g.one_A and g.one_B and not g.one_C and g.one_star and not g.one_generic


def test_bounded_rank_examples():
    assert bounded_rank_test(catalog_make("skew3"), Axis.A, 2)
    assert bounded_rank_test(catalog_make("utriv", 4), Axis.C, 2)
    assert not bounded_rank_test(catalog_make("utriv", 4), Axis.A, 2)
    assert not bounded_rank_test(catalog_make("matmul", 2), Axis.A, 3)


def test_bounded_rank_budget():
    T = catalog_make("skew3")
    with pytest.raises(BudgetExceeded) as err:
        bounded_rank_test(T, Axis.A, 2, budget=10)
    assert err.value.probable is None or isinstance(err.value.probable, bool)
    assert bounded_rank_test(T, Axis.A, 2, budget=10, allow_probabilistic=True)


@given(tensors())
def test_bounded_rank_consistent_with_generic_rank(T):
    for ax in Axis:
        r = generic_slice_rank(T, ax)
        assert bounded_rank_test(T, ax, r)
        if r:
            assert not bounded_rank_test(T, ax, r - 1)


def test_grid_max_rank_agrees_with_field_enumeration():
    T = catalog_make("utriv", 4)
    assert grid_max_rank(T, Axis.C, 4, 3) == 2 == max_slice_rank_mod(T, 2, 5)


def test_multilinear_ranks_mod_p():
    T = Tensor3((1, 2, 2), {(0, 0, 0): 1, (0, 1, 1): 3})
    assert tuple(multilinear_ranks_mod(T, 3)) == (1, 1, 1)
    assert tuple(multilinear_ranks_mod(T, 5)) == (1, 2, 2)
