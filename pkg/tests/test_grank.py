import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geomrank import (
    Axis,
    BudgetExceeded,
    InsufficientPrimes,
    PrimeField,
    Tensor3,
    build_tensor,
    catalog_make,
    change_basis,
    dimension_fit,
    geometric_rank,
    gr_stratified,
    kronecker,
    multilinear_ranks,
    random_basis_change,
    sigma_hat_count,
    stratum_counts,
)
from geomrank.grank import StratumDim, fit_strata, sigma_hat_from_profile, stratified_value
from oracles import rank_histogram, sigma_hat_pairs
from test_tensor import tensors


def test_stratum_count_examples():
    assert stratum_counts(catalog_make("matmul", 2), Axis.A, 3).as_dict() == {0: 1, 1: 0, 2: 32, 3: 0, 4: 48}
    assert stratum_counts(catalog_make("diag", 3), Axis.A, 2).counts == (1, 3, 3, 1)
    assert stratum_counts(catalog_make("W"), Axis.A, 2).counts == (1, 1, 2)


def test_closed_form_rank_one_count():
    for p in (3, 5, 7):
        prof = stratum_counts(catalog_make("matmul", 2), Axis.A, p)
        assert prof.counts[2] == (p * p - 1) * (p + 1)


def test_sigma_hat_closed_forms():
    for p in (3, 5, 7):
        assert sigma_hat_count(catalog_make("W"), "AB", p) == 3 * p * p - 2 * p
        assert sigma_hat_count(catalog_make("utriv", 3), "ab", p) == p**4 + 2 * p**3 - 2 * p**2


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        stratum_counts(catalog_make("matmul", 2), Axis.A, 7, budget=100)
    with pytest.raises(BudgetExceeded):
        geometric_rank(catalog_make("matmul", 2), budget=10)


@given(tensors(), st.sampled_from([2, 3, 5]))
def test_stratum_counts_match_enumeration(T, p):
    for ax in Axis:
        prof = stratum_counts(T, ax, p)
        assert list(prof.counts) == rank_histogram(T, int(ax), p)
        assert sum(prof.counts) == p ** T.dims[ax]
        assert prof.counts[0] >= 1


@given(tensors(), st.sampled_from(["ab", "ac", "bc"]), st.sampled_from([2, 3]))
def test_sigma_hat_matches_pair_enumeration(T, pairing, p):
    assert sigma_hat_count(T, pairing, p) == sigma_hat_pairs(T, pairing, p)


def test_sigma_hat_from_profile_formula():
    T = catalog_make("matmul", 2)
    prof = stratum_counts(T, Axis.A, 3)
    assert sigma_hat_from_profile(prof, 4) == sum(c * 3 ** (4 - r) for r, c in enumerate(prof.counts)) == 417


def test_dimension_fit_examples():
    fit = dimension_fit({3: 417, 5: 4705, 7: 23233})
    assert fit.dimension == 5 and fit.certified
    assert [round(s, 2) for s in fit.slope_estimates] == [4.74, 4.75]
    assert dimension_fit({3: 25, 5: 81, 7: 169}).dimension == 2
    assert dimension_fit({3: 7, 5: 7, 11: 7}).dimension == 0
    with pytest.raises(InsufficientPrimes):
        dimension_fit({3: 9})


@given(st.integers(0, 8), st.integers(1, 3))
def test_dimension_fit_pure_powers(d, c):
    fit = dimension_fit({p: c * p**d for p in (3, 5, 7)})
    assert fit.dimension == d and fit.certified


def test_two_prime_fit_uses_raw_slope():
    fit = dimension_fit({3: 81, 5: 625})
    assert fit.corrected_estimates == () and fit.dimension == 4 and fit.certified


def test_stratified_value_skips_empty_strata():
    dims = [StratumDim(0, 4, "full", True), StratumDim(1, None, "empty", True), StratumDim(2, 0, "kernel", True)]
    assert stratified_value(dims, 4, 2) == (2, 0, True)


def test_fit_strata_uses_exact_facts():
    T = catalog_make("diag", 3)
    profiles = [stratum_counts(T, Axis.A, p) for p in (3, 5, 7)]
    strata = fit_strata(profiles, 3, 3, 3, 3, 3)
    assert [s.how for s in strata] == ["full", "hypersurface", "fit", "kernel"]
    assert [s.dim for s in strata] == [3, 2, 1, 0]


def test_geometric_rank_examples():
    assert geometric_rank(catalog_make("matmul", 2)).gr == 3
    assert geometric_rank(catalog_make("strassen", 3)).gr == 2
    for m in (1, 2, 4):
        assert geometric_rank(catalog_make("diag", m)).gr == m
    W = catalog_make("W")
    assert geometric_rank(W).gr ** 2 == 4 > geometric_rank(kronecker(W, W)).gr == 3


def test_report_fields():
    rep = geometric_rank(catalog_make("matmul", 2))
    assert rep.certified and rep.values == {"ab": 3, "ac": 3, "bc": 3}
    assert rep.flag_excess == 1
    assert rep.max_stratum == ("A", 2)
    assert rep.strata_dims["A"][2] == 2
    assert rep.pairings["ab"].sigma_hat == {3: 417, 5: 4705, 7: 23233}


def test_bad_prime_dropped():
    T = Tensor3((2, 2, 2), {(0, 0, 0): 1, (1, 1, 1): 3})
    with pytest.warns(UserWarning):
        rep = geometric_rank(T, primes=(3, 5, 7))
    assert 3 in rep.dropped_primes and rep.gr == 2 and rep.certified


def test_replacement_prime_added():
    T = Tensor3((2, 2, 2), {(0, 0, 0): 1, (1, 1, 1): 15})
    rep = geometric_rank(T, primes=(3, 5))
    assert len(rep.primes) >= 2 and 3 not in rep.primes and 5 not in rep.primes and rep.gr == 2


def test_needs_two_primes():
    with pytest.raises(InsufficientPrimes):
        geometric_rank(catalog_make("W"), primes=(3,))


def test_gr_stratified_examples():
    cw = catalog_make("cw_big", 2)
    # strata 1..q coincide with the hyperplane x_0 = 0; the value is reached at j = q
    assert gr_stratified(cw, Axis.A, 1) == 4
    assert gr_stratified(cw, Axis.A, 2) == 3
    assert gr_stratified(catalog_make("matmul", 2), Axis.A, 2) == 3
    for m in (2, 3, 4):
        assert gr_stratified(catalog_make("diag", m), Axis.A, 1) == m
    assert gr_stratified(catalog_make("matmul", 2), Axis.A, 3) == math.inf


def test_gr_one_iff_multilinear_rank_one():
    cases = [
        build_tensor((1, 1, 1), [(0, 0, 0, 1)]),
        build_tensor((1, 3, 3), [(0, j, j, 1) for j in range(3)]),
        build_tensor((3, 3, 3), [(1, 2, 0, 5)]),
        build_tensor((3, 1, 3), [(0, 0, 0, 1), (1, 0, 1, 1), (2, 0, 2, 2)]),
        catalog_make("W"),
        catalog_make("diag", 2),
        catalog_make("matmul", 2),
        catalog_make("utriv", 3),
        catalog_make("skew3"),
        build_tensor((2, 2, 2), [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)]),
    ]
    for T in cases:
        assert (geometric_rank(T).gr == 1) == (min(multilinear_ranks(T)) == 1)


@pytest.mark.parametrize("name", ["matmul", "utriv", "cw_small", "strassen", "W", "skew3"])
def test_strata_invariant_under_basis_change_mod_p(name):
    T = catalog_make(name, 2) if name in ("matmul", "cw_small", "strassen") else (
        catalog_make(name, 3) if name == "utriv" else catalog_make(name)
    )
    rng = random.Random(name)
    for p in (3, 5):
        F = PrimeField(p)
        base = {ax: stratum_counts(T, ax, p).counts for ax in Axis}
        for _ in range(50):
            U = change_basis(T, random_basis_change(T.dims, F, rng))
            assert all(stratum_counts(U, ax, p).counts == base[ax] for ax in Axis)


@given(tensors())
def test_gr_bounds_on_random_tensors(T):
    if not T.entries:
        return
    rep = geometric_rank(T)
    assert 1 <= rep.gr <= min(T.dims)
    assert rep.gr <= min(multilinear_ranks(T))
