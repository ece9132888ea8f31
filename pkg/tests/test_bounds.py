import pytest

from geomrank import (
    Axis,
    BoundSource,
    CompressionWitness,
    ExactMatrix,
    PreconditionFailed,
    catalog_info,
    catalog_make,
    combined_bound_report,
    compression_rank_bound,
    concise_floor,
    geometric_rank,
    genericity_flags,
    gr3_rank_bound,
    minrank_exclusion,
)
from test_classifier import two_rows

I = ExactMatrix.identity


def test_concise_floor():
    assert concise_floor(catalog_make("diag", 5)) == 5
    assert concise_floor(catalog_make("matmul", 2)) == 4
    assert concise_floor(catalog_make("strassen", 3)) == 4


def test_minrank_exclusion():
    U = catalog_make("utriv", 5)
    assert minrank_exclusion(U, geometric_rank(U)) == 6
    D = catalog_make("diag", 4)
    assert minrank_exclusion(D, geometric_rank(D)) is None
    S = catalog_make("strassen", 3)
    assert minrank_exclusion(S, geometric_rank(S)) is None


def test_compression_bound():
    assert compression_rank_bound(catalog_make("utriv", 4), Axis.C, CompressionWitness(1, 1, I(4), I(4))) == 6
    assert compression_rank_bound(catalog_make("W"), Axis.A, CompressionWitness(1, 1, I(2), I(2))) == 2
    for m in range(3, 9):
        w = CompressionWitness(1, 1, I(m), I(m))
        assert compression_rank_bound(catalog_make("utriv", m), Axis.C, w) == 2 * m - 2


def test_compression_bound_preconditions():
    with pytest.raises(PreconditionFailed):
        compression_rank_bound(two_rows(5, 5), Axis.A, CompressionWitness(2, 0, I(5), I(5)))
    with pytest.raises(PreconditionFailed):
        compression_rank_bound(catalog_make("utriv", 4), Axis.A, CompressionWitness(1, 1, I(4), I(4)))


def test_gr3_bound():
    for name, n, expected in [("cw_big", 4, 9), ("gr3_1deg", 9, 11), ("maxsymcompr", 6, 9)]:
        T = catalog_make(name, n)
        assert gr3_rank_bound(T, geometric_rank(T), genericity_flags(T)) == expected
    small = catalog_make("cw_big", 2)
    assert gr3_rank_bound(small, geometric_rank(small), genericity_flags(small)) is None
    M = catalog_make("matmul", 3)
    assert gr3_rank_bound(M, geometric_rank(M, primes=(3, 5)), genericity_flags(M)) is None


def test_combined_utriv():
    rep = combined_bound_report(catalog_make("utriv", 5))
    assert rep.best == 8 and rep.known_rank == 9 and rep.consistent
    values = {b.source: b.value for b in rep.bounds}
    assert values[BoundSource.CONCISE_FLOOR] == 5
    assert values[BoundSource.MIN_RANK_EXCLUSION] == 6
    assert values[BoundSource.COMPRESSION] == 8


def test_combined_cw_small():
    rep = combined_bound_report(catalog_make("cw_small", 4))
    assert rep.by_source(BoundSource.GR3_ONE_STAR)[0].value == 7
    assert rep.known_rank == 9 and rep.consistent


def test_combined_diag():
    rep = combined_bound_report(catalog_make("diag", 4))
    assert rep.best == 4 and [b.source for b in rep.bounds] == [BoundSource.CONCISE_FLOOR]
    assert rep.known_rank == 4 and rep.consistent


def test_best_is_max_and_monotone():
    rep = combined_bound_report(catalog_make("strassen", 3))
    values = [b.value for b in rep.bounds if not b.conditional]
    assert rep.best == max(values)
    for i in range(len(values)):
        assert max(values[:i] + values[i + 1 :], default=0) <= rep.best


def test_budget_skips_gr_sources():
    rep = combined_bound_report(catalog_make("utriv", 5), budget=10)
    assert BoundSource.MIN_RANK_EXCLUSION.value in rep.skipped
    assert rep.best == 8


@pytest.mark.parametrize(
    "case", [("utriv", 3), ("utriv", 4), ("cw_big", 2), ("cw_small", 2), ("strassen", 2), ("W",), ("diag", 3)]
)
def test_never_exceeds_known_rank(case):
    rep = combined_bound_report(catalog_make(*case))
    assert rep.known_rank == catalog_info(*case).known_rank
    assert rep.best <= rep.known_rank
