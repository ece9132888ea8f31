import pytest

from geomrank import (
    CATALOG_NAMES,
    BadParams,
    UnknownName,
    catalog_info,
    catalog_make,
    identify,
    is_concise,
    multilinear_ranks,
    parse_catalog_id,
)

SMALL = [
    ("matmul", 2),
    ("matmul", 3),
    ("cw_big", 2),
    ("cw_big", 3),
    ("cw_small", 2),
    ("cw_small", 3),
    ("strassen", 2),
    ("strassen", 3),
    ("utriv", 3),
    ("utriv", 5),
    ("maxsymcompr", 5),
    ("gr3_1deg", 8),
    ("gr3_1deg", 9),
    ("W",),
    ("sl", 2),
    ("sl", 3),
    ("smm", 2),
    ("diag", 4),
    ("skew3",),
    ("bigbr", 5),
]


def test_entry_counts():
    for q in (1, 2, 3):
        assert len(catalog_make("cw_big", q)) == 3 * q + 3
    for m in (3, 4, 7):
        assert len(catalog_make("utriv", m)) == 2 * m - 1
    S = catalog_make("skew3")
    assert len(S) == 6 and sorted(set(S.entries.values())) == [-1, 1]


def test_matmul_is_trace_of_product():
    T = catalog_make("matmul", 2)
    assert len(T) == 8 and T.dims == (4, 4, 4)
    assert tuple(multilinear_ranks(T)) == (4, 4, 4)


@pytest.mark.parametrize("case", SMALL, ids=lambda c: "-".join(map(str, c)))
def test_catalog_tensors_are_concise(case):
    T = catalog_make(*case)
    assert is_concise(T)
    assert catalog_info(*case).concise


def test_strassen_flattening_ranks():
    for q in (2, 3, 4):
        assert max(multilinear_ranks(catalog_make("strassen", q))) == q + 1


def test_bigbr_is_seeded():
    assert catalog_make("bigbr", 6) == catalog_make("bigbr", 6)
    assert catalog_make("bigbr", 6, seed=1) != catalog_make("bigbr", 6)


def test_errors():
    with pytest.raises(UnknownName):
        catalog_make("nope", 2)
    with pytest.raises(BadParams):
        catalog_make("matmul")
    with pytest.raises(BadParams):
        catalog_make("utriv", 1)
    with pytest.raises(BadParams):
        catalog_make("W", 2)


def test_known_values():
    assert catalog_info("matmul", 3).known_gr == 7
    assert catalog_info("cw_big", 4).known_rank == 11
    assert catalog_info("utriv", 5).known_rank == 9
    assert catalog_info("strassen", 3).known_rank == 6
    assert catalog_info("gr3_1deg", 8).known_rank == 11
    assert catalog_info("sl", 3).known_gr == 6
    assert catalog_info("smm", 3).known_gr == 8


def test_parse_and_identify():
    assert parse_catalog_id("matmul(2)") == ("matmul", (2,))
    assert parse_catalog_id("W") == ("W", ())
    assert identify(catalog_make("utriv", 4)) == "utriv(4)"
    assert identify(catalog_make("W")) == "W"
    assert set(CATALOG_NAMES) >= {"matmul", "skew3", "bigbr"}
