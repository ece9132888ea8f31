"""Tensor-rank lower bounds with their provenance.

Each source checks its own hypotheses exactly.  A bound that rests on a
geometric rank the engine could not certify is kept in the report but marked
conditional and left out of ``best``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .catalog import catalog_info, identify, parse_catalog_id
from .classifier import CompressionWitness, find_compression, verify_compression
from .errors import BudgetExceeded, PreconditionFailed
from .genericity import GRID_BUDGET, GenericityFlags, genericity_flags, is_concise, multilinear_ranks
from .grank import DEFAULT_PRIMES, ENUM_BUDGET, GRReport, geometric_rank
from .tensor import Axis, Tensor3


class BoundSource(str, Enum):
    CONCISE_FLOOR = "ConciseFloor"
    MIN_RANK_EXCLUSION = "MinRankExclusion"
    COMPRESSION = "CompressionBound"
    GR3_GENERAL = "GR3General"
    GR3_ONE_STAR = "GR3OneStarGeneric"


@dataclass(frozen=True)
class Bound:
    value: int
    source: BoundSource
    witness: dict | None = None
    conditional: bool = False


@dataclass
class BoundReport:
    bounds: list[Bound]
    best: int
    known_rank: int | None = None
    consistent: bool = True
    permutation: tuple[int, int, int] = (0, 1, 2)
    skipped: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    gr: GRReport | None = None
    flags: GenericityFlags | None = None

    def by_source(self, source: BoundSource) -> list[Bound]:
        return [b for b in self.bounds if b.source == BoundSource(source)]


def concise_floor(T: Tensor3) -> int:
    return max(multilinear_ranks(T))


def minrank_exclusion(T: Tensor3, gr: GRReport, conditional: bool = False) -> int | None:
    """m + 1 for a concise m-cube whose geometric rank is below m.

    With ``conditional`` the certification of ``gr`` is not required.
    """
    if not (gr.certified or conditional):
        return None
    if not T.is_cube or not is_concise(T):
        return None
    m = T.dims[0]
    return m + 1 if gr.gr < m else None


def compression_rank_bound(T: Tensor3, axis: Axis, w: CompressionWitness) -> int:
    """b + c - (k + l) for a concise tensor whose slices along ``axis`` compress as ``w``."""
    axis = Axis.parse(axis)
    if not is_concise(T):
        raise PreconditionFailed("compression bound needs a concise tensor")
    if not verify_compression(T, axis, w):
        raise PreconditionFailed("compression witness does not verify")
    b, c = (T.dims[ax] for ax in axis.others())
    return b + c - w.rho


def sorted_permutation(dims) -> tuple[int, int, int]:
    """Factor order with non-decreasing dims (stable)."""
    return tuple(sorted(range(3), key=lambda i: dims[i]))


def _gr3_applicable(T: Tensor3, gr: GRReport, conditional: bool) -> bool:
    return (gr.certified or conditional) and gr.gr <= 3 and min(T.dims) > 4 and is_concise(T)


def gr3_rank_bound(T: Tensor3, gr: GRReport, flags: GenericityFlags, conditional: bool = False) -> int | None:
    """Lower bound for concise tensors of geometric rank at most 3 with all dims above 4.

    2m - 3 for 1_*-generic m-cubes, b + ceil((a - 1)/2) - 2 otherwise, where
    a <= b are the two smallest dims.  None whenever a hypothesis fails.
    """
    if not _gr3_applicable(T, gr, conditional):
        return None
    if T.is_cube and flags.one_star:
        return 2 * T.dims[0] - 3
    a, b, _ = sorted(T.dims)
    return b + -(-(a - 1) // 2) - 2


def _witness_json(axis: Axis, w: CompressionWitness) -> dict:
    return {
        "axis": axis.name,
        "k": w.k,
        "l": w.l,
        "row_basis": [[str(x) for x in r] for r in w.row_basis.rows],
        "col_basis": [[str(x) for x in r] for r in w.col_basis.rows],
    }


def _catalog_rank(T: Tensor3) -> tuple[int | None, tuple[str, ...]]:
    ident = identify(T)
    if ident is None:
        return None, ()
    info = catalog_info(*_split(ident))
    return info.known_rank, info.notes


def _split(ident: str):
    name, params = parse_catalog_id(ident)
    return (name, *params)


def combined_bound_report(
    T: Tensor3,
    primes=DEFAULT_PRIMES,
    budget: int | None = ENUM_BUDGET,
    grid_budget: int = GRID_BUDGET,
    known_rank: int | None = None,
) -> BoundReport:
    """All applicable lower bounds for R(T); ``best`` is the largest unconditional one."""
    perm = sorted_permutation(T.dims)
    bounds = [Bound(concise_floor(T), BoundSource.CONCISE_FLOOR)]
    skipped: list[str] = []
    notes: list[str] = []

    concise = is_concise(T)
    if concise:
        for ax in Axis:
            rows, cols = (T.dims[o] for o in ax.others())
            w = find_compression(T, ax, min(rows, cols) - 1)
            if w is not None:
                bounds.append(Bound(compression_rank_bound(T, ax, w), BoundSource.COMPRESSION, _witness_json(ax, w)))

    flags = None
    try:
        flags = genericity_flags(T, grid_budget)
    except BudgetExceeded:
        skipped.append(BoundSource.GR3_ONE_STAR.value)

    gr = None
    try:
        gr = geometric_rank(T, primes, budget=budget)
    except BudgetExceeded as exc:
        skipped += [BoundSource.MIN_RANK_EXCLUSION.value, BoundSource.GR3_GENERAL.value, BoundSource.GR3_ONE_STAR.value]
        notes.append(f"geometric rank skipped: {exc}")

    if gr is not None:
        cond = not gr.certified
        v = minrank_exclusion(T, gr, conditional=True)
        if v is not None:
            bounds.append(Bound(v, BoundSource.MIN_RANK_EXCLUSION, {"gr": gr.gr}, cond))
        if flags is not None:
            v = gr3_rank_bound(T, gr, flags, conditional=True)
            if v is not None:
                src = BoundSource.GR3_ONE_STAR if T.is_cube and flags.one_star else BoundSource.GR3_GENERAL
                bounds.append(Bound(v, src, {"gr": gr.gr, "sorted_dims": sorted(T.dims)}, cond))
        if cond:
            notes.append("geometric rank not certified; dependent bounds are conditional")

    best = max(b.value for b in bounds if not b.conditional)
    cat_notes: tuple[str, ...] = ()
    if known_rank is None:
        known_rank, cat_notes = _catalog_rank(T)
    notes += list(cat_notes)
    consistent = known_rank is None or best <= known_rank
    if known_rank is not None and gr is not None and T.is_cube:
        m = T.dims[0]
        rel = ">=" if known_rank >= 2 * m - gr.gr else "<"
        notes.append(f"informational: known rank {known_rank} {rel} 2m - GR = {2 * m - gr.gr}")
    return BoundReport(bounds, best, known_rank, consistent, perm, sorted(set(skipped)), notes, gr, flags)
