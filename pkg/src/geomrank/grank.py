"""Geometric rank from exact point counts over prime fields.

For a tensor T in A⊗B⊗C the affine variety

    Σ̂^{AB} = {(α, β) : T(α, β, ·) = 0}

has dimension a + b - GR(T).  Enumerating α ∈ F_p^a and ranking each slice
T(α) gives both |Σ̂^{AB}(F_p)| = Σ_α p^(b - rank T(α)) and the sizes of the
rank strata Σ^A_j = {rank T(α) <= min(b, c) - j}.  Dimensions are read off
from how these counts grow with p, and GR follows either directly or from

    GR(T) = a + min(b, c) - 1 - max_j (projdim Σ^A_j + j).
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from sympy import nextprime

from ._kernels import odometer_histogram
from .errors import BudgetExceeded, Inconsistent, InsufficientPrimes
from .field import PrimeField
from .genericity import multilinear_ranks, multilinear_ranks_mod, slice_rank_lower_bound
from .tensor import Axis, Tensor3

DEFAULT_PRIMES = (3, 5, 7)
ENUM_BUDGET = 10**8
SLOPE_TOL = 0.35

PAIRINGS = ("ab", "ac", "bc")
# the axis enumerated for each pairing when both sides cost the same; the three
# pairings then use three different axes, so they check each other
_PAIR_AXES = {"ab": (Axis.A, Axis.B), "bc": (Axis.B, Axis.C), "ac": (Axis.C, Axis.A)}


class BadPrimeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class StrataProfile:
    """Exact histogram: counts[r] = #{α ∈ F_p^d : rank T(α) = r}."""

    axis: Axis
    prime: int
    counts: tuple[int, ...]

    @property
    def max_rank(self) -> int:
        return max((r for r, c in enumerate(self.counts) if c), default=0)

    def stratum_count(self, j: int) -> int:
        """Affine count of Σ_j = {rank <= n - j}, the zero covector included."""
        n = len(self.counts) - 1
        return sum(self.counts[: n - j + 1])

    def as_dict(self) -> dict[int, int]:
        return {r: c for r, c in enumerate(self.counts)}


def _check_budget(p: int, d: int, budget: int | None) -> None:
    if budget is not None and p**d > budget:
        raise BudgetExceeded(f"{p}^{d} points exceed the enumeration budget {budget}", needed=p**d, budget=budget)


def stratum_counts(T: Tensor3, axis: Axis, p: int, budget: int | None = ENUM_BUDGET) -> StrataProfile:
    """Rank histogram of all slices T(α), α ∈ F_p^d, with T reduced mod p."""
    axis = Axis.parse(axis)
    PrimeField(p)
    d = T.dims[axis]
    _check_budget(p, d, budget)
    stack = T.axis_stack(axis, T.mod_array(p))
    n = min(stack.shape[1:])
    hist = np.zeros(n + 1, dtype=np.int64)
    # one representative per line: leading nonzero coordinate t equal to 1
    for t in range(d):
        hist += odometer_histogram(stack[t], stack[t + 1 :], p, p)
    counts = [int(c) * (p - 1) for c in hist]
    counts[0] += 1
    return StrataProfile(axis, p, tuple(counts))


def sigma_hat_from_profile(profile: StrataProfile, partner_dim: int) -> int:
    """|Σ̂| from a histogram: each α contributes p^(kernel dimension on the partner side)."""
    p = profile.prime
    return sum(c * p ** (partner_dim - r) for r, c in enumerate(profile.counts))


def _parse_pairing(pairing) -> str:
    key = "".join(sorted(str(pairing).lower()))
    if key not in PAIRINGS:
        raise ValueError(f"unknown pairing {pairing!r}")
    return key


def _enumerated_axis(dims: Sequence[int], pairing: str) -> tuple[Axis, Axis]:
    first, second = _PAIR_AXES[pairing]
    if dims[second] < dims[first]:
        first, second = second, first
    return first, second


def sigma_hat_count(T: Tensor3, pairing: str, p: int, budget: int | None = ENUM_BUDGET) -> int:
    """Exact |Σ̂^{XY}(F_p)|, enumerating the smaller side of the pairing."""
    pairing = _parse_pairing(pairing)
    enum_ax, partner = _enumerated_axis(T.dims, pairing)
    return sigma_hat_from_profile(stratum_counts(T, enum_ax, p, budget), T.dims[partner])


@dataclass(frozen=True)
class DimFit:
    """Dimension read off from point counts at several primes.

    ``slope_estimates`` holds log(N2/N1)/log(p2/p1) for consecutive primes.
    With three or more primes the counts are also fitted to
    log N = k + d log p + e/p on consecutive triples (``corrected_estimates``),
    which removes the leading 1/p drift; the corrected values then decide.
    """

    dimension: int
    slope_estimates: tuple[float, ...]
    certified: bool
    corrected_estimates: tuple[float, ...] = ()

    @property
    def estimates(self) -> tuple[float, ...]:
        return self.corrected_estimates or self.slope_estimates


def _corrected(ps: Sequence[int], ns: Sequence[int]) -> list[float]:
    out = []
    for i in range(len(ps) - 2):
        A = np.array([[1.0, math.log(p), 1.0 / p] for p in ps[i : i + 3]])
        y = np.array([math.log(n) for n in ns[i : i + 3]])
        out.append(float(np.linalg.solve(A, y)[1]))
    return out


def dimension_fit(counts: Mapping[int, int], tol: float = SLOPE_TOL) -> DimFit:
    """Fit the dimension d in N(p) ≈ c·p^d from exact counts at two or more primes."""
    if len(counts) < 2:
        raise InsufficientPrimes("dimension fitting needs at least two primes")
    ps = sorted(counts)
    ns = [int(counts[p]) for p in ps]
    if min(ns) < 1:
        raise ValueError("point counts must be positive")
    slopes = tuple(math.log(n2 / n1) / math.log(p2 / p1) for p1, p2, n1, n2 in zip(ps, ps[1:], ns, ns[1:]))
    corrected = tuple(_corrected(ps, ns)) if len(ps) >= 3 else ()
    est = corrected or slopes
    rounded = [round(e) for e in est]
    dimension = max(0, rounded[-1])
    certified = len(set(rounded)) == 1 and all(abs(e - r) <= tol for e, r in zip(est, rounded)) and rounded[-1] >= 0
    return DimFit(dimension, slopes, certified, corrected)


@dataclass(frozen=True)
class StratumDim:
    """Affine dimension of Σ_j on one axis and how it was obtained.

    ``how`` is one of: full, empty, kernel, hypersurface, same-as-previous, fit.
    ``dim`` is None for an empty stratum (only the zero covector).
    """

    j: int
    dim: int | None
    how: str
    certified: bool
    fit: DimFit | None = None

    @property
    def projdim(self) -> int | None:
        return None if self.dim is None else self.dim - 1


def fit_strata(
    profiles: Sequence[StrataProfile],
    d: int,
    rows: int,
    cols: int,
    flat_rank: int,
    rank_attained: int,
    tol: float = SLOPE_TOL,
) -> list[StratumDim]:
    """Dimensions of all strata Σ_0 ⊇ Σ_1 ⊇ ... ⊇ Σ_n on one axis.

    Exact facts are used where available: Σ_n is the kernel of the flattening
    (a linear space), a square slice space containing an invertible matrix has
    Σ_1 = {det = 0}, a hypersurface, and each Σ_j sits inside Σ_{j-1}.
    Fitted values are clamped to the determinantal codimension range.
    """
    out: list[StratumDim] = []
    n = min(rows, cols)
    prev_counts = None
    for j in range(n + 1):
        k = n - j
        counts = {pr.prime: pr.stratum_count(j) for pr in profiles}
        prev = out[-1] if out else None
        if all(c == p**d for p, c in counts.items()):
            out.append(StratumDim(j, d, "full", True))
        elif k == 0:
            # the zero covector always lies here, so this stratum bounds GR by d
            out.append(StratumDim(j, d - flat_rank, "kernel", True))
        elif all(c == 1 for c in counts.values()):
            out.append(StratumDim(j, None, "empty", True))
        elif prev is not None and counts == prev_counts:
            out.append(StratumDim(j, prev.dim, "same-as-previous", prev.certified, prev.fit))
        elif rows == cols and rank_attained == n and k == n - 1:
            out.append(StratumDim(j, d - 1, "hypersurface", True))
        else:
            fit = dimension_fit(counts, tol)
            lo = max(0, d - (rows - k) * (cols - k))
            hi = d - 1 if rank_attained > k else d
            if prev is not None and prev.dim is not None:
                hi = min(hi, prev.dim)
            dim = min(max(fit.dimension, lo), hi)
            out.append(StratumDim(j, dim, "fit", fit.certified or lo == hi, fit))
        prev_counts = counts
    return out


def stratified_value(dims: Sequence[StratumDim], d: int, n: int) -> tuple[int, int, bool]:
    """(GR, maximizing j, certified) from stratum dimensions on one axis."""
    best, arg = None, 0
    for s in dims:
        if s.dim is None:
            continue
        v = s.dim - 1 + s.j
        if best is None or v > best:
            best, arg = v, s.j
    gr = d + n - 1 - best
    # an uncertain stratum only matters if its largest possible value reaches the max
    certified = True
    cap = d
    for s in dims:
        if s.certified:
            if s.dim is not None:
                cap = s.dim
        elif cap - 1 + s.j >= best:
            certified = False
    return gr, arg, certified


@dataclass(frozen=True)
class AxisAnalysis:
    axis: Axis
    profiles: tuple[StrataProfile, ...]
    strata: tuple[StratumDim, ...]
    gr: int
    j_star: int
    certified: bool


@dataclass(frozen=True)
class PairingResult:
    pairing: str
    enumerated: Axis
    sigma_hat: Mapping[int, int]
    direct: DimFit
    gr_direct: int
    gr_stratified: int
    gr: int
    certified: bool


@dataclass
class GRReport:
    gr_ab: int | None
    gr_ac: int | None
    gr_bc: int | None
    gr: int
    strata_dims: dict[str, dict[int, int | None]]
    max_stratum: tuple[str, int]
    flag_excess: int | None
    certified: bool
    primes: tuple[int, ...] = ()
    dropped_primes: tuple[int, ...] = ()
    pairings: dict[str, PairingResult] = field(default_factory=dict)
    axes: dict[str, AxisAnalysis] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def values(self) -> dict[str, int]:
        return {k: v for k, v in (("ab", self.gr_ab), ("ac", self.gr_ac), ("bc", self.gr_bc)) if v is not None}


def _analyse_axis(T: Tensor3, axis: Axis, profiles: Sequence[StrataProfile], flat_rank: int, attained: int) -> AxisAnalysis:
    rows, cols = (T.dims[ax] for ax in axis.others())
    strata = fit_strata(profiles, T.dims[axis], rows, cols, flat_rank, attained)
    gr, j_star, cert = stratified_value(strata, T.dims[axis], min(rows, cols))
    return AxisAnalysis(axis, tuple(profiles), tuple(strata), gr, j_star, cert)


def _prime_usable(T: Tensor3, p: int) -> bool:
    den = T.denominator_lcm()
    return den % p != 0


def geometric_rank(
    T: Tensor3,
    primes: Iterable[int] = DEFAULT_PRIMES,
    pairings: Iterable[str] = PAIRINGS,
    budget: int | None = ENUM_BUDGET,
    strict: bool = False,
) -> GRReport:
    """Geometric rank of T by exact point counting, cross-checked over pairings and routes.

    Each requested pairing XY enumerates one axis; its value is taken from the
    direct fit of |Σ̂^{XY}| and from the strata of that axis.  The report is
    certified only when every route that could be certified agrees.
    """
    primes = sorted({int(p) for p in primes})
    if len(primes) < 2:
        raise InsufficientPrimes("geometric rank needs at least two primes")
    for p in primes:
        PrimeField(p)
    pairings = sorted({_parse_pairing(x) for x in pairings})
    notes: list[str] = []

    ml = multilinear_ranks(T)
    plan = {pr: _enumerated_axis(T.dims, pr) for pr in pairings}
    axes_needed = sorted({ax for ax, _ in plan.values()})
    attained = {ax: slice_rank_lower_bound(T, ax) for ax in axes_needed}
    for ax in axes_needed:
        for p in primes:
            _check_budget(p, T.dims[ax], budget)

    good: list[int] = []
    dropped: list[int] = []
    profiles: dict[Axis, dict[int, StrataProfile]] = {ax: {} for ax in axes_needed}

    def try_prime(p: int) -> bool:
        if not _prime_usable(T, p) or tuple(multilinear_ranks_mod(T, p)) != tuple(ml):
            return False
        got = {ax: stratum_counts(T, ax, p, budget) for ax in axes_needed}
        if any(got[ax].max_rank < attained[ax] for ax in axes_needed):
            return False
        for ax in axes_needed:
            profiles[ax][p] = got[ax]
        return True

    for p in primes:
        if try_prime(p):
            good.append(p)
        else:
            dropped.append(p)
            msg = f"prime {p} dropped: reduction mod {p} loses rank"
            notes.append(msg)
            warnings.warn(msg, BadPrimeWarning, stacklevel=2)
    extra = max(primes)
    while len(good) < 2:
        extra = int(nextprime(extra))
        for ax in axes_needed:
            _check_budget(extra, T.dims[ax], budget)
        if try_prime(extra):
            good.append(extra)
            notes.append(f"prime {extra} added to replace dropped primes")
        else:
            dropped.append(extra)

    analyses = {
        ax: _analyse_axis(T, ax, [profiles[ax][p] for p in good], ml[ax], attained[ax]) for ax in axes_needed
    }

    results: dict[str, PairingResult] = {}
    for pr in pairings:
        ax, partner = plan[pr]
        sig = {p: sigma_hat_from_profile(profiles[ax][p], T.dims[partner]) for p in good}
        fit = dimension_fit(sig)
        gr_direct = T.dims[ax] + T.dims[partner] - fit.dimension
        an = analyses[ax]
        certified_routes = []
        if fit.certified:
            certified_routes.append(gr_direct)
        if an.certified:
            certified_routes.append(an.gr)
        if not certified_routes:
            value, ok = an.gr, False
            notes.append(f"pairing {pr}: no route certified")
        elif len(set(certified_routes)) > 1:
            value, ok = an.gr, False
            notes.append(f"pairing {pr}: direct count gives {gr_direct}, strata give {an.gr}")
        else:
            value, ok = certified_routes[0], True
        results[pr] = PairingResult(pr, ax, sig, fit, gr_direct, an.gr, value, ok)

    values = [r.gr for r in results.values()]
    certified = all(r.certified for r in results.values()) and len(set(values)) == 1
    if len(set(values)) > 1:
        notes.append("pairings disagree: " + ", ".join(f"{k}={r.gr}" for k, r in results.items()))
        if strict:
            raise Inconsistent(notes[-1])
    tally = Counter(values)
    top = max(tally.values())
    gr = min(v for v, c in tally.items() if c == top)

    first = analyses[axes_needed[0]]
    flag = None
    if T.is_cube and tuple(ml) == T.dims:
        flag = T.dims[0] - gr
    get = lambda key: results[key].gr if key in results else None  # noqa: E731
    return GRReport(
        gr_ab=get("ab"),
        gr_ac=get("ac"),
        gr_bc=get("bc"),
        gr=gr,
        strata_dims={
            an.axis.name: {s.j: s.projdim for s in an.strata} for an in analyses.values()
        },
        max_stratum=(first.axis.name, first.j_star),
        flag_excess=flag,
        certified=certified,
        primes=tuple(good),
        dropped_primes=tuple(dropped),
        pairings=results,
        axes={an.axis.name: an for an in analyses.values()},
        warnings=notes,
    )


def gr_stratified(
    T: Tensor3, axis: Axis, j: int, primes: Iterable[int] = DEFAULT_PRIMES, budget: int | None = ENUM_BUDGET
) -> float:
    """GR_{X,j} = d + n - 1 - projdim Σ_j - j, or ``math.inf`` when Σ_j is empty."""
    axis = Axis.parse(axis)
    rows, cols = (T.dims[ax] for ax in axis.others())
    n = min(rows, cols)
    if not 1 <= j <= n:
        raise ValueError(f"stratum index must lie in 1..{n}")
    primes = sorted(set(primes))
    if len(primes) < 2:
        raise InsufficientPrimes("stratum fitting needs at least two primes")
    ml = multilinear_ranks(T)
    profiles = [stratum_counts(T, axis, p, budget) for p in primes]
    strata = fit_strata(profiles, T.dims[axis], rows, cols, ml[axis], slice_rank_lower_bound(T, axis))
    s = strata[j]
    if not s.dim:
        return math.inf
    return T.dims[axis] + n - 1 - s.projdim - j
