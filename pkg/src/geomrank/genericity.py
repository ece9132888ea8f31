"""Multilinear ranks, conciseness, 1-genericity and bounded-rank tests.

Ranks of slices over Q are decided with integer evaluation grids.  Every
(r+1)-minor of the slice family is a polynomial of degree at most r+1 in
each coordinate, so a minor that vanishes on the grid {0, ..., r+1}^d is
identically zero.  Grid points are ranked modulo a few primes near 2**31
whose product exceeds the Hadamard bound of those minors, which makes the
modular rank equal to the rational rank.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import prevprime

from ._kernels import odometer_histogram, rank_mod
from .errors import BudgetExceeded, NotApplicable
from .field import ExactMatrix
from .tensor import Axis, Tensor3

GRID_BUDGET = 10**7
RANDOM_TRIALS = 20
PROBABILISTIC_PRIME = 1073741789  # largest prime below 2**30


@lru_cache(maxsize=None)
def _large_primes(count: int) -> tuple[int, ...]:
    out = []
    p = 2**31
    for _ in range(count):
        p = prevprime(p)
        out.append(p)
    return tuple(out)


@dataclass(frozen=True)
class MlRanks:
    ml_A: int
    ml_B: int
    ml_C: int

    def __iter__(self):
        return iter((self.ml_A, self.ml_B, self.ml_C))

    def __getitem__(self, axis) -> int:
        return (self.ml_A, self.ml_B, self.ml_C)[int(axis)]


@dataclass(frozen=True)
class GenericityFlags:
    concise: bool
    one_A: bool
    one_B: bool
    one_C: bool
    exact: bool = True

    @property
    def one_star(self) -> bool:
        return self.one_A or self.one_B or self.one_C

    @property
    def one_generic(self) -> bool:
        return self.one_A and self.one_B and self.one_C

    def as_dict(self) -> dict:
        return {
            "concise": self.concise,
            "one_A": self.one_A,
            "one_B": self.one_B,
            "one_C": self.one_C,
            "one_star": self.one_star,
            "one_generic": self.one_generic,
            "exact": self.exact,
        }


@dataclass(frozen=True)
class GenericRank:
    """Generic slice rank with how it was established.

    ``method`` is "full" (a point of maximal possible rank was found), "grid"
    (upper bound proved on an evaluation grid) or "probabilistic".
    """

    rank: int
    method: str
    witness: tuple[int, ...] | None = None

    @property
    def exact(self) -> bool:
        return self.method != "probabilistic"


def flattening(T: Tensor3, axis: Axis) -> ExactMatrix:
    """The map X^* -> (other factors) as a dim(X) × (product of the others) matrix."""
    axis = Axis.parse(axis)
    r_ax, c_ax = axis.others()
    ncols = T.dims[r_ax] * T.dims[c_ax]
    rows = [[0] * ncols for _ in range(T.dims[axis])]
    for idx, c in T.items():
        rows[idx[axis]][idx[r_ax] * T.dims[c_ax] + idx[c_ax]] = c
    return ExactMatrix(rows, ncols=ncols)


def multilinear_ranks(T: Tensor3) -> MlRanks:
    return MlRanks(*(flattening(T, ax).rank() for ax in Axis))


def multilinear_ranks_mod(T: Tensor3, p: int) -> MlRanks:
    """Flattening ranks after reducing the coefficients modulo ``p``."""
    arr = T.mod_array(p)
    out = []
    for ax in Axis:
        flat = np.moveaxis(arr, int(ax), 0).reshape(T.dims[ax], -1)
        out.append(int(rank_mod(np.ascontiguousarray(flat), p)))
    return MlRanks(*out)


def is_concise(T: Tensor3) -> bool:
    return tuple(multilinear_ranks(T)) == T.dims


def _stack_mod(T: Tensor3, axis: Axis, P: int) -> np.ndarray:
    """Integer-scaled basis slices along ``axis`` reduced mod ``P``."""
    axis = Axis.parse(axis)
    S = T.integer_scaled()
    r_ax, c_ax = axis.others()
    out = np.zeros((T.dims[axis], T.dims[r_ax], T.dims[c_ax]), dtype=np.int64)
    for idx, c in S.items():
        out[idx[axis], idx[r_ax], idx[c_ax]] = c % P
    return out


def slice_rank_lower_bound(T: Tensor3, axis: Axis, seed: int = 0) -> int:
    """A rank attained by some slice (hence a lower bound on the generic rank)."""
    return _random_max_rank(T, Axis.parse(axis), RANDOM_TRIALS, seed)[0]


def _random_max_rank(T: Tensor3, axis: Axis, trials: int, seed: int) -> tuple[int, tuple[int, ...] | None]:
    """Largest rank seen at random points mod a big prime; a lower bound on the generic rank."""
    P = PROBABILISTIC_PRIME
    stack = _stack_mod(T, axis, P)
    rng = random.Random(seed)
    best, witness = 0, None
    cap = min(stack.shape[1:])
    for _ in range(trials):
        x = [rng.randrange(P) for _ in range(stack.shape[0])]
        M = np.zeros(stack.shape[1:], dtype=np.int64)
        for xi, Si in zip(x, stack):
            M = (M + xi * Si) % P
        r = int(rank_mod(M, P))
        if r > best:
            best, witness = r, tuple(x)
        if best == cap:
            break
    return best, witness


def _hadamard_bound(T: Tensor3, axis: Axis, side: int, k: int) -> int:
    """Upper bound on |k-minor| of any slice at a grid point with coordinates < side."""
    S = T.integer_scaled()
    axis = Axis.parse(axis)
    r_ax, c_ax = axis.others()
    cell: dict[tuple[int, int], int] = {}
    for idx, c in S.items():
        key = (idx[r_ax], idx[c_ax])
        cell[key] = cell.get(key, 0) + abs(c)
    E = (side - 1) * max(cell.values(), default=0)
    return math.isqrt(k**k * E ** (2 * k)) + 1


def grid_max_rank(T: Tensor3, axis: Axis, side: int, k_cap: int) -> int:
    """Exact maximum over the grid {0..side-1}^d of the rational slice rank, capped at ``k_cap``.

    Exactness holds for ranks up to ``k_cap``: modular ranks are computed for
    enough primes that any nonzero minor of size <= k_cap survives one of them.
    """
    axis = Axis.parse(axis)
    bound = _hadamard_bound(T, axis, side, max(k_cap, 1))
    primes = []
    prod = 1
    count = 1
    while prod <= bound:
        primes = list(_large_primes(count))
        prod = math.prod(primes)
        count += 1
    best = 0
    for P in primes:
        stack = _stack_mod(T, axis, P)
        base = np.zeros(stack.shape[1:], dtype=np.int64)
        hist = odometer_histogram(base, stack, P, side)
        nz = np.nonzero(hist)[0]
        best = max(best, int(nz[-1]) if len(nz) else 0)
    return best


def generic_rank_report(T: Tensor3, axis: Axis, budget: int = GRID_BUDGET, seed: int = 0) -> GenericRank:
    axis = Axis.parse(axis)
    cap = min(T.dims[ax] for ax in axis.others())
    d = T.dims[axis]
    lower, witness = _random_max_rank(T, axis, RANDOM_TRIALS, seed)
    if lower == cap:
        return GenericRank(lower, "full", witness)
    while True:
        side = lower + 2
        if side**d > budget:
            return GenericRank(lower, "probabilistic", witness)
        found = grid_max_rank(T, axis, side, lower + 1)
        if found <= lower:
            return GenericRank(lower, "grid", witness)
        lower = found
        if lower == cap:
            return GenericRank(lower, "grid", witness)


def generic_slice_rank(T: Tensor3, axis: Axis, budget: int = GRID_BUDGET, seed: int = 0) -> int:
    """Rank of a generic element of the slice space along ``axis``."""
    return generic_rank_report(T, axis, budget, seed).rank


def is_one_generic(T: Tensor3, axis: Axis, budget: int = GRID_BUDGET) -> tuple[bool, tuple[int, ...] | None]:
    """Whether the slice space along ``axis`` contains a full-rank matrix, with a witness covector."""
    if not T.is_cube:
        raise NotApplicable("1-genericity is defined for a = b = c only")
    axis = Axis.parse(axis)
    m = T.dims[0]
    # try small integer points first so that witnesses are readable
    for w in _small_witnesses(m):
        if _slice_rank_int(T, axis, w) == m:
            return True, w
    rep = generic_rank_report(T, axis, budget)
    if rep.rank == m:
        return True, rep.witness
    return False, None


def _small_witnesses(d: int):
    n = math.isqrt(d)
    if n * n == d:
        # the identity of an n×n matrix space, in row-major coordinates
        yield tuple(int(i % (n + 1) == 0) for i in range(d))
    yield tuple([1] * d)
    for i in range(d):
        yield tuple(int(j == i) for j in range(d))
    yield tuple(range(1, d + 1))


def _slice_rank_int(T: Tensor3, axis: Axis, cov) -> int:
    from .tensor import slice as tslice

    return tslice(T, axis, list(cov)).rank()


@dataclass(frozen=True)
class RankBoundVerdict:
    holds: bool
    exact: bool
    witness: tuple[int, ...] | None = None


def bounded_rank_verdict(
    T: Tensor3, axis: Axis, r: int, budget: int = GRID_BUDGET, allow_probabilistic: bool = True
) -> RankBoundVerdict:
    """Decide whether every slice along ``axis`` has rank <= r."""
    axis = Axis.parse(axis)
    if r < 0:
        raise ValueError("rank bound must be non-negative")
    cap = min(T.dims[ax] for ax in axis.others())
    if r >= cap:
        return RankBoundVerdict(True, True)
    lower, witness = _random_max_rank(T, axis, RANDOM_TRIALS, seed=r)
    if lower > r:
        return RankBoundVerdict(False, True, witness)
    d = T.dims[axis]
    side = r + 2
    if side**d > budget:
        if allow_probabilistic:
            return RankBoundVerdict(True, False)
        raise BudgetExceeded(
            f"grid of {side}^{d} points exceeds budget {budget}", needed=side**d, budget=budget, probable=True
        )
    return RankBoundVerdict(grid_max_rank(T, axis, side, r + 1) <= r, True)


def bounded_rank_test(T: Tensor3, axis: Axis, r: int, budget: int = GRID_BUDGET, allow_probabilistic: bool = False) -> bool:
    """True iff every element of the slice space along ``axis`` has rank <= r.

    Raises ``BudgetExceeded`` (carrying the randomized verdict in ``probable``)
    when the certifying grid is too large and probabilistic answers are off.
    """
    return bounded_rank_verdict(T, axis, r, budget, allow_probabilistic).holds


def genericity_flags(T: Tensor3, budget: int = GRID_BUDGET) -> GenericityFlags:
    concise = is_concise(T)
    if not T.is_cube:
        return GenericityFlags(concise, False, False, False)
    ones = []
    exact = True
    for ax in Axis:
        ok, _ = is_one_generic(T, ax, budget)
        if not ok:
            exact = exact and generic_rank_report(T, ax, budget).exact
        ones.append(ok)
    return GenericityFlags(concise, *ones, exact=exact)
