"""Normal forms for bounded-rank-2 slice spaces and for concise tensors of geometric rank 2.

Everything here is exact rational linear algebra.  Compression spaces are
found with the second Wong sequence: for a slice X0 of maximal rank, iterate
W <- span{M v : M a basis slice, X0 v ∈ W} from W = 0.  When the limit W*
stays inside im X0, the columns V = X0^{-1}(W*) are mapped into W* by every
slice, which is exactly a compression with k = dim W* and l = cols - dim V.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .catalog import skew3 as skew3_tensor
from .catalog import utriv as utriv_tensor
from .errors import DimensionMismatch, Unresolved
from .field import QQ, ExactMatrix, complete_basis, span_basis
from .genericity import bounded_rank_verdict, is_concise
from .tensor import Axis, BasisChange, Tensor3, change_basis, permute_factors


class Rank2Variant(str, Enum):
    TWO_ROWS = "TwoRows"
    TWO_COLUMNS = "TwoColumns"
    ROW_PLUS_COLUMN = "RowPlusColumn"
    SKEW3 = "Skew3"
    NOT_BOUNDED2 = "NotBounded2"


class GR2Variant(str, Enum):
    SKEW3_TENSOR = "Skew3Tensor"
    UTRIV = "UtrivM"
    NOT_CONCISE = "NotConcise"
    NOT_GR2 = "NotGR2"
    SLICE_SPACE_RANK2 = "SliceSpaceRank2Axis"


@dataclass(frozen=True)
class CompressionWitness:
    """Row/column bases after which every slice has a zero lower-right (rows-k)×(cols-l) block."""

    k: int
    l: int  # noqa: E741
    row_basis: ExactMatrix
    col_basis: ExactMatrix

    @property
    def rho(self) -> int:
        return self.k + self.l


@dataclass(frozen=True)
class Rank2SpaceKind:
    variant: Rank2Variant
    row_basis: ExactMatrix | None = None
    col_basis: ExactMatrix | None = None


@dataclass(frozen=True)
class GR2Class:
    """Classification result.

    For a normal form, ``change_basis(permute_factors(T, permutation), witness)``
    equals the catalog tensor entry for entry.
    """

    variant: GR2Variant
    axis: Axis | None = None
    permutation: tuple[int, int, int] = (0, 1, 2)
    witness: BasisChange | None = None
    target: Tensor3 | None = None

    def apply(self, T: Tensor3) -> Tensor3:
        if self.witness is None:
            raise ValueError("no witness to apply")
        return change_basis(permute_factors(T, self.permutation), self.witness)


def basis_slices(T: Tensor3, axis: Axis) -> list[ExactMatrix]:
    """Slices at the standard basis covectors, as rational matrices."""
    axis = Axis.parse(axis)
    r_ax, c_ax = axis.others()
    rows, cols = T.dims[r_ax], T.dims[c_ax]
    data = [[[0] * cols for _ in range(rows)] for _ in range(T.dims[axis])]
    for idx, c in T.items():
        data[idx[axis]][idx[r_ax]][idx[c_ax]] = c
    return [ExactMatrix(m, QQ, cols) for m in data]


def _column_span(mats: list[ExactMatrix]) -> list[list]:
    return span_basis((col for M in mats for col in M.transpose().rows), QQ)


def _row_span(mats: list[ExactMatrix]) -> list[list]:
    return span_basis((row for M in mats for row in M.rows), QQ)


def _annihilator(basis: list[list], n: int) -> list[list]:
    if not basis:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    return ExactMatrix(basis, QQ, n).nullspace()


def _basis_matrix(back: list[list], n: int) -> ExactMatrix:
    """Invertible matrix whose last rows are ``back``, preceded by unit vectors completing them."""
    extra = complete_basis(back, n, QQ)[len(back):]
    return ExactMatrix(extra + list(back), QQ, n)


def _transform(mats, R: ExactMatrix, C: ExactMatrix):
    Ct = C.transpose()
    return [R @ M @ Ct for M in mats]


def verify_compression(T: Tensor3, axis: Axis, w: CompressionWitness) -> bool:
    """Exact check that every slice has a zero lower-right block in the witness bases."""
    mats = basis_slices(T, axis)
    rows, cols = mats[0].shape
    if w.row_basis.shape != (rows, rows) or w.col_basis.shape != (cols, cols):
        raise DimensionMismatch("witness bases do not match the slice shape")
    if not (0 <= w.k <= rows and 0 <= w.l <= cols):
        raise DimensionMismatch("compression block sizes out of range")
    R = w.row_basis if w.row_basis.field == QQ else ExactMatrix(w.row_basis.rows, QQ)
    C = w.col_basis if w.col_basis.field == QQ else ExactMatrix(w.col_basis.rows, QQ)
    if not (R.is_invertible() and C.is_invertible()):
        return False
    for M in _transform(mats, R, C):
        for i in range(w.k, rows):
            if any(M[i, j] != 0 for j in range(w.l, cols)):
                return False
    return True


def _max_rank_slice(mats: list[ExactMatrix], seed: int = 0) -> ExactMatrix:
    rng = random.Random(seed)
    best, best_rank = None, -1
    cap = min(mats[0].shape)
    for _ in range(12):
        coeffs = [rng.randint(-7, 7) for _ in mats]
        X = mats[0].scale(0)
        for c, M in zip(coeffs, mats):
            if c:
                X = X + M.scale(c)
        r = X.rank()
        if r > best_rank:
            best, best_rank = X, r
        if r == cap:
            break
    return best


def _preimage(X: ExactMatrix, W: list[list]) -> list[list]:
    """Basis of {v : X v ∈ span W}."""
    rows, cols = X.shape
    aug = [list(X.rows[i]) + [-w[i] for w in W] for i in range(rows)]
    null = ExactMatrix(aug, QQ, cols + len(W)).nullspace()
    return span_basis((v[:cols] for v in null), QQ)


def _contains(big: list[list], small: list[list], n: int) -> bool:
    if not small:
        return True
    if not big:
        return False
    return ExactMatrix(big + small, QQ, n).rank() == len(big)


def wong_compression(T: Tensor3, axis: Axis, seed: int = 0) -> CompressionWitness | None:
    """Compression witness of bounded rank equal to the maximal slice rank, if one exists."""
    mats = basis_slices(T, axis)
    rows, cols = mats[0].shape
    X0 = _max_rank_slice(mats, seed)
    image = _column_span([X0])
    W: list[list] = []
    while True:
        pre = _preimage(X0, W)
        new = span_basis((M.apply(v) for M in mats for v in pre), QQ)
        if not _contains(image, new, rows):
            return None
        if len(new) == len(W):
            break
        W = new
    V = _preimage(X0, W)
    k, l = len(W), cols - len(V)  # noqa: E741
    R = _basis_matrix(_annihilator(W, rows), rows)
    C = _basis_matrix(V, cols)
    w = CompressionWitness(k, l, R, C)
    return w if verify_compression(T, axis, w) else None


def find_compression(T: Tensor3, axis: Axis, max_r: int) -> CompressionWitness | None:
    """A verified compression witness with k + l <= max_r, or None."""
    axis = Axis.parse(axis)
    mats = basis_slices(T, axis)
    rows, cols = mats[0].shape
    candidates = []
    S_col = _column_span(mats)
    if len(S_col) <= max_r:
        R = _basis_matrix(_annihilator(S_col, rows), rows)
        candidates.append(CompressionWitness(len(S_col), 0, R, ExactMatrix.identity(cols)))
    S_row = _row_span(mats)
    if len(S_row) <= max_r:
        C = _basis_matrix(_annihilator(S_row, cols), cols)
        candidates.append(CompressionWitness(0, len(S_row), ExactMatrix.identity(rows), C))
    w = wong_compression(T, axis)
    if w is not None and w.rho <= max_r:
        candidates.append(w)
    for w in sorted(candidates, key=lambda w: (w.rho, w.k)):
        if verify_compression(T, axis, w):
            return w
    return None


def _skew_normalizer(mats: list[ExactMatrix]) -> ExactMatrix | None:
    """Invertible 3×3 P with P·M skew-symmetric for every M, if one exists."""
    eqs = []
    for M in mats:
        for i in range(3):
            for j in range(i, 3):
                # (P M)[i,j] + (P M)[j,i], unknown P[r,s] at position 3r+s
                row = [0] * 9
                for s in range(3):
                    row[3 * i + s] += M[s, j]
                    row[3 * j + s] += M[s, i]
                eqs.append(row)
    null = ExactMatrix(eqs, QQ, 9).nullspace()
    if not null:
        return None
    rng = random.Random(1)
    tries = [null[0]] + [
        [sum(rng.randint(-3, 3) * v[t] for v in null) for t in range(9)] for _ in range(10)
    ]
    for v in tries:
        P = ExactMatrix([v[0:3], v[3:6], v[6:9]], QQ, 3)
        if P.is_invertible():
            return P
    return None


def classify_rank2_space(T: Tensor3, axis: Axis) -> Rank2SpaceKind:
    """Which bounded-rank-2 form the slice space along ``axis`` takes, with bases exhibiting it."""
    axis = Axis.parse(axis)
    verdict = bounded_rank_verdict(T, axis, 2)
    if not verdict.holds:
        return Rank2SpaceKind(Rank2Variant.NOT_BOUNDED2)
    mats = basis_slices(T, axis)
    rows, cols = mats[0].shape
    S_col = _column_span(mats)
    if len(S_col) <= 2:
        R = _basis_matrix(_annihilator(S_col, rows), rows)
        return Rank2SpaceKind(Rank2Variant.TWO_ROWS, R, ExactMatrix.identity(cols))
    S_row = _row_span(mats)
    if len(S_row) <= 2:
        C = _basis_matrix(_annihilator(S_row, cols), cols)
        return Rank2SpaceKind(Rank2Variant.TWO_COLUMNS, ExactMatrix.identity(rows), C)
    w = wong_compression(T, axis)
    if w is not None and (w.k, w.l) == (1, 1):
        return Rank2SpaceKind(Rank2Variant.ROW_PLUS_COLUMN, w.row_basis, w.col_basis)
    if len(S_col) == 3 and len(S_row) == 3:
        R0 = _basis_matrix(_annihilator(S_col, rows), rows)
        C0 = _basis_matrix(_annihilator(S_row, cols), cols)
        small = [ExactMatrix([r[:3] for r in M.rows[:3]], QQ, 3) for M in _transform(mats, R0, C0)]
        P = _skew_normalizer(small)
        if P is not None:
            lift = ExactMatrix(
                [[P[i, j] if i < 3 and j < 3 else int(i == j) for j in range(rows)] for i in range(rows)], QQ, rows
            )
            return Rank2SpaceKind(Rank2Variant.SKEW3, lift @ R0, C0)
    raise Unresolved(f"slice space along {axis.name} has bounded rank 2 but matches no normal form")


# permutation bringing a given axis to the last (resp. first) factor position;
# both keep the other two axes in increasing order, so slice bases carry over
_TO_LAST = {Axis.A: (1, 2, 0), Axis.B: (0, 2, 1), Axis.C: (0, 1, 2)}
_TO_FIRST = {Axis.A: (0, 1, 2), Axis.B: (1, 0, 2), Axis.C: (2, 0, 1)}


def _utriv_witness(T: Tensor3, kind: Rank2SpaceKind) -> BasisChange:
    """Basis change taking T, whose C-slices are a row-plus-column space, to utriv(m)."""
    m = T.dims[0]
    I = ExactMatrix.identity(m)
    step1 = BasisChange(kind.row_basis, kind.col_basis, I)
    T1 = change_basis(T, step1)
    y = [[T1[0, j, k] for k in range(m)] for j in range(m)]
    z = [[T1[i, 0, k] for k in range(m)] for i in range(1, m)]
    Y = span_basis(y[1:], QQ)
    Z = span_basis(z, QQ)
    if len(Y) != m - 1 or len(Z) != m - 1:
        raise Unresolved("first-row or first-column vectors are dependent")
    if ExactMatrix(Y + Z, QQ, m).rank() != m - 1:
        raise Unresolved("first-row and first-column vectors span different hyperplanes of C")
    G = ExactMatrix(y, QQ, m).transpose()  # columns y_0, ..., y_{m-1}
    if not G.is_invertible():
        raise Unresolved("first-row vectors do not span C")
    g_C = G.inverse()
    # z_i in the new C basis: only coordinates 1..m-1 are nonzero
    zc = [g_C.apply(v) for v in z]
    Zm = ExactMatrix([[zc[i][k] for i in range(m - 1)] for k in range(1, m)], QQ, m - 1)
    block = Zm.transpose().inverse()
    g_A = ExactMatrix(
        [[1 if (i, j) == (0, 0) else (block[i - 1, j - 1] if i and j else 0) for j in range(m)] for i in range(m)],
        QQ,
        m,
    )
    return step1.then(BasisChange(g_A, I, g_C))


def _skew_witness(T: Tensor3, kind: Rank2SpaceKind) -> BasisChange:
    """Basis change taking T, whose A-slices form a skew space, to skew3."""
    I = ExactMatrix.identity(3)
    step1 = BasisChange(I, kind.row_basis, kind.col_basis)
    T1 = change_basis(T, step1)
    # coordinates of each skew slice in the basis given by skew3's own slices
    H = ExactMatrix([[T1[i, 1, 2], -T1[i, 0, 2], T1[i, 0, 1]] for i in range(3)], QQ, 3)
    if not H.is_invertible():
        raise Unresolved("skew slices are dependent")
    return step1.then(BasisChange(H.inverse(), I, I))


def classify_gr2_tensor(T: Tensor3) -> GR2Class:
    """Identify T as skew3 or utriv(m) up to basis change and factor permutation."""
    if not is_concise(T):
        return GR2Class(GR2Variant.NOT_CONCISE)
    bounded = [ax for ax in Axis if bounded_rank_verdict(T, ax, 2).holds]
    if not bounded:
        return GR2Class(GR2Variant.NOT_GR2)
    if not T.is_cube:
        return GR2Class(GR2Variant.SLICE_SPACE_RANK2, axis=bounded[0])
    m = T.dims[0]
    problems = []
    for ax in bounded:
        kind = classify_rank2_space(T, ax)
        if kind.variant == Rank2Variant.ROW_PLUS_COLUMN:
            perm = _TO_LAST[ax]
            try:
                g = _utriv_witness(permute_factors(T, perm), kind)
            except Unresolved as exc:
                problems.append(f"{ax.name}: {exc}")
                continue
            target, variant = utriv_tensor(m), GR2Variant.UTRIV
        elif kind.variant == Rank2Variant.SKEW3 and m == 3:
            perm = _TO_FIRST[ax]
            g = _skew_witness(permute_factors(T, perm), kind)
            target, variant = skew3_tensor(), GR2Variant.SKEW3_TENSOR
        else:
            problems.append(f"{ax.name}: {kind.variant.value}")
            continue
        result = GR2Class(
            variant,
            axis=ax,
            permutation=perm,
            witness=g,
            target=target,
        )
        if result.apply(T) != target:
            raise Unresolved(f"witness along {ax.name} does not reproduce the normal form")
        return result
    raise Unresolved("concise tensor with a bounded-rank-2 slice space but no normal form: " + "; ".join(problems))
