"""Sparse exact 3-tensors and the operations that build new ones from old."""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, DuplicateEntry, IndexOutOfRange, SingularMatrix
from .field import QQ, ExactMatrix, Field, PrimeField


class Axis(enum.IntEnum):
    A = 0
    B = 1
    C = 2

    @classmethod
    def parse(cls, value) -> "Axis":
        if isinstance(value, Axis):
            return value
        if isinstance(value, str):
            try:
                return cls[value.strip().upper()]
            except KeyError:
                raise ValueError(f"unknown axis {value!r}") from None
        return cls(int(value))

    def others(self) -> tuple["Axis", "Axis"]:
        """The two remaining axes in increasing order (rows, then columns)."""
        return tuple(ax for ax in Axis if ax != self)


def _normalize(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, (int, np.integer)):
        return int(c)
    raise TypeError(f"coefficient {c!r} is not an exact number")


class Tensor3:
    """Immutable sparse tensor in A⊗B⊗C with exact coefficients.

    Coefficients are Python ints, or ``Fraction`` when a rational basis change
    produced them.  Zero coefficients are never stored.
    """

    __slots__ = ("dims", "_entries", "_key")

    def __init__(self, dims: Sequence[int], entries: Mapping[tuple[int, int, int], object]):
        dims = tuple(int(d) for d in dims)
        if len(dims) != 3 or min(dims) < 1:
            raise DimensionMismatch(f"dims must be three positive counts, got {dims}")
        clean = {}
        for idx, c in entries.items():
            c = _normalize(c)
            if c != 0:
                clean[tuple(int(x) for x in idx)] = c
        self.dims = dims
        self._entries = dict(sorted(clean.items()))
        self._key = (dims, tuple(self._entries.items()))

    @property
    def entries(self) -> dict[tuple[int, int, int], object]:
        return dict(self._entries)

    def items(self):
        return self._entries.items()

    def __getitem__(self, idx) -> object:
        return self._entries.get(tuple(idx), 0)

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        return isinstance(other, Tensor3) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Tensor3(dims={self.dims}, nnz={len(self._entries)})"

    @property
    def is_cube(self) -> bool:
        return self.dims[0] == self.dims[1] == self.dims[2]

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._entries.values())

    def denominator_lcm(self) -> int:
        den = 1
        for c in self._entries.values():
            if isinstance(c, Fraction):
                den = math.lcm(den, c.denominator)
        return den

    def integer_scaled(self) -> "Tensor3":
        """The tensor times the lcm of its denominators (same slice ranks)."""
        den = self.denominator_lcm()
        if den == 1:
            return self
        return Tensor3(self.dims, {k: int(c * den) for k, c in self._entries.items()})

    def max_abs(self) -> int:
        return max((abs(c) for c in self.integer_scaled()._entries.values()), default=0)

    def mod_array(self, p: int) -> np.ndarray:
        """Dense int64 array of the coefficients reduced into range(p)."""
        F = PrimeField(p) if not isinstance(p, PrimeField) else p
        arr = np.zeros(self.dims, dtype=np.int64)
        for (i, j, k), c in self._entries.items():
            arr[i, j, k] = F.convert(c)
        return arr

    def int_array(self) -> np.ndarray:
        """Dense int64 array of the integer-scaled coefficients."""
        arr = np.zeros(self.dims, dtype=np.int64)
        for (i, j, k), c in self.integer_scaled()._entries.items():
            arr[i, j, k] = c
        return arr

    def axis_stack(self, axis: Axis, array: np.ndarray | None = None) -> np.ndarray:
        """Array of basis slices along ``axis``: shape (dim axis, rows, cols)."""
        arr = self.int_array() if array is None else array
        return np.ascontiguousarray(np.moveaxis(arr, int(axis), 0))


def build_tensor(dims: Sequence[int], entries: Iterable[Sequence]) -> Tensor3:
    """Tensor from (i, j, k, coeff) tuples, rejecting bad indices and duplicates."""
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3 or min(dims) < 1:
        raise DimensionMismatch(f"dims must be three positive counts, got {dims}")
    out: dict[tuple[int, int, int], object] = {}
    for i, j, k, c in entries:
        idx = (int(i), int(j), int(k))
        if any(x < 0 or x >= d for x, d in zip(idx, dims)):
            raise IndexOutOfRange(f"index {idx} outside dims {dims}")
        c = _normalize(c)
        if idx in out and out[idx] != c:
            raise DuplicateEntry(f"index {idx} given twice with different values")
        out[idx] = c
    return Tensor3(dims, out)


def slice(T: Tensor3, axis: Axis, covector: Sequence, field: Field = QQ) -> ExactMatrix:
    """Contract ``axis`` against ``covector``; rows/cols are the remaining axes in order."""
    axis = Axis.parse(axis)
    if len(covector) != T.dims[axis]:
        raise DimensionMismatch(f"covector of length {len(covector)} for axis of dim {T.dims[axis]}")
    r_ax, c_ax = axis.others()
    rows, cols = T.dims[r_ax], T.dims[c_ax]
    cov = [field.convert(x) for x in covector]
    acc = [[0] * cols for _ in range(rows)]
    for idx, c in T.items():
        w = cov[idx[axis]]
        if w:
            acc[idx[r_ax]][idx[c_ax]] += w * field.convert(c)
    return ExactMatrix(acc, field, cols)


def kronecker(T: Tensor3, S: Tensor3) -> Tensor3:
    """Factor-wise tensor product with row-major index flattening (i*a' + i')."""
    a2, b2, c2 = S.dims
    out = {}
    for (i, j, k), x in T.items():
        for (i2, j2, k2), y in S.items():
            out[(i * a2 + i2, j * b2 + j2, k * c2 + k2)] = x * y
    return Tensor3(tuple(d * e for d, e in zip(T.dims, S.dims)), out)


def direct_sum(T: Tensor3, S: Tensor3) -> Tensor3:
    a, b, c = T.dims
    out = dict(T.items())
    for (i, j, k), y in S.items():
        out[(i + a, j + b, k + c)] = y
    return Tensor3(tuple(d + e for d, e in zip(T.dims, S.dims)), out)


@dataclass(frozen=True)
class BasisChange:
    """Invertible matrices acting on A, B and C; all over the same field."""

    g_A: ExactMatrix
    g_B: ExactMatrix
    g_C: ExactMatrix

    def __iter__(self):
        return iter((self.g_A, self.g_B, self.g_C))

    @property
    def field(self) -> Field:
        return self.g_A.field

    @classmethod
    def identity(cls, dims: Sequence[int], field: Field = QQ) -> "BasisChange":
        return cls(*(ExactMatrix.identity(n, field) for n in dims))

    def inverse(self) -> "BasisChange":
        return BasisChange(*(g.inverse() for g in self))

    def then(self, other: "BasisChange") -> "BasisChange":
        """Apply ``self`` first, then ``other``."""
        return BasisChange(*(h @ g for g, h in zip(self, other)))

    def permuted(self, perm: Sequence[int]) -> "BasisChange":
        mats = tuple(self)
        return BasisChange(*(mats[p] for p in perm))


def change_basis(T: Tensor3, g: BasisChange) -> Tensor3:
    """(g_A ⊗ g_B ⊗ g_C)·T over the field of ``g``."""
    mats = tuple(g)
    for n, M in zip(T.dims, mats):
        if M.shape != (n, n):
            raise DimensionMismatch(f"basis change of shape {M.shape} for factor of dim {n}")
        if not M.is_invertible():
            raise SingularMatrix("basis change is not invertible")
    field = g.field
    conv = field.convert
    # contract one factor at a time: T[i,j,k] -> sum_i g[i',i] T[i,j,k]
    cur = {idx: conv(c) for idx, c in T.items()}
    for ax, M in enumerate(mats):
        cols = [[(r, x) for r, x in enumerate(col) if x] for col in zip(*M.rows)]
        nxt: dict = {}
        for idx, c in cur.items():
            for r, x in cols[idx[ax]]:
                key = idx[:ax] + (r,) + idx[ax + 1 :]
                nxt[key] = nxt.get(key, 0) + x * c
        cur = nxt
    if isinstance(field, PrimeField):
        cur = {k: v % field.p for k, v in cur.items()}
    return Tensor3(T.dims, cur)


def permute_factors(T: Tensor3, perm: Sequence[int]) -> Tensor3:
    """Reorder factors: new factor k is old factor ``perm[k]``."""
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != [0, 1, 2]:
        raise ValueError(f"{perm} is not a permutation of (0, 1, 2)")
    dims = tuple(T.dims[p] for p in perm)
    return Tensor3(dims, {tuple(idx[p] for p in perm): c for idx, c in T.items()})


def random_invertible(n: int, field: Field = QQ, rng: random.Random | None = None, spread: int = 3) -> ExactMatrix:
    """Random invertible n×n matrix with entries in [-spread, spread] (reduced into ``field``)."""
    rng = rng or random.Random()
    while True:
        M = ExactMatrix([[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)], field, n)
        if M.is_invertible():
            return M


def random_basis_change(dims: Sequence[int], field: Field = QQ, rng: random.Random | None = None) -> BasisChange:
    rng = rng or random.Random()
    return BasisChange(*(random_invertible(n, field, rng) for n in dims))
