"""Exact linear algebra over prime fields and the rationals.

Two scalar domains are supported: ``PrimeField(p)`` with elements stored as
ints in ``range(p)``, and ``QQ`` with elements stored as ``Fraction``.  An
``ExactMatrix`` carries its field and is immutable; every operation returns a
new matrix.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from sympy import isprime

from .errors import DimensionMismatch, NotPrime, SingularMatrix

MAX_PRIME = 2**31


class PrimeField:
    """The field F_p for a prime p < 2**31."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        p = int(p)
        if p < 2 or p >= MAX_PRIME or not isprime(p):
            raise NotPrime(f"{p} is not a prime below 2**31")
        self.p = p

    def convert(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def mul(self, x, y):
        return x * y % self.p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


class Rationals:
    """The field Q with ``Fraction`` elements."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def convert(self, x) -> Fraction:
        return x if isinstance(x, Fraction) else Fraction(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


QQ = Rationals()
Field = PrimeField | Rationals


def _rref(rows: list[list], field: Field) -> tuple[list[list], list[int]]:
    """Reduced row echelon form in place; returns (rows, pivot columns)."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][col])
        rows[r] = [field.mul(v, inv) for v in rows[r]]
        for i in range(nrows):
            f = rows[i][col]
            if i != r and f != 0:
                rows[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return rows, pivots


class ExactMatrix:
    """Immutable rectangular matrix with exact entries in ``field``."""

    __slots__ = ("field", "rows", "_shape")

    def __init__(self, rows: Iterable[Sequence], field: Field = QQ, ncols: int | None = None):
        conv = field.convert
        data = tuple(tuple(conv(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        if any(len(row) != ncols for row in data):
            raise DimensionMismatch("ragged matrix rows")
        self.field = field
        self.rows = data
        self._shape = (len(data), ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field = QQ) -> "ExactMatrix":
        return cls([[0] * ncols for _ in range(nrows)], field, ncols)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "ExactMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], field, n)

    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.field == other.field
            and self._shape == other._shape
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field, self._shape, self.rows))

    def __repr__(self):
        return f"ExactMatrix({[list(r) for r in self.rows]}, {self.field!r})"

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def transpose(self) -> "ExactMatrix":
        n, m = self._shape
        return ExactMatrix([[self.rows[i][j] for i in range(n)] for j in range(m)], self.field, n)

    T = property(transpose)

    def _check_same(self, other):
        if self.field != other.field:
            raise DimensionMismatch("matrices over different fields")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        if self._shape != other._shape:
            raise DimensionMismatch(f"shapes {self._shape} and {other._shape}")
        f = self.field
        return ExactMatrix(
            [[f.add(x, y) for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)],
            f,
            self._shape[1],
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s) -> "ExactMatrix":
        f = self.field
        s = f.convert(s)
        return ExactMatrix([[f.mul(s, x) for x in r] for r in self.rows], f, self._shape[1])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        n, k = self._shape
        k2, m = other._shape
        if k != k2:
            raise DimensionMismatch(f"cannot multiply {self._shape} by {other._shape}")
        f = self.field
        cols = list(zip(*other.rows)) if m else []
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = sum(x * y for x, y in zip(r, c) if x and y)
                row.append(acc)
            out.append(row)
        return ExactMatrix(out, f, m)

    def apply(self, vec: Sequence) -> list:
        """Matrix times column vector."""
        f = self.field
        vec = [f.convert(v) for v in vec]
        if len(vec) != self._shape[1]:
            raise DimensionMismatch("vector length does not match column count")
        return [f.convert(sum(x * v for x, v in zip(r, vec))) for r in self.rows]

    def rref(self) -> tuple["ExactMatrix", list[int]]:
        rows, piv = _rref([list(r) for r in self.rows], self.field)
        return ExactMatrix(rows, self.field, self._shape[1]), piv

    def rank(self) -> int:
        if not self.rows or not self._shape[1]:
            return 0
        return len(_rref([list(r) for r in self.rows], self.field)[1])

    def nullspace(self) -> list[list]:
        """Basis of the right kernel {x : M x = 0} as a list of vectors."""
        f = self.field
        m = self._shape[1]
        rows, piv = _rref([list(r) for r in self.rows], f) if self.rows else ([], [])
        free = [j for j in range(m) if j not in piv]
        basis = []
        for fj in free:
            v = [f.zero] * m
            v[fj] = f.one
            for i, pj in enumerate(piv):
                v[pj] = f.sub(f.zero, rows[i][fj])
            basis.append(v)
        return basis

    def left_nullspace(self) -> list[list]:
        return self.transpose().nullspace()

    def inverse(self) -> "ExactMatrix":
        n, m = self._shape
        if n != m:
            raise SingularMatrix("non-square matrix has no inverse")
        f = self.field
        aug = [list(r) + [f.one if i == j else f.zero for j in range(n)] for i, r in enumerate(self.rows)]
        rows, piv = _rref(aug, f)
        if piv[:n] != list(range(n)):
            raise SingularMatrix("matrix is singular")
        return ExactMatrix([r[n:] for r in rows], f, n)

    def is_invertible(self) -> bool:
        n, m = self._shape
        return n == m and self.rank() == n

    def det(self):
        n, m = self._shape
        if n != m:
            raise DimensionMismatch("determinant of a non-square matrix")
        f = self.field
        rows = [list(r) for r in self.rows]
        det = f.one
        for col in range(n):
            piv = next((i for i in range(col, n) if rows[i][col] != 0), None)
            if piv is None:
                return f.zero
            if piv != col:
                rows[col], rows[piv] = rows[piv], rows[col]
                det = f.sub(f.zero, det)
            det = f.mul(det, rows[col][col])
            inv = f.inv(rows[col][col])
            for i in range(col + 1, n):
                g = f.mul(rows[i][col], inv)
                if g:
                    rows[i] = [f.sub(x, f.mul(g, y)) for x, y in zip(rows[i], rows[col])]
        return det

    def reduce(self, field: PrimeField) -> "ExactMatrix":
        """The same matrix with entries mapped into ``field``."""
        return ExactMatrix(self.rows, field, self._shape[1])


def matrix_rank(M: ExactMatrix) -> int:
    return M.rank()


def left_kernel_dim(M: ExactMatrix) -> int:
    return M.shape[0] - M.rank()


def solve_linear(A: ExactMatrix, b: Sequence) -> list | None:
    """One solution x of A x = b, or None when the system is inconsistent."""
    f = A.field
    n, m = A.shape
    aug = [list(r) + [f.convert(v)] for r, v in zip(A.rows, b)]
    rows, piv = _rref(aug, f)
    if m in piv:
        return None
    x = [f.zero] * m
    for i, pj in enumerate(piv):
        x[pj] = rows[i][m]
    return x


def span_basis(vectors: Iterable[Sequence], field: Field = QQ) -> list[list]:
    """Row-reduced basis of the span of ``vectors``."""
    vecs = [list(v) for v in vectors]
    if not vecs:
        return []
    M = ExactMatrix(vecs, field)
    R, piv = M.rref()
    return [list(R.rows[i]) for i in range(len(piv))]


def complete_basis(vectors: Sequence[Sequence], n: int, field: Field = QQ) -> list[list]:
    """Extend independent ``vectors`` to a basis of field^n with unit vectors."""
    out = [list(field.convert(x) for x in v) for v in vectors]
    rank = len(out)
    for j in range(n):
        if rank == n:
            break
        e = [field.one if i == j else field.zero for i in range(n)]
        if ExactMatrix(out + [e], field, n).rank() > rank:
            out.append(e)
            rank += 1
    return out
