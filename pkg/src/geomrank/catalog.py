"""Named tensors with their known invariants.

Index conventions are 0-based throughout.  Where a family is usually written
with basis vectors a_1, ..., a_m, index 0 here is a_1.  The families whose
usual presentation starts at a_0 (the Coppersmith-Winograd and Strassen
tensors) keep that numbering, so a_0 is index 0.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field

from .errors import BadParams, UnknownName
from .tensor import Tensor3

__all__ = ["CatalogInfo", "catalog_make", "catalog_info", "parse_catalog_id", "CATALOG_NAMES"]


def _tensor(dims, entries) -> Tensor3:
    return Tensor3(dims, entries)


def matmul(n: int) -> Tensor3:
    """Matrix multiplication tensor: a_{ij} ⊗ b_{jk} ⊗ c_{ki}, index i*n + j."""
    e = {}
    for i, j, k in itertools.product(range(n), repeat=3):
        e[(i * n + j, j * n + k, k * n + i)] = 1
    return _tensor((n * n,) * 3, e)


def cw_small(q: int) -> Tensor3:
    """sum_j a_0 b_j c_j + a_j b_0 c_j + a_j b_j c_0, j = 1..q; dims q+1."""
    e = {}
    for j in range(1, q + 1):
        e[(0, j, j)] = e[(j, 0, j)] = e[(j, j, 0)] = 1
    return _tensor((q + 1,) * 3, e)


def cw_big(q: int) -> Tensor3:
    """cw_small(q) plus a_0 b_0 c_{q+1} + a_0 b_{q+1} c_0 + a_{q+1} b_0 c_0; dims q+2."""
    e = dict(cw_small(q).items())
    e[(0, 0, q + 1)] = e[(0, q + 1, 0)] = e[(q + 1, 0, 0)] = 1
    return _tensor((q + 2,) * 3, e)


def strassen(q: int) -> Tensor3:
    """sum_j a_0 b_j c_j + a_j b_0 c_j with c indexed 1..q stored at 0..q-1."""
    e = {}
    for j in range(1, q + 1):
        e[(0, j, j - 1)] = e[(j, 0, j - 1)] = 1
    return _tensor((q + 1, q + 1, q), e)


def utriv(m: int) -> Tensor3:
    """a_1 b_1 c_1 + sum_{r>=2} a_1 b_r c_r + a_r b_1 c_r."""
    e = {(0, 0, 0): 1}
    for r in range(1, m):
        e[(0, r, r)] = e[(r, 0, r)] = 1
    return _tensor((m,) * 3, e)


def maxsymcompr(m: int) -> Tensor3:
    """utriv(m) plus the terms a_r b_r c_1; the A-slices are x_1·Id plus a symmetric arrow."""
    e = dict(utriv(m).items())
    for r in range(1, m):
        e[(r, r, 0)] = 1
    return _tensor((m,) * 3, e)


def gr3_1deg(m: int) -> Tensor3:
    """Concise 1-degenerate cube with geometric rank 3 (separate even and odd forms)."""
    e = {}
    if m % 2 == 0:
        q = m // 2
        for s in range(1, q + 1):
            e[(s - 1, 0, s - 1)] = 1
        for t in range(2, q + 1):
            e[(t + q - 2, t - 1, 0)] = 1
        for u in range(q + 1, m + 1):
            e[(m - 1, u - 1, u - 1)] = 1
    else:
        q = (m + 1) // 2
        for s in range(2, q + 1):
            e[(s - 1, 0, s - 1)] = 1
            e[(s + q - 2, s - 1, 0)] = 1
        for u in range(q + 1, m + 1):
            e[(0, u - 1, u - 1)] = 1
    return _tensor((m,) * 3, e)


def W() -> Tensor3:
    """a_1 b_1 c_2 + a_1 b_2 c_1 + a_2 b_1 c_1."""
    return _tensor((2, 2, 2), {(0, 0, 1): 1, (0, 1, 0): 1, (1, 0, 0): 1})


def diag(m: int) -> Tensor3:
    return _tensor((m,) * 3, {(i, i, i): 1 for i in range(m)})


def skew3() -> Tensor3:
    """sum over permutations s of S_3 of sign(s) a_{s(1)} b_{s(2)} c_{s(3)}."""
    e = {}
    for perm in itertools.permutations(range(3)):
        inversions = sum(perm[i] > perm[j] for i in range(3) for j in range(i + 1, 3))
        e[perm] = -1 if inversions % 2 else 1
    return _tensor((3, 3, 3), e)


def sl_basis(n: int) -> list[list[list[int]]]:
    """E_ij for i != j in row-major order, then E_ii - E_{i+1,i+1}."""
    basis = []
    for i in range(n):
        for j in range(n):
            if i != j:
                E = [[0] * n for _ in range(n)]
                E[i][j] = 1
                basis.append(E)
    for i in range(n - 1):
        E = [[0] * n for _ in range(n)]
        E[i][i] = 1
        E[i + 1][i + 1] = -1
        basis.append(E)
    return basis


def _coords_sl(M: list[list], n: int) -> list:
    """Coordinates of a traceless matrix in ``sl_basis(n)``."""
    out = [M[i][j] for i in range(n) for j in range(n) if i != j]
    acc = 0
    for k in range(n - 1):
        acc += M[k][k]
        out.append(acc)
    return out


def sl(n: int) -> Tensor3:
    """Structure tensor of the Lie algebra sl_n: T[a,b,c] = coefficient of e_c in [e_a, e_b]."""
    basis = sl_basis(n)
    m = len(basis)

    def mult(X, Y):
        return [[sum(X[i][k] * Y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]

    e = {}
    for a, X in enumerate(basis):
        for b, Y in enumerate(basis):
            XY, YX = mult(X, Y), mult(Y, X)
            comm = [[XY[i][j] - YX[i][j] for j in range(n)] for i in range(n)]
            for c, v in enumerate(_coords_sl(comm, n)):
                if v:
                    e[(a, b, c)] = v
    return _tensor((m, m, m), e)


def smm(n: int) -> Tensor3:
    """Symmetrized matrix multiplication: coefficients of tr(XYZ) + tr(YXZ)."""
    e = {}
    for i, j, k, l, s, t in itertools.product(range(n), repeat=6):
        v = (j == k and l == s and t == i) + (l == i and j == s and t == k)
        if v:
            e[(i * n + j, k * n + l, s * n + t)] = v
    return _tensor((n * n,) * 3, e)


def _flattening_ranks(dims, entries) -> tuple[int, int, int]:
    from .field import ExactMatrix

    out = []
    for ax in range(3):
        rest = [d for i, d in enumerate(dims) if i != ax]
        rows = [[0] * (rest[0] * rest[1]) for _ in range(dims[ax])]
        for idx, c in entries.items():
            others = [idx[i] for i in range(3) if i != ax]
            rows[idx[ax]][others[0] * rest[1] + others[1]] = c
        out.append(ExactMatrix(rows).rank())
    return tuple(out)


def bigbr(m: int, seed: int = 0) -> Tensor3:
    """a_1 ⊗ (sum_j b_j c_j) + T' with T' a seeded random block.

    T' lives in span(a_2..a_m) ⊗ span(b_1..b_{floor(m/2)}) ⊗ span(c_{ceil(m/2)}..c_m)
    and is redrawn until its three flattenings have full rank.
    """
    if m < 2:
        raise BadParams("bigbr needs m >= 2")
    rows_b = m // 2
    col_lo = (m + 1) // 2 - 1
    cols_c = m - col_lo
    dims = (m - 1, rows_b, cols_c)
    want = tuple(min(d, (dims[0] * dims[1] * dims[2]) // d) for d in dims)
    rng = random.Random(seed)
    while True:
        block = {}
        for i, j, k in itertools.product(*(range(d) for d in dims)):
            v = rng.randint(-3, 3)
            if v:
                block[(i, j, k)] = v
        if _flattening_ranks(dims, block) == want:
            break
    e = {(0, j, j): 1 for j in range(m)}
    for (i, j, k), v in block.items():
        key = (i + 1, j, k + col_lo)
        e[key] = e.get(key, 0) + v
    return _tensor((m,) * 3, e)


@dataclass(frozen=True)
class CatalogInfo:
    """Known invariants of a catalog tensor (None when not known)."""

    ident: str
    known_rank: int | None = None
    known_gr: int | None = None
    gr_upper: int | None = None
    border_rank: int | None = None
    concise: bool | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)


def _ceil_div(x, y):
    return -(-x // y)


_BUILDERS = {
    "matmul": (matmul, 1),
    "cw_big": (cw_big, 1),
    "cw_small": (cw_small, 1),
    "strassen": (strassen, 1),
    "utriv": (utriv, 1),
    "maxsymcompr": (maxsymcompr, 1),
    "gr3_1deg": (gr3_1deg, 1),
    "W": (W, 0),
    "sl": (sl, 1),
    "smm": (smm, 1),
    "diag": (diag, 1),
    "skew3": (skew3, 0),
    "bigbr": (bigbr, 1),
}

_MIN_PARAM = {
    "matmul": 1,
    "cw_big": 1,
    "cw_small": 1,
    "strassen": 1,
    "utriv": 2,
    "maxsymcompr": 2,
    "gr3_1deg": 4,
    "sl": 2,
    "smm": 1,
    "diag": 1,
    "bigbr": 2,
}

CATALOG_NAMES = tuple(_BUILDERS)


def _check(name, params):
    if name not in _BUILDERS:
        raise UnknownName(f"unknown catalog tensor {name!r}")
    _, nparams = _BUILDERS[name]
    if len(params) != nparams:
        raise BadParams(f"{name} takes {nparams} parameter(s), got {len(params)}")
    if nparams:
        raw = params[0]
        try:
            v = int(raw)
        except (TypeError, ValueError):
            raise BadParams(f"{name} parameter must be an integer") from None
        if isinstance(raw, bool) or (isinstance(raw, float) and raw != v):
            raise BadParams(f"{name} parameter must be an integer")
        if v < _MIN_PARAM[name]:
            raise BadParams(f"{name} needs parameter >= {_MIN_PARAM[name]}")
        return (v,)
    return ()


def catalog_make(name: str, *params, seed: int = 0) -> Tensor3:
    """Build a catalog tensor, e.g. ``catalog_make("matmul", 2)``."""
    params = _check(name, params)
    fn, _ = _BUILDERS[name]
    if name == "bigbr":
        return fn(*params, seed=seed)
    return fn(*params)


def catalog_info(name: str, *params) -> CatalogInfo:
    params = _check(name, params)
    n = params[0] if params else None
    ident = f"{name}({n})" if params else name
    if name == "matmul":
        return CatalogInfo(ident, known_gr=_ceil_div(3 * n * n, 4), concise=True)
    if name == "cw_big":
        m = n + 2
        return CatalogInfo(ident, known_rank=2 * m - 1, known_gr=3, border_rank=m, concise=True)
    if name == "cw_small":
        m = n + 1
        gr = 3 if n >= 2 else None
        return CatalogInfo(ident, known_rank=2 * m - 1, known_gr=gr, border_rank=m + 1, concise=True)
    if name == "strassen":
        return CatalogInfo(ident, known_rank=2 * n, known_gr=2 if n >= 2 else None, border_rank=n + 1, concise=True)
    if name == "utriv":
        return CatalogInfo(ident, known_rank=2 * n - 1, known_gr=2 if n >= 3 else None, border_rank=n, concise=True)
    if name == "maxsymcompr":
        return CatalogInfo(ident, known_gr=3 if n >= 3 else None, concise=True)
    if name == "gr3_1deg":
        m = n
        if m % 2 == 0:
            return CatalogInfo(ident, known_rank=3 * m // 2 - 1, known_gr=3, concise=True)
        notes = (
            f"recorded rank {m + (m - 1) // 2 - 2} is below the compression bound {m + (m - 1) // 2 - 1},"
            " which the defining expression attains",
        )
        return CatalogInfo(ident, known_rank=m + (m - 1) // 2 - 2, known_gr=3, concise=True, notes=notes)
    if name == "W":
        return CatalogInfo(ident, known_rank=3, known_gr=2, border_rank=2, concise=True)
    if name == "sl":
        return CatalogInfo(ident, known_gr=n * n - n, concise=True)
    if name == "smm":
        return CatalogInfo(ident, known_gr=n * n - n // 2, concise=True)
    if name == "diag":
        return CatalogInfo(ident, known_rank=n, known_gr=n, border_rank=n, concise=True)
    if name == "skew3":
        return CatalogInfo(ident, known_gr=2, concise=True)
    # bigbr
    return CatalogInfo(ident, gr_upper=_ceil_div(n, 2) + 1, concise=True)


_ID_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(\s*(-?\d+)\s*\))?\s*$")


def parse_catalog_id(text: str) -> tuple[str, tuple[int, ...]]:
    """Split ``"matmul(2)"`` into ``("matmul", (2,))``."""
    mt = _ID_RE.match(text)
    if not mt:
        raise UnknownName(f"cannot parse catalog id {text!r}")
    name, param = mt.groups()
    return name, ((int(param),) if param is not None else ())


def identify(T: Tensor3) -> str | None:
    """Catalog id of ``T`` when it equals a small catalog tensor entry for entry."""
    a, b, c = T.dims
    candidates = []
    if (a, b, c) == (2, 2, 2):
        candidates.append(("W", ()))
    if (a, b, c) == (3, 3, 3):
        candidates.append(("skew3", ()))
    if b == a and c == a - 1:
        candidates.append(("strassen", (a - 1,)))
    if a == b == c:
        m = a
        candidates += [("diag", (m,)), ("utriv", (m,)), ("maxsymcompr", (m,)), ("cw_small", (m - 1,)),
                       ("cw_big", (m - 2,)), ("gr3_1deg", (m,)), ("bigbr", (m,))]
        r = int(round(m ** 0.5))
        if r * r == m:
            candidates += [("matmul", (r,)), ("smm", (r,))]
        for n in range(2, 5):
            if n * n - 1 == m:
                candidates.append(("sl", (n,)))
    for name, params in candidates:
        try:
            if catalog_make(name, *params) == T:
                return catalog_info(name, *params).ident
        except (BadParams, UnknownName):
            continue
    return None

