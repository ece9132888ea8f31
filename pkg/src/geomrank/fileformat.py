"""Plain-text tensor files.

A file starts with a header ``t3 a b c`` followed by one ``i j k coeff`` line
per nonzero entry (0-based indices).  Lines whose first non-blank character
is ``#`` and blank lines are ignored.  Coefficients are integers of any size;
``p/q`` rationals are accepted as well.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .errors import DuplicateEntry, IndexOutOfRange, ParseError
from .tensor import Tensor3

HEADER = "t3"


def _coeff(text: str, line: int):
    try:
        if "/" in text:
            num, den = text.split("/")
            if int(den) == 0:
                raise ParseError("zero denominator", line)
            return Fraction(int(num), int(den))
        return int(text)
    except ValueError:
        raise ParseError(f"bad coefficient {text!r}", line) from None


def parse_tensor_file(data: bytes | str) -> Tensor3:
    """Parse file contents; every error carries the 1-based line number."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc.reason}") from None
    dims = None
    entries: dict[tuple[int, int, int], object] = {}
    for no, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if dims is None:
            if parts[0] != HEADER or len(parts) != 4:
                raise ParseError("expected header 't3 a b c'", no)
            try:
                dims = tuple(int(x) for x in parts[1:])
            except ValueError:
                raise ParseError("dimensions must be integers", no) from None
            if min(dims) < 1:
                raise ParseError("dimensions must be positive", no)
            continue
        if len(parts) != 4:
            raise ParseError("expected 'i j k coeff'", no)
        try:
            idx = tuple(int(x) for x in parts[:3])
        except ValueError:
            raise ParseError("indices must be integers", no) from None
        if any(x < 0 or x >= d for x, d in zip(idx, dims)):
            raise IndexOutOfRange(f"index {idx} outside dims {dims}", no)
        if idx in entries:
            raise DuplicateEntry(f"index {idx} appears twice", no)
        entries[idx] = _coeff(parts[3], no)
    if dims is None:
        raise ParseError("missing header 't3 a b c'", 1)
    return Tensor3(dims, entries)


def format_tensor(T: Tensor3) -> str:
    """Canonical text: header, then entries sorted by index."""
    lines = [f"{HEADER} {T.dims[0]} {T.dims[1]} {T.dims[2]}"]
    lines += [f"{i} {j} {k} {c}" for (i, j, k), c in T.items()]
    return "\n".join(lines) + "\n"


def read_tensor(path) -> Tensor3:
    return parse_tensor_file(Path(path).read_bytes())


def write_tensor(T: Tensor3, path) -> None:
    Path(path).write_text(format_tensor(T), encoding="utf-8")
