"""Binary schedule matrices and parameter records.

A schedule is a t x n Boolean matrix: row i is time slot i, column j is
station j, and entry (i, j) = 1 schedules station j to transmit in slot i.
All public indices are 1-based. Each row is stored as a Python int bitmask
(bit j-1 <-> station j), so restricting a row to a column set is a single
``&`` followed by ``int.bit_count``.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

__all__ = [
    "ScheduleMatrix",
    "SelectorParams",
    "KGParams",
    "MatrixFormatError",
    "make_matrix",
    "station_set",
    "station_mask",
    "mask_members",
    "column_submatrix",
    "restricted_row_weight",
    "stack",
    "all_ones",
    "identity",
    "permute_columns",
    "dumps_matrix",
    "loads_matrix",
    "read_matrix",
    "write_matrix",
]

FORMAT_MAGIC = "MPRMAT"
FORMAT_VERSION = 1


class MatrixFormatError(ValueError):
    """Malformed matrix text."""


@dataclass(frozen=True)
class ScheduleMatrix:
    """Immutable t x n binary schedule.

    ``rows[i]`` is the bitmask of row i+1. Use :func:`make_matrix` or the
    helpers below rather than building masks by hand.
    """

    t: int
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.t != len(self.rows):
            raise ValueError("t does not match the number of rows")
        full = (1 << self.n) - 1
        for r in self.rows:
            if r < 0 or r & ~full:
                raise ValueError("row mask has bits outside the n columns")

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        self._check_row(i)
        self._check_col(j)
        return (self.rows[i - 1] >> (j - 1)) & 1

    def _check_row(self, i: int) -> None:
        if not 1 <= i <= self.t:
            raise IndexError(f"row index {i} outside 1..{self.t}")

    def _check_col(self, j: int) -> None:
        if not 1 <= j <= self.n:
            raise IndexError(f"column index {j} outside 1..{self.n}")

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def bits(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple((r >> j) & 1 for j in range(self.n)) for r in self.rows
        )

    def row(self, i: int) -> tuple[int, ...]:
        self._check_row(i)
        r = self.rows[i - 1]
        return tuple((r >> j) & 1 for j in range(self.n))

    def ones(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def to_array(self) -> np.ndarray:
        return np.array(self.bits, dtype=np.uint8).reshape(self.t, self.n)

    @classmethod
    def from_array(cls, a) -> "ScheduleMatrix":
        a = np.asarray(a)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        if a.shape[0] == 0:
            return make_matrix([], n=a.shape[1])
        return make_matrix(a.tolist())

    def __str__(self) -> str:
        return "\n".join(
            "".join(str(b) for b in row) for row in self.bits
        )


@dataclass(frozen=True)
class SelectorParams:
    """(k, m, d, n) for a generalized selector; requires 1 <= d <= m <= k <= n."""

    k: int
    m: int
    d: int
    n: int

    def __post_init__(self):
        if not 1 <= self.d <= self.m <= self.k <= self.n:
            raise ValueError(
                f"selector parameters need 1 <= d <= m <= k <= n, got "
                f"k={self.k}, m={self.m}, d={self.d}, n={self.n}"
            )


@dataclass(frozen=True)
class KGParams:
    """(k, d, n) for a KG code or a locally thin code; requires 1 <= d <= k <= n."""

    k: int
    d: int
    n: int

    def __post_init__(self):
        if not 1 <= self.d <= self.k <= self.n:
            raise ValueError(
                f"KG parameters need 1 <= d <= k <= n, got "
                f"k={self.k}, d={self.d}, n={self.n}"
            )


def _parse_bit(x) -> int:
    if isinstance(x, str):
        if x in ("0", "1"):
            return int(x)
    elif isinstance(x, (bool, np.bool_)):
        return int(x)
    elif isinstance(x, (int, np.integer)) and x in (0, 1):
        return int(x)
    raise ValueError(f"non-binary matrix entry {x!r}")


def make_matrix(rows: Iterable[Sequence], n: int | None = None) -> ScheduleMatrix:
    """Build a matrix from rows of 0/1 entries (ints, bools or '0'/'1' chars).

    An empty row list needs an explicit ``n``.
    """
    masks = []
    width = n
    for row in rows:
        bits = [_parse_bit(x) for x in row]
        if width is None:
            width = len(bits)
        if len(bits) != width:
            raise ValueError(
                f"ragged rows: expected {width} entries, got {len(bits)}"
            )
        mask = 0
        for j, b in enumerate(bits):
            if b:
                mask |= 1 << j
        masks.append(mask)
    if width is None:
        raise ValueError("cannot infer n from an empty row list; pass n")
    if width < 1:
        raise ValueError("rows must have at least one entry")
    return ScheduleMatrix(len(masks), width, tuple(masks))


def station_set(members: Iterable[int], n: int) -> tuple[int, ...]:
    """Validate and normalize a station set to a sorted, duplicate-free tuple."""
    out = sorted(set(int(j) for j in members))
    for j in out:
        if not 1 <= j <= n:
            raise ValueError(f"station {j} outside 1..{n}")
    return tuple(out)


def station_mask(members: Iterable[int], n: int | None = None) -> int:
    mask = 0
    for j in members:
        if j < 1 or (n is not None and j > n):
            raise ValueError(f"station {j} outside 1..{n}")
        mask |= 1 << (j - 1)
    return mask


def mask_members(mask: int) -> tuple[int, ...]:
    out = []
    j = 1
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


def column_submatrix(M: ScheduleMatrix, S: Sequence[int]) -> ScheduleMatrix:
    """M[S]: the columns listed in S, in the order given by S."""
    cols = list(S)
    if not cols:
        raise ValueError("column set must be non-empty")
    for j in cols:
        M._check_col(j)
    masks = []
    for r in M.rows:
        mask = 0
        for pos, j in enumerate(cols):
            if (r >> (j - 1)) & 1:
                mask |= 1 << pos
        masks.append(mask)
    return ScheduleMatrix(M.t, len(cols), tuple(masks))


def restricted_row_weight(M: ScheduleMatrix, i: int, S: Iterable[int]) -> int:
    """Number of ones of row i inside the columns S."""
    M._check_row(i)
    return (M.rows[i - 1] & station_mask(S, M.n)).bit_count()


def stack(Ms: Sequence[ScheduleMatrix]) -> ScheduleMatrix:
    """Vertical concatenation, first matrix on top."""
    Ms = list(Ms)
    if not Ms:
        raise ValueError("nothing to stack")
    n = Ms[0].n
    for M in Ms[1:]:
        if M.n != n:
            raise ValueError(f"column count mismatch: {M.n} != {n}")
    rows = tuple(r for M in Ms for r in M.rows)
    return ScheduleMatrix(len(rows), n, rows)


def all_ones(t: int, n: int) -> ScheduleMatrix:
    return ScheduleMatrix(t, n, ((1 << n) - 1,) * t)


def identity(n: int) -> ScheduleMatrix:
    return ScheduleMatrix(n, n, tuple(1 << j for j in range(n)))


def permute_columns(M: ScheduleMatrix, perm: Sequence[int]) -> ScheduleMatrix:
    """Relabel columns: station j of M becomes station perm[j-1].

    ``perm`` is a permutation of 1..n given as a sequence of length n.
    """
    if sorted(perm) != list(range(1, M.n + 1)):
        raise ValueError("perm must be a permutation of 1..n")
    masks = []
    for r in M.rows:
        mask = 0
        for j in range(M.n):
            if (r >> j) & 1:
                mask |= 1 << (perm[j] - 1)
        masks.append(mask)
    return ScheduleMatrix(M.t, M.n, tuple(masks))


# text format ---------------------------------------------------------------

def dumps_matrix(M: ScheduleMatrix, comments: Iterable[str] = ()) -> str:
    lines = [f"{FORMAT_MAGIC} {FORMAT_VERSION} {M.t} {M.n}"]
    for r in M.rows:
        lines.append("".join("1" if (r >> j) & 1 else "0" for j in range(M.n)))
    for c in comments:
        for part in str(c).splitlines() or [""]:
            lines.append("# " + part if part else "#")
    return "\n".join(lines) + "\n"


def loads_matrix(text: str) -> ScheduleMatrix:
    lines = text.splitlines()
    if not lines:
        raise MatrixFormatError("empty input")
    header = lines[0].split()
    if len(header) != 4 or header[0] != FORMAT_MAGIC:
        raise MatrixFormatError(f"bad header line: {lines[0]!r}")
    if header[1] != str(FORMAT_VERSION):
        raise MatrixFormatError(f"unsupported format version {header[1]}")
    try:
        t, n = int(header[2]), int(header[3])
    except ValueError:
        raise MatrixFormatError(f"bad header line: {lines[0]!r}") from None
    if t < 0 or n < 1:
        raise MatrixFormatError(f"bad dimensions t={t} n={n}")
    body = lines[1:1 + t]
    if len(body) != t:
        raise MatrixFormatError(f"expected {t} rows, found {len(body)}")
    for lineno, line in enumerate(body, start=2):
        if len(line) != n or set(line) - {"0", "1"}:
            raise MatrixFormatError(
                f"line {lineno}: expected exactly {n} characters from {{0,1}}"
            )
    for lineno, line in enumerate(lines[1 + t:], start=2 + t):
        if line and not line.startswith("#"):
            raise MatrixFormatError(f"line {lineno}: trailing non-comment text")
    return make_matrix(body, n=n)


def read_matrix(source: str | TextIO) -> ScheduleMatrix:
    if isinstance(source, io.TextIOBase) or hasattr(source, "read"):
        return loads_matrix(source.read())
    with open(source) as f:
        return loads_matrix(f.read())


def write_matrix(M: ScheduleMatrix, path: str, comments: Iterable[str] = ()) -> None:
    with open(path, "w") as f:
        f.write(dumps_matrix(M, comments))
