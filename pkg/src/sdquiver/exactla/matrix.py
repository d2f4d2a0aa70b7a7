"""Immutable dense matrices over the rationals.

Scalars are :class:`fractions.Fraction`.  Rank, determinant and echelon
decisions are delegated to the integer kernels after clearing denominators
row by row, so nothing here ever rounds.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence

from sdquiver.errors import DimensionError, ParseError
from sdquiver.exactla import kernels

Rational = Fraction

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def to_rational(v) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise ParseError(f"not a rational: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        m = _RAT_RE.match(v)
        if not m:
            raise ParseError(f"not a rational: {v!r}")
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ParseError(f"zero denominator: {v!r}")
        return Fraction(int(m.group(1)), den)
    raise ParseError(f"not a rational: {v!r}")


def format_rational(v: Fraction) -> str:
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


class RMatrix:
    """A ``rows x cols`` matrix with Fraction entries, stored row-major."""

    __slots__ = ("_rows", "_cols", "_e", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        if rows < 0 or cols < 0:
            raise DimensionError(f"negative shape {rows}x{cols}")
        e = tuple(to_rational(x) for x in entries)
        if len(e) != rows * cols:
            raise DimensionError(f"{len(e)} entries for shape {rows}x{cols}")
        self._rows = rows
        self._cols = cols
        self._e = e
        self._hash = None

    @classmethod
    def _raw(cls, rows: int, cols: int, e: tuple) -> "RMatrix":
        m = object.__new__(cls)
        m._rows, m._cols, m._e, m._hash = rows, cols, e, None
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
        return cls(len(rows), cols, [x for r in rows for x in r])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RMatrix":
        return cls._raw(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def column(cls, values: Sequence) -> "RMatrix":
        return cls(len(values), 1, values)

    @classmethod
    def scalar(cls, v) -> "RMatrix":
        return cls(1, 1, [v])

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        return (self._rows, self._cols)

    @property
    def entries(self) -> tuple:
        return self._e

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self._rows and 0 <= j < self._cols):
            raise IndexError(ij)
        return self._e[i * self._cols + j]

    def row(self, i: int) -> tuple:
        c = self._cols
        return self._e[i * c:(i + 1) * c]

    def col(self, j: int) -> tuple:
        return self._e[j::self._cols] if self._cols else ()

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self._rows)]

    @property
    def T(self) -> "RMatrix":
        r, c, e = self._rows, self._cols, self._e
        return RMatrix._raw(c, r, tuple(e[i * c + j] for j in range(c) for i in range(r)))

    def is_zero(self) -> bool:
        return not any(self._e)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self._e)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RMatrix):
            return NotImplemented
        return self.shape == other.shape and self._e == other._e

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._rows, self._cols, self._e))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in self.row(i)) for i in range(self._rows))
        return f"RMatrix({self._rows}x{self._cols}: [{body}])"

    def _check_same(self, other: "RMatrix") -> None:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "RMatrix") -> "RMatrix":
        self._check_same(other)
        return RMatrix._raw(self._rows, self._cols, tuple(a + b for a, b in zip(self._e, other._e)))

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        self._check_same(other)
        return RMatrix._raw(self._rows, self._cols, tuple(a - b for a, b in zip(self._e, other._e)))

    def __neg__(self) -> "RMatrix":
        return RMatrix._raw(self._rows, self._cols, tuple(-a for a in self._e))

    def scale(self, s) -> "RMatrix":
        s = to_rational(s)
        return RMatrix._raw(self._rows, self._cols, tuple(s * a for a in self._e))

    def __rmul__(self, s) -> "RMatrix":
        return self.scale(s)

    def __mul__(self, other):
        if isinstance(other, RMatrix):
            return self @ other
        return self.scale(other)

    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        if self._cols != other._rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        n, k, m = self._rows, self._cols, other._cols
        a, da = _common_int(self)
        b, db = _common_int(other)
        bt = list(zip(*b)) if m and k else [()] * m
        den = da * db
        out = []
        for i in range(n):
            ra = a[i]
            for j in range(m):
                s = sum(x * y for x, y in zip(ra, bt[j])) if k else 0
                out.append(Fraction(s, den))
        return RMatrix._raw(n, m, tuple(out))

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in self.row(i)] for i in range(self._rows)]

    @classmethod
    def from_json(cls, data, rows: int | None = None, cols: int | None = None) -> "RMatrix":
        """Parse nested arrays of rationals; ``rows``/``cols`` pin empty shapes."""
        if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
            raise ParseError("matrix must be a list of lists")
        nr = len(data)
        nc = len(data[0]) if nr else (cols if cols is not None else 0)
        if rows is not None and rows != nr:
            raise ParseError(f"expected {rows} rows, got {nr}")
        if cols is not None and cols != nc:
            raise ParseError(f"expected {cols} columns, got {nc}")
        if any(len(r) != nc for r in data):
            raise ParseError("ragged matrix rows")
        return cls(nr, nc, [to_rational(x) for r in data for x in r])


def _common_int(m: RMatrix) -> tuple[list[list[int]], int]:
    """Integer matrix ``N`` and ``d > 0`` with ``m == N / d``."""
    d = 1
    for x in m._e:
        if x.denominator != 1:
            d = d * x.denominator // math.gcd(d, x.denominator)
    c = m._cols
    e = m._e
    if d == 1:
        return [[x.numerator for x in e[i * c:(i + 1) * c]] for i in range(m._rows)], 1
    return [[x.numerator * (d // x.denominator) for x in e[i * c:(i + 1) * c]] for i in range(m._rows)], d


def _row_int(m: RMatrix) -> tuple[list[list[int]], int]:
    """Rows scaled to integers separately; returns the rows and the product of scales."""
    out = []
    total = 1
    c = m._cols
    for i in range(m._rows):
        row = m._e[i * c:(i + 1) * c]
        d = 1
        for x in row:
            if x.denominator != 1:
                d = d * x.denominator // math.gcd(d, x.denominator)
        out.append([x.numerator * (d // x.denominator) for x in row])
        total *= d
    return out, total


def det(m: RMatrix) -> Fraction:
    """Exact determinant; raises DimensionError for non-square input."""
    if m.rows != m.cols:
        raise DimensionError(f"det of non-square {m.rows}x{m.cols} matrix")
    a, s = _row_int(m)
    return Fraction(kernels.det_int(a), s)


def rank(m: RMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    a, _ = _row_int(m)
    return kernels.rank_int(a)


def rref(m: RMatrix) -> tuple[RMatrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    if m.rows == 0 or m.cols == 0:
        return m, []
    a, _ = _row_int(m)
    r, piv, den = kernels.rref_int(a)
    e = tuple(Fraction(x, den) for row in r for x in row)
    return RMatrix._raw(m.rows, m.cols, e), piv


def kernel_basis(m: RMatrix) -> RMatrix:
    """Columns spanning ``{v : m v = 0}``, one per free column of the RREF."""
    n = m.cols
    if m.rows == 0:
        return RMatrix.identity(n)
    r, piv = rref(m)
    pivset = set(piv)
    free = [j for j in range(n) if j not in pivset]
    zero, one = Fraction(0), Fraction(1)
    cols = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for i, p in enumerate(piv):
            v[p] = -r[i, f]
        cols.append(v)
    return RMatrix._raw(n, len(free), tuple(cols[k][i] for i in range(n) for k in range(len(free))))


def left_kernel(m: RMatrix) -> RMatrix:
    """Rows spanning ``{u : u m = 0}``."""
    return kernel_basis(m.T).T


def coker_projection(m: RMatrix) -> RMatrix:
    """Full-row-rank ``P`` with ``P m = 0`` whose rows span the left kernel, in RREF."""
    k = left_kernel(m)
    if k.rows == 0:
        return k
    return rref(k)[0]


def inverse(m: RMatrix) -> RMatrix:
    n = m.rows
    if n != m.cols:
        raise DimensionError("inverse of non-square matrix")
    r, piv = rref(hstack([m, RMatrix.identity(n)]))
    if n and piv[:n] != list(range(n)):
        raise DimensionError("matrix is singular")
    return submatrix(r, range(n), range(n, 2 * n))


def right_inverse(m: RMatrix) -> RMatrix:
    """``X`` with ``m X = I`` for full-row-rank ``m``: ``m^T (m m^T)^{-1}``."""
    return m.T @ inverse(m @ m.T)


def kron(a: RMatrix, b: RMatrix) -> RMatrix:
    """Kronecker product; block ``(i, j)`` is ``a[i, j] * b``."""
    ar, ac, br, bc = a.rows, a.cols, b.rows, b.cols
    ae, be = a.entries, b.entries
    out = []
    for i in range(ar):
        for k in range(br):
            brow = be[k * bc:(k + 1) * bc]
            for j in range(ac):
                x = ae[i * ac + j]
                if x:
                    out.extend(x * y for y in brow)
                else:
                    out.extend((x,) * bc)
    return RMatrix._raw(ar * br, ac * bc, tuple(out))


def star(gamma: RMatrix, omega: RMatrix) -> RMatrix:
    """Block matrix whose ``(s, t)`` block is ``omega[s, t] * gamma``."""
    return kron(omega, gamma)


def hstack(ms: Sequence[RMatrix], rows: int | None = None) -> RMatrix:
    ms = list(ms)
    if not ms:
        return RMatrix.zeros(rows or 0, 0)
    r = ms[0].rows
    if any(x.rows != r for x in ms):
        raise DimensionError("hstack row mismatch")
    out = []
    for i in range(r):
        for x in ms:
            out.extend(x.row(i))
    return RMatrix._raw(r, sum(x.cols for x in ms), tuple(out))


def vstack(ms: Sequence[RMatrix], cols: int | None = None) -> RMatrix:
    ms = list(ms)
    if not ms:
        return RMatrix.zeros(0, cols or 0)
    c = ms[0].cols
    if any(x.cols != c for x in ms):
        raise DimensionError("vstack column mismatch")
    return RMatrix._raw(sum(x.rows for x in ms), c, tuple(e for x in ms for e in x.entries))


def block(grid: Sequence[Sequence[RMatrix]]) -> RMatrix:
    return vstack([hstack(row) for row in grid])


def block_diag(ms: Sequence[RMatrix]) -> RMatrix:
    ms = list(ms)
    nr = sum(x.rows for x in ms)
    nc = sum(x.cols for x in ms)
    out = [Fraction(0)] * (nr * nc)
    r0 = c0 = 0
    for x in ms:
        for i in range(x.rows):
            for j in range(x.cols):
                out[(r0 + i) * nc + c0 + j] = x[i, j]
        r0 += x.rows
        c0 += x.cols
    return RMatrix._raw(nr, nc, tuple(out))


def submatrix(m: RMatrix, rows: Iterable[int], cols: Iterable[int]) -> RMatrix:
    rows, cols = list(rows), list(cols)
    return RMatrix._raw(len(rows), len(cols), tuple(m[i, j] for i in rows for j in cols))


def eval_pencil(triple: Sequence[RMatrix], point: Sequence) -> RMatrix:
    """``x M1 + y M2 + z M3`` for a triple of equal-shape matrices."""
    if len(triple) != len(point):
        raise DimensionError("pencil and point lengths differ")
    if not triple:
        raise DimensionError("empty pencil")
    shape = triple[0].shape
    if any(m.shape != shape for m in triple):
        raise DimensionError("pencil matrices differ in shape")
    pt = [to_rational(p) for p in point]
    e = [Fraction(0)] * (shape[0] * shape[1])
    for c, m in zip(pt, triple):
        if c:
            e = [a + c * b for a, b in zip(e, m.entries)]
    return RMatrix._raw(shape[0], shape[1], tuple(e))


def image_basis(m: RMatrix) -> RMatrix:
    """Columns forming a basis of the column space of ``m`` (RREF of ``m^T``)."""
    if m.rows == 0 or m.cols == 0:
        return RMatrix.zeros(m.rows, 0)
    r, piv = rref(m.T)
    return submatrix(r, range(len(piv)), range(m.rows)).T
