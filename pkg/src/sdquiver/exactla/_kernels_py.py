"""Pure-Python fraction-free elimination over the integers.

Every function takes a list of equal-length lists of Python ints and never
mutates it.  All divisions are exact (Sylvester's identity), so the only
arithmetic is on arbitrary-precision integers.
"""

from __future__ import annotations


def _bits(v: int) -> int:
    return (v if v >= 0 else -v).bit_length()


def det_int(a: list[list[int]]) -> int:
    """Bareiss determinant with full pivoting on smallest bit length."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n):
        bi = bj = -1
        best = 0
        for i in range(k, n):
            row = m[i]
            for j in range(k, n):
                v = row[j]
                if v:
                    b = _bits(v)
                    if bi < 0 or b < best:
                        bi, bj, best = i, j, b
                        if b == 1:
                            break
            if best == 1:
                break
        if bi < 0:
            return 0
        if bi != k:
            m[k], m[bi] = m[bi], m[k]
            sign = -sign
        if bj != k:
            for row in m:
                row[k], row[bj] = row[bj], row[k]
            sign = -sign
        pr = m[k]
        p = pr[k]
        for i in range(k + 1, n):
            row = m[i]
            f = row[k]
            if f:
                for j in range(k + 1, n):
                    row[j] = (p * row[j] - f * pr[j]) // prev
            else:
                for j in range(k + 1, n):
                    row[j] = (p * row[j]) // prev
        prev = p
    return sign * m[n - 1][n - 1]


def rank_int(a: list[list[int]]) -> int:
    """Rank by fraction-free elimination with full pivoting."""
    nr = len(a)
    if nr == 0:
        return 0
    nc = len(a[0])
    m = [list(row) for row in a]
    prev = 1
    k = 0
    while k < nr and k < nc:
        bi = bj = -1
        best = 0
        for i in range(k, nr):
            row = m[i]
            for j in range(k, nc):
                v = row[j]
                if v:
                    b = _bits(v)
                    if bi < 0 or b < best:
                        bi, bj, best = i, j, b
        if bi < 0:
            break
        if bi != k:
            m[k], m[bi] = m[bi], m[k]
        if bj != k:
            for row in m:
                row[k], row[bj] = row[bj], row[k]
        pr = m[k]
        p = pr[k]
        for i in range(k + 1, nr):
            row = m[i]
            f = row[k]
            for j in range(k + 1, nc):
                row[j] = (p * row[j] - f * pr[j]) // prev
            row[k] = 0
        prev = p
        k += 1
    return k


def rref_int(a: list[list[int]]) -> tuple[list[list[int]], list[int], int]:
    """Fraction-free Gauss-Jordan reduction.

    Returns ``(m, pivots, den)`` such that ``m[i][j] / den`` is the reduced
    row echelon form of ``a``.  Rows past ``len(pivots)`` are zero and every
    pivot entry equals ``den``.  Row pivots are chosen by smallest bit length
    inside the pivot column.
    """
    nr = len(a)
    nc = len(a[0]) if nr else 0
    m = [list(row) for row in a]
    prev = 1
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        bi = -1
        best = 0
        for i in range(r, nr):
            v = m[i][c]
            if v:
                b = _bits(v)
                if bi < 0 or b < best:
                    bi, best = i, b
        if bi < 0:
            continue
        if bi != r:
            m[r], m[bi] = m[bi], m[r]
        pr = m[r]
        p = pr[c]
        for i in range(nr):
            if i == r:
                continue
            row = m[i]
            f = row[c]
            if f:
                for j in range(nc):
                    row[j] = (p * row[j] - f * pr[j]) // prev
            elif p != prev:
                for j in range(nc):
                    row[j] = (p * row[j]) // prev
        prev = p
        pivots.append(c)
        r += 1
    if prev < 0:
        m = [[-v for v in row] for row in m]
        prev = -prev
    return m, pivots, prev

