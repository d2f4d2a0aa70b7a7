# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fraction-free elimination.

Entries produced by fraction-free elimination are minors of the input, so
they are bounded by the Hadamard bound ``B = prod max(1, |row|)``.  When
``B**2 < 2**124`` every minor fits in an int64 and every cross product fits
in a signed 128-bit integer; the work is then done on machine words.
Otherwise the arbitrary-precision implementation is used.
"""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t

from sdquiver.exactla import _kernels_py

cdef extern from *:
    ctypedef long long i128 "__int128"

cdef object _LIMIT = 1 << 124


cdef bint _fits(list a):
    cdef object bound = 1
    cdef object s
    for row in a:
        s = 0
        for v in row:
            s += v * v
        if s > 1:
            bound *= s
            if bound >= _LIMIT:
                return False
    return True


cdef int64_t* _load(list a, Py_ssize_t nr, Py_ssize_t nc) except NULL:
    cdef int64_t* m = <int64_t*> malloc(max(nr * nc, 1) * sizeof(int64_t))
    if m == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j
    for i in range(nr):
        row = a[i]
        for j in range(nc):
            m[i * nc + j] = row[j]
    return m


cdef inline int _bits(int64_t v) nogil:
    cdef int b = 0
    if v < 0:
        v = -v
    while v:
        v >>= 1
        b += 1
    return b


cdef inline void _swap_rows(int64_t* m, Py_ssize_t nc, Py_ssize_t r1, Py_ssize_t r2) nogil:
    cdef Py_ssize_t j
    cdef int64_t t
    for j in range(nc):
        t = m[r1 * nc + j]
        m[r1 * nc + j] = m[r2 * nc + j]
        m[r2 * nc + j] = t


cdef inline void _swap_cols(int64_t* m, Py_ssize_t nr, Py_ssize_t nc, Py_ssize_t c1, Py_ssize_t c2) nogil:
    cdef Py_ssize_t i
    cdef int64_t t
    for i in range(nr):
        t = m[i * nc + c1]
        m[i * nc + c1] = m[i * nc + c2]
        m[i * nc + c2] = t


cdef int64_t _det64(int64_t* m, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j, k, bi, bj
    cdef int best, b
    cdef int sign = 1
    cdef int64_t prev = 1, p, f, v
    for k in range(n):
        bi = -1
        bj = -1
        best = 0
        for i in range(k, n):
            for j in range(k, n):
                v = m[i * n + j]
                if v:
                    b = _bits(v)
                    if bi < 0 or b < best:
                        bi = i
                        bj = j
                        best = b
        if bi < 0:
            return 0
        if bi != k:
            _swap_rows(m, n, k, bi)
            sign = -sign
        if bj != k:
            _swap_cols(m, n, n, k, bj)
            sign = -sign
        p = m[k * n + k]
        for i in range(k + 1, n):
            f = m[i * n + k]
            for j in range(k + 1, n):
                m[i * n + j] = <int64_t> ((<i128> p * m[i * n + j] - <i128> f * m[k * n + j]) / prev)
        prev = p
    return sign * m[n * n - 1]


cdef Py_ssize_t _rank64(int64_t* m, Py_ssize_t nr, Py_ssize_t nc) nogil:
    cdef Py_ssize_t i, j, k = 0, bi, bj
    cdef int best, b
    cdef int64_t prev = 1, p, f, v
    while k < nr and k < nc:
        bi = -1
        bj = -1
        best = 0
        for i in range(k, nr):
            for j in range(k, nc):
                v = m[i * nc + j]
                if v:
                    b = _bits(v)
                    if bi < 0 or b < best:
                        bi = i
                        bj = j
                        best = b
        if bi < 0:
            break
        if bi != k:
            _swap_rows(m, nc, k, bi)
        if bj != k:
            _swap_cols(m, nr, nc, k, bj)
        p = m[k * nc + k]
        for i in range(k + 1, nr):
            f = m[i * nc + k]
            for j in range(k + 1, nc):
                m[i * nc + j] = <int64_t> ((<i128> p * m[i * nc + j] - <i128> f * m[k * nc + j]) / prev)
            m[i * nc + k] = 0
        prev = p
        k += 1
    return k


cdef int64_t _rref64(int64_t* m, Py_ssize_t nr, Py_ssize_t nc, Py_ssize_t* piv, Py_ssize_t* npiv) nogil:
    cdef Py_ssize_t i, j, c, r = 0, bi
    cdef int best, b
    cdef int64_t prev = 1, p, f, v
    for c in range(nc):
        if r == nr:
            break
        bi = -1
        best = 0
        for i in range(r, nr):
            v = m[i * nc + c]
            if v:
                b = _bits(v)
                if bi < 0 or b < best:
                    bi = i
                    best = b
        if bi < 0:
            continue
        if bi != r:
            _swap_rows(m, nc, r, bi)
        p = m[r * nc + c]
        for i in range(nr):
            if i == r:
                continue
            f = m[i * nc + c]
            if f:
                for j in range(nc):
                    m[i * nc + j] = <int64_t> ((<i128> p * m[i * nc + j] - <i128> f * m[r * nc + j]) / prev)
            elif p != prev:
                for j in range(nc):
                    m[i * nc + j] = <int64_t> ((<i128> p * m[i * nc + j]) / prev)
        prev = p
        piv[r] = c
        r += 1
    npiv[0] = r
    return prev


def det_int(list a):
    """Determinant of a square integer matrix."""
    cdef Py_ssize_t n = len(a)
    if n == 0:
        return 1
    if not _fits(a):
        return _kernels_py.det_int(a)
    cdef int64_t* m = _load(a, n, n)
    cdef int64_t d
    try:
        with nogil:
            d = _det64(m, n)
    finally:
        free(m)
    return d


def rank_int(list a):
    """Rank of an integer matrix."""
    cdef Py_ssize_t nr = len(a)
    if nr == 0:
        return 0
    cdef Py_ssize_t nc = len(a[0])
    if nc == 0:
        return 0
    if not _fits(a):
        return _kernels_py.rank_int(a)
    cdef int64_t* m = _load(a, nr, nc)
    cdef Py_ssize_t k
    try:
        with nogil:
            k = _rank64(m, nr, nc)
    finally:
        free(m)
    return k


def rref_int(list a):
    """Fraction-free reduced row echelon form, see the pure-Python twin."""
    cdef Py_ssize_t nr = len(a)
    cdef Py_ssize_t nc = len(a[0]) if nr else 0
    if nr == 0 or nc == 0:
        return [list(row) for row in a], [], 1
    if not _fits(a):
        return _kernels_py.rref_int(a)
    cdef int64_t* m = _load(a, nr, nc)
    cdef Py_ssize_t* piv = <Py_ssize_t*> malloc(nc * sizeof(Py_ssize_t))
    cdef Py_ssize_t npiv = 0, i, j
    cdef int64_t den
    cdef int s
    try:
        with nogil:
            den = _rref64(m, nr, nc, piv, &npiv)
        s = -1 if den < 0 else 1
        out = [[s * m[i * nc + j] for j in range(nc)] for i in range(nr)]
        pivots = [piv[i] for i in range(npiv)]
    finally:
        free(m)
        free(piv)
    return out, pivots, s * den
