"""Representations of the Kronecker quiver with ``q`` arrows ``x1 -> x2``.

A representation of dimension ``(a1, a2)`` is stored as ``q`` matrices of
shape ``a2 x a1``, so arrow ``i`` acts on column vectors.  Written out in the
row-vector convention these are the transposes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

from sdquiver.errors import ContractError, DimensionError, InvariantViolation, NotReflectableError, ParseError
from sdquiver.exactla import (
    RMatrix,
    coker_projection,
    det,
    hstack,
    image_basis,
    inverse,
    kernel_basis,
    kron,
    rank,
    right_inverse,
    star,
    submatrix,
    vstack,
)


@dataclass(frozen=True, order=True)
class DimVec:
    a1: int
    a2: int

    def __post_init__(self):
        if self.a1 < 0 or self.a2 < 0:
            raise DimensionError(f"negative dimension vector ({self.a1}, {self.a2})")

    def __add__(self, other: "DimVec") -> "DimVec":
        return DimVec(self.a1 + other.a1, self.a2 + other.a2)

    def __iter__(self):
        yield self.a1
        yield self.a2

    @property
    def is_zero(self) -> bool:
        return self.a1 == 0 and self.a2 == 0


@dataclass(frozen=True)
class Weight:
    w1: int
    w2: int

    def __call__(self, d: DimVec | Sequence[int]) -> int:
        a1, a2 = d
        return self.w1 * a1 + self.w2 * a2

    @property
    def is_zero(self) -> bool:
        return self.w1 == 0 and self.w2 == 0

    def primitive(self) -> "Weight":
        g = math.gcd(self.w1, self.w2)
        return self if g in (0, 1) else Weight(self.w1 // g, self.w2 // g)


def canonical_weight(alpha: DimVec) -> Weight:
    """The primitive weight vanishing on ``alpha`` that is positive on ``(1, 0)``."""
    return Weight(alpha.a2, -alpha.a1).primitive()


def _dv(d) -> DimVec:
    return d if isinstance(d, DimVec) else DimVec(*d)


@dataclass(frozen=True)
class Rep:
    q: int
    dim: DimVec
    mats: tuple[RMatrix, ...]

    def __post_init__(self):
        if self.q < 1:
            raise ContractError("arrow count must be positive")
        object.__setattr__(self, "dim", _dv(self.dim))
        object.__setattr__(self, "mats", tuple(self.mats))
        if len(self.mats) != self.q:
            raise DimensionError(f"expected {self.q} matrices, got {len(self.mats)}")
        shape = (self.dim.a2, self.dim.a1)
        for m in self.mats:
            if m.shape != shape:
                raise DimensionError(f"arrow matrix of shape {m.shape}, expected {shape}")

    @classmethod
    def from_lists(cls, mats: Sequence, dim=None) -> "Rep":
        """Build from nested lists; ``dim`` is needed when a dimension is zero."""
        if dim is not None:
            dim = _dv(dim)
            ms = [RMatrix.from_rows(m, dim.a1) for m in mats]
        else:
            ms = [RMatrix.from_rows(m) for m in mats]
            dim = DimVec(ms[0].cols, ms[0].rows)
        return cls(len(ms), dim, tuple(ms))

    @classmethod
    def scalars(cls, values: Sequence) -> "Rep":
        """The ``(1, 1)`` representation with the given arrow scalars."""
        return cls(len(values), DimVec(1, 1), tuple(RMatrix.scalar(v) for v in values))

    @classmethod
    def zero(cls, q: int, dim) -> "Rep":
        dim = _dv(dim)
        return cls(q, dim, tuple(RMatrix.zeros(dim.a2, dim.a1) for _ in range(q)))

    def stacked(self) -> RMatrix:
        """The ``(q*a2) x a1`` matrix of all arrows stacked vertically."""
        return vstack(self.mats, cols=self.dim.a1)

    def joined(self) -> RMatrix:
        """The ``a2 x (q*a1)`` matrix of all arrows side by side."""
        return hstack(self.mats, rows=self.dim.a2)

    def to_json(self) -> dict:
        return {"q": self.q, "dim": [self.dim.a1, self.dim.a2], "mats": [m.to_json() for m in self.mats]}

    @classmethod
    def from_json(cls, data) -> "Rep":
        try:
            q = data["q"]
            a1, a2 = data["dim"]
            mats = data["mats"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed representation: {exc}") from None
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (q, a1, a2)):
            raise ParseError("q and dim must be integers")
        if not isinstance(mats, list):
            raise ParseError("mats must be a list")
        if q < 1 or a1 < 0 or a2 < 0 or len(mats) != q:
            raise ParseError("inconsistent q, dim and mats")
        return cls(q, DimVec(a1, a2), tuple(RMatrix.from_json(m, a2, a1) for m in mats))


def euler_form(q: int, alpha, beta) -> int:
    a1, a2 = alpha
    b1, b2 = beta
    return a1 * b1 + a2 * b2 - q * a1 * b2


def _same_q(v: Rep, w: Rep) -> None:
    if v.q != w.q:
        raise ContractError(f"arrow counts differ ({v.q} vs {w.q})")


def d_map(v: Rep, w: Rep) -> RMatrix:
    """Matrix of ``(f1, f2) -> (f2 A_i - B_i f1)_i``.

    Coordinates are row-major vectorizations: ``f1`` (``b1 x a1``) first, then
    ``f2`` (``b2 x a2``); output block ``i`` is the ``b2 x a1`` matrix for
    arrow ``i``.
    """
    _same_q(v, w)
    a1, a2 = v.dim
    b1, b2 = w.dim
    i_a1 = RMatrix.identity(a1)
    i_b2 = RMatrix.identity(b2)
    rows = []
    for a, b in zip(v.mats, w.mats):
        rows.append(hstack([-kron(b, i_a1), kron(i_b2, a.T)], rows=b2 * a1))
    return vstack(rows, cols=b1 * a1 + b2 * a2)


def hom_ext(v: Rep, w: Rep) -> tuple[int, int]:
    d = d_map(v, w)
    r = rank(d)
    return d.cols - r, d.rows - r


def c_pair(v: Rep, w: Rep) -> Fraction:
    """The determinant of ``d_map(v, w)``; requires orthogonal dimension vectors."""
    _same_q(v, w)
    e = euler_form(v.q, v.dim, w.dim)
    if e != 0:
        raise ContractError(f"<{tuple(v.dim)}, {tuple(w.dim)}> = {e} != 0")
    return det(d_map(v, w))


def act(v: Rep, g1: RMatrix, g2: RMatrix) -> Rep:
    """The base-change action ``A_i -> g2 A_i g1^{-1}``."""
    g1i = inverse(g1)
    return Rep(v.q, v.dim, tuple(g2 @ a @ g1i for a in v.mats))


def direct_sum(v: Rep, w: Rep) -> Rep:
    _same_q(v, w)
    dim = v.dim + w.dim
    mats = []
    for a, b in zip(v.mats, w.mats):
        top = hstack([a, RMatrix.zeros(v.dim.a2, w.dim.a1)], rows=v.dim.a2)
        bot = hstack([RMatrix.zeros(w.dim.a2, v.dim.a1), b], rows=w.dim.a2)
        mats.append(vstack([top, bot], cols=dim.a1))
    return Rep(v.q, dim, tuple(mats))


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int) -> RMatrix:
    return RMatrix(rows, cols, [rng.randint(-bound, bound) for _ in range(rows * cols)])


def random_rep(q: int, alpha, seed, bound: int = 3) -> Rep:
    """Integer entries uniform in ``[-bound, bound]``, determined by ``seed``."""
    if bound < 1:
        raise ContractError("bound must be at least 1")
    alpha = _dv(alpha)
    rng = random.Random(seed)
    return Rep(q, alpha, tuple(random_matrix(rng, alpha.a2, alpha.a1, bound) for _ in range(q)))


def random_invertible(rng: random.Random, n: int, bound: int = 3) -> RMatrix:
    while True:
        g = random_matrix(rng, n, n, bound)
        if det(g) != 0:
            return g


# reflection


def reflect(v: Rep) -> Rep:
    """Cokernel reflection ``(m1, m2) -> (m2, q*m2 - m1)``.

    The arrows of the result are the column blocks of the reduced echelon
    projection onto the cokernel of the stacked arrow matrix.
    """
    m1, m2 = v.dim
    s = v.stacked()
    if rank(s) != m1:
        raise NotReflectableError("stacked arrow matrix is not injective")
    p = coker_projection(s)
    n = v.q * m2 - m1
    mats = tuple(submatrix(p, range(n), range(i * m2, (i + 1) * m2)) for i in range(v.q))
    return Rep(v.q, DimVec(m2, n), mats)


def reflect_inverse(vbar: Rep) -> Rep:
    """Kernel reflection ``(m2, m') -> (q*m2 - m', m2)``, inverse to :func:`reflect`.

    The kernel basis ``K`` of the joined arrow matrix ``T`` is scaled so that
    ``det [X | K] = 1`` for any right inverse ``X`` of ``T``; this fixes the
    representative up to ``SL`` at the new source vertex.
    """
    m2, mp = vbar.dim
    q = vbar.q
    t = vbar.joined()
    if rank(t) != mp:
        raise NotReflectableError("joined arrow matrix is not surjective")
    k = kernel_basis(t) if mp else RMatrix.identity(q * m2)
    n = k.cols
    if n and mp:
        x = right_inverse(t)
        d = det(hstack([x, k]))
        if d != 1:
            cols = [list(r) for r in k.to_rows()]
            for r in cols:
                r[-1] /= d
            k = RMatrix.from_rows(cols, n)
    mats = tuple(submatrix(k, range(i * m2, (i + 1) * m2), range(n)) for i in range(q))
    return Rep(q, DimVec(n, m2), mats)


@dataclass(frozen=True)
class Residual:
    """A residual block together with the invertibility of the transition matrix."""

    block: RMatrix
    invertible: bool

    @property
    def ok(self) -> bool:
        return self.invertible and self.block.is_zero()


def compare_residual(v: Rep, vbar: Rep) -> Residual:
    """Residual of ``S^T P = [I | 0]`` with ``P = [P1 | T^T]``, ``S^T P1 = I``.

    ``S`` stacks the arrows of ``v`` and ``T`` joins those of ``vbar``; the
    last columns of ``P`` carry the arrows of ``vbar``.
    """
    _same_q(v, vbar)
    m1, m2 = v.dim
    if vbar.dim.a1 != m2 or vbar.dim.a2 != v.q * m2 - m1:
        raise DimensionError("dimension vectors are not related by reflection")
    s = v.stacked()
    t = vbar.joined()
    st = s.T
    if rank(st) != m1:
        return Residual(RMatrix.zeros(m1, v.q * m2), False)
    p1 = right_inverse(st) if m1 else RMatrix.zeros(v.q * m2, 0)
    p = hstack([p1, t.T], rows=v.q * m2)
    target = hstack([RMatrix.identity(m1), RMatrix.zeros(m1, p.cols - m1)], rows=m1)
    return Residual(st @ p - target, rank(p) == v.q * m2)


def compare_inverse_residual(vbar: Rep, v: Rep) -> Residual:
    """Residual of ``Pt T^T = [I ; 0]`` with ``Pt = [X^T ; S^T]``, ``T X = I``."""
    _same_q(v, vbar)
    m2, mp = vbar.dim
    if v.dim.a2 != m2 or v.dim.a1 != v.q * m2 - mp:
        raise DimensionError("dimension vectors are not related by reflection")
    t = vbar.joined()
    s = v.stacked()
    n = v.q * m2
    if rank(t) != mp:
        return Residual(RMatrix.zeros(n, mp), False)
    x = right_inverse(t) if mp else RMatrix.zeros(n, 0)
    pt = vstack([x.T, s.T], cols=n)
    target = vstack([RMatrix.identity(mp), RMatrix.zeros(pt.rows - mp, mp)], cols=mp)
    return Residual(pt @ t.T - target, rank(pt) == n)


# pairing with the (d, d) pencils


def _check_bundle_pencil(v: Rep, w: Rep) -> tuple[int, int]:
    if v.q != 3 or w.q != 3:
        raise ContractError("three arrows required")
    r, r2 = v.dim
    d, d2 = w.dim
    if r2 != 2 * r or d2 != d:
        raise DimensionError(f"expected dims (r, 2r) and (d, d), got {tuple(v.dim)} and {tuple(w.dim)}")
    return r, d


def C_matrix(v: Rep, w: Rep) -> RMatrix:
    """``sum_i star(B_i, A_i)`` where ``A = reflect_inverse(v)`` and ``B`` are the arrows of ``w``."""
    r, d = _check_bundle_pencil(v, w)
    a = reflect_inverse(v)
    out = RMatrix.zeros(d * r, d * r)
    for ai, bi in zip(a.mats, w.mats):
        out = out + star(bi, ai)
    return out


def big_matrix(v: Rep, w: Rep) -> RMatrix:
    """The ``3rd x 3rd`` block matrix whose determinant is the pairing (row convention)."""
    r, d = _check_bundle_pencil(v, w)
    i_r = RMatrix.identity(r)
    i_d = RMatrix.identity(d)
    blocks = [hstack([kron(i_r, b.T), -kron(a.T, i_d)], rows=r * d) for a, b in zip(v.mats, w.mats)]
    return vstack(blocks, cols=3 * r * d)


def c_pair_kron(v: Rep, w: Rep) -> tuple[Fraction, Fraction]:
    """``(big, compact)`` determinants; their absolute values always agree."""
    big = det(big_matrix(v, w))
    compact = det(C_matrix(v, w))
    if abs(big) != abs(compact):
        raise InvariantViolation(f"|{big}| != |{compact}|")
    return big, compact


# probes and fingerprints


def probe_dims(q: int, alpha: DimVec, sigma: Weight, t: int) -> list[tuple[str, DimVec]]:
    """Dimension vectors of size ``t`` whose pairing with ``alpha`` has weight ``t*sigma``.

    ``"left"`` probes ``W`` are paired as ``c(V, W)`` (weight ``-<-, dim W>``),
    ``"right"`` probes as ``c(W, V)`` (weight ``<dim W, ->``).
    """
    s = sigma.primitive()
    out = []
    b2 = -t * s.w2
    b1 = q * b2 - t * s.w1
    if b1 >= 0 and b2 >= 0 and (b1 or b2):
        out.append(("left", DimVec(b1, b2)))
    c1 = t * s.w1
    c2 = t * (s.w2 + q * s.w1)
    if c1 >= 0 and c2 >= 0 and (c1 or c2):
        out.append(("right", DimVec(c1, c2)))
    return out


def _pair(side: str, v: Rep, w: Rep) -> Fraction:
    return c_pair(v, w) if side == "left" else c_pair(w, v)


def probes(q: int, alpha, count: int = 5, seed: int = 0, size: int = 1, bound: int = 3) -> list[tuple[str, Rep]]:
    """``count`` seeded probe representations orthogonal to ``alpha``."""
    alpha = _dv(alpha)
    dims = probe_dims(q, alpha, canonical_weight(alpha), size)
    if not dims:
        raise ContractError(f"no probe dimension for {tuple(alpha)}")
    side, beta = dims[0]
    rng = random.Random(f"probe:{q}:{alpha.a1}:{alpha.a2}:{size}:{seed}")
    return [(side, random_rep(q, beta, rng.getrandbits(64), bound)) for _ in range(count)]


def fingerprints(v: Rep, count: int = 5, seed: int = 0, size: int = 1) -> tuple[Fraction, ...]:
    """Pairings of ``v`` against fixed seeded probes; equivalent reps give proportional tuples."""
    return tuple(_pair(side, v, w) for side, w in probes(v.q, v.dim, count, seed, size))


def proportional(f: Sequence[Fraction], g: Sequence[Fraction]) -> bool:
    """True when ``g = lam * f`` for one nonzero scalar ``lam``."""
    if len(f) != len(g):
        return False
    lam = None
    for a, b in zip(f, g):
        if (a == 0) != (b == 0):
            return False
        if a:
            r = Fraction(b) / Fraction(a)
            if lam is None:
                lam = r
            elif r != lam:
                return False
    return True


# stability


@dataclass(frozen=True)
class ProbeWitness:
    side: str
    probe: Rep
    value: Fraction


@dataclass(frozen=True)
class Destabilizer:
    u1: RMatrix
    u2: RMatrix
    dim: DimVec
    weight: int


@dataclass(frozen=True)
class StabilityVerdict:
    status: str
    witness: ProbeWitness | Destabilizer | None = None
    notes: dict = field(default_factory=dict)

    SEMISTABLE = "Semistable"
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    UNKNOWN = "Unknown"


def _is_subrep(v: Rep, u1: RMatrix, u2: RMatrix) -> bool:
    r2 = rank(u2) if u2.cols else 0
    for a in v.mats:
        img = a @ u1
        if img.cols and rank(hstack([u2, img], rows=v.dim.a2)) != r2:
            return False
    return True


def _candidates(v: Rep, effort: int, rng: random.Random) -> Iterator[RMatrix]:
    a1 = v.dim.a1
    yield RMatrix.zeros(a1, 0)
    if a1 == 0:
        return
    # the common kernel first: it is the smallest destabilizer when it exists
    yield kernel_basis(v.stacked())
    yield RMatrix.identity(a1)
    for a in v.mats:
        yield kernel_basis(a)
    for _ in range(4 * effort):
        comb = RMatrix.zeros(v.dim.a2, a1)
        for a in v.mats:
            comb = comb + a.scale(rng.randint(-5, 5))
        yield kernel_basis(comb)
    if a1 <= 12:
        eye = RMatrix.identity(a1)
        budget = 4096 * effort
        for k in range(1, a1):
            for subset in combinations(range(a1), k):
                if budget <= 0:
                    break
                budget -= 1
                yield submatrix(eye, range(a1), subset)
    if a1 <= 4:
        for _ in range(8 * effort):
            g = random_invertible(rng, a1)
            for k in range(1, a1):
                yield submatrix(g, range(a1), range(k))


def destabilize_search(v: Rep, sigma: Weight, effort: int = 1, seed: int = 0) -> Destabilizer | None:
    """Look for a subrepresentation of positive weight; verified exactly before returning."""
    a2 = v.dim.a2
    rng = random.Random(f"destab:{seed}")
    full2 = RMatrix.identity(a2)
    seen = set()
    for u1 in _candidates(v, effort, rng):
        if u1 in seen:
            continue
        seen.add(u1)
        k = rank(u1) if u1.cols else 0
        if sigma.w2 > 0:
            u2 = full2
        else:
            u2 = image_basis(hstack([a @ u1 for a in v.mats], rows=a2)) if u1.cols else RMatrix.zeros(a2, 0)
        dim = DimVec(k, u2.cols)
        wt = sigma(dim)
        if wt > 0 and _is_subrep(v, u1, u2):
            return Destabilizer(u1, u2, dim, wt)
    return None


def _has_zero_weight_proper(alpha: DimVec, sigma: Weight) -> bool:
    for g1 in range(alpha.a1 + 1):
        for g2 in range(alpha.a2 + 1):
            if (g1, g2) in ((0, 0), (alpha.a1, alpha.a2)):
                continue
            if sigma((g1, g2)) == 0:
                return True
    return False


def semistable_certificate(
    v: Rep,
    sigma: Weight,
    trials: int = 8,
    probe_sizes: int = 3,
    seed: int = 0,
    bound: int = 3,
    effort: int = 1,
) -> StabilityVerdict:
    """Certificate-based stability verdict; ``Unknown`` when no certificate is found."""
    if sigma(v.dim) != 0:
        raise ContractError(f"sigma{tuple(v.dim)} = {sigma(v.dim)} != 0")
    if v.dim.is_zero or sigma.is_zero:
        return StabilityVerdict(StabilityVerdict.SEMISTABLE, None, {"vacuous": True})
    bad = destabilize_search(v, sigma, effort, seed)
    if bad is not None:
        return StabilityVerdict(StabilityVerdict.UNSTABLE, bad)
    rng = random.Random(f"cert:{seed}")
    for t in range(1, probe_sizes + 1):
        for side, beta in probe_dims(v.q, v.dim, sigma, t):
            for _ in range(trials):
                w = random_rep(v.q, beta, rng.getrandbits(64), bound)
                val = _pair(side, v, w)
                if val != 0:
                    status = StabilityVerdict.SEMISTABLE
                    if not _has_zero_weight_proper(v.dim, sigma):
                        status = StabilityVerdict.STABLE
                    return StabilityVerdict(status, ProbeWitness(side, w, val), {"probe_size": t})
    return StabilityVerdict(StabilityVerdict.UNKNOWN)
