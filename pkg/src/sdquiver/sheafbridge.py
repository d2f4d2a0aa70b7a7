"""Quiver data read as sheaves on the projective plane.

A ``(d, d)`` representation ``W`` with arrows ``B_x, B_y, B_z`` presents the
one-dimensional sheaf ``F = coker(O(-2)^d -> O(-1)^d)`` through the pencil
``x B_x + y B_y + z B_z``.  An ``(n, 2n)`` representation presents the rank
``n`` sheaf ``G = coker(O(-2)^n -> O(-1)^{2n})`` the same way.  All
cohomology is computed from these resolutions with monomial bases.

Conventions: ``H^0(O(k))`` has the degree ``k`` monomials in graded
lexicographic order (``x > y > z``) as basis.  ``H^2(O(-k))`` is identified
with the dual of ``H^0(O(k-3))`` and carries the dual basis, so a linear
form acts on ``H^2`` by the transpose of its ``H^0`` action.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from sdquiver.errors import ContractError, DimensionError, InvariantViolation, NotInChartError, ParseError
from sdquiver.exactla import (
    RMatrix,
    det,
    eval_pencil,
    format_rational,
    inverse,
    kernel_basis,
    kron,
    rank,
    to_rational,
)
from sdquiver.quiver import C_matrix, DimVec, Rep, reflect

MIN_TWIST = -4
MAX_TWIST = 8


def h0_line(k: int) -> int:
    """``h^0(O(k))``."""
    return (k + 1) * (k + 2) // 2 if k >= 0 else 0


def h2_line(k: int) -> int:
    """``h^2(O(k)) = h^0(O(-k-3))``."""
    return h0_line(-k - 3)


def chi_line(k: int) -> int:
    return (k + 1) * (k + 2) // 2


@lru_cache(maxsize=None)
def monomials(degree: int) -> tuple[tuple[int, int, int], ...]:
    """Exponent triples of degree ``degree`` in graded lexicographic order."""
    if degree < 0:
        return ()
    return tuple((i, j, degree - i - j) for i in range(degree, -1, -1) for j in range(degree - i, -1, -1))


@lru_cache(maxsize=None)
def _index(degree: int) -> dict:
    return {m: t for t, m in enumerate(monomials(degree))}


@dataclass(frozen=True)
class HomogPoly:
    degree: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != h0_line(self.degree):
            raise DimensionError("coefficient count does not match degree")

    def __call__(self, point: Sequence) -> Fraction:
        x, y, z = (Fraction(p) for p in point)
        return sum((c * x ** i * y ** j * z ** k for c, (i, j, k) in zip(self.coeffs, monomials(self.degree))),
                   Fraction(0))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def terms(self) -> list[tuple[tuple[int, int, int], Fraction]]:
        return [(m, c) for m, c in zip(monomials(self.degree), self.coeffs) if c]

    def __mul__(self, other: "HomogPoly") -> "HomogPoly":
        out = [Fraction(0)] * h0_line(self.degree + other.degree)
        idx = _index(self.degree + other.degree)
        for (a, ca) in self.terms():
            for (b, cb) in other.terms():
                out[idx[(a[0] + b[0], a[1] + b[1], a[2] + b[2])]] += ca * cb
        return HomogPoly(self.degree + other.degree, tuple(out))

    def to_json(self) -> dict:
        return {"degree": self.degree, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> "HomogPoly":
        try:
            deg = data["degree"]
            coeffs = tuple(to_rational(c) for c in data["coeffs"])
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed polynomial: {exc}") from None
        if not isinstance(deg, int) or deg < 0 or len(coeffs) != h0_line(deg):
            raise ParseError("polynomial degree and coefficient count disagree")
        return cls(deg, coeffs)


@dataclass(frozen=True)
class CohomProfile:
    h0: int
    h1: int
    h2: int

    @property
    def chi(self) -> int:
        return self.h0 - self.h1 + self.h2


@dataclass(frozen=True)
class Pencil:
    """A ``(d, d)`` representation of the three-arrow quiver."""

    rep: Rep

    def __post_init__(self):
        r = self.rep
        if r.q != 3 or r.dim.a1 != r.dim.a2 or r.dim.a1 < 1:
            raise DimensionError(f"pencil needs q=3 and dim (d, d) with d >= 1, got q={r.q}, dim={tuple(r.dim)}")

    @property
    def d(self) -> int:
        return self.rep.dim.a1

    @property
    def triple(self) -> tuple[RMatrix, ...]:
        return self.rep.mats

    @classmethod
    def of(cls, w) -> "Pencil":
        return w if isinstance(w, Pencil) else cls(w)


@dataclass(frozen=True)
class BundleRep:
    """An ``(n, 2n)`` representation whose pencil is injective on global sections."""

    rep: Rep

    def __post_init__(self):
        r = self.rep
        if r.q != 3 or r.dim.a2 != 2 * r.dim.a1 or r.dim.a1 < 1:
            raise DimensionError(f"bundle rep needs q=3 and dim (n, 2n) with n >= 1, got dim={tuple(r.dim)}")
        if rank(r.stacked()) != r.dim.a1:
            raise ContractError("stacked arrow matrix must have rank n")

    @property
    def n(self) -> int:
        return self.rep.dim.a1

    @property
    def triple(self) -> tuple[RMatrix, ...]:
        return self.rep.mats

    @classmethod
    def of(cls, v) -> "BundleRep":
        return v if isinstance(v, BundleRep) else cls(v)


def interpolation_grid(d: int) -> list[tuple[int, int, int]]:
    """Points ``(i, j, 1)`` with ``i + j <= d``; unisolvent for degree ``d`` forms."""
    return [(i, j, 1) for i in range(d + 1) for j in range(d + 1 - i)]


@lru_cache(maxsize=None)
def _interp_inverse(d: int) -> RMatrix:
    pts = interpolation_grid(d)
    vand = RMatrix.from_rows([[x ** i * y ** j * z ** k for (i, j, k) in monomials(d)] for (x, y, z) in pts])
    return inverse(vand)


def support_curve(w) -> HomogPoly:
    """``det(x B_x + y B_y + z B_z)`` recovered by exact interpolation."""
    p = Pencil.of(w)
    d = p.d
    vals = RMatrix.column([det(eval_pencil(p.triple, pt)) for pt in interpolation_grid(d)])
    coeffs = _interp_inverse(d) @ vals
    return HomogPoly(d, coeffs.entries)


def in_chart(w) -> bool:
    return not support_curve(w).is_zero()


def ddual(w) -> Pencil:
    p = Pencil.of(w)
    return Pencil(Rep(3, p.rep.dim, tuple(m.T for m in p.triple)))


def lambda3() -> Pencil:
    """The constant triple of the pencil ``[[y, -z, 0], [-x, 0, z], [0, x, -y]]``."""
    bx = RMatrix.from_rows([[0, 0, 0], [-1, 0, 0], [0, 1, 0]])
    by = RMatrix.from_rows([[1, 0, 0], [0, 0, 0], [0, 0, -1]])
    bz = RMatrix.from_rows([[0, -1, 0], [0, 0, 1], [0, 0, 0]])
    return Pencil(Rep(3, DimVec(3, 3), (bx, by, bz)))


def ideal_sheaf_rep(point: Sequence) -> BundleRep:
    """The ``(1, 2)`` representation presenting the ideal sheaf of ``point``."""
    return BundleRep(reflect(Rep.scalars(point)))


def line_pencil(coeffs: Sequence) -> Pencil:
    """The ``(1, 1)`` pencil of the line ``a x + b y + c z``."""
    return Pencil(Rep.scalars(coeffs))


def _mult_rows(ell: Sequence, k: int) -> list[list[int | Fraction]]:
    a, b, c = ell
    src = monomials(k)
    idx = _index(k + 1)
    out = [[0] * len(src) for _ in range(h0_line(k + 1))]
    for t, (i, j, l) in enumerate(src):
        if a:
            out[idx[(i + 1, j, l)]][t] += a
        if b:
            out[idx[(i, j + 1, l)]][t] += b
        if c:
            out[idx[(i, j, l + 1)]][t] += c
    return out


def mult_matrix(ell: Sequence, k: int) -> RMatrix:
    """Multiplication by ``a x + b y + c z`` from ``H^0(O(k))`` to ``H^0(O(k+1))``."""
    if k < 0:
        raise ContractError(f"H^0 multiplication needs k >= 0, got {k}")
    return RMatrix.from_rows(_mult_rows(ell, k), h0_line(k))


def h2_mult_matrix(ell: Sequence, k: int) -> RMatrix:
    """Multiplication by a linear form from ``H^2(O(-k))`` to ``H^2(O(-k+1))``, ``k >= 3``."""
    if k < 3:
        raise ContractError(f"H^2 multiplication needs k >= 3, got {k}")
    if k == 3:
        return RMatrix.zeros(0, 1)
    return mult_matrix(ell, k - 4).T


def _entry_forms(triple: Sequence[RMatrix]) -> list[list[tuple]]:
    mx, my, mz = triple
    return [[(mx[i, j], my[i, j], mz[i, j]) for j in range(mx.cols)] for i in range(mx.rows)]


def induced_h0(triple: Sequence[RMatrix], k: int) -> RMatrix:
    """``H^0(O(k))^s -> H^0(O(k+1))^p`` for a ``p x s`` matrix of linear forms."""
    forms = _entry_forms(triple)
    p, s = triple[0].shape
    n_src, n_dst = h0_line(k), h0_line(k + 1)
    rows = [[0] * (s * n_src) for _ in range(p * n_dst)]
    if n_src:
        for i in range(p):
            for j in range(s):
                blk = _mult_rows(forms[i][j], k)
                for u in range(n_dst):
                    rows[i * n_dst + u][j * n_src:(j + 1) * n_src] = blk[u]
    return RMatrix(p * n_dst, s * n_src, [x for r in rows for x in r])


def induced_h2(triple: Sequence[RMatrix], t: int) -> RMatrix:
    """``H^2(O(t))^s -> H^2(O(t+1))^p`` for a ``p x s`` matrix of linear forms."""
    forms = _entry_forms(triple)
    p, s = triple[0].shape
    n_src, n_dst = h2_line(t), h2_line(t + 1)
    rows = [[0] * (s * n_src) for _ in range(p * n_dst)]
    if n_src and n_dst:
        for i in range(p):
            for j in range(s):
                # transpose of multiplication H^0(O(-t-4)) -> H^0(O(-t-3))
                blk = _mult_rows(forms[i][j], -t - 4)
                for u in range(n_dst):
                    for v in range(n_src):
                        rows[i * n_dst + u][j * n_src + v] = blk[v][u]
    return RMatrix(p * n_dst, s * n_src, [x for r in rows for x in r])


def _transpose_triple(triple: Sequence[RMatrix]) -> tuple[RMatrix, ...]:
    return tuple(m.T for m in triple)


def hom_to_O(v) -> int:
    """``hom(G, O)``: kernel of ``Phi -> Phi . M`` on ``H^0(O(1))^{2n}``."""
    b = BundleRep.of(v)
    m = induced_h0(_transpose_triple(b.triple), 1)
    return 6 * b.n - rank(m)


def strata_index(v) -> int:
    """``3n - rank C(V, Lambda_3)``."""
    b = BundleRep.of(v)
    return 3 * b.n - rank(C_matrix(b.rep, lambda3().rep))


def coh_twist(v, k: int) -> CohomProfile:
    """Cohomology of ``G(k)`` from the twisted resolution."""
    if not MIN_TWIST <= k <= MAX_TWIST:
        raise ContractError(f"twist {k} outside [{MIN_TWIST}, {MAX_TWIST}]")
    b = BundleRep.of(v)
    n = b.n
    r0 = rank(induced_h0(b.triple, k - 2))
    r2 = rank(induced_h2(b.triple, k - 2))
    h0 = 2 * n * h0_line(k - 1) - r0
    h1 = n * h2_line(k - 2) - r2
    h2 = 2 * n * h2_line(k - 1) - r2
    prof = CohomProfile(h0, h1, h2)
    expected = 2 * n * chi_line(k - 1) - n * chi_line(k - 2)
    if prof.chi != expected or expected != n * k * (k + 3) // 2:
        raise InvariantViolation(f"chi mismatch for twist {k}: {prof} vs {expected}")
    return prof


def h0_tensor(v, w) -> tuple[int, int]:
    """``(h^0, h^1)`` of ``G (x) F`` through the ``H^1`` of twists of ``G``."""
    b = BundleRep.of(v)
    p = Pencil.of(w)
    if not in_chart(p):
        raise NotInChartError("pencil determinant vanishes identically")
    n, d = b.n, p.d
    phi = induced_h2(b.triple, -4)
    rphi = rank(phi)
    ker = kernel_basis(phi)
    big_k = kron(RMatrix.identity(d), ker)
    lifted = tuple(kron(m, RMatrix.identity(n)) for m in p.triple)
    t = induced_h2(lifted, -4)
    rt = rank(t @ big_k) if big_k.cols else 0
    h0 = big_k.cols - rt
    h1 = n * d - rt + d * (2 * n - rphi)
    if h0 != h1:
        raise InvariantViolation(f"h0 {h0} != h1 {h1}")
    return h0, h1
