"""Exceptional slopes on the projective plane and the height of moduli spaces.

Exceptional slopes are indexed by dyadic rationals through the recursion
``eps((2p+1)/2^q) = eps(p/2^(q-1)) . eps((p+1)/2^(q-1))``.  The rank of the
exceptional bundle is the denominator of its slope and its discriminant is
``(1 - 1/r^2)/2``.  Interval endpoints ``a +- x_a`` are irrational, so every
interval test is done as a squared rational inequality.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from sdquiver.errors import ContractError, DepthExhaustedError

DEFAULT_DEPTH = 64
_THREE_HALVES = Fraction(3, 2)


def P(y) -> Fraction:
    """``(y^2 + 3y + 2) / 2``, the Hilbert polynomial of the plane."""
    y = Fraction(y)
    return (y * y + 3 * y + 2) / 2


def discriminant_of_rank(r: int) -> Fraction:
    return (1 - Fraction(1, r * r)) / 2


@dataclass(frozen=True)
class Dyadic:
    """The dyadic rational ``p / 2^q`` in canonical form (``p`` odd or ``q = 0``)."""

    p: int
    q: int = 0

    def __post_init__(self):
        if self.q < 0:
            raise ContractError("dyadic exponent must be nonnegative")
        p, q = self.p, self.q
        while q > 0 and p % 2 == 0:
            p //= 2
            q -= 1
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def of(cls, x) -> "Dyadic":
        if isinstance(x, Dyadic):
            return x
        x = Fraction(x)
        den = x.denominator
        q = den.bit_length() - 1
        if den != 1 << q:
            raise ContractError(f"{x} is not a dyadic rational")
        return cls(x.numerator, q)

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, 1 << self.q)

    def __str__(self) -> str:
        return str(self.p) if self.q == 0 else f"{self.p}/{1 << self.q}"


@dataclass(frozen=True)
class ExcSlope:
    slope: Fraction
    rank: int
    discriminant: Fraction

    @classmethod
    def from_slope(cls, slope) -> "ExcSlope":
        slope = Fraction(slope)
        r = slope.denominator
        return cls(slope, r, discriminant_of_rank(r))


def dot(a: ExcSlope, b: ExcSlope) -> Fraction:
    """``(a + b)/2 + (D_b - D_a)/(3 + a - b)``."""
    den = 3 + a.slope - b.slope
    if den == 0:
        raise ContractError("3 + a - b vanishes")
    return (a.slope + b.slope) / 2 + (b.discriminant - a.discriminant) / den


_memo: dict[Dyadic, ExcSlope] = {}
_memo_lock = threading.Lock()


def eps(x) -> ExcSlope:
    """The exceptional slope attached to a dyadic rational (memoized)."""
    x = Dyadic.of(x)
    with _memo_lock:
        hit = _memo.get(x)
    if hit is not None:
        return hit
    # iterative descent so deep dyadics do not hit the recursion limit
    stack = [x]
    while stack:
        cur = stack[-1]
        with _memo_lock:
            if cur in _memo:
                stack.pop()
                continue
        if cur.q == 0:
            val = ExcSlope(Fraction(cur.p), 1, Fraction(0))
        else:
            lo = Dyadic((cur.p - 1) // 2, cur.q - 1)
            hi = Dyadic((cur.p + 1) // 2, cur.q - 1)
            with _memo_lock:
                ea, eb = _memo.get(lo), _memo.get(hi)
            if ea is None or eb is None:
                if ea is None:
                    stack.append(lo)
                if eb is None:
                    stack.append(hi)
                continue
            val = ExcSlope.from_slope(dot(ea, eb))
        with _memo_lock:
            _memo[cur] = val
        stack.pop()
    with _memo_lock:
        return _memo[x]


def in_interval(mu, a: ExcSlope) -> bool:
    """Exact test of ``|mu - a| < x_a`` with ``x_a = 3/2 - sqrt(9/4 - 1/r_a^2)``."""
    dist = abs(Fraction(mu) - a.slope)
    if dist >= _THREE_HALVES:
        return False
    return Fraction(9, 4) - Fraction(1, a.rank * a.rank) < (_THREE_HALVES - dist) ** 2


def assoc_exceptional(mu, max_depth: int = DEFAULT_DEPTH) -> ExcSlope:
    """The unique exceptional slope ``a`` with ``mu`` in ``I_a``."""
    mu = Fraction(mu)
    n = mu.numerator // mu.denominator
    lo, hi = Dyadic(n), Dyadic(n + 1)
    for end in (lo, hi):
        e = eps(end)
        if in_interval(mu, e):
            return e
    for _ in range(max_depth):
        mid = Dyadic.of((lo.value + hi.value) / 2)
        e = eps(mid)
        if in_interval(mu, e):
            return e
        if mu < e.slope:
            hi = mid
        else:
            lo = mid
    raise DepthExhaustedError(f"no exceptional interval found for {mu} within depth {max_depth}")


def delta(mu, max_depth: int = DEFAULT_DEPTH) -> Fraction:
    """``P(-|mu - a|) - D_a`` for the associated exceptional slope ``a``."""
    mu = Fraction(mu)
    a = assoc_exceptional(mu, max_depth)
    return P(-abs(mu - a.slope)) - a.discriminant


def discriminant(r: int, c1: int, c2: int) -> Fraction:
    """``(c2 - (1 - 1/r) c1^2 / 2) / r``."""
    if r < 1:
        raise ContractError("rank must be positive")
    return (c2 - (1 - Fraction(1, r)) * Fraction(c1 * c1) / 2) / r


def height(r: int, c1: int, c2: int, max_depth: int = DEFAULT_DEPTH) -> Fraction:
    """``r r_a (D - delta(c1/r))``."""
    if r < 1:
        raise ContractError("rank must be positive")
    mu = Fraction(c1, r)
    a = assoc_exceptional(mu, max_depth)
    return r * a.rank * (discriminant(r, c1, c2) - (P(-abs(mu - a.slope)) - a.discriminant))


def chi(r_e: int, mu_e, d_e, r_f: int, mu_f, d_f) -> Fraction:
    """Riemann-Roch: ``chi(E, F) = r_E r_F (P(mu_F - mu_E) - D_E - D_F)``."""
    return r_e * r_f * (P(Fraction(mu_f) - Fraction(mu_e)) - Fraction(d_e) - Fraction(d_f))


def height_chi_crosscheck(r: int, c1: int, c2: int, max_depth: int = DEFAULT_DEPTH) -> Fraction:
    """The height as ``-chi(E_a, F)`` for ``mu <= a`` and ``-chi(F, E_a)`` otherwise."""
    if r < 1:
        raise ContractError("rank must be positive")
    mu = Fraction(c1, r)
    a = assoc_exceptional(mu, max_depth)
    dd = discriminant(r, c1, c2)
    if mu <= a.slope:
        return -chi(a.rank, a.slope, a.discriminant, r, mu, dd)
    return -chi(r, mu, dd, a.rank, a.slope, a.discriminant)


def positive_dim(r: int, c1: int, c2: int, max_depth: int = DEFAULT_DEPTH) -> bool:
    """``delta(c1/r) <= D(r, c1, c2)``."""
    return delta(Fraction(c1, r), max_depth) <= discriminant(r, c1, c2)


def product_rank(a: ExcSlope, b: ExcSlope) -> Fraction:
    """``r_a r_b (3 + a - b)``, the expected rank of ``a.b``."""
    return a.rank * b.rank * (3 + a.slope - b.slope)
