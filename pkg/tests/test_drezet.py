from fractions import Fraction as F

import pytest

from sdquiver.errors import ContractError, DepthExhaustedError
from sdquiver.drezet import (
    Dyadic,
    ExcSlope,
    P,
    assoc_exceptional,
    chi,
    delta,
    discriminant,
    dot,
    eps,
    height,
    height_chi_crosscheck,
    in_interval,
    positive_dim,
    product_rank,
)


def dyadics(qmax, lo=0, hi=1):
    return sorted({F(p, 2 ** q) for q in range(qmax + 1) for p in range(lo * 2 ** q, hi * 2 ** q + 1)})


class TestBasics:
    def test_hilbert_polynomial(self):
        assert (P(0), P(-1), P(-2), P(3)) == (1, 0, 0, 10)

    def test_dot_examples(self):
        z, one, half = eps(0), eps(1), eps(F(1, 2))
        assert dot(z, one) == F(1, 2)
        assert dot(z, half) == F(2, 5)
        assert dot(eps(F(1, 4)), half) == F(12, 29)

    def test_dot_pole(self):
        with pytest.raises(ContractError):
            dot(ExcSlope.from_slope(0), ExcSlope.from_slope(3))

    def test_dyadic_canonical(self):
        assert Dyadic(4, 3) == Dyadic(1, 1)
        assert str(Dyadic.of(F(6, 16))) == "3/8"
        with pytest.raises(ContractError):
            Dyadic.of(F(1, 3))


class TestEps:
    def test_examples(self):
        assert eps(3) == ExcSlope(F(3), 1, F(0))
        assert eps(F(1, 2)) == ExcSlope(F(1, 2), 2, F(3, 8))
        e = eps(F(3, 8))
        assert (e.slope, e.rank, e.discriminant) == (F(12, 29), 29, F(420, 841))
        assert eps(F(1, 4)).slope == F(2, 5)

    def test_translation(self):
        for x in dyadics(5):
            assert eps(x + 1).slope == eps(x).slope + 1

    def test_monotone(self):
        xs = dyadics(6)
        slopes = [eps(x).slope for x in xs]
        assert slopes == sorted(slopes) and len(set(slopes)) == len(slopes)

    def test_product_rank_oracle(self):
        for q in range(1, 7):
            for p in range(1, 2 ** q, 2):
                a, b = eps(F(p - 1, 2 ** q)), eps(F(p + 1, 2 ** q))
                c = eps(F(p, 2 ** q))
                assert c.rank == product_rank(a, b)

    def test_chi_integral_between_neighbours(self):
        # Euler characteristics of exceptional pairs must be integers
        for q in range(1, 6):
            for p in range(1, 2 ** q, 2):
                a, b = eps(F(p - 1, 2 ** q)), eps(F(p + 1, 2 ** q))
                val = chi(a.rank, a.slope, a.discriminant, b.rank, b.slope, b.discriminant)
                assert val.denominator == 1 and val > 0

    def test_self_chi_is_one(self):
        for x in dyadics(4):
            e = eps(x)
            assert chi(e.rank, e.slope, e.discriminant, e.rank, e.slope, e.discriminant) == 1

    def test_deep_dyadic(self):
        e = eps(F(1, 2 ** 40))
        assert e.rank == e.slope.denominator


class TestIntervals:
    def test_membership(self):
        half = eps(F(1, 2))
        assert in_interval(F(1, 2), half)
        assert not in_interval(F(1, 2) + F(3, 2), half)
        assert not in_interval(F(-1), half)

    def test_one_third_consistent(self):
        half = eps(F(1, 2))
        assert in_interval(F(1, 3), half) == (assoc_exceptional(F(1, 3)) == half)

    def test_assoc_examples(self):
        assert assoc_exceptional(0).slope == 0
        assert assoc_exceptional(F(1, 2)).slope == F(1, 2)
        assert assoc_exceptional(F(12, 29)).slope == F(12, 29)

    def test_thirteen_twentyninths(self):
        # 13/29 is within x_{1/2} of 1/2, and the intervals are disjoint
        assert in_interval(F(13, 29), eps(F(1, 2)))
        assert not in_interval(F(13, 29), eps(F(3, 8)))
        assert assoc_exceptional(F(13, 29)).slope == F(1, 2)

    def test_uniqueness_on_samples(self):
        cands = [eps(x) for x in dyadics(5, -1, 2)]
        for num in range(-20, 41):
            for den in (3, 5, 7, 11):
                mu = F(num, den)
                if not -1 < mu < 2:
                    continue
                a = assoc_exceptional(mu)
                hits = [c for c in cands if in_interval(mu, c)]
                assert a in hits and len(hits) == 1

    def test_depth_exhausted(self):
        # 12/29 sits three bisections below [0, 1]
        with pytest.raises(DepthExhaustedError):
            assoc_exceptional(F(12, 29), max_depth=2)
        assert assoc_exceptional(F(12, 29), max_depth=3).rank == 29


class TestDelta:
    def test_examples(self):
        assert delta(0) == 1
        assert delta(F(1, 2)) == F(5, 8)

    def test_translation(self):
        for mu in [F(1, 3), F(2, 7), F(5, 11), F(3, 5)]:
            assert delta(mu + 1) == delta(mu)


class TestHeight:
    def test_grid(self):
        for r in range(1, 7):
            for n in range(1, 7):
                assert height(r, 0, n) == n - r
                assert height_chi_crosscheck(r, 0, n) == n - r

    def test_plug_in(self):
        assert height(1, 0, 1) == 0
        assert height(2, 1, 1) == -1
        assert discriminant(2, 1, 2) == F(7, 8)

    def test_crosscheck_off_grid(self):
        for r in range(1, 6):
            for c1 in range(-4, 5):
                for c2 in range(0, 6):
                    assert height(r, c1, c2) == height_chi_crosscheck(r, c1, c2)

    def test_chi_sanity(self):
        for k in range(0, 5):
            assert chi(1, 0, 0, 1, k, 0) == F((k + 1) * (k + 2), 2)

    def test_positive_dim(self):
        for r in range(1, 5):
            for n in range(0, 7):
                assert positive_dim(r, 0, n) == (n >= r)
        assert positive_dim(1, 0, 0) is False
        assert positive_dim(2, 1, 2) is True

    def test_bad_rank(self):
        with pytest.raises(ContractError):
            height(0, 0, 1)
