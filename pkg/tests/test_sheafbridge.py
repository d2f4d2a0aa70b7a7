import random
from fractions import Fraction

import pytest

from sdquiver.errors import ContractError, DimensionError, NotInChartError
from sdquiver.exactla import RMatrix, det, eval_pencil, rank
from sdquiver.quiver import C_matrix, DimVec, Rep, direct_sum, random_rep, reflect
from sdquiver.sheafbridge import (
    BundleRep,
    HomogPoly,
    Pencil,
    chi_line,
    coh_twist,
    ddual,
    h0_line,
    h0_tensor,
    h2_line,
    h2_mult_matrix,
    hom_to_O,
    ideal_sheaf_rep,
    in_chart,
    lambda3,
    line_pencil,
    monomials,
    mult_matrix,
    strata_index,
    support_curve,
)


def block_pencil(p, q):
    return Pencil(direct_sum(Pencil.of(p).rep, Pencil.of(q).rep))


def generic_bundle(n, seed):
    from sdquiver.dualitylab import sample_bundle

    return BundleRep(sample_bundle(n, seed, 3)[0])


def generic_pencil(d, seed):
    from sdquiver.dualitylab import sample_pencil

    return Pencil(sample_pencil(d, seed, 3)[0])


class TestLineBundles:
    @pytest.mark.parametrize("k", range(-6, 7))
    def test_riemann_roch(self, k):
        assert h0_line(k) + h2_line(k) == chi_line(k) == (k + 1) * (k + 2) // 2
        assert min(h0_line(k), h2_line(k)) == 0

    def test_monomial_order(self):
        assert monomials(1) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        assert len(monomials(4)) == h0_line(4)

    def test_mult_by_x_on_constants(self):
        assert mult_matrix((1, 0, 0), 0) == RMatrix.column([1, 0, 0])

    @pytest.mark.parametrize("k", [0, 1, 3])
    def test_mult_commutes(self, k):
        x, y = (1, 0, 0), (0, 1, 0)
        assert mult_matrix(y, k + 1) @ mult_matrix(x, k) == mult_matrix(x, k + 1) @ mult_matrix(y, k)
        assert mult_matrix(x, k).shape == (h0_line(k + 1), h0_line(k))

    def test_h2_is_dual(self):
        ell = (2, -1, 3)
        assert h2_mult_matrix(ell, 5) == mult_matrix(ell, 1).T
        assert h2_mult_matrix(ell, 3).shape == (0, 1)


class TestSupportCurve:
    def test_line(self):
        p = support_curve(line_pencil((2, -3, 5)))
        assert p.degree == 1 and p.coeffs == (2, -3, 5)

    def test_lambda3_vanishes(self):
        assert support_curve(lambda3()).is_zero()
        assert not in_chart(lambda3())

    def test_matches_det_at_points(self):
        rng = random.Random(8)
        for seed in range(5):
            w = generic_pencil(3, seed)
            curve = support_curve(w)
            for _ in range(5):
                pt = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3)]
                assert curve(pt) == det(eval_pencil(w.triple, pt))

    def test_block_product(self):
        a, b = generic_pencil(1, 1), generic_pencil(2, 2)
        assert support_curve(block_pencil(a, b)) == support_curve(a) * support_curve(b)

    def test_generic_in_chart(self):
        assert in_chart(line_pencil((0, 0, 1)))
        assert sum(in_chart(Pencil(random_rep(3, (2, 2), s))) for s in range(30)) >= 27

    def test_poly_json(self):
        p = support_curve(generic_pencil(2, 4))
        assert HomogPoly.from_json(p.to_json()) == p

    def test_pencil_shape(self):
        with pytest.raises(DimensionError):
            Pencil(random_rep(3, (1, 2), 0))


class TestDDual:
    def test_involution_and_curve(self):
        w = generic_pencil(3, 7)
        assert ddual(ddual(w)) == w
        assert support_curve(ddual(w)) == support_curve(w)

    def test_symmetric_fixed(self):
        s = RMatrix.from_rows([[1, 2], [2, 5]])
        w = Pencil(Rep(3, DimVec(2, 2), (s, s.scale(2), RMatrix.identity(2))))
        assert ddual(w) == w


class TestLambda3:
    def test_matrices(self):
        assert lambda3().triple[0] == RMatrix.from_rows([[0, 0, 0], [-1, 0, 0], [0, 1, 0]])
        assert rank(eval_pencil(lambda3().triple, (1, 0, 0))) == 2

    def test_rank_two_everywhere(self):
        rng = random.Random(1)
        for _ in range(20):
            p = [rng.randint(-5, 5) for _ in range(3)]
            if any(p):
                v = reflect(Rep.scalars(p))
                assert rank(C_matrix(v, lambda3().rep)) == 2


class TestStrata:
    def test_ideal_sheaf(self):
        v = ideal_sheaf_rep((0, 0, 1))
        assert hom_to_O(v) == 1 and strata_index(v) == 1

    def test_sums_of_ideal_sheaves(self):
        for n in (2, 3):
            pts = [(1, 0, 0), (0, 1, 0), (1, 1, 1)][:n]
            v = ideal_sheaf_rep(pts[0]).rep
            for p in pts[1:]:
                v = direct_sum(v, ideal_sheaf_rep(p).rep)
            assert hom_to_O(v) == n == strata_index(v)

    def test_generic_reflections(self):
        # every n = 1 reflection is a point ideal sheaf, so generic vanishing starts at n = 2
        for n in (2, 3):
            for seed in range(3):
                a = Pencil(random_rep(3, (n, n), seed))
                if not in_chart(a):
                    continue
                v = BundleRep(reflect(a.rep))
                assert hom_to_O(v) == 0 == strata_index(v)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_identity_on_samples(self, n):
        for seed in range(5):
            v = generic_bundle(n, seed)
            assert hom_to_O(v) == strata_index(v)

    def test_rank_condition(self):
        with pytest.raises(ContractError):
            BundleRep(Rep.zero(3, (1, 2)))


class TestCohomology:
    def test_ideal_sheaf_profiles(self):
        v = ideal_sheaf_rep((1, 2, 3))
        assert tuple(vars(coh_twist(v, 0)).values()) == (0, 0, 0)
        assert tuple(vars(coh_twist(v, 1)).values()) == (2, 0, 0)
        assert coh_twist(v, 2).h0 == 5

    @pytest.mark.parametrize("n", [1, 2])
    def test_generic_twists(self, n):
        v = generic_bundle(n, 3)
        assert (coh_twist(v, 0).h0, coh_twist(v, 0).h1, coh_twist(v, 0).h2) == (0, 0, 0)
        for k in range(-4, 6):
            prof = coh_twist(v, k)
            assert prof.chi == n * k * (k + 3) // 2
            if k >= 1:
                assert prof.h2 == 0

    def test_twist_range(self):
        with pytest.raises(ContractError):
            coh_twist(ideal_sheaf_rep((0, 0, 1)), 40)


class TestTensor:
    def test_incidence_branches(self):
        v = ideal_sheaf_rep((1, 2, 3))
        assert h0_tensor(v, line_pencil((3, 0, -1))) == (1, 1)
        assert h0_tensor(v, line_pencil((1, 1, 1))) == (0, 0)

    def test_generic_pairs_vanish(self):
        from sdquiver.quiver import c_pair_kron

        for n in (1, 2):
            for d in (1, 2, 3):
                v, w = generic_bundle(n, d), generic_pencil(d, n)
                h = h0_tensor(v, w)
                assert h[0] == h[1]
                assert (h[0] == 0) == (c_pair_kron(v.rep, w.rep)[1] != 0)

    def test_requires_chart(self):
        with pytest.raises(NotInChartError):
            h0_tensor(ideal_sheaf_rep((1, 0, 0)), lambda3())

    def test_probe_recovers_curve(self):
        # det(a Bx + b By + c Bz) is the support curve at (a, b, c)
        w = generic_pencil(2, 11)
        curve = support_curve(w)
        for pt in [(1, 2, 3), (0, 1, -1), (4, -2, 7)]:
            assert det(eval_pencil(w.triple, pt)) == curve(pt)
