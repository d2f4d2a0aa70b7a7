import pytest

from sdquiver import docfmt
from sdquiver.dualitylab import (
    ExperimentConfig,
    coeff_span_curve,
    coeff_span_dim,
    crafted_pair,
    derive_seed,
    pairing_matrix,
    sample_bundle,
    sample_pencil,
    strata_census,
    vanishing_oracle_experiment,
)
from sdquiver.errors import ContractError
from sdquiver.exactla import det
from sdquiver.quiver import C_matrix, hom_ext
from sdquiver.sheafbridge import h0_tensor, in_chart


def canon(report) -> str:
    return docfmt.dumps(docfmt.make("report", report.to_json()))


class TestConfig:
    def test_roundtrip(self):
        cfg = ExperimentConfig(seed=9, r=2, d=3, schedule=(1, 3, 5))
        assert ExperimentConfig.from_json(cfg.to_json()) == cfg

    @pytest.mark.parametrize("bad", [{"seed": -1}, {"r": 0}, {"schedule": (3, 2)}, {"entry_bound": 0}])
    def test_validation(self, bad):
        with pytest.raises(ContractError):
            ExperimentConfig(**bad)

    def test_types(self):
        with pytest.raises(ContractError):
            ExperimentConfig.from_json({"seed": "1"})

    def test_seed_derivation(self):
        assert derive_seed(1, "a", 2) == derive_seed(1, "a", 2) != derive_seed(1, "a", 3)
        assert 0 <= derive_seed(2**64 - 1, "x") < 2**64


class TestSamplers:
    def test_bundle_reflectable(self):
        v, _ = sample_bundle(2, 5, 3)
        assert v.dim.a2 == 4

    def test_pencil_in_chart(self):
        w, _ = sample_pencil(3, 5, 3)
        assert in_chart(w)

    @pytest.mark.parametrize("n,d", [(1, 1), (2, 1), (1, 3), (2, 2), (3, 2)])
    def test_crafted_pair_vanishes(self, n, d):
        v, w = crafted_pair(n, d, 4, 3)
        assert det(C_matrix(v, w)) == 0
        assert h0_tensor(v, w)[0] > 0


class TestPairing:
    def test_report_and_oracle(self):
        cfg = ExperimentConfig(seed=3, r=1, d=2, samples_V=4, samples_W=5)
        m, rep = pairing_matrix(cfg)
        assert m.shape == (4, 5)
        assert rep.oracle_disagreements == 0 and rep.pairs == 20
        assert rep.saturation[-1][1] == rep.matrix_rank

    def test_parallel_matches_serial(self):
        cfg = ExperimentConfig(seed=3, r=1, d=1, samples_V=4, samples_W=4)
        assert canon(pairing_matrix(cfg)[1]) == canon(pairing_matrix(cfg, workers=2)[1])

    def test_deterministic(self):
        cfg = ExperimentConfig(seed=17, r=2, d=1, samples_V=3, samples_W=3)
        assert canon(pairing_matrix(cfg)[1]) == canon(pairing_matrix(cfg)[1])
        other = ExperimentConfig(seed=18, r=2, d=1, samples_V=3, samples_W=3)
        assert canon(pairing_matrix(cfg)[1]) != canon(pairing_matrix(other)[1])


class TestSpan:
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_plateau(self, d):
        assert coeff_span_dim(d, seed=1) == (d + 1) * (d + 2) // 2

    def test_curve_saturates(self):
        curve = coeff_span_curve(2, [2, 4, 6, 8], seed=0)
        ranks = [r for _, r in curve]
        assert ranks == sorted(ranks) and ranks[-1] == 6


class TestVanishing:
    def test_experiment(self):
        cfg = ExperimentConfig(seed=2, n=2, d=2, samples_V=6)
        rep = vanishing_oracle_experiment(cfg)
        assert rep.oracle_disagreements == 0 and rep.h_mismatches == 0
        assert rep.extra["crafted"] == 2 and rep.zero_cells >= 2


class TestCensus:
    @pytest.mark.parametrize("n", [2, 3])
    def test_census(self, n):
        rep = strata_census(n, 6, seed=4)
        assert rep.residual_failures == 0
        assert sum(rep.counts.values()) == 6 + n
        # a rank-one remainder is itself a point ideal sheaf and adds one more map to O
        expect = [k + (1 if n - k == 1 else 0) for k in range(1, n + 1)]
        assert [f["index"] for f in rep.fixtures] == expect
        assert canon(rep) == canon(strata_census(n, 6, seed=4))


def test_hom_ext_on_sampled_pairs():
    v, _ = sample_bundle(1, 0, 3)
    w, _ = sample_pencil(2, 0, 3)
    h, e = hom_ext(v, w)
    assert h == e
