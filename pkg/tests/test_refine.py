import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jetnormal.errors import AntipodalPair, DegenerateSum, NegativeLoss
from jetnormal.geometry import Rotation, rotate_to_z
from jetnormal.refine import (
    LossWeights,
    ResidualTerm,
    apply_residual,
    normal_loss,
    oracle_residual,
    sin_loss,
    total_loss,
    trans_loss,
)

Z = np.array([0.0, 0.0, 1.0])
AT_30 = np.array([np.sin(np.pi / 6), 0.0, np.cos(np.pi / 6)])


def random_units(rng, n):
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


class TestApplyResidual:
    def test_zero_delta(self):
        rough = np.array([0.6, 0.0, 0.8])
        np.testing.assert_allclose(apply_residual(rough, ResidualTerm([0, 0, 0])), rough, atol=1e-15)

    def test_forced_arithmetic(self):
        out = apply_residual(Z, ResidualTerm([1.0, 0.0, 0.0]))
        np.testing.assert_allclose(out, np.array([1.0, 0.0, 1.0]) / np.sqrt(2), atol=1e-15)

    def test_degenerate_sum(self):
        with pytest.raises(DegenerateSum):
            apply_residual(Z, ResidualTerm([0.0, 0.0, -1.0]))

    def test_output_is_unit(self):
        rng = np.random.default_rng(0)
        for rough, d in zip(random_units(rng, 500), rng.standard_normal((500, 3))):
            out = apply_residual(rough, ResidualTerm(d))
            assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-12)

    def test_residual_must_be_finite(self):
        with pytest.raises(ValueError):
            ResidualTerm([np.nan, 0.0, 0.0])
        with pytest.raises(ValueError):
            ResidualTerm([1.0, 2.0])


class TestSinLoss:
    @pytest.mark.parametrize(
        "a, b, expected",
        [(Z, Z, 0.0), (Z, np.array([1.0, 0.0, 0.0]), 1.0), (Z, AT_30, 0.5)],
    )
    def test_examples(self, a, b, expected):
        assert sin_loss(a, b) == pytest.approx(expected, abs=1e-15)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_symmetric_and_sign_invariant(self, seed):
        a, b = random_units(np.random.default_rng(seed), 2)
        assert sin_loss(a, b) == sin_loss(b, a)
        assert sin_loss(a, b) == sin_loss(-a, b)
        assert 0.0 <= sin_loss(a, b) <= 1.0 + 1e-15


class TestNormalLoss:
    def test_examples(self):
        assert normal_loss(Z, Z, Z) == 0.0
        assert normal_loss(Z, np.array([1.0, 0.0, 0.0]), Z) == pytest.approx(1.0, abs=1e-15)
        assert normal_loss(Z, AT_30, AT_30) == pytest.approx(1.0, abs=1e-15)


class TestTransLoss:
    def test_examples(self):
        assert trans_loss(np.array([1.0, 0.0, 0.0]), Rotation.identity()) == pytest.approx(1.0, abs=1e-15)
        assert trans_loss(AT_30, Rotation.identity()) == pytest.approx(0.5, abs=1e-15)

    def test_rotate_to_z_gives_zero(self):
        for gt in random_units(np.random.default_rng(1), 1000):
            assert trans_loss(gt, rotate_to_z(gt)) <= 1e-10


class TestTotalLoss:
    def test_defaults(self):
        lw = LossWeights()
        assert (lw.lambda1, lw.lambda2, lw.lambda3) == (0.25, 0.1, 2.0)

    def test_examples(self):
        assert total_loss(0.0).l_total == 0.0
        assert total_loss(1.0, l_trans=0.5).l_total == pytest.approx(2.0, abs=1e-12)
        b = total_loss(0.2, l_con=0.4, l_reg=1.0)
        assert b.l_total == pytest.approx(0.2 + 0.25 * 0.4 + 0.1 * 1.0, abs=1e-12)
        assert (b.l_normal, b.l_con, b.l_reg, b.l_trans) == (0.2, 0.4, 1.0, 0.0)

    def test_custom_weights(self):
        b = total_loss(1.0, 1.0, 1.0, 1.0, LossWeights(1.0, 2.0, 3.0))
        assert b.l_total == pytest.approx(1.0 + 1.0 + 2.0 + 3.0, abs=1e-12)

    def test_linearity(self):
        rng = np.random.default_rng(2)
        for parts in rng.uniform(0, 5, (100, 4)):
            one = total_loss(*parts).l_total
            two = total_loss(*(2 * parts)).l_total
            assert two == pytest.approx(2 * one, abs=1e-12)

    @pytest.mark.parametrize("bad", [{"l_normal": -1.0}, {"l_normal": 0.0, "l_con": -1e-9}, {"l_normal": np.nan}])
    def test_rejects_negative(self, bad):
        with pytest.raises(NegativeLoss):
            total_loss(**bad)

    def test_rejects_bad_weights(self):
        with pytest.raises(ValueError):
            LossWeights(-0.1, 0.1, 2.0)
        with pytest.raises(ValueError):
            LossWeights(0.25, np.inf, 2.0)


class TestOracleResidual:
    def test_identical(self):
        np.testing.assert_array_equal(oracle_residual(Z, Z).delta, 0.0)

    def test_forced(self):
        gt = np.array([1.0, 0.0, 1.0]) / np.sqrt(2)
        d = oracle_residual(gt, Z)
        np.testing.assert_allclose(d.delta, gt - Z, atol=0)
        np.testing.assert_allclose(apply_residual(Z, d), gt, atol=1e-12)

    def test_roundtrip(self):
        rng = np.random.default_rng(3)
        done = 0
        while done < 1000:
            gt, rough = random_units(rng, 2)
            if np.degrees(np.arccos(np.clip(gt @ rough, -1, 1))) >= 170.0:
                continue
            np.testing.assert_allclose(apply_residual(rough, oracle_residual(gt, rough)), gt, atol=1e-10)
            done += 1

    def test_antipodal(self):
        with pytest.raises(AntipodalPair):
            oracle_residual(Z, -Z)
