"""Loss values against hand-computed cases and analytic gradients against
central finite differences."""

import numpy as np
import pytest

from graphalign.errors import DataError
from graphalign.losses import (
    GENERATOR_LOSS_MODES,
    adv_loss_1to2,
    adv_loss_1to2_grads,
    adv_loss_2to1,
    adv_loss_2to1_grads,
    cycle_loss,
    cycle_loss_grads,
    discriminator_step_grads,
    generator_step_grads,
    total_loss,
    total_loss_grads,
)
from graphalign.nets import (
    CriticParams,
    MapperParams,
    _critic_forward,
    _mapper_forward,
    init_critic,
    init_mapper,
)

from gradcheck import check_all_losses, fd_gradient, make_case


def zero_critic(d, h=4):
    """A critic that outputs exactly 0.5 everywhere."""
    return CriticParams(
        w1=np.zeros((h, d)), b1=np.zeros(h), w2=np.zeros((1, h)), b2=np.zeros(1)
    )


def shift_mapper(d, shift):
    return MapperParams("linear", np.eye(d), np.full(d, float(shift)))


class TestHandValues:
    def test_constant_critic_gives_minus_two_log_two(self):
        rng = np.random.default_rng(0)
        d = 3
        g12 = init_mapper(d, rng, noise=0.3)
        b1 = rng.standard_normal((7, d))
        b2 = rng.standard_normal((5, d))
        value = adv_loss_1to2(g12, zero_critic(d), b1, b2)
        assert value == pytest.approx(-2.0 * np.log(2.0), abs=1e-12)

    def test_constant_critic_other_direction(self):
        rng = np.random.default_rng(1)
        d = 4
        g21 = init_mapper(d, rng, noise=0.3)
        b1 = rng.standard_normal((6, d))
        b2 = rng.standard_normal((8, d))
        value = adv_loss_2to1(g21, zero_critic(d), b1, b2)
        assert value == pytest.approx(-2.0 * np.log(2.0), abs=1e-12)

    def test_constant_critic_value_independent_of_batch(self):
        rng = np.random.default_rng(2)
        d = 2
        g = init_mapper(d, rng, noise=1.0)
        v1 = adv_loss_1to2(g, zero_critic(d), rng.standard_normal((3, d)), rng.standard_normal((9, d)))
        v2 = adv_loss_1to2(g, zero_critic(d), rng.standard_normal((11, d)), rng.standard_normal((2, d)))
        assert v1 == v2

    def test_cycle_identity_mappers_is_zero(self):
        d = 5
        g = shift_mapper(d, 0.0)
        rng = np.random.default_rng(3)
        assert cycle_loss(g, g, rng.standard_normal((4, d)), rng.standard_normal((6, d))) == 0.0

    def test_cycle_shift_mappers_hand_value(self):
        # Both mappers add 0.5 per coordinate, so each round trip moves every
        # point by exactly 1 in both coordinates: L1 error 2 per point, and
        # the two trips together give 4 regardless of the batch contents.
        d = 2
        g12 = shift_mapper(d, 0.5)
        g21 = shift_mapper(d, 0.5)
        rng = np.random.default_rng(4)
        b1 = rng.standard_normal((9, d))
        b2 = rng.standard_normal((3, d))
        assert cycle_loss(g12, g21, b1, b2) == pytest.approx(4.0, abs=1e-12)

    def test_cycle_shift_value_from_grads_matches(self):
        d = 2
        g12 = shift_mapper(d, 0.5)
        g21 = shift_mapper(d, 0.5)
        rng = np.random.default_rng(5)
        value, _ = cycle_loss_grads(g12, g21, rng.standard_normal((4, d)), rng.standard_normal((4, d)))
        assert value == pytest.approx(4.0, abs=1e-12)

    def test_total_is_exact_composition(self):
        g12, g21, d1, d2, b1, b2 = make_case(seed=6)
        lam = 7.5
        parts = (
            adv_loss_1to2(g12, d2, b1, b2)
            + adv_loss_2to1(g21, d1, b1, b2)
            + lam * cycle_loss(g12, g21, b1, b2)
        )
        assert abs(total_loss(g12, g21, d1, d2, b1, b2, lam) - parts) < 1e-10
        value, _ = total_loss_grads(g12, g21, d1, d2, b1, b2, lam)
        assert abs(value - parts) < 1e-10

    def test_total_grads_compose_from_parts(self):
        g12, g21, d1, d2, b1, b2 = make_case(seed=7)
        lam = 2.0
        _, g_tot = total_loss_grads(g12, g21, d1, d2, b1, b2, lam)
        _, g_a = adv_loss_1to2_grads(g12, d2, b1, b2)
        _, g_b = adv_loss_2to1_grads(g21, d1, b1, b2)
        _, g_c = cycle_loss_grads(g12, g21, b1, b2)
        for got, adv, cyc in zip(g_tot["g12"], g_a["g12"], g_c["g12"]):
            assert np.allclose(got, adv + lam * cyc, atol=1e-12)
        for got, adv, cyc in zip(g_tot["g21"], g_b["g21"], g_c["g21"]):
            assert np.allclose(got, adv + lam * cyc, atol=1e-12)
        for got, want in zip(g_tot["d1"], g_b["d1"]):
            assert np.array_equal(got, want)
        for got, want in zip(g_tot["d2"], g_a["d2"]):
            assert np.array_equal(got, want)


class TestGradients:
    @pytest.mark.parametrize("variant", ["linear", "nonlinear"])
    @pytest.mark.parametrize("seed", [0, 1])
    def test_all_losses_match_finite_differences(self, variant, seed):
        assert check_all_losses(seed, variant=variant) < 1e-4

    def test_unequal_batch_sizes_normalized_per_batch(self):
        # Doubling the fake batch by repetition must not change the mean.
        g12, _, _, d2, b1, b2 = make_case(seed=8)
        v_once = adv_loss_1to2(g12, d2, b1, b2)
        v_twice = adv_loss_1to2(g12, d2, np.vstack([b1, b1]), b2)
        assert v_once == pytest.approx(v_twice, abs=1e-12)

    def test_nonsaturating_mapper_grads_match_their_objective(self):
        # In nonsaturating mode the mappers descend -mean log D(G(x)) plus the
        # cycle term, while the reported value stays the literal loss.
        g12, g21, d1, d2, b1, b2 = make_case(seed=9)
        lam = 3.0
        _, mg12, mg21 = generator_step_grads(
            g12, g21, d1, d2, b1, b2, lam, mode="nonsaturating"
        )

        def ns_value():
            f12, _ = _mapper_forward(g12, b1)
            f21, _ = _mapper_forward(g21, b2)
            p12, _, _ = _critic_forward(d2, f12)
            p21, _, _ = _critic_forward(d1, f21)
            return (
                -float(np.mean(np.log(p12)))
                - float(np.mean(np.log(p21)))
                + lam * cycle_loss(g12, g21, b1, b2)
            )

        for analytic, arr in zip(mg12, [g12.weight, g12.bias]):
            num = fd_gradient(ns_value, arr)
            scale = max(np.abs(analytic).max(), np.abs(num).max(), 1e-8)
            assert np.abs(analytic - num).max() / scale < 1e-4
        for analytic, arr in zip(mg21, [g21.weight, g21.bias]):
            num = fd_gradient(ns_value, arr)
            scale = max(np.abs(analytic).max(), np.abs(num).max(), 1e-8)
            assert np.abs(analytic - num).max() / scale < 1e-4


class TestStepHelpers:
    def test_generator_value_literal_in_both_modes(self):
        g12, g21, d1, d2, b1, b2 = make_case(seed=10)
        lam = 4.0
        literal = total_loss(g12, g21, d1, d2, b1, b2, lam)
        for mode in GENERATOR_LOSS_MODES:
            value, _, _ = generator_step_grads(g12, g21, d1, d2, b1, b2, lam, mode=mode)
            assert value == pytest.approx(literal, abs=1e-12)

    def test_saturating_generator_grads_equal_total_grads(self):
        g12, g21, d1, d2, b1, b2 = make_case(seed=11)
        lam = 1.5
        _, mg12, mg21 = generator_step_grads(g12, g21, d1, d2, b1, b2, lam)
        _, g_tot = total_loss_grads(g12, g21, d1, d2, b1, b2, lam)
        for a, b in zip(mg12, g_tot["g12"]):
            assert np.allclose(a, b, atol=1e-12)
        for a, b in zip(mg21, g_tot["g21"]):
            assert np.allclose(a, b, atol=1e-12)

    def test_modes_differ_for_mappers(self):
        g12, g21, d1, d2, b1, b2 = make_case(seed=12)
        _, sat12, _ = generator_step_grads(g12, g21, d1, d2, b1, b2, 1.0)
        _, ns12, _ = generator_step_grads(
            g12, g21, d1, d2, b1, b2, 1.0, mode="nonsaturating"
        )
        assert not np.allclose(sat12[0], ns12[0])

    def test_discriminator_grads_match_total(self):
        g12, g21, d1, d2, b1, b2 = make_case(seed=13)
        v12, v21, d1_grads, d2_grads = discriminator_step_grads(g12, g21, d1, d2, b1, b2)
        assert v12 == pytest.approx(adv_loss_1to2(g12, d2, b1, b2), abs=1e-12)
        assert v21 == pytest.approx(adv_loss_2to1(g21, d1, b1, b2), abs=1e-12)
        _, g_tot = total_loss_grads(g12, g21, d1, d2, b1, b2, 0.5)
        for a, b in zip(d1_grads, g_tot["d1"]):
            assert np.array_equal(a, b)
        for a, b in zip(d2_grads, g_tot["d2"]):
            assert np.array_equal(a, b)


class TestValidationAndClamp:
    def test_negative_lambda_rejected(self):
        g12, g21, d1, d2, b1, b2 = make_case(seed=14)
        with pytest.raises(DataError):
            total_loss(g12, g21, d1, d2, b1, b2, -0.1)
        with pytest.raises(DataError):
            total_loss_grads(g12, g21, d1, d2, b1, b2, -1.0)

    def test_batch_dim_mismatch_rejected(self):
        rng = np.random.default_rng(15)
        g = init_mapper(3, rng)
        d = init_critic(3, rng, hidden_units=4)
        with pytest.raises(DataError):
            adv_loss_1to2(g, d, rng.standard_normal((4, 3)), rng.standard_normal((4, 2)))

    def test_mapper_dim_mismatch_rejected(self):
        rng = np.random.default_rng(16)
        g = init_mapper(5, rng)
        d = init_critic(2, rng, hidden_units=4)
        with pytest.raises(DataError):
            adv_loss_1to2(g, d, rng.standard_normal((4, 2)), rng.standard_normal((4, 2)))

    def test_unknown_generator_mode_rejected(self):
        g12, g21, d1, d2, b1, b2 = make_case(seed=17)
        with pytest.raises(DataError):
            generator_step_grads(g12, g21, d1, d2, b1, b2, 1.0, mode="wasserstein")

    def test_saturated_critic_stays_finite(self):
        # A huge-scale critic drives probabilities onto the clamp; the log
        # must stay finite rather than produce -inf or NaN.
        rng = np.random.default_rng(18)
        d = 4
        g = init_mapper(d, rng, noise=0.5)
        critic = init_critic(d, rng, hidden_units=8, scale=100.0)
        b1 = rng.standard_normal((6, d))
        b2 = rng.standard_normal((6, d))
        value, grads = adv_loss_1to2_grads(g, critic, b1, b2)
        assert np.isfinite(value)
        for arrs in grads.values():
            for a in arrs:
                assert np.all(np.isfinite(a))
