"""Budget-transfer rules: exact factors, composition, closed-form consistency."""

import math

import numpy as np
import pytest

from lmoscale import (
    BatchChangeSetting,
    BoundConstants,
    Budget,
    DomainError,
    TransferRegime,
    TunedConfig,
    extrapolate,
    extrapolate_with_batch_change,
    optimal_fixed_batch,
    optimal_fixed_momentum_tokens,
    optimal_joint,
)

UNIT = BoundConstants.from_proxy_constants()
ONES = BoundConstants(1.0, 1.0, 1.0)


def test_regime_a_hundredfold_budget():
    cfg = TunedConfig(t0=1.0, b0=1.0, eta0=1.0, alpha0=1.0)
    res = extrapolate(cfg, 100.0, TransferRegime.FIXED_BATCH_FIXED_MOMENTUM)
    assert res.eta1 == 0.1  # exact, not approximate
    assert res.alpha1 == 1.0 and res.b1 == 1.0
    assert res.flags == ()


def test_identity_transfer():
    cfg = TunedConfig(t0=5e6, b0=17.0, eta0=3e-3, alpha0=0.25)
    for regime in TransferRegime:
        res = extrapolate(cfg, 5e6, regime)
        assert (res.eta1, res.alpha1, res.b1) == (3e-3, 0.25, 17.0)


def test_regime_b_sixteenfold():
    cfg = TunedConfig(t0=1.0, b0=1.0, eta0=8e-3, alpha0=0.04)
    res = extrapolate(cfg, 16.0, TransferRegime.FIXED_BATCH_TUNED_MOMENTUM)
    assert res.eta1 == pytest.approx(1e-3, rel=1e-15)
    assert res.alpha1 == pytest.approx(0.01, rel=1e-15)


def test_regime_fields_left_untouched():
    cfg = TunedConfig(t0=10.0, b0=7.0, eta0=0.1, alpha0=0.3)
    a = extrapolate(cfg, 1000.0, TransferRegime.FIXED_BATCH_FIXED_MOMENTUM)
    assert a.b1 == 7.0 and a.alpha1 == 0.3
    c = extrapolate(cfg, 1000.0, TransferRegime.TUNED_BATCH_FIXED_MOMENTUM)
    assert c.alpha1 == 0.3 and c.b1 == 70.0


def test_composition_is_exact():
    rng = np.random.default_rng(21)
    for regime in TransferRegime:
        for _ in range(60):
            t0 = 10.0 ** rng.uniform(2, 8)
            t1 = t0 * 10.0 ** rng.uniform(0, 6)
            t2 = t1 * 10.0 ** rng.uniform(0, 6)
            cfg = TunedConfig(
                t0=t0,
                b0=10.0 ** rng.uniform(0, 4),
                eta0=10.0 ** rng.uniform(-6, 0),
                alpha0=10.0 ** rng.uniform(-4, 0),
            )
            mid = extrapolate(cfg, t1, regime)
            two_hop = extrapolate(
                TunedConfig(t0=t1, b0=mid.b1, eta0=mid.eta1, alpha0=mid.alpha1),
                t2,
                regime,
            )
            one_hop = extrapolate(cfg, t2, regime)
            assert two_hop.eta1 == pytest.approx(one_hop.eta1, rel=1e-12)
            assert two_hop.alpha1 == pytest.approx(one_hop.alpha1, rel=1e-12)
            assert two_hop.b1 == pytest.approx(one_hop.b1, rel=1e-12)


def test_regime_a_tracks_fixed_batch_optimum():
    t0, t1, b = 1e10, 1e14, 64.0
    start = optimal_fixed_momentum_tokens(UNIT, 0.3, t0, b=b)
    res = extrapolate(
        TunedConfig(t0=t0, b0=b, eta0=start.eta_star, alpha0=0.3),
        t1,
        TransferRegime.FIXED_BATCH_FIXED_MOMENTUM,
    )
    target = optimal_fixed_momentum_tokens(UNIT, 0.3, t1, b=b)
    assert res.eta1 == pytest.approx(target.eta_star, rel=1e-10)


def test_regime_b_tracks_fixed_batch_momentum_optimum():
    t0, t1, b = 1e10, 1e15, 1072.0
    start = optimal_fixed_batch(UNIT, b, Budget.tokens(t0))
    res = extrapolate(
        TunedConfig(t0=t0, b0=b, eta0=start.eta_star, alpha0=start.alpha_star),
        t1,
        TransferRegime.FIXED_BATCH_TUNED_MOMENTUM,
    )
    target = optimal_fixed_batch(UNIT, b, Budget.tokens(t1))
    assert res.alpha1 == pytest.approx(target.alpha_star, rel=1e-10)
    assert res.eta1 == pytest.approx(target.eta_star, rel=1e-10)


def test_regime_c_tracks_joint_fixed_momentum_optimum():
    t0, t1 = 1e10, 1e16
    start = optimal_fixed_momentum_tokens(UNIT, 0.05, t0)
    res = extrapolate(
        TunedConfig(t0=t0, b0=start.b_star, eta0=start.eta_star, alpha0=0.05),
        t1,
        TransferRegime.TUNED_BATCH_FIXED_MOMENTUM,
    )
    target = optimal_fixed_momentum_tokens(UNIT, 0.05, t1)
    assert res.b1 == pytest.approx(target.b_star, rel=1e-10)
    assert res.eta1 == pytest.approx(target.eta_star, rel=1e-10)


def test_regime_d_tracks_joint_optimum_asymptotically():
    # the joint optimum is not an exact power law, so the transfer error
    # shrinks with the starting budget instead of vanishing outright
    errors = []
    for t0 in (1e8, 1e12, 1e16):
        t1 = t0 * 1e4
        start = optimal_joint(ONES, t0)
        res = extrapolate(
            TunedConfig(t0=t0, b0=start.b_star, eta0=start.eta_star, alpha0=start.alpha_star),
            t1,
            TransferRegime.JOINT,
        )
        target = optimal_joint(ONES, t1)
        errors.append(
            max(
                abs(res.alpha1 - target.alpha_star) / target.alpha_star,
                abs(res.eta1 - target.eta_star) / target.eta_star,
                abs(res.b1 - target.b_star) / target.b_star,
            )
        )
    assert errors == sorted(errors, reverse=True)
    assert errors[-1] < 2e-3


def test_downscaling_is_rejected():
    cfg = TunedConfig(t0=100.0, b0=1.0, eta0=0.1, alpha0=1.0)
    with pytest.raises(DomainError):
        extrapolate(cfg, 50.0, TransferRegime.JOINT)


def test_batch_cap_flag():
    cfg = TunedConfig(t0=1e6, b0=100.0, eta0=1e-3, alpha0=0.5)
    res = extrapolate(cfg, 1e12, TransferRegime.TUNED_BATCH_FIXED_MOMENTUM, b_max=1e4)
    assert res.b1 == 1e4
    assert "b-capped" in res.flags


def test_batch_change_cancellation():
    cfg = TunedConfig(t0=1e8, b0=37.0, eta0=2.5e-3, alpha0=0.1)
    res = extrapolate_with_batch_change(
        cfg, 4e8, 4.0 * 37.0, BatchChangeSetting.LMO_FIXED_MOMENTUM
    )
    assert res.eta1 == cfg.eta0  # sqrt(4) * sqrt(1/4) == 1 exactly


def test_batch_change_sgd_linear_scaling():
    cfg = TunedConfig(t0=1e8, b0=32.0, eta0=1e-3, alpha0=1.0)
    res = extrapolate_with_batch_change(cfg, 1e8, 64.0, BatchChangeSetting.SGD)
    assert res.eta1 == pytest.approx(2e-3, rel=1e-15)


def test_batch_change_tuned_momentum_equals_regime_b_at_equal_batch():
    cfg = TunedConfig(t0=1e8, b0=48.0, eta0=5e-4, alpha0=0.02)
    via_change = extrapolate_with_batch_change(
        cfg, 16e8, 48.0, BatchChangeSetting.LMO_TUNED_MOMENTUM
    )
    via_regime = extrapolate(cfg, 16e8, TransferRegime.FIXED_BATCH_TUNED_MOMENTUM)
    assert via_change.alpha1 == pytest.approx(via_regime.alpha1, rel=1e-14)
    assert via_change.eta1 == pytest.approx(via_regime.eta1, rel=1e-14)
    assert via_change.alpha1 == pytest.approx(0.02 / 4.0, rel=1e-14)
    assert via_change.eta1 == pytest.approx(5e-4 / 8.0, rel=1e-14)


def test_calibrated_invariants_reproduce_the_transfer():
    cfg = TunedConfig(t0=3e7, b0=24.0, eta0=7e-4, alpha0=0.05)
    t1, b1 = 9e9, 96.0
    res = extrapolate_with_batch_change(cfg, t1, b1, BatchChangeSetting.LMO_TUNED_MOMENTUM)
    assert res.c_eta * b1 / t1**0.75 == pytest.approx(res.eta1, rel=1e-12)
    assert res.c_alpha * b1 / math.sqrt(t1) == pytest.approx(res.alpha1, rel=1e-12)
    fixed = extrapolate_with_batch_change(cfg, t1, b1, BatchChangeSetting.LMO_FIXED_MOMENTUM)
    assert fixed.c_eta * math.sqrt(b1 / t1) == pytest.approx(fixed.eta1, rel=1e-12)
    assert fixed.c_alpha is None


def test_momentum_clamp_flag_on_batch_change():
    cfg = TunedConfig(t0=1e8, b0=1.0, eta0=1e-4, alpha0=0.9)
    res = extrapolate_with_batch_change(
        cfg, 1e8, 1e6, BatchChangeSetting.LMO_TUNED_MOMENTUM
    )
    assert res.alpha1 == 1.0
    assert "alpha-clamped" in res.flags
