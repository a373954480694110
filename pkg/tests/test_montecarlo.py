"""Monte Carlo estimator: configuration, determinism, and statistical accuracy.

Statistical assertions use fixed seeds, so every run sees the same draws;
tolerances are set from the binomial standard error at the chosen path
count plus the known discretization bias direction.
"""
import math

import pytest

from bisup import (
    SimConfig,
    ValidationError,
    bridge_no_cross,
    normalized,
    pi1d,
    pi_joint,
    simulate_bridge_check,
    simulate_joint,
)

PARAMS = normalized(1.0, 2.0, 2.0, 1.0)


def test_sim_config_validation():
    with pytest.raises(ValidationError):
        SimConfig(paths=0, steps=8, seed=0)
    with pytest.raises(ValidationError):
        SimConfig(paths=100, steps=0, seed=0)
    with pytest.raises(ValidationError):
        SimConfig(paths=100, steps=8, seed=-1)
    with pytest.raises(ValidationError):
        SimConfig(paths=100, steps=8, seed=2 ** 64)
    with pytest.raises(ValidationError):
        SimConfig(paths=True, steps=8, seed=0)
    with pytest.raises(ValidationError):
        SimConfig(paths=10.0, steps=8, seed=0)
    # path-step product capped by the sampling budget
    with pytest.raises(ValidationError):
        SimConfig(paths=1 << 20, steps=1 << 16, seed=0)
    cfg = SimConfig(paths=100, steps=8, seed=0)
    assert cfg.bridge_correction is True


def test_estimates_are_deterministic_per_seed():
    cfg = SimConfig(paths=20_000, steps=64, seed=11)
    a = simulate_joint(PARAMS, 3.0, cfg)
    b = simulate_joint(PARAMS, 3.0, cfg)
    assert a == b
    c = simulate_joint(PARAMS, 3.0, SimConfig(paths=20_000, steps=64, seed=12))
    assert c.p_hat != a.p_hat


def test_estimate_fields_are_consistent():
    cfg = SimConfig(paths=20_000, steps=64, seed=11)
    est = simulate_joint(PARAMS, 3.0, cfg)
    assert est.paths == 20_000 and est.steps == 64
    assert 0.0 <= est.p_hat <= 1.0
    want_se = math.sqrt(est.p_hat * (1.0 - est.p_hat) / 20_000)
    assert est.std_err == pytest.approx(want_se, rel=1e-12)


def test_joint_estimate_matches_exact_value():
    exact = pi_joint(PARAMS, 3.0).p
    est = simulate_joint(PARAMS, 3.0, SimConfig(paths=60_000, steps=256, seed=4))
    assert abs(est.p_hat - exact) <= 4.0 * est.std_err


def test_paths_beyond_one_block_are_processed():
    # block size is 2^16; 70_000 paths exercises the two-block path
    est = simulate_joint(PARAMS, 3.0, SimConfig(paths=70_000, steps=32, seed=3))
    assert est.paths == 70_000
    assert 0.0 < est.p_hat < 1.0


def test_degenerate_parameters_simulate_single_boundary():
    p = normalized(1.0, 2.0, 1.0, 1.0)  # parallel boundaries, binding (2, 1)
    assert p.degenerate
    exact = pi1d(2.0, 1.0, 2.0).p
    est = simulate_joint(p, 2.0, SimConfig(paths=50_000, steps=256, seed=8))
    assert abs(est.p_hat - exact) <= 4.0 * est.std_err


def test_bridge_correction_recovers_between_node_crossings():
    on = simulate_joint(PARAMS, 3.0, SimConfig(paths=100_000, steps=64, seed=5))
    off = simulate_joint(
        PARAMS, 3.0, SimConfig(paths=100_000, steps=64, seed=5, bridge_correction=False))
    # node-only checking misses interior crossings, so the corrected
    # estimate must sit strictly above the uncorrected one
    assert on.p_hat > off.p_hat
    exact = pi_joint(PARAMS, 3.0).p
    assert abs(on.p_hat - exact) < abs(off.p_hat - exact)


def test_bridge_check_validation():
    cfg = SimConfig(paths=100, steps=8, seed=0)
    with pytest.raises(ValidationError):
        simulate_bridge_check(0.0, 0.3, 0.8, cfg)
    with pytest.raises(ValidationError):
        simulate_bridge_check(1.0, 0.9, 0.8, cfg)
    with pytest.raises(ValidationError):
        simulate_bridge_check(1.0, math.nan, 0.8, cfg)


def test_bridge_check_degenerate_levels():
    cfg = SimConfig(paths=500, steps=16, seed=0)
    # level at or below the start is crossed immediately
    assert simulate_bridge_check(1.0, -0.5, 0.0, cfg).p_hat == 0.0
    assert simulate_bridge_check(1.0, -1.0, -0.2, cfg).p_hat == 0.0
    # endpoint touching the level counts as a crossing
    assert simulate_bridge_check(1.0, 0.8, 0.8, cfg).p_hat == 0.0


def test_bridge_check_against_closed_form():
    # node-sampled bridges can only miss crossings, so the estimate is
    # biased high; at 2^15 steps the bias is a few thousandths and the
    # allowance below covers it together with three standard errors
    want = bridge_no_cross(1.0, 0.3, 0.8)
    est = simulate_bridge_check(1.0, 0.3, 0.8, SimConfig(paths=12_000, steps=32_768, seed=2))
    se = math.sqrt(want * (1.0 - want) / 12_000)
    assert est.p_hat >= want - 3.0 * se
    assert abs(est.p_hat - want) <= 3.0 * se + 0.006
