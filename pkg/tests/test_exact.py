"""Exact finite- and infinite-horizon crossing probabilities.

Covers frozen reference values, the inclusion-exclusion representation,
branch continuity at the boundary-intersection time, Frechet envelopes,
and the log-domain evaluation path with its cancellation guards.
"""
import math

import pytest
from hypothesis import given, strategies as st

from bisup import (
    CancellationError,
    NumericalIntegrityError,
    ValidationError,
    boundary_no_cross,
    bridge_no_cross,
    log_pi_joint,
    norm_sf,
    normalized,
    pi1d,
    pi_infinite,
    pi_joint,
)
from bisup.exact import _assemble, _clamp_unit

# Frozen values, cross-validated against the Monte Carlo estimator.
REFERENCE_GRID = [
    (1.0, 2.0, 2.0, 1.0, 3.0, 0.007224943809881017, "full"),
    (1.0, 2.0, 2.0, 1.0, 0.5, 0.0005138789573948541, "dim-reduced"),
    (0.5, 3.0, 1.5, 0.2, 10.0, 0.07169375184847414, "full"),
    (1.0, 1.5, 3.0, -0.5, 2.0, 0.0024734117856099647, "full"),
    (2.0, 5.0, 2.0, 1.0, 1.0, 2.4244597997520163e-09, "dim-reduced"),
]

pos_small = st.floats(min_value=0.05, max_value=3.0)
drift2 = st.floats(min_value=-1.5, max_value=2.5)


def _joint_setup(a1, gap_a, c2, gap_c):
    """Non-degenerate parameters and their intersection time."""
    p = normalized(a1, a1 + gap_a, c2 + gap_c, c2)
    return p, (p.a2 - p.a1) / (p.c1 - p.c2)


def test_pi1d_frozen_values():
    assert pi1d(1.0, 1.0, 1.0).p == pytest.approx(0.09041777356648556, abs=1e-16)
    assert pi1d(1.0, 0.0, 1.0).p == pytest.approx(0.31731050786291404, abs=1e-16)
    assert pi1d(2.0, -1.0, 4.0).p == pytest.approx(0.9150466813289289, abs=1e-15)


def test_pi1d_driftless_reflection():
    # with no drift the crossing probability is the two-sided tail 2 Psi(a/sqrt(T))
    for a, T in ((0.5, 1.0), (1.0, 4.0), (2.5, 0.3)):
        assert pi1d(a, 0.0, T).p == pytest.approx(2.0 * norm_sf(a / math.sqrt(T)), rel=1e-14)


def test_pi1d_validation():
    with pytest.raises(ValidationError):
        pi1d(0.0, 1.0, 1.0)
    with pytest.raises(ValidationError):
        pi1d(1.0, math.nan, 1.0)
    with pytest.raises(ValidationError):
        pi1d(1.0, 1.0, -2.0)


def test_pi_joint_frozen_grid():
    for a1, a2, c1, c2, T, want, branch in REFERENCE_GRID:
        r = pi_joint(normalized(a1, a2, c1, c2), T)
        assert r.branch == branch
        assert r.p == pytest.approx(want, rel=1e-13), (a1, a2, c1, c2, T)
        assert r.log_p == pytest.approx(math.log(want), abs=1e-12)


def test_full_branch_terms_sum_to_probability():
    r = pi_joint(normalized(1.0, 2.0, 2.0, 1.0), 3.0)
    assert r.terms is not None and len(r.terms) == 5
    assert math.fsum(r.terms) == pytest.approx(r.p, abs=1e-17)
    # one-boundary reduction carries no term breakdown
    assert pi_joint(normalized(1.0, 2.0, 2.0, 1.0), 0.5).terms is None


def test_dim_reduced_branch_equals_single_boundary():
    # boundaries meeting at or after the horizon leave only the flatter one
    p = normalized(1.0, 2.0, 2.0, 1.0)
    assert pi_joint(p, 0.5).p == pi1d(2.0, 1.0, 0.5).p
    assert pi_joint(p, 1.0).p == pi1d(2.0, 1.0, 1.0).p


def test_degenerate_params_use_binding_boundary():
    p = normalized(1.0, 1.0, 2.0, 2.5)
    assert p.degenerate
    assert pi_joint(p, 3.0).p == pi1d(1.0, 2.5, 3.0).p


@given(pos_small, pos_small, drift2, st.floats(min_value=0.1, max_value=2.0))
def test_branch_continuity_at_intersection(a1, gap_a, c2, gap_c):
    p, ts = _joint_setup(a1, gap_a, c2, gap_c)
    below = pi_joint(p, ts).p
    above = pi_joint(p, ts * (1.0 + 1e-9)).p
    assert abs(below - above) <= 1e-6


@given(pos_small, pos_small, drift2, st.floats(min_value=0.1, max_value=2.0),
       st.floats(min_value=1.05, max_value=8.0))
def test_representation_identity(a1, gap_a, c2, gap_c, stretch):
    p, ts = _joint_setup(a1, gap_a, c2, gap_c)
    T = ts * stretch
    lhs = pi_joint(p, T).p
    rhs = pi1d(p.a1, p.c1, T).p + pi1d(p.a2, p.c2, T).p - 1.0 + boundary_no_cross(p, T)
    assert abs(lhs - rhs) <= 1e-12


@given(pos_small, pos_small, drift2, st.floats(min_value=0.1, max_value=2.0),
       st.floats(min_value=0.2, max_value=6.0))
def test_frechet_envelope(a1, gap_a, c2, gap_c, T):
    p, _ = _joint_setup(a1, gap_a, c2, gap_c)
    joint = pi_joint(p, T).p
    p1 = pi1d(p.a1, p.c1, T).p
    p2 = pi1d(p.a2, p.c2, T).p
    assert joint <= min(p1, p2) + 1e-12
    assert joint >= max(0.0, p1 + p2 - 1.0) - 1e-12


def test_monotone_in_horizon_with_infinite_limit():
    p = normalized(1.0, 2.0, 2.0, 1.0)
    values = [pi_joint(p, T).p for T in (0.5, 1.0, 2.0, 4.0, 8.0, 30.0)]
    assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))
    assert values[-1] <= pi_infinite(p).p + 1e-15
    assert pi_joint(p, 300.0).p == pytest.approx(pi_infinite(p).p, abs=1e-12)


def test_pi_infinite_frozen_branches():
    assert pi_infinite(normalized(1.0, 2.0, 2.0, 1.0)).p == pytest.approx(
        0.007367718984796877, rel=1e-14)
    assert pi_infinite(normalized(0.5, 3.0, 1.5, 0.2)).p == pytest.approx(
        0.09916391055720264, rel=1e-14)
    # flatter drift nonpositive: its boundary is crossed almost surely
    assert pi_infinite(normalized(1.0, 2.0, 2.0, -0.5)).p == pytest.approx(
        math.exp(-4.0), rel=1e-15)
    assert pi_infinite(normalized(1.0, 2.0, -0.1, -0.5)).p == 1.0
    # one binding boundary left
    assert pi_infinite(normalized(2.0, 1.0, 1.0, 1.0)).p == pytest.approx(
        math.exp(-4.0), rel=1e-15)
    assert pi_infinite(normalized(2.0, 1.0, 0.0, 0.0)).p == 1.0


def test_boundary_no_cross_domain_and_monotonicity():
    p = normalized(1.0, 2.0, 2.0, 1.0)
    assert boundary_no_cross(p, 3.0) == pytest.approx(0.9738188319107097, rel=1e-13)
    assert boundary_no_cross(p, 1.5) >= boundary_no_cross(p, 3.0)
    with pytest.raises(ValidationError):
        boundary_no_cross(p, 1.0)  # needs the intersection before the horizon
    with pytest.raises(ValidationError):
        boundary_no_cross(normalized(1.0, 3.0, 1.0, 1.0), 3.0)


def test_bridge_no_cross_closed_form():
    assert bridge_no_cross(1.0, 0.3, 0.8) == pytest.approx(0.5506710358827784, rel=1e-15)
    assert bridge_no_cross(2.0, -1.0, 0.0) == 0.0
    assert bridge_no_cross(1.0, 0.8, 0.8) == 0.0
    # staying below a higher level is more likely
    levels = [bridge_no_cross(1.0, 0.3, b) for b in (0.4, 0.8, 1.5, 3.0)]
    assert all(x <= y for x, y in zip(levels, levels[1:]))
    with pytest.raises(ValidationError):
        bridge_no_cross(0.0, 0.3, 0.8)
    with pytest.raises(ValidationError):
        bridge_no_cross(1.0, 0.9, 0.8)
    with pytest.raises(ValidationError):
        bridge_no_cross(1.0, -0.1, -0.05)


@given(pos_small, pos_small, drift2, st.floats(min_value=0.1, max_value=2.0),
       st.floats(min_value=0.2, max_value=6.0))
def test_log_matches_linear_in_moderate_range(a1, gap_a, c2, gap_c, T):
    p, _ = _joint_setup(a1, gap_a, c2, gap_c)
    r = pi_joint(p, T)
    if r.p > 1e-250:
        assert abs(log_pi_joint(p, T).log_p - math.log(r.p)) <= 1e-8


def test_log_pi_joint_deep_tail_frozen():
    # thresholds and drifts scaled by sqrt(17): far below linear underflow noise
    s = math.sqrt(17.0)
    p = normalized(s, 2.0 * s, 2.0 * s, s)
    assert log_pi_joint(p, 3.0).log_p == pytest.approx(-77.91253988067369, abs=1e-9)


def test_log_pi_joint_dim_reduced_and_degenerate():
    p = normalized(1.0, 2.0, 2.0, 1.0)
    assert log_pi_joint(p, 0.5).log_p == pytest.approx(
        math.log(pi_joint(p, 0.5).p), abs=1e-12)
    q = normalized(1.0, 1.0, 2.0, 2.5)
    assert log_pi_joint(q, 3.0).log_p == pytest.approx(
        math.log(pi_joint(q, 3.0).p), abs=1e-12)


def test_assemble_cancellation_guards():
    # equal positive and negative mass is a total loss of significance
    with pytest.raises(CancellationError):
        _assemble([(1, 0.0), (-1, 0.0)], {})
    with pytest.raises(CancellationError):
        _assemble([(-1, 0.0)], {})
    # residual below the tolerance fraction of the largest term
    with pytest.raises(CancellationError):
        _assemble([(1, 0.0), (-1, -1e-12)], {})
    # clean sums survive, constants fold in exactly
    assert _assemble([(1, math.log(0.25))], {}) == pytest.approx(math.log(0.25))
    assert _assemble([], {-2.0: 3}) == pytest.approx(-2.0 + math.log(3.0))
    # a zero net coefficient leaves no residue at all
    assert _assemble([(1, math.log(0.5))], {0.0: 0}) == pytest.approx(math.log(0.5))


def test_clamp_tolerances():
    assert _clamp_unit(-5e-11, "test") == 0.0
    assert _clamp_unit(1.0 + 5e-11, "test") == 1.0
    assert _clamp_unit(0.3, "test") == 0.3
    with pytest.raises(NumericalIntegrityError):
        _clamp_unit(-1e-9, "test")
    with pytest.raises(NumericalIntegrityError):
        _clamp_unit(1.0 + 1e-9, "test")


def test_pi_joint_validation():
    p = normalized(1.0, 2.0, 2.0, 1.0)
    with pytest.raises(ValidationError):
        pi_joint(p, 0.0)
    with pytest.raises(ValidationError):
        pi_joint(p, math.inf)
    with pytest.raises(ValidationError):
        log_pi_joint(p, -1.0)
