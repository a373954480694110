"""Parameter validation, normalization, and critical-time computation."""
import math

import pytest
from hypothesis import given, strategies as st

from bisup import (
    CriticalTimes,
    ModelParams,
    NormalizedParams,
    ValidationError,
    critical_times,
    normalize,
    normalized,
    times_close,
)

pos = st.floats(min_value=1e-3, max_value=1e3)
drift = st.floats(min_value=-10.0, max_value=10.0)


def test_times_close_tolerance():
    assert times_close(1.0, 1.0 + 1e-13)
    assert not times_close(1.0, 1.0 + 1e-11)
    assert times_close(0.0, 1e-16)
    assert not times_close(0.0, 1e-14)
    assert times_close(1e6, 1e6 * (1.0 + 1e-13))


@pytest.mark.parametrize("kwargs", [
    {"a1": 0.0}, {"a1": -1.0}, {"a2": math.nan}, {"a2": math.inf},
    {"c1": math.nan}, {"c2": math.inf}, {"sigma1": 0.0}, {"sigma2": -2.0},
])
def test_model_params_rejects_bad_fields(kwargs):
    base = dict(a1=1.0, a2=2.0, c1=2.0, c2=1.0)
    base.update(kwargs)
    with pytest.raises(ValidationError):
        ModelParams(**base)


def test_normalize_orders_by_drift():
    p = normalized(2.0, 1.0, 1.0, 2.0)
    assert (p.a1, p.a2, p.c1, p.c2) == (1.0, 2.0, 2.0, 1.0)
    assert not p.degenerate


def test_normalize_rescales_by_volatility():
    p = normalize(ModelParams(1.0, 2.0, 2.0, 1.0, sigma1=2.0, sigma2=0.5))
    q = normalized(1.0 / 2.0, 2.0 / 0.5, 2.0 / 2.0, 1.0 / 0.5)
    assert (p.a1, p.a2, p.c1, p.c2) == (q.a1, q.a2, q.c1, q.c2)


def test_parallel_boundaries_are_degenerate():
    p = normalized(1.0, 3.0, 1.0, 1.0)
    assert p.degenerate
    assert p.binding == (3.0, 1.0)
    q = normalized(2.0, 2.0, -0.5, -0.5)
    assert q.degenerate and q.binding == (2.0, -0.5)


def test_dominant_boundary_is_degenerate():
    # steeper boundary starts above the flatter one: it binds alone
    p = normalized(2.0, 1.0, 3.0, 1.0)
    assert p.degenerate
    assert p.binding == (2.0, 3.0)
    q = normalized(1.0, 1.0, 2.0, 2.5)
    assert q.degenerate and q.binding == (1.0, 2.5)


def test_normalized_params_invariants_enforced():
    with pytest.raises(ValidationError):
        NormalizedParams(a1=1.0, a2=2.0, c1=1.0, c2=1.0)
    with pytest.raises(ValidationError):
        NormalizedParams(a1=2.0, a2=1.0, c1=2.0, c2=1.0)
    with pytest.raises(ValidationError):
        NormalizedParams(a1=1.0, a2=2.0, c1=2.0, c2=1.0, degenerate=True)
    with pytest.raises(ValidationError):
        NormalizedParams(a1=1.0, a2=2.0, c1=2.0, c2=1.0, binding=(1.0, 2.0))


def test_critical_times_reference_point():
    ct = critical_times(normalized(1.0, 2.0, 2.0, 1.0))
    assert ct == CriticalTimes(t_star=1.0, t1=0.5, t2=2.0, t_tilde=0.0)


def test_critical_times_nonpositive_drifts_give_none():
    ct = critical_times(normalized(1.0, 1.5, 3.0, -0.5))
    assert ct.t1 == pytest.approx(1.0 / 3.0, rel=1e-15)
    assert ct.t2 is None
    assert ct.t_tilde is None
    ct = critical_times(normalized(1.0, 2.0, -0.5, -1.5))
    assert ct.t1 is None and ct.t2 is None and ct.t_tilde is None
    assert ct.t_star == pytest.approx(1.0, rel=1e-15)


def test_critical_times_rejects_degenerate():
    with pytest.raises(ValidationError):
        critical_times(normalized(1.0, 3.0, 1.0, 1.0))


@given(pos, pos, drift, drift, pos, pos)
def test_normalize_invariants(a1, a2, c1, c2, s1, s2):
    p = normalize(ModelParams(a1, a2, c1, c2, s1, s2))
    if p.degenerate:
        assert p.binding is not None
        assert p.binding[0] in (pytest.approx(a1 / s1), pytest.approx(a2 / s2))
    else:
        assert p.c1 > p.c2
        assert p.a1 < p.a2
        ct = critical_times(p)
        assert ct.t_star > 0.0
        if ct.t1 is not None and ct.t2 is not None:
            # a1 < a2 with c1 > c2 forces the variance times apart
            assert ct.t1 < ct.t2
