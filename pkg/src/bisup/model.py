"""Parameter validation, unit-volatility normalization, and critical times.

The joint crossing problem for sup(sigma_i B(t) - c_i t) > a_i is rescaled
to unit volatility, ordered so the first boundary is the steeper one, and
classified as degenerate when one boundary dominates the other outright.
Every downstream branch decision rests on the times computed here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

# Relative tolerance for tie detection among critical times. The asymptotic
# equality cases sit on measure-zero boundaries and must be reachable.
REL_TOL = 1e-12
_ABS_TOL = 1e-15


def times_close(x: float, y: float) -> bool:
    """True when x and y are equal up to the module tie tolerance."""
    return abs(x - y) <= max(REL_TOL * max(abs(x), abs(y)), _ABS_TOL)


def _require_positive(field: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0.0):
        raise ValidationError(field, f"must be finite and > 0, got {value!r}")


def _require_finite(field: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value)):
        raise ValidationError(field, f"must be finite, got {value!r}")


@dataclass(frozen=True)
class ModelParams:
    """Raw problem data: thresholds a_i > 0, drifts c_i, volatilities sigma_i > 0."""

    a1: float
    a2: float
    c1: float
    c2: float
    sigma1: float = 1.0
    sigma2: float = 1.0

    def __post_init__(self) -> None:
        _require_positive("a1", self.a1)
        _require_positive("a2", self.a2)
        _require_finite("c1", self.c1)
        _require_finite("c2", self.c2)
        _require_positive("sigma1", self.sigma1)
        _require_positive("sigma2", self.sigma2)


@dataclass(frozen=True)
class NormalizedParams:
    """Unit-volatility parameters, ordered so c1 > c2 and a1 < a2.

    When the boundaries never intersect on (0, inf) the joint problem
    collapses to one boundary; that case carries degenerate=True and the
    binding (a, c) pair instead of the ordering invariants.
    """

    a1: float
    a2: float
    c1: float
    c2: float
    degenerate: bool = False
    binding: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        _require_positive("a1", self.a1)
        _require_positive("a2", self.a2)
        _require_finite("c1", self.c1)
        _require_finite("c2", self.c2)
        if self.degenerate:
            if self.binding is None:
                raise ValidationError("binding", "degenerate parameters need a binding pair")
            _require_positive("binding", self.binding[0])
            _require_finite("binding", self.binding[1])
        else:
            if self.binding is not None:
                raise ValidationError("binding", "only degenerate parameters carry a binding pair")
            if not self.c1 > self.c2:
                raise ValidationError("c1", f"non-degenerate form needs c1 > c2, got {self.c1!r} <= {self.c2!r}")
            if not self.a1 < self.a2:
                raise ValidationError("a1", f"non-degenerate form needs a1 < a2, got {self.a1!r} >= {self.a2!r}")


@dataclass(frozen=True)
class CriticalTimes:
    """Times governing branch and regime selection.

    t_star: intersection of the two boundary lines, always > 0.
    t1, t2: a_i/c_i, the variance-maximizing crossing times; None unless
        the respective drift is positive.
    t_tilde: (a2 - 2 a1)/c2, any sign; None unless c2 > 0.
    """

    t_star: float
    t1: float | None
    t2: float | None
    t_tilde: float | None


def normalize(p: ModelParams) -> NormalizedParams:
    """Rescale to unit volatility, order components, detect degeneracy."""
    a_first, c_first = p.a1 / p.sigma1, p.c1 / p.sigma1
    a_second, c_second = p.a2 / p.sigma2, p.c2 / p.sigma2

    if c_first == c_second:
        # parallel boundaries: the higher one binds
        a_bind = max(a_first, a_second)
        return NormalizedParams(
            a1=min(a_first, a_second), a2=max(a_first, a_second),
            c1=c_first, c2=c_second,
            degenerate=True, binding=(a_bind, c_first),
        )
    if c_first < c_second:
        a_first, a_second = a_second, a_first
        c_first, c_second = c_second, c_first
    if a_first >= a_second:
        # steeper boundary starts no lower: it stays above the other for all t > 0
        return NormalizedParams(
            a1=a_first, a2=a_second, c1=c_first, c2=c_second,
            degenerate=True, binding=(a_first, c_first),
        )
    return NormalizedParams(a1=a_first, a2=a_second, c1=c_first, c2=c_second)


def normalized(a1: float, a2: float, c1: float, c2: float) -> NormalizedParams:
    """Shorthand for normalize(ModelParams(...)) at unit volatility."""
    return normalize(ModelParams(a1=a1, a2=a2, c1=c1, c2=c2))


def critical_times(p: NormalizedParams) -> CriticalTimes:
    if p.degenerate:
        raise ValidationError("params", "critical times are defined for non-degenerate parameters only")
    t_star = (p.a2 - p.a1) / (p.c1 - p.c2)
    t1 = p.a1 / p.c1 if p.c1 > 0 else None
    t2 = p.a2 / p.c2 if p.c2 > 0 else None
    t_tilde = (p.a2 - 2.0 * p.a1) / p.c2 if p.c2 > 0 else None
    return CriticalTimes(t_star=t_star, t1=t1, t2=t2, t_tilde=t_tilde)
