"""Exact joint tail probabilities for two running suprema of drifted Brownian motion.

pi_joint evaluates the closed finite-horizon formula: when the two boundary
lines intersect at t_star >= T one boundary dominates and the problem is
one-dimensional; otherwise the probability is a five-term combination of
normal and bivariate-normal tails. pi_infinite is the T -> inf limit.
log_pi_joint re-evaluates the same five terms in the log domain so that
many-source scalings (probabilities down to e^-2000) keep full relative
accuracy; boundary_no_cross and bridge_no_cross expose the identities the
derivation rests on, which the tests use as consistency surfaces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CancellationError, NumericalIntegrityError, ValidationError
from .gauss import LogProb, RHO_DEGENERATE, bvn_cdf, bvn_sf, log_bvn_sf, log_norm_sf, norm_sf
from .model import NormalizedParams

# Rounding excursions beyond [0,1] larger than this indicate a bug, not noise.
_CLAMP_TOL = 1e-10
# Signed log-sum-exp result smaller than this fraction of the largest term
# means the formula lost all significant digits.
_CANCEL_TOL = 1e-9

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class ProbabilityResult:
    """Probability with its log-domain value and the branch that produced it.

    terms holds the five summands of the full-branch formula (debug and
    identity-test surface, not a stable contract).
    """

    p: float
    log_p: float
    branch: str
    terms: tuple[float, ...] | None = None


def _require_time(field: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0.0):
        raise ValidationError(field, f"must be finite and > 0, got {value!r}")


def _clamp_unit(x: float, where: str) -> float:
    if x < 0.0:
        if x < -_CLAMP_TOL:
            raise NumericalIntegrityError(f"{where}: value {x!r} below 0 beyond tolerance")
        return 0.0
    if x > 1.0:
        if x > 1.0 + _CLAMP_TOL:
            raise NumericalIntegrityError(f"{where}: value {x!r} above 1 beyond tolerance")
        return 1.0
    return x


def _logaddexp(x: float, y: float) -> float:
    if x == _NEG_INF:
        return y
    if y == _NEG_INF:
        return x
    hi, lo = (x, y) if x >= y else (y, x)
    return hi + math.log1p(math.exp(lo - hi))


def _scaled_term(log_weight: float, factor: float) -> float:
    """exp(log_weight) * factor without overflow when log_weight is large."""
    if log_weight <= 700.0:
        return math.exp(log_weight) * factor
    if factor == 0.0:
        return 0.0
    return math.copysign(math.exp(log_weight + math.log(abs(factor))), factor)


def _log_pi1d(a: float, c: float, T: float) -> float:
    sT = math.sqrt(T)
    lo = _logaddexp(
        log_norm_sf((a + c * T) / sT).log_p,
        -2.0 * a * c + log_norm_sf((a - c * T) / sT).log_p,
    )
    return min(lo, 0.0)


def pi1d(a: float, c: float, T: float) -> ProbabilityResult:
    """One-boundary crossing probability over [0, T].

    Psi((a + cT)/sqrt(T)) + exp(-2ac) Psi((a - cT)/sqrt(T)).
    """
    _require_time("a", a)
    if not (isinstance(c, (int, float)) and math.isfinite(c)):
        raise ValidationError("c", f"must be finite, got {c!r}")
    _require_time("T", T)
    sT = math.sqrt(T)
    p = norm_sf((a + c * T) / sT) + _scaled_term(
        -2.0 * a * c + log_norm_sf((a - c * T) / sT).log_p, 1.0
    )
    return ProbabilityResult(
        p=_clamp_unit(p, "pi1d"),
        log_p=_log_pi1d(a, c, T),
        branch="dim-reduced",
    )


def _t_star(p: NormalizedParams) -> float:
    return (p.a2 - p.a1) / (p.c1 - p.c2)


def _full_terms(p: NormalizedParams, T: float) -> tuple[float, float, float, float, float]:
    """The five summands of the intersecting-boundaries formula, as printed."""
    ts = _t_star(p)
    a1, a2, c1, c2 = p.a1, p.a2, p.c1, p.c2
    st, sT = math.sqrt(ts), math.sqrt(T)
    r = math.sqrt(ts / T)
    gamma = a1 * (c1 - 2.0 * c2) + a2 * c2

    s0 = norm_sf((a1 + c1 * T) / sT)
    s1 = -bvn_sf(-r, (a1 + c1 * ts) / st, -(a2 + c2 * T) / sT)
    s2 = _scaled_term(
        -2.0 * a1 * c1,
        norm_sf((a1 - c1 * T) / sT)
        - bvn_sf(r, (a1 - c1 * ts) / st, ((2.0 * a1 - a2) - c2 * T) / sT),
    )
    s3 = _scaled_term(
        -2.0 * a2 * c2,
        bvn_sf(r, (a2 - c2 * ts) / st, (a2 - c2 * T) / sT),
    )
    s4 = _scaled_term(
        -2.0 * gamma,
        bvn_sf(-r, ((2.0 * a1 - a2) + c2 * ts) / st, ((a2 - 2.0 * a1) - c2 * T) / sT),
    )
    return s0, s1, s2, s3, s4


def pi_joint(p: NormalizedParams, T: float) -> ProbabilityResult:
    """Joint crossing probability of both boundaries over [0, T]."""
    _require_time("T", T)
    if p.degenerate:
        return pi1d(p.binding[0], p.binding[1], T)
    if _t_star(p) >= T:
        return pi1d(p.a2, p.c2, T)
    terms = _full_terms(p, T)
    total = _clamp_unit(math.fsum(terms), "pi_joint")
    return ProbabilityResult(
        p=total,
        log_p=math.log(total) if total > 0.0 else _NEG_INF,
        branch="full",
        terms=terms,
    )


def pi_infinite(p: NormalizedParams) -> ProbabilityResult:
    """Limit of pi_joint as T -> inf.

    With c2 <= 0 the flatter boundary is crossed almost surely and the
    probability reduces to the one-boundary limit exp(-2 a1 c1) (or 1 when
    c1 <= 0 as well). Otherwise the four-term closed form in t_star applies.
    """
    if p.degenerate:
        a, c = p.binding
        log_p = -2.0 * a * c if c > 0 else 0.0
        return ProbabilityResult(p=math.exp(log_p), log_p=log_p, branch="infinite-horizon")
    if p.c2 <= 0:
        log_p = -2.0 * p.a1 * p.c1 if p.c1 > 0 else 0.0
        return ProbabilityResult(p=math.exp(log_p), log_p=log_p, branch="infinite-horizon")
    ts = _t_star(p)
    st = math.sqrt(ts)
    a1, c1, c2 = p.a1, p.c1, p.c2
    gamma = a1 * (c1 - 2.0 * c2) + p.a2 * c2
    val = (
        _scaled_term(-2.0 * gamma, 1.0 - norm_sf(((c1 - 2.0 * c2) * ts - a1) / st))
        + _scaled_term(-2.0 * a1 * c1, norm_sf((c1 * ts - a1) / st))
        + _scaled_term(-2.0 * p.a2 * c2, norm_sf(((c1 - 2.0 * c2) * ts + a1) / st))
        - norm_sf((c1 * ts + a1) / st)
    )
    val = _clamp_unit(val, "pi_infinite")
    return ProbabilityResult(
        p=val,
        log_p=math.log(val) if val > 0.0 else _NEG_INF,
        branch="infinite-horizon",
    )


def bridge_no_cross(L: float, y: float, b: float) -> float:
    """P(a Brownian bridge over [0, L] from 0 to y stays below level b).

    Valid for b >= 0 and b >= y; callers must treat other inputs as certain
    crossing rather than passing them here.
    """
    _require_time("L", L)
    if not (isinstance(b, (int, float)) and math.isfinite(b) and b >= 0.0):
        raise ValidationError("b", f"must be finite and >= 0, got {b!r}")
    if not (isinstance(y, (int, float)) and math.isfinite(y) and b - y >= 0.0):
        raise ValidationError("y", f"needs b - y >= 0, got b={b!r}, y={y!r}")
    return -math.expm1(-2.0 * b * (b - y) / L)


def boundary_no_cross(p: NormalizedParams, T: float) -> float:
    """P(the path stays below both boundaries on [0, T]), for t_star < T.

    Evaluates the four bivariate-normal terms of the derivation directly;
    tests tie it to pi_joint through the inclusion-exclusion identity
    pi_joint = pi1d(a1, c1, T) + pi1d(a2, c2, T) - 1 + boundary_no_cross.
    """
    _require_time("T", T)
    if p.degenerate:
        raise ValidationError("params", "requires non-degenerate parameters")
    ts = _t_star(p)
    if ts >= T:
        raise ValidationError("T", f"requires t_star < T, got t_star={ts!r}, T={T!r}")
    a1, a2, c1, c2 = p.a1, p.a2, p.c1, p.c2
    st, sT = math.sqrt(ts), math.sqrt(T)
    r = math.sqrt(ts / T)
    gamma = a1 * (c1 - 2.0 * c2) + a2 * c2
    i1 = bvn_cdf(r, (a1 + c1 * ts) / st, (a2 + c2 * T) / sT)
    i2 = _scaled_term(
        -2.0 * a1 * c1,
        bvn_cdf(r, (-a1 + c1 * ts) / st, ((a2 - 2.0 * a1) + c2 * T) / sT),
    )
    i3 = _scaled_term(
        -2.0 * a2 * c2,
        bvn_cdf(-r, (a1 + (c1 - 2.0 * c2) * ts) / st, (-a2 + c2 * T) / sT),
    )
    i4 = _scaled_term(
        -2.0 * gamma,
        bvn_cdf(-r, (-a1 + (c1 - 2.0 * c2) * ts) / st, ((2.0 * a1 - a2) + c2 * T) / sT),
    )
    return _clamp_unit(math.fsum((i1, -i2, -i3, i4)), "boundary_no_cross")


# --- log-domain evaluation -------------------------------------------------
#
# Each summand is expanded into atoms sign * exp(K) * F where K is one of the
# exact prefactor exponents (0, -2 a1 c1, -2 a2 c2, -2 gamma) and F is either
# the constant 1 or a tail value Psi / Psi_2 with nonnegative arguments. The
# expansion matters: a tail with a large negative argument is 1 - epsilon,
# and storing log(1 - epsilon) next to |K| >> 1 rounds epsilon away entirely,
# silently deleting the exponentially small piece that can carry the answer.
# Expanded constants cancel exactly through integer bookkeeping instead.

_Atom = tuple[int, float]  # (sign, log magnitude)


def _expand_psi(atoms: list[_Atom], consts: dict[float, int], sign: int, K: float, x: float) -> None:
    if x >= 0.0:
        atoms.append((sign, K + log_norm_sf(x).log_p))
    else:
        consts[K] = consts.get(K, 0) + sign
        atoms.append((-sign, K + log_norm_sf(-x).log_p))


def _expand_psi2(
    atoms: list[_Atom], consts: dict[float, int], sign: int, K: float,
    rho: float, s: float, t: float,
) -> None:
    if 1.0 - abs(rho) < RHO_DEGENERATE:
        if rho > 0:
            _expand_psi(atoms, consts, sign, K, max(s, t))
        elif norm_sf(s) + norm_sf(t) > 1.0:
            # perfect negative correlation: Psi(s) + Psi(t) - 1, else zero
            _expand_psi(atoms, consts, sign, K, s)
            _expand_psi(atoms, consts, sign, K, t)
            consts[K] = consts.get(K, 0) - sign
        return
    if s >= 0.0 and t >= 0.0:
        atoms.append((sign, K + log_bvn_sf(rho, s, t).log_p))
    elif s < 0.0 and t < 0.0:
        consts[K] = consts.get(K, 0) + sign
        atoms.append((-sign, K + log_norm_sf(-s).log_p))
        atoms.append((-sign, K + log_norm_sf(-t).log_p))
        _expand_psi2(atoms, consts, sign, K, rho, -s, -t)
    elif t < 0.0:
        atoms.append((sign, K + log_norm_sf(s).log_p))
        _expand_psi2(atoms, consts, -sign, K, -rho, s, -t)
    else:
        atoms.append((sign, K + log_norm_sf(t).log_p))
        _expand_psi2(atoms, consts, -sign, K, -rho, -s, t)


def _assemble(atoms: list[_Atom], consts: dict[float, int]) -> float:
    for K, coeff in consts.items():
        if coeff != 0:
            atoms.append((1 if coeff > 0 else -1, K + math.log(abs(coeff))))
    largest = max((lm for _, lm in atoms), default=_NEG_INF)
    pos = _NEG_INF
    neg = _NEG_INF
    for sign, lm in atoms:
        if sign > 0:
            pos = _logaddexp(pos, lm)
        else:
            neg = _logaddexp(neg, lm)
    if pos == _NEG_INF:
        raise CancellationError("log-domain sum has no positive mass")
    if neg == _NEG_INF:
        total = pos
    else:
        if neg >= pos:
            raise CancellationError(
                f"log-domain sum cancelled to a non-positive value (pos={pos!r}, neg={neg!r})"
            )
        total = pos + math.log(-math.expm1(neg - pos))
    if total < largest + math.log(_CANCEL_TOL):
        raise CancellationError(
            f"log-domain sum lost significance (result={total!r}, largest term={largest!r})"
        )
    return total


def log_pi_joint(p: NormalizedParams, T: float) -> LogProb:
    """pi_joint in the log domain, stable through deep many-source tails."""
    _require_time("T", T)
    if p.degenerate:
        return LogProb.from_log(_log_pi1d(p.binding[0], p.binding[1], T))
    ts = _t_star(p)
    if ts >= T:
        return LogProb.from_log(_log_pi1d(p.a2, p.c2, T))

    a1, a2, c1, c2 = p.a1, p.a2, p.c1, p.c2
    st, sT = math.sqrt(ts), math.sqrt(T)
    r = math.sqrt(ts / T)
    k1 = -2.0 * a1 * c1
    k2 = -2.0 * a2 * c2
    k3 = -2.0 * (a1 * (c1 - 2.0 * c2) + a2 * c2)

    atoms: list[_Atom] = []
    consts: dict[float, int] = {}
    _expand_psi(atoms, consts, +1, 0.0, (a1 + c1 * T) / sT)
    _expand_psi2(atoms, consts, -1, 0.0, -r, (a1 + c1 * ts) / st, -(a2 + c2 * T) / sT)
    _expand_psi(atoms, consts, +1, k1, (a1 - c1 * T) / sT)
    _expand_psi2(atoms, consts, -1, k1, r, (a1 - c1 * ts) / st, ((2.0 * a1 - a2) - c2 * T) / sT)
    _expand_psi2(atoms, consts, +1, k2, r, (a2 - c2 * ts) / st, (a2 - c2 * T) / sT)
    _expand_psi2(atoms, consts, +1, k3, -r, ((2.0 * a1 - a2) + c2 * ts) / st, ((a2 - 2.0 * a1) - c2 * T) / sT)
    return LogProb.from_log(_assemble(atoms, consts))
