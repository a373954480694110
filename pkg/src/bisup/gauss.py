"""Univariate and bivariate normal kernels.

Linear-domain functions target absolute accuracy near machine precision;
the log-domain companions stay meaningful thousands of log-units below
the underflow threshold. Everything here is a pure function of its
arguments and safe to call from any thread.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import log_ndtr

from .errors import NumericalIntegrityError, ValidationError

_SQRT2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# Correlation beyond this is treated as perfectly (anti)correlated.
RHO_DEGENERATE = 1e-12


@dataclass(frozen=True)
class LogProb:
    """A probability carried in log domain.

    p is the linear value, or None when exp(log_p) underflows double
    precision.
    """

    log_p: float
    p: float | None

    @staticmethod
    def from_log(log_p: float) -> "LogProb":
        if log_p > 1e-12:
            raise NumericalIntegrityError(
                f"log-probability {log_p} is positive beyond tolerance")
        log_p = min(log_p, 0.0)
        p = math.exp(log_p)
        if p == 0.0 and math.isfinite(log_p):
            return LogProb(log_p, None)
        return LogProb(log_p, p)


def _require_finite(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError(name, f"must be finite, got {x}")
    return x


def norm_pdf(x: float) -> float:
    """Standard normal density."""
    x = _require_finite("x", x)
    return math.exp(-0.5 * x * x) / _SQRT_2PI


def norm_sf(x: float) -> float:
    """Upper tail P(N > x) via the complementary error function."""
    x = float(x)
    if math.isnan(x):
        raise ValidationError("x", "must not be NaN")
    return 0.5 * math.erfc(x / _SQRT2)


def log_norm_sf(x: float) -> LogProb:
    """log P(N > x), accurate arbitrarily deep into the tail."""
    x = _require_finite("x", x)
    return LogProb.from_log(float(log_ndtr(-x)))


def norm_sf_asym(x: float) -> float:
    """Leading Mills-ratio tail term, phi(x)/x."""
    x = _require_finite("x", x)
    if x <= 0.0:
        raise ValidationError("x", "asymptotic tail term requires x > 0")
    return math.exp(-0.5 * x * x) / (x * _SQRT_2PI)


def _log_norm_sf_arr(x: np.ndarray) -> np.ndarray:
    return log_ndtr(-x)


# Gauss-Legendre nodes/weights on [-1, 1], banded by |rho| as in the
# classical bivariate-normal quadrature scheme. Stored pre-reflected:
# points are 1 -/+ x_k, so each row maps a node of the half tables
# onto both halves of the interval.
def _reflected(weights, points):
    w = tuple(weights) + tuple(weights)
    x = tuple(1.0 - p for p in points) + tuple(1.0 + p for p in points)
    return w, x

_GL6 = _reflected(
    (0.1713244923791705, 0.3607615730481384, 0.4679139345726904),
    (0.9324695142031522, 0.6612093864662647, 0.2386191860831970))
_GL12 = _reflected(
    (0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
     0.2031674267230659, 0.2334925365383547, 0.2491470458134029),
    (0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
     0.5873179542866171, 0.3678314989981802, 0.1252334085114692))
_GL20 = _reflected(
    (0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
     0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
     0.1316886384491766, 0.1420961093183821, 0.1491729864726037,
     0.1527533871307259),
    (0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
     0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
     0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
     0.07652652113349733))


def _ncdf(x: float) -> float:
    return 0.5 * math.erfc(-x / _SQRT2)


def _bvnu(h: float, k: float, r: float) -> float:
    """P(X > h, Y > k) for standard bivariate normal with correlation r.

    Gauss-Legendre quadrature over the correlation-integral
    representation for moderate |r|; for |r| >= 0.925 the standard
    change of variables that removes the near-singularity, with the
    analytic expansion of the transformed integrand's smooth part.
    """
    if h == math.inf or k == math.inf:
        return 0.0
    if h == -math.inf:
        return 1.0 if k == -math.inf else _ncdf(-k)
    if k == -math.inf:
        return _ncdf(-h)
    if r == 0.0:
        return _ncdf(-h) * _ncdf(-k)
    if h > k:
        # canonical order makes exchange symmetry exact
        h, k = k, h

    tp = 2.0 * math.pi
    hk = h * k
    bvn = 0.0
    ar = abs(r)
    if ar < 0.3:
        w, x = _GL6
    elif ar < 0.75:
        w, x = _GL12
    else:
        w, x = _GL20

    if ar < 0.925:
        hs = 0.5 * (h * h + k * k)
        asr = 0.5 * math.asin(r)
        for i in range(len(x)):
            sn = math.sin(asr * x[i])
            bvn += w[i] * math.exp((sn * hk - hs) / (1.0 - sn * sn))
        bvn = bvn * asr / tp + _ncdf(-h) * _ncdf(-k)
    else:
        if r < 0.0:
            k = -k
            hk = -hk
        if ar < 1.0:
            asq = (1.0 - r) * (1.0 + r)
            a = math.sqrt(asq)
            bs = (h - k) ** 2
            c = (4.0 - hk) / 8.0
            d = (12.0 - hk) / 16.0
            asr = -0.5 * (bs / asq + hk)
            if asr > -100.0:
                bvn = a * math.exp(asr) * (
                    1.0 - c * (bs - asq) * (1.0 - d * bs / 5.0) / 3.0
                    + c * d * asq * asq / 5.0)
            if hk > -100.0:
                b = math.sqrt(bs)
                bvn -= (math.exp(-0.5 * hk) * _SQRT_2PI * _ncdf(-b / a) * b
                        * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0))
            a *= 0.5
            for i in range(len(x)):
                xs = (a * x[i]) ** 2
                rs = math.sqrt(1.0 - xs)
                asr = -0.5 * (bs / xs + hk)
                if asr > -100.0:
                    sp = 1.0 + c * xs * (1.0 + d * xs)
                    ep = math.exp(-0.5 * hk * (1.0 - rs) / (1.0 + rs)) / rs
                    bvn += a * w[i] * math.exp(asr) * (ep - sp)
            bvn = -bvn / tp
        if r > 0.0:
            bvn += _ncdf(-max(h, k))
        else:
            bvn = -bvn
            if k > h:
                bvn += _ncdf(k) - _ncdf(h)
    return min(1.0, max(0.0, bvn))


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if math.isnan(rho) or abs(rho) > 1.0:
        raise ValidationError("rho", f"correlation must lie in [-1, 1], got {rho}")
    return rho


def _coerce_limit(name: str, v: float) -> float:
    v = float(v)
    if math.isnan(v):
        raise ValidationError(name, "must not be NaN")
    return v


def bvn_cdf(rho: float, s: float, t: float) -> float:
    """P(X <= s, Y <= t) for standard bivariate normal with correlation rho.

    +-inf limits reduce to marginals; 1 - |rho| below RHO_DEGENERATE
    uses the exact perfectly-correlated closed forms.
    """
    rho = _check_rho(rho)
    s = _coerce_limit("s", s)
    t = _coerce_limit("t", t)
    if 1.0 - abs(rho) < RHO_DEGENERATE:
        if rho > 0.0:
            return _ncdf(min(s, t))
        return max(0.0, _ncdf(s) + _ncdf(t) - 1.0)
    # (-X, -Y) has the same correlation, so the lower quadrant is the
    # upper quadrant of the negated limits.
    return _bvnu(-s, -t, rho)


def bvn_sf(rho: float, s: float, t: float) -> float:
    """P(X > s, Y > t) for standard bivariate normal with correlation rho."""
    rho = _check_rho(rho)
    s = _coerce_limit("s", s)
    t = _coerce_limit("t", t)
    if 1.0 - abs(rho) < RHO_DEGENERATE:
        if rho > 0.0:
            return _ncdf(-max(s, t))
        return max(0.0, _ncdf(-s) - _ncdf(t))
    return _bvnu(s, t, rho)


# ---------------------------------------------------------------------------
# Deep-tail log-domain evaluation of the joint survival function.

_PANEL_NODES16 = np.polynomial.legendre.leggauss(16)
_PANEL_NODES24 = np.polynomial.legendre.leggauss(24)
_WINDOW = 40.0
_LOG_REL_TOL = 1e-10
_MAX_REFINEMENTS = 200


def _panel_log_integrals(edges_lo, edges_hi, g, nodes):
    """Log of the Gauss-Legendre estimate of each panel's integral."""
    x, w = nodes
    half = 0.5 * (edges_hi - edges_lo)
    mid = 0.5 * (edges_hi + edges_lo)
    pts = mid[:, None] + half[:, None] * x[None, :]
    logf = g(pts) + np.log(w)[None, :] + np.log(half)[:, None]
    m = logf.max(axis=1)
    with np.errstate(invalid="ignore"):
        out = m + np.log(np.exp(logf - m[:, None]).sum(axis=1))
    return np.where(np.isfinite(m), out, -np.inf)


def _logsumexp(a: np.ndarray) -> float:
    m = np.max(a)
    if not np.isfinite(m):
        return float(m)
    return float(m + np.log(np.exp(a - m).sum()))


def log_bvn_sf(rho: float, s: float, t: float) -> LogProb:
    """log P(X > s, Y > t), stable thousands of log-units below underflow.

    Computed from the conditional representation

        Psi_2(rho; s, t) = integral over x > max(s, t) of
                           phi(x) * Psi((min(s, t) - rho x) / sqrt(1 - rho^2))

    (the roles of s and t are symmetric, and integrating over the larger
    limit keeps the integrand mode inside the truncation window). The
    window [hi, hi + 40] is seeded with dyadic panels accumulating at the
    left edge, then panels are bisected adaptively until paired 16/24-node
    estimates agree; everything is accumulated with log-sum-exp.
    """
    rho = _check_rho(rho)
    if 1.0 - abs(rho) < RHO_DEGENERATE:
        raise ValidationError(
            "rho", "degenerate correlation; use the closed forms via bvn_sf")
    s = _require_finite("s", s)
    t = _require_finite("t", t)
    hi, lo = (s, t) if s >= t else (t, s)
    q = math.sqrt((1.0 - rho) * (1.0 + rho))

    def g(x):
        return -0.5 * x * x - _LOG_SQRT_2PI + _log_norm_sf_arr((lo - rho * x) / q)

    # Dyadic seed: panel edges pile up geometrically at the left endpoint,
    # where the integrand can decay on scales as small as 1 - |rho|.
    offsets = _WINDOW * 2.0 ** (-np.arange(60, -1, -1, dtype=float))
    edges = np.unique(np.concatenate([[hi], hi + offsets]))
    lo_e, hi_e = edges[:-1], edges[1:]

    for _ in range(_MAX_REFINEMENTS):
        v16 = _panel_log_integrals(lo_e, hi_e, g, _PANEL_NODES16)
        v24 = _panel_log_integrals(lo_e, hi_e, g, _PANEL_NODES24)
        total = _logsumexp(v24)
        if total == -math.inf:
            return LogProb(-math.inf, 0.0)
        # Per-panel error: |I16 - I24| in linear terms, carried as a log.
        with np.errstate(divide="ignore", invalid="ignore"):
            diff = np.where(
                v16 == v24, -np.inf,
                np.maximum(v16, v24) + np.log1p(-np.exp(-np.abs(v16 - v24))))
        err_total = _logsumexp(diff)
        if err_total <= total + math.log(_LOG_REL_TOL):
            return LogProb.from_log(min(total, 0.0))
        # Bisect panels above their share of the error budget, preferring
        # those within a few orders of magnitude of the worst offender.
        budget = total + math.log(_LOG_REL_TOL) - math.log(diff.size)
        bad = diff >= max(budget, diff.max() - 35.0)
        mids = 0.5 * (lo_e + hi_e)
        bad &= (mids > lo_e) & (mids < hi_e)
        if not bad.any():
            return LogProb.from_log(min(total, 0.0))
        mids = mids[bad]
        new_lo = np.concatenate([lo_e[~bad], lo_e[bad], mids])
        new_hi = np.concatenate([hi_e[~bad], mids, hi_e[bad]])
        order = np.argsort(new_lo)
        lo_e, hi_e = new_lo[order], new_hi[order]

    raise NumericalIntegrityError(
        f"log-domain quadrature did not converge for rho={rho}, s={s}, t={t}")
