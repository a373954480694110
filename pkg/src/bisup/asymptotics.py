"""Tail asymptotics: high-threshold limits, many-source regime forms, and
the bivariate-normal tail toolkit behind them.

The many-source probability psi_T(N) decays like prefactor * N^power *
exp(-rate * N) with the triple selected by the order of the critical times
t1, t2, t_tilde, t_star against the horizon; fourteen regimes arise, four of
them with an extra 1/sqrt(N). Ties snap to the exact-equality regimes, whose
prefactor is 1/2. bvn_tail_asym returns the leading form of
Psi_2(rho; alpha t, beta t) as t -> inf; some parameter ranges only admit
bounds, which are flagged and must not be read as equivalences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NumericalIntegrityError, ValidationError
from .gauss import LogProb, log_norm_sf
from .model import NormalizedParams, critical_times, times_close

_SQRT_2PI = math.sqrt(2.0 * math.pi)

REGIME_LABELS = (
    "T21-i", "T21-ii", "T21-iii",
    "T25-ia", "T25-ib", "T25-ic", "T25-ii",
    "T25-iiia", "T25-iiib", "T25-iiic", "T25-iiid", "T25-iiie",
    "T25-iv", "T25-v",
)

_POWERS = {"N": (0.0, -0.5), "t": (0.0, -1.0, -2.0)}


@dataclass(frozen=True)
class AsymptoticForm:
    """Leading-order form prefactor * x^power * exp(-rate * g(x)).

    var selects the convention: "N" means g(N) = N (many-source regimes),
    "t" means g(t) = t^2/2 (bivariate tail regimes).
    """

    prefactor: float
    power: float
    rate: float
    kind: str = "equivalence"
    var: str = "N"

    def __post_init__(self) -> None:
        if self.var not in _POWERS:
            raise ValidationError("var", f"must be one of {sorted(_POWERS)}, got {self.var!r}")
        if self.power not in _POWERS[self.var]:
            raise ValidationError("power", f"must be one of {_POWERS[self.var]}, got {self.power!r}")
        if self.kind not in ("equivalence", "upper-bound"):
            raise ValidationError("kind", f"unknown kind {self.kind!r}")
        if not (math.isfinite(self.rate) and self.rate > 0.0):
            raise NumericalIntegrityError(f"rate must evaluate > 0, got {self.rate!r}")
        if not (math.isfinite(self.prefactor) and self.prefactor > 0.0):
            raise NumericalIntegrityError(f"prefactor must evaluate > 0, got {self.prefactor!r}")


def eval_asym(form: AsymptoticForm, x: float) -> LogProb:
    """Evaluate an asymptotic form at the large parameter x, in log domain."""
    if not (isinstance(x, (int, float)) and math.isfinite(x) and x > 0.0):
        raise ValidationError("x", f"must be finite and > 0, got {x!r}")
    decay = x if form.var == "N" else 0.5 * x * x
    return LogProb.from_log(math.log(form.prefactor) + form.power * math.log(x) - form.rate * decay)


def high_threshold(a: float, c1: float, c2: float, T: float, b: float) -> LogProb:
    """Leading tail value of the joint probability at thresholds (a*b, b), b large.

    sqrt(2T/pi) * (1/b) * exp(-(b + c2 T)^2 / (2T)); the flatter boundary
    dominates, so the value carries no dependence on a or c1 beyond their
    admissibility (0 < a < 1, c1 > c2 > 0).
    """
    if not (isinstance(a, (int, float)) and 0.0 < a < 1.0):
        raise ValidationError("a", f"must lie in (0, 1), got {a!r}")
    if not (isinstance(c2, (int, float)) and math.isfinite(c2) and c2 > 0.0):
        raise ValidationError("c2", f"must be > 0, got {c2!r}")
    if not (isinstance(c1, (int, float)) and math.isfinite(c1) and c1 > c2):
        raise ValidationError("c1", f"must exceed c2, got c1={c1!r}, c2={c2!r}")
    if not (isinstance(T, (int, float)) and math.isfinite(T) and T > 0.0):
        raise ValidationError("T", f"must be finite and > 0, got {T!r}")
    if not (isinstance(b, (int, float)) and math.isfinite(b) and b > 0.0):
        raise ValidationError("b", f"must be finite and > 0, got {b!r}")
    u = b + c2 * T
    return LogProb.from_log(0.5 * math.log(2.0 * T / math.pi) - math.log(b) - u * u / (2.0 * T))


def _require_many_source(p: NormalizedParams, T: float) -> None:
    if p.degenerate:
        raise ValidationError("params", "many-source analysis needs non-degenerate parameters")
    if p.c2 <= 0.0:
        raise ValidationError("c2", f"many-source analysis needs c1 > c2 > 0, got c2={p.c2!r}")
    if not (isinstance(T, (int, float)) and math.isfinite(T) and T > 0.0):
        raise ValidationError("T", f"must be finite and > 0, got {T!r}")


def many_source_classify(p: NormalizedParams, T: float) -> str:
    """Name the decay regime from the order of t1, t2, t_tilde, t_star and T.

    Ties snap to the equality regimes within the model tie tolerance. The
    lattice is exhaustive: a1 < a2 and c1 > c2 force t1 < t2, so comparing
    t_star against t1 and then t2 covers every placement.
    """
    _require_many_source(p, T)
    ct = critical_times(p)
    ts, t1, t2, tt = ct.t_star, ct.t1, ct.t2, ct.t_tilde

    if ts >= T or times_close(ts, T):
        if times_close(t2, T):
            return "T21-ii"
        return "T21-i" if t2 > T else "T21-iii"

    if times_close(t1, ts):
        return "T25-ii"
    if ts < t1:
        if times_close(T, t1):
            return "T25-ib"
        return "T25-ia" if T < t1 else "T25-ic"
    if times_close(t2, ts):
        return "T25-iv"
    if ts > t2:
        return "T25-v"
    # t1 < t_star < t2: the full-dimensional window, split by t_tilde
    if times_close(T, tt):
        return "T25-iiib"
    if T < tt:
        return "T25-iiia"
    if times_close(tt, ts):
        return "T25-iiid"
    return "T25-iiic" if tt < ts else "T25-iiie"


def many_source_asym(p: NormalizedParams, T: float) -> AsymptoticForm:
    """The (prefactor, power, rate) triple of the classified regime."""
    label = many_source_classify(p, T)
    a1, a2, c1, c2 = p.a1, p.a2, p.c1, p.c2
    ts = critical_times(p).t_star
    gamma2 = 2.0 * (a1 * (c1 - 2.0 * c2) + a2 * c2)
    sT = math.sqrt(T)

    if label == "T21-i":
        pref = (sT / (a2 + c2 * T) + sT / (a2 - c2 * T)) / _SQRT_2PI
        return AsymptoticForm(pref, -0.5, (a2 + c2 * T) ** 2 / (2.0 * T))
    if label in ("T21-ii", "T25-iv"):
        return AsymptoticForm(0.5, 0.0, 2.0 * a2 * c2)
    if label in ("T21-iii", "T25-v"):
        return AsymptoticForm(1.0, 0.0, 2.0 * a2 * c2)
    if label == "T25-ia":
        pref = (sT / (a1 + c1 * T) + sT / (a1 - c1 * T)) / _SQRT_2PI
        return AsymptoticForm(pref, -0.5, (a1 + c1 * T) ** 2 / (2.0 * T))
    if label in ("T25-ib", "T25-ii"):
        return AsymptoticForm(0.5, 0.0, 2.0 * a1 * c1)
    if label == "T25-ic":
        return AsymptoticForm(1.0, 0.0, 2.0 * a1 * c1)
    if label == "T25-iiia":
        pref = (sT / ((a2 - 2.0 * a1) - c2 * T) - sT / ((2.0 * a1 - a2) - c2 * T)) / _SQRT_2PI
        rate = ((2.0 * a1 - a2 - c2 * T) ** 2 + 4.0 * a1 * c1 * T) / (2.0 * T)
        return AsymptoticForm(pref, -0.5, rate)
    if label in ("T25-iiib", "T25-iiid"):
        return AsymptoticForm(0.5, 0.0, gamma2)
    if label == "T25-iiie":
        return AsymptoticForm(1.0, 0.0, gamma2)
    # T25-iiic
    st = math.sqrt(ts)
    pref = (
        st / (a2 - c2 * ts)
        + st / ((2.0 * a1 - a2) + c2 * ts)
        - st / (a1 + c1 * ts)
        - st / (a1 - c1 * ts)
    ) / _SQRT_2PI
    return AsymptoticForm(pref, -0.5, (a1 + c1 * ts) ** 2 / (2.0 * ts))


@dataclass(frozen=True)
class BivariateTailResult:
    """Leading behavior of Psi_2(rho; alpha t, beta t) as t -> inf.

    form uses the t-convention (value = prefactor * t^power * e^{-rate t^2/2})
    and describes the asymptotic shape even for bound kinds; the log_upper /
    log_lower methods evaluate the actual finite-t bounds. alpha and beta are
    stored after normalization to the case conventions.
    """

    case: str
    kind: str  # equivalence | upper-bound | two-sided-bound
    form: AsymptoticForm
    rho: float
    alpha: float
    beta: float

    def log_value(self, t: float) -> float:
        """Log of the equivalence form at t."""
        if self.kind != "equivalence":
            raise ValidationError("kind", f"case {self.case} gives a bound, not an equivalence")
        return eval_asym(self.form, t).log_p

    def log_upper(self, t: float) -> float:
        """Log of the finite-t upper bound (any kind; equivalences use the form)."""
        if self.kind == "equivalence":
            return eval_asym(self.form, t).log_p
        bt = self.beta * t
        if self.case == "3ii":
            return math.log(0.5) + log_norm_sf(bt).log_p
        if self.case == "3iii":
            return eval_asym(self.form, t).log_p
        if self.case == "4ii":
            return log_norm_sf(bt).log_p
        # 5iii: Psi(beta t) * Phi(-rho beta t / sqrt(1 - rho^2)), valid large t
        omr = (1.0 - self.rho) * (1.0 + self.rho)
        phi_log = 0.0 if omr == 0.0 else log_norm_sf(self.rho * bt / math.sqrt(omr)).log_p
        return log_norm_sf(bt).log_p + phi_log

    def log_lower(self, t: float) -> float:
        """Log of the finite-t lower bound (two-sided kind only)."""
        if self.kind != "two-sided-bound":
            raise ValidationError("kind", f"case {self.case} has no lower bound")
        return math.log(0.5) + log_norm_sf(self.beta * t).log_p


def _mills_form(coef: float, half: bool = False, kind: str = "equivalence") -> AsymptoticForm:
    pref = (0.5 if half else 1.0) / (coef * _SQRT_2PI)
    return AsymptoticForm(pref, -1.0, coef * coef, kind=kind, var="t")


def _cross_form(rho: float, alpha: float, beta: float, case: str) -> AsymptoticForm:
    # Corner expansion constant: at rho = 0 it must reduce to the product of
    # two Mills ratios, 1/(2 pi alpha beta t^2) e^{-(alpha^2+beta^2) t^2/2}.
    omr = (1.0 - rho) * (1.0 + rho)
    if omr <= 0.0:
        raise ValidationError("rho", f"case {case} needs |rho| < 1, got {rho!r}")
    rate = (alpha * alpha + beta * beta - 2.0 * rho * alpha * beta) / omr
    if case == "3iii":
        pref = math.sqrt(omr) / (2.0 * math.pi * abs(alpha - rho * beta) * beta)
        kind = "upper-bound"
    else:
        pref = omr ** 1.5 / (2.0 * math.pi * (alpha - rho * beta) * (beta - rho * alpha))
        kind = "equivalence"
    return AsymptoticForm(pref, -2.0, rate, kind=kind, var="t")


def bvn_tail_asym(rho: float, alpha: float, beta: float) -> BivariateTailResult:
    """Classify and return the tail form of Psi_2(rho; alpha t, beta t).

    The argument order (alpha, beta) is symmetric; inputs are rearranged to
    the case conventions: opposite signs with equal magnitudes, a dominant
    negative coefficient, a dominant positive one, both positive sorted, or
    one exact zero. Combinations whose probability does not decay (both
    coefficients nonpositive, or a zero next to a negative) are rejected.
    """
    for name, v in (("rho", rho), ("alpha", alpha), ("beta", beta)):
        if not (isinstance(v, (int, float)) and math.isfinite(v)):
            raise ValidationError(name, f"must be finite, got {v!r}")
    if abs(rho) > 1.0:
        raise ValidationError("rho", f"must lie in [-1, 1], got {rho!r}")

    lo, hi = min(alpha, beta), max(alpha, beta)
    if hi <= 0.0 or (lo < 0.0 and hi == 0.0):
        raise ValidationError("alpha", f"no tail case covers alpha={alpha!r}, beta={beta!r}")

    if lo == 0.0:
        # case 5: Psi_2(rho; 0, beta t)
        if rho > 0.0 and not times_close(rho, 0.0):
            return BivariateTailResult("5i", "equivalence", _mills_form(hi), rho, lo, hi)
        if times_close(rho, 0.0):
            return BivariateTailResult("5ii", "equivalence", _mills_form(hi, half=True), rho, lo, hi)
        return BivariateTailResult(
            "5iii", "upper-bound", _mills_form(hi, kind="upper-bound"), rho, lo, hi
        )

    if lo < 0.0:
        if times_close(-lo, hi):
            return BivariateTailResult("1i", "equivalence", _mills_form(hi), rho, lo, hi)
        if -lo > hi:
            return BivariateTailResult("2i", "equivalence", _mills_form(hi), rho, lo, hi)
        ratio = lo / hi
        if times_close(rho, ratio):
            return BivariateTailResult(
                "3ii", "upper-bound", _mills_form(hi, half=True, kind="upper-bound"), rho, lo, hi
            )
        if rho > ratio:
            return BivariateTailResult("3i", "equivalence", _mills_form(hi), rho, lo, hi)
        return BivariateTailResult("3iii", "upper-bound", _cross_form(rho, lo, hi, "3iii"), rho, lo, hi)

    # both positive, sorted so lo <= hi
    ratio = lo / hi
    if times_close(rho, ratio):
        return BivariateTailResult(
            "4ii", "two-sided-bound", _mills_form(hi, kind="upper-bound"), rho, lo, hi
        )
    if rho > ratio:
        return BivariateTailResult("4i", "equivalence", _mills_form(hi), rho, lo, hi)
    return BivariateTailResult("4iii", "equivalence", _cross_form(rho, lo, hi, "4iii"), rho, lo, hi)
