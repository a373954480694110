"""Regenerate the frozen deep-tail references in tests/test_gauss.py.

Computes log Psi_2(rho; s, t) by a route independent of the library:
Plackett's identity d(Psi_2)/d(rho) = binormal density at (s, t), so
integrating the correlation from -1, where
Psi_2(-1; s, t) = max(0, 1 - Phi(s) - Phi(t)), expresses the upper
quadrant probability as a sum of positive terms only. There is no
cancellation at any magnitude, which makes the route trustworthy at
log-probabilities around -1800 where float arithmetic has nothing left.

The integrand exp(-E(r)) / (2 pi sqrt(1 - r^2)) with
E(r) = (s^2 + t^2 - 2 r s t) / (2 (1 - r^2)) has
E'(r) = [r (s^2 + t^2) - s t (1 + r^2)] / (1 - r^2)^2, whose sign change
in (-1, 1) sits at rstar = sign(st) * min(|s/t|, |t/s|). Mass concentrates
either at rstar (if rstar < rho) or at the right endpoint rho. Plain
tanh-sinh stalls on those boundary layers, so the integration range is
paneled with geometric ladders (halving widths, 60 levels) into each
concentration point; each panel then has bounded dynamic range.

Needs mpmath (the refgen extra): pip install -e .[refgen]
Run: python3 tools/reference_logbvn.py
"""
import mpmath as mp

# (rho, s, t) rows frozen in tests/test_gauss.py::LOG_BVN_SF_REFERENCE
TABLE = [
    (0.25, 1.0, 2.0),
    (0.9, 30.0, 36.0),
    (-0.8, -15.0, 30.0),
    (0.0, 8.0, 8.0),
    (0.5, 10.0, 10.0),
    (-0.95, 2.0, 3.0),
    (0.7, -5.0, 25.0),
    (0.3, 40.0, 20.0),
    (-0.5, 30.0, 30.0),
    (0.99, 12.0, 12.0),
]


def _ladder_into(a, b, levels=60):
    """Edges from a towards b with geometrically shrinking gaps."""
    return [b - (b - a) * mp.mpf(2) ** (-j) for j in range(levels + 1)]


def log_bvnu_plackett(s, t, rho, dps=60, maxdegree=8):
    """log P(X > s, Y > t), standard binormal with correlation rho."""
    mp.mp.dps = dps
    s_, t_, r1 = mp.mpf(s), mp.mpf(t), mp.mpf(rho)
    base = max(mp.mpf(0), mp.ncdf(-s_) - mp.ncdf(t_))

    def dens(r):
        om = (1 - r) * (1 + r)
        if om <= 0:
            return mp.mpf(0)
        qf = s_ * s_ + t_ * t_ - 2 * r * s_ * t_
        return mp.e ** (-qf / (2 * om)) / (2 * mp.pi * mp.sqrt(om))

    rstar = None
    if s_ != 0 or t_ != 0:
        if s_ == 0 or t_ == 0:
            rstar = mp.mpf(0)
        else:
            rstar = mp.sign(s_ * t_) * min(abs(s_ / t_), abs(t_ / s_))

    edges = {mp.mpf(-1), r1}
    if rstar is not None and -1 < rstar < r1:
        # interior max: ladders into rstar from both sides
        edges.update(_ladder_into(mp.mpf(-1), rstar))
        edges.update(rstar + (r1 - rstar) * mp.mpf(2) ** (-j) for j in range(61))
    else:
        # integrand increasing up to rho: ladder into the right endpoint
        edges.update(_ladder_into(mp.mpf(-1), r1))
    pts = sorted(edges)

    integ = mp.mpf(0)
    for lo, hi in zip(pts[:-1], pts[1:]):
        if hi > lo:
            integ += mp.quad(dens, [lo, hi], maxdegree=maxdegree)
    return float(mp.log(base + integ))


def _self_check():
    mp.mp.dps = 60
    worst = 0.0
    for s, t in [(30.0, 30.0), (5.0, 2.0), (-2.0, 5.0), (10.0, -10.0), (40.0, 40.0)]:
        exact = float(mp.log(mp.ncdf(mp.mpf(-s)) * mp.ncdf(mp.mpf(-t))))
        got = log_bvnu_plackett(s, t, 0.0)
        worst = max(worst, abs(got - exact) / abs(exact))
    # Psi_2(rho; 0, 0) = 1/4 + asin(rho) / (2 pi)
    for rho in (0.6, -0.6, 0.99):
        exact = float(mp.log(mp.mpf(1) / 4 + mp.asin(mp.mpf(rho)) / (2 * mp.pi)))
        got = log_bvnu_plackett(0.0, 0.0, rho)
        worst = max(worst, abs(got - exact) / max(abs(exact), 1e-30))
    return worst


if __name__ == "__main__":
    print(f"closed-form self-check, worst rel err: {_self_check():.2e}")
    print("LOG_BVN_SF_REFERENCE = [")
    for rho, s, t in TABLE:
        print(f"    ({rho}, {s}, {t}, {log_bvnu_plackett(s, t, rho)}),")
    print("]")
