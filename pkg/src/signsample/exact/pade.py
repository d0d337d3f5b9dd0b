"""Rational reconstruction of truncated series around t = 1."""

from flint import fmpq_poly

from ..errors import DegreeBoundViolation, NoReconstruction
from .poly import monic
from .series import Series

TAU = fmpq_poly([-1, 1])  # tau = t - 1 expressed in t


def pade_tau(poly, prec, num_deg, den_deg):
    """Padé approximant in tau from the extended Euclidean algorithm.

    Returns (p, q) in tau with deg p <= num_deg, deg q <= den_deg,
    q(0) = 1 and q * s = p mod tau^prec.
    """
    if num_deg + den_deg + 1 > prec:
        raise NoReconstruction("not enough terms for the requested degree bounds")
    r0, r1 = fmpq_poly([0] * prec + [1]), poly.truncate(prec)
    t0, t1 = fmpq_poly([]), fmpq_poly([1])
    while r1.degree() > num_deg:
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        t0, t1 = t1, t0 - quo * t1
    if t1.degree() > den_deg or t1.is_zero():
        raise NoReconstruction("denominator exceeds its degree bound")
    g = r1.gcd(t1) if not r1.is_zero() else monic(t1)
    if g.degree() > 0:
        r1, t1 = r1 // g, t1 // g
    lead = t1[0]
    if lead == 0:
        raise NoReconstruction("denominator vanishes at t = 1")
    p, q = r1 / lead, t1 / lead
    if (q.mul_low(poly, prec) - p).truncate(prec) != 0:
        raise NoReconstruction("reconstruction does not match the series")
    return p, q


def pade_reconstruct(series, num_deg, den_deg):
    """Rational function p/q in t matching ``series`` (expanded at t = 1).

    ``series`` is a Series in tau = t - 1. The result is normalized with
    q(1) = 1.
    """
    p, q = pade_tau(series.poly, series.prec, num_deg, den_deg)
    return p(TAU), q(TAU)


def common_denominator(fractions, bound=None):
    """Put fractions p_i/q_i over their monic least common denominator.

    Returns (numerators, q). With ``bound`` set, every output degree must be
    at most ``bound`` or DegreeBoundViolation is raised.
    """
    den = fmpq_poly([1])
    for _, q in fractions:
        if q.is_zero():
            raise ZeroDivisionError("zero denominator")
        den = den * q // den.gcd(q)
    den = monic(den)
    nums = [p * (den // q) for p, q in fractions]
    if bound is not None:
        worst = max([den.degree()] + [n.degree() for n in nums])
        if worst > bound:
            raise DegreeBoundViolation(f"degree {worst} in t exceeds the bound {bound}")
    return nums, den


def reconstruct_common(series_list, bound, weights=None):
    """Same result as pade_reconstruct on each series followed by
    common_denominator, but with a single extended Euclidean run.

    The denominator is reconstructed from a weighted sum of the series; each
    numerator is then q * s mod tau^prec, accepted when its degree is within
    ``bound`` (which pins it down uniquely since prec > 2 * bound). Series
    whose denominator is missed fall back to their own reconstruction.
    Returns (numerators, denominator) in t, the denominator monic.
    """
    if not series_list:
        return [], fmpq_poly([1])
    prec = min(s.prec for s in series_list)
    if prec < 2 * bound + 1:
        raise NoReconstruction("not enough terms for the requested degree bound")
    if weights is None:
        weights = [i + 1 for i in range(len(series_list))]
    combo = fmpq_poly([])
    for w, s in zip(weights, series_list):
        combo += s.poly * w
    _, den = pade_tau(combo, prec, bound, bound)
    nums = [None] * len(series_list)
    pending = list(range(len(series_list)))
    while pending:
        missed = []
        for i in pending:
            cand = den.mul_low(series_list[i].poly, prec)
            if cand.degree() <= bound:
                nums[i] = cand
            else:
                missed.append(i)
        if not missed:
            break
        i = missed[0]
        _, qi = pade_tau(series_list[i].poly, prec, bound, bound)
        lcm = den * qi // den.gcd(qi)
        if lcm.degree() > bound:
            raise DegreeBoundViolation(f"degree {lcm.degree()} in t exceeds the bound {bound}")
        scale = lcm // den
        nums = [None if v is None else v * scale for v in nums]
        den = lcm
        pending = missed
    nums_t = [v(TAU) for v in nums]
    den_t = den(TAU)
    lead = den_t.leading_coefficient()
    return [v / lead for v in nums_t], den_t / lead


def series_of(p, q, prec):
    """Expansion of p(t)/q(t) at t = 1 to precision prec (q(1) != 0)."""
    x = fmpq_poly([1, 1])  # t = 1 + tau
    pt, qt = p(x), q(x)
    if qt[0] == 0:
        raise ZeroDivisionError("denominator vanishes at t = 1")
    inv = _series_inverse(qt, prec)
    return Series(pt.mul_low(inv, prec), prec)


def _series_inverse(f, prec):
    g = fmpq_poly([1 / f[0]])
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        g = (2 * g - f.mul_low(g, k).mul_low(g, k)).truncate(k)
    return g
