"""Exact deformation F = (1 - t) h + t g from a start system g to a target h.

Solutions of g (at t = 1) are lifted to power series in tau = t - 1 by a
Newton-Hensel iteration with precision doubling, the characteristic
polynomial of a generic linear form is reconstructed as a rational function
of t, and a geometric resolution of the limits at t = 0 is read off.
"""

import random
from dataclasses import dataclass, field

from flint import fmpq, fmpq_poly

from .errors import (
    BadAlpha,
    BadRandomness,
    InexactDivision,
    InvalidSystem,
    LiftingFailed,
    NoReconstruction,
    NotInvertible,
    SingularJacobian,
    SingularMatrix,
    SpotCheckFailed,
)
from .exact.dual import Dual
from .exact.linalg import inverse, is_zero, mat_mul, ring_inverse
from .exact.pade import reconstruct_common
from .exact.poly import DensePoly, exact_div, monic, poly_gcd, power_sums, product_tree
from .exact.quotient import QSeries, QuotientRing
from .exact.series import Series
from .resolution import GeometricResolution
from .slp import Builder, jacobian
from .systems import enumerate_type1_solutions, resolve_type2

ALPHA_BOUND = 2 ** 16
ALPHA_TRIES = 5
# the start resolution only has to separate the start points; small entries
# keep the heights in Q[U]/(q) down during lifting
START_ALPHA_BOUND = 8


@dataclass
class DeformationProblem:
    target: object
    initial: object
    family: object
    jac: object
    n: int
    unknowns: int
    degree: int

    @property
    def precision(self):
        return 2 * self.n * self.degree + 1


def assemble(target, initial, spot_checks=5, rng=None):
    """Build F(t, z) = (1 - t) h(z) + t g(z) and its Jacobian in z.

    Inputs of F are (t, z). Spot-checks F(0) = h and F(1) = g at random
    rational points.
    """
    h, g = target.equations, initial.equations
    if h.num_inputs != g.num_inputs or h.num_outputs != g.num_outputs:
        raise InvalidSystem("start and target systems have different shapes")
    if h.num_outputs != h.num_inputs:
        raise InvalidSystem("deformation needs a square system")
    r = h.num_inputs
    b = Builder(r + 1)
    t = b.input(0)
    zs = [b.input(i + 1) for i in range(r)]
    hs = b.inline(h, zs)
    gs = b.inline(g, zs)
    outs = [b.add(hi, b.mul(t, b.sub(gi, hi))) for hi, gi in zip(hs, gs)]
    family = b.build(outs)
    jac = jacobian(family, wrt=range(1, r + 1))
    rng = rng or random.Random(0)
    for _ in range(spot_checks):
        z = [fmpq(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(r)]
        if family.eval([fmpq(0)] + z) != h.eval(z) or family.eval([fmpq(1)] + z) != g.eval(z):
            raise SpotCheckFailed("deformation does not interpolate the two systems")
    return DeformationProblem(target, initial, family, jac, target.n, r, initial.count)


# ------------------------------------------------------------------ lifting


@dataclass
class LiftedFiber:
    """Solutions of F lifted to precision ``prec`` in tau.

    Pointwise fibers hold one list of Series per start point. Parametric
    fibers hold pieces (ring, [QSeries per unknown]) for a partition of the
    start points.
    """

    kind: str
    prec: int
    points: list = field(default_factory=list)
    pieces: list = field(default_factory=list)
    residual_log: list = field(default_factory=list)


def _split_jac(vals, r):
    F = vals[:r]
    J = [vals[r + i * r: r + (i + 1) * r] for i in range(r)]
    return F, J


def _newton(problem, X, B, N):
    """Quadratic lifting loop shared by both representations.

    ``X`` holds precision-1 approximations and ``B`` the inverse Jacobian at
    t = 1. Returns the lifted X at precision N and the log of residual
    valuations (precision reached, valuation of F).
    """
    t_of = Series.t
    r = problem.unknowns
    jac = problem.jac
    kappa = prev = 1
    A_old = None
    log = []
    while kappa < N:
        new = min(2 * kappa, N)
        Xn = [x.with_prec(new) for x in X]
        B = [[_promote(b, new) for b in row] for row in B]
        vals = jac.eval([t_of(new)] + Xn)
        F, A = _split_jac(vals, r)
        if log:
            log[-1] = (log[-1][0], min(f.valuation() for f in F))
        if A_old is None:
            Bp = B
        else:
            # X moved by O(tau^prev) since A_old was computed, so A - A_old
            # carries the factor tau^prev and the correction needs fewer terms
            low = new - prev
            E = [[_shift(a - _promote(b, new), -prev) for a, b in zip(ra, rb)] for ra, rb in zip(A, A_old)]
            Bl = [[_promote(b, low) for b in row] for row in B]
            corr = mat_mul(mat_mul(Bl, E), Bl)
            Bp = _mat_sub(B, [[_shift(c, prev) for c in row] for row in corr])
        # 2B' - B'AB' = B' + B'(I - AB'), and I - AB' vanishes to order kappa
        AB = mat_mul(A, Bp)
        R = [[_shift((1 if i == j else 0) - AB[i][j], -kappa) for j in range(r)] for i in range(r)]
        Bl = [[_promote(b, new - kappa) for b in row] for row in Bp]
        B = _mat_sub(Bp, [[-_shift(c, kappa) for c in row] for row in mat_mul(Bl, R)])
        # the residual F also vanishes to order kappa
        Bl = [[_promote(b, new - kappa) for b in row] for row in B]
        Fl = [_shift(f, -kappa) for f in F]
        corr = [sum((Bl[i][j] * Fl[j] for j in range(1, r)), Bl[i][0] * Fl[0]) for i in range(r)]
        X = [x - _shift(c, kappa) for x, c in zip(Xn, corr)]
        A_old = A
        prev, kappa = kappa, new
        log.append((kappa, None))
    F = problem.family.eval([t_of(N)] + X)
    if log:
        log[-1] = (log[-1][0], min(f.valuation() for f in F))
    for kappa, val in log:
        if val < kappa:
            raise LiftingFailed(f"residual has valuation {val} below precision {kappa}")
    return X, log


def _promote(x, prec):
    return x.with_prec(prec) if hasattr(x, "with_prec") else x


def _shift(x, k):
    return x.shift(k) if hasattr(x, "shift") else x


def _mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def newton_lift_pointwise(problem, starts, N=None):
    """Lift each rational start point separately (to the problem's precision by default)."""
    N = problem.precision if N is None else N
    r = problem.unknowns
    one = fmpq(1)
    fiber = LiftedFiber("pointwise", N)
    for pt in starts:
        vals = problem.jac.eval([one] + list(pt))
        F0, A0 = _split_jac(vals, r)
        if any(v != 0 for v in F0):
            raise InvalidSystem(f"start point {pt} is not a solution")
        try:
            B0 = inverse(A0)
        except SingularMatrix as exc:
            raise SingularJacobian(f"singular Jacobian at start point {pt}") from exc
        X = [Series.constant(c, 1) for c in pt]
        X, log = _newton(problem, X, B0, N)
        fiber.points.append(X)
        fiber.residual_log.append(log)
    return fiber


def newton_lift_parametric(problem, start, N=None):
    """Lift all points of a start resolution at once over Q[U]/(q).

    If the Jacobian determinant is a zero divisor the modulus is split along
    the gcd and each factor is lifted separately.
    """
    N = problem.precision if N is None else N
    fiber = LiftedFiber("parametric", N)
    if start.is_empty():
        return fiber
    todo = [start.q]
    while todo:
        q = todo.pop()
        ring = QuotientRing(q)
        inv = ring(start.qtilde).inverse()
        v = [ring(w) * inv for w in start.w]
        vals = problem.jac.eval([fmpq(1)] + v)
        F0, A0 = _split_jac(vals, problem.unknowns)
        if any(not is_zero(f) for f in F0):
            raise InvalidSystem("start resolution does not solve the start system")
        try:
            B0 = ring_inverse(A0)
        except NotInvertible as exc:
            g = exc.gcd
            if g.degree() <= 0 or g.degree() >= q.degree():
                raise SingularJacobian("Jacobian vanishes at a start point") from exc
            todo.extend([monic(g), monic(exact_div(q, g))])
            continue
        X = [QSeries.from_element(x, 1) for x in v]
        B = [[QSeries.from_element(ring(e) if not hasattr(e, "rep") else e, 1) for e in row] for row in B0]
        X, log = _newton(problem, X, B, N)
        fiber.pieces.append((ring, X))
        fiber.residual_log.append(log)
    return fiber


# ------------------------------------------------------------------ characteristic polynomial


@dataclass
class CharPolyData:
    """P_hat(t, U, y) modulo (y - alpha)^2 with coefficients in Q[t].

    ``value[h]`` is the coefficient of U^h at y = alpha and
    ``tangent[k][h]`` its derivative in y_k; ``denominator`` is the
    coefficient of U^D.
    """

    alpha: list
    value: list
    tangent: list
    denominator: fmpq_poly
    degree_bound: int


def _linear_form(coords, alpha):
    n = len(alpha)
    val = sum((coords[k] * alpha[k] for k in range(1, n)), coords[0] * alpha[0])
    return Dual(val, [coords[k] for k in range(n)])


def _newton_to_coeffs(psums, D, one):
    """Monic polynomial coefficients (low to high) from power sums p_1..p_D."""
    e = [one]
    for k in range(1, D + 1):
        acc = None
        for i in range(1, k + 1):
            piece = e[k - i] * psums[i]
            if i % 2 == 0:
                piece = -piece
            acc = piece if acc is None else acc + piece
        e.append(acc / k)
    coeffs = [None] * (D + 1)
    for k in range(D + 1):
        coeffs[D - k] = e[k] if k % 2 == 0 else -e[k]
    return coeffs


def _series_charpoly(fiber, alpha, n):
    """Coefficients (low to high, monic) of prod (U - l(S_i, y)) as Dual[Series]."""
    N = fiber.prec
    one = Dual(Series.constant(1, N), [0] * n)
    if fiber.kind == "pointwise":
        factors = []
        for X in fiber.points:
            L = _linear_form(X[:n], alpha)
            factors.append(DensePoly([-L, one], "dual-series"))
        if not factors:
            return [one]
        return product_tree(factors).coeffs
    total = None
    for ring, X in fiber.pieces:
        coeffs = DensePoly(_newton_to_coeffs(_power_sums_parametric(ring, X[:n], alpha, N), ring.degree, one),
                           "dual-series")
        total = coeffs if total is None else total * coeffs
    if total is None:
        return [one]
    return total.coeffs


def _power_sums_parametric(ring, X, alpha, prec):
    """Tr(L^j) for j = 1..D with L = sum_k y_k X_k, to first order in y - alpha.

    d/dy_k Tr(L^j) = j Tr(L^(j-1) X_k), and Tr(A X_k) = sum_i A_i Tr(U^i X_k),
    so each tangent costs one pass of scalar series products.
    """
    D = ring.degree
    n = len(X)
    tr = power_sums(ring.modulus, 2 * D - 2)
    # dual[k][i] = Tr(U^i X_k)
    dual = []
    for Xk in X:
        row = []
        for i in range(D):
            acc = fmpq_poly([])
            for l, part in enumerate(Xk.parts):
                c = tr[i + l]
                if c != 0 and not part.is_zero():
                    acc += part * c
            row.append(acc)
        dual.append(row)
    L = X[0] * alpha[0]
    for k in range(1, n):
        L = L + X[k] * alpha[k]
    sums = [None]
    power = None  # L^(j-1)
    for j in range(1, D + 1):
        if power is None:
            tans = [Series(sum(dual[k][:1], fmpq_poly([])), prec) * j for k in range(n)]
            power = L
        else:
            tans = []
            for k in range(n):
                acc = fmpq_poly([])
                for i, part in enumerate(power.parts):
                    if not part.is_zero():
                        acc += part.mul_low(dual[k][i], prec)
                tans.append(Series(acc, prec) * j)
            power = power * L
        sums.append(Dual(power.trace(), tans))
    return sums


def charpoly(fiber, alpha, n, degree_bound=None):
    """Reconstruct the eliminating polynomial of the limits as a function of t."""
    coeffs = _series_charpoly(fiber, alpha, n)
    D = len(coeffs) - 1
    bound = n * D if degree_bound is None else degree_bound
    series = []
    for h in range(D):
        series.append(_as_series(coeffs[h].val, fiber.prec))
        for k in range(n):
            series.append(_as_series(coeffs[h].tan[k], fiber.prec))
    if not series:
        one = fmpq_poly([1])
        return CharPolyData(list(alpha), [one], [[] for _ in range(n)], one, bound)
    nums, den = reconstruct_common(series, bound)
    value = [nums[h * (n + 1)] for h in range(D)] + [den]
    tangent = [[nums[h * (n + 1) + 1 + k] for h in range(D)] + [fmpq_poly([])] for k in range(n)]
    return CharPolyData(list(alpha), value, tangent, den, bound)


def _as_series(s, prec):
    if isinstance(s, Series):
        return s
    return Series.constant(s, prec)


def specialize_and_extract(cp, t0=0):
    """Resolution of the points of the fibre over t0 from P_hat(t0, U, alpha).

    t0 = 0 gives the limits of the lifted branches; other values give the
    solutions of the deformed system at that parameter.
    """
    t0 = fmpq(t0)
    P0 = fmpq_poly([c(t0) for c in cp.value])
    Pk = [fmpq_poly([c(t0) for c in tk]) for tk in cp.tangent]
    n = len(Pk)
    if P0.is_zero():
        raise BadAlpha(f"eliminating polynomial vanishes identically at t = {t0}")
    if P0.degree() == 0:
        return GeometricResolution.empty(n)
    dP = P0.derivative()
    Q = poly_gcd(P0, dP)
    try:
        q = exact_div(P0, Q)
        qt = exact_div(dP, Q)
        w = [-exact_div(p, Q) for p in Pk]
    except InexactDivision as exc:
        raise BadAlpha("tangent coefficients are not divisible by the multiplicity factor") from exc
    res = GeometricResolution(q, qt, w)
    res.check()
    return res


# ------------------------------------------------------------------ drivers


def random_alpha(rng, n, bound=ALPHA_BOUND):
    return [fmpq(rng.randint(1, bound)) for _ in range(n)]


def solve_deformation(problem, rng, alpha_bound=ALPHA_BOUND, tries=ALPHA_TRIES, stats=None):
    """Deform, lift, reconstruct and extract; retries alpha on BadAlpha."""
    initial = problem.initial
    n = problem.n
    if initial.kind == "type1":
        fiber = newton_lift_pointwise(problem, enumerate_type1_solutions(initial))
    else:
        fiber = None
        for attempt in range(2 * tries):
            bound = min(alpha_bound, START_ALPHA_BOUND << attempt)
            alpha = random_alpha(rng, n, bound)
            try:
                start = resolve_type2(initial, alpha)
            except BadAlpha:
                continue
            fiber = newton_lift_parametric(problem, start)
            break
        if fiber is None:
            raise BadRandomness("no separating linear form for the start system")
    for attempt in range(tries):
        alpha = random_alpha(rng, n, alpha_bound)
        try:
            cp = charpoly(fiber, alpha, n)
            res = specialize_and_extract(cp)
        except (BadAlpha, NoReconstruction):
            continue
        if stats is not None:
            stats.update({"fiber": fiber, "charpoly": cp})
        return res
    raise BadRandomness("no separating linear form for the limit points")
