"""Lagrange systems and the start systems used to deform them.

Unknowns are ordered (x_1..x_n, mu_1..mu_{s-1}); the last multiplier is
fixed to 1, which is the affine chart used by every deformation.
"""

import itertools
from dataclasses import dataclass, field
from math import comb, factorial, prod

from flint import fmpq, fmpq_poly

from .errors import BadAlpha, InvalidSystem
from .exact.dual import Dual
from .exact.linalg import cauchy_solve, solve
from .exact.poly import chebyshev, chebyshev_t, exact_div, is_squarefree, monic, power_sums
from .resolution import GeometricResolution, merge_all
from .slp import Builder


@dataclass
class LagrangeSystem:
    """Critical-point system of x_1 restricted to {f_S = 0}.

    kind is "single" (s = 1 < n), "mid" (1 < s < n) or "square" (s = n).
    """

    kind: str
    n: int
    subset: tuple
    equations: object
    degrees: list
    bezout: int

    @property
    def s(self):
        return len(self.subset)

    @property
    def num_unknowns(self):
        return self.equations.num_inputs

    @property
    def num_multipliers(self):
        return self.num_unknowns - self.n


def bezout_count(degrees, s, n):
    """Multihomogeneous Bezout number of a Lagrange system.

    ``degrees`` lists the x-degrees of all r equations; the first s are the
    polynomials, the remaining r - s are linear in the multipliers.
    """
    head = prod(degrees[:s])
    tail = degrees[s:]
    k = n - s
    if k < 0 or k > len(tail):
        return 0
    return head * sum(prod(tail[j] for j in E) for E in itertools.combinations(range(len(tail)), k))


def lagrange_kind(s, n):
    if not 1 <= s <= n:
        raise InvalidSystem(f"subset size {s} outside 1..{n}")
    if s == n:
        return "square"
    if s == 1:
        return "single"
    return "mid"


def build_lagrange(family, subset, degrees):
    """Lagrange system for the polynomials of ``family`` indexed by ``subset``.

    ``family`` is an Slp with m outputs in n inputs, ``subset`` a sorted tuple
    of 1-based indices and ``degrees`` the degree bounds of all m outputs.
    """
    n = family.num_inputs
    subset = tuple(subset)
    if list(subset) != sorted(set(subset)) or not subset or subset[0] < 1 or subset[-1] > family.num_outputs:
        raise InvalidSystem(f"bad subset {subset}")
    s = len(subset)
    kind = lagrange_kind(s, n)
    fam = family.select([i - 1 for i in subset])
    ds = [degrees[i - 1] for i in subset]
    nmu = s - 1 if kind == "mid" else 0
    b = Builder(n + nmu)
    xs = [b.input(i) for i in range(n)]
    nodes = b.inline(fam, xs, full=True)
    eqs = [nodes[o] for o in fam.outputs]
    eq_degrees = list(ds)
    if kind == "single":
        grad = b.adjoints(fam, nodes, 0)
        eqs.extend(grad[k] for k in range(1, n))
        eq_degrees.extend([max(1, ds[0] - 1)] * (n - 1))
    elif kind == "mid":
        mus = [b.input(n + j) for j in range(nmu)] + [b.const(1)]
        grads = [b.adjoints(fam, nodes, j) for j in range(s)]
        for k in range(1, n):
            eqs.append(b.sum(b.mul(mus[j], grads[j][k]) for j in range(s)))
        eq_degrees.extend([max(1, max(ds) - 1)] * (n - 1))
    program = b.build(eqs)
    return LagrangeSystem(kind, n, subset, program, eq_degrees, bezout_count(eq_degrees, s, n))


# ------------------------------------------------------------------ type 1


@dataclass
class InitialSystem:
    kind: str
    lagrange: LagrangeSystem
    equations: object
    degrees: list
    count: int
    params: dict = field(default_factory=dict)


def _phi_offset(i, j, s, d):
    # i is the 0-based equation index (i >= s), j the 1-based factor index
    return (i - s) * d + j - 1


def build_type1(lag, d=None):
    """Products of linear forms with the same degree pattern as ``lag``."""
    n, s = lag.n, lag.s
    degs = lag.degrees
    d = max(degs) if d is None else d
    if any(e > d for e in degs):
        raise InvalidSystem("degree bound smaller than an equation degree")
    nu = lag.num_unknowns
    b = Builder(nu)
    xs = [b.input(i) for i in range(n)]
    eqs = []
    if lag.kind != "mid":
        for i in range(n):
            eqs.append(b.product(b.sub(xs[i], b.const(j)) for j in range(1, degs[i] + 1)))
    else:
        mus = [b.input(n + j) for j in range(s - 1)] + [b.const(1)]
        for i in range(s):
            eqs.append(b.product(b.sub(xs[i], b.const(j)) for j in range(1, degs[i] + 1)))
        for i in range(s, len(degs)):
            factors = []
            for j in range(1, degs[i] + 1):
                o = _phi_offset(i, j, s, d)
                coeffs = [fmpq(1, o + k - s) for k in range(s + 1, n + 1)]
                factors.append(b.linear(coeffs, xs[s:], fmpq(1, o + n + 1 - s)))
            psi = b.linear([fmpq(1, i - s + k) for k in range(1, s + 1)], mus)
            eqs.append(b.mul(b.product(factors), psi))
    program = b.build(eqs)
    return InitialSystem("type1", lag, program, list(degs), bezout_count(degs, s, n), {"d": d})


def enumerate_type1_solutions(system):
    """All start points of a type-1 system, as tuples of rationals."""
    lag = system.lagrange
    n, s = lag.n, lag.s
    degs = system.degrees
    d = system.params["d"]
    if lag.kind != "mid":
        ranges = [range(1, degs[i] + 1) for i in range(n)]
        return [tuple(fmpq(v) for v in pt) for pt in itertools.product(*ranges)]
    grid = list(itertools.product(*[range(1, degs[i] + 1) for i in range(s)]))
    mu_rows = list(range(s, len(degs)))
    out = []
    for E in itertools.combinations(mu_rows, n - s):
        rest = [i for i in mu_rows if i not in E]
        # multipliers: psi_i(mu) = 0 for the equations outside E, mu_s = 1
        if s > 1:
            A = [[fmpq(1, i - s + k) for k in range(1, s)] for i in rest]
            rhs = [-fmpq(1, i) for i in rest]
            mu = solve(A, rhs)
        else:
            mu = []
        for choice in itertools.product(*[range(1, degs[i] + 1) for i in E]):
            offsets = [_phi_offset(i, j, s, d) for i, j in zip(E, choice)]
            rhs = [-fmpq(1, o + n + 1 - s) for o in offsets]
            xtail = cauchy_solve(offsets, rhs) if offsets else []
            for head in grid:
                out.append(tuple(fmpq(v) for v in head) + tuple(xtail) + tuple(mu))
    return out


# ------------------------------------------------------------------ type 2


def primes_above(n, count):
    """The first ``count`` primes strictly greater than n."""
    out = []
    c = n + 1
    while len(out) < count:
        if c > 1 and all(c % p for p in range(2, int(c ** 0.5) + 1)):
            out.append(c)
        c += 1
    return out


def type2_offsets(n, subset):
    """Cauchy offsets a_j = q_{i_j} - n - 1 with q_i the i-th prime above n."""
    qs = primes_above(n, max(subset))
    return [qs[i - 1] - n - 1 for i in subset]


def standalone_offsets(n, s):
    """Offsets 0..s-1 shifted by the least c making a_s + n + 1 prime."""
    c = 0
    while primes_above(s + n - 1 + c, 1)[0] != s + n + c:
        c += 1
    return [j + c for j in range(s)]


def type2_count(n, s, d):
    return comb(n - 1, s - 1) * d ** s * (d - 1) ** (n - s)


def _horner(b, coeffs, x):
    acc = b.const(coeffs[-1]) if coeffs else b.const(0)
    for c in reversed(coeffs[:-1]):
        acc = b.add(b.mul(acc, x), b.const(c))
    return acc


def build_type2(lag, d, signs=None, offsets=None):
    """Chebyshev start system of degree d (even) for the shape of ``lag``.

    Equation j is tau_j * (n + A_{j,n+1} + sum_k A_jk T_d(x_k)) with the
    Cauchy matrix A_jk = 1/(a_j + k); multiplier equations are the matching
    combinations of partial derivatives. By default the offsets come from
    the prime-indexed family (a_j = q_{i_j} - n - 1, q_i the i-th prime
    above n), which is what the closed and single modes use.
    """
    n, s = lag.n, lag.s
    if d < 2 or d % 2:
        raise InvalidSystem(f"Chebyshev degree must be even and at least 2, got {d}")
    if any(e > d for e in lag.degrees[:s]):
        raise InvalidSystem("Chebyshev degree smaller than a polynomial degree")
    T = chebyshev(d)
    signs = tuple(signs) if signs is not None else (1,) * s
    if len(signs) != s or any(t not in (1, -1) for t in signs):
        raise InvalidSystem("signs must be a tuple of +1/-1 of length s")
    offsets = type2_offsets(n, lag.subset) if offsets is None else list(offsets)
    if len(offsets) != s or sorted(set(offsets)) != offsets or offsets[0] < 0:
        raise InvalidSystem("offsets must be increasing nonnegative integers")
    top = offsets[-1] + n + 1
    if primes_above(top - 1, 1)[0] != top:
        raise InvalidSystem(f"a_s + n + 1 = {top} is not prime")
    A = [[fmpq(1, a + k) for k in range(1, n + 2)] for a in offsets]
    tc, dtc = list(T.coeffs()), list(T.derivative().coeffs())
    nu = lag.num_unknowns
    b = Builder(nu)
    xs = [b.input(i) for i in range(n)]
    Tx = [_horner(b, tc, x) for x in xs]
    dTx = [_horner(b, dtc, x) for x in xs]
    eqs = []
    for j in range(s):
        body = b.linear(A[j][:n], Tx, n + A[j][n])
        eqs.append(b.scale(signs[j], body))
    if lag.kind == "single":
        for k in range(1, n):
            eqs.append(b.scale(signs[0] * A[0][k], dTx[k]))
    elif lag.kind == "mid":
        mus = [b.input(n + j) for j in range(s - 1)] + [b.const(1)]
        for k in range(1, n):
            comb_ = b.linear([signs[j] * A[j][k] for j in range(s)], mus)
            eqs.append(b.mul(dTx[k], comb_))
    program = b.build(eqs)
    degrees = [d] * s + [d - 1] * (len(lag.degrees) - s)
    params = {"d": d, "signs": signs, "offsets": offsets, "A": A}
    return InitialSystem("type2", lag, program, degrees, type2_count(n, s, d), params)


def _blocks(n, s):
    for B in itertools.combinations(range(1, n), n - s):
        for e in itertools.product((-1, 1), repeat=len(B)):
            yield B, dict(zip(B, e))


def _block_solution(system, B, e):
    """Multipliers and constants c_k for one block, or None if it is empty."""
    lag = system.lagrange
    n, s = lag.n, lag.s
    A = system.params["A"]
    signs = system.params["signs"]
    K = [k for k in range(n) if k not in B]
    free = [k for k in range(1, n) if k not in B]
    if lag.kind == "mid":
        M = [[signs[j] * A[j][k] for j in range(s - 1)] for k in free]
        rhs = [-signs[s - 1] * A[s - 1][k] for k in free]
        mu = solve(M, rhs)
    else:
        mu = []
    M = [[A[j][k] for k in K] for j in range(s)]
    rhs = [-(n + A[j][n] + sum((A[j][k] * e[k] for k in B), fmpq(0))) for j in range(s)]
    c = dict(zip(K, solve(M, rhs)))
    for k, ck in c.items():
        if ck == 1 or ck == -1:
            raise InvalidSystem(f"degenerate Chebyshev value {ck} for x_{k + 1}")
    return mu, c


def type2_univariates(system, B, e):
    """Univariate constraint for every coordinate of one block, plus multipliers."""
    d = system.params["d"]
    n = system.lagrange.n
    T = chebyshev(d)
    half = monic(chebyshev_t(d // 2))
    plus = monic(exact_div(T.derivative(), half))
    mu, c = _block_solution(system, B, e)
    polys = []
    for k in range(n):
        if k in c:
            polys.append(monic(T - c[k]))
        else:
            polys.append(half if e[k] == -1 else plus)
    return polys, mu


def _composed_sum(polys, alpha):
    """Monic polynomial of sum_k y_k xi_k over all root tuples, to first order in y - alpha.

    Returns (q, [dq/dy_k]) as rational polynomials.
    """
    n = len(polys)
    D = prod(p.degree() for p in polys)
    fact = [fmpq(factorial(i)) for i in range(D + 1)]
    acc = None
    for k, p in enumerate(polys):
        ps = power_sums(p, D)
        beta = Dual.variable(fmpq(alpha[k]), k, n)
        powers = [Dual(fmpq(1), [0] * n)]
        for _ in range(D):
            powers.append(powers[-1] * beta)
        ser = [powers[a] * (ps[a] / fact[a]) for a in range(D + 1)]
        if acc is None:
            acc = ser
        else:
            nxt = []
            for i in range(D + 1):
                term = None
                for a in range(i + 1):
                    prod_ = acc[a] * ser[i - a]
                    term = prod_ if term is None else term + prod_
                nxt.append(term)
            acc = nxt
    psums = [acc[j] * fact[j] for j in range(D + 1)]
    e = [Dual(fmpq(1), [0] * n)]
    for k in range(1, D + 1):
        term = None
        for i in range(1, k + 1):
            piece = e[k - i] * psums[i]
            if i % 2 == 0:
                piece = -piece
            term = piece if term is None else term + piece
        e.append(term / k)
    val = [None] * (D + 1)
    tans = [[None] * (D + 1) for _ in range(n)]
    for k in range(D + 1):
        sign = -1 if k % 2 else 1
        val[D - k] = sign * _as_q(e[k].val)
        for j in range(n):
            tans[j][D - k] = sign * _as_q(e[k].tan[j])
    return fmpq_poly(val), [fmpq_poly(t) for t in tans]


def _as_q(x):
    return x if isinstance(x, fmpq) else fmpq(x)


def resolve_type2(system, alpha):
    """Geometric resolution of all solutions of a type-2 start system.

    The linear form is sum_k alpha_k x_k (x coordinates only); multipliers
    are carried as extra coordinates. Raises BadAlpha if alpha fails to
    separate the solutions.
    """
    lag = system.lagrange
    n, s = lag.n, lag.s
    parts = []
    for B, e in _blocks(n, s):
        polys, mu = type2_univariates(system, B, e)
        if any(p.degree() < 1 for p in polys):
            continue
        q, dq = _composed_sum(polys, alpha)
        if not is_squarefree(q):
            raise BadAlpha("linear form does not separate the start points")
        qd = q.derivative()
        w = [-t for t in dq] + [qd * m for m in mu]
        parts.append(GeometricResolution(q, qd, w))
    res = merge_all(parts)
    if res is None:
        res = GeometricResolution.empty(lag.num_unknowns)
    if res.degree != system.count:
        raise InvalidSystem(f"expected {system.count} start points, found {res.degree}")
    return res
