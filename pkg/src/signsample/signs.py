"""Signs of polynomials at the real points of geometric resolutions.

Real roots of q are isolated by Sturm sequences with dyadic endpoints; the
sign of g at each root is a Tarski query, i.e. the Sturm count of the
signed remainder sequence of (q, q' g) on the isolating interval.
"""

import itertools
from dataclasses import dataclass, field

from flint import fmpq

STRICT = "strict"
CLOSED = "closed"
STRICT_SYMBOLS = {-1: "-", 0: "0", 1: "+"}
CLOSED_SYMBOLS = {-1: "<=", 0: "=", 1: ">="}


def compose_mod(program, res):
    """Residues g_i(v(U)) mod q for every output g_i of ``program``."""
    return res.compose(program)


def sign(x):
    return (x > 0) - (x < 0)


def signed_remainders(a, b):
    seq = [a, b]
    while not seq[-1].is_zero():
        rem = seq[-2] % seq[-1]
        if rem.is_zero():
            break
        seq.append(-rem)
    return seq


def sign_variations(seq, x):
    """Sign changes of the sequence evaluated at x (x=None means +infinity,
    x="-inf" means -infinity)."""
    signs = []
    for p in seq:
        if x is None:
            s = sign(p.leading_coefficient())
        elif isinstance(x, str):
            s = sign(p.leading_coefficient()) * (-1 if p.degree() % 2 else 1)
        else:
            s = sign(p(x))
        if s:
            signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def cauchy_bound(q):
    c = q.coeffs()
    lead = abs(c[-1])
    return 1 + max((abs(x) / lead for x in c[:-1]), default=fmpq(0))


def _dyadic_above(x):
    k = 1
    while k <= x:
        k *= 2
    return fmpq(k)


@dataclass
class RootInterval:
    """Isolating interval (lo, hi] containing exactly one root, or lo == hi for an exact rational root."""

    lo: fmpq
    hi: fmpq

    @property
    def exact(self):
        return self.lo == self.hi


def isolate_real_roots(q):
    """Sorted isolating intervals of the real roots of a squarefree q."""
    if q.degree() < 1:
        return []
    seq = signed_remainders(q, q.derivative())
    B = _dyadic_above(cauchy_bound(q))
    out = []
    stack = [(-B, B, sign_variations(seq, -B), sign_variations(seq, B))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        count = vlo - vhi
        if count == 0:
            continue
        if count == 1:
            out.append(RootInterval(lo, hi))
            continue
        mid = (lo + hi) / 2
        if q(mid) == 0:
            out.append(RootInterval(mid, mid))
            # shrink away from the exact root on both sides
            eps = (hi - lo) / 4
            while True:
                a, b = mid - eps, mid + eps
                va, vb = sign_variations(seq, a), sign_variations(seq, b)
                if va - vb == 1 and q(a) != 0 and q(b) != 0:
                    break
                eps /= 2
            stack.append((lo, a, vlo, va))
            stack.append((b, hi, vb, vhi))
            continue
        vmid = sign_variations(seq, mid)
        stack.append((lo, mid, vlo, vmid))
        stack.append((mid, hi, vmid, vhi))
    out.sort(key=lambda r: r.lo)
    return out


def tarski_query(q, g, interval, dq=None):
    """#{roots with g > 0} - #{roots with g < 0} in (lo, hi]."""
    if interval.exact:
        return sign(g(interval.lo))
    dq = q.derivative() if dq is None else dq
    seq = signed_remainders(q, (dq * g) % q)
    return sign_variations(seq, interval.lo) - sign_variations(seq, interval.hi)


def signs_at_roots(q, g, intervals=None):
    """Sign of g at each real root of the squarefree q, in increasing root order."""
    intervals = isolate_real_roots(q) if intervals is None else intervals
    g = g % q if q.degree() >= 1 else g
    dq = q.derivative()
    if g.is_zero():
        return [0] * len(intervals)
    return [tarski_query(q, g, iv, dq) for iv in intervals]


@dataclass
class SignMatrix:
    """Sign vectors of all polynomials at every real sample point.

    rows[(r, j)] is the vector at root j of resolution r.
    """

    m: int
    rows: dict = field(default_factory=dict)
    intervals: dict = field(default_factory=dict)


def sign_matrix(points, family):
    sm = SignMatrix(family.num_outputs)
    for r, res in enumerate(points.resolutions):
        if res.is_empty():
            continue
        ivs = isolate_real_roots(res.q)
        sm.intervals[r] = ivs
        if not ivs:
            continue
        residues = compose_mod(family, res)
        cols = [signs_at_roots(res.q, g, ivs) for g in residues]
        for j in range(len(ivs)):
            sm.rows[(r, j)] = tuple(col[j] for col in cols)
    return sm


@dataclass
class SignCondition:
    kind: str
    signs: tuple
    witnesses: list = field(default_factory=list)
    derived: bool = False

    def render(self):
        if self.kind == STRICT:
            return "".join(STRICT_SYMBOLS[s] for s in self.signs)
        return " ".join(CLOSED_SYMBOLS[s] for s in self.signs)

    def matches(self, sigma):
        """Does the condition match a pattern over '<', '=', '>', '*'?"""
        table = {"<": -1, "=": 0, ">": 1}
        return all(c == "*" or table[c] == s for c, s in zip(sigma, self.signs))


def _closed_options(s):
    return (-1, 0, 1) if s == 0 else (s,)


def list_conditions(points, family, kind=STRICT, matrix=None):
    """Distinct strict or closed sign conditions realized at the sample points.

    Closed conditions use -1, 0, 1 for <=, =, >=; a point where f_i = 0
    satisfies all three.
    """
    sm = sign_matrix(points, family) if matrix is None else matrix
    found = {}
    for key in sorted(sm.rows):
        vec = sm.rows[key]
        options = [vec] if kind == STRICT else itertools.product(*[_closed_options(s) for s in vec])
        for v in options:
            found.setdefault(tuple(v), []).append(key)
    return [SignCondition(kind, v, w) for v, w in sorted(found.items())]


def expand_equalities(conditions):
    """Add every vector obtained by turning some '=' entries into '<' or '>'.

    Added vectors are flagged as derived and carry no witnesses.
    """
    seen = {c.signs: c for c in conditions}
    out = list(conditions)
    for c in conditions:
        zeros = [i for i, s in enumerate(c.signs) if s == 0]
        for repl in itertools.product((-1, 0, 1), repeat=len(zeros)):
            v = list(c.signs)
            for i, s in zip(zeros, repl):
                v[i] = s
            v = tuple(v)
            if v not in seen:
                new = SignCondition(c.kind, v, [], derived=True)
                seen[v] = new
                out.append(new)
    out.sort(key=lambda c: c.signs)
    return out


def evaluate_signs_at_rational(family, x):
    return tuple(sign(v) for v in family.eval([fmpq(c) for c in x]))


def isolate_to_width(q, interval, width):
    """Shrink an isolating interval by bisection until hi - lo <= width."""
    if interval.exact:
        return interval
    seq = signed_remainders(q, q.derivative())
    lo, hi = interval.lo, interval.hi
    vlo = sign_variations(seq, lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        if q(mid) == 0:
            return RootInterval(mid, mid)
        vmid = sign_variations(seq, mid)
        if vlo - vmid == 1:
            hi = mid
        else:
            lo, vlo = mid, vmid
    return RootInterval(lo, hi)


def approximate_points(res, width=fmpq(1, 2 ** 30)):
    """Rational approximations (midpoint values of v_k) of the real points."""
    out = []
    if res.is_empty():
        return out
    v = [p.rep for p in res.parametrization()]
    for iv in isolate_real_roots(res.q):
        iv = isolate_to_width(res.q, iv, width)
        u = (iv.lo + iv.hi) / 2
        out.append([vk(u) for vk in v])
    return out


def _directions(n, rng, extra=8):
    dirs = []
    for i in range(n):
        for s in (1, -1):
            e = [fmpq(0)] * n
            e[i] = fmpq(s)
            dirs.append(e)
    for _ in range(extra):
        dirs.append([fmpq(rng.randint(-64, 64), 64) for _ in range(n)])
    return dirs


def _line_resolution(family, i, a):
    """Points of {f_i = 0} on the vertical line x_1 = a (two variables)."""
    from flint import fmpq_poly

    from .exact.poly import squarefree_part
    from .resolution import GeometricResolution

    U = fmpq_poly([0, 1])
    u = family.select([i]).eval([fmpq_poly([a]), U])[0]
    if not isinstance(u, fmpq_poly) or u.degree() < 1:
        return None
    return GeometricResolution.from_parametrization(squarefree_part(u), [fmpq_poly([a]), U])


def _vectors_of(res, family):
    ivs = isolate_real_roots(res.q)
    if not ivs:
        return []
    cols = [signs_at_roots(res.q, g, ivs) for g in compose_mod(family, res)]
    return [tuple(col[j] for col in cols) for j in range(len(ivs))]


def perturbation_witnesses(points, family, matrix=None, radii=None, seed=0):
    """Extra sample points near the algebraic sample points that realize
    sign vectors not yet witnessed.

    Around every real sample point where some f_i vanishes, the family is
    evaluated exactly at x + r*e for a few directions e and radii r. With
    two variables, the real points of {f_i = 0} on the vertical lines
    x_1 = x_1 +- r are tried as well. Every returned (vectors, resolution)
    pair is exact, so the search only adds true conditions; it is a
    heuristic for completeness.
    """
    import random

    from .resolution import GeometricResolution

    sm = sign_matrix(points, family) if matrix is None else matrix
    radii = radii or [fmpq(1, 2 ** k) for k in (6, 10, 14, 18)]
    rng = random.Random(seed)
    dirs = _directions(points.n, rng)
    seen = set(sm.rows.values())
    found = []

    def offer(vectors, res):
        new = sorted(set(v for v in vectors if v not in seen))
        if new:
            seen.update(new)
            found.append((new, res))

    for r, res in enumerate(points.resolutions):
        if r not in sm.intervals or not any(0 in sm.rows[(r, j)] for j in range(len(sm.intervals[r]))):
            continue
        approx = approximate_points(res, fmpq(1, 2 ** 64))
        for j, x in enumerate(approx):
            zeros = [i for i, s in enumerate(sm.rows[(r, j)]) if s == 0]
            if not zeros:
                continue
            for rad in radii:
                for e in dirs:
                    y = [a + rad * b for a, b in zip(x, e)]
                    offer([evaluate_signs_at_rational(family, y)], GeometricResolution.point(y))
                if points.n != 2:
                    continue
                for a in (x[0] - rad, x[0] + rad):
                    for i in zeros:
                        line = _line_resolution(family, i, a)
                        if line is not None:
                            offer(_vectors_of(line, family), line)
    return found
