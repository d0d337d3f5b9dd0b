"""Brute-force cross-checks for the sampler and the sign computations.

``grid_feasible`` evaluates the family exactly at the nodes of a rational
grid, which gives a lower bound on the feasible strict conditions.
``verify_point_signs`` recomputes the signs at the real points of a
resolution through certified ball arithmetic (root enclosures from flint,
refined until every sign is decided) and compares with the Sturm path.
"""

import itertools
from dataclasses import dataclass, field

from flint import arb, ctx, fmpq, fmpq_poly, fmpz_poly

from .errors import VerificationMismatch
from .exact.poly import coeff_list, exact_div, to_rational
from .resolution import invert_mod
from .signs import isolate_real_roots, sign, sign_matrix, signs_at_roots
from .slp import densify

MAX_PREC = 1 << 16


@dataclass
class GridReport:
    step: fmpq
    box: list
    vectors: set = field(default_factory=set)
    representatives: dict = field(default_factory=dict)

    def closed_vectors(self):
        """Closed conditions implied by the strict ones found (f = 0 meets all three)."""
        out = set()
        for v in self.vectors:
            out.update(itertools.product(*[(-1, 0, 1) if s == 0 else (s,) for s in v]))
        return out


def _box(box, n):
    if isinstance(box, (int, fmpq, str)):
        b = to_rational(box)
        return [(-b, b)] * n
    return [(to_rational(lo), to_rational(hi)) for lo, hi in box]


def grid_feasible(family, box, step):
    """Strict sign vectors realized at the nodes of ``box`` spaced by ``step``.

    ``box`` is either a bound B (meaning [-B, B]^n) or a list of (lo, hi).
    """
    step = to_rational(step)
    if step <= 0:
        raise ValueError("step must be positive")
    box = _box(box, family.num_inputs)
    report = GridReport(step, box)
    axes = []
    for lo, hi in box:
        count = int((hi - lo) / step) if hi >= lo else -1
        axes.append([lo + k * step for k in range(count + 1)])
    if any(not a for a in axes):
        return report
    for node in itertools.product(*axes):
        vec = tuple(sign(v) for v in family.eval(list(node)))
        if vec not in report.vectors:
            report.vectors.add(vec)
            report.representatives[vec] = list(node)
    return report


# ---------------------------------------------------------------- ball arithmetic path


def _integer_poly(p):
    return fmpz_poly([int(c) for c in coeff_list(p * p.denom())])


def _ball(c):
    c = fmpq(c)
    return arb(c.p) / arb(c.q)


def _horner(p, x):
    acc = arb(0)
    for c in reversed(coeff_list(p)):
        acc = acc * x + _ball(c)
    return acc


def _real_roots(q, prec):
    """Sorted, pairwise disjoint enclosures of the real roots of q."""
    zq = _integer_poly(q)
    while True:
        old = ctx.prec
        ctx.prec = prec
        try:
            roots = [r.real for r, _ in zq.complex_roots() if r.imag == 0]
        finally:
            ctx.prec = old
        roots.sort(key=lambda r: float(r.mid()))
        if all(a < b for a, b in zip(roots, roots[1:])):
            return roots
        prec *= 2
        if prec > MAX_PREC:
            raise VerificationMismatch("could not separate the real roots")


def _dense_residue(poly, q, v):
    """poly(v_1(U), ..., v_n(U)) mod q by expanding the monomials."""
    acc = fmpq_poly([])
    powers = [[fmpq_poly([1])] for _ in v]
    for exps, c in poly.to_dict().items():
        term = fmpq_poly([c])
        for k, e in enumerate(exps):
            while len(powers[k]) <= e:
                powers[k].append((powers[k][-1] * v[k]) % q)
            term = (term * powers[k][e]) % q
        acc += term
    return acc % q


def _decide(res, dense, i, u_index, roots_at, v_cache):
    """Sign of f_i at the u_index-th real root, refining precision as needed."""
    prec = 64
    zero_split = None
    while prec <= MAX_PREC:
        u = roots_at(prec)[u_index]
        old = ctx.prec
        ctx.prec = prec
        try:
            den = _horner(res.qtilde, u)
            point = [_horner(wk, u) / den for wk in res.w]
            val = dense[i](*point)
        finally:
            ctx.prec = old
        if val > 0:
            return 1, {"prec": prec}
        if val < 0:
            return -1, {"prec": prec}
        if zero_split is None:
            v = v_cache()
            r = _dense_residue(dense[i], res.q, v)
            if r.is_zero():
                return 0, {"prec": prec, "zero": "identically"}
            h = r.gcd(res.q)
            zero_split = (h, exact_div(res.q, h)) if h.degree() > 0 else False
        if zero_split:
            h, rest = zero_split
            old = ctx.prec
            ctx.prec = prec
            try:
                on_rest = _horner(rest, u)
            finally:
                ctx.prec = old
            if not on_rest.contains(0):
                return 0, {"prec": prec, "zero": f"gcd degree {h.degree()}"}
        prec *= 2
    raise VerificationMismatch("sign undecided at maximal precision")


def verify_point_signs(res, family, expected=None):
    """Sign vectors of the family at the real points of ``res`` in increasing
    root order, recomputed by ball arithmetic.

    Compared against ``expected`` (or the Sturm path when not given); raises
    VerificationMismatch on any disagreement. Returns (vectors, proofs).
    """
    if res.is_empty():
        return [], []
    m = family.num_outputs
    dense = [_as_callable(f) for f in densify(family)]
    cache = {}

    def roots_at(prec):
        if prec not in cache:
            cache[prec] = _real_roots(res.q, prec)
        return cache[prec]

    param = []

    def v_cache():
        if not param:
            inv = invert_mod(res.qtilde, res.q)
            param.extend((wk * inv) % res.q for wk in res.w)
        return param

    count = len(roots_at(64))
    vectors, proofs = [], []
    for j in range(count):
        vec, proof = [], []
        for i in range(m):
            s, p = _decide(res, dense, i, j, roots_at, v_cache)
            vec.append(s)
            proof.append(p)
        vectors.append(tuple(vec))
        proofs.append(proof)
    if expected is None:
        ivs = isolate_real_roots(res.q)
        residues = res.compose(family)
        cols = [signs_at_roots(res.q, g, ivs) for g in residues]
        expected = [tuple(col[j] for col in cols) for j in range(len(ivs))]
    if [tuple(v) for v in expected] != vectors:
        raise VerificationMismatch(f"sign vectors differ: Sturm {expected} vs balls {vectors}")
    return vectors, proofs


class _as_callable:
    """Dense polynomial usable both for ball evaluation and for residues."""

    def __init__(self, poly):
        self.poly = poly
        self.terms = list(poly.to_dict().items())

    def __call__(self, *xs):
        acc = arb(0)
        for exps, c in self.terms:
            term = _ball(c)
            for x, e in zip(xs, exps):
                if e:
                    term = term * x ** e
            acc += term
        return acc

    def to_dict(self):
        return dict(self.terms)


def verify_sample(points, family):
    """Run verify_point_signs on every resolution of a sample set against
    the sign matrix used for the condition list."""
    sm = sign_matrix(points, family)
    out = {}
    for r, res in enumerate(points.resolutions):
        if res.is_empty():
            continue
        expected = [sm.rows[(r, j)] for j in range(len(sm.intervals.get(r, [])))]
        out[r] = verify_point_signs(res, family, expected)
    return out
