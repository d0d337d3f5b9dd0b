"""Geometric resolutions of finite point sets.

A resolution (q, qtilde, w_1..w_n) describes the points
(w_1(u)/qtilde(u), ..., w_n(u)/qtilde(u)) for the roots u of q, where q is
squarefree and qtilde is invertible modulo q.
"""

from dataclasses import dataclass, field

from flint import fmpq_poly

from .errors import BadAlpha, NotInvertible
from .exact.poly import coeff_list, monic, rational_str, to_rational
from .exact.quotient import QuotientRing


@dataclass
class GeometricResolution:
    q: fmpq_poly
    qtilde: fmpq_poly
    w: list
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.q.is_zero():
            raise ValueError("q must be nonzero")
        lead = self.q.leading_coefficient()
        if lead != 1:
            self.q = self.q / lead
            self.qtilde = self.qtilde / lead
            self.w = [wk / lead for wk in self.w]
        if self.q.degree() > 0:
            self.qtilde = self.qtilde % self.q
            self.w = [wk % self.q for wk in self.w]
        else:
            self.qtilde = fmpq_poly([1])
            self.w = [fmpq_poly([]) for _ in self.w]

    @property
    def degree(self):
        return self.q.degree()

    @property
    def nvars(self):
        return len(self.w)

    def is_empty(self):
        return self.q.degree() == 0

    @classmethod
    def from_parametrization(cls, q, v, provenance=None):
        """Resolution with qtilde = 1 and coordinates v_k(u)."""
        return cls(q, fmpq_poly([1]), list(v), dict(provenance or {}))

    @classmethod
    def point(cls, coords, provenance=None):
        """The single point ``coords`` (with q = U)."""
        v = [fmpq_poly([to_rational(c)]) for c in coords]
        return cls(fmpq_poly([0, 1]), fmpq_poly([1]), v, dict(provenance or {}))

    @classmethod
    def empty(cls, nvars, provenance=None):
        return cls(fmpq_poly([1]), fmpq_poly([1]), [fmpq_poly([])] * nvars, dict(provenance or {}))

    def ring(self):
        return QuotientRing(self.q)

    def check(self):
        """Raise BadAlpha unless q is squarefree and qtilde is a unit mod q."""
        if self.is_empty():
            return
        if self.q.gcd(self.q.derivative()).degree() > 0:
            raise BadAlpha("q is not squarefree")
        if self.q.gcd(self.qtilde).degree() > 0:
            raise BadAlpha("qtilde is not invertible modulo q")

    def parametrization(self):
        """Coordinates v_k = w_k / qtilde as elements of Q[U]/(q)."""
        R = self.ring()
        inv = R(self.qtilde).inverse()
        return [R(wk) * inv for wk in self.w]

    def compose(self, program):
        """Evaluate an Slp at the points, returning residues modulo q."""
        if program.num_inputs != self.nvars:
            raise ValueError("program arity does not match the resolution")
        if self.is_empty():
            return [fmpq_poly([]) for _ in range(program.num_outputs)]
        vals = program.eval(self.parametrization())
        R = self.ring()
        out = []
        for v in vals:
            out.append(v.rep if hasattr(v, "rep") else R(v).rep)
        return out

    def map_linear(self, M, shift=None):
        """Image of the points under x -> M x (+ shift)."""
        n = self.nvars
        w = []
        for i in range(n):
            acc = fmpq_poly([])
            for j in range(n):
                if M[i][j] != 0:
                    acc += self.w[j] * to_rational(M[i][j])
            if shift is not None and shift[i] != 0:
                acc += self.qtilde * to_rational(shift[i])
            w.append(acc)
        return GeometricResolution(self.q, self.qtilde, w, dict(self.provenance))

    def with_prefix(self, values):
        """Prepend constant coordinates."""
        pre = [self.qtilde * to_rational(c) for c in values]
        return GeometricResolution(self.q, self.qtilde, pre + list(self.w), dict(self.provenance))

    def project(self, indices):
        return GeometricResolution(self.q, self.qtilde, [self.w[i] for i in indices], dict(self.provenance))

    def merge(self, other):
        """Union with a resolution of a disjoint point set (coprime q's).

        Both must use the same linear form; raises BadAlpha otherwise.
        """
        if self.is_empty():
            return GeometricResolution(other.q, other.qtilde, list(other.w), dict(self.provenance))
        if other.is_empty():
            return GeometricResolution(self.q, self.qtilde, list(self.w), dict(self.provenance))
        if self.q.gcd(other.q).degree() > 0:
            raise BadAlpha("point sets share a value of the linear form")
        q = self.q * other.q
        qt = self.q * other.qtilde + self.qtilde * other.q
        w = [a * other.q + b * self.q for a, b in zip(self.w, other.w)]
        return GeometricResolution(q, qt, w, dict(self.provenance))

    def numeric_points(self):
        """Complex approximations of the points (for debugging and plots)."""
        from flint import fmpz_poly

        pts = []
        if self.is_empty():
            return pts
        num = fmpz_poly([int(c) for c in (self.q * self.q.denom()).coeffs()])
        for root, _ in num.complex_roots():
            den = _eval_acb(self.qtilde, root)
            pts.append([_eval_acb(wk, root) / den for wk in self.w])
        return pts

    def __eq__(self, other):
        if not isinstance(other, GeometricResolution):
            return NotImplemented
        return (self.q == other.q and self.qtilde == other.qtilde
                and len(self.w) == len(other.w)
                and all(a == b for a, b in zip(self.w, other.w)))

    def to_dict(self):
        return {
            "provenance": dict(self.provenance),
            "q": [rational_str(c) for c in coeff_list(self.q)],
            "qtilde": [rational_str(c) for c in coeff_list(self.qtilde)],
            "w": [[rational_str(c) for c in coeff_list(wk)] for wk in self.w],
        }

    @classmethod
    def from_dict(cls, data):
        def poly(cs):
            return fmpq_poly([to_rational(c) for c in cs])

        return cls(poly(data["q"]), poly(data["qtilde"]), [poly(wk) for wk in data["w"]],
                   dict(data.get("provenance", {})))


def _eval_acb(p, z):
    acc = 0 * z
    for c in reversed(coeff_list(p)):
        acc = acc * z + _acb_const(c)
    return acc


def _acb_const(c):
    from flint import acb, arb

    return acb(arb(c.p) / arb(c.q))


def merge_all(resolutions):
    out = None
    for r in resolutions:
        out = r if out is None else out.merge(r)
    return out


def invert_mod(a, q):
    g, s, _ = a.xgcd(q)
    if g.degree() != 0:
        raise NotInvertible(monic(g))
    return (s / g[0]) % q
