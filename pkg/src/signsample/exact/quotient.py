"""Arithmetic in Q[U]/(q) and in (Q[U]/(q))[[tau]]."""

from flint import fmpq, fmpq_poly, fmpz, fmpz_poly

from ..errors import NotInvertible, RingMismatch
from .poly import coeff_list, monic, power_sums
from .series import Series

_SCALARS = (int, fmpq, fmpz)


class QuotientRing:
    """Q[U] modulo a monic squarefree polynomial q of degree D >= 1."""

    def __init__(self, modulus):
        if modulus.degree() < 1:
            raise ValueError("modulus must have positive degree")
        self.modulus = monic(modulus)
        self.degree = self.modulus.degree()
        self.mod_coeffs = coeff_list(self.modulus)
        self._traces = None

    def __call__(self, rep):
        if isinstance(rep, _SCALARS):
            rep = fmpq_poly([rep])
        return QuotientElement(rep % self.modulus, self)

    def gen(self):
        return self(fmpq_poly([0, 1]))

    def traces(self):
        """Tr(U^i) for i < D, the power sums of the roots of q."""
        if self._traces is None:
            self._traces = power_sums(self.modulus, self.degree - 1)
        return self._traces

    def __eq__(self, other):
        return isinstance(other, QuotientRing) and self.modulus == other.modulus

    def __hash__(self):
        return hash(tuple(str(c) for c in self.mod_coeffs))

    def __repr__(self):
        return f"QuotientRing({self.modulus})"


class QuotientElement:
    __slots__ = ("rep", "ring")

    def __init__(self, rep, ring):
        self.rep = rep
        self.ring = ring

    def _coerce(self, other):
        if isinstance(other, QuotientElement):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch("elements of different quotient rings")
            return other.rep
        if isinstance(other, _SCALARS):
            return fmpq_poly([other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuotientElement(self.rep + o, self.ring)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuotientElement(self.rep - o, self.ring)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuotientElement(o - self.rep, self.ring)

    def __neg__(self):
        return QuotientElement(-self.rep, self.ring)

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return QuotientElement(self.rep * other, self.ring)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuotientElement((self.rep * o) % self.ring.modulus, self.ring)

    __rmul__ = __mul__

    def inverse(self):
        g, s, _ = self.rep.xgcd(self.ring.modulus)
        if g.degree() != 0:
            raise NotInvertible(monic(g) if not g.is_zero() else self.ring.modulus)
        return QuotientElement((s / g[0]) % self.ring.modulus, self.ring)

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            return QuotientElement(self.rep / other, self.ring)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * QuotientElement(o, self.ring).inverse()

    def is_zero(self):
        return self.rep.is_zero()

    def trace(self):
        tr = self.ring.traces()
        return sum((self.rep[i] * tr[i] for i in range(self.rep.degree() + 1)), fmpq(0))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.rep == o

    __hash__ = None

    def __repr__(self):
        return f"[{self.rep} mod {self.ring.modulus}]"


class QSeries:
    """Element of (Q[U]/(q))[[tau]] stored as D series, one per power of U."""

    __slots__ = ("parts", "ring", "prec")

    def __init__(self, parts, ring, prec):
        self.parts = parts
        self.ring = ring
        self.prec = prec

    @classmethod
    def from_element(cls, elem, prec):
        ring = elem.ring
        parts = [fmpq_poly([elem.rep[i]]) for i in range(ring.degree)]
        return cls(parts, ring, prec)

    @classmethod
    def from_parts(cls, series_parts, ring):
        prec = min(s.prec for s in series_parts)
        return cls([s.poly.truncate(prec) for s in series_parts], ring, prec)

    def with_prec(self, prec):
        return QSeries([p.truncate(prec) for p in self.parts], self.ring, prec)

    def shift(self, k):
        """Multiply by tau^k (k >= 0) or divide by tau^-k (k < 0, exact)."""
        if k >= 0:
            return QSeries([p.left_shift(k) for p in self.parts], self.ring, self.prec + k)
        return QSeries([p.right_shift(-k) for p in self.parts], self.ring, self.prec + k)

    def part(self, i):
        return Series(self.parts[i], self.prec)

    def element_at(self, k):
        """Coefficient of tau^k, as an element of Q[U]/(q)."""
        return self.ring(fmpq_poly([p[k] for p in self.parts]))

    def valuation(self):
        return min(Series(p, self.prec).valuation() for p in self.parts)

    def trace(self):
        tr = self.ring.traces()
        acc = fmpq_poly([])
        for i, p in enumerate(self.parts):
            if tr[i] != 0:
                acc += p * tr[i]
        return Series(acc, self.prec)

    def _binary(self, other, op):
        if isinstance(other, QSeries):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch("series over different quotient rings")
            prec = min(self.prec, other.prec)
            parts = [op(a, b) for a, b in zip(self.parts, other.parts)]
            if prec < max(self.prec, other.prec):
                parts = [p.truncate(prec) for p in parts]
            return QSeries(parts, self.ring, prec)
        if isinstance(other, Series):
            prec = min(self.prec, other.prec)
            parts = list(self.parts)
            parts[0] = op(parts[0], other.poly)
            return QSeries([p.truncate(prec) for p in parts], self.ring, prec)
        if isinstance(other, _SCALARS):
            parts = list(self.parts)
            parts[0] = op(parts[0], fmpq_poly([other]))
            return QSeries(parts, self.ring, self.prec)
        return NotImplemented

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return QSeries([-p for p in self.parts], self.ring, self.prec)

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return QSeries([p * other for p in self.parts], self.ring, self.prec)
        if isinstance(other, Series):
            prec = min(self.prec, other.prec)
            return QSeries([p.mul_low(other.poly, prec) for p in self.parts], self.ring, prec)
        if not isinstance(other, QSeries):
            return NotImplemented
        if other.ring is not self.ring and other.ring != self.ring:
            raise RingMismatch("series over different quotient rings")
        prec = min(self.prec, other.prec)
        D = self.ring.degree
        W = 2 * D - 1
        # Kronecker substitution: U^i tau^k -> z^(k W + i); products of
        # reduced elements have U-degree <= 2D - 2 < W, so nothing collides
        a, da = _pack(self.parts, W, prec)
        b, db = _pack(other.parts, W, prec)
        c = a.mul_low(b, prec * W).coeffs()
        c += [0] * (prec * W - len(c))
        den = da * db
        acc = [fmpq_poly(fmpz_poly(c[i::W]), den) for i in range(W)]
        q = self.ring.mod_coeffs
        for k in range(2 * D - 2, D - 1, -1):
            top = acc[k]
            if top.is_zero():
                continue
            for i in range(D):
                if q[i] != 0:
                    acc[k - D + i] -= top * q[i]
        return QSeries(acc[:D], self.ring, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            return QSeries([p / other for p in self.parts], self.ring, self.prec)
        return NotImplemented

    def __repr__(self):
        return f"QSeries({self.parts}, mod {self.ring.modulus}, prec={self.prec})"


def _pack(parts, W, prec):
    """Integer polynomial and common denominator for the substitution above."""
    den = fmpz(1)
    for p in parts:
        d = p.denom()
        den = den * d // den.gcd(d)
    c = [0] * (W * prec)
    for i, p in enumerate(parts):
        num = p.numer() * (den // p.denom())
        for k, a in enumerate(num.coeffs()[:prec]):
            c[k * W + i] = a
    return fmpz_poly(c), den
