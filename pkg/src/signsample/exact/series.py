"""Truncated power series in tau = t - 1 with rational coefficients."""

from flint import fmpq, fmpq_poly, fmpz

from .poly import to_rational

_SCALARS = (int, fmpq, fmpz)


class Series:
    """A power series known modulo tau^prec.

    ``poly`` holds the truncation as a flint polynomial in tau. Arithmetic
    between series of different precision keeps the smaller one.
    """

    __slots__ = ("poly", "prec")

    def __init__(self, poly, prec):
        if poly.degree() >= prec:
            poly = poly.truncate(prec)
        self.poly = poly
        self.prec = prec

    @classmethod
    def from_coeffs(cls, coeffs, prec=None):
        coeffs = [to_rational(c) for c in coeffs]
        if prec is None:
            prec = len(coeffs)
        return cls(fmpq_poly(coeffs), prec)

    @classmethod
    def constant(cls, c, prec):
        return cls(fmpq_poly([to_rational(c)]), prec)

    @classmethod
    def t(cls, prec):
        """The deformation parameter t = 1 + tau."""
        return cls(fmpq_poly([1, 1]), prec)

    @property
    def coeffs(self):
        out = [self.poly[i] for i in range(self.prec)]
        return out

    def with_prec(self, prec):
        """Reinterpret the stored truncation at another precision."""
        return Series(self.poly, prec)

    def shift(self, k):
        """Multiply by tau^k (k >= 0) or divide by tau^-k (k < 0, exact)."""
        if k >= 0:
            return Series(self.poly.left_shift(k), self.prec + k)
        return Series(self.poly.right_shift(-k), self.prec + k)

    def valuation(self):
        if self.poly.is_zero():
            return self.prec
        for i in range(self.prec):
            if self.poly[i] != 0:
                return i
        return self.prec

    def is_zero(self):
        return self.poly.is_zero()

    def __add__(self, other):
        if isinstance(other, Series):
            return Series(self.poly + other.poly, min(self.prec, other.prec))
        if isinstance(other, _SCALARS):
            return Series(self.poly + other, self.prec)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Series(-self.poly, self.prec)

    def __sub__(self, other):
        if isinstance(other, Series):
            return Series(self.poly - other.poly, min(self.prec, other.prec))
        if isinstance(other, _SCALARS):
            return Series(self.poly - other, self.prec)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _SCALARS):
            return Series(other - self.poly, self.prec)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Series):
            prec = min(self.prec, other.prec)
            return Series(self.poly.mul_low(other.poly, prec), prec)
        if isinstance(other, _SCALARS):
            return Series(self.poly * other, self.prec)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            return Series(self.poly / other, self.prec)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Series):
            return self.prec == other.prec and self.poly == other.poly
        if isinstance(other, _SCALARS):
            return self.poly == fmpq_poly([other])
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"Series({self.poly}, prec={self.prec})"
