"""Univariate polynomials.

Rational polynomials are flint ``fmpq_poly`` objects throughout the package.
``DensePoly`` covers the other coefficient rings (series, dual numbers,
quotient elements) where only ring operations are needed.
"""

from fractions import Fraction

from flint import fmpq, fmpq_poly, fmpz

from ..errors import InexactDivision, RingMismatch

Rational = fmpq
QPoly = fmpq_poly


def to_rational(value):
    """Convert ints, Fractions, decimal/rational strings and fmpq to fmpq."""
    if isinstance(value, fmpq):
        return value
    if isinstance(value, (int, fmpz)):
        return fmpq(value)
    if isinstance(value, Fraction):
        return fmpq(value.numerator, value.denominator)
    if isinstance(value, str):
        frac = Fraction(value.strip())
        return fmpq(frac.numerator, frac.denominator)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def rational_str(value):
    value = to_rational(value)
    if value.q == 1:
        return str(value.p)
    return f"{value.p}/{value.q}"


def qpoly(coeffs):
    """Build a rational polynomial from coefficients listed low to high."""
    return fmpq_poly([to_rational(c) for c in coeffs])


def coeff_list(p):
    """Coefficients low to high; [] for the zero polynomial."""
    return list(p.coeffs())


def monic(p):
    if p.is_zero():
        return p
    return p / p.leading_coefficient()


def poly_gcd(a, b):
    """Monic gcd; gcd(0, 0) = 0."""
    if a.is_zero():
        return monic(b)
    if b.is_zero():
        return monic(a)
    return a.gcd(b)


def exact_div(a, b):
    quo, rem = divmod(a, b)
    if not rem.is_zero():
        raise InexactDivision(f"{b} does not divide {a}")
    return quo


def squarefree_part(p):
    """Monic squarefree part. Zero maps to zero."""
    if p.is_zero():
        return p
    if p.degree() == 0:
        return fmpq_poly([1])
    return monic(exact_div(p, p.gcd(p.derivative())))


def is_squarefree(p):
    if p.degree() <= 0:
        return not p.is_zero()
    return p.gcd(p.derivative()).degree() == 0


def chebyshev_t(k):
    """Chebyshev polynomial of the first kind of any degree k >= 0."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    x = fmpq_poly([0, 1])
    prev, cur = fmpq_poly([1]), x
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def chebyshev(d):
    """Degree-d Chebyshev polynomial used by the type-2 start systems (d even, >= 2)."""
    if d < 2 or d % 2:
        raise ValueError(f"expected an even degree >= 2, got {d}")
    return chebyshev_t(d)


def power_sums(p, count):
    """Power sums s_0..s_count of the roots of a nonzero polynomial.

    Uses Newton's identities on the monic normalization.
    """
    if p.is_zero():
        raise ValueError("power sums of the zero polynomial")
    c = coeff_list(monic(p))
    deg = len(c) - 1
    # e_k = (-1)^k * c[deg - k]
    sums = [fmpq(deg)]
    for k in range(1, count + 1):
        acc = fmpq(0)
        if k <= deg:
            acc = -k * c[deg - k]
        for i in range(1, min(k - 1, deg) + 1):
            acc -= c[deg - i] * sums[k - i]
        sums.append(acc)
    return sums


class DensePoly:
    """Dense univariate polynomial over an arbitrary commutative ring.

    ``ring`` is a tag used to refuse mixing polynomials over different rings.
    """

    __slots__ = ("coeffs", "ring")

    def __init__(self, coeffs, ring="generic"):
        self.coeffs = list(coeffs)
        self.ring = ring

    def degree(self):
        return len(self.coeffs) - 1

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatch(f"cannot combine polynomials over {self.ring} and {other.ring}")

    def __add__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return DensePoly(out, self.ring)

    def __mul__(self, other):
        return poly_mul(self, other)

    def __repr__(self):
        return f"DensePoly({self.coeffs!r}, ring={self.ring!r})"


def poly_mul(a, b):
    """Product of two polynomials over the same ring."""
    if isinstance(a, fmpq_poly) and isinstance(b, fmpq_poly):
        return a * b
    if isinstance(a, fmpq_poly) or isinstance(b, fmpq_poly):
        raise RingMismatch("cannot multiply a rational polynomial by a DensePoly")
    a._check(b)
    if not a.coeffs or not b.coeffs:
        return DensePoly([], a.ring)
    out = [None] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        for j, y in enumerate(b.coeffs):
            term = x * y
            out[i + j] = term if out[i + j] is None else out[i + j] + term
    return DensePoly(out, a.ring)


def product_tree(polys):
    """Balanced product of a non-empty list of polynomials."""
    items = list(polys)
    if not items:
        raise ValueError("empty product")
    while len(items) > 1:
        nxt = [poly_mul(items[i], items[i + 1]) for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]
