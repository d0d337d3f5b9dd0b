"""Exact arithmetic: rationals, polynomials, series, quotient rings, jets."""

from .dual import Dual
from .linalg import cauchy_matrix, cauchy_solve, determinant, inverse, leverrier, mat_mul, ring_inverse, solve
from .pade import common_denominator, pade_reconstruct, pade_tau, reconstruct_common, series_of
from .poly import (
    DensePoly,
    QPoly,
    Rational,
    chebyshev,
    chebyshev_t,
    coeff_list,
    exact_div,
    is_squarefree,
    monic,
    poly_gcd,
    poly_mul,
    power_sums,
    product_tree,
    qpoly,
    rational_str,
    squarefree_part,
    to_rational,
)
from .quotient import QSeries, QuotientElement, QuotientRing
from .series import Series
