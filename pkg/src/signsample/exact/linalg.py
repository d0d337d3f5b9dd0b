"""Small dense linear algebra over exact rings (lists of lists)."""

from flint import fmpq, fmpz

from ..errors import SingularMatrix


def is_zero(x):
    # flint scalars expose is_zero() but it is not reliable; compare instead
    if isinstance(x, (int, fmpq, fmpz)):
        return x == 0
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


_is_zero = is_zero


def _inv(x):
    if hasattr(x, "inverse"):
        return x.inverse()
    return fmpq(1) / x


def identity(n, one=1):
    return [[one if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, m = len(A), len(B[0])
    inner = len(B)
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            acc = 0
            for k in range(inner):
                a = Ai[k]
                if isinstance(a, int) and a == 0:
                    continue
                b = B[k][j]
                if isinstance(b, int) and b == 0:
                    continue
                acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def mat_vec(A, v):
    return [row[0] for row in mat_mul(A, [[x] for x in v])]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[a * c for a in row] for row in A]


def solve(A, b):
    """Solve A x = b over a field by Gaussian elimination.

    Works for rationals and for quotient-ring elements (which raise
    NotInvertible when a pivot is a zero divisor).
    """
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("solve expects a square system")
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not _is_zero(M[r][col])), None)
        if piv is None:
            raise SingularMatrix(f"matrix is singular (column {col})")
        M[col], M[piv] = M[piv], M[col]
        inv = _inv(M[col][col])
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and not _is_zero(M[r][col]):
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def inverse(A):
    n = len(A)
    cols = [solve(A, [1 if i == j else 0 for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def determinant(A):
    """Determinant over a field via elimination (0 when singular)."""
    n = len(A)
    M = [list(row) for row in A]
    det = fmpq(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if not _is_zero(M[r][col])), None)
        if piv is None:
            return fmpq(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det = det * M[col][col]
        inv = _inv(M[col][col])
        for r in range(col + 1, n):
            if not _is_zero(M[r][col]):
                f = M[r][col] * inv
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return det


def cauchy_matrix(offsets, size=None):
    """A_ik = 1/(a_i + k) for k = 1..size."""
    size = len(offsets) if size is None else size
    return [[fmpq(1, 1) / (a + k) for k in range(1, size + 1)] for a in offsets]


def cauchy_solve(offsets, b):
    """Solve the square Cauchy system 1/(a_i + k) x = b exactly."""
    if len(set(offsets)) != len(offsets):
        raise SingularMatrix("Cauchy offsets must be distinct")
    return solve(cauchy_matrix(offsets), b)


def leverrier(A):
    """Faddeev-LeVerrier over a ring of characteristic zero.

    Returns (c, adj) where c[k] is the coefficient of lambda^k in
    det(lambda I - A) and adj satisfies A * adj = -c[0] * I, so that
    A^{-1} = -adj / c[0]. Only divisions by small integers occur.
    """
    n = len(A)
    c = [0] * (n + 1)
    c[n] = 1
    M = identity(n)
    AM = None
    for k in range(1, n + 1):
        if k > 1:
            M = [[AM[i][j] + (c[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        AM = mat_mul(A, M)
        tr = AM[0][0]
        for i in range(1, n):
            tr = tr + AM[i][i]
        c[n - k] = -tr / k
    return c, M


def ring_inverse(A):
    """Inverse of a matrix over a ring where only the determinant must be a unit."""
    c, M = leverrier(A)
    c0 = c[0]
    if isinstance(c0, int):
        c0 = fmpq(c0)
    scale = -_inv(c0)
    return [[x * scale for x in row] for row in M]
