"""First-order jets: a value together with n tangent components."""


class Dual:
    """Element a + sum_k b_k eps_k with eps_j * eps_k = 0.

    The base ring is whatever the components are (rationals, series, ...).
    Anything that is not a Dual is treated as a constant.
    """

    __slots__ = ("val", "tan")

    def __init__(self, val, tan):
        self.val = val
        self.tan = tuple(tan)

    @classmethod
    def variable(cls, val, index, n):
        tan = [0] * n
        tan[index] = 1
        return cls(val, tan)

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, [a + b for a, b in zip(self.tan, other.tan)])
        return Dual(self.val + other, self.tan)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, [a - b for a, b in zip(self.tan, other.tan)])
        return Dual(self.val - other, self.tan)

    def __rsub__(self, other):
        return Dual(other - self.val, [-a for a in self.tan])

    def __neg__(self):
        return Dual(-self.val, [-a for a in self.tan])

    def __mul__(self, other):
        if isinstance(other, Dual):
            a, b = self.val, other.val
            tan = []
            for x, y in zip(self.tan, other.tan):
                tan.append(_mul_add(a, y, x, b))
            return Dual(a * b, tan)
        return Dual(self.val * other, [x * other for x in self.tan])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            return NotImplemented
        return Dual(self.val / other, [x / other for x in self.tan])

    def __repr__(self):
        return f"Dual({self.val!r}, {self.tan!r})"


def _mul_add(a, y, x, b):
    # a*y + x*b while skipping literal integer zeros
    left = 0 if (isinstance(y, int) and y == 0) else a * y
    right = 0 if (isinstance(x, int) and x == 0) else x * b
    if isinstance(left, int) and left == 0:
        return right
    if isinstance(right, int) and right == 0:
        return left
    return left + right
