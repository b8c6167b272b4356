"""Exact scalars in the field Q(sqrt 2) and small dense linear algebra over exact fields.

Orthogonal bases of the corpus lattices (built from hyperbolic planes and
rescaled A1 blocks) have coordinates in Q(sqrt 2), so this field is enough to
run every geometric identity check without floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Q2:
    """An element a + b*sqrt(2) with rational a, b."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    @staticmethod
    def of(x) -> "Q2":
        if isinstance(x, Q2):
            return x
        return Q2(Fraction(x), Fraction(0))

    def __add__(self, other):
        other = Q2.of(other)
        return Q2(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return Q2(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-Q2.of(other))

    def __rsub__(self, other):
        return Q2.of(other) + (-self)

    def __mul__(self, other):
        other = Q2.of(other)
        return Q2(self.a * other.a + 2 * self.b * other.b,
                  self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def inverse(self) -> "Q2":
        den = self.a * self.a - 2 * self.b * self.b
        if den == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt 2)")
        return Q2(self.a / den, -self.b / den)

    def __truediv__(self, other):
        return self * Q2.of(other).inverse()

    def __rtruediv__(self, other):
        return Q2.of(other) * self.inverse()

    def __pow__(self, n: int) -> "Q2":
        if n < 0:
            return self.inverse() ** (-n)
        out = Q2.of(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Q2.of(other)
        if not isinstance(other, Q2):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 2.0 ** 0.5

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        return f"({self.a} + {self.b}*sqrt2)"


SQRT2 = Q2(Fraction(0), Fraction(1))
INV_SQRT2 = Q2(Fraction(0), Fraction(1, 2))


def _zero_like(x):
    return x * 0


def mat_vec(A, v):
    return [sum((A[i][j] * v[j] for j in range(len(v))), _zero_like(A[0][0]))
            for i in range(len(A))]


def mat_mul(A, B):
    n, m, k = len(A), len(B[0]), len(B)
    return [[sum((A[i][t] * B[t][j] for t in range(k)), _zero_like(A[0][0]))
             for j in range(m)] for i in range(n)]


def transpose(A):
    return [list(row) for row in zip(*A)]


def _is_zero(x) -> bool:
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


def solve(A, b):
    """Solve A x = b by Gaussian elimination over an exact field.

    A may be rectangular (rows x cols) as long as the system is consistent
    and has a unique solution on its column space; raises ValueError
    otherwise.
    """
    rows, cols = len(A), len(A[0])
    M = [list(A[i]) + [b[i]] for i in range(rows)]
    piv_cols = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if not _is_zero(M[i][c])), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c] if not hasattr(M[r][c], "inverse") else M[r][c].inverse()
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and not _is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [xi - f * xr for xi, xr in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if not _is_zero(M[i][cols]):
            raise ValueError("inconsistent linear system")
    if len(piv_cols) < cols:
        raise ValueError("underdetermined linear system")
    x = [None] * cols
    for i, c in enumerate(piv_cols):
        x[c] = M[i][cols]
    return x


def inverse(A):
    n = len(A)
    cols = []
    for j in range(n):
        e = [_zero_like(A[0][0]) for _ in range(n)]
        e[j] = A[0][0] * 0 + 1 if not isinstance(A[0][0], Q2) else Q2.of(1)
        cols.append(solve(A, e))
    return transpose(cols)


def kernel(A):
    """Basis of the right kernel of A over an exact field."""
    rows, cols = len(A), len(A[0])
    M = [list(r) for r in A]
    piv_of_col = {}
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if not _is_zero(M[i][c])), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = M[r][c].inverse() if hasattr(M[r][c], "inverse") else 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and not _is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [xi - f * xr for xi, xr in zip(M[i], M[r])]
        piv_of_col[c] = r
        r += 1
        if r == rows:
            break
    one = (Q2.of(1) if isinstance(A[0][0], Q2) else
           _zero_like(A[0][0]) + 1)
    basis = []
    for c in range(cols):
        if c in piv_of_col:
            continue
        v = [_zero_like(one) for _ in range(cols)]
        v[c] = one
        for pc, pr in piv_of_col.items():
            v[pc] = -M[pr][c]
        basis.append(v)
    return basis
