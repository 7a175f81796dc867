"""Exact integer, quadratic-field and 2x2 integer-matrix arithmetic.

Everything here works on Python's arbitrary precision ``int`` and on
``fractions.Fraction``; no floating point is used on any decision path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, NamedTuple


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def sign(x) -> int:
    return (x > 0) - (x < 0)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``|n|`` by trial division."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# Q(sqrt d)


@dataclass(frozen=True)
class QuadNum:
    """The real number ``rat + irr * sqrt(d)`` with rational coordinates."""

    rat: Fraction
    irr: Fraction
    d: int

    def __post_init__(self):
        if self.d <= 0 or is_square(self.d):
            raise ValueError(f"d={self.d} must be a positive non-square")
        object.__setattr__(self, "rat", Fraction(self.rat))
        object.__setattr__(self, "irr", Fraction(self.irr))

    @classmethod
    def half(cls, u: int, v: int, d: int) -> "QuadNum":
        """``(u + v sqrt d) / 2``, the shape of Pell units."""
        return cls(Fraction(u, 2), Fraction(v, 2), d)

    def _check(self, other: "QuadNum") -> None:
        if other.d != self.d:
            raise ValueError(f"mismatched radicands {self.d} and {other.d}")

    def _coerce(self, other) -> "QuadNum":
        if isinstance(other, QuadNum):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return QuadNum(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadNum(self.rat + other.rat, self.irr + other.irr, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadNum(-self.rat, -self.irr, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return quad_mul(self, other)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadNum":
        return QuadNum(self.rat, -self.irr, self.d)

    def norm(self) -> Fraction:
        return self.rat * self.rat - self.d * self.irr * self.irr

    def inverse(self) -> "QuadNum":
        nm = self.norm()
        if nm == 0:
            raise ZeroDivisionError("zero has no inverse")
        c = self.conjugate()
        return QuadNum(c.rat / nm, c.irr / nm, self.d)

    def __pow__(self, k: int) -> "QuadNum":
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadNum(Fraction(1), Fraction(0), self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def sign(self) -> int:
        return quad_sign(self)

    def __float__(self) -> float:
        return float(self.rat) + float(self.irr) * self.d ** 0.5

    def __lt__(self, other) -> bool:
        return quad_sign(self - self._coerce(other)) < 0

    def __gt__(self, other) -> bool:
        return quad_sign(self - self._coerce(other)) > 0

    def __repr__(self):
        return f"QuadNum({self.rat} + {self.irr}*sqrt({self.d}))"


def quad_sign(x: QuadNum) -> int:
    """Exact sign of ``x.rat + x.irr * sqrt(x.d)``."""
    s_rat, s_irr = sign(x.rat), sign(x.irr)
    if s_irr == 0:
        return s_rat
    if s_rat == 0 or s_rat == s_irr:
        return s_irr
    # opposite signs: compare rat^2 with irr^2 * d (never equal, d non-square)
    if x.rat * x.rat > x.irr * x.irr * x.d:
        return s_rat
    return s_irr


def quad_mul(x: QuadNum, y: QuadNum) -> QuadNum:
    x._check(y)
    return QuadNum(
        x.rat * y.rat + x.d * x.irr * y.irr,
        x.rat * y.irr + x.irr * y.rat,
        x.d,
    )


# ---------------------------------------------------------------------------
# 2x2 integer matrices


class IntMatrix2(NamedTuple):
    """Row-major 2x2 integer matrix ``((a, b), (c, d))``."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> "IntMatrix2":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def from_columns(cls, col1, col2) -> "IntMatrix2":
        return cls(col1[0], col2[0], col1[1], col2[1])

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def col(self, j: int) -> tuple[int, int]:
        return (self.a, self.c) if j == 0 else (self.b, self.d)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def trace(self) -> int:
        return self.a + self.d

    def T(self) -> "IntMatrix2":
        return IntMatrix2(self.a, self.c, self.b, self.d)

    def adj(self) -> "IntMatrix2":
        """Adjugate: ``M @ M.adj() == det(M) * I``."""
        return IntMatrix2(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix2):
            return IntMatrix2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        x, y = other
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def __neg__(self):
        return IntMatrix2(-self.a, -self.b, -self.c, -self.d)

    def scale(self, k: int) -> "IntMatrix2":
        return IntMatrix2(k * self.a, k * self.b, k * self.c, k * self.d)

    def plus(self, other: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(*(x + y for x, y in zip(self, other)))

    def minus(self, other: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(*(x - y for x, y in zip(self, other)))

    def mod(self, m: int) -> "IntMatrix2":
        return IntMatrix2(*(x % m for x in self))

    def inverse(self) -> "IntMatrix2":
        """Inverse of a unimodular matrix."""
        det = self.det()
        if det not in (1, -1):
            raise ValueError(f"matrix {self.rows()} is not unimodular")
        return self.adj().scale(det)

    def __pow__(self, k: int) -> "IntMatrix2":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = IntMatrix2.identity(), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_symmetric(self) -> bool:
        return self.b == self.c

    def congruent(self, gram: "IntMatrix2") -> "IntMatrix2":
        """``self^T @ gram @ self``."""
        return self.T() @ gram @ self


def matmul_mod(x: IntMatrix2, y: IntMatrix2, m: int) -> IntMatrix2:
    return (x @ y).mod(m)


def bilinear(gram: IntMatrix2, v, w) -> int:
    """``v^T gram w`` for integer (or rational) 2-vectors."""
    gw = gram @ w
    return v[0] * gw[0] + v[1] * gw[1]


def primitive_vector(v) -> tuple[int, int]:
    g = gcd(v[0], v[1])
    if g == 0:
        raise ValueError("zero vector")
    return (v[0] // g, v[1] // g)


def complete_basis(v) -> IntMatrix2:
    """A det +1 integer matrix whose first column is the primitive vector ``v``."""
    x, y = v
    g, s, t = ext_gcd(x, y)
    if g != 1:
        raise ValueError(f"{v} is not primitive")
    # x*s + y*t == 1, so columns (x, y), (-t, s) have determinant 1
    return IntMatrix2(x, -t, y, s)


# ---------------------------------------------------------------------------
# Smith normal form


class SnfDecomposition(NamedTuple):
    U: IntMatrix2
    D: IntMatrix2
    V: IntMatrix2

    @property
    def diagonal(self) -> tuple[int, int]:
        return (self.D.a, self.D.d)


def snf(m: IntMatrix2) -> SnfDecomposition:
    """Smith normal form ``U @ m @ V == D`` with non-negative ``d1 | d2``."""
    U, D, V = IntMatrix2.identity(), m, IntMatrix2.identity()
    if D == IntMatrix2(0, 0, 0, 0):
        return SnfDecomposition(U, D, V)

    def swap_rows(M):
        return IntMatrix2(M.c, M.d, M.a, M.b)

    def swap_cols(M):
        return IntMatrix2(M.b, M.a, M.d, M.c)

    while True:
        # move a smallest non-zero entry to the pivot position
        entries = [(abs(x), i) for i, x in enumerate(D) if x != 0]
        _, idx = min(entries)
        if idx in (2, 3):
            D, U = swap_rows(D), swap_rows(U)
        if idx in (1, 3):
            D, V = swap_cols(D), swap_cols(V)
        p = D.a
        # clear first column below pivot and first row right of pivot
        qr = D.c // p
        row_op = IntMatrix2(1, 0, -qr, 1)
        D, U = row_op @ D, row_op @ U
        qc = D.b // p
        col_op = IntMatrix2(1, -qc, 0, 1)
        D, V = D @ col_op, V @ col_op
        if D.b != 0 or D.c != 0:
            continue
        if D.d % p != 0:
            # bring d into the first row and reduce again
            row_op = IntMatrix2(1, 1, 0, 1)
            D, U = row_op @ D, row_op @ U
            continue
        break
    if D.a < 0:
        flip = IntMatrix2(-1, 0, 0, 1)
        D, U = flip @ D, flip @ U
    if D.d < 0:
        flip = IntMatrix2(1, 0, 0, -1)
        D, U = flip @ D, flip @ U
    return SnfDecomposition(U, D, V)


def iter_vectors(radius: int) -> Iterator[tuple[int, int]]:
    """All non-zero integer vectors with max-norm ``<= radius``, by shell."""
    for r in range(1, radius + 1):
        for x in range(-r, r + 1):
            for y in (-r, r):
                yield (x, y)
        for y in range(-r + 1, r):
            for x in (-r, r):
                yield (x, y)
