"""Integral binary quadratic forms, even rank-2 lattices and their isometries.

A form ``q = a x^2 + b x y + c y^2`` has polar matrix ``(2a b; b 2c)`` and the
even lattice ``2 n q`` has Gram matrix ``n (2a b; b 2c)``.  Changes of basis
act on the right: ``q.transform(P)(v) == q(P v)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import gcd, isqrt
from typing import Optional

from .exactmath import (
    IntMatrix2,
    bilinear,
    complete_basis,
    is_square,
    iter_vectors,
    primitive_vector,
)
from .pell import PellSolution, solve_pell4


@dataclass(frozen=True)
class BinaryForm:
    a: int
    b: int
    c: int

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __neg__(self) -> "BinaryForm":
        return BinaryForm(-self.a, -self.b, -self.c)

    @property
    def disc(self) -> int:
        return discriminant(self)

    def gram(self) -> IntMatrix2:
        return IntMatrix2(2 * self.a, self.b, self.b, 2 * self.c)

    def content(self) -> int:
        return gcd(gcd(self.a, self.b), self.c)

    def is_primitive(self) -> bool:
        return self.content() == 1

    def transform(self, P: IntMatrix2) -> "BinaryForm":
        g = P.congruent(self.gram())
        return BinaryForm(g.a // 2, g.b, g.d // 2)

    def opposite(self) -> "BinaryForm":
        return BinaryForm(self.a, -self.b, self.c)

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


def discriminant(q: BinaryForm) -> int:
    """``b^2 - 4ac`` (minus four times the determinant of the half-polar matrix)."""
    return q.b * q.b - 4 * q.a * q.c


class InvalidLattice(ValueError):
    pass


@dataclass(frozen=True)
class EvenLattice:
    """The even lattice ``2 n q`` with ``q`` primitive; ``n`` may be negative."""

    n: int
    q: BinaryForm

    def __post_init__(self):
        if self.n == 0:
            raise InvalidLattice("n must be non-zero")
        if not self.q.is_primitive():
            raise InvalidLattice(f"form {self.q} is not primitive")

    @classmethod
    def from_gram(cls, gram: IntMatrix2) -> "EvenLattice":
        return content_split(gram)

    @classmethod
    def from_form(cls, a: int, b: int, c: int, n: int = 1) -> "EvenLattice":
        return cls(n, BinaryForm(a, b, c))

    @property
    def gram(self) -> IntMatrix2:
        return self.q.gram().scale(self.n)

    @property
    def d(self) -> int:
        return self.q.disc

    @property
    def scale(self) -> int:
        return abs(self.n)

    @property
    def signed_form(self) -> BinaryForm:
        """The primitive form ``f`` with ``Gram == |n| * polar(f)``."""
        return self.q if self.n > 0 else -self.q

    def norm(self, v) -> int:
        return bilinear(self.gram, v, v)

    def pair(self, v, w) -> int:
        return bilinear(self.gram, v, w)

    def signature(self) -> tuple[int, int, int]:
        """``(positive, negative, zero)`` inertia of the Gram matrix."""
        g = self.gram
        det = g.det()
        if det < 0:
            return (1, 1, 0)
        if det > 0:
            return (2, 0, 0) if g.a > 0 else (0, 2, 0)
        tr = g.trace()
        return (1, 0, 1) if tr > 0 else ((0, 1, 1) if tr < 0 else (0, 0, 2))

    def is_hyperbolic(self) -> bool:
        return self.signature() == (1, 1, 0)

    def __str__(self):
        return f"2*{self.n}*{self.q}"


def content_split(gram: IntMatrix2) -> EvenLattice:
    """Write an even symmetric Gram matrix as ``2 n q`` with ``q`` primitive."""
    if not gram.is_symmetric():
        raise InvalidLattice("Gram matrix must be symmetric")
    if gram.a % 2 or gram.d % 2:
        raise InvalidLattice("Gram matrix must have even diagonal")
    a, b, c = gram.a // 2, gram.b, gram.d // 2
    n = gcd(gcd(a, b), c)
    if n == 0:
        raise InvalidLattice("zero Gram matrix")
    lead = a if a != 0 else (b if b != 0 else c)
    if lead < 0:
        n = -n
    return EvenLattice(n, BinaryForm(a // n, b // n, c // n))


@dataclass(frozen=True)
class Isometry:
    """An integral automorph ``T`` with ``T^T G T == G``; checked on construction."""

    m: IntMatrix2
    gram: IntMatrix2
    det: int = field(init=False)

    def __post_init__(self):
        if self.m.congruent(self.gram) != self.gram:
            raise ValueError(f"{self.m.rows()} is not an isometry of {self.gram.rows()}")
        det = self.m.det()
        if det not in (1, -1):
            raise ValueError("isometry determinant must be ±1")
        object.__setattr__(self, "det", det)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        if other.gram != self.gram:
            raise ValueError("isometries of different lattices")
        return Isometry(self.m @ other.m, self.gram)

    def __neg__(self) -> "Isometry":
        return Isometry(-self.m, self.gram)

    def __pow__(self, k: int) -> "Isometry":
        return Isometry(self.m ** k, self.gram)

    def inverse(self) -> "Isometry":
        return Isometry(self.m.inverse(), self.gram)

    def is_identity(self) -> bool:
        return self.m == IntMatrix2.identity()

    def is_involution(self) -> bool:
        return (self.m @ self.m) == IntMatrix2.identity()

    def conjugate_by(self, P: IntMatrix2, gram: IntMatrix2) -> "Isometry":
        """``P m P^-1`` viewed as an isometry of ``gram``."""
        return Isometry(P @ self.m @ P.inverse(), gram)


# ---------------------------------------------------------------------------
# adjacency and reduction


def adjacency_matrix(e: int) -> IntMatrix2:
    return IntMatrix2(0, -1, 1, e)


def adjacent_right(q: BinaryForm, e: int) -> BinaryForm:
    a, b, c = q
    return BinaryForm(c, -b + 2 * e * c, a - e * b + c * e * e)


def _sqrt_floor(d: int) -> int:
    s = isqrt(d)
    if s * s == d:
        raise ValueError(f"discriminant {d} is a square")
    return s


def is_reduced(q: BinaryForm) -> bool:
    """``0 < b < sqrt d`` and ``sqrt d - b < 2|a| < sqrt d + b``."""
    d = q.disc
    if d <= 0 or is_square(d):
        return False
    s = isqrt(d)
    a2 = 2 * abs(q.a)
    return 0 < q.b <= s and a2 + q.b >= s + 1 and a2 - q.b <= s


def _normalize_b(b: int, a: int, s: int) -> int:
    """The representative ``r = b mod 2a`` in the reduction window for ``a``."""
    m = 2 * abs(a)
    if abs(a) > s:
        # -|a| < r <= |a|
        lo = -abs(a) + 1
    else:
        # sqrt d - 2|a| < r < sqrt d
        lo = s - m + 1
    return lo + (b - lo) % m


def rho(q: BinaryForm, s: int) -> tuple[BinaryForm, int]:
    """One reduction step; returns the right-adjacent form and its ``e``."""
    a, b, c = q
    r = _normalize_b(-b, c, s)
    e = (r + b) // (2 * c)
    return adjacent_right(q, e), e


def reduce_form(q: BinaryForm) -> tuple[BinaryForm, IntMatrix2]:
    """A reduced form properly equivalent to ``q`` and the transform reaching it."""
    d = q.disc
    if d <= 0:
        raise ValueError(f"form {q} is not indefinite")
    s = _sqrt_floor(d)
    P = IntMatrix2.identity()
    while not is_reduced(q):
        q, e = rho(q, s)
        P = P @ adjacency_matrix(e)
    return q, P


def reduction_cycle(q: BinaryForm) -> tuple[list[BinaryForm], list[IntMatrix2]]:
    """The cycle of reduced forms properly equivalent to ``q``.

    ``transforms[i]`` carries ``q`` to ``cycle[i]``.
    """
    d = q.disc
    if d <= 0:
        raise ValueError(f"form {q} is not indefinite")
    s = _sqrt_floor(d)
    first, P = reduce_form(q)
    cycle, transforms = [first], [P]
    cur = first
    while True:
        cur, e = rho(cur, s)
        P = P @ adjacency_matrix(e)
        if cur == first:
            break
        cycle.append(cur)
        transforms.append(P)
    return cycle, transforms


# ---------------------------------------------------------------------------
# ambiguity


class AmbiguityKind(str, Enum):
    DIAGONAL = "Diagonal"
    NON_DIAGONAL = "NonDiagonal"


@dataclass(frozen=True)
class AmbiguityCertificate:
    """``source.transform(transform) == target`` with ``det(transform) == 1``.

    ``target`` is ``a x^2 + c y^2`` (diagonal) or ``a x^2 + a x y + c y^2``.
    """

    kind: AmbiguityKind
    source: BinaryForm
    target: BinaryForm
    transform: IntMatrix2

    def __post_init__(self):
        if self.transform.det() != 1:
            raise ValueError("certificate transform must be proper")
        if self.source.transform(self.transform) != self.target:
            raise ValueError("certificate transform does not reach target")
        t = self.target
        if self.kind is AmbiguityKind.DIAGONAL and t.b != 0:
            raise ValueError("diagonal target must have b == 0")
        if self.kind is AmbiguityKind.NON_DIAGONAL and t.b != t.a:
            raise ValueError("non-diagonal target must have b == a")

    @property
    def w(self) -> int:
        return 0 if self.kind is AmbiguityKind.DIAGONAL else 1


def _shift_to_normal(q: BinaryForm) -> Optional[tuple[AmbiguityKind, IntMatrix2]]:
    """Shift ``x -> x + t y`` making ``b`` equal 0 or ``a``, when ``a | b``."""
    a, b, _ = q
    if a == 0 or b % a:
        return None
    k = b // a
    if k % 2 == 0:
        return AmbiguityKind.DIAGONAL, IntMatrix2(1, -k // 2, 0, 1)
    return AmbiguityKind.NON_DIAGONAL, IntMatrix2(1, (1 - k) // 2, 0, 1)


def _certificate_at(q: BinaryForm, P: IntMatrix2) -> Optional[AmbiguityCertificate]:
    """Try to finish a certificate from the form ``q.transform(P)``."""
    f = q.transform(P)
    for pre in (IntMatrix2.identity(), adjacency_matrix(0)):
        g = f.transform(pre)
        hit = _shift_to_normal(g)
        if hit is not None:
            kind, shift = hit
            T = P @ pre @ shift
            return AmbiguityCertificate(kind, q, q.transform(T), T)
    return None


def certificate_from_involution(q: BinaryForm, T: IntMatrix2) -> AmbiguityCertificate:
    """Normal-form certificate from a determinant -1 automorph ``T`` of ``q``."""
    if T.det() != -1 or q.transform(T) != q:
        raise ValueError("T must be a determinant -1 automorph of q")
    s = T.plus(IntMatrix2.identity())
    col = s.col(0) if s.col(0) != (0, 0) else s.col(1)
    v = primitive_vector(col)
    P = complete_basis(v)
    t = (P.inverse() @ T @ P).b
    P = P @ IntMatrix2(1, -(t - t % 2) // 2, 0, 1)
    kind = AmbiguityKind.DIAGONAL if t % 2 == 0 else AmbiguityKind.NON_DIAGONAL
    return AmbiguityCertificate(kind, q, q.transform(P), P)


def is_ambiguous(q: BinaryForm) -> Optional[AmbiguityCertificate]:
    """Certificate that ``q`` admits a determinant -1 automorph, or ``None``."""
    d = q.disc
    if d <= 0:
        raise ValueError(f"form {q} is not indefinite")
    if not q.is_primitive():
        raise ValueError(f"form {q} is not primitive")
    if is_square(d):
        T = square_disc_swap(q)
        return None if T is None else certificate_from_involution(q, T)
    cert = _certificate_at(q, IntMatrix2.identity())
    if cert is not None:
        return cert
    # an ambiguous cycle is symmetric; its two symmetry points have c | b
    for _, P in zip(*reduction_cycle(q)):
        cert = _certificate_at(q, P)
        if cert is not None:
            return cert
    return None


def involution_generator(cert: AmbiguityCertificate) -> Isometry:
    """The involution ``a = P a' P^-1`` with ``a' = (1 w; 0 -1)`` on the target."""
    a_prime = IntMatrix2(1, cert.w, 0, -1)
    P = cert.transform
    return Isometry(P @ a_prime @ P.inverse(), cert.source.gram())


# ---------------------------------------------------------------------------
# proper automorphs


def automorph_matrix(q: BinaryForm, sol: PellSolution) -> IntMatrix2:
    """``(1/2 (U - bV), -cV; aV, 1/2 (U + bV))`` for a solution of ``x^2 - d y^2 = 4``."""
    a, b, c = q
    U, V = sol.u, sol.v
    return IntMatrix2((U - b * V) // 2, -c * V, a * V, (U + b * V) // 2)


def automorph_generator(L: EvenLattice) -> Isometry:
    """The generator ``u`` of the special orthochronous automorphs."""
    q = L.q
    d = q.disc
    if d <= 0:
        raise ValueError("lattice is not indefinite")
    if is_square(d):
        raise ValueError(f"d={d} is a square; SO(Q) = ±id")
    if q.a == 0:
        raise ValueError("leading coefficient must be non-zero")
    sol = solve_pell4(d, 4)
    assert isinstance(sol, PellSolution)
    return Isometry(automorph_matrix(q, sol), L.gram)


# ---------------------------------------------------------------------------
# square discriminant helpers


def isotropic_vectors(q: BinaryForm) -> tuple[tuple[int, int], tuple[int, int]]:
    """Primitive generators of the two isotropic lines of a square-discriminant form."""
    d = q.disc
    if d <= 0 or not is_square(d):
        raise ValueError(f"discriminant of {q} is not a positive square")
    delta = isqrt(d)
    a, b, c = q
    if a == 0:
        return (1, 0), primitive_vector((-c, b))
    # roots of a w^2 + b w + c: w = (-b ± delta) / 2a, isotropic vectors (w, 1)
    return (
        primitive_vector((-b + delta, 2 * a)),
        primitive_vector((-b - delta, 2 * a)),
    )


def square_disc_swap(q: BinaryForm) -> Optional[IntMatrix2]:
    """The integral automorph swapping the isotropic lines (det -1), if any."""
    f1, f2 = isotropic_vectors(q)
    B = IntMatrix2.from_columns(f1, f2)
    S = IntMatrix2.from_columns(f2, f1)
    # T = S B^-1 = S adj(B) / det(B)
    num = S @ B.adj()
    det = B.det()
    if any(x % det for x in num):
        return None
    T = IntMatrix2(*(x // det for x in num))
    assert q.transform(T) == q
    return T


def solve_square_disc(q: BinaryForm, m: int) -> list[tuple[int, int]]:
    """All integer solutions of ``q(x, y) = m`` (``m != 0``) for square discriminant."""
    d = q.disc
    if m == 0 or d <= 0 or not is_square(d):
        raise ValueError("needs m != 0 and a positive square discriminant")
    delta = isqrt(d)
    a, b, c = q
    out = set()
    if a == 0:
        for y in _divisors(m):
            for sy in (y, -y):
                num = m // sy - c * sy
                if num % b == 0:
                    out.add((num // b, sy))
    else:
        # (2a x + (b + delta) y)(2a x + (b - delta) y) = 4 a m
        N = 4 * a * m
        for s in _divisors(N):
            for ss in (s, -s):
                t = N // ss
                if (ss - t) % (2 * delta):
                    continue
                y = (ss - t) // (2 * delta)
                num = ss - (b + delta) * y
                if num % (2 * a) == 0:
                    out.add((num // (2 * a), y))
    sols = sorted(out)
    assert all(q(x, y) == m for x, y in sols)
    return sols


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [k for k in range(1, isqrt(n) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


# ---------------------------------------------------------------------------
# representations of 0 and -1


def represents(q: BinaryForm, m: int) -> Optional[tuple[int, int]]:
    """A primitive vector ``v`` with ``q(v) == m`` for ``m`` in {0, -1}, or ``None``."""
    if m not in (0, -1):
        raise ValueError("only representations of 0 and -1 are supported")
    d = q.disc
    if d <= 0:
        raise ValueError(f"form {q} is not indefinite")
    if m == 0:
        return isotropic_vectors(q)[0] if is_square(d) else None
    if is_square(d):
        sols = solve_square_disc(q, -1)
        return min(sols, key=lambda v: (abs(v[0]) + abs(v[1]), v)) if sols else None
    for f, P in zip(*reduction_cycle(q)):
        if f.a == -1:
            return P.col(0)
    return None


# ---------------------------------------------------------------------------
# roots


@dataclass(frozen=True)
class RootData:
    """Roots (vectors of norm -2) of a lattice.

    ``basic`` are the simple roots of one Weyl chamber: every root is a
    non-negative or non-positive integral combination of them.  ``finite``
    lists every root when there are finitely many.
    """

    basic: tuple[tuple[int, int], ...]
    finite: Optional[tuple[tuple[int, int], ...]] = None
    normal_form: Optional[BinaryForm] = None
    transform: Optional[IntMatrix2] = None


def roots_of_lattice(L: EvenLattice) -> Optional[RootData]:
    if L.scale != 1:
        return None
    f = L.signed_form
    d = f.disc
    if d <= 0:
        raise ValueError("lattice is not indefinite")
    if is_square(d):
        sols = solve_square_disc(f, -1)
        if not sols:
            return None
        return RootData(basic=_simple_roots(L, sols), finite=tuple(sols))
    w = represents(f, -1)
    if w is None:
        return None
    P = complete_basis(w)
    g = f.transform(P)
    # g = -x^2 + b' x y + c' y^2; shift b' to 0 (d even) or -1 (d odd)
    t = g.b // 2 if g.b % 2 == 0 else (g.b + 1) // 2
    P = P @ IntMatrix2(1, t, 0, 1)
    g = f.transform(P)
    sol = solve_pell4(d, 4)
    assert isinstance(sol, PellSolution)
    U, V = sol.u, sol.v
    if g.b == 0:
        assert g == BinaryForm(-1, 0, d // 4)
        e_nf, f_nf = (-1, 0), (U // 2, V)
    else:
        assert g == BinaryForm(-1, -1, (d - 1) // 4)
        e_nf, f_nf = (-1, 0), ((U - V) // 2, V)
    e, ff = P @ e_nf, P @ f_nf
    assert L.norm(e) == -2 and L.norm(ff) == -2
    return RootData(basic=(e, ff), normal_form=g, transform=P)


def _simple_roots(L: EvenLattice, roots) -> tuple[tuple[int, int], ...]:
    """Extreme rays of the positive roots relative to a generic positive vector."""
    h = chamber_vector(L, roots)
    pos = [r for r in roots if L.pair(h, r) > 0]

    def cross(v, w):
        return v[0] * w[1] - v[1] * w[0]

    # all positive roots lie in an open half-plane; extremes by orientation
    lo = hi = pos[0]
    for r in pos[1:]:
        if cross(lo, r) < 0:
            lo = r
        if cross(hi, r) > 0:
            hi = r
    return (lo,) if lo == hi else (lo, hi)


# ---------------------------------------------------------------------------
# light cone


def reference_vector(L: EvenLattice) -> tuple[int, int]:
    """An integral vector of positive norm, fixing the cone component ``C``."""
    if not L.is_hyperbolic():
        raise ValueError(f"lattice has signature {L.signature()}, need (1,1)")
    a, b, c = L.signed_form
    if a > 0:
        return (1, 0)
    if a < 0:
        # f(-b, 2a) = -a d > 0
        return (-b, 2 * a)
    # a == 0, b != 0: f(x, 1) = b x + c
    x = (abs(c) + 1) * (1 if b > 0 else -1)
    return (x, 1)


def chamber_vector(L: EvenLattice, roots) -> tuple[int, int]:
    """A vector of ``C`` orthogonal to none of the given (finitely many) roots."""
    x0 = reference_vector(L)
    if all(L.pair(x0, r) != 0 for r in roots):
        return x0
    for radius in range(1, 10_000):
        for v in iter_vectors(radius):
            if L.norm(v) > 0 and L.pair(v, x0) > 0 and all(L.pair(v, r) != 0 for r in roots):
                return v
    raise RuntimeError("no chamber vector found")


def is_orthochronous(T: Isometry, L: EvenLattice) -> bool:
    """Whether ``T`` maps the cone component ``C`` to itself."""
    x0 = reference_vector(L)
    if T.gram != L.gram:
        raise ValueError("isometry belongs to another lattice")
    return L.pair(T.m @ x0, x0) > 0
