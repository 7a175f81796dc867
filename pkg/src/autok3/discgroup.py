"""Discriminant groups ``S*/S`` of even binary lattices and induced actions.

For Gram matrix ``G`` the dual lattice is ``G^-1 Z^2``.  An isometry ``T``
induces ``+id`` (resp. ``-id``) on ``S*/S`` exactly when
``(T -/+ I) adj(G) == 0 mod det G``; that test is used everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Optional

from .exactmath import IntMatrix2, SnfDecomposition, snf
from .forms import (
    AmbiguityKind,
    BinaryForm,
    EvenLattice,
    Isometry,
)
from .pell import PellSolution, pell_power, solve_pell4


@dataclass(frozen=True)
class DiscGroup:
    gram: IntMatrix2
    order: int
    snf_type: tuple[int, ...]
    decomposition: SnfDecomposition
    generators: tuple[tuple[Fraction, Fraction], ...]

    @property
    def relation_matrix(self) -> IntMatrix2:
        return self.gram

    @property
    def exponent(self) -> int:
        return self.snf_type[-1] if self.snf_type else 1

    def is_trivial(self) -> bool:
        return self.order == 1

    def sign_degenerate(self) -> bool:
        """``+id == -id`` on the group (trivial or elementary 2-group)."""
        return self.exponent <= 2

    def column_generators(self) -> tuple[tuple[Fraction, Fraction], ...]:
        """The columns of ``G^-1``, which also generate the group."""
        g, det = self.gram, self.gram.det()
        adj = g.adj()
        return tuple((Fraction(x, det), Fraction(y, det)) for x, y in (adj.col(0), adj.col(1)))

    def coordinates(self, x) -> tuple[int, ...]:
        """Coordinates of a dual vector against ``generators``, reduced."""
        # x = G^-1 y = V D^-1 U y, so the coordinates are U y
        y = self.gram @ x
        if any(Fraction(t).denominator != 1 for t in y):
            raise ValueError(f"{x} is not in the dual lattice")
        U = self.decomposition.U
        c = U @ tuple(int(t) for t in y)
        D = self.decomposition.diagonal
        return tuple(ci % di for ci, di in zip(c, D) if di > 1)


def disc_group(L: EvenLattice) -> DiscGroup:
    G = L.gram
    det = G.det()
    if det == 0:
        raise ValueError("degenerate lattice")
    dec = snf(G)
    U, D, V = dec
    gens = []
    divisors = []
    for i, di in enumerate(dec.diagonal):
        if di > 1:
            col = V.col(i)
            gens.append((Fraction(col[0], di), Fraction(col[1], di)))
            divisors.append(di)
    assert abs(det) == dec.diagonal[0] * dec.diagonal[1]
    return DiscGroup(G, abs(det), tuple(divisors), dec, tuple(gens))


class ActionKind(str, Enum):
    PLUS_ID = "PlusId"
    MINUS_ID = "MinusId"
    OTHER = "Other"


def acts_as(T: IntMatrix2, G: IntMatrix2, eps: int) -> bool:
    """Whether ``T`` induces ``eps * id`` on the discriminant group of ``G``."""
    N = abs(G.det())
    M = T.minus(IntMatrix2.identity().scale(eps)) @ G.adj()
    return all(x % N == 0 for x in M)


@dataclass(frozen=True)
class DiscAction:
    source: Isometry
    matrix_on_generators: IntMatrix2
    classification: ActionKind
    coincident: bool = False

    @property
    def epsilon(self) -> Optional[int]:
        return {ActionKind.PLUS_ID: 1, ActionKind.MINUS_ID: -1}.get(self.classification)


def _action_matrix(T: IntMatrix2, group: DiscGroup) -> IntMatrix2:
    # on y-coordinates the action is T^-T; conjugate into SNF coordinates
    U = group.decomposition.U
    A = U @ T.inverse().T() @ U.inverse()
    d1, d2 = group.decomposition.diagonal
    return IntMatrix2(A.a % d1 if d1 else A.a, A.b % d1 if d1 else A.b,
                      A.c % d2 if d2 else A.c, A.d % d2 if d2 else A.d)


def induced_action(T: Isometry, L: EvenLattice) -> DiscAction:
    if T.gram != L.gram:
        raise ValueError("not an isometry of this lattice")
    G = L.gram
    plus, minus = acts_as(T.m, G, 1), acts_as(T.m, G, -1)
    if plus:
        kind = ActionKind.PLUS_ID
    elif minus:
        kind = ActionKind.MINUS_ID
    else:
        kind = ActionKind.OTHER
    return DiscAction(T, _action_matrix(T.m, disc_group(L)), kind, plus and minus)


def pm_id_sign(T: IntMatrix2, G: IntMatrix2) -> Optional[int]:
    """``+1``/``-1`` when ``T`` induces that multiple of id, preferring ``+1``."""
    if acts_as(T, G, 1):
        return 1
    if acts_as(T, G, -1):
        return -1
    return None


def min_power_pm_id(u: Isometry, L: EvenLattice) -> tuple[int, int]:
    """Smallest ``k >= 1`` and ``eps`` with ``u^k`` inducing ``eps * id``."""
    G = L.gram
    N = abs(G.det())
    P = u.m.mod(N)
    k = 1
    while True:
        eps = pm_id_sign(P, G)
        if eps is not None:
            return k, eps
        P = (P @ u.m).mod(N)
        k += 1


def involution_search(
    a: Isometry, u: Isometry, L: EvenLattice, k: Optional[int] = None
) -> Optional[tuple[int, int]]:
    """Smallest ``l`` in ``[0, k)`` with ``a u^l`` inducing ``±id``, with its sign."""
    if k is None:
        k, _ = min_power_pm_id(u, L)
    G = L.gram
    N = abs(G.det())
    P = a.m.mod(N)
    for ell in range(k):
        eps = pm_id_sign(P, G)
        if eps is not None:
            return ell, eps
        P = (P @ u.m).mod(N)
    return None


def check_sufficient_conditions(L: EvenLattice, k: int) -> bool:
    """Congruences on ``(u_k, v_k)`` mod ``|n| d`` guaranteeing ``u^k`` acts as id."""
    a, b, c = L.q
    d = L.d
    base = solve_pell4(d, 4)
    if not isinstance(base, PellSolution):
        raise ValueError(f"d={d} is a square")
    sol = pell_power(base, k)
    uk, vk = sol.u, sol.v
    mod = L.scale * d
    half_dv = d * vk  # twice the value, halved below after combining
    conds = (
        (uk - 2) * c,
        (half_dv - uk * b) // 2 + b,
        (-half_dv - uk * b) // 2 + b,
        (uk - 2) * a,
    )
    return all(x % mod == 0 for x in conds)


# ---------------------------------------------------------------------------
# closed-form verdicts for the normal forms


@dataclass(frozen=True)
class LemmaVerdict:
    """Outcome of the closed-form test for ``a' u^l`` inducing ``eps * id``.

    ``ell`` is ``None`` when no determinant -1 isometry induces ``±id``.
    """

    kind: AmbiguityKind
    ell: Optional[int]
    epsilon: Optional[int]
    rule: str

    @property
    def exists(self) -> bool:
        return self.ell is not None


def normal_form_kind(q: BinaryForm) -> AmbiguityKind:
    a, b, c = q
    if gcd(a, c) != 1:
        raise ValueError(f"{q}: a and c must be coprime")
    if b == 0 and a > 0 > c and a < -c:
        return AmbiguityKind.DIAGONAL
    if b == a and a > 0 and a > 4 * c:
        return AmbiguityKind.NON_DIAGONAL
    raise ValueError(f"{q} is not a normal form a x^2 + c y^2 (0 < a < -c) or a x^2 + a x y + c y^2")


def ambiguous_disc_lemmas(L: EvenLattice) -> LemmaVerdict:
    kind = normal_form_kind(L.q)
    a, _, c = L.q
    n = L.scale
    sol = solve_pell4(L.d, 4)
    if not isinstance(sol, PellSolution):
        raise ValueError(f"d={L.d} is a square")
    U, V = sol.u, sol.v
    if kind is AmbiguityKind.DIAGONAL:
        if n >= 2:
            return LemmaVerdict(kind, None, None, "diagonal, |n| >= 2")
        if a == 1:
            return LemmaVerdict(kind, 0, -1, "diagonal, a = 1")
        S = U // 2
        if V % 2 == 0:
            for eps in (1, -1):
                if (S - eps) % (2 * a) == 0 and (S + eps) % (2 * c) == 0:
                    return LemmaVerdict(kind, 1, eps, "diagonal, congruences hold")
        return LemmaVerdict(kind, None, None, "diagonal, congruences fail")
    # (|n|, a) = (2, 1) and (1, 2) are no exceptions: there a' does not induce -id
    if n >= 2:
        return LemmaVerdict(kind, None, None, "non-diagonal, |n| >= 2")
    m = a - 4 * c
    if a == 1:
        return LemmaVerdict(kind, 0, -1, "non-diagonal, a = 1")
    if m == 1:
        return LemmaVerdict(kind, 0, 1, "non-diagonal, a - 4c = 1")
    for eps in (1, -1):
        if a % 2:
            # gcd(a, a - 4c) = 1 and the conditions split by CRT
            hold = (U - 2 * eps) % a == 0 and (U + 2 * eps) % m == 0
        else:
            # (a'u - eps) adj(G) == 0 mod a m, entry by entry
            s_ = (U + a * V) // 2
            hold = (
                (s_ + eps - 2 * c * V) % m == 0
                and (U + 2 * eps) % m == 0
                and (-s_ * (a - 2 * c) - 2 * c * eps + a * c * V) % (a * m) == 0
            )
        if hold:
            return LemmaVerdict(kind, 1, eps, "non-diagonal, congruences hold")
    return LemmaVerdict(kind, None, None, "non-diagonal, congruences fail")


def normal_involution(L: EvenLattice) -> Isometry:
    """``a' = (1 w; 0 -1)`` on a normal-form lattice."""
    w = 0 if normal_form_kind(L.q) is AmbiguityKind.DIAGONAL else 1
    return Isometry(IntMatrix2(1, w, 0, -1), L.gram)
