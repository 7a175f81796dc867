"""Pell equations ``x^2 - d y^2 = N`` for ``N`` in {1, -1, 4, -4}.

Fundamental units come from the continued-fraction expansion of a quadratic
irrational ``(P0 + sqrt d) / Q0``; the period is detected by repetition of the
``(P, Q)`` state, and the product of the period's partial-quotient matrices
yields the unit.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import isqrt
from typing import Optional, Union

from .exactmath import QuadNum, factorize, is_square

DEFAULT_MAX_PELL_BITS = 4096


class PellTooLarge(ArithmeticError):
    """The fundamental unit exceeded the configured bit budget."""

    def __init__(self, d: int, bits: int):
        super().__init__(
            f"fundamental unit for d={d} exceeds {bits} bits; "
            f"raise --max-pell-bits / AUTOK3_MAX_PELL_BITS to continue"
        )
        self.d = d
        self.bits = bits


def max_pell_bits() -> int:
    return int(os.environ.get("AUTOK3_MAX_PELL_BITS", DEFAULT_MAX_PELL_BITS))


@dataclass(frozen=True)
class PellSolution:
    u: int
    v: int
    d: int
    rhs: int

    def __post_init__(self):
        if self.u <= 0 or self.v <= 0:
            raise ValueError("Pell solutions carry positive u and v")
        if self.u * self.u - self.d * self.v * self.v != self.rhs:
            raise ValueError(f"({self.u},{self.v}) does not solve x^2-{self.d}y^2={self.rhs}")

    def as_tuple(self) -> tuple[int, int]:
        return (self.u, self.v)

    def unit(self) -> QuadNum:
        """The unit ``(u + v sqrt d)/2`` (for rhs ±4) or ``u + v sqrt d`` (rhs ±1)."""
        if abs(self.rhs) == 4:
            return QuadNum.half(self.u, self.v, self.d)
        return QuadNum(self.u, self.v, self.d)


@dataclass(frozen=True)
class TrivialSolution:
    """Marker for square ``d``: only ``(1, 0)`` (rhs 1) or ``(2, 0)`` (rhs 4) solve."""

    d: int
    rhs: int

    def as_tuple(self) -> tuple[int, int]:
        return (isqrt(abs(self.rhs)), 0)


PellResult = Union[PellSolution, TrivialSolution, None]


def _cf_unit(d: int, p0: int, q0: int, max_bits: Optional[int] = None) -> tuple[int, int]:
    """Unit ``(x + y sqrt d)/q0`` from the periodic expansion of ``(p0 + sqrt d)/q0``.

    ``q0`` must divide ``d - p0^2``.  Returns ``(x, y)``.
    """
    if max_bits is None:
        max_bits = max_pell_bits()
    s = isqrt(d)
    P, Q = p0, q0
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    states: list[tuple[int, int]] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(states)
        states.append((P, Q))
        if Q > 0:
            a = (P + s) // Q
        else:
            a = -((P + s) // -Q) - 1
        quotients.append(a)
        P = a * Q - P
        Q = (d - P * P) // Q
    start = seen[(P, Q)]
    # M = prod [[a, 1], [1, 0]] over one period; unit = C * xi + D
    A, B, C, D = 1, 0, 0, 1
    for a in quotients[start:]:
        A, B, C, D = A * a + B, A, C * a + D, C
        if C.bit_length() > max_bits:
            raise PellTooLarge(d, max_bits)
    Ps, Qs = states[start]
    # C * (Ps + sqrt d)/Qs + D = (C*Ps + D*Qs + C sqrt d) / Qs
    x, rx = divmod(q0 * (C * Ps + D * Qs), Qs)
    y, ry = divmod(q0 * C, Qs)
    assert rx == 0 and ry == 0
    return x, y


def fundamental_unit(d: int, max_bits: Optional[int] = None) -> tuple[int, int, int]:
    """``(U, V, N)``: minimal ``U, V > 0`` with ``U^2 - d V^2 = N``, ``N = ±4``.

    ``(U + V sqrt d)/2`` is the fundamental unit of the quadratic order of
    discriminant ``d`` when ``d`` is 0 or 1 mod 4, and twice the fundamental
    unit of ``Z[sqrt d]`` otherwise.
    """
    if d <= 1 or is_square(d):
        raise ValueError(f"d={d} must be a non-square integer > 1")
    if d % 4 in (0, 1):
        U, V = _cf_unit(d, d % 2, 2, max_bits)
    else:
        x, y = _cf_unit(d, 0, 1, max_bits)
        U, V = 2 * x, 2 * y
    N = U * U - d * V * V
    assert N in (4, -4), (d, U, V, N)
    return U, V, N


def _reduced_unit(d: int, max_bits: Optional[int] = None) -> tuple[int, int, int]:
    """Fundamental unit ``x + y sqrt d`` of ``Z[sqrt d]`` with its norm."""
    x, y = _cf_unit(d, 0, 1, max_bits)
    return x, y, x * x - d * y * y


def solve_reduced(d: int, rhs: int, max_bits: Optional[int] = None) -> PellResult:
    """Minimal positive solution of ``x^2 - d y^2 = rhs`` for ``rhs = ±1``."""
    if d <= 0:
        raise ValueError(f"d={d} must be positive")
    if rhs not in (1, -1):
        raise ValueError("rhs must be 1 or -1")
    if is_square(d):
        return TrivialSolution(d, 1) if rhs == 1 else None
    x, y, norm = _reduced_unit(d, max_bits)
    if norm == rhs:
        return PellSolution(x, y, d, rhs)
    if rhs == -1:
        return None
    return PellSolution(x * x + d * y * y, 2 * x * y, d, 1)


def solve_pell4(d: int, rhs: int, max_bits: Optional[int] = None) -> PellResult:
    """Minimal positive solution of ``x^2 - d y^2 = rhs`` for ``rhs = ±4``."""
    if d <= 0:
        raise ValueError(f"d={d} must be positive")
    if rhs not in (4, -4):
        raise ValueError("rhs must be 4 or -4")
    if is_square(d):
        return TrivialSolution(d, 4) if rhs == 4 else None
    U, V, N = fundamental_unit(d, max_bits)
    if N == rhs:
        return PellSolution(U, V, d, rhs)
    if rhs == -4:
        return None
    sq = pell_power(PellSolution(U, V, d, N), 2)
    return sq


def pell_power(sol: PellSolution, k: int) -> PellSolution:
    """The solution attached to the ``k``-th power of the unit of ``sol``."""
    if k <= 0:
        raise ValueError("k must be >= 1")
    d = sol.d
    if abs(sol.rhs) == 4:
        # (u + v sqrt d)/2 * (U + V sqrt d)/2 = ((uU + d vV)/2 + (uV + vU)/2 sqrt d)/2
        u, v = sol.u, sol.v
        for _ in range(k - 1):
            u, v = (u * sol.u + d * v * sol.v) // 2, (u * sol.v + v * sol.u) // 2
    else:
        u, v = sol.u, sol.v
        for _ in range(k - 1):
            u, v = u * sol.u + d * v * sol.v, u * sol.v + v * sol.u
    rhs = sol.rhs if (sol.rhs > 0 or k % 2 == 1) else -sol.rhs
    return PellSolution(u, v, d, rhs)


def convex_decomposition(sol_base: PellSolution, k: int) -> tuple[int, int]:
    """``(a_k, b_k)`` with ``eta^k = a_k * eta - b_k`` for the minimal +4 unit ``eta``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    minimal = solve_pell4(sol_base.d, 4)
    if sol_base.rhs != 4 or not isinstance(minimal, PellSolution) or minimal != sol_base:
        raise ValueError("base must be the minimal solution of x^2 - d y^2 = 4")
    a, b = 1, 0
    for _ in range(k - 1):
        a, b = a * sol_base.u - b, a
    return a, b


def epsilon_vector(d: int) -> list[tuple[int, int]]:
    """``[(p, eps(p))]`` over primes ``p | d`` with ``u = eps(p) mod p``.

    ``(u, v)`` is the minimal positive solution of ``x^2 - d y^2 = 1``.
    """
    sol = solve_reduced(d, 1)
    if not isinstance(sol, PellSolution):
        raise ValueError(f"d={d} is a square")
    out = []
    for p in sorted(factorize(d)):
        r = sol.u % p
        if r == 1 % p:
            out.append((p, 1))
        else:
            assert r == p - 1
            out.append((p, -1))
    return out
