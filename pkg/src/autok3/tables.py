"""Published reference tables, recomputed from scratch and diffed cell by cell.

Printed values are kept verbatim; a row whose recomputation differs carries
an ``erratum`` note naming both values.  Nothing printed is silently fixed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .discgroup import involution_search, min_power_pm_id, normal_involution
from .forms import BinaryForm, EvenLattice, automorph_generator
from .pell import epsilon_vector, solve_pell4, solve_reduced

# d -> (printed factor order, N=1, N=4, eps vector)
PELL_TABLE: dict[int, tuple[tuple[int, ...], tuple[int, int], tuple[int, int], tuple[int, ...]]] = {
    3: ((3,), (2, 1), (4, 2), (-1,)),
    5: ((5,), (9, 4), (3, 1), (-1,)),
    6: ((2, 3), (5, 2), (10, 4), (1, -1)),
    7: ((7,), (8, 3), (16, 6), (1,)),
    8: ((2,), (3, 1), (6, 2), (1,)),
    11: ((11,), (10, 3), (20, 6), (-1,)),
    13: ((13,), (649, 180), (11, 3), (-1,)),
    17: ((17,), (33, 8), (66, 33), (-1,)),
    15: ((3, 5), (4, 1), (8, 2), (1, -1)),
    20: ((5, 2), (9, 2), (18, 3), (1, -1)),
    21: ((3, 7), (55, 21), (5, 1), (1, -1)),
    33: ((3, 11), (23, 4), (46, 8), (-1, 1)),
    35: ((5, 7), (6, 1), (12, 2), (1, -1)),
    39: ((3, 13), (25, 4), (50, 8), (1, -1)),
    44: ((11, 2), (199, 30), (398, 60), (1, 1)),
    51: ((3, 17), (50, 7), (100, 14), (-1, -1)),
    55: ((5, 11), (89, 12), (178, 24), (-1, 1)),
    104: ((2, 13), (51, 5), (102, 10), (1, -1)),
    105: ((3, 5, 7), (41, 4), (82, 8), (-1, 1, -1)),
    165: ((3, 5, 11), (1079, 84), (13, 1), (-1, -1, 1)),
}

# (a, c) -> (smallest k with u^k = ±id, smallest l with a' u^l = ±id and its sign, or None)
DIAGONAL_TABLE: dict[tuple[int, int], tuple[int, Optional[tuple[int, int]]]] = {
    (1, -5): (1, (0, -1)),
    (1, -13): (1, (0, -1)),
    (1, -17): (1, (0, -1)),
    (1, -3): (2, (0, -1)),
    (1, -7): (2, (0, -1)),
    (1, -11): (2, (0, -1)),
    (3, -11): (1, (1, -1)),
    (3, -13): (1, (1, -1)),
    (3, -5): (2, None),
    (3, -7): (2, None),
    (3, -17): (2, None),
}

NON_DIAGONAL_TABLE: dict[tuple[int, int], tuple[int, Optional[tuple[int, int]]]] = {
    (1, -1): (2, (0, -1)),
    (1, -3): (2, (0, -1)),
    (1, -4): (2, (0, -1)),
    (3, -1): (1, None),
    (3, -2): (2, None),
    (7, 1): (2, None),
    (21, 4): (2, (1, -1)),
    (15, 1): (2, None),
    (35, 8): (2, (1, -1)),
}


def _fmt_pair(p) -> str:
    return "none" if p is None else f"({p[0]},{p[1]})"


def _fmt_vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


@dataclass(frozen=True)
class PellRow:
    d: int
    primes: tuple[int, ...]
    n1: tuple[int, int]
    n4: tuple[int, int]
    eps: tuple[int, ...]
    errata: tuple[str, ...]

    def cells(self) -> list[str]:
        return [
            str(self.d),
            "*".join(str(p) for p in self.primes),
            _fmt_pair(self.n1),
            _fmt_pair(self.n4),
            _fmt_vec(self.eps),
            "; ".join(self.errata),
        ]


def pell_row(d: int) -> PellRow:
    order, p1, p4, peps = PELL_TABLE[d]
    n1 = solve_reduced(d, 1).as_tuple()
    n4 = solve_pell4(d, 4).as_tuple()
    eps_pairs = epsilon_vector(d)
    primes = tuple(p for p, _ in eps_pairs)
    eps = tuple(e for _, e in eps_pairs)
    errata = []
    if n1 != p1:
        errata.append(f"N=1: printed {_fmt_pair(p1)}, computed {_fmt_pair(n1)}")
    if n4 != p4:
        errata.append(f"N=4: printed {_fmt_pair(p4)}, computed {_fmt_pair(n4)}")
    printed_map = dict(zip(order, peps))
    if eps != peps or printed_map != dict(eps_pairs):
        shown = ",".join(f"{p}:{e}" for p, e in printed_map.items())
        errata.append(
            f"eps: printed {_fmt_vec(peps)} in factor order ({shown}), "
            f"computed {_fmt_vec(eps)} in increasing prime order"
        )
    return PellRow(d, primes, n1, n4, eps, tuple(errata))


def pell_table() -> list[PellRow]:
    return [pell_row(d) for d in PELL_TABLE]


@dataclass(frozen=True)
class PowerRow:
    a: int
    c: int
    diagonal: bool
    k: int
    k_sign: int
    involution: Optional[tuple[int, int]]
    errata: tuple[str, ...]

    def cells(self) -> list[str]:
        return [
            str(self.a),
            str(self.c),
            str(self.k),
            "+id" if self.k_sign == 1 else "-id",
            "none" if self.involution is None
            else f"l={self.involution[0]} {'+id' if self.involution[1] == 1 else '-id'}",
            "; ".join(self.errata),
        ]


def normal_form_lattice(a: int, c: int, diagonal: bool, n: int = 1) -> EvenLattice:
    return EvenLattice(n, BinaryForm(a, 0 if diagonal else a, c))


def power_row(a: int, c: int, diagonal: bool) -> PowerRow:
    table = DIAGONAL_TABLE if diagonal else NON_DIAGONAL_TABLE
    pk, pinv = table[(a, c)]
    L = normal_form_lattice(a, c, diagonal)
    u = automorph_generator(L)
    k, eps = min_power_pm_id(u, L)
    inv = involution_search(normal_involution(L), u, L, k)
    errata = []
    if k != pk:
        errata.append(f"k: printed {pk}, computed {k}")
    if inv != pinv:
        errata.append(f"involution: printed {_fmt_inv(pinv)}, computed {_fmt_inv(inv)}")
    return PowerRow(a, c, diagonal, k, eps, inv, tuple(errata))


def _fmt_inv(p) -> str:
    return "none" if p is None else f"l={p[0]} eps={p[1]:+d}"


def power_table(diagonal: bool) -> list[PowerRow]:
    table = DIAGONAL_TABLE if diagonal else NON_DIAGONAL_TABLE
    return [power_row(a, c, diagonal) for a, c in table]


TABLE_HEADERS = {
    1: ["d", "primes", "N=1", "N=4", "eps", "erratum"],
    2: ["a", "c", "k", "u^k", "involution", "erratum"],
    3: ["a", "c", "k", "u^k", "involution", "erratum"],
}


def table_rows(which: int):
    if which == 1:
        return pell_table()
    if which in (2, 3):
        return power_table(diagonal=(which == 2))
    raise ValueError(f"no table {which}")


def render_tsv(which: int) -> str:
    lines = ["\t".join(TABLE_HEADERS[which])]
    lines += ["\t".join(row.cells()) for row in table_rows(which)]
    return "\n".join(lines) + "\n"

