"""JSON documents for lattice reports and Pell queries.

Matrices are row-major integer arrays, rationals are ``[num, den]`` pairs and
every document carries ``schema``.  Generators are always in the basis of the
echoed input Gram matrix.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .classify import GroupClass, LatticeReport, SignedIsometry
from .exactmath import IntMatrix2
from .forms import Isometry
from .pell import PellSolution, TrivialSolution

SCHEMA = "autok3/1"


def matrix_out(m: IntMatrix2) -> list[list[int]]:
    return m.rows()


def matrix_in(rows) -> IntMatrix2:
    return IntMatrix2.from_rows(rows)


def rational_out(x: Fraction) -> list[int]:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def rational_in(pair) -> Fraction:
    return Fraction(pair[0], pair[1])


def _signed(s: SignedIsometry) -> dict[str, Any]:
    return {"epsilon": s.epsilon, "matrix": matrix_out(s.matrix)}


def group_out(g: GroupClass) -> dict[str, Any]:
    return {
        "kind": g.kind.value,
        "generators": [_signed(s) for s in g.generators],
        "rotation": _signed(g.rotation) if g.rotation else None,
        "provenance": g.provenance,
        "sign_degenerate": g.sign_degenerate,
    }


def pell_out(sol) -> dict[str, Any] | None:
    if sol is None:
        return None
    if isinstance(sol, TrivialSolution):
        return {"d": sol.d, "rhs": sol.rhs, "solution": list(sol.as_tuple()), "trivial": True}
    assert isinstance(sol, PellSolution)
    return {"d": sol.d, "rhs": sol.rhs, "solution": [sol.u, sol.v], "trivial": False}


def report_out(r: LatticeReport) -> dict[str, Any]:
    L = r.lattice
    cert = r.certificate
    return {
        "schema": SCHEMA,
        "input": {"gram": matrix_out(r.gram)},
        "basis": "input",
        "n": L.n,
        "q": list(L.q),
        "d": L.d,
        "square": r.square,
        "ambiguous": cert is not None,
        "certificate": None if cert is None else {
            "kind": cert.kind.value,
            "target": list(cert.target),
            "transform": matrix_out(cert.transform),
        },
        "roots": None if r.roots is None else {
            "basic": [list(v) for v in r.roots.basic],
            "all": None if r.roots.finite is None else [list(v) for v in r.roots.finite],
        },
        "pell": pell_out(r.pell),
        "disc": {
            "order": r.disc.order,
            "snf_type": list(r.disc.snf_type),
            "generators": [[rational_out(x) for x in g] for g in r.disc.generators],
        },
        "u_power": None if r.u_power is None else {"k": r.u_power[0], "epsilon": r.u_power[1]},
        "involution_power": None if r.involution_power is None else {
            "l": r.involution_power[0], "epsilon": r.involution_power[1],
        },
        "orthochronous_group": {
            "kind": r.orthochronous.kind.value,
            "generators": [matrix_out(g.m) for g in r.orthochronous.generators],
        },
        "extended_group": group_out(r.extended),
        "aut_general_guaranteed": r.aut_general_guaranteed,
        "finite": r.finite,
    }


def check_document(doc: dict[str, Any]) -> None:
    """Re-parse every generator and verify it against the echoed Gram matrix."""
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unknown schema {doc.get('schema')!r}")
    gram = matrix_in(doc["input"]["gram"])
    ext = doc["extended_group"]
    mats = [g["matrix"] for g in ext["generators"]]
    if ext["rotation"]:
        mats.append(ext["rotation"]["matrix"])
    mats += doc["orthochronous_group"]["generators"]
    for rows in mats:
        Isometry(matrix_in(rows), gram)
    for g in doc["disc"]["generators"]:
        x = [rational_in(p) for p in g]
        gx = gram @ x
        if any(Fraction(t).denominator != 1 for t in gx):
            raise ValueError(f"generator {g} is not a dual vector")
