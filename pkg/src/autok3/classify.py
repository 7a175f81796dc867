"""Classification of the chamber-preserving orthochronous isometry group and
of its extension by discriminant signs, for even hyperbolic rank-2 lattices.

The extended group consists of pairs ``(eps, g)`` with ``g`` orthochronous,
preserving a Weyl chamber, and inducing ``eps * id`` on the discriminant group.
All generators are expressed in the basis of the input Gram matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .discgroup import (
    DiscGroup,
    acts_as,
    disc_group,
    involution_search,
    min_power_pm_id,
)
from .exactmath import IntMatrix2, is_square
from .forms import (
    AmbiguityCertificate,
    EvenLattice,
    Isometry,
    RootData,
    automorph_generator,
    chamber_vector,
    involution_generator,
    is_ambiguous,
    is_orthochronous,
    roots_of_lattice,
    square_disc_swap,
)
from .pell import PellSolution, solve_pell4


class GroupKind(str, Enum):
    TRIVIAL = "Trivial"
    CYCLIC_ORDER_2 = "CyclicOrder2"
    KLEIN_FOUR = "KleinFour"
    INFINITE_CYCLIC = "InfiniteCyclic"
    INFINITE_DIHEDRAL = "InfiniteDihedral"

    @property
    def finite(self) -> bool:
        return self in (GroupKind.TRIVIAL, GroupKind.CYCLIC_ORDER_2, GroupKind.KLEIN_FOUR)


@dataclass(frozen=True)
class SignedIsometry:
    epsilon: int
    g: Isometry

    @property
    def matrix(self) -> IntMatrix2:
        return self.g.m


@dataclass(frozen=True)
class GroupClass:
    kind: GroupKind
    generators: tuple[SignedIsometry, ...]
    provenance: str
    sign_degenerate: bool = False
    rotation: Optional[SignedIsometry] = None


@dataclass(frozen=True)
class OrthochronousGroup:
    """Generators of the chamber-preserving orthochronous group."""

    kind: GroupKind
    generators: tuple[Isometry, ...]
    basic_roots: tuple[tuple[int, int], ...] = ()


class UnsupportedLattice(ValueError):
    pass


def _require_hyperbolic(L: EvenLattice) -> None:
    if not L.is_hyperbolic():
        p, m, z = L.signature()
        raise UnsupportedLattice(f"signature ({p},{m}) with {z} null directions; need (1,1)")


def _orthochronous_rep(T: Isometry, L: EvenLattice) -> Isometry:
    return T if is_orthochronous(T, L) else -T


# ---------------------------------------------------------------------------
# finite cases


def _positive_roots(L: EvenLattice, roots: RootData) -> Optional[set]:
    if roots.finite is None:
        return None
    h = chamber_vector(L, roots.finite)
    return {r for r in roots.finite if L.pair(h, r) > 0}


def _chamber_stabilizer(L: EvenLattice) -> tuple[list[Isometry], Optional[RootData]]:
    """Elements of the (finite) chamber-preserving orthochronous group."""
    G = L.gram
    ident = Isometry(IntMatrix2.identity(), G)
    roots = roots_of_lattice(L)
    if is_square(L.d):
        candidates = [ident]
        s = square_disc_swap(L.q)
        if s is not None:
            candidates.append(_orthochronous_rep(Isometry(s, G), L))
        if roots is None:
            return candidates, None
        pos = _positive_roots(L, roots)
        keep = [g for g in candidates if {g.m @ r for r in pos} == pos]
        return keep, roots
    assert roots is not None
    e, f = roots.basic
    B = IntMatrix2.from_columns(e, f)
    S = IntMatrix2.from_columns(f, e)
    num = S @ B.adj()
    det = B.det()
    elems = [ident]
    if all(x % det == 0 for x in num):
        M = Isometry(IntMatrix2(*(x // det for x in num)), G)
        if is_orthochronous(M, L):
            elems.append(M)
    return elems, roots


def _extend_finite(L: EvenLattice, elems: list[Isometry], provenance: str) -> GroupClass:
    G = L.gram
    degenerate = disc_group(L).sign_degenerate()
    signed = [SignedIsometry(eps, g) for g in elems for eps in (1, -1) if acts_as(g.m, G, eps)]
    nontrivial = [s for s in signed if not (s.epsilon == 1 and s.g.is_identity())]
    if not nontrivial:
        return GroupClass(GroupKind.TRIVIAL, (), provenance, degenerate)
    if len(signed) == 2:
        return GroupClass(GroupKind.CYCLIC_ORDER_2, (nontrivial[0],), provenance, degenerate)
    assert len(signed) == 4
    gens = tuple(s for s in nontrivial if s.g.is_identity() or s.epsilon == 1)[:2]
    return GroupClass(GroupKind.KLEIN_FOUR, gens, provenance, degenerate)


# ---------------------------------------------------------------------------
# infinite cases


def _involution(L: EvenLattice) -> tuple[Optional[AmbiguityCertificate], Optional[Isometry]]:
    cert = is_ambiguous(L.q)
    if cert is None:
        return None, None
    a = involution_generator(cert)
    return cert, _orthochronous_rep(Isometry(a.m, L.gram), L)


def classify_extended_group(L: EvenLattice) -> GroupClass:
    _require_hyperbolic(L)
    if is_square(L.d):
        elems, roots = _chamber_stabilizer(L)
        branch = "square discriminant" + (", roots" if roots is not None else "")
        return _extend_finite(L, elems, branch)
    if roots_of_lattice(L) is not None:
        elems, _ = _chamber_stabilizer(L)
        return _extend_finite(L, elems, "roots, wall swap")
    u = automorph_generator(L)
    k, eps = min_power_pm_id(u, L)
    rotation = SignedIsometry(eps, u ** k)
    _, a = _involution(L)
    if a is None:
        return GroupClass(GroupKind.INFINITE_CYCLIC, (rotation,), "no roots, not ambiguous")
    found = involution_search(a, u, L, k)
    if found is None:
        return GroupClass(
            GroupKind.INFINITE_CYCLIC, (rotation,), "no roots, ambiguous, no involution acts as ±id"
        )
    ell, eps1 = found
    g1 = a @ u ** ell
    g2 = a @ u ** (ell + k)
    eps2 = 1 if acts_as(g2.m, L.gram, 1) else -1
    return GroupClass(
        GroupKind.INFINITE_DIHEDRAL,
        (SignedIsometry(eps1, g1), SignedIsometry(eps2, g2)),
        "no roots, ambiguous",
        rotation=rotation,
    )


def orthochronous_group(L: EvenLattice) -> OrthochronousGroup:
    _require_hyperbolic(L)
    if is_square(L.d) or roots_of_lattice(L) is not None:
        elems, roots = _chamber_stabilizer(L)
        basic = roots.basic if roots is not None else ()
        gens = tuple(g for g in elems if not g.is_identity())
        kind = GroupKind.CYCLIC_ORDER_2 if gens else GroupKind.TRIVIAL
        return OrthochronousGroup(kind, gens, basic)
    u = automorph_generator(L)
    _, a = _involution(L)
    if a is None:
        return OrthochronousGroup(GroupKind.INFINITE_CYCLIC, (u,))
    return OrthochronousGroup(GroupKind.INFINITE_DIHEDRAL, (a, u))


def extended_member(L: EvenLattice, T: IntMatrix2) -> tuple[int, ...]:
    """Signs ``eps`` with ``(eps, T)`` in the extended group (empty if none)."""
    _require_hyperbolic(L)
    try:
        g = Isometry(T, L.gram)
    except ValueError:
        return ()
    if not is_orthochronous(g, L):
        return ()
    roots = roots_of_lattice(L)
    if roots is not None:
        if roots.finite is not None:
            pos = _positive_roots(L, roots)
            if {g.m @ r for r in pos} != pos:
                return ()
        else:
            elems, _ = _chamber_stabilizer(L)
            if g not in elems:
                return ()
    return tuple(eps for eps in (1, -1) if acts_as(T, L.gram, eps))


_EXCEPTIONAL_DISC = {(2,), (2, 2), (2, 2, 2), (3,), (5,), (5, 5), (11,)}


def aut_general_guarantee(L: EvenLattice) -> bool:
    """True when the discriminant group is none of the listed small groups."""
    return disc_group(L).snf_type not in _EXCEPTIONAL_DISC


def finiteness(L: EvenLattice) -> bool:
    """Finite iff the lattice has isotropic vectors or roots."""
    _require_hyperbolic(L)
    return is_square(L.d) or roots_of_lattice(L) is not None


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class LatticeReport:
    gram: IntMatrix2
    lattice: EvenLattice
    square: bool
    certificate: Optional[AmbiguityCertificate]
    roots: Optional[RootData]
    pell: Optional[PellSolution]
    disc: DiscGroup
    orthochronous: OrthochronousGroup
    extended: GroupClass
    aut_general_guaranteed: bool
    finite: bool
    u_power: Optional[tuple[int, int]] = None
    involution_power: Optional[tuple[int, int]] = None
    notes: tuple[str, ...] = field(default=())

    @property
    def ambiguous(self) -> bool:
        return self.certificate is not None


def classify(L: EvenLattice) -> LatticeReport:
    _require_hyperbolic(L)
    square = is_square(L.d)
    cert = is_ambiguous(L.q)
    roots = roots_of_lattice(L)
    pell = None
    u_power = inv_power = None
    if not square:
        pell = solve_pell4(L.d, 4)
        u = automorph_generator(L)
        u_power = min_power_pm_id(u, L)
        if cert is not None:
            a = _orthochronous_rep(Isometry(involution_generator(cert).m, L.gram), L)
            inv_power = involution_search(a, u, L, u_power[0])
    ext = classify_extended_group(L)
    fin = finiteness(L)
    assert fin == ext.kind.finite
    if roots is not None:
        assert L.scale == 1
    return LatticeReport(
        gram=L.gram,
        lattice=L,
        square=square,
        certificate=cert,
        roots=roots,
        pell=pell,
        disc=disc_group(L),
        orthochronous=orthochronous_group(L),
        extended=ext,
        aut_general_guaranteed=aut_general_guarantee(L),
        finite=fin,
        u_power=u_power,
        involution_power=inv_power,
    )


def classify_gram(gram: IntMatrix2) -> LatticeReport:
    return classify(EvenLattice.from_gram(gram))
