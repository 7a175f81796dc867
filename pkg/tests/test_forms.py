import itertools
from math import gcd, isqrt

import pytest
from hypothesis import given, settings, strategies as st

from autok3.exactmath import IntMatrix2, is_square
from autok3.forms import (
    AmbiguityKind,
    BinaryForm,
    EvenLattice,
    InvalidLattice,
    Isometry,
    adjacency_matrix,
    adjacent_right,
    automorph_generator,
    content_split,
    discriminant,
    involution_generator,
    is_ambiguous,
    is_orthochronous,
    is_reduced,
    reduction_cycle,
    represents,
    roots_of_lattice,
    solve_square_disc,
)
from autok3.pell import solve_pell4
from oracles import brute_improper_automorph, brute_represents

coef = st.integers(-10, 10)


def indefinite_nonsquare(a, b, c):
    q = BinaryForm(a, b, c)
    return q.is_primitive() and q.disc > 0 and not is_square(q.disc)


nonsquare_forms = st.builds(BinaryForm, coef, coef, coef).filter(lambda q: indefinite_nonsquare(*q))
SMALL_FORMS = [
    BinaryForm(a, b, c)
    for a, b, c in itertools.product(range(-6, 7), repeat=3)
    if indefinite_nonsquare(a, b, c)
]


def test_discriminant():
    assert discriminant(BinaryForm(1, 5, 1)) == 21
    assert discriminant(BinaryForm(1, 0, 0)) == 0
    assert discriminant(BinaryForm(1, 2, 1)) == 0
    assert discriminant(BinaryForm(2, 4, 2)) == 0


def test_content_split():
    L = content_split(IntMatrix2(2, 4, 4, 2))
    assert (L.n, L.q) == (1, BinaryForm(1, 4, 1))
    L = content_split(IntMatrix2(4, 0, 0, -12))
    assert (L.n, L.q) == (2, BinaryForm(1, 0, -3))
    L = content_split(IntMatrix2(-4, 2, 2, 0))
    assert L.n == -2 and L.q == BinaryForm(1, -1, 0)
    assert L.gram == IntMatrix2(-4, 2, 2, 0)
    with pytest.raises(InvalidLattice):
        content_split(IntMatrix2(0, 0, 0, 0))
    with pytest.raises(InvalidLattice):
        content_split(IntMatrix2(1, 0, 0, 2))
    with pytest.raises(InvalidLattice):
        content_split(IntMatrix2(2, 1, 0, 2))


def test_adjacent_examples():
    assert adjacent_right(BinaryForm(1, 3, 7), 0) == BinaryForm(7, -3, 1)
    assert adjacent_right(BinaryForm(2, 0, -5), 0) == BinaryForm(-5, 0, 2)
    q = BinaryForm(1, 2, 5)
    step = adjacent_right(adjacent_right(q, 0), -1)
    assert step == BinaryForm(1, 0, 4)


@settings(max_examples=200)
@given(coef, coef, coef, st.integers(-20, 20))
def test_adjacency_matches_transform(a, b, c, e):
    q = BinaryForm(a, b, c)
    assert q.transform(adjacency_matrix(e)) == adjacent_right(q, e)


def test_reduction_cycle_d8():
    cycle, _ = reduction_cycle(BinaryForm(1, 0, -2))
    assert BinaryForm(1, 2, -1) in cycle and BinaryForm(-1, 2, 1) in cycle


def test_reduction_cycle_reduced_start():
    q = BinaryForm(1, 2, -1)
    cycle, P = reduction_cycle(q)
    assert cycle[0] == q and P[0] == IntMatrix2.identity()


def test_reduction_cycle_d12_matches_all_reduced():
    d = 12
    s = isqrt(d)
    reduced = {
        BinaryForm(a, b, (b * b - d) // (4 * a))
        for b in range(1, s + 1)
        for a in range(-d, d + 1)
        if a and (b * b - d) % (4 * a) == 0
        and is_reduced(BinaryForm(a, b, (b * b - d) // (4 * a)))
    }
    seen = set()
    for q in sorted(reduced, key=tuple):
        cycle, _ = reduction_cycle(q)
        assert set(cycle) <= reduced
        seen |= set(cycle)
    assert seen == reduced
    cycle, _ = reduction_cycle(BinaryForm(1, 4, 1))
    assert len(cycle) == 2


@pytest.mark.parametrize("q", SMALL_FORMS[::7])
def test_reduction_cycle_properties(q):
    cycle, transforms = reduction_cycle(q)
    for f, P in zip(cycle, transforms):
        assert is_reduced(f) and f.disc == q.disc
        assert P.det() == 1 and q.transform(P) == f
    assert len(set(cycle)) == len(cycle)


def test_reduction_rejects_square():
    with pytest.raises(ValueError):
        reduction_cycle(BinaryForm(1, 0, -9))
    with pytest.raises(ValueError):
        reduction_cycle(BinaryForm(1, 0, 1))


@pytest.mark.parametrize("delta", range(3, 12))
def test_monic_ambiguity(delta):
    cert = is_ambiguous(BinaryForm(1, delta, 1))
    expected = AmbiguityKind.DIAGONAL if delta % 2 == 0 else AmbiguityKind.NON_DIAGONAL
    assert cert.kind is expected
    a = involution_generator(cert)
    assert a.m == IntMatrix2(1, delta, 0, -1)


def test_already_normal():
    cert = is_ambiguous(BinaryForm(1, 0, -5))
    assert cert.kind is AmbiguityKind.DIAGONAL and cert.target == BinaryForm(1, 0, -5)
    assert involution_generator(cert).m == IntMatrix2(1, 0, 0, -1)


def test_non_ambiguous_examples():
    # 2x^2 + xy - 3y^2 has d = 25 (square); pick genuinely non-ambiguous classes
    for q in (BinaryForm(2, 1, -5), BinaryForm(3, 1, -7)):
        if is_ambiguous(q) is None:
            assert brute_improper_automorph(q, 12) is None


def _equivalent_to_opposite(q):
    cycle, _ = reduction_cycle(q)
    op_reduced = reduction_cycle(q.opposite())[0][0]
    return op_reduced in cycle


@pytest.mark.parametrize("q", SMALL_FORMS)
def test_ambiguity_oracle(q):
    cert = is_ambiguous(q)
    assert (cert is not None) == _equivalent_to_opposite(q)
    if cert is not None:
        a = involution_generator(cert)
        assert a.det == -1 and a.is_involution()
        assert q.transform(a.m) == q


def test_non_ambiguous_exists_and_brute_agrees():
    found = [q for q in SMALL_FORMS if is_ambiguous(q) is None]
    assert found
    for q in found[:5]:
        assert brute_improper_automorph(q, 6) is None


def test_square_disc_ambiguity():
    cert = is_ambiguous(BinaryForm(0, 1, 0))
    a = involution_generator(cert)
    assert a.m.congruent(BinaryForm(0, 1, 0).gram()) == BinaryForm(0, 1, 0).gram()
    assert is_ambiguous(BinaryForm(0, 3, 2)) is not None
    square = [
        BinaryForm(a, b, c)
        for a, b, c in itertools.product(range(-4, 5), repeat=3)
        if BinaryForm(a, b, c).is_primitive() and BinaryForm(a, b, c).disc > 0
        and is_square(BinaryForm(a, b, c).disc)
    ]
    verdicts = [is_ambiguous(q) is not None for q in square]
    assert any(verdicts) and not all(verdicts)
    for q, amb in zip(square, verdicts):
        if amb:
            assert brute_improper_automorph(q, 20) is not None


def test_automorph_examples():
    for delta in range(3, 10):
        L = EvenLattice(1, BinaryForm(1, delta, 1))
        assert automorph_generator(L).m == IntMatrix2(0, -1, 1, delta)
    assert automorph_generator(EvenLattice(1, BinaryForm(1, 0, -3))).m == IntMatrix2(2, 3, 1, 2)
    assert automorph_generator(EvenLattice(1, BinaryForm(1, 1, -1))).m == IntMatrix2(1, 1, 1, 2)


def test_printed_example_matrix_is_not_an_automorph():
    g = BinaryForm(1, 0, -3).gram()
    assert IntMatrix2(2, 3, 3, 1).congruent(g) != g


def test_automorph_rejects_square():
    with pytest.raises(ValueError):
        automorph_generator(EvenLattice(1, BinaryForm(1, 0, -4)))


@settings(max_examples=150)
@given(nonsquare_forms, st.sampled_from([1, -1, 2, -3]))
def test_automorph_properties(q, n):
    if q.a == 0:
        return
    L = EvenLattice(n, q)
    u = automorph_generator(L)
    assert u.det == 1
    assert is_orthochronous(u, L)
    assert not is_orthochronous(-u, L)
    cert = is_ambiguous(q)
    if cert is not None:
        a = Isometry(involution_generator(cert).m, L.gram)
        assert a.det == -1 and a.is_involution()
        assert a @ u @ a == u.inverse()


def test_isometry_rejects_non_automorph():
    with pytest.raises(ValueError):
        Isometry(IntMatrix2(1, 1, 0, 1), IntMatrix2(2, 0, 0, -2))


def test_represents_examples():
    for delta in range(4, 12):
        assert represents(BinaryForm(1, delta, 1), -1) is None
    v = represents(BinaryForm(1, 3, 1), -1)
    assert BinaryForm(1, 3, 1)(*v) == -1
    w = represents(BinaryForm(1, 0, -9), 0)
    assert w in ((3, 1), (-3, 1), (3, -1), (-3, -1))
    with pytest.raises(ValueError):
        represents(BinaryForm(1, 0, -2), 2)


def test_monic_witness_formula():
    # (u, v) solving x^2 - d y^2 = -4 gives q((u - b v)/2, v) = -1
    for b in range(0, 9):
        for c in range(-12, 0):
            q = BinaryForm(1, b, c)
            d = q.disc
            if is_square(d):
                continue
            sol = solve_pell4(d, -4)
            assert (sol is not None) == (represents(q, -1) is not None)
            if sol is not None:
                assert q((sol.u - b * sol.v) // 2, sol.v) == -1


def test_represents_zero_iff_square():
    for a, b, c in itertools.product(range(-10, 11, 3), range(-10, 11, 2), range(-10, 11, 3)):
        q = BinaryForm(a, b, c)
        if not q.is_primitive() or q.disc <= 0:
            continue
        found = represents(q, 0) is not None
        assert found == is_square(q.disc)
        assert found == (brute_represents(q, 0, 50) is not None)


def test_solve_square_disc():
    q = BinaryForm(0, 1, 0)
    assert solve_square_disc(q, -1) == [(-1, 1), (1, -1)]
    q = BinaryForm(1, 1, -2)  # (x + 2y)(x - y)
    sols = solve_square_disc(q, -2)
    assert sols and all(q(*v) == -2 for v in sols)
    assert set(sols) == {
        (x, y) for x in range(-10, 11) for y in range(-10, 11) if q(x, y) == -2
    }


def test_roots_examples():
    H = EvenLattice(1, BinaryForm(0, 1, 0))
    assert set(roots_of_lattice(H).finite) == {(1, -1), (-1, 1)}
    for delta in range(1, 11):
        L = EvenLattice.from_gram(IntMatrix2(2, delta, delta, -2))
        r = roots_of_lattice(L)
        assert r is not None and L.norm((0, 1)) == -2
        assert all(L.norm(v) == -2 for v in r.basic)
    for delta in range(4, 11):
        assert roots_of_lattice(EvenLattice.from_gram(IntMatrix2(2, delta, delta, 2))) is None
    assert roots_of_lattice(EvenLattice(2, BinaryForm(1, 0, -2))) is None


@pytest.mark.parametrize("q", SMALL_FORMS[::3])
def test_roots_brute(q):
    for n in (1, -1):
        L = EvenLattice(n, q)
        r = roots_of_lattice(L)
        brute = brute_represents(L.signed_form, -1, 12)
        if brute is not None:
            assert r is not None
        if r is not None:
            assert all(L.norm(v) == -2 for v in r.basic)


def test_orthochronous_basics():
    L = EvenLattice(1, BinaryForm(1, 4, 1))
    ident = Isometry(IntMatrix2.identity(), L.gram)
    assert is_orthochronous(ident, L)
    assert not is_orthochronous(-ident, L)
    with pytest.raises(ValueError):
        is_orthochronous(ident, EvenLattice(1, BinaryForm(1, 0, 1)))


@settings(max_examples=200)
@given(nonsquare_forms, st.integers(-3, 3), st.integers(-3, 3), st.booleans(), st.booleans())
def test_orthochronous_homomorphism(q, j, k, neg1, neg2):
    L = EvenLattice(1, q)
    u = automorph_generator(L) if q.a else None
    if u is None:
        return
    gens = [u ** j, u ** k]
    cert = is_ambiguous(q)
    if cert is not None:
        a = Isometry(involution_generator(cert).m, L.gram)
        gens = [a @ gens[0], gens[1]]
    S = -gens[0] if neg1 else gens[0]
    T = -gens[1] if neg2 else gens[1]
    assert is_orthochronous(S @ T, L) == (is_orthochronous(S, L) == is_orthochronous(T, L))
