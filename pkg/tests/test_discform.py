from collections import Counter
from fractions import Fraction

import pytest

from abelkit.discform import (
    FiniteQuadraticForm,
    GuardExceeded,
    LocalSymbol,
    automorphisms,
    brute_force_order,
    default_guard,
    disc_form_of,
    forms_isometric,
    global_order,
    local_order,
    local_product_order,
    local_symbols,
    scaled_order,
)
from abelkit.arith import chi
from abelkit.qform import EvenBinaryLattice as L, enumerate_reduced, scale


def all_lattices(max_det):
    for det in range(3, max_det + 1):
        for T in enumerate_reduced(det):
            if T.b >= 0:
                yield T


def test_disc_form_cyclic_15():
    D = disc_form_of((1, 1, 4))
    assert (D.d1, D.d2, D.order) == (1, 15, 15)
    k = D.q22 * 15 / 2
    assert k.denominator == 1 and int(k) % 3 and int(k) % 5


def test_disc_form_square():
    D = disc_form_of((1, 0, 1))
    assert (D.d1, D.d2) == (2, 2)
    assert D.q11 == D.q22 == Fraction(1, 2)
    assert D.b12 == 0


def test_disc_form_hexagonal_scaled():
    D = disc_form_of((2, 2, 2))
    assert (D.d1, D.d2) == (2, 6)


def test_form_validation():
    with pytest.raises(ValueError):
        FiniteQuadraticForm(2, 3, Fraction(0), Fraction(0), Fraction(0))  # 2 does not divide 3
    with pytest.raises(ValueError):
        FiniteQuadraticForm(1, 2, Fraction(0), Fraction(1, 3), Fraction(0))  # not well defined


def test_disc_values_match_dual_lattice():
    # value distribution of q on G^-1 Z^2 / Z^2, computed without the Smith form
    for T in all_lattices(60):
        D = disc_form_of(T)
        (p, q), (_, r) = T.gram
        det = T.det
        direct = Counter()
        for x in range(det):
            for y in range(det):
                # w^T G^-1 w = (r x^2 - 2 q x y + p y^2) / det
                direct[Fraction(r * x * x - 2 * q * x * y + p * y * y, det) % 2] += 1
        ours = Counter(D.q(*u) for u in D.elements())
        assert {k: v * det for k, v in ours.items()} == dict(direct), T
        for u in D.elements():
            for v in D.elements():
                assert D.b(u, v) == D.b(v, u)


@pytest.mark.parametrize("t, symbols", [
    ((2, 2, 2), [(2, 1, 1, "EVEN2_V", 5), (3, 0, 1, "DIAG", 0)]),
    ((2, 0, 2), [(2, 2, 2, "DIAG", 3)]),
    ((1, 0, 3), [(2, 1, 1, "DIAG", None), (3, 0, 1, "DIAG", 0)]),
])
def test_local_symbols_examples(t, symbols):
    got = local_symbols(L(*t))
    assert len(got) == len(symbols)
    for s, (p, k, l, kind, eps) in zip(got, symbols):
        assert (s.p, s.k, s.l, s.kind) == (p, k, l, kind)
        if eps is not None:
            assert s.eps % (8 if kind.startswith("EVEN2") else 4 if p == 2 else p) == eps


def test_local_order_examples():
    assert local_order(LocalSymbol(2, 1, 1, "EVEN2_V", 5)) == 6
    assert local_order(LocalSymbol(2, 2, 2, "DIAG", 3)) == 8
    # odd p, equal orders, non-square epsilon: dihedral of order 2(p+1)
    eps = next(e for e in range(1, 5) if chi(5, e) == -1)
    assert local_order(LocalSymbol(5, 1, 1, "DIAG", eps)) == 12


@pytest.mark.parametrize("t, n", [((1, 1, 4), 4), ((2, 2, 2), 12), ((3, 3, 3), 12), ((1, 0, 1), 2), ((2, 0, 2), 8)])
def test_global_order_examples(t, n):
    assert global_order(L(*t)) == n


@pytest.mark.parametrize("t, n", [((1, 0, 1), 2), ((1, 1, 4), 4)])
def test_brute_force_examples(t, n):
    assert brute_force_order(disc_form_of(t)) == n


def test_trivial_form_has_one_automorphism():
    D = FiniteQuadraticForm(1, 1, Fraction(0), Fraction(0), Fraction(0))
    assert brute_force_order(D) == 1


def test_automorphisms_form_a_group():
    D = disc_form_of((2, 2, 2))
    group = set(automorphisms(D))
    for g in group:
        for h in group:
            assert D.compose(g, h) in group
        for u in D.elements():
            assert D.q(*D.apply(g, u)) == D.q(*u)


def test_order_formula_against_brute_force():
    for T in all_lattices(150):
        brute = brute_force_order(disc_form_of(T))
        assert global_order(T) == brute, T
        assert local_product_order(T) == brute, T


def test_order_formula_on_unreduced_input():
    for t in [(4, 4, 2), (2, 4, 4), (5, 4, 1), (3, -7, 9), (6, 12, 7)]:
        T = L(*t)
        assert global_order(T) == brute_force_order(disc_form_of(T)) == local_product_order(T)


def test_two_part_never_cyclic():
    for T in all_lattices(500):
        for s in local_symbols(T):
            if s.p == 2:
                assert s.k >= 1, T


@pytest.mark.parametrize("x, y, iso", [
    ((1, 1, 4), (2, 1, 2), False),
    ((1, 1, 4), (1, 1, 4), True),
    ((1, 0, 3), (2, 2, 2), False),
    ((1, 1, 15), (3, 1, 5), True),
])
def test_forms_isometric(x, y, iso):
    assert forms_isometric(disc_form_of(x), disc_form_of(y)) is iso


def test_forms_isometric_equivalence_relation():
    sample = [T for T in all_lattices(80) if T.det in (48, 60, 64, 72, 80)]
    forms = [disc_form_of(T) for T in sample]
    rel = [[forms_isometric(a, b) for b in forms] for a in forms]
    n = len(forms)
    for i in range(n):
        assert rel[i][i]
        for j in range(n):
            assert rel[i][j] == rel[j][i]
            for k in range(n):
                if rel[i][j] and rel[j][k]:
                    assert rel[i][k]


@pytest.mark.parametrize("t, n, expected", [((1, 1, 1), 2, 12), ((1, 1, 2), 7, 2 * 2 * 7), ((1, 0, 1), 1, 2)])
def test_scaled_order_examples(t, n, expected):
    assert scaled_order(L(*t), n) == expected
    assert global_order(scale(L(*t), n)) == expected


def test_guard():
    D = disc_form_of((1, 1, 4))
    with pytest.raises(GuardExceeded) as info:
        automorphisms(D, guard=10)
    assert info.value.required == 15


def test_guard_env(monkeypatch):
    monkeypatch.delenv("ABELKIT_MAX_BRUTE", raising=False)
    assert default_guard() == 4096
    monkeypatch.setenv("ABELKIT_MAX_BRUTE", "12")
    assert default_guard() == 12
    with pytest.raises(GuardExceeded):
        brute_force_order(disc_form_of((1, 1, 4)))
