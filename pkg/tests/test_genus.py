import pytest

from abelkit.discform import forms_isometric, disc_form_of, global_order
from abelkit.genus import genera, genus_of, image_order, proper_genus_count
from abelkit.qform import EvenBinaryLattice as L, enumerate_reduced, isometry_group


@pytest.mark.parametrize("t, members, proper", [
    ((1, 1, 4), [(1, 1, 4)], 1),
    ((2, 1, 2), [(2, 1, 2)], 1),
    ((1, 0, 5), [(1, 0, 5)], 1),
    ((2, 2, 3), [(2, 2, 3)], 1),
    ((1, 1, 1), [(1, 1, 1)], 1),
    ((3, 1, 5), [(1, 1, 15), (3, 1, 5)], 3),
])
def test_genus_examples(t, members, proper):
    rep = genus_of(L(*t))
    assert [M.triple for M in rep.members] == members
    assert rep.proper_count == proper == proper_genus_count(L(*t))


def test_proper_members_orientations():
    rep = genus_of((3, 1, 5))
    assert [M.triple for M in rep.proper_members] == [(1, 1, 15), (3, -1, 5), (3, 1, 5)]


@pytest.mark.parametrize("t, n", [((1, 1, 4), 2), ((2, 1, 2), 4), ((1, 0, 1), 2)])
def test_image_order(t, n):
    assert image_order(L(*t)) == n


def test_genus_partition():
    for det in range(3, 301):
        classes = [T for T in enumerate_reduced(det) if T.b >= 0]
        parts = genera(det)
        flat = [M for p in parts for M in p]
        assert sorted(flat) == classes
        for p in parts:
            D0 = disc_form_of(p[0])
            assert all(forms_isometric(D0, disc_form_of(M)) for M in p)


def test_primitive_genera_equal_size_and_count():
    for det in range(3, 301):
        if det % 4 not in (0, 3):
            continue
        prim = [p for p in genera(det) if p[0].is_primitive]
        sizes = {sum(2 if M.b and M.b != M.a and M.a != M.c else 1 for M in p) for p in prim}
        assert len(sizes) == 1, det
        assert len(prim) == global_order(prim[0][0]) // 2, det


def test_image_order_divides():
    for det in range(3, 200):
        for T in enumerate_reduced(det):
            n = image_order(T)
            assert len(isometry_group(T)) % n == 0
            assert global_order(T) % n == 0
