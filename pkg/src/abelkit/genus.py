"""Genus and proper-genus enumeration for positive-definite even binary lattices.

Two lattices of the same determinant lie in one genus iff their discriminant
forms are isometric; that is decided here by exhaustive search.
"""

from dataclasses import dataclass
from functools import lru_cache

from .discform import disc_form_of, forms_isometric, global_order, image_of_isometries, _check_guard
from .qform import as_lattice, enumerate_reduced, is_ambiguous, isometry_group, reduce


@dataclass(frozen=True)
class GenusReport:
    members: tuple
    ambiguous: tuple
    image_orders: tuple
    disc_order: int

    @property
    def g_count(self):
        return len(self.members)

    @property
    def proper_count(self):
        return sum(1 if amb else 2 for amb in self.ambiguous)

    @property
    def proper_members(self):
        """One reduced lattice per proper class: both orientations of non-ambiguous members."""
        out = []
        for L, amb in zip(self.members, self.ambiguous):
            out.append(L)
            if not amb:
                out.append(type(L)(L.a, -L.b, L.c))
        return sorted(out)


@lru_cache(maxsize=None)
def genera(det, guard=None):
    """Partition the isometry classes of determinant ``det`` into genera.

    Each isometry class is represented by its reduced form with ``b >= 0``.
    """
    classes = [L for L in enumerate_reduced(det) if L.b >= 0]
    parts = []
    for L in classes:
        D = disc_form_of(L)
        _check_guard(D, guard)
        for part in parts:
            rep = part[0]
            if rep.content == L.content and forms_isometric(disc_form_of(rep), D, guard):
                part.append(L)
                break
        else:
            parts.append([L])
    return tuple(tuple(p) for p in parts)


def image_order(T):
    """Order of the image of O(T) in O(D_T)."""
    return len(image_of_isometries(T))


@lru_cache(maxsize=None)
def _genus_report(R, guard):
    for part in genera(R.det, guard):
        if R in part:
            return GenusReport(
                members=part,
                ambiguous=tuple(is_ambiguous(M) for M in part),
                image_orders=tuple(image_order(M) for M in part),
                disc_order=global_order(R),
            )
    raise AssertionError(f"{R} missing from the genus partition of det {R.det}")


def isometry_class_rep(T):
    R = reduce(T)[0]
    if R.b < 0:
        R = type(R)(R.a, -R.b, R.c)
    return R


def genus_of(T, guard=None):
    return _genus_report(isometry_class_rep(as_lattice(T)), guard)


def proper_genus_count(T, guard=None):
    return genus_of(T, guard).proper_count


def orientation_images(T):
    """Images of SO(T) and O(T) in O(D_T)."""
    group = isometry_group(T)
    so = [g for g in group if g[0][0] * g[1][1] - g[0][1] * g[1][0] == 1]
    return image_of_isometries(T, so), image_of_isometries(T, group)
