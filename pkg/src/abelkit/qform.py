"""Rank-2 positive-definite even lattices (integral binary quadratic forms).

A lattice is stored as the triple ``(a, b, c)`` with Gram matrix ``(2a b; b 2c)``,
i.e. the norm ``2a x^2 + 2b xy + 2c y^2``.  Its determinant ``4ac - b^2`` equals
minus the discriminant of the classical form ``a x^2 + b xy + c y^2``.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

from .arith import IDENTITY, check_bound, mat_det, mat_inv_unimodular, mat_mul, mat_transpose


@dataclass(frozen=True, order=True)
class EvenBinaryLattice:
    a: int
    b: int
    c: int

    def __post_init__(self):
        check_bound(self.a, self.b, self.c)
        if self.a <= 0 or 4 * self.a * self.c - self.b * self.b <= 0:
            raise ValueError(f"lattice {self.triple} is not positive definite")

    @classmethod
    def from_gram(cls, gram):
        (p, q), (r, s) = gram
        if q != r or p % 2 or s % 2:
            raise ValueError(f"{gram} is not the Gram matrix of an even lattice")
        return cls(p // 2, q, s // 2)

    @property
    def triple(self):
        return (self.a, self.b, self.c)

    @property
    def gram(self):
        return ((2 * self.a, self.b), (self.b, 2 * self.c))

    @property
    def det(self):
        return 4 * self.a * self.c - self.b * self.b

    @property
    def content(self):
        return gcd(gcd(self.a, self.b), self.c)

    @property
    def is_primitive(self):
        return self.content == 1

    def norm(self, x, y):
        return 2 * self.a * x * x + 2 * self.b * x * y + 2 * self.c * y * y

    def pair(self, v, w):
        return (
            2 * self.a * v[0] * w[0]
            + self.b * (v[0] * w[1] + v[1] * w[0])
            + 2 * self.c * v[1] * w[1]
        )

    def transform(self, u):
        """The lattice with Gram ``u^T G u``."""
        return EvenBinaryLattice.from_gram(mat_mul(mat_mul(mat_transpose(u), self.gram), u))

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


def as_lattice(x):
    if isinstance(x, EvenBinaryLattice):
        return x
    return EvenBinaryLattice(*x)


def is_reduced(L):
    a, b, c = as_lattice(L).triple
    if not (-a < b <= a <= c):
        return False
    return not (a == c and b < 0)


def reduce(L):
    """Gauss reduction.

    Returns ``(R, U)`` where ``R`` satisfies ``|b| <= a <= c`` (with ``b >= 0``
    when ``|b| == a`` or ``a == c``) and ``U`` has determinant +1 with
    ``U^T Gram(L) U == Gram(R)``.
    """
    L = as_lattice(L)
    a, b, c = L.triple
    U = IDENTITY
    while True:
        k = (a - b) // (2 * a)
        if k:
            b, c = b + 2 * a * k, a * k * k + b * k + c
            U = mat_mul(U, ((1, k), (0, 1)))
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            U = mat_mul(U, ((0, -1), (1, 0)))
            continue
        break
    return EvenBinaryLattice(a, b, c), U


def properly_equivalent(L, M):
    return reduce(L)[0] == reduce(M)[0]


def _vectors_of_norm(L, target):
    # Q = 2a (x + b y / 2a)^2 + (det / 2a) y^2, so y^2 <= 2a*target/det and likewise for x
    a, b, c = L.triple
    d = L.det
    ymax = isqrt(2 * a * target // d)
    xmax = isqrt(2 * c * target // d)
    return [
        (x, y)
        for y in range(-ymax, ymax + 1)
        for x in range(-xmax, xmax + 1)
        if L.norm(x, y) == target
    ]


@lru_cache(maxsize=None)
def _reduced_isometries(R):
    a, b, c = R.triple
    vs = _vectors_of_norm(R, 2 * a)
    ws = _vectors_of_norm(R, 2 * c)
    group = []
    for v in vs:
        for w in ws:
            if R.pair(v, w) == b:
                g = ((v[0], w[0]), (v[1], w[1]))
                if mat_det(g) in (1, -1):
                    group.append(g)
    return tuple(sorted(group))


def isometry_group(L):
    """All of O(L) as integer matrices ``g`` with ``g^T G g == G``."""
    R, U = reduce(L)
    Uinv = mat_inv_unimodular(U)
    return sorted(mat_mul(mat_mul(U, h), Uinv) for h in _reduced_isometries(R))


def special_isometry_group(L):
    return [g for g in isometry_group(L) if mat_det(g) == 1]


def is_ambiguous(L):
    """True iff L has an orientation-reversing isometry."""
    return any(mat_det(g) == -1 for g in isometry_group(L))


def is_ambiguous_reduced_criterion(L):
    a, b, c = reduce(L)[0].triple
    return b == 0 or a == b or a == c


def enumerate_reduced(det, primitive_only=False):
    """All reduced lattices of the given determinant, sorted by ``(a, b, c)``.

    Both signs of ``b`` appear, so the list holds one lattice per proper
    equivalence class.
    """
    if det < 3:
        raise ValueError(f"no positive-definite even binary lattice has det {det}")
    out = []
    a = 1
    while 3 * a * a <= det:
        for b in range(-a + 1, a + 1):
            num = det + b * b
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if primitive_only and gcd(gcd(a, b), c) != 1:
                continue
            out.append(EvenBinaryLattice(a, b, c))
        a += 1
    return sorted(out)


def class_number(discriminant):
    """Number of proper classes of primitive positive forms of a negative discriminant."""
    if discriminant >= 0 or discriminant % 4 not in (0, 1):
        raise ValueError(f"{discriminant} is not a negative discriminant")
    return len(enumerate_reduced(-discriminant, primitive_only=True))


def scale(L, n):
    """L(n): multiply the bilinear form by ``n``."""
    if n < 1:
        raise ValueError("scale factor must be positive")
    L = as_lattice(L)
    return EvenBinaryLattice(n * L.a, n * L.b, n * L.c)


def exceptional_shape(L):
    """Return ``('square', n)`` / ``('hexagonal', n)`` for (n,0,n) / (n,n,n) classes, else None."""
    a, b, c = reduce(L)[0].triple
    if a == c and b == 0:
        return ("square", a)
    if a == b == c:
        return ("hexagonal", a)
    return None
