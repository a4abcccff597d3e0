"""Discriminant forms of rank-2 even lattices.

A :class:`FiniteQuadraticForm` lives on ``Z/d1 + Z/d2`` (``d1 | d2``) with fixed
generators ``g1, g2``.  Elements are pairs ``(x mod d1, y mod d2)``.  An
automorphism is stored as the pair of generator images ``(phi(g1), phi(g2))``.

Internally every value is kept as an integer numerator over ``2*d2``: ``q`` is
exact modulo ``4*d2`` (i.e. mod 2) and the bilinear form modulo ``2*d2``
(i.e. mod 1).
"""

import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .arith import chi, factorize, mat_det, snf_2x2, tau_tilde, valuation
from .qform import as_lattice, isometry_group, scale

DEFAULT_GUARD = 4096


class GuardExceeded(RuntimeError):
    """A brute-force computation would exceed the configured size limit."""

    def __init__(self, required, guard):
        super().__init__(f"discriminant group of order {required} exceeds brute-force guard {guard}")
        self.required = required
        self.guard = guard


def default_guard():
    env = os.environ.get("ABELKIT_MAX_BRUTE")
    return int(env) if env else DEFAULT_GUARD


def _resolve_guard(guard):
    return default_guard() if guard is None else guard


@dataclass(frozen=True)
class FiniteQuadraticForm:
    d1: int
    d2: int
    q11: Fraction
    q22: Fraction
    b12: Fraction
    _num: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        d1, d2 = self.d1, self.d2
        if d1 < 1 or d2 % d1:
            raise ValueError(f"need 1 <= d1 | d2, got ({d1}, {d2})")
        den = 2 * d2
        nums = []
        for v, mod in ((self.q11, 4 * d2), (self.q22, 4 * d2), (self.b12, den)):
            v = Fraction(v)
            if (v * den).denominator != 1:
                raise ValueError(f"value {v} does not have denominator dividing {den}")
            nums.append(int(v * den) % mod)
        object.__setattr__(self, "q11", Fraction(nums[0], den) % 2)
        object.__setattr__(self, "q22", Fraction(nums[1], den) % 2)
        object.__setattr__(self, "b12", Fraction(nums[2], den) % 1)
        object.__setattr__(self, "_num", tuple(nums))
        Q11, Q22, B12 = nums
        if (d1 * d1 * Q11) % (4 * d2) or (d2 * d2 * Q22) % (4 * d2) or (d1 * B12) % den:
            raise ValueError("quadratic form is not well defined on Z/d1 + Z/d2")
        if self.order <= 100_000 and not self._nondegenerate():
            raise ValueError("bilinear form is degenerate")

    @property
    def order(self):
        return self.d1 * self.d2

    def elements(self):
        return [(x, y) for x in range(self.d1) for y in range(self.d2)]

    def q_num(self, x, y):
        """Numerator of q(x g1 + y g2) over 2*d2, reduced mod 4*d2."""
        Q11, Q22, B12 = self._num
        return (x * x * Q11 + y * y * Q22 + 2 * x * y * B12) % (4 * self.d2)

    def b_num(self, u, v):
        """Numerator of b(u, v) over 2*d2, reduced mod 2*d2."""
        Q11, Q22, B12 = self._num
        return (u[0] * v[0] * Q11 + u[1] * v[1] * Q22 + (u[0] * v[1] + u[1] * v[0]) * B12) % (
            2 * self.d2
        )

    def q(self, x, y):
        return Fraction(self.q_num(x, y), 2 * self.d2)

    def b(self, u, v):
        return Fraction(self.b_num(u, v), 2 * self.d2)

    def _nondegenerate(self):
        g1, g2 = (1 % self.d1, 0), (0, 1 % self.d2)
        for u in self.elements():
            if u != (0, 0) and self.b_num(u, g1) == 0 and self.b_num(u, g2) == 0:
                return False
        return True

    def reduce_elt(self, x, y):
        return (x % self.d1, y % self.d2)

    def apply(self, phi, u):
        (a1, a2), (c1, c2) = phi
        return (u[0] * a1 + u[1] * c1) % self.d1, (u[0] * a2 + u[1] * c2) % self.d2

    def compose(self, phi, psi):
        """phi after psi."""
        return (self.apply(phi, psi[0]), self.apply(phi, psi[1]))

    @property
    def identity(self):
        return ((1 % self.d1, 0), (0, 1 % self.d2))

    def fingerprint(self):
        """Isometry invariant: group shape plus the distribution of q over elements."""
        return (self.d1, self.d2, tuple(sorted(Counter(self.q_num(*u) for u in self.elements()).items())))


@lru_cache(maxsize=4096)
def _disc_form_data(L):
    G = L.gram
    d1, d2, _, right = snf_2x2(G)
    # dual basis vectors g_i = right[:, i] / d_i, in coordinates of the lattice basis
    gens = [(Fraction(right[0][i], d), Fraction(right[1][i], d)) for i, d in enumerate((d1, d2))]

    def pair(v, w):
        return (
            G[0][0] * v[0] * w[0] + G[0][1] * (v[0] * w[1] + v[1] * w[0]) + G[1][1] * v[1] * w[1]
        )

    D = FiniteQuadraticForm(d1, d2, pair(gens[0], gens[0]), pair(gens[1], gens[1]), pair(gens[0], gens[1]))
    return D, right


def disc_form_of(L):
    """The discriminant form (L^dual / L, q_L) with generators taken from the Smith form."""
    return _disc_form_data(as_lattice(L))[0]


def _search_isometries(D1, D2, stop_at_first=False):
    """Maps sending D1's generators into D2 that preserve q and b (hence isometries)."""
    if (D1.d1, D1.d2) != (D2.d1, D2.d2):
        return []
    d1, d2 = D2.d1, D2.d2
    step = d2 // d1
    Q11, Q22, B12 = D1._num
    xs = [(x, y) for x in range(d1) for y in range(0, d2, step) if D2.q_num(x, y) == Q11]
    ys = [u for u in D2.elements() if D2.q_num(*u) == Q22]
    found = []
    for u in xs:
        for v in ys:
            if D2.b_num(u, v) == B12:
                found.append((u, v))
                if stop_at_first:
                    return found
    return found


def _check_guard(D, guard):
    guard = _resolve_guard(guard)
    if D.order > guard:
        raise GuardExceeded(D.order, guard)


@lru_cache(maxsize=4096)
def _automorphisms_cached(D):
    return tuple(sorted(_search_isometries(D, D)))


def automorphisms(D, guard=None):
    """All elements of O(D, q), found by exhaustive search."""
    _check_guard(D, guard)
    return list(_automorphisms_cached(D))


def brute_force_order(D, guard=None):
    return len(automorphisms(D, guard))


def isometries_between(D1, D2, guard=None):
    _check_guard(D1, guard)
    _check_guard(D2, guard)
    return _search_isometries(D1, D2)


def forms_isometric(D1, D2, guard=None):
    _check_guard(D1, guard)
    _check_guard(D2, guard)
    if D1.fingerprint() != D2.fingerprint():
        return False
    return bool(_search_isometries(D1, D2, stop_at_first=True))


def invert(D, phi):
    """Inverse of an automorphism of D."""
    table = {D.apply(phi, u): u for u in D.elements()}
    return (table[(1 % D.d1, 0)], table[(0, 1 % D.d2)])


def isometry_action(L, g):
    """The automorphism of D_L induced by an isometry ``g`` of ``L``."""
    L = as_lattice(L)
    D, right = _disc_form_data(L)
    rinv_det = mat_det(right)
    # right^{-1} = rinv_det * adj(right)
    adj = ((right[1][1], -right[0][1]), (-right[1][0], right[0][0]))
    images = []
    for i, d in enumerate((D.d1, D.d2)):
        # g * g_i = g * right[:, i] / d ; coordinates in basis right[:, j] / d_j
        col = (right[0][i], right[1][i])
        gv = (g[0][0] * col[0] + g[0][1] * col[1], g[1][0] * col[0] + g[1][1] * col[1])
        w = (rinv_det * (adj[0][0] * gv[0] + adj[0][1] * gv[1]), rinv_det * (adj[1][0] * gv[0] + adj[1][1] * gv[1]))
        # w / d = sum_j c_j right[:, j] / d_j  =>  c_j = w_j * d_j / d
        c = []
        for j, dj in enumerate((D.d1, D.d2)):
            num = w[j] * dj
            if num % d:
                raise ArithmeticError("isometry does not preserve the dual lattice")
            c.append(num // d)
        images.append(D.reduce_elt(*c))
    return tuple(images)


# --- local symbols ---

DIAG, EVEN2_U, EVEN2_V, TRIVIAL = "DIAG", "EVEN2_U", "EVEN2_V", "TRIVIAL"


@dataclass(frozen=True)
class LocalSymbol:
    """p-primary part of a discriminant form: orders (p^k, p^l), a type and a unit class.

    ``eps`` holds epsilon_p = -det / p^(2k) reduced mod p (odd p) or mod 8 (p = 2)
    when the two orders agree, and 0 otherwise.
    """

    p: int
    k: int
    l: int
    kind: str
    eps: int = 0

    def __post_init__(self):
        if self.kind not in (DIAG, EVEN2_U, EVEN2_V, TRIVIAL):
            raise ValueError(f"unknown symbol kind {self.kind}")
        if not 0 <= self.k <= self.l:
            raise ValueError("need 0 <= k <= l")
        if self.kind in (EVEN2_U, EVEN2_V) and (self.p != 2 or self.k != self.l or self.k < 1):
            raise ValueError("U/V symbols need p = 2 and k = l >= 1")
        if self.kind == TRIVIAL and self.l != 0:
            raise ValueError("trivial symbol must have k = l = 0")
        if self.p != 2 and self.eps and self.k != self.l:
            raise ValueError("odd-p eps is only defined when the orders agree")


def _v2(n):
    return valuation(n, 2) if n else float("inf")


def local_symbols(L):
    """One symbol per prime dividing det(L), read off the invariant factors."""
    L = as_lattice(L)
    det = L.det
    n, m, _, _ = snf_2x2(L.gram)
    out = []
    for p, _ in factorize(det):
        k, l = valuation(n, p), valuation(m, p)
        eps = 0
        if k == l:
            e = -det // p ** (2 * k)
            eps = e % 8 if p == 2 else e % p
        if p == 2 and _v2(L.b) < min(_v2(2 * L.a), _v2(2 * L.c)):
            kind = EVEN2_U if eps == 1 else EVEN2_V
            if eps not in (1, 5):
                raise ArithmeticError(f"even 2-block of {L} has eps {eps}")
        else:
            kind = DIAG
        out.append(LocalSymbol(p, k, l, kind, eps))
    return out


def local_order(s):
    """|O(D_p)| for one local symbol."""
    p, k, l = s.p, s.k, s.l
    if s.kind == TRIVIAL:
        return 1
    if s.kind == EVEN2_U:
        return 2**k
    if s.kind == EVEN2_V:
        return 3 * 2**k
    if l == 0:
        raise ValueError("DIAG symbol with trivial group")
    if p != 2:
        if k == l:
            if s.eps % p == 0:
                raise ValueError("odd-p A-type symbol needs a unit eps")
            return 2 * p ** (k - 1) * (p - chi(p, s.eps))
        if k == 0:
            return 2
        return 4 * p**k
    if k == 0:
        raise ValueError("2-primary part of a rank-2 even lattice is never cyclic")
    if k == l:
        if s.eps % 2 == 0:
            raise ValueError("2-adic A-type symbol needs an odd eps")
        if s.eps % 4 == 1:
            return 1 if k == 1 else 2**k
        return 2 if k == 1 else 2 ** (k + 1)
    big = l - k >= 3
    if k == 1:
        return 4 if big else 2
    return 2 ** (k + 2) if big else 2 ** (k + 1)


def global_order(L):
    """|O(D_L)| from the closed formula in the invariant factors (n, m)."""
    L = as_lattice(L)
    det = L.det
    n, m, _, _ = snf_2x2(L.gram)

    def eps(p):
        if valuation(n, p) == valuation(m, p):
            return -det // p ** (2 * valuation(n, p))
        return 0

    odd_prod = Fraction(1)
    for p, _ in factorize(n):
        if p != 2:
            odd_prod *= 1 - Fraction(chi(p, eps(p)), p)
    if det % 2:
        case = 1
    elif _v2(L.b) < min(_v2(2 * L.a), _v2(2 * L.c)):
        case = 1
    elif valuation(n, 2) == valuation(m, 2):
        case = 2
    else:
        case = 3
    if case == 1:
        two = Fraction(1)
        if n % 2 == 0:
            two = 1 - Fraction(chi(2, eps(2)), 2)
        val = 2 ** (tau_tilde(n) + tau_tilde(m // n)) * n * odd_prod * two
    else:
        if case == 2:
            C = Fraction(1) if eps(2) % 4 == 3 else Fraction(1, 2)
        else:
            C = Fraction(1) if valuation(m, 2) - valuation(n, 2) >= 3 else Fraction(1, 2)
        val = C * 2 ** (tau_tilde(n // 2) + tau_tilde(m // n)) * n * odd_prod
    if val.denominator != 1:
        raise ArithmeticError(f"non-integral order {val} for {L}")
    return int(val)


def local_product_order(L):
    out = 1
    for s in local_symbols(L):
        out *= local_order(s)
    return out


def scaled_order(L, n):
    """|O(D_{L(n)})|."""
    return global_order(scale(L, n))


def image_of_isometries(L, group=None):
    """Distinct automorphisms of D_L induced by the given isometries (default: all of O(L))."""
    if group is None:
        group = isometry_group(L)
    return sorted({isometry_action(L, g) for g in group})
