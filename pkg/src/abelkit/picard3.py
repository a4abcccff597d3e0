"""Picard number 3: embeddings of U into U + <-2N>, Atkin-Lehner matrices and period points.

Everything lattice-theoretic here is exact integer arithmetic.  Floating point
only enters through points of the upper half plane (``period_point``,
``gamma0_equiv``, ``al_orbit_check``).
"""

from dataclasses import dataclass
from math import gcd

from .arith import IDENTITY, bezout, mat_adj, mat_det, mat_mul, tau

DEFAULT_TOL = 1e-9
MAX_REDUCTION_STEPS = 10_000

_T = ((1, 1), (0, 1))
_T_INV = ((1, -1), (0, 1))
_S = ((0, -1), (1, 0))


class EllipticPointError(ValueError):
    """The point lies too close to an orbit of i or of a cube root of unity."""


class ReductionError(RuntimeError):
    pass


@dataclass(frozen=True)
class SigmaEntry:
    r: int
    s: int
    a: int
    b: int

    def __post_init__(self):
        if self.r < 1 or self.s < 1:
            raise ValueError(f"r, s must be positive: {self}")
        if gcd(self.r, self.s) != 1:
            raise ValueError(f"gcd(r, s) != 1: {self}")
        if self.a * self.r + self.b * self.s != 1:
            raise ValueError(f"a*r + b*s != 1: {self}")

    @classmethod
    def canonical(cls, r, s):
        return cls(r, s, *bezout(r, s))

    @property
    def N(self):
        return self.r * self.s

    def swapped(self):
        return SigmaEntry.canonical(self.s, self.r)


def sigma_set(N):
    """Coprime factorizations N = r*s with r <= s, each with its canonical Bezout pair."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    out = []
    r = 1
    while r * r <= N:
        if N % r == 0 and gcd(r, N // r) == 1:
            out.append(SigmaEntry.canonical(r, N // r))
        r += 1
    return out


@dataclass(frozen=True)
class NSVector3:
    """Coordinates in the basis (e, f, l) of U + <-2N>."""

    x: int
    y: int
    z: int

    def pair(self, other, N):
        return self.x * other.y + self.y * other.x - 2 * N * self.z * other.z

    def __iter__(self):
        return iter((self.x, self.y, self.z))


def _check_sigma(N, sigma):
    if sigma.r * sigma.s != N or sigma.r > sigma.s:
        raise ValueError(f"{sigma} is not in the sigma set of N = {N}")


def embedding_vectors(N, sigma):
    """The vectors e_sigma, f_sigma (a copy of U) and l_sigma spanning its complement."""
    _check_sigma(N, sigma)
    r, s, a, b = sigma.r, sigma.s, sigma.a, sigma.b
    e = NSVector3(r, s, 1)
    f = NSVector3(b * b * s, a * a * r, -a * b)
    l = NSVector3(2 * N * b, -2 * N * a, b * s - a * r)
    return e, f, l


def gram_check(N, vectors):
    """Return the six pairings and whether they are (0, 0, 1, -2N, 0, 0)."""
    e, f, l = vectors
    got = {
        "ee": e.pair(e, N),
        "ff": f.pair(f, N),
        "ef": e.pair(f, N),
        "ll": l.pair(l, N),
        "el": e.pair(l, N),
        "fl": f.pair(l, N),
    }
    want = {"ee": 0, "ff": 0, "ef": 1, "ll": -2 * N, "el": 0, "fl": 0}
    return got, got == want


def multiplier_invariant(N, sigma):
    """(b*s - a*r) mod 2N: l_sigma/2N agrees with this multiple of l/2N in the discriminant group."""
    _check_sigma(N, sigma)
    return (sigma.b * sigma.s - sigma.a * sigma.r) % (2 * N)


def multipliers_distinct(N):
    """No two sigma give multipliers equal up to sign mod 2N."""
    mod = 2 * N
    seen = set()
    for sigma in sigma_set(N):
        m = multiplier_invariant(N, sigma)
        if m * m % (4 * N) != 1 % (4 * N):
            return False
        if m in seen or (-m) % mod in seen:
            return False
        seen.add(m)
    return True


# --- Atkin-Lehner matrices ---


def hall_divisors(N):
    return [Q for Q in range(1, N + 1) if N % Q == 0 and gcd(Q, N // Q) == 1]


def in_gamma0(g, N):
    return mat_det(g) == 1 and g[1][0] % N == 0


@dataclass(frozen=True)
class ALMatrix:
    W: tuple
    N: int
    Q: int

    def __post_init__(self):
        (p, q), (r, s) = self.W
        if mat_det(self.W) != self.Q:
            raise ValueError(f"det {self.W} != {self.Q}")
        if p % self.Q or s % self.Q or r % self.N:
            raise ValueError(f"{self.W} is not of Atkin-Lehner shape for N={self.N}, Q={self.Q}")

    def square_in_gamma0(self):
        """W^2 == Q * g with g in Gamma0(N)."""
        sq = mat_mul(self.W, self.W)
        if any(v % self.Q for row in sq for v in row):
            return False
        g = tuple(tuple(v // self.Q for v in row) for row in sq)
        return in_gamma0(g, self.N)

    def act(self, z):
        return mobius(self.W, z)


def atkin_lehner(N, Q):
    """Normal form (Q*x, -y; N, Q) with x*Q + y*(N/Q) = 1."""
    if N < 1 or Q < 1 or N % Q or gcd(Q, N // Q) != 1:
        raise ValueError(f"{Q} is not a Hall divisor of {N}")
    if Q == 1:
        return ALMatrix(IDENTITY, N, 1)
    if Q == N:
        return ALMatrix(((0, -1), (N, 0)), N, N)
    x, y = bezout(Q, N // Q)
    return ALMatrix(((Q * x, -y), (N, Q)), N, Q)


def al_group_law_holds(N, Q1, Q2):
    """W_Q1 W_Q2 = g W_Q3 * c with c = gcd(Q1, Q2), Q3 = Q1 Q2 / c^2 and g in Gamma0(N)."""
    c = gcd(Q1, Q2)
    Q3 = Q1 * Q2 // (c * c)
    M = mat_mul(atkin_lehner(N, Q1).W, atkin_lehner(N, Q2).W)
    num = mat_mul(M, mat_adj(atkin_lehner(N, Q3).W))
    den = c * Q3
    if any(v % den for row in num for v in row):
        return False
    return in_gamma0(tuple(tuple(v // den for v in row) for row in num), N)


# --- points of the upper half plane ---


def mobius(m, z):
    (a, b), (c, d) = m
    return (a * z + b) / (c * z + d)


def period_point(N, sigma, tau_):
    """Gamma0(N)-moduli point of E_sigma,1 = C/(Z + r tau Z) with its cyclic kernel of order N.

    ``sigma`` may carry r > s (the swapped decomposition).
    """
    if tau_.imag <= 0:
        raise ValueError(f"{tau_} is not in the upper half plane")
    r, s = sigma.r, sigma.s
    if r * s != N or gcd(r, s) != 1:
        raise ValueError(f"{sigma} does not factor N = {N}")
    u, v = bezout(r, s)
    w = r * tau_
    return (u * w - v) / (s * w + r)


def reduce_to_fundamental_domain(z):
    """Return ``(z0, g)`` with ``z0 = g z`` in the standard fundamental domain."""
    g = IDENTITY
    for _ in range(MAX_REDUCTION_STEPS):
        n = round(z.real)
        if n:
            z -= n
            g = mat_mul(((1, -n), (0, 1)), g)
        if abs(z) < 1:
            z = -1 / z
            g = mat_mul(_S, g)
        else:
            return z, g
    raise ReductionError(f"no convergence after {MAX_REDUCTION_STEPS} steps")


_ELLIPTIC = (1j, complex(-0.5, 3**0.5 / 2), complex(0.5, 3**0.5 / 2))


def _close(z, w, tol):
    return abs(z - w) <= tol * max(1.0, abs(z))


def gamma0_equiv(z1, z2, N, tol=DEFAULT_TOL):
    if z1.imag <= 0 or z2.imag <= 0:
        raise ValueError("points must lie in the upper half plane")
    w1, g1 = reduce_to_fundamental_domain(z1)
    w2, g2 = reduce_to_fundamental_domain(z2)
    for w in (w1, w2):
        if any(_close(w, e, tol) for e in _ELLIPTIC):
            raise EllipticPointError(f"{w} is too close to an elliptic point")
    # points on the boundary of the domain are glued by T, T^-1 and S
    for h in (IDENTITY, _T, _T_INV, _S):
        if _close(w1, mobius(h, w2), tol):
            # g1^-1 h g2 sends z2 to z1; the sign of the matrix does not matter
            g = mat_mul(mat_adj(g1), mat_mul(h, g2))
            if g[1][0] % N == 0:
                return True
    return False


def al_orbit(N, tau_):
    return [atkin_lehner(N, Q).act(tau_) for Q in hall_divisors(N)]


def decomposition_points(N, tau_):
    """Period points of every sigma and of its swap."""
    out = []
    for sigma in sigma_set(N):
        out.append(period_point(N, sigma, tau_))
        out.append(period_point(N, sigma.swapped(), tau_))
    return out


def al_orbit_check(N, tau_, tol=DEFAULT_TOL):
    """Atkin-Lehner orbit of tau equals the set of decomposition points, modulo Gamma0(N)."""
    if N < 2:
        raise ValueError("al_orbit_check needs N > 1")
    orbit = al_orbit(N, tau_)
    points = decomposition_points(N, tau_)
    if len(orbit) != 2 ** tau(N) or len(points) != 2 ** tau(N):
        return False
    unmatched = list(points)
    for w in orbit:
        for i, p in enumerate(unmatched):
            if gamma0_equiv(w, p, N, tol):
                del unmatched[i]
                break
        else:
            return False
    return not unmatched
