"""Exact integer primitives: factoring, prime counts, characters, Bezout, 2x2 Smith form."""

from math import gcd, isqrt
import random

INT_BOUND = 1 << 63

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def check_bound(*values):
    """Raise OverflowError if any value leaves the signed 64-bit range."""
    for v in values:
        if not -INT_BOUND <= v < INT_BOUND:
            raise OverflowError(f"integer {v} exceeds the 2^63 bound")


def is_prime(n):
    # deterministic Miller-Rabin for n < 3.3e24 with these bases
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n):
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n):
    """Return the prime factorization of ``n`` as ``[(p, e), ...]`` sorted by ``p``.

    >>> factorize(12)
    [(2, 2), (3, 1)]
    >>> factorize(1)
    []
    """
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    check_bound(n)
    counts = {}
    for p in range(2, 1000):
        if p * p > n:
            break
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        r = isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_brent(m)
        stack += [d, m // d]
    return sorted(counts.items())


def tau(n):
    """Number of distinct prime divisors, with the convention tau(1) = 1."""
    if n < 1:
        raise ValueError(f"tau needs n >= 1, got {n}")
    return len(factorize(n)) if n > 1 else 1


def tau_tilde(n):
    """Like :func:`tau` but with tau_tilde(1) = 0."""
    if n < 1:
        raise ValueError(f"tau_tilde needs n >= 1, got {n}")
    return len(factorize(n)) if n > 1 else 0


def valuation(n, p):
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def chi(p, a):
    """Legendre symbol for odd p; for p = 2 the character on 1 mod 4 (0 on 0 mod 4)."""
    if p == 2:
        r = a % 8
        if r == 1:
            return 1
        if r == 5:
            return -1
        if a % 4 == 0:
            return 0
        raise ValueError(f"chi_2 is undefined for a = {a} (need a = 0 or 1 mod 4)")
    r = a % p
    if r == 0:
        return 0
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1


def egcd(x, y):
    """Return ``(g, s, t)`` with ``s*x + t*y == g == gcd(x, y) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while y:
        q, r = divmod(x, y)
        x, y = y, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if x < 0:
        return -x, -s0, -t0
    return x, s0, t0


def bezout(r, s):
    """Canonical Bezout pair ``(a, b)`` with ``a*r + b*s == 1`` and ``0 <= a < s``.

    For ``s == 1`` this gives ``(0, 1)``.
    """
    if r < 1 or s < 1:
        raise ValueError("bezout expects positive integers")
    if gcd(r, s) != 1:
        raise ValueError(f"gcd({r}, {s}) != 1")
    a = pow(r, -1, s) if s > 1 else 0
    b = (1 - a * r) // s
    return a, b


# --- 2x2 integer matrices as ((m00, m01), (m10, m11)) ---

IDENTITY = ((1, 0), (0, 1))


def mat_mul(x, y):
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


def mat_det(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def mat_transpose(m):
    return ((m[0][0], m[1][0]), (m[0][1], m[1][1]))


def mat_adj(m):
    """Adjugate, so that ``m @ adj(m) == det(m) * I``."""
    return ((m[1][1], -m[0][1]), (-m[1][0], m[0][0]))


def mat_inv_unimodular(m):
    d = mat_det(m)
    if d not in (1, -1):
        raise ValueError(f"matrix {m} is not unimodular")
    a = mat_adj(m)
    return tuple(tuple(d * v for v in row) for row in a)


def snf_2x2(m):
    """Smith normal form of a nonsingular 2x2 integer matrix.

    Returns ``(d1, d2, left, right)`` with ``left @ m @ right == diag(d1, d2)``,
    ``0 < d1``, ``d1 | d2`` and ``left``, ``right`` unimodular.
    """
    if mat_det(m) == 0:
        raise ValueError("snf_2x2 needs a nonsingular matrix")
    left, right, cur = IDENTITY, IDENTITY, m
    while True:
        (p, q), (r, s) = cur
        if r != 0:
            if p and r % p == 0:
                op = ((1, 0), (-(r // p), 1))
            else:
                g, u, v = egcd(p, r)
                op = ((u, v), (-r // g, p // g))
            cur, left = mat_mul(op, cur), mat_mul(op, left)
            continue
        if q != 0:
            if p and q % p == 0:
                op = ((1, -(q // p)), (0, 1))
            else:
                g, u, v = egcd(p, q)
                op = ((u, -q // g), (v, p // g))
            cur, right = mat_mul(cur, op), mat_mul(right, op)
            continue
        if s % p != 0:
            # diag(p, s) with p not dividing s: fold s into the first row
            op = ((1, 1), (0, 1))
            cur, left = mat_mul(op, cur), mat_mul(op, left)
            continue
        break
    (p, _), (_, s) = cur
    if p < 0:
        left = ((-left[0][0], -left[0][1]), left[1])
    if s < 0:
        left = (left[0], (-left[1][0], -left[1][1]))
    return abs(p), abs(s), left, right
