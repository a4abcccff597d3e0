"""Acceptance criteria 1-11, each at its stated tolerance.

Run under pytest, or directly with ``python tests/test_acceptance.py`` for one
pass/fail line per criterion.
"""

import random
import time
from fractions import Fraction

import pytest

from abelkit.arith import tau
from abelkit.counting import Rho3, Rho4, count, scaled_count_check, scaled_order_check, weak_delta_tilde_oracle
from abelkit.discform import brute_force_order, disc_form_of, global_order, local_product_order
from abelkit.genus import genus_of
from abelkit.picard3 import (
    EllipticPointError,
    al_orbit_check,
    atkin_lehner,
    embedding_vectors,
    gram_check,
    hall_divisors,
    multipliers_distinct,
    sigma_set,
)
from abelkit.qform import EvenBinaryLattice, class_number, enumerate_reduced, exceptional_shape

try:
    from conftest import ACCEPTANCE
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE = {}

THIRTEEN = {
    (1, 1, 1), (1, 0, 1), (1, 1, 2), (1, 0, 2), (1, 1, 3), (1, 0, 3), (1, 0, 4),
    (1, 1, 5), (1, 1, 7), (1, 0, 7), (1, 1, 11), (1, 1, 17), (1, 1, 41),
}
TWENTY_NINE = [
    15, 20, 24, 32, 35, 36, 40, 48, 51, 52, 60, 64, 75, 88, 91, 99, 100,
    112, 115, 123, 147, 148, 187, 232, 235, 267, 403, 427, 748,
]
# quoted as (4,0,4), (2,2,2), (3,3,3), (2,2,4); the first is the Gram shorthand
# of the (a,b,c) triple (2,0,2), see the README
FOUR = {(2, 0, 2), (2, 2, 2), (3, 3, 3), (2, 2, 4)}


def classes(max_det, primitive=None):
    for det in range(3, max_det + 1):
        for T in enumerate_reduced(det):
            if T.b < 0:
                continue
            if primitive is None or T.is_primitive == primitive:
                yield T


def record(n, ok, detail, elapsed, limit=None):
    within = limit is None or elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    budget = f" (limit {limit:.0f}s)" if limit else ""
    line = f"criterion {n:2d}: {status}  {detail}  [{elapsed:.2f}s{budget}]"
    ACCEPTANCE[n] = line
    print(line)
    return ok and within


def criterion_1():
    t = time.perf_counter()
    found = {T.triple for T in classes(400, primitive=True) if count(Rho4(T)).delta_tilde == 1}
    ok = found == THIRTEEN
    detail = f"{len(found)} lattices with delta_tilde = 1" + ("" if ok else f", diff {sorted(found ^ THIRTEEN)}")
    return record(1, ok, detail, time.perf_counter() - t, 10)


def criterion_2():
    t = time.perf_counter()
    found = [d for d in range(3, 801) if d % 4 in (0, 3) and class_number(-d) == 2]
    bad_counts = []
    for d in TWENTY_NINE:
        for T in enumerate_reduced(d, primitive_only=True):
            if T.a == 1 or T.b < 0:
                continue
            c = count(Rho4(T))
            if (c.delta, c.delta_tilde) != (1, 2):
                bad_counts.append((d, T.triple, c.delta, c.delta_tilde))
    same = set(found) == set(TWENTY_NINE)
    ok = same and not bad_counts
    detail = f"{len(found)} discriminants with h = 2"
    if not same:
        detail += f"; extra {sorted(set(found) - set(TWENTY_NINE))}, missing {sorted(set(TWENTY_NINE) - set(found))}"
    if bad_counts:
        detail += f"; delta/delta_tilde off for {bad_counts[:3]}{'...' if len(bad_counts) > 3 else ''}"
    return record(2, ok, detail, time.perf_counter() - t, 30)


def criterion_3():
    t = time.perf_counter()
    found = {T.triple for T in classes(400, primitive=False) if count(Rho4(T)).delta == 1}
    ok = found == FOUR
    return record(3, ok, f"non-primitive with delta = 1: {sorted(found)}", time.perf_counter() - t, 30)


def criterion_4():
    t = time.perf_counter()
    lattices = list(classes(150))
    bad = [T.triple for T in lattices if global_order(T) != brute_force_order(disc_form_of(T))]
    return record(4, not bad, f"{len(lattices)} lattices, {len(bad)} mismatches {bad[:5]}", time.perf_counter() - t, 60)


def criterion_5():
    t = time.perf_counter()
    lattices = list(classes(150))
    bad = [T.triple for T in lattices if local_product_order(T) != global_order(T)]
    return record(5, not bad, f"{len(lattices)} lattices, {len(bad)} mismatches {bad[:5]}", time.perf_counter() - t)


def _criterion_6_lattices():
    seen = {T.triple: T for T in classes(200)}
    for n in range(1, 9):
        for T in (EvenBinaryLattice(n, 0, n), EvenBinaryLattice(n, n, n)):
            seen.setdefault(T.triple, T)
    return list(seen.values())


def criterion_6():
    t = time.perf_counter()
    lattices = _criterion_6_lattices()
    bad = []
    for T in lattices:
        w, c = weak_delta_tilde_oracle(T), count(Rho4(T)).delta_tilde
        if w != c:
            bad.append((T.triple, w, c))
    return record(6, not bad, f"{len(lattices)} lattices, {len(bad)} mismatches {bad[:5]}", time.perf_counter() - t, 300)


def criterion_7():
    t = time.perf_counter()
    bad = []
    n = 0
    for T in classes(300, primitive=True):
        n += 1
        h = class_number(-T.det)
        rep = genus_of(T)
        if h != count(Rho4(T)).delta_tilde or h != Fraction(rep.proper_count * rep.disc_order, 2):
            bad.append(T.triple)
    return record(7, not bad, f"{n} primitive lattices, {len(bad)} mismatches {bad[:5]}", time.perf_counter() - t)


def criterion_8():
    t = time.perf_counter()
    bad = []
    checked = 0
    for T in classes(60):
        for n in range(2, 7):
            checked += 1
            if not scaled_order_check(T, n):
                bad.append(("order", T.triple, n))
            if exceptional_shape(T) is None and not scaled_count_check(T, n):
                bad.append(("count", T.triple, n))
    return record(8, not bad, f"{checked} (lattice, n) pairs, {len(bad)} failures {bad[:5]}", time.perf_counter() - t)


def criterion_9():
    t = time.perf_counter()
    bad = []
    for N in range(1, 10_001):
        sig = sigma_set(N)
        if len(sig) != 2 ** (tau(N) - 1):
            bad.append(("size", N))
        c = count(Rho3(N))
        if c.delta != len(sig) or c.delta_tilde != (1 if N == 1 else 2 ** tau(N)):
            bad.append(("delta_tilde", N))
        if not multipliers_distinct(N):
            bad.append(("distinct", N))
        if N <= 500 and not all(gram_check(N, embedding_vectors(N, s))[1] for s in sig):
            bad.append(("gram", N))
    return record(9, not bad, f"N <= 10^4, {len(bad)} failures {bad[:5]}", time.perf_counter() - t, 30)


def criterion_10():
    t = time.perf_counter()
    bad = []
    for N in range(1, 101):
        for Q in hall_divisors(N):
            if not atkin_lehner(N, Q).square_in_gamma0():
                bad.append(("square", N, Q))
    rng = random.Random(20240101)
    trials = 0
    for N in range(2, 31):
        done = 0
        while done < 5:
            z = complex(rng.uniform(-0.5, 0.5), rng.uniform(1.0, 2.0))
            try:
                ok = al_orbit_check(N, z, 1e-9)
            except EllipticPointError:
                continue  # not generic, draw again
            done += 1
            trials += 1
            if not ok:
                bad.append(("orbit", N, z))
    detail = f"W_Q^2 for N <= 100, {trials} orbit trials, {len(bad)} failures {bad[:5]}"
    return record(10, not bad, detail, time.perf_counter() - t, 60)


def criterion_11():
    t = time.perf_counter()
    specs = [Rho4(T) for T in classes(400)]
    specs += [Rho4(T) for T in _criterion_6_lattices()]
    for d in TWENTY_NINE:
        specs += [Rho4(T) for T in enumerate_reduced(d, primitive_only=True) if T.b >= 0]
    bad = []
    for s in specs:
        c = count(s)
        if c.delta_tilde != 2 * c.delta - c.delta0:
            bad.append(s)
    return record(11, not bad, f"{len(specs)} specs, {len(bad)} violations", time.perf_counter() - t)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 12)])
def test_acceptance(criterion):
    assert criterion(), ACCEPTANCE.get(CRITERIA.index(criterion) + 1)


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
