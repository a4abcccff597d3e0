"""Command-line front end.

Exit codes: 0 success, 1 oracle mismatch, 2 invalid input, 3 brute-force guard exceeded.
"""

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .arith import tau
from .counting import Rho2, Rho3, Rho4, count, shioda_mitani_check, weak_delta_tilde_oracle
from .discform import (
    DEFAULT_GUARD,
    GuardExceeded,
    brute_force_order,
    default_guard,
    disc_form_of,
    global_order,
    local_product_order,
    local_symbols,
)
from .genus import genus_of
from .picard3 import (
    DEFAULT_TOL,
    al_orbit_check,
    atkin_lehner,
    embedding_vectors,
    gram_check,
    hall_divisors,
    multiplier_invariant,
    multipliers_distinct,
    sigma_set,
)
from .qform import EvenBinaryLattice, class_number, enumerate_reduced

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_GUARD = 0, 1, 2, 3

CSV_COLUMNS = (
    "a", "b", "c", "det", "content", "|O(D)|",
    "genus_size", "proper_genus", "delta", "delta_tilde", "delta0",
)

# lists as printed in the literature, used only to report differences
PUBLISHED_CN1 = [
    (1, 1, 1), (1, 0, 1), (1, 1, 2), (1, 0, 2), (1, 1, 3), (1, 0, 3), (1, 0, 4),
    (1, 1, 5), (1, 1, 7), (1, 0, 7), (1, 1, 11), (1, 1, 17), (1, 1, 41),
]
PUBLISHED_CN2 = [
    15, 20, 24, 32, 35, 36, 40, 48, 51, 52, 60, 64, 75, 88, 91, 99, 100,
    112, 115, 123, 147, 148, 187, 232, 235, 267, 403, 427, 748,
]
# (2,0,2) has Gram matrix (4 0; 0 4), which is how it is usually quoted
PUBLISHED_NONPRIM = [(2, 0, 2), (2, 2, 2), (3, 3, 3), (2, 2, 4)]

CN1_MIN_BOUND = 164
CN2_MIN_BOUND = 748
NONPRIM_MIN_BOUND = 28


class UsageError(ValueError):
    pass


class BoundTooSmall(RuntimeError):
    pass


def parse_gram(text):
    try:
        a, b, c = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--gram expects three integers a,b,c, got {text!r}") from None
    try:
        return EvenBinaryLattice(a, b, c)
    except (ValueError, OverflowError) as exc:
        raise UsageError(str(exc)) from None


def parse_tau(text):
    try:
        re_, im = (float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--tau expects re,im, got {text!r}") from None
    if im <= 0:
        raise UsageError("--tau needs a positive imaginary part")
    return complex(re_, im)


def lattice_row(T, guard):
    """One CSV-shaped record for a lattice."""
    rep = genus_of(T, guard)
    counts = count(Rho4(T), guard)
    return {
        "a": T.a, "b": T.b, "c": T.c, "det": T.det, "content": T.content,
        "|O(D)|": rep.disc_order, "genus_size": rep.g_count, "proper_genus": rep.proper_count,
        "delta": counts.delta, "delta_tilde": counts.delta_tilde, "delta0": counts.delta0,
    }


def _triple(T):
    return [T.a, T.b, T.c]


# --- commands: each returns (record, csv rows, exit code) ---


def cmd_count(args, guard):
    inputs = {"picard": args.picard}
    if args.picard == 2:
        spec = Rho2()
    elif args.picard == 3:
        if args.N is None or args.N < 1:
            raise UsageError("--picard 3 needs --N >= 1")
        inputs["N"] = args.N
        spec = Rho3(args.N)
    else:
        if args.gram is None:
            raise UsageError("--picard 4 needs --gram a,b,c")
        T = parse_gram(args.gram)
        inputs["gram"] = _triple(T)
        spec = Rho4(T)
    c = count(spec, guard)
    results = {"delta": c.delta, "delta_tilde": c.delta_tilde, "delta0": c.delta0}
    checks = {"eq3": c.delta_tilde == 2 * c.delta - c.delta0}
    rows = []
    if isinstance(spec, Rho4):
        T = spec.T
        rep = genus_of(T, guard)
        results["genus"] = {
            "members": [_triple(M) for M in rep.members],
            "ambiguous": list(rep.ambiguous),
            "image_orders": list(rep.image_orders),
            "disc_order": rep.disc_order,
            "proper_count": rep.proper_count,
        }
        if T.is_primitive:
            h, ok = shioda_mitani_check(T, guard)
            results["class_number"] = h
            checks["class_number_identity"] = ok
        rows.append(lattice_row(T, guard))
    code = EXIT_OK if all(checks.values()) else EXIT_MISMATCH
    return {"inputs": inputs, "results": results, "checks": checks}, rows, code


def _bound(args, default, minimum, what):
    bound = default if args.max_det is None else args.max_det
    if bound < minimum:
        raise BoundTooSmall(f"{what} needs a sweep bound of at least {minimum}, got {bound}")
    return bound


def _table_cn1(args, guard):
    bound = _bound(args, 400, CN1_MIN_BOUND, "cn1")
    entries, rows = [], []
    for det in range(3, bound + 1):
        for T in enumerate_reduced(det, primitive_only=True):
            if T.b < 0:
                continue
            c = count(Rho4(T), guard)
            if c.delta_tilde != 1:
                continue
            h, sm = shioda_mitani_check(T, guard)
            entries.append({"gram": _triple(T), "det": det, "class_number": h, "class_number_identity": sm,
                            "counts": [c.delta, c.delta_tilde, c.delta0]})
            rows.append(lattice_row(T, guard))
    found = {tuple(e["gram"]) for e in entries}
    return entries, rows, found, set(PUBLISHED_CN1), bound


def _table_cn2(args, guard):
    bound = _bound(args, 800, CN2_MIN_BOUND, "cn2")
    entries, rows = [], []
    for d in range(3, bound + 1):
        if d % 4 not in (0, 3) or class_number(-d) != 2:
            continue
        forms = [T for T in enumerate_reduced(d, primitive_only=True) if T.a > 1]
        T = forms[0]
        c = count(Rho4(T), guard)
        entries.append({"d": d, "nonprincipal": _triple(T), "counts": [c.delta, c.delta_tilde, c.delta0],
                        "delta_is_1": c.delta == 1, "delta_tilde_is_2": c.delta_tilde == 2})
        rows.append(lattice_row(T, guard))
    found = {e["d"] for e in entries}
    return entries, rows, found, set(PUBLISHED_CN2), bound


def _table_nonprim(args, guard):
    bound = _bound(args, 400, NONPRIM_MIN_BOUND, "nonprim")
    entries, rows = [], []
    for det in range(3, bound + 1):
        for T in enumerate_reduced(det):
            if T.b < 0 or T.is_primitive:
                continue
            c = count(Rho4(T), guard)
            if c.delta != 1:
                continue
            entries.append({"gram": _triple(T), "det": det, "counts": [c.delta, c.delta_tilde, c.delta0]})
            rows.append(lattice_row(T, guard))
    found = {tuple(e["gram"]) for e in entries}
    return entries, rows, found, set(PUBLISHED_NONPRIM), bound


_TABLES = {"cn1": _table_cn1, "cn2": _table_cn2, "nonprim": _table_nonprim}


def _jsonable(x):
    return list(x) if isinstance(x, tuple) else x


def cmd_tables(args, guard):
    entries, rows, found, published, bound = _TABLES[args.which](args, guard)
    extra = sorted(found - published)
    missing = sorted(published - found)
    if extra or missing:
        print(
            f"note: computed {args.which} list differs from the published one "
            f"(extra {extra}, missing {missing})",
            file=sys.stderr,
        )
    results = {
        "count": len(entries),
        "entries": entries,
        "matches_published": not extra and not missing,
        "extra_vs_published": [_jsonable(x) for x in extra],
        "missing_vs_published": [_jsonable(x) for x in missing],
    }
    return {"inputs": {"which": args.which, "bound": bound}, "results": results, "checks": {}}, rows, EXIT_OK


def _odl_one(T, guard):
    closed = global_order(T)
    brute = brute_force_order(disc_form_of(T), guard)
    local = local_product_order(T)
    return closed, brute, local


def _sweep_det(job):
    det, guard, weak = job
    out = []
    for T in enumerate_reduced(det):
        if T.b < 0:
            continue
        closed, brute, local = _odl_one(T, guard)
        item = {"gram": _triple(T), "odl": [closed, brute, local], "ok": closed == brute == local}
        if weak:
            wc = count(Rho4(T), guard).delta_tilde
            wb = weak_delta_tilde_oracle(T, guard)
            item["weak"] = [wc, wb]
            item["ok"] = item["ok"] and wc == wb
        out.append(item)
    return out


def cmd_oracle(args, guard):
    if args.kind in ("odl", "weak"):
        if args.gram is None:
            raise UsageError(f"oracle {args.kind} needs --gram a,b,c")
        T = parse_gram(args.gram)
        if args.kind == "odl":
            closed, brute, local = _odl_one(T, guard)
            results = {
                "closed": closed, "brute": brute, "local_product": local,
                "local_symbols": [[s.p, s.k, s.l, s.kind, s.eps] for s in local_symbols(T)],
            }
            agree = closed == brute == local
        else:
            closed = count(Rho4(T), guard).delta_tilde
            brute = weak_delta_tilde_oracle(T, guard)
            results = {"closed": closed, "brute": brute}
            agree = closed == brute
        results["agree"] = agree
        record = {"inputs": {"kind": args.kind, "gram": _triple(T)}, "results": results, "checks": {"agree": agree}}
        return record, [lattice_row(T, guard)], EXIT_OK if agree else EXIT_MISMATCH
    if args.max_det is None or args.max_det < 3:
        raise UsageError("oracle sweep needs --max-det >= 3")
    jobs = [(d, guard, args.weak) for d in range(3, args.max_det + 1)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            per_det = list(pool.map(_sweep_det, jobs, chunksize=8))
    else:
        per_det = [_sweep_det(j) for j in jobs]
    items = [it for chunk in per_det for it in chunk]
    bad = [it for it in items if not it["ok"]]
    results = {"lattices": len(items), "mismatches": len(bad), "mismatch_list": bad}
    record = {
        "inputs": {"kind": "sweep", "max_det": args.max_det, "weak": args.weak},
        "results": results,
        "checks": {"no_mismatch": not bad},
    }
    return record, [], EXIT_OK if not bad else EXIT_MISMATCH


def _cx(z):
    return [z.real, z.imag]


def cmd_picard3(args, guard):
    N = args.N
    if N is None or N < 1:
        raise UsageError("picard3 needs --N >= 1")
    sigmas = []
    all_ok = True
    for sigma in sigma_set(N):
        vecs = embedding_vectors(N, sigma)
        pairings, ok = gram_check(N, vecs)
        all_ok &= ok
        sigmas.append({
            "r": sigma.r, "s": sigma.s, "a": sigma.a, "b": sigma.b,
            "e": list(vecs[0]), "f": list(vecs[1]), "l": list(vecs[2]),
            "gram": pairings, "gram_ok": ok,
            "multiplier": multiplier_invariant(N, sigma),
        })
    al = []
    for Q in hall_divisors(N):
        W = atkin_lehner(N, Q)
        sq = W.square_in_gamma0()
        all_ok &= sq
        al.append({"Q": Q, "W": [list(row) for row in W.W], "square_in_gamma0": sq})
    checks = {
        "sigma_size": len(sigmas) == 2 ** (tau(N) - 1),
        "gram": all_ok,
        "multipliers_distinct": multipliers_distinct(N),
    }
    results = {"sigma": sigmas, "atkin_lehner": al}
    inputs = {"N": N}
    if args.tau is not None:
        if N < 2:
            raise UsageError("--tau needs N > 1")
        z = parse_tau(args.tau)
        inputs["tau"] = _cx(z)
        checks["al_orbit"] = al_orbit_check(N, z, args.tol)
    code = EXIT_OK if all(checks.values()) else EXIT_MISMATCH
    return {"inputs": inputs, "results": results, "checks": checks}, None, code


# --- output ---


def _text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            nested = isinstance(v, dict) or (
                isinstance(v, list) and not all(isinstance(x, (int, float, str, bool)) for x in v)
            )
            if nested and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, dict) or (isinstance(v, list) and not all(isinstance(x, (int, str, bool)) for x in v)):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def render(record, rows, fmt):
    if fmt == "json":
        return json.dumps(record, sort_keys=False)
    if fmt == "text":
        return "\n".join(_text(record))
    if rows is None:
        raise UsageError("csv output is not available for this command")
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text", "csv"), default="json")
    common.add_argument(
        "--max-brute", type=int, default=None,
        help=f"largest |D| handled by brute force; overrides ABELKIT_MAX_BRUTE (default {DEFAULT_GUARD})",
    )

    p = argparse.ArgumentParser(
        prog="abelkit",
        description="Decomposition numbers of Abelian surfaces into products of elliptic curves.",
        epilog="Guard precedence: --max-brute, then ABELKIT_MAX_BRUTE, then the built-in default. "
        "Exit codes: 0 ok, 1 oracle mismatch, 2 invalid input, 3 guard exceeded.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", parents=[common], help="delta, delta_tilde and delta0 of one surface")
    c.add_argument("--picard", type=int, choices=(2, 3, 4), required=True)
    c.add_argument("--N", type=int)
    c.add_argument("--gram", help="transcendental lattice as a,b,c (Gram matrix (2a b; b 2c))")
    c.set_defaults(func=cmd_count)

    t = sub.add_parser("tables", parents=[common], help="reproduce the published tables")
    t.add_argument("which", choices=("cn1", "cn2", "nonprim"))
    t.add_argument("--max-det", type=int, help="sweep bound (det, or |discriminant| for cn2)")
    t.set_defaults(func=cmd_tables)

    o = sub.add_parser("oracle", parents=[common], help="closed forms against brute force")
    o.add_argument("kind", choices=("odl", "weak", "sweep"))
    o.add_argument("--gram")
    o.add_argument("--max-det", type=int)
    o.add_argument("--weak", action="store_true", help="sweep: also run the double-coset oracle")
    o.add_argument("--jobs", type=int, default=1)
    o.set_defaults(func=cmd_oracle)

    q = sub.add_parser("picard3", parents=[common], help="sigma set, embeddings and Atkin-Lehner data")
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--tau", help="re,im of a generic point; runs the orbit check")
    q.add_argument("--tol", type=float, default=DEFAULT_TOL)
    q.set_defaults(func=cmd_picard3)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_brute is not None and args.max_brute < 1:
        parser.error("--max-brute must be positive")
    try:
        guard = args.max_brute if args.max_brute is not None else default_guard()
    except ValueError:
        print("error: ABELKIT_MAX_BRUTE must be an integer", file=sys.stderr)
        return EXIT_INVALID
    start = time.perf_counter()
    try:
        record, rows, code = args.func(args, guard)
        record = {"command": args.command, **record}
        record["elapsed_ms"] = int((time.perf_counter() - start) * 1000)
        print(render(record, rows, args.format))
    except (UsageError, ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (GuardExceeded, BoundTooSmall) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    return code


if __name__ == "__main__":
    sys.exit(main())
