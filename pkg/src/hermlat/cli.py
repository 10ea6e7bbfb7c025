"""Command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 reference-value mismatch.
The class-group cache lives in $HERMLAT_CACHE_DIR (default ~/.cache/hermlat)
and may be deleted at any time.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import __version__
from .autgroup import AutGuardError, unitary_aut_order
from .classgroup import ClassGroup, enumerate_classes
from .field import Field, field_from_discriminant, make_field
from .genus import GenusSym, exists_genus, list_genera, partial_mass, sample_lattice, total_mass
from .lattice import ConstructionError, is_unimodular, parity, steinitz

CACHE_ENV = "HERMLAT_CACHE_DIR"
CACHE_SCHEMA = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


# --- class-group cache -------------------------------------------------------


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "hermlat")


def load_class_group(F: Field, use_cache: bool = True) -> ClassGroup:
    path = cache_dir() / f"classgroup_{-F.d_K}.json"
    if use_cache and path.exists():
        try:
            rec = json.loads(path.read_text())
            if rec.get("schema_version") == CACHE_SCHEMA and rec.get("d_K") == F.d_K:
                return ClassGroup.from_record(rec)
        except (OSError, ValueError, KeyError):
            pass  # a damaged entry is simply recomputed
    CG = enumerate_classes(F)
    if use_cache:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            rec = dict(CG.to_record(), schema_version=CACHE_SCHEMA)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(rec))
            tmp.replace(path)
        except OSError:
            pass
    return CG


# --- output ------------------------------------------------------------------


def _emit(args, text: str, obj, rows: list[dict] | None = None):
    if args.json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    elif args.csv:
        rows = rows if rows is not None else [obj]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()) if rows else [], lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
        print(buf.getvalue(), end="")
    else:
        print(text)


def _table(header: list[str], rows: list[list]) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


# --- argument helpers --------------------------------------------------------


def _field(args) -> Field:
    try:
        if args.disc:
            return field_from_discriminant(args.D)
        return make_field(args.D)
    except ValueError as e:
        raise UsageError(f"argument D: {e}") from None


def _genus_from_args(args, F: Field, CG: ClassGroup) -> tuple[GenusSym, int]:
    """Genus and Steinitz class selected by --class (default: principal class)."""
    try:
        c = CG.from_word(args.cls) if args.cls else 0
    except (ValueError, KeyError) as e:
        raise UsageError(f"argument --class: {e}") from None
    eps = CG.char_table[c]
    if args.n < 1:
        raise UsageError("argument n: rank must be positive")
    if not exists_genus(F, args.parity, args.n, eps):
        raise UsageError(
            f"argument parity: no {args.parity} genus of rank {args.n} with Steinitz class {CG.word(c)}"
        )
    return GenusSym(F, args.parity, args.n, eps), c


def _genus_label(G: GenusSym, CG: ClassGroup) -> str:
    sym = "I" if G.parity == "odd" else "II"
    if G.is_principal_genus:
        return f"{sym}_{G.n}[o]"
    from .classgroup import ideal_genus_cosets

    return f"{sym}_{G.n}[{CG.word(ideal_genus_cosets(CG)[G.eps][0])}]"


# --- commands ----------------------------------------------------------------


def cmd_field(args) -> int:
    F = _field(args)
    obj = {
        "D": F.D,
        "d_K": F.d_K,
        "omega": "(1+sqrt(D))/2" if F.omega_mode == "half" else "sqrt(D)",
        "units": F.w,
        "ramified_primes": list(F.ramified_primes),
        "t": F.t,
    }
    text = "\n".join(f"{k:<16}{v}" for k, v in obj.items())
    _emit(args, text, obj)
    return 0


def cmd_classgroup(args) -> int:
    F = _field(args)
    CG = load_class_group(F, not args.no_cache)
    rows = [
        {"class": CG.word(i), "form": list(CG.forms[i]), "order": CG.order(i), "chars": list(CG.char_table[i])}
        for i in range(CG.h)
    ]
    obj = {
        "d_K": F.d_K,
        "h": CG.h,
        "structure": CG.structure_string(),
        "divisors": list(CG.elementary_divisors),
        "generators": {CG.word(g): list(CG.forms[g]) for g in CG.generators},
        "ramified_primes": list(F.ramified_primes),
        "classes": rows,
    }
    head = f"d_K = {F.d_K}   h = {CG.h}   Cl = {CG.structure_string()}\n"
    tab = _table(
        ["class", "form", "order"] + [f"chi_{p}" for p in F.ramified_primes],
        [[r["class"], tuple(r["form"]), r["order"], *[f"{e:+d}" for e in r["chars"]]] for r in rows],
    )
    _emit(args, head + tab, obj, rows)
    return 0


def _genus_rows(F: Field, CG: ClassGroup, genera) -> list[dict]:
    from .genus import occurring_steinitz_classes

    out = []
    for G in genera:
        out.append({
            "d_K": F.d_K,
            "genus": _genus_label(G, CG),
            "parity": G.parity,
            "n": G.n,
            "eps": list(G.eps),
            "classes": [CG.word(c) for c in occurring_steinitz_classes(G, CG)],
            "partial_mass": str(partial_mass(G)),
            "total_mass": str(total_mass(G, CG)),
        })
    return out


def cmd_genera(args) -> int:
    F = _field(args)
    if args.n < 1:
        raise UsageError("argument n: rank must be positive")
    CG = load_class_group(F, not args.no_cache)
    rows = _genus_rows(F, CG, list_genera(F, args.n))
    tab = _table(
        ["genus", "classes", "partial", "total"],
        [[r["genus"], ",".join(r["classes"]), r["partial_mass"], r["total_mass"]] for r in rows],
    )
    _emit(args, f"d_K = {F.d_K}   n = {args.n}\n" + tab, {"d_K": F.d_K, "n": args.n, "genera": rows}, rows)
    return 0


def cmd_mass(args) -> int:
    F = _field(args)
    CG = load_class_group(F, not args.no_cache)
    G, _ = _genus_from_args(args, F, CG)
    row = _genus_rows(F, CG, [G])[0]
    text = (
        f"d_K = {F.d_K}   genus {row['genus']}\n"
        f"partial mass  {row['partial_mass']}\n"
        f"total mass    {row['total_mass']}"
    )
    _emit(args, text, row)
    return 0


def cmd_construct(args) -> int:
    F = _field(args)
    CG = load_class_group(F, not args.no_cache)
    G, c = _genus_from_args(args, F, CG)
    L = sample_lattice(G, CG, c)
    obj = dict(L.to_json(), parity=parity(L), steinitz=CG.word(steinitz(L, CG)), unimodular=is_unimodular(L))
    lines = [f"d_K = {F.d_K}   genus {_genus_label(G, CG)}   Steinitz class {obj['steinitz']}"]
    for i, I in enumerate(L.coeff_ideals):
        lines.append(f"  ideal {i}: (1/{I.q})({I.a}Z + ({I.b} + {I.c}w)Z)")
    lines.append("  gram (x + y*sqrt(D)):")
    for row in L.gram:
        lines.append("    " + "  ".join(f"{e.x}{e.y:+}s" if e.y else f"{e.x}" for e in row))
    _emit(args, "\n".join(lines), obj)
    return 0


def cmd_aut(args) -> int:
    F = _field(args)
    CG = load_class_group(F, not args.no_cache)
    G, c = _genus_from_args(args, F, CG)
    L = sample_lattice(G, CG, c)
    order = unitary_aut_order(L)
    m = partial_mass(G)
    obj = {
        "d_K": F.d_K,
        "genus": _genus_label(G, CG),
        "steinitz": CG.word(c),
        "aut_order": order,
        "partial_mass": str(m),
        "mass_times_order": str(m * order),
        "single_class": m * order == 1,
    }
    text = (
        f"d_K = {F.d_K}   genus {obj['genus']}   Steinitz class {obj['steinitz']}\n"
        f"|U(L)|          {order}\n"
        f"mass * |U(L)|   {obj['mass_times_order']}"
    )
    _emit(args, text, obj)
    return 0


def cmd_search(args) -> int:
    from .search import full_search

    report = full_search(jobs=max(1, args.jobs))
    rows = report.certified() if not args.all else report.rows
    recs = [r.to_json() for r in rows]
    tab = _table(
        ["d_K", "genus", "partial", "|U(L)|"] + (["certified"] if args.all else []),
        [[r.d_K, r.label, r.partial_mass, r.aut_order if r.aut_order is not None else "-"]
         + ([r.certified] if args.all else []) for r in rows],
    )
    dm = ", ".join(f"n={n}: {c} -> {r}" for n, (c, r) in report.d_max.items())
    _emit(args, f"{tab}\nd_max (crude -> refined): {dm}", report.to_json(), recs)
    return 0


def cmd_verify_paper(args) -> int:
    from .reference import run_checks

    results = run_checks()
    recs = [{"check": r.name, "expected": str(r.expected), "got": str(r.got), "ok": r.ok} for r in results]
    lines = [f"{'ok  ' if r.ok else 'FAIL'}  {r.name}" + ("" if r.ok else f": expected {r.expected}, got {r.got}")
             for r in results]
    bad = sum(not r.ok for r in results)
    lines.append(f"{len(results) - bad}/{len(results)} reference values reproduced")
    _emit(args, "\n".join(lines), {"checks": recs, "mismatches": bad}, recs)
    return 2 if bad else 0


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output")
    fmt.add_argument("--csv", action="store_true", help="CSV output")
    common.add_argument("--no-cache", action="store_true", help="ignore the class-group cache")

    field_arg = argparse.ArgumentParser(add_help=False)
    field_arg.add_argument("D", type=int, help="squarefree D < 0 of Q(sqrt(D))")
    field_arg.add_argument("--disc", action="store_true", help="read D as the fundamental discriminant d_K")

    genus_arg = argparse.ArgumentParser(add_help=False)
    genus_arg.add_argument("n", type=int, help="rank")
    genus_arg.add_argument("parity", choices=["odd", "even"])
    genus_arg.add_argument("--class", dest="cls", default=None, help='Steinitz class as a word, e.g. "a^2*b"')

    p = _Parser(prog="hermlat", description="Unimodular hermitian lattices over imaginary-quadratic fields.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("field", parents=[field_arg, common], help="field invariants").set_defaults(fn=cmd_field)
    sub.add_parser("classgroup", parents=[field_arg, common], help="class group and genus characters").set_defaults(
        fn=cmd_classgroup)
    g = sub.add_parser("genera", parents=[field_arg, common], help="genera of rank n with masses")
    g.add_argument("n", type=int)
    g.set_defaults(fn=cmd_genera)
    sub.add_parser("mass", parents=[field_arg, genus_arg, common], help="partial and total mass").set_defaults(
        fn=cmd_mass)
    sub.add_parser("construct", parents=[field_arg, genus_arg, common], help="build a lattice in the genus").set_defaults(
        fn=cmd_construct)
    sub.add_parser("aut", parents=[field_arg, genus_arg, common], help="order of the unitary group").set_defaults(
        fn=cmd_aut)
    s = sub.add_parser("search", parents=[common], help="classify single-class genera")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s.add_argument("--all", action="store_true", help="also list candidates that failed")
    s.set_defaults(fn=cmd_search)
    sub.add_parser("verify-paper", parents=[common], help="recompute the published reference values").set_defaults(
        fn=cmd_verify_paper)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"hermlat {args.command}: error: {e}", file=sys.stderr)
        return 1
    except (ConstructionError, AutGuardError) as e:
        print(f"hermlat {args.command}: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
