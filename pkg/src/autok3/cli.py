"""Command-line front end: ``autok3 {pell,classify,table,sweep}``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product
from math import gcd
from typing import Optional

from .classify import GroupKind, UnsupportedLattice, classify
from .exactmath import IntMatrix2
from .forms import BinaryForm, EvenLattice, InvalidLattice
from .pell import PellTooLarge, TrivialSolution, epsilon_vector, solve_pell4, solve_reduced
from .serialize import SCHEMA, pell_out, report_out
from .tables import TABLE_HEADERS, render_tsv, table_rows

EXIT_INVALID = 2
EXIT_TOO_LARGE = 3


class UsageError(Exception):
    pass


def _emit(args, text: str, doc: Optional[dict] = None) -> None:
    if args.json:
        print(json.dumps(doc, sort_keys=True))
    elif not args.quiet or text:
        print(text)


# ---------------------------------------------------------------------------
# pell


def cmd_pell(args) -> int:
    d, rhs = args.d, args.rhs
    if d < 2:
        raise UsageError(f"d must be >= 2, got {d}")
    solver = solve_reduced if abs(rhs) == 1 else solve_pell4
    sol = solver(d, rhs)
    eps = None
    if args.eps and sol is not None:
        try:
            eps = epsilon_vector(d)
        except ValueError:
            eps = None
    if sol is None:
        verdict = "unsolvable"
        text = f"x^2 - {d} y^2 = {rhs}: unsolvable"
    elif isinstance(sol, TrivialSolution):
        verdict = "trivial"
        text = f"x^2 - {d} y^2 = {rhs}: trivial only {sol.as_tuple()}"
    else:
        verdict = "solvable"
        text = f"x^2 - {d} y^2 = {rhs}: ({sol.u}, {sol.v})"
    if eps is not None:
        text += "\neps: " + " ".join(f"{p}:{e:+d}" for p, e in eps)
    doc = {
        "schema": SCHEMA,
        "input": {"d": d, "rhs": rhs},
        "verdict": verdict,
        "result": pell_out(sol),
        "epsilon": None if eps is None else [[p, e] for p, e in eps],
    }
    _emit(args, text, doc)
    return 0


# ---------------------------------------------------------------------------
# classify


def _lattice_from_args(args) -> EvenLattice:
    if args.gram is not None:
        g11, g12, g21, g22 = args.gram
        gram = IntMatrix2(g11, g12, g21, g22)
        try:
            return EvenLattice.from_gram(gram)
        except InvalidLattice as exc:
            raise UsageError(str(exc)) from exc
    a, b, c = args.form
    q = BinaryForm(a, b, c)
    if args.n == 0:
        raise UsageError("n must be non-zero")
    g = q.content()
    if g == 0:
        raise UsageError("zero form")
    return EvenLattice(args.n * g, BinaryForm(a // g, b // g, c // g))


def _describe(report, show_generators: bool) -> str:
    L = report.lattice
    ext = report.extended
    lines = [
        f"lattice: Gram {report.gram.rows()} = 2*{L.n}*{L.q}, d = {L.d}",
        f"discriminant group: order {report.disc.order}, type {list(report.disc.snf_type) or 'trivial'}",
    ]
    if report.certificate is not None:
        c = report.certificate
        lines.append(f"ambiguous: {c.kind.value}, normal form {c.target}")
    else:
        lines.append("ambiguous: no")
    if report.roots is not None:
        lines.append(f"roots: basic {list(report.roots.basic)}")
    if report.u_power is not None:
        k, eps = report.u_power
        lines.append(f"u^{k} induces {'+' if eps == 1 else '-'}id")
    if report.involution_power is not None:
        ell, eps = report.involution_power
        lines.append(f"a u^{ell} induces {'+' if eps == 1 else '-'}id")
    lines.append(f"orthochronous group: {report.orthochronous.kind.value}")
    lines.append(f"extended group: {ext.kind.value} ({ext.provenance})")
    if ext.sign_degenerate:
        lines.append("note: +id and -id coincide on the discriminant group")
    if show_generators:
        for s in ext.generators:
            lines.append(f"  generator eps={s.epsilon:+d} {s.matrix.rows()}")
        if ext.rotation is not None:
            lines.append(f"  rotation  eps={ext.rotation.epsilon:+d} {ext.rotation.matrix.rows()}")
    lines.append(f"finite: {report.finite}")
    lines.append(
        "aut-general: guaranteed" if report.aut_general_guaranteed
        else "aut-general: not guaranteed (exceptional discriminant group)"
    )
    return "\n".join(lines)


def cmd_classify(args) -> int:
    L = _lattice_from_args(args)
    try:
        report = classify(L)
    except UnsupportedLattice as exc:
        raise UsageError(f"input is not hyperbolic: {exc}") from exc
    text = "" if args.quiet else _describe(report, args.generators)
    if args.quiet:
        text = report.extended.kind.value
    _emit(args, text, report_out(report))
    return 0


# ---------------------------------------------------------------------------
# table


def cmd_table(args) -> int:
    which = args.which
    if args.json:
        rows = [dict(zip(TABLE_HEADERS[which], row.cells())) for row in table_rows(which)]
        print(json.dumps({"schema": SCHEMA, "table": which, "rows": rows}, sort_keys=True))
    else:
        sys.stdout.write(render_tsv(which))
    return 0


# ---------------------------------------------------------------------------
# sweep

_KIND_ALIASES = {
    "trivial": GroupKind.TRIVIAL,
    "c2": GroupKind.CYCLIC_ORDER_2,
    "klein": GroupKind.KLEIN_FOUR,
    "cyclic": GroupKind.INFINITE_CYCLIC,
    "dihedral": GroupKind.INFINITE_DIHEDRAL,
}


def parse_kind(text: str) -> GroupKind:
    key = text.lower()
    for kind in GroupKind:
        if kind.value.lower() == key:
            return kind
    if key in _KIND_ALIASES:
        return _KIND_ALIASES[key]
    raise argparse.ArgumentTypeError(
        f"unknown kind {text!r}; use one of {[k.value for k in GroupKind]} or {sorted(_KIND_ALIASES)}"
    )


SWEEP_HEADER = ["n", "a", "b", "c", "d", "kind", "finite", "aut_general"]


def _sweep_one(key):
    n, a, b, c = key
    report = classify(EvenLattice(n, BinaryForm(a, b, c)))
    return key, report


def sweep_inputs(ranges, d_max: Optional[int]):
    (n0, n1), (a0, a1), (b0, b1), (c0, c1) = ranges
    for n, a, b, c in product(range(n0, n1 + 1), range(a0, a1 + 1), range(b0, b1 + 1), range(c0, c1 + 1)):
        if n == 0 or gcd(gcd(a, b), c) != 1:
            continue
        d = b * b - 4 * a * c
        if d <= 0 or (d_max is not None and d > d_max):
            continue
        yield (n, a, b, c)


def cmd_sweep(args) -> int:
    ranges = (args.n_range, args.a_range, args.b_range, args.c_range)
    if any(lo > hi for lo, hi in ranges):
        print("warning: empty range", file=sys.stderr)
        return 0
    keys = list(sweep_inputs(ranges, args.d_max))
    if not keys:
        print("warning: no indefinite primitive forms in range", file=sys.stderr)
        return 0
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_one, keys, chunksize=16))
    else:
        results = [_sweep_one(k) for k in keys]
    if not args.json and not args.quiet:
        print("\t".join(SWEEP_HEADER))
    for (n, a, b, c), report in results:
        if args.kind is not None and report.extended.kind is not args.kind:
            continue
        if args.json:
            print(json.dumps(report_out(report), sort_keys=True))
        else:
            print("\t".join(str(x) for x in (
                n, a, b, c, report.lattice.d, report.extended.kind.value,
                int(report.finite), int(report.aut_general_guaranteed),
            )))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="autok3",
        description="Isometry groups of even hyperbolic rank-2 lattices and Pell equations.",
    )
    p.add_argument("--json", action="store_true", help="emit JSON documents")
    p.add_argument("--quiet", action="store_true", help="terse output")
    p.add_argument(
        "--max-pell-bits", type=int, default=None,
        help="abort when a fundamental unit exceeds this many bits (default 4096)",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("pell", help="minimal solution of x^2 - d y^2 = rhs")
    sp.add_argument("d", type=int)
    sp.add_argument("--rhs", type=int, choices=(1, -1, 4, -4), default=1)
    sp.add_argument("--eps", action="store_true", help="also print eps(p) for p | d")
    sp.set_defaults(func=cmd_pell)

    sc = sub.add_parser("classify", help="classify one lattice")
    src = sc.add_mutually_exclusive_group(required=True)
    src.add_argument("--gram", type=int, nargs=4, metavar=("G11", "G12", "G21", "G22"))
    src.add_argument("--form", type=int, nargs=3, metavar=("A", "B", "C"))
    sc.add_argument("--n", type=int, default=1, help="multiplier for --form (Gram = n*(2a b; b 2c))")
    sc.add_argument("--generators", action="store_true", help="print generator matrices")
    sc.set_defaults(func=cmd_classify)

    st = sub.add_parser("table", help="recompute a reference table as TSV")
    st.add_argument("which", type=int, choices=(1, 2, 3))
    st.set_defaults(func=cmd_table)

    sw = sub.add_parser("sweep", help="classify every lattice in a box of (n, a, b, c)")
    for name, default in (("n", (1, 1)), ("a", (-3, 3)), ("b", (-3, 3)), ("c", (-3, 3))):
        sw.add_argument(f"--{name}", dest=f"{name}_range", type=int, nargs=2,
                        metavar=("LO", "HI"), default=default)
    sw.add_argument("--kind", type=parse_kind, default=None)
    sw.add_argument("--d-max", type=int, default=None)
    sw.add_argument("--jobs", type=int, default=1)
    sw.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_pell_bits is not None:
        # the environment variable reaches worker processes too
        os.environ["AUTOK3_MAX_PELL_BITS"] = str(args.max_pell_bits)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"autok3: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PellTooLarge as exc:
        print(f"autok3: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE


if __name__ == "__main__":
    sys.exit(main())
