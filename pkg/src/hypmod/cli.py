"""Command-line interface.

Exit codes: 0 all checks pass, 1 some verification failed, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import hecke, padic, qseries, verify
from .errors import HypmodError, IdentityFails, LabelNotFound, NetworkDisabled

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fractions(values) -> list[Fraction]:
    out = []
    for v in values or []:
        for part in str(v).split(","):
            part = part.strip()
            if not part:
                continue
            try:
                out.append(Fraction(part))
            except (ValueError, ZeroDivisionError) as exc:
                raise UsageError(f"not a rational number: {part!r}") from exc
    return out


def _cmd_verify(args) -> int:
    rs = _fractions(args.r) or None
    allowed = verify.K4_R if args.theorem == "thm1" else verify.K5_R
    for r in rs or []:
        if r not in allowed:
            raise UsageError(f"r = {r} is not covered by {args.theorem}; "
                             f"choose from {', '.join(map(str, allowed))}")
    cps = _fractions(args.cprime) or None
    if cps and args.theorem != "f2":
        raise UsageError("--cprime only applies to f2")
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    report = verify.sweep(args.theorem, rs, args.pmax, args.backend, args.jobs, cps,
                          timings=args.timings)
    text = report.to_csv() if args.out and args.out.endswith(".csv") else report.to_json()
    if args.out:
        Path(args.out).write_text(text)
    c = report.counts
    summary = f"{args.theorem}: {c['pass']} pass, {c['fail']} fail, {c['skipped']} skipped"
    if report.note:
        summary += f" ({report.note})"
    print(summary)
    for r in report.results:
        if r.status == "fail":
            print(f"  FAIL r={r.r} p={r.p} lhs={r.lhs} rhs={r.rhs} {r.reason}")
    return EXIT_OK if report.ok else EXIT_FAIL


def _cmd_hecke(args) -> int:
    try:
        table = hecke.reproduce_table(args.family)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    for line in table.lines():
        print(line)
    if table.fixture is None:
        print(f"# no fixture for family {table.family}")
        return EXIT_OK
    if args.diff:
        diff = table.diff()
        print(diff if diff else "# computed table matches the fixture")
    print(f"# {len(table.cells)} cells, {len(table.mismatches)} mismatches")
    return EXIT_OK if table.ok else EXIT_FAIL


def _cmd_series(args) -> int:
    names = qseries.identity_names() if args.name == "all" else [args.name]
    for name in names:
        if name not in qseries.identity_names():
            raise UsageError(f"unknown identity {name!r}; see `series list`")
    blocks = qseries._Blocks(args.prec)
    failed = 0
    for name in names:
        try:
            rep = qseries.verify_identity(name, args.prec, blocks=blocks)
            print(f"{name}: ok through q^{rep.precision} ({rep.checked_terms} nonzero terms)")
        except IdentityFails as exc:
            failed += 1
            print(f"{name}: FAIL {exc}")
    return EXIT_FAIL if failed else EXIT_OK


def _cmd_series_list(args) -> int:
    for name in qseries.identity_names():
        print(name)
    return EXIT_OK


def _cmd_congruence(args) -> int:
    rs = _fractions(args.r)
    if not rs:
        rs = list(qseries.S5) if args.kind == "ar" else (
            list(verify.K5_R) if args.kind == "eigen" else list(verify.K4_R))
    failed = total = 0
    for r in rs:
        if args.kind == "psi":
            M = padic.hd_k4(r).M
        else:
            M = padic.lcd([Fraction(1, 3), r])
        for p in verify.split_primes(M, args.pmax, pmin=5):
            total += 1
            if args.kind == "ar":
                ok = padic.check_ar_congruence(r, p).holds
            elif args.kind == "eigen":
                ok = padic.check_eigencoefficient_congruence(r, p).holds
            else:
                rep = padic.psi_k4_mod_p(r, p)
                ok = rep.agrees_with_table if args.literal else rep.conjugate_relation
            if not ok:
                failed += 1
                print(f"  FAIL r={r} p={p}")
    print(f"congruence {args.kind}: {total - failed} pass, {failed} fail")
    return EXIT_FAIL if failed else EXIT_OK


def _cmd_lmfdb(args) -> int:
    from . import lmfdb
    primes = [int(p) for p in ",".join(args.primes).split(",") if p]
    rep = lmfdb.lmfdb_crosscheck(args.label, primes, allow_network=args.network)
    for p in rep.primes:
        print(f"a_{p}: local {rep.local[p]}, reference {rep.remote[p]}")
    print(f"# {args.label}: all {len(rep.primes)} coefficients agree ({rep.source})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypmod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify an identity over split primes")
    v.add_argument("theorem", choices=verify.THEOREMS)
    v.add_argument("--r", action="append", help="r value(s), e.g. 1/8 or 1/2,1/3")
    v.add_argument("--pmax", type=int, default=100)
    v.add_argument("--backend", choices=["exact", "complex"], default="exact")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--cprime", action="append", help="c' values for f2")
    v.add_argument("--out", help="write the report (.json or .csv)")
    v.add_argument("--timings", action="store_true",
                   help="record wall times (reports are then not reproducible)")
    v.set_defaults(func=_cmd_verify)

    h = sub.add_parser("hecke", help="Hecke tables")
    hs = h.add_subparsers(dest="hecke_command", required=True)
    ht = hs.add_parser("table", help="compute a family's Hecke table")
    ht.add_argument("--family", required=True, help=f"one of {', '.join(hecke.FAMILIES)}")
    ht.add_argument("--diff", action="store_true", help="unified diff against the fixture")
    ht.set_defaults(func=_cmd_hecke)

    s = sub.add_parser("series", help="formal q-series identities")
    ss = s.add_subparsers(dest="series_command", required=True)
    si = ss.add_parser("identity", help="verify a catalog identity")
    si.add_argument("--name", required=True, help="identity name or 'all'")
    si.add_argument("--prec", type=int, default=200)
    si.set_defaults(func=_cmd_series)
    sl = ss.add_parser("list", help="list catalog identities")
    sl.set_defaults(func=_cmd_series_list)

    c = sub.add_parser("congruence", help="mod-p congruences")
    c.add_argument("kind", choices=["ar", "eigen", "psi"])
    c.add_argument("--r", action="append")
    c.add_argument("--pmax", type=int, default=500)
    c.add_argument("--literal", action="store_true",
                   help="psi: compare with the tabulated multiplier itself")
    c.set_defaults(func=_cmd_congruence)

    lm = sub.add_parser("lmfdb", help="cross-check coefficients with LMFDB")
    lm.add_argument("--label", required=True)
    lm.add_argument("--primes", action="append", required=True)
    lm.add_argument("--network", action="store_true", help="allow fetching")
    lm.set_defaults(func=_cmd_lmfdb)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NetworkDisabled, LabelNotFound) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypmodError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
