"""Command-line front end for the involution atlas.

Subcommands
-----------
order        group order of a classical-group family, numeric or symbolic
involutions  involution count, numeric or symbolic, with coset selectors
gf-verify    exact generating-function identity checks by theorem label
asym         convergence tables for the large-dimension limit constants
oracle       brute-force versus formula involution counts on one group
tables       recompute-and-diff report for the frozen polynomial tables

Every command prints plain text by default and machine-readable JSON with
--format json (tabular commands also accept --format csv).  JSON payloads
carry a top-level "schema": 1 and contain no timestamps, so identical
invocations produce byte-identical output.

Exit codes: 0 success/verified, 1 verification mismatch, 2 usage or
precondition error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .asymptotics import LIMIT_KINDS, LimitSpec, convergence_table, limit_value
from .counts import count_involutions, count_involutions_poly
from .exact import render_poly
from .fixtures import (SP_EVEN_CHAR_INVOLUTIONS, SP_ODD_CHAR_BRUTE,
                       omega_table_poly, sp_involution_poly)
from .oracle import (CapExceeded, _built, count_involutions_bruteforce,
                     enumeration_cap)
from .orders import (COSET_FAMILIES, GROUP_FAMILIES, GroupSpec, char_parity_of,
                     order_int, order_poly)
from .qseries import THEOREMS, verify_identity

# CLI kind tokens for the limit kinds, hyphenated for flag ergonomics
KIND_TOKENS = {
    "so-0mod4": "SO_dim0mod4",
    "so-2mod4": "SO_dim2mod4",
    "so-odd-dim": "SO_odd_dim",
    "coset-so-0mod4": "Coset_SO_dim0mod4",
    "coset-so-2mod4": "Coset_SO_dim2mod4",
    "omega-odd-0mod4": "Omega_qodd_dim0mod4",
    "omega-odd-2mod4": "Omega_qodd_dim2mod4",
    "omega-odd-dim": "Omega_odd_dim",
    "omega-even-0mod4": "Omega_qeven_dim0mod4",
    "omega-even-2mod4": "Omega_qeven_dim2mod4",
    "coset-omega-0mod4": "Coset_Omega_dim0mod4",
    "coset-omega-2mod4": "Coset_Omega_dim2mod4",
    "ratio-omega-so": "Ratio_Omega_over_SO",
}
assert set(KIND_TOKENS.values()) == set(LIMIT_KINDS)

SCHEMA = 1


def _emit_json(payload: dict) -> None:
    payload = {"schema": SCHEMA, **payload}
    print(json.dumps(payload, sort_keys=True, indent=2))


def _target_spec(args) -> GroupSpec:
    """Resolve --family/--coset/--dim into a validated GroupSpec."""
    family = args.family
    coset = getattr(args, "coset", None)
    if coset is not None:
        if family not in ("O+", "O-", "O"):
            raise ValueError("--coset applies to the full orthogonal "
                             "families O+, O-, O")
        if family == "O":
            # odd dimension: handled by subtraction in the caller
            return GroupSpec("O", args.dim, args.char_parity)
        family = f"{family}\\{coset}{family[-1]}"
    return GroupSpec(family, args.dim, args.char_parity)


def _resolve_parity(args) -> None:
    """Derive --char-parity from --q, rejecting contradictions."""
    if args.q is not None:
        derived = char_parity_of(args.q)
        if args.char_parity is not None and args.char_parity != derived:
            raise ValueError(f"--char-parity {args.char_parity} contradicts "
                             f"q = {args.q} (characteristic is {derived})")
        args.char_parity = derived
    elif args.char_parity is None:
        args.char_parity = "odd"


def cmd_order(args) -> int:
    _resolve_parity(args)
    spec = _target_spec(args)
    if args.q is not None:
        value = str(order_int(spec, args.q))
    else:
        value = render_poly(order_poly(spec))
    if args.format == "json":
        payload = {"family": spec.family, "dim": spec.dim,
                   "char_parity": spec.char_parity, "order": value}
        if args.q is not None:
            payload["q"] = args.q
        _emit_json(payload)
    else:
        print(value)
    return 0


def cmd_involutions(args) -> int:
    _resolve_parity(args)
    spec = _target_spec(args)
    if getattr(args, "coset", None) is not None and spec.family == "O":
        # odd dimension: the reflection coset is O minus SO
        so = GroupSpec("SO", args.dim, args.char_parity)
        if args.q is not None:
            value = (count_involutions(spec, args.q, args.branch).value
                     - count_involutions(so, args.q, args.branch).value)
            value_str = str(value)
        else:
            diff = (count_involutions_poly(spec, args.branch).value
                    - count_involutions_poly(so, args.branch).value)
            value_str = render_poly(diff)
        payload = {"family": f"O\\{args.coset}", "dim": args.dim,
                   "value": value_str, "formula_id": "O_minus_SO[odd dim]"}
        if args.q is not None:
            payload["q"] = args.q
    else:
        if args.q is not None:
            report = count_involutions(spec, args.q, args.branch)
        else:
            report = count_involutions_poly(spec, args.branch)
        payload = report.to_json_dict()
        value_str = payload["value"]
    if args.format == "json":
        _emit_json(payload)
    else:
        print(value_str)
    return 0


def cmd_gf_verify(args) -> int:
    theorem = THEOREMS[args.theorem]
    if theorem.signed:
        signs = [args.sign] if args.sign else ["plus", "minus"]
    else:
        if args.sign:
            raise ValueError(f"theorem {args.theorem} has no sign choice")
        signs = [None]
    reports = [verify_identity(args.theorem, sign, args.max_n)
               for sign in signs]
    ok = all(r.all_equal for r in reports)
    if args.format == "json":
        _emit_json({"theorem": args.theorem,
                    "statement": theorem.statement,
                    "max_n": args.max_n,
                    "reports": [r.to_json_dict() for r in reports],
                    "all_equal": ok})
    else:
        print(f"{args.theorem}: {theorem.statement}")
        for rep in reports:
            tag = f" [sign={rep.sign}]" if rep.sign else ""
            verdict = "PASS" if rep.all_equal else "FAIL"
            print(f"{args.theorem}{tag} through u^{args.max_n}: {verdict}")
            if not rep.all_equal:
                for row in rep.rows:
                    if not row.equal:
                        print(f"  first mismatch at n={row.n}:")
                        print(f"    lhs = {row.lhs}")
                        print(f"    rhs = {row.rhs}")
                        break
    return 0 if ok else 1


def cmd_asym(args) -> int:
    spec = LimitSpec(KIND_TOKENS[args.kind], args.q, args.sign)
    rows = convergence_table(spec, max_dim=args.max_dim, eps=args.eps)
    limit = limit_value(spec, eps=args.eps)
    ok = True
    if args.tolerance is not None:
        ok = rows and rows[-1].abs_error < args.tolerance
    if args.format == "json":
        _emit_json({"kind": args.kind, "q": args.q, "sign": args.sign,
                    "limit": float(limit.value),
                    "limit_error_bound": float(limit.error_bound),
                    "rows": [{"dim": r.dim, "ratio": float(r.ratio),
                              "abs_error": float(r.abs_error)} for r in rows],
                    "tolerance": (None if args.tolerance is None
                                  else float(args.tolerance)),
                    "ok": bool(ok)})
    elif args.format == "csv":
        print("dim,ratio,abs_error")
        for r in rows:
            print(f"{r.dim},{float(r.ratio)!r},{float(r.abs_error)!r}")
    else:
        print(f"kind={args.kind} q={args.q} sign={args.sign} "
              f"limit={float(limit.value):.12f}")
        for r in rows:
            print(f"  dim={r.dim:>3}  ratio={float(r.ratio):.12f}  "
                  f"error={float(r.abs_error):.3e}")
        if args.tolerance is not None:
            verdict = "ok" if ok else "FAIL"
            print(f"final error vs tolerance {float(args.tolerance):g}: "
                  f"{verdict}")
    return 0 if ok else 1


def cmd_oracle(args) -> int:
    family = args.family
    coset = getattr(args, "coset", None)
    if family == "Sp":
        build_family, subset = "Sp", "all"
    elif coset is not None:
        if not family.startswith("O") or family.startswith("Omega"):
            raise ValueError("--coset applies to the full orthogonal "
                             "families O+, O-, O")
        build_family, subset = family, "coset"
    elif family.startswith("Omega"):
        build_family, subset = "O" + family[5:], "omega"
    elif family.startswith("SO"):
        build_family, subset = "O" + family[2:], "det1"
    else:
        build_family, subset = family, "all"
    parity = char_parity_of(args.q)
    source = "formula"
    if family == "Sp":
        # symplectic counts are frozen fixtures, not closed formulas
        source = "formula-fixture"
        if args.q % 2 == 0:
            expected = int(sp_involution_poly(args.dim)(args.q))
        elif (args.dim, args.q) in SP_ODD_CHAR_BRUTE:
            expected = SP_ODD_CHAR_BRUTE[(args.dim, args.q)]
        else:
            raise ValueError(f"no frozen involution fixture for "
                             f"Sp({args.dim},{args.q}) at odd q")
        label = family
    elif coset is not None and family != "O":
        target = GroupSpec(f"{family}\\{coset}{family[-1]}", args.dim, parity)
        expected = count_involutions(target, args.q).value
        label = target.family
    elif coset is not None:
        expected = (count_involutions(GroupSpec("O", args.dim, parity), args.q).value
                    - count_involutions(GroupSpec("SO", args.dim, parity), args.q).value)
        label = "O\\SO"
    else:
        target = GroupSpec(family, args.dim, parity)
        expected = count_involutions(target, args.q).value
        label = family
    G = _built(build_family, args.dim, args.q, args.cap)
    brute = count_involutions_bruteforce(G, subset)
    ok = brute == expected
    if args.format == "json":
        _emit_json({"family": label, "dim": args.dim, "q": args.q,
                    "subset": subset, "source": source, "formula": expected,
                    "brute": brute, "ok": ok})
    else:
        verdict = "ok" if ok else "MISMATCH"
        print(f"{label}({args.dim},{args.q}): {source} {expected} = "
              f"brute {brute}: {verdict}")
    return 0 if ok else 1


def _omega_table_report(max_n: int) -> list:
    rows = []
    for n in range(2, max_n + 1):
        dim = 2 * n
        for sign in ("+", "-"):
            if dim % 4 == 0:
                family = f"Omega{sign}"
            else:
                family = f"O{sign}\\Omega{sign}"
            computed = count_involutions_poly(
                GroupSpec(family, dim, "even")).value
            note = ""
            try:
                fixture = omega_table_poly(dim, sign)
            except ValueError:
                # the table stores one entry when both signs coincide
                fixture = omega_table_poly(dim, "+")
                note = "entry shared across signs"
            rows.append({"dim": dim, "family": family,
                         "fixture": render_poly(fixture),
                         "computed": render_poly(computed),
                         "match": computed == fixture, "note": note})
    return rows


def _sp_table_report(max_n: int, cap) -> list:
    cap = enumeration_cap(cap)
    rows = []
    for dim in sorted(d for d in SP_EVEN_CHAR_INVOLUTIONS if d <= 2 * max_n):
        poly = sp_involution_poly(dim)
        order2 = order_int(GroupSpec("Sp", dim, "even"), 2)
        if order2 <= cap:
            G = _built("Sp", dim, 2, cap)
            brute = count_involutions_bruteforce(G, "all")
            expected = int(poly(2))
            rows.append({"dim": dim, "family": "Sp",
                         "fixture": render_poly(poly),
                         "brute_q2": brute, "match": brute == expected,
                         "note": "fixture, oracle-spot-checked at q=2"})
        else:
            rows.append({"dim": dim, "family": "Sp",
                         "fixture": render_poly(poly), "brute_q2": None,
                         "match": True,
                         "note": f"fixture (order {order2} above cap at q=2)"})
    return rows


def cmd_tables(args) -> int:
    if args.table == "omega":
        rows = _omega_table_report(args.max_n)
    else:
        rows = _sp_table_report(args.max_n, args.cap)
    ok = all(r["match"] for r in rows)
    if args.format == "json":
        _emit_json({"table": args.table, "max_n": args.max_n, "rows": rows,
                    "all_match": ok})
    elif args.format == "csv":
        print("table,dim,family,fixture,match,note")
        for r in rows:
            print(f"{args.table},{r['dim']},{r['family']},"
                  f"\"{r['fixture']}\",{r['match']},\"{r['note']}\"")
    else:
        for r in rows:
            verdict = "ok" if r["match"] else "MISMATCH"
            note = f"  ({r['note']})" if r["note"] else ""
            print(f"{r['family']:>12} dim {r['dim']:>2}: {r['fixture']}"
                  f"  [{verdict}]{note}")
        print(f"{len(rows)} rows, "
              f"{'all match' if ok else 'MISMATCHES PRESENT'}")
    return 0 if ok else 1


def _add_group_flags(sub, with_coset=True) -> None:
    sub.add_argument("--family", required=True,
                     choices=GROUP_FAMILIES + COSET_FAMILIES)
    sub.add_argument("--dim", required=True, type=int)
    sub.add_argument("--q", type=int)
    sub.add_argument("--symbolic", action="store_true",
                     help="evaluate as a polynomial in q")
    sub.add_argument("--char-parity", choices=("odd", "even"), default=None)
    if with_coset:
        sub.add_argument("--coset", choices=("SO", "Omega"),
                         help="count the complement of this subgroup "
                              "inside the chosen full orthogonal group")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="involution-atlas",
        description="Exact involution counts, generating-function checks, "
                    "asymptotic limits, and brute-force cross-validation "
                    "for the finite classical groups.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("order", help="group order, numeric or symbolic")
    _add_group_flags(p, with_coset=False)
    p.add_argument("--format", choices=("plain", "json"), default="plain")
    p.set_defaults(func=cmd_order)

    p = subs.add_parser("involutions",
                        help="involution count, numeric or symbolic")
    _add_group_flags(p)
    p.add_argument("--branch", choices=("1mod4", "3mod4"),
                   help="q mod 4 branch for symbolic Omega counts, q odd")
    p.add_argument("--format", choices=("plain", "json"), default="plain")
    p.set_defaults(func=cmd_involutions)

    p = subs.add_parser("gf-verify",
                        help="verify a generating-function identity")
    p.add_argument("--theorem", required=True, choices=sorted(THEOREMS))
    p.add_argument("--sign", choices=("plus", "minus"))
    p.add_argument("--max-n", type=int, default=10,
                   help="check coefficients through u^N")
    p.add_argument("--format", choices=("plain", "json"), default="plain")
    p.set_defaults(func=cmd_gf_verify)

    p = subs.add_parser("asym", help="convergence table for a limit kind")
    p.add_argument("--kind", required=True, choices=sorted(KIND_TOKENS))
    p.add_argument("--q", required=True, type=int)
    p.add_argument("--sign", choices=("plus", "minus"), default="plus")
    p.add_argument("--max-dim", type=int, default=24)
    p.add_argument("--eps", type=Fraction, default=Fraction(1, 10 ** 12),
                   help="truncation error budget for the limit products")
    p.add_argument("--tolerance", type=Fraction,
                   help="exit 0 only if the final error is below this")
    p.add_argument("--format", choices=("plain", "json", "csv"),
                   default="plain")
    p.set_defaults(func=cmd_asym)

    p = subs.add_parser("oracle",
                        help="brute-force versus formula count on one group")
    p.add_argument("--family", required=True, choices=GROUP_FAMILIES)
    p.add_argument("--dim", required=True, type=int)
    p.add_argument("--q", required=True, type=int)
    p.add_argument("--coset", choices=("SO", "Omega"))
    p.add_argument("--cap", type=int, default=None,
                   help="override the enumeration cap "
                        "(default from INVOLUTION_ATLAS_CAP)")
    p.add_argument("--format", choices=("plain", "json"), default="plain")
    p.set_defaults(func=cmd_oracle)

    p = subs.add_parser("tables", help="diff the frozen polynomial tables")
    p.add_argument("--table", required=True, choices=("sp", "omega"))
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--format", choices=("plain", "json", "csv"),
                   default="plain")
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "q", None) is None and hasattr(args, "symbolic"):
        if not args.symbolic and args.command in ("order", "involutions"):
            print("error: provide --q for a numeric value or --symbolic "
                  "for a polynomial", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except (ValueError, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
