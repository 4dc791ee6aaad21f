"""Command line front end: ``cs-obstruct <command> ...``.

Exit codes: 0 success / Certified, 1 a negative result (Rejected, failed
family, failed verification), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from math import gcd

from . import __version__
from .exactq import IntMatrix, format_rational, h1_presented, smith_normal_form
from .obstruction import (
    BlockError, NotNegativeDefinite, brieskorn_block, certify_independence,
    doubling_cobordism_block, enumerate_char_classes, whitehead_block,
    whitehead_cover_name,
)
from .quatrep import classify_abelian, seed_pair, solve_relator, verify_forced_meridians
from .seifert import (
    InvalidSeifertData, enumerate_flat_connections, surgery_to_brieskorn,
    tau_lower_finite_group, tau_lower_from_denominator, tau_lower_whitehead_cover,
)
from .sequences import FamilyError, kn_family, power_family, verify_chain


class UsageError(Exception):
    pass


def knot_pair(text: str):
    try:
        p, q = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected p,q got {text!r}") from None
    if p < 2 or q < 2:
        raise argparse.ArgumentTypeError(f"{text}: need p, q >= 2")
    if gcd(p, q) != 1:
        raise argparse.ArgumentTypeError(f"{text}: p and q are not coprime")
    return p, q


def int_list(text: str):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def read_matrix(stream) -> IntMatrix:
    """First line 'rows cols', then whitespace separated integer entries."""
    toks = stream.read().split()
    if len(toks) < 2:
        raise UsageError("matrix input needs a 'rows cols' header")
    try:
        vals = [int(t) for t in toks]
    except ValueError as exc:
        raise UsageError(f"non-integer matrix entry: {exc}") from None
    r, c = vals[0], vals[1]
    try:
        return IntMatrix(r, c, tuple(vals[2:]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ----------------------------------------------------------------- output

def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _table(rows, columns) -> str:
    if not rows:
        return "(none)\n"
    cells = [[str(r[c]) for c in columns] for r in rows]
    width = [max(len(c), *(len(x[i]) for x in cells)) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, width)).rstrip()]
    lines += ["  ".join(x.ljust(w) for x, w in zip(row, width)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def _tsv(rows, columns) -> str:
    lines = ["\t".join(columns)]
    lines += ["\t".join(str(r[c]) for c in columns) for r in rows]
    return "\n".join(lines) + "\n"


def emit(out, fmt, doc, rows=None, columns=None, header=()):
    """``doc`` is the JSON document; ``rows``/``columns`` drive table and tsv."""
    if fmt == "json":
        out.write(_dump_json(doc))
        return
    rows = rows or []
    if fmt == "tsv":
        out.write(_tsv(rows, columns))
        return
    for line in header:
        out.write(line + "\n")
    if columns:
        out.write(_table(rows, columns))


# --------------------------------------------------------------- commands

def cmd_cs_invariants(args, out):
    Y = surgery_to_brieskorn(args.p, args.q, args.k, args.sign)
    classes = enumerate_flat_connections(Y)
    rows = [{
        "l1": c.rotation_numbers[0], "l2": c.rotation_numbers[1],
        "l3": c.rotation_numbers[2], "h": c.central_sign,
        "cs_su2": format_rational(c.cs_su2.value),
        "cs_so3": format_rational(c.cs_so3.value),
    } for c in classes]
    doc = {"manifold": str(Y), "order": Y.order, "classes": rows}
    emit(out, args.format, doc, rows, ["l1", "l2", "l3", "h", "cs_su2", "cs_so3"],
         header=[f"{Y}: {len(rows)} irreducible SU(2) classes "
                 f"(cs mod 1, SO(3) value in (0,4])"])
    return 0


def cmd_tau_bound(args, out):
    if args.whitehead:
        p, q = args.whitehead
        tb = tau_lower_whitehead_cover(p, q)
        what = whitehead_cover_name(p, q)
    elif args.denominator is not None:
        tb = tau_lower_from_denominator(args.denominator)
        what = f"denominator {args.denominator}"
    else:
        tb = tau_lower_finite_group(args.finite_group)
        what = f"finite pi_1 of order {args.finite_group}"
    val = format_rational(tb.value)
    doc = {"source": what, "kind": tb.kind.value, "value": val}
    if args.format == "json":
        out.write(_dump_json(doc))
    elif args.format == "tsv":
        out.write(_tsv([doc], ["source", "kind", "value"]))
    else:
        out.write(val + "\n")
    return 0


def cmd_certify(args, out):
    cert = certify_independence(args.knots)
    if args.format == "json":
        out.write(cert.to_json() + "\n")
    else:
        rows = [{"i": c.i, "j": c.j,
                 "knot_i": "%d,%d" % cert.knots[c.i], "knot_j": "%d,%d" % cert.knots[c.j],
                 "lhs": c.lhs, "rel": ">" if c.passed else "<=", "rhs": c.rhs,
                 "pass": str(c.passed).lower()} for c in cert.checks]
        cols = ["i", "j", "knot_i", "knot_j", "lhs", "rel", "rhs", "pass"]
        if args.format == "tsv":
            out.write(_tsv(rows, cols))
        else:
            out.write("knots (sorted by pq(2pq-1)): "
                      + " ".join("%d,%d" % k for k in cert.knots) + "\n")
            out.write(_table(rows, cols))
            verdict = cert.verdict
            if cert.failing_pair:
                i, j = cert.failing_pair
                verdict += f" (first failure at i={i}, j={j})"
            out.write(f"verdict: {verdict}\n")
    return 0 if cert.verdict == "Certified" else 1


def cmd_sequence(args, out):
    if args.power is not None:
        try:
            fam = power_family(args.power)
        except FamilyError as exc:
            print(str(exc), file=sys.stderr)
            return 1
    else:
        fam = kn_family(args.kn, args.n_start)
    rows = [{"prev": "%d,%d" % s.prev.as_tuple(), "next": "%d,%d" % s.next.as_tuple(),
             "lhs": s.lhs, "rhs": s.rhs, "ok": str(s.ok).lower()} for s in fam.steps]
    chain = verify_chain(fam.pairs)
    doc = {
        "pairs": [list(k.as_tuple()) for k in fam.pairs],
        "steps": [{**r, "lhs": str(r["lhs"]), "rhs": str(r["rhs"])} for r in rows],
        "ok": fam.ok and chain.ok,
        "failed_index": fam.failed_index,
        "reason": fam.reason,
        "pairwise_ok": chain.ok,
    }
    header = ["pairs: " + " ".join("%d,%d" % k.as_tuple() for k in fam.pairs)]
    if not fam.ok:
        header.append(f"failure at index {fam.failed_index}: {fam.reason}")
    emit(out, args.format, doc, rows, ["prev", "next", "lhs", "rhs", "ok"], header)
    if args.format == "table":
        out.write(f"pairwise checks: {'pass' if chain.ok else 'fail'}\n")
    return 0 if doc["ok"] else 1


def _threads():
    env = os.environ.get("CS_OBSTRUCT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _search_one(seed, index, tol):
    rep = solve_relator(seed_pair(seed, index), want_nonabelian=True, tol=tol)
    row = {"index": index, "converged": rep is not None}
    if rep is None:
        row.update(residual="", label="", central_defect="", meridian_defect="", ok=False)
        return row
    rpt = verify_forced_meridians(rep, tol)
    label, _ = classify_abelian(rep)
    row.update(residual=f"{rep.residual:.3e}", label=label.value,
               central_defect=f"{rpt.central_defect:.3e}",
               meridian_defect=f"{max(rpt.meridian_defects):.3e}", ok=rpt.ok)
    return row


def cmd_rep_search(args, out):
    with ThreadPoolExecutor(max_workers=_threads()) as ex:
        futs = [ex.submit(_search_one, args.seed, i, args.tol) for i in range(args.seeds)]
        rows = sorted((f.result() for f in futs), key=lambda r: r["index"])
    conv = [r for r in rows if r["converged"]]
    all_ok = all(r["ok"] for r in conv)
    for r in rows:
        r["converged"] = str(r["converged"]).lower()
        r["ok"] = str(r["ok"]).lower()
    doc = {"seed": args.seed, "seeds": args.seeds, "converged": len(conv),
           "mechanism_verified": all_ok, "runs": rows}
    cols = ["index", "converged", "residual", "label", "central_defect",
            "meridian_defect", "ok"]
    emit(out, args.format, doc, rows, cols,
         header=[f"{len(conv)}/{args.seeds} seeds converged; "
                 f"forced-meridian identities {'hold' if all_ok else 'FAIL'}"])
    return 0 if all_ok else 1


def _open_input(path):
    return sys.stdin if path in (None, "-") else open(path)


def cmd_snf(args, out):
    with _open_input(args.file) as fh:
        M = read_matrix(fh)
    factors, rank = smith_normal_form(M)
    G = h1_presented(M)
    doc = {"rows": M.rows, "cols": M.cols, "invariant_factors": factors,
           "rank": rank, "torsion": list(G.torsion), "free_rank": G.free_rank,
           "group": str(G)}
    if args.format == "json":
        out.write(_dump_json(doc))
    elif args.format == "tsv":
        out.write(_tsv([{**doc, "invariant_factors": ",".join(map(str, factors)),
                         "torsion": ",".join(map(str, G.torsion))}],
                       ["invariant_factors", "rank", "group"]))
    else:
        out.write(f"invariant factors: {' '.join(map(str, factors)) or '(none)'}\n")
        out.write(f"rank: {rank}\n")
        out.write(f"cokernel: {G}\n")
    return 0


def cmd_char_classes(args, out):
    if args.diag is not None:
        n = len(args.diag)
        form = IntMatrix.from_rows([[args.diag[i] if i == j else 0 for j in range(n)]
                                    for i in range(n)])
    else:
        with _open_input(args.form) as fh:
            form = read_matrix(fh)
    cc = enumerate_char_classes(form, args.e)
    rows = [{"class": ",".join(map(str, v))} for v in cc.classes]
    doc = {"form": form.to_rows(), "e": list(cc.base_e), "square": cc.square,
           "count": len(cc.classes), "classes": [list(v) for v in cc.classes]}
    emit(out, args.format, doc, rows, ["class"],
         header=[f"e.e = {cc.square}; {len(cc.classes)} classes up to sign"])
    return 0


def cmd_block(args, out):
    if args.whitehead:
        b = whitehead_block(*args.whitehead)
    elif args.brieskorn:
        b = brieskorn_block(*args.brieskorn)
    else:
        b = doubling_cobordism_block(*args.doubling)
    s = b.summary()
    if args.format == "json":
        out.write(_dump_json(s))
        return 0
    part = s["partition"]
    rows = []
    for c in b.boundary:
        side = ""
        if "gl" in part:
            side = "gl" if c.label in part["gl"] else "cs"
        rows.append({"component": c.label, "kind": c.kind.value,
                     "tau_lower": format_rational(c.tau_lower.value) if c.tau_lower else "-",
                     "side": side or "-"})
    cols = ["component", "kind", "tau_lower", "side"]
    if args.format == "tsv":
        out.write(_tsv(rows, cols))
        return 0
    out.write(f"e.e = {s['e_square']}; negative definite: {s['negative_definite']}; "
              f"H1(;Z/2)=0: {s['h1_mod2_zero']}; Property I: {s['property_I']}\n")
    if "failure" in part:
        out.write(f"no cs-partition at {part['bound']}: {part['failure']}\n")
    else:
        out.write(f"cs-partition at bound {part['bound']}\n")
    out.write(_table(rows, cols))
    return 0


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=["table", "json", "tsv"], default="table")

    ap = argparse.ArgumentParser(prog="cs-obstruct", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cs-invariants", parents=[fmt],
                       help="flat SU(2) classes on 1/k surgery of T(p,q)")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--sign", choices=["+", "-"], default="+",
                   help="'+' gives -Sigma(p,q,pqk-1), '-' gives -Sigma(p,q,pqk+1)")
    p.set_defaults(func=cmd_cs_invariants)

    p = sub.add_parser("tau-bound", parents=[fmt], help="lower bounds for tau")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--whitehead", nargs=2, type=int, metavar=("P", "Q"))
    g.add_argument("--denominator", type=int, metavar="D")
    g.add_argument("--finite-group", type=int, metavar="ORDER")
    p.set_defaults(func=cmd_tau_bound)

    p = sub.add_parser("certify", parents=[fmt],
                       help="independence certificate for D(T(p,q)) families")
    p.add_argument("knots", nargs="+", type=knot_pair, metavar="P,Q")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sequence", parents=[fmt], help="admissible torus knot families")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--power", type=int, metavar="N_MAX")
    g.add_argument("--kn", type=int_list, metavar="K1,K2,...")
    p.add_argument("--n-start", type=int, default=2)
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("rep-search", parents=[fmt],
                       help="numerical SU(2) reps of the (2,4) torus link group")
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_rep_search)

    p = sub.add_parser("snf", parents=[fmt], help="Smith normal form of an integer matrix")
    p.add_argument("file", nargs="?", help="matrix file ('-' or omitted: stdin)")
    p.set_defaults(func=cmd_snf)

    p = sub.add_parser("char-classes", parents=[fmt],
                       help="classes e' with e'.e' = e.e and e' = e mod 2")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--diag", type=int_list, metavar="D1,D2,...",
                   help="diagonal entries, e.g. --diag=-1,-1")
    g.add_argument("--form", metavar="FILE", help="matrix file, '-' for stdin")
    p.add_argument("--e", type=int_list, required=True, metavar="E1,E2,...")
    p.set_defaults(func=cmd_char_classes)

    p = sub.add_parser("block", parents=[fmt], help="summary of a cobordism block")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--whitehead", nargs=2, type=int, metavar=("P", "Q"))
    g.add_argument("--brieskorn", nargs=3, type=int, metavar=("P", "Q", "K"))
    g.add_argument("--doubling", nargs=2, type=int, metavar=("P", "Q"))
    p.set_defaults(func=cmd_block)
    return ap


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "sign", None) is not None:
        args.sign = 1 if args.sign == "+" else -1
    try:
        return args.func(args, out)
    except (UsageError, InvalidSeifertData, BlockError, NotNegativeDefinite,
            ValueError) as exc:
        err.write(f"{ap.prog} {args.command}: error: {exc}\n")
        ap.print_usage(err)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
