"""Command line interface: `strongclones <subcommand> ...`."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import checks
from .core import BudgetExceeded, PartialFunction, Relation, RelationPair, SymmetricPartialFunction
from .definability import DEFAULT_INDEX_BUDGET, NotIrredundantError, qfpp_definable, revalidate
from .families import BASIS_FAMILIES, FAMILY_NAMES, named_object
from .formats import FormatError, format_function, format_relation, read_function, read_relation
from .intervals import export_dot, interval_report
from .preserve import (
    DEFAULT_MATRIX_BUDGET,
    DEFAULT_MULTISET_BUDGET,
    cpol_fingerprint,
    find_violation,
    pol_fingerprint,
    ppol_fingerprint,
    symmetric_violation,
)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def cmd_gen_family(args) -> int:
    obj = named_object(args.name, n=args.n, m=args.m, k=args.k, p=args.p, j=args.j)
    text = format_relation(obj) if isinstance(obj, Relation) else format_function(obj)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_preserves(args) -> int:
    f = read_function(args.function)
    rho = read_relation(args.relation)
    if args.symmetric:
        try:
            sf = SymmetricPartialFunction.from_function(f)
        except ValueError as e:
            print(f"error: --symmetric given but {e}", file=sys.stderr)
            return 2
        multiset = symmetric_violation(sf, rho, args.multiset_budget)
        if multiset is None:
            print("preserves: true")
            return 0
        cols = [c for c, k in sorted(multiset.items()) for _ in range(k)]
        print("preserves: false")
        print("violating matrix (columns in the relation, last column f applied to each row):")
        _print_matrix(f, rho, cols)
        return 1
    v = find_violation(f, rho, budget=args.matrix_budget)
    if v is None:
        print("preserves: true")
        return 0
    print("preserves: false")
    print("violating matrix (columns in the relation, last column f applied to each row):")
    _print_matrix(f, rho, list(v.columns))
    return 1


def _print_matrix(f: PartialFunction, rho: Relation, cols: list[int]) -> None:
    h = rho.arity
    for i in range(h):
        row = [(c >> (h - 1 - i)) & 1 for c in cols]
        p = 0
        for b in row:
            p = (p << 1) | b
        print(" ".join(map(str, row)) + f" | {f.at(p)}")


def cmd_definable(args) -> int:
    target = read_relation(args.target)
    sources = {read_relation(s): Path(s).name for s in args.sources}
    v = qfpp_definable(target, list(sources), budget=args.index_budget, workers=args.threads,
                       reduce_redundant=args.reduce)
    out = v.to_json(sources)
    out["target"] = Path(args.target).name
    out["revalidated"] = revalidate(v)
    print(_dump(out))
    return 0 if v.definable else 1


def cmd_interval(args) -> int:
    report = interval_report(args.clone, args.basis)
    print(report.dumps())
    if args.dot:
        Path(args.dot).write_text(export_dot(report))
    return 0


def cmd_fingerprint(args) -> int:
    rels = [read_relation(p) for p in args.relations]
    if args.total:
        fp = pol_fingerprint(rels, args.k)
    elif args.empty_consequent:
        fp = cpol_fingerprint([RelationPair(r, Relation.empty(r.arity)) for r in rels], args.k)
    else:
        fp = ppol_fingerprint(rels, args.k)
    print(fp.digest())
    return 0


def cmd_verify_paper(args) -> int:
    section = checks.resolve_section(args.section)
    budgets = checks.Budgets(index_tuples=args.index_budget, multisets=args.multiset_budget,
                             matrices=args.matrix_budget, fingerprint_arity=args.max_k,
                             workers=args.threads)
    selected = checks.select(section)
    results = checks.run_checks(selected, budgets, threads=args.threads)
    rep = checks.report(results, section, timings=args.timings)
    if args.format == "json":
        print(_dump(rep))
    else:
        for r in results:
            line = f"[{r.verdict.upper():7}] {r.id}: {r.anchor} -- {r.detail}"
            if args.timings:
                line += f" ({r.runtime_ms:.0f} ms)"
            print(line)
        s = rep["summary"]
        print(f"{s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped")
    return 0 if rep["summary"]["fail"] == 0 and rep["summary"]["skipped"] == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="strongclones",
                                 description="Strong partial Boolean clones: relations, preservation, definability.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-family", help="write a named relation (.rel) or partial function (.pfn)")
    g.add_argument("name", choices=FAMILY_NAMES)
    for opt in ("n", "m", "k", "p", "j"):
        g.add_argument(f"--{opt}", type=int)
    g.add_argument("-o", "--out", help="output file (default: stdout)")
    g.set_defaults(func=cmd_gen_family)

    p = sub.add_parser("preserves", help="does a partial function preserve a relation")
    p.add_argument("function", help=".pfn file")
    p.add_argument("relation", help=".rel file")
    p.add_argument("--symmetric", action="store_true", help="use the column-multiset path")
    p.add_argument("--matrix-budget", type=int, default=DEFAULT_MATRIX_BUDGET)
    p.add_argument("--multiset-budget", type=int, default=DEFAULT_MULTISET_BUDGET)
    p.set_defaults(func=cmd_preserves)

    d = sub.add_parser("definable", help="qfpp-definability of a target relation from sources")
    d.add_argument("target")
    d.add_argument("sources", nargs="+")
    d.add_argument("--index-budget", type=int, default=DEFAULT_INDEX_BUDGET)
    d.add_argument("--threads", type=int, default=checks.default_workers())
    d.add_argument("--reduce", action="store_true",
                   help="reduce a redundant target to its irredundant core instead of failing")
    d.set_defaults(func=cmd_definable)

    i = sub.add_parser("interval", help="enumerate a finite interval of strong partial clones")
    i.add_argument("--clone", required=True)
    i.add_argument("--basis", required=True, choices=sorted(BASIS_FAMILIES))
    i.add_argument("--dot", help="also write the cover relation as DOT")
    i.set_defaults(func=cmd_interval)

    f = sub.add_parser("fingerprint", help="digest of the arity <= k slice of pPol (or Pol)")
    f.add_argument("relations", nargs="+")
    f.add_argument("--k", type=int, default=3)
    mode = f.add_mutually_exclusive_group()
    mode.add_argument("--total", action="store_true", help="total functions only (Pol)")
    mode.add_argument("--empty-consequent", action="store_true", help="use the pairs (rho, {})")
    f.set_defaults(func=cmd_fingerprint)

    v = sub.add_parser("verify-paper", help="run the finite checks and report pass/fail")
    v.add_argument("--section", default="all",
                   help="all, 3, 4, 5, 6, appendix (or pairs, linear, t02, lambda, intervals)")
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("--timings", action="store_true", help="include per-check runtimes (not byte-stable)")
    v.add_argument("--threads", type=int, default=checks.default_workers())
    v.add_argument("--index-budget", type=int, default=DEFAULT_INDEX_BUDGET)
    v.add_argument("--multiset-budget", type=int, default=DEFAULT_MULTISET_BUDGET)
    v.add_argument("--matrix-budget", type=int, default=DEFAULT_MATRIX_BUDGET)
    v.add_argument("--max-k", type=int, default=3, help="fingerprint arity (at most 3)")
    v.set_defaults(func=cmd_verify_paper)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, NotIrredundantError, KeyError, ValueError, BudgetExceeded, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
