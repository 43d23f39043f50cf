"""Command line interface.

Exit codes: 0 success, 1 verification failure or nothing found,
2 usage or parse error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dterms import (
    D, DTermParseError, EnumerationLimit, Prim, c_size, compact, dag_order,
    enumerate_dterms, format_dterm,
)
from .lemmas import LoopConfig, lemma_export, lemma_import, prime_core, proof_subproof
from .proof_calc import AxiomAssignment, SizeOracle, check_proof, mgt, simp_n
from .prooffile import ProofFileError, format_proof, load_proof
from .properties import COLUMNS, format_rows, property_table, rows_to_json
from .reduction import (
    TableMismatch, cached_small_proof_table, reduce_to_regular, rewrite_with_table,
)
from .search import SearchConfig, expand_lemmas, prove
from .terms import ParseError, TautologyLimitError, canonical_text, parse_formula

CHECK_SCHEMA = "cdproof.check/1"


class UsageError(Exception):
    pass


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _proof_text(roots, alpha: AxiomAssignment) -> str:
    formulas = {t: mgt(t, alpha) for t in dag_order(roots)}
    return format_proof(compact(roots, formulas))


# ------------------------------------------------------------------ commands

def cmd_check(args) -> int:
    p = load_proof(args.proof)
    report = check_proof(p)
    if args.json:
        data = {
            "schema": CHECK_SCHEMA,
            "ok": report.ok,
            "roots_c_size": report.roots_c_size,
            "steps": [{
                "index": s.index, "ok": s.ok, "axiom": p.step(s.index).is_axiom,
                "goal": p.step(s.index).goal,
                "computed": canonical_text(s.computed) if s.computed is not None else None,
                "DT": s.t_size, "DC": s.c_size, "DH": s.height, "message": s.message,
            } for s in report.steps],
        }
        _emit(json.dumps(data, indent=1) + "\n")
    else:
        for s in report.steps:
            step = p.step(s.index)
            star = "*" if step.goal else " "
            if step.is_axiom:
                _emit(f"{star}{s.index:>3}. axiom\n")
                continue
            verdict = "ok" if s.ok else f"MISMATCH {s.message}"
            _emit(f"{star}{s.index:>3}. {verdict}  DC={s.c_size} DT={s.t_size} DH={s.height}\n")
        status = "verified" if report.ok else "NOT verified"
        _emit(f"{status}; compacted size of all goals {report.roots_c_size}\n")
    return 0 if report.ok else 1


def cmd_table(args) -> int:
    p = load_proof(args.proof)
    alpha = AxiomAssignment.of_proof(p)
    oracle = SizeOracle(alpha, args.tree_bound, args.c_bound)
    rows = property_table(p, oracle=oracle)
    columns = args.columns.split(",") if args.columns else COLUMNS
    unknown = [c for c in columns if c not in COLUMNS]
    if unknown:
        raise UsageError(f"unknown columns: {', '.join(unknown)}")
    _emit(rows_to_json(rows) + "\n" if args.json else format_rows(rows, columns))
    if args.plot:
        from .plotting import plot_rows

        plot_rows(rows, args.plot, title=Path(args.proof).name)
    return 0


def cmd_reduce(args) -> int:
    p = load_proof(args.proof)
    alpha = AxiomAssignment.of_proof(p)
    roots = p.roots()
    if args.mode == "regular":
        new = [reduce_to_regular(r, alpha) for r in roots]
    else:
        table = cached_small_proof_table(alpha, args.table_bound, args.table_cache)
        new = [rewrite_with_table(r, alpha, table, objective=args.objective) for r in roots]
    for old, r in zip(roots, new):
        _emit(f"# {format_dterm(old) if old.t_size < 40 else '...'}: "
              f"DC {c_size(old)} -> {c_size(r)}, DT {old.t_size} -> {r.t_size}\n")
    _emit(_proof_text(new, alpha))
    return 0


def cmd_simpn(args) -> int:
    p = load_proof(args.proof)
    alpha = AxiomAssignment.of_proof(p)
    new = [simp_n(r, alpha) for r in p.roots()]
    _emit(_proof_text(new, alpha))
    return 0


def _axiom(args) -> AxiomAssignment:
    return AxiomAssignment({k: parse_formula(f) for k, f in enumerate(args.axiom, 1)})


def cmd_lemmas(args) -> int:
    alpha = _axiom(args)
    if args.method == "prime-core":
        res = prime_core(alpha, args.size, args.vars, args.redundancy)
        sys.stderr.write(f"{res.defined} primes with defined MGT, "
                         f"{len(res.candidates)} candidates\n")
        for c in res.candidates:
            sys.stderr.write(f"candidate {format_dterm(c)}\n")
        lemmas = res.lemmas
    else:
        cfg = LoopConfig(args.iterations, args.dkl_limit, not args.no_c_regular,
                         not args.no_organic, args.order, not args.no_n)
        lemmas = proof_subproof(alpha, cfg)
        sys.stderr.write(f"{len(lemmas)} lemmas\n")
    text = lemma_export(lemmas, args.format)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        _emit(text)
    return 0


def cmd_prove(args) -> int:
    alpha = _axiom(args)
    goal = parse_formula(args.goal)
    lemmas = lemma_import(Path(args.lemmas).read_text(encoding="utf-8")) if args.lemmas else []
    cfg = SearchConfig(args.max_tree_size, args.max_height, args.max_dkl, lemmas,
                       args.regularity_pruning)
    d = prove(goal, alpha, cfg)
    if d is None:
        _emit(f"no proof of {args.goal} within tree size {args.max_tree_size}\n")
        return 1
    _emit(f"# found {format_dterm(d)}\n")
    if lemmas:
        d = expand_lemmas(d, lemmas, alpha, simplify=not args.no_simp_n)
    _emit(f"# DC {c_size(d)} DT {d.t_size} DH {d.height}\n")
    _emit(_proof_text([d], alpha))
    return 0


def cmd_enumerate(args) -> int:
    measure = "compacted" if args.measure == "compacted" else "tree"
    terms = enumerate_dterms(args.kind, args.bound, measure)
    if args.count_only:
        _emit(f"{sum(1 for _ in terms)}\n")
    else:
        for t in terms:
            _emit(format_dterm(t) + "\n")
    return 0


def cmd_dot(args) -> int:
    p = load_proof(args.proof)
    root = p.expand(args.line)
    nodes = dag_order([root])
    name = {t: f"n{k}" for k, t in enumerate(nodes)}
    out = [f"digraph line{args.line} {{", "  node [fontname=Helvetica];"]
    for t in nodes:
        if type(t) is Prim:
            out.append(f'  {name[t]} [shape=box, label="{t.sym}"];')
        else:
            out.append(f'  {name[t]} [shape=circle, label=""];')
    for t in nodes:
        if type(t) is D:
            out.append(f'  {name[t]} -> {name[t.major]} [label="major"];')
            out.append(f'  {name[t]} -> {name[t.minor]} [label="minor"];')
    out.append("}")
    _emit("\n".join(out) + "\n")
    return 0


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cdproof", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="verify every step of a proof file")
    s.add_argument("proof")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("table", help="property table of all subproofs")
    s.add_argument("proof")
    s.add_argument("--columns", help="comma separated subset of " + ",".join(COLUMNS))
    s.add_argument("--json", action="store_true")
    s.add_argument("--plot", metavar="FILE", help="also draw sizes per subproof to FILE")
    s.add_argument("--tree-bound", type=int, default=14,
                   help="exhaustive search bound for minimal tree sizes (default 14)")
    s.add_argument("--c-bound", type=int, default=6,
                   help="exhaustive search bound for minimal compacted sizes (default 6)")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("reduce", help="shrink the goal proofs")
    s.add_argument("proof")
    s.add_argument("--mode", choices=["regular", "table"], default="regular")
    s.add_argument("--table-cache", metavar="DIR")
    s.add_argument("--table-bound", type=int, default=20)
    s.add_argument("--objective", choices=["tree", "compacted"], default="tree")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("simpn", help="n-simplify the goal proofs")
    s.add_argument("proof")
    s.set_defaults(func=cmd_simpn)

    s = sub.add_parser("lemmas", help="generate lemmas from axioms")
    s.add_argument("method", choices=["prime-core", "proof-subproof"])
    s.add_argument("--axiom", action="append", required=True)
    s.add_argument("--size", type=int, default=17)
    s.add_argument("--vars", type=int)
    s.add_argument("--redundancy", choices=["subsume", "variant", "off"], default="subsume")
    s.add_argument("--iterations", type=int, default=100)
    s.add_argument("--dkl-limit", type=int, default=8)
    s.add_argument("--no-c-regular", action="store_true")
    s.add_argument("--no-organic", action="store_true")
    s.add_argument("--no-n", action="store_true")
    s.add_argument("--order", choices=["fifo", "by_tree_size"], default="fifo")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_lemmas)

    s = sub.add_parser("prove", help="goal-directed proof search")
    s.add_argument("--axiom", action="append", required=True)
    s.add_argument("--goal", required=True)
    s.add_argument("--max-tree-size", type=int, required=True)
    s.add_argument("--max-height", type=int)
    s.add_argument("--max-dkl", type=int)
    s.add_argument("--lemmas", metavar="FILE")
    s.add_argument("--regularity-pruning", action="store_true")
    s.add_argument("--no-simp-n", action="store_true")
    s.set_defaults(func=cmd_prove)

    s = sub.add_parser("enumerate", help="list or count D-terms of one size")
    s.add_argument("kind", choices=["all", "prime"])
    s.add_argument("--bound", type=int, required=True)
    s.add_argument("--measure", choices=["tree", "compacted"], default="tree")
    s.add_argument("--count-only", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("dot", help="minimal DAG of one line in Graphviz format")
    s.add_argument("proof")
    s.add_argument("--line", type=int, required=True)
    s.set_defaults(func=cmd_dot)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (EnumerationLimit, TautologyLimitError) as exc:
        sys.stderr.write(f"resource limit: {exc}\n")
        return 3
    except (ProofFileError, ParseError, DTermParseError, UsageError, TableMismatch,
            KeyError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
