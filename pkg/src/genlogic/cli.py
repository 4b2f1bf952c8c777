"""Command-line interface.

Exit codes: 0 success, 1 query or semantic error, 2 data error.  A dataset
argument is a path to a JSON dataset document, or the name of a bundled
fixture (``maze``, ``weather``) when no such file exists.
"""
from __future__ import annotations

import argparse
import fnmatch
import json
import os
import sys
from fractions import Fraction

from . import engine, oracle, temporal
from .dataset import FIXTURES, Dataset, fixture_text, load_fixture
from .errors import DataError, GenLogicError
from .formula import condition_text, parse_condition, parse_query, split_literals

LIMIT_SELF_CHECK_MU = 1 - 1e-8
LIMIT_SELF_CHECK_TOL = 1e-5
FINITE_SELF_CHECK_TOL = 1e-9


def _load(path: str) -> Dataset:
    if not os.path.exists(path) and path in FIXTURES:
        return load_fixture(path)
    try:
        return Dataset.load(path)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from None


def _prob(p: Fraction) -> dict:
    return {"rational": f"{p.numerator}/{p.denominator}" if p.denominator != 1 else str(p.numerator),
            "decimal": f"{float(p):.6f}"}


def _prob_text(p: Fraction) -> str:
    r = _prob(p)
    if len(r["rational"]) > 40:
        return r["decimal"]
    return f"{r['rational']} = {r['decimal']}"


def _mode(mu):
    return "limit" if mu is None else f"mu={mu}"


def _condition(args) -> tuple:
    cond = parse_condition(args.given or "")
    if args.split_literals:
        cond = split_literals(cond)
    return cond


def _emit(record: dict, text_lines: list, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(record, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


def _mfs_diagnostics(ds, cond) -> dict:
    res = engine.mfs(ds, cond)
    prime = res.prime_evidence
    return {
        "c": res.max_count,
        "prime_evidence": [ds.sequences[k].id for k in prime],
        "prime_evidence_size": len(prime),
        "subsets": [[str(i) for i in s] for s in res.subset_items(cond)],
    }


def _diag_lines(diag: dict) -> list:
    lines = [f"c: {diag['c']}",
             f"prime evidence ({diag['prime_evidence_size']}): {', '.join(diag['prime_evidence'])}"]
    for i, s in enumerate(diag["subsets"], 1):
        lines.append(f"S{i}: {{{', '.join(s)}}}")
    if diag["c"] == 0:
        lines.append("no item of the condition is founded; falling back to the prior")
    return lines


# ---------------------------------------------------------------------------
# subcommands

def cmd_validate(args) -> int:
    ds = _load(args.dataset)
    print(f"K={ds.K} T={ds.T} atoms={len(ds.vocabulary)} models={len(ds.models)} OK")
    return 0


def cmd_fixture(args) -> int:
    sys.stdout.write(fixture_text(args.name))
    return 0


def cmd_query(args) -> int:
    ds = _load(args.dataset)
    targets, cond = parse_query(args.query)
    if args.split_literals:
        cond = split_literals(cond)
    mu = engine.as_mu(args.mu)
    if targets:
        p = engine.conditional(ds, targets, cond, mu)
    else:
        p = Fraction(1)
    echo = f"P({condition_text(targets)} | {condition_text(cond)})"
    record = {"query": echo, "mode": _mode(args.mu), "result": _prob(p)}
    lines = [f"query: {echo}", f"mode: {_mode(args.mu)}", f"result: {_prob_text(p)}"]
    if args.explain_mfs:
        diag = _mfs_diagnostics(ds, cond)
        record["diagnostics"] = diag
        lines += _diag_lines(diag)
    status = 0
    if args.self_check:
        ok, line, info = _self_check_conditional(ds, targets, cond, mu, p)
        record["self_check"] = info
        lines.append(line)
        status = 0 if ok else 1
    _emit(record, lines, args.format)
    return status


def _self_check_conditional(ds, targets, cond, mu, p):
    if mu is None:
        ref = oracle.oracle_conditional(ds, targets, cond, LIMIT_SELF_CHECK_MU)
        tol = LIMIT_SELF_CHECK_TOL
    else:
        ref = oracle.oracle_conditional(ds, targets, cond, float(mu))
        tol = FINITE_SELF_CHECK_TOL
    diff = abs(ref - float(p))
    ok = diff <= tol
    info = {"oracle": f"{ref:.9f}", "difference": f"{diff:.3e}", "ok": ok}
    return ok, f"self-check: {'PASS' if ok else 'FAIL'} oracle={ref:.9f} diff={diff:.3e}", info


def _select_atoms(ds, pattern: str) -> list:
    pats = [p.strip() for p in pattern.split(",") if p.strip()]
    names = [a for a in ds.vocabulary.atoms if any(fnmatch.fnmatchcase(a, p) for p in pats)]
    if not names:
        raise GenLogicError(f"no atom matches {pattern!r}")
    return names


def _strip(pattern: str):
    p = pattern.strip()
    if "," not in p and p.endswith("*") and not any(c in p[:-1] for c in "*?["):
        return p[:-1]
    return ""


def cmd_dist(args) -> int:
    ds = _load(args.dataset)
    cond = _condition(args)
    names = _select_atoms(ds, args.atoms)
    mu = engine.as_mu(args.mu)
    dist = temporal.distribution(ds, names, args.time, cond, mu)
    echo = f"P({args.atoms}@{args.time} | {condition_text(cond)})"
    record = {"query": echo, "mode": _mode(args.mu),
              "result": [{"key": a, **_prob(p)} for a, p in dist.items()]}
    width = max(len(a) for a in dist)
    lines = [f"query: {echo}", f"mode: {_mode(args.mu)}"]
    lines += [f"{a:<{width}}  {_prob_text(p)}" for a, p in dist.items()]
    _emit(record, lines, args.format)
    return 0


def _parse_times(text: str, T: int) -> list:
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo or 1), int(hi or T) + 1))
    return [int(x) for x in text.split(",")]


def cmd_mle(args) -> int:
    ds = _load(args.dataset)
    cond = _condition(args)
    names = _select_atoms(ds, args.atoms)
    times = _parse_times(args.times, ds.T)
    mu = engine.as_mu(args.mu)
    ex = temporal.explain(ds, names, times, cond, mu)
    prefix = _strip(args.atoms)

    def label(path):
        steps = []
        for true in ex.true_atoms(path):
            names_ = [a[len(prefix):] if prefix and a.startswith(prefix) else a for a in true]
            steps.append("+".join(names_) if names_ else "-")
        return "(" + ",".join(steps) + ")"

    support = [ds.sequences[k].id for k in ex.support]
    record = {
        "query": f"argmax {args.atoms}@{times[0]}..{times[-1]} | {condition_text(cond)}",
        "mode": _mode(args.mu),
        "result": {"path": label(ex.path), "probability": _prob(ex.probability),
                   "support": support, "ties": [label(p) for p in ex.ties]},
    }
    lines = [f"path: {label(ex.path)}", f"probability: {_prob_text(ex.probability)}",
             f"support: {', '.join(support)}", f"ties: {' '.join(label(p) for p in ex.ties)}"]
    _emit(record, lines, args.format)
    return 0


def cmd_reference(args) -> int:
    ds = _load(args.dataset)
    cond = _condition(args)
    mu = engine.as_mu(args.mu)
    post = temporal.reference(ds, cond, mu)
    echo = f"P(D | {condition_text(cond)})"
    record = {"query": echo, "mode": _mode(args.mu),
              "result": [{"key": s.id, **_prob(p)} for s, p in zip(ds.sequences, post)]}
    vec = "<" + ", ".join(_prob(p)["rational"] for p in post) + ">"
    lines = [f"query: {echo}", f"mode: {_mode(args.mu)}", f"result: {vec}"]
    if args.explain_mfs:
        diag = _mfs_diagnostics(ds, cond)
        record["diagnostics"] = diag
        lines += _diag_lines(diag)
    status = 0
    if args.self_check:
        ref = oracle.oracle_posterior(ds, cond, LIMIT_SELF_CHECK_MU if mu is None else float(mu))
        tol = LIMIT_SELF_CHECK_TOL if mu is None else FINITE_SELF_CHECK_TOL
        diff = max(abs(a - float(b)) for a, b in zip(ref, post))
        ok = diff <= tol
        record["self_check"] = {"difference": f"{diff:.3e}", "ok": ok}
        lines.append(f"self-check: {'PASS' if ok else 'FAIL'} diff={diff:.3e}")
        status = 0 if ok else 1
    _emit(record, lines, args.format)
    return status


def cmd_consequence(args) -> int:
    ds = _load(args.dataset)
    cond = _condition(args)
    target = parse_condition(args.then)
    holds = engine.empirical_consequence(ds, cond, target)
    record = {"query": f"{condition_text(cond)} |~ {condition_text(target)}", "result": holds}
    _emit(record, [f"{'yes' if holds else 'no'}"], args.format)
    return 0


def cmd_bench(args) -> int:
    from . import bench

    report = bench.run_scaling(tuple(args.k), args.atoms, args.T, args.reps, args.seed)
    print(report.table())
    status = 0 if len(report.rows) < 2 or report.linear else 1
    if args.model_check:
        print()
        print(bench.checking_table(bench.run_model_checking(tuple(args.check_atoms), repetitions=args.reps)))
    return status


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genlogic", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, mfs=True):
        p.add_argument("dataset", help="dataset file, or a bundled fixture name")
        p.add_argument("--mu", default=None, help="finite mu in [0,1]; default is the mu->1 limit")
        p.add_argument("--split-literals", action="store_true",
                       help="split conjunctions of literals in the condition into separate items")
        p.add_argument("--format", choices=("text", "json"), default="text")
        if mfs:
            p.add_argument("--explain-mfs", action="store_true",
                           help="report c, the prime evidence and the maximal founded subsets")

    p = sub.add_parser("validate", help="check a dataset file")
    p.add_argument("dataset")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("fixture", help="print a bundled fixture")
    p.add_argument("name", choices=FIXTURES)
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("query", help="conditional probability P(targets | condition)")
    common(p)
    p.add_argument("query")
    p.add_argument("--self-check", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("dist", help="distribution over an atom family at one time")
    common(p, mfs=False)
    p.add_argument("--atoms", required=True, help="glob pattern(s), comma-separated, e.g. 'L_*'")
    p.add_argument("--time", type=int, required=True)
    p.add_argument("--given", default="", help="condition")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("mle", help="most likely explanation of query atoms over time")
    common(p, mfs=False)
    p.add_argument("--atoms", required=True, help="glob pattern(s), e.g. 'L_*'")
    p.add_argument("--times", default=":", help="range 'lo:hi' or list '1,3' (default all)")
    p.add_argument("--given", default="", help="condition")
    p.set_defaults(func=cmd_mle)

    p = sub.add_parser("reference", help="posterior over data sequences")
    common(p)
    p.add_argument("--given", default="", help="condition")
    p.add_argument("--self-check", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_reference)

    p = sub.add_parser("consequence", help="empirical consequence check")
    common(p, mfs=False)
    p.add_argument("--given", required=True, help="condition")
    p.add_argument("--then", required=True, help="consequent condition")
    p.set_defaults(func=cmd_consequence)

    p = sub.add_parser("bench", help="scaling benchmark on synthetic data")
    p.add_argument("--k", type=int, nargs="+", default=[10_000, 20_000, 40_000])
    p.add_argument("--atoms", type=int, default=24)
    p.add_argument("--T", type=int, default=4)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model-check", action="store_true",
                   help="also compare against enumerating all valuations")
    p.add_argument("--check-atoms", type=int, nargs="+", default=[4, 8, 12])
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except GenLogicError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
