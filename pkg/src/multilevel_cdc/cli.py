"""Command-line interface: ``multilevel-cdc <subcommand> [flags] [--json]``.

Exit codes: 0 on success, 1 when a verification fails, 2 on bad parameters.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .assembly import (
    build_plan,
    build_plan_explicit,
    cardinality_theorem32,
    construct_plan,
    load_manifest,
    plan_from_manifest,
    q_polynomial,
    closed_form_terms,
)
from .catalog import FdrmcRecord, applicable_lemmas, best_effort_code, oracle_optimal_dim, realize
from .ferrers import FerrersDiagram
from .rank_metric import DEFAULT_BUDGET, code_min_rank
from .skeleton import bitstring, one_factorization, skeleton_explicit, skeleton_theorem31
from .verification import TABLE5, verify_plan, verify_table5

MODES = ("skeleton", "components", "cross", "consistency", "table5", "all")


class ParameterError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # one-line diagnostic, exit 2
        raise ParameterError(message)


def _emit(args, payload: dict, lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        for line in lines:
            print(line)


# --------------------------------------------------------------------------
# Subcommands


def cmd_bounds(args) -> int:
    terms = closed_form_terms(args.q, args.n, args.t)
    value = cardinality_theorem32(args.q, args.n, args.t)
    poly = q_polynomial(terms)
    payload = {
        "q": args.q,
        "n": args.n,
        "t": args.t,
        "length": args.n * args.t,
        "distance": 4 * args.t,
        "dimension": 3 * args.t,
        "cardinality": str(value),
        "q_polynomial": poly,
    }
    _emit(args, payload, [str(value), poly])
    return 0


def cmd_table5(args) -> int:
    rep = verify_table5()
    from .assembly import corollary_bound

    rows = []
    for (length, q), expected in TABLE5.items():
        got = corollary_bound(length, q)
        rows.append({"q": q, "length": length, "expected": str(expected), "computed": str(got), "match": got == expected})
    lines = [f"{'parameters':<16} {'expected':>26} {'computed':>26}"]
    for r in rows:
        mark = "" if r["match"] else "  MISMATCH"
        lines.append(f"A_{r['q']}({r['length']},8,6){'':<4} {r['expected']:>26} {r['computed']:>26}{mark}")
    _emit(args, {"ok": rep.ok, "rows": rows}, lines)
    return 0 if rep.ok else 1


def _make_plan(args, construct: bool):
    if args.explicit:
        return build_plan_explicit(args.explicit, args.q, construct)
    if args.n is None or args.t is None:
        raise ParameterError("--n and --t are required unless --explicit is given")
    return build_plan(args.q, args.n, args.t, construct)


def cmd_build(args) -> int:
    construct = args.construct or args.dump_bases
    plan = _make_plan(args, False)
    if construct:
        construct_plan(plan, args.trials)
    manifest = plan.dumps()
    written = []
    if args.out:
        out = Path(args.out)
        out.write_text(manifest + "\n")
        written.append(str(out))
        if args.dump_bases:
            folder = out.with_suffix(".bases")
            folder.mkdir(exist_ok=True)
            for e, r in plan.items():
                path = folder / f"{e.label.replace(':', '_')}.txt"
                path.write_text(r.basis.dump())
                written.append(str(path))
    elif args.dump_bases:
        raise ParameterError("--dump-bases needs --out")
    lines = [
        f"entries: {len(plan.records)}",
        f"promised cardinality: {plan.promised_cardinality}",
    ]
    if plan.achieved_cardinality is not None:
        lines.append(f"achieved cardinality: {plan.achieved_cardinality}")
        lines += [f"gap {lbl}: promised {p}, achieved {a}" for lbl, p, a in plan.gaps]
    lines += [f"wrote {w}" for w in written]
    if args.out or args.json:
        _emit(args, {**plan.to_json(), "written": written}, lines)
    else:
        print(manifest)
    return 0


def cmd_verify(args) -> int:
    if args.input is None:
        if args.mode != "table5":
            raise ParameterError("--in is required for this mode")
        rep = verify_table5()
    else:
        try:
            data = load_manifest(Path(args.input).read_text())
            plan = plan_from_manifest(data)
        except (OSError, ValueError, KeyError) as exc:
            raise ParameterError(f"invalid plan manifest: {exc}") from exc
        rep = verify_plan(plan, args.mode, args.samples, args.seed, args.budget)
    _emit(args, rep.to_json(), rep.lines() + ["OK" if rep.ok else "FAIL"])
    for c in rep.failures:
        if c.witness and not args.json:
            print(f"# witness for {c.name}", file=sys.stderr)
            print(c.witness, file=sys.stderr)
    return 0 if rep.ok else 1


def _standalone_record(F: FerrersDiagram, delta: int, q: int) -> FdrmcRecord:
    lemmas = applicable_lemmas(F, delta, q)
    if lemmas:
        method = max(lemmas, key=lambda k: lemmas[k])
        return FdrmcRecord(F, delta, lemmas[method], method)
    return FdrmcRecord(F, delta, best_effort_code(F, delta, q).dim, "subfilter")


def cmd_fdrmc(args) -> int:
    F = FerrersDiagram.parse(args.cols)
    delta, q = args.delta, args.q
    if delta < 1:
        raise ParameterError("--delta must be positive")
    vmin = F.vmin(delta)
    lemmas = applicable_lemmas(F, delta, q)
    payload: dict = {"diagram": list(F.columns), "delta": delta, "q": q, "vmin": vmin, "lemmas": lemmas}
    lines = [f"diagram {F}  delta {delta}  q {q}", f"v_min: {vmin}"]
    lines += [f"{k}: {v}" for k, v in lemmas.items()] or ["no lemma applies"]
    if args.mode in ("plan", "construct"):
        rec = _standalone_record(F, delta, q)
        payload.update(method=rec.method, promised_dim=rec.promised_dim)
        lines.append(f"promised: {rec.promised_dim} ({rec.method})")
        if args.mode == "construct":
            code = realize(rec, q, args.trials)
            verdict = code_min_rank(code, args.budget, args.seed)
            payload.update(achieved_dim=code.dim, construction=code.label, min_rank=verdict.min_rank, check=verdict.kind)
            lines.append(f"achieved: {code.dim} via {code.label}; min rank {verdict.min_rank} ({verdict.kind})")
            if args.dump:
                Path(args.dump).write_text(code.dump())
                lines.append(f"wrote {args.dump}")
            if not verdict.passes(delta):
                _emit(args, payload, lines)
                return 1
    if args.mode == "oracle":
        res = oracle_optimal_dim(F, delta, q, args.nodes)
        payload.update(oracle_dim=res.dim, nodes=res.nodes)
        lines.append(f"oracle: {'unknown (budget)' if res.dim is None else res.dim} after {res.nodes} nodes")
    _emit(args, payload, lines)
    return 0


def cmd_onefact(args) -> int:
    if args.m < 2 or args.m % 2:
        raise ParameterError("--m must be an even integer >= 2")
    classes = one_factorization(args.m)
    rendered = [[bitstring(v) for v in cls] for cls in classes]
    _emit(args, {"m": args.m, "classes": rendered}, [" ".join(c) for c in rendered])
    return 0


def cmd_skeleton(args) -> int:
    if args.explicit:
        sk = skeleton_explicit(args.explicit, args.q)
    else:
        if args.n is None or args.t is None:
            raise ParameterError("--n and --t are required unless --explicit is given")
        sk = skeleton_theorem31(args.q, args.n, args.t)
    lines = [f"length {sk.length}  weight {sk.weight}  entries {len(sk.entries)}"]
    for e in sk.entries:
        p = e.pending
        spec = "-" if p is None else f"{p.rows}x{p.cols} {p.code}[{p.fill_index}]"
        lines.append(f"{bitstring(e.vector)}  {e.kind:<5} {e.label:<8} {spec}")
    _emit(args, sk.to_json(), lines)
    return 0


# --------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="multilevel-cdc", description="Multilevel constant dimension code toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, helptext: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = add("bounds", "closed-form cardinality for (q, n, t)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = add("table5", "compare the twelve tabulated lower bounds")
    p.set_defaults(func=cmd_table5)

    for name, helptext, func in (("build", "write a plan manifest", cmd_build), ("skeleton", "list skeleton entries", cmd_skeleton)):
        p = add(name, helptext)
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--n", type=int)
        p.add_argument("--t", type=int)
        p.add_argument("--explicit", type=int, choices=(17, 18, 19))
        p.set_defaults(func=func)
        if name == "build":
            p.add_argument("--out")
            p.add_argument("--construct", action="store_true", help="also build every component code")
            p.add_argument("--dump-bases", action="store_true")
            p.add_argument("--trials", type=int, default=0, help="extra random twists per short component")

    p = add("verify", "verify a plan manifest")
    p.add_argument("--in", dest="input")
    p.add_argument("--mode", choices=MODES, default="all")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_verify)

    p = add("fdrmc", "bounds, plans and constructions for one Ferrers diagram")
    p.add_argument("--cols", required=True, help="column counts, e.g. 2,2,4,4,6,6")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--mode", choices=("bound", "plan", "construct", "oracle"), default="bound")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--nodes", type=int, default=2_000_000, help="oracle node budget")
    p.add_argument("--dump", help="write the constructed basis here")
    p.set_defaults(func=cmd_fdrmc)

    p = add("onefact", "one-factorization of K_m as weight-2 vectors")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_onefact)
    return parser


def run_command(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "q", None) is not None and args.q < 2:
            raise ParameterError("--q must be a prime power >= 2")
        return args.func(args)
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
