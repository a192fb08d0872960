"""Command line interface: ``lebmine <subcommand> FILE [options]``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import arith
from .errors import IllTyped, LebmineError, NonArithmetical, ParseError, UnsupportedTerm
from .nbe import tidy
from .terms import EvalBudget, show, typecheck
from .types import GROUND, TYPE2

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _term(path: str, compile: bool = False):
    from .parser import parse_term
    return parse_term(_read(path), defs=arith._LIB, compile=compile)


def _ints(text: Optional[str]) -> Optional[list]:
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _budget(args) -> EvalBudget:
    try:
        return EvalBudget(max_steps=args.budget, mu_bound=args.mu_bound)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _emit(args, lines: list, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


# -- subcommands -----------------------------------------------------------------

def cmd_normalize(args) -> int:
    from .normalizer import NormalForm, find_occurrences, normalize_degree3
    t = _term(args.file)
    nf = normalize_degree3(t, _budget(args), strict=args.strict)
    names = arith.abbreviations()
    tidied = tidy(nf.term, keep=names)
    nf = NormalForm(tidied, find_occurrences(tidied))
    shown = show(tidied, names)
    lines = [f"term {shown}", f"occurrences {len(nf.occurrences)}"]
    lines += [f"occurrence {row}" for row in nf.table(names)]
    payload = {"term": shown,
               "occurrences": [{"path": list(o.path), "kind": o.kind, "arg": show(o.arg, names),
                                "residual": [v.name for v in o.residual]} for o in nf.occurrences]}
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_measure(args) -> int:
    from .continuity import uniform_modulus
    from .measure import ArithSetFamily, measure_arithmetical, measure_bruteforce, measure_clopen
    t = _term(args.file)
    b = _budget(args)
    bounds = _ints(args.bounds)
    typ = typecheck(t)
    payload: dict = {}
    if typ == TYPE2 and not bounds:
        d = measure_clopen(t, b)
        lines = [f"measure {d}"]
        payload["measure"] = str(d)
    else:
        params = 0
        u = typ
        while u != TYPE2 and hasattr(u, "argument") and u.argument == GROUND:
            params, u = params + 1, u.result
        if u != TYPE2:
            raise UsageError(f"expected a set code of type 2 or a family 0 -> ... -> 2, got {typ}")
        sig = args.signature.split(",") if args.signature else ["U"] * params
        fam = ArithSetFamily(t, tuple(s.strip() for s in sig))
        res = measure_arithmetical(fam, bounds or [], b)
        d = res.value
        lines = [f"measure {d}", f"bounds {','.join(map(str, res.bounds)) or '-'}",
                 f"certificate {res.certificate or 'none'}"]
        payload.update(measure=str(d), bounds=list(res.bounds), certificate=res.certificate)
        t = fam.truncation(bounds or [])
    if args.brute_force_check:
        k = uniform_modulus(t, b)
        bf = measure_bruteforce(t, k, b)
        ok = bf == d
        lines.append(f"bruteforce k={k} measure={bf} {'agree' if ok else 'DISAGREE'}")
        payload["bruteforce"] = {"k": k, "measure": str(bf), "agree": ok}
        _emit(args, lines, payload)
        return EXIT_OK if ok else EXIT_FAIL
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_modulus(args) -> int:
    from .continuity import branch_evaluate, static_modulus_bound
    t = _term(args.file)
    b = _budget(args)
    tree = branch_evaluate(t, b)
    lines = [f"modulus {tree.modulus}", f"leaves {sum(1 for _ in tree.leaves())}",
             f"mass {tree.mass()}"]
    payload = {"modulus": tree.modulus, "mass": str(tree.mass()), "tree": tree.to_dict()}
    try:
        sb = static_modulus_bound(t, b)
        lines.append(f"static-bound {sb}")
        payload["static_bound"] = sb
    except LebmineError as e:
        lines.append(f"static-bound unavailable ({e})")
        payload["static_bound"] = None
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_eliminate(args) -> int:
    from .pipeline import eliminate_lambda
    t = _term(args.file)
    _, report = eliminate_lambda(t, _budget(args), bounds=_ints(args.bounds), samples=args.samples,
                                 seed=args.seed, inject_fault=args.inject_fault)
    if args.json:
        print(report.to_json())
    else:
        print("\n".join(report.lines()))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_dialectica(args) -> int:
    from .logic import nd_interpret, parse_formula, prenex, qf_collapse, show_formula
    A = parse_formula(_read(args.file))
    names = arith.abbreviations()
    if args.prenex:
        A = prenex(A)
    if args.collapse:
        A = qf_collapse(A)
    shape = nd_interpret(A)
    lines = [f"formula {show_formula(A, names)}"] + shape.show(names).splitlines()
    payload = {"formula": show_formula(A, names),
               "exists": [[v.name, str(v.type)] for v in shape.exists],
               "forall": [[v.name, str(v.type)] for v in shape.forall],
               "matrix": show_formula(shape.matrix, names)}
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_baire(args) -> int:
    from . import baire
    b = _budget(args)
    if args.action in ("check", "witness"):
        if len(args.files) != 1:
            raise UsageError(f"baire {args.action} takes one term file")
        t = _term(args.files[0])
        w = baire.witness_clopen(t, b)
        if args.action == "witness":
            print(w.dumps())
            return EXIT_OK
        cover = baire.symmetric_difference_empty(t, w, b)
        comp = baire.witness_complement(w, args.depth, b)
        border = baire.closed_empty(comp.h(0), args.depth)
        dense = all(baire.nowhere_dense(H, args.depth) for H in comp.listed())
        lines = [f"cells {len(w.G.cells)}", f"coverage {'ok' if cover else 'FAILED'}",
                 f"complement-interior {len(comp.G.cells)}",
                 f"border {'empty' if border else 'nonempty'}",
                 f"nowhere-dense {'ok' if dense else 'FAILED'}"]
        _emit(args, lines, {"witness": w.to_dict(), "coverage": cover, "border_empty": border,
                            "nowhere_dense": dense, "complement": comp.to_dict()})
        return EXIT_OK if cover and dense else EXIT_FAIL
    ws = [baire.BaireWitness.loads(_read(p)) for p in args.files]
    if not ws:
        raise UsageError(f"baire {args.action} needs witness files")
    if args.action == "union":
        out = baire.witness_union(ws)
    else:
        if len(ws) != 1:
            raise UsageError("baire complement takes one witness file")
        out = baire.witness_complement(ws[0], args.depth, b)
    print(out.dumps())
    return EXIT_OK


# -- wiring -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lebmine", description="Eliminate Leb and Eps from typed terms.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=10_000_000, help="reduction step budget")
    common.add_argument("--mu-bound", type=int, default=10_000, help="search bound for Mu")
    common.add_argument("--json", action="store_true", help="structured output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("normalize", parents=[common], help="normal form and occurrence table")
    s.add_argument("file")
    s.add_argument("--strict", action="store_true", help="reject type-0 parameters in arguments")
    s.set_defaults(run=cmd_normalize)

    s = sub.add_parser("measure", parents=[common], help="measure of a set code or family")
    s.add_argument("file")
    s.add_argument("--bounds", help="truncation bounds m1,m2,...")
    s.add_argument("--signature", help="U/I per parameter, e.g. U,I (default: all U)")
    s.add_argument("--brute-force-check", action="store_true")
    s.set_defaults(run=cmd_measure)

    s = sub.add_parser("modulus", parents=[common], help="branch tree and modulus")
    s.add_argument("file")
    s.set_defaults(run=cmd_modulus)

    s = sub.add_parser("eliminate", parents=[common], help="replace Leb and Eps and verify")
    s.add_argument("file")
    s.add_argument("--bounds", help="Mu truncation bounds for arguments using Mu")
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=20240519)
    s.add_argument("--inject-fault", action="store_true", help="perturb the first replacement")
    s.set_defaults(run=cmd_eliminate)

    s = sub.add_parser("dialectica", parents=[common], help="Dialectica shape of a formula")
    s.add_argument("file")
    s.add_argument("--prenex", action="store_true")
    s.add_argument("--collapse", action="store_true", help="collapse number quantifiers first")
    s.set_defaults(run=cmd_dialectica)

    s = sub.add_parser("baire", parents=[common], help="Baire witnesses")
    s.add_argument("action", choices=["check", "witness", "union", "complement"])
    s.add_argument("files", nargs="*")
    s.add_argument("--depth", type=int, default=4)
    s.set_defaults(run=cmd_baire)
    return p


def run_subcommand(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.run(args)
    except (UsageError, ParseError, IllTyped, NonArithmetical, UnsupportedTerm, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except LebmineError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run_subcommand())


if __name__ == "__main__":
    main()
