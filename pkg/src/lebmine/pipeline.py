"""End-to-end elimination of Leb and Eps: normalize, replace innermost first, verify."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .arith import abbreviations
from .errors import NonEliminable, UnsupportedTerm
from .evaluate import Machine
from .measure import (epsilon_point, eps_term, measure_clopen, measure_term, point_term,
                      real_term, semantic_machine, truncate_mu)
from .nbe import nbe, tidy
from .normalizer import (GOccurrence, NormalForm, find_occurrences, normalize_degree3,
                         replace_occurrences)
from .terms import (EPS, LEB, MU, S, App, EvalBudget, Lam, Term, fragment, fresh_var, free_vars,
                    mentions, show, typecheck)
from .types import GROUND, TYPE1, TYPE2, Arrow, FiniteType

DEFAULT_SEED = 20240519


@dataclass
class Replacement:
    path: tuple
    kind: str
    provenance: str        # clopen-exact | uniform-exact | arithmetical-approx | epsilon | epsilon-uniform
    value: Optional[str]   # the dyadic or the selected prefix, when closed
    bounds: Optional[tuple] = None

    def line(self) -> str:
        p = ".".join(map(str, self.path)) or "root"
        extra = f" bounds={','.join(map(str, self.bounds))}" if self.bounds else ""
        val = f" value={self.value}" if self.value is not None else ""
        return f"replace {p} {self.kind} {self.provenance}{val}{extra}"


@dataclass
class PipelineReport:
    input: str
    occurrences: list
    replacements: list
    output: str
    fragment: str
    samples: int = 0
    mismatches: list = field(default_factory=list)
    status: str = "unverified"   # passed | failed | approximate | unverified

    @property
    def ok(self) -> bool:
        return self.status in ("passed", "approximate")

    def lines(self) -> list[str]:
        out = [f"input {self.input}"]
        out += [f"occurrence {o}" for o in self.occurrences]
        out += [r.line() for r in self.replacements]
        out += [f"output {self.output}", f"fragment {self.fragment}",
                f"verify samples={self.samples} mismatches={len(self.mismatches)} status={self.status}"]
        out += [f"mismatch {m}" for m in self.mismatches[:5]]
        return out

    def to_json(self) -> str:
        d = {"input": self.input, "occurrences": self.occurrences,
             "replacements": [{"path": list(r.path), "kind": r.kind, "provenance": r.provenance,
                               "value": r.value, "bounds": list(r.bounds) if r.bounds else None}
                              for r in self.replacements],
             "output": self.output, "fragment": self.fragment,
             "verification": {"samples": self.samples, "mismatches": self.mismatches,
                              "status": self.status}}
        return json.dumps(d, indent=2, sort_keys=True)


def _replacement(occ: GOccurrence, budget: EvalBudget, bounds: Optional[Sequence[int]]):
    arg = nbe(occ.arg, TYPE2)
    residual = [v for v in free_vars(arg) if v.type == GROUND]
    has_mu = mentions(arg, MU)
    if occ.kind == EPS:
        if has_mu:
            raise NonEliminable(
                f"Eps at {occ.path}: selection for sets defined with Mu is not supported")
        if residual:
            return eps_term(arg), Replacement(occ.path, EPS, "epsilon-uniform", None)
        p = epsilon_point(arg, budget)
        return point_term(p, compiled=False), Replacement(occ.path, EPS, "epsilon", "".join(map(str, p)) or "-")
    if has_mu:
        bs = tuple(bounds or (10,))
        cut = nbe(truncate_mu(arg, bs), TYPE2)
        if residual:
            return measure_term(cut), Replacement(occ.path, LEB, "arithmetical-approx", None, bs)
        d = measure_clopen(cut, budget)
        return real_term(d, compiled=False), Replacement(occ.path, LEB, "arithmetical-approx", str(d), bs)
    if residual:
        return measure_term(arg), Replacement(occ.path, LEB, "uniform-exact", None)
    d = measure_clopen(arg, budget)
    return real_term(d, compiled=False), Replacement(occ.path, LEB, "clopen-exact", str(d))


def eliminate(nf: NormalForm, budget: EvalBudget = EvalBudget(), bounds=None,
              inject_fault: bool = False):
    reps: list[Replacement] = []

    def interp(occ: GOccurrence) -> Term:
        term, rep = _replacement(occ, budget, bounds)
        if inject_fault and not reps:
            term = _perturb(term)
        reps.append(rep)
        return term
    out = replace_occurrences(nf, interp)
    return out, reps


def _perturb(t: Term) -> Term:
    n = fresh_var(GROUND, "n", free_vars(t))
    return Lam(n, App(S, App(t, n)))


# -- verification ------------------------------------------------------------------------

def _sample_value(typ: FiniteType, rng: random.Random):
    if typ == GROUND:
        return rng.randrange(8)
    if typ == TYPE1:
        vals = [rng.randrange(3) for _ in range(10)]
        return vals
    raise UnsupportedTerm(f"cannot sample inputs of type {typ}")


def _args_of(typ: FiniteType) -> list:
    out = []
    while isinstance(typ, Arrow):
        out.append(typ.argument)
        typ = typ.result
    return out


def _apply_value(v, args):
    from .evaluate import to_oracle
    for a in args:
        v = v(a if isinstance(a, int) else to_oracle(a))
    return v


def verify(original: Term, output: Term, samples: int, seed: int,
           budget: EvalBudget = EvalBudget()) -> list:
    """Compare outputs against the semantic oracle on sampled inputs; returns mismatches."""
    rng = random.Random(seed)
    frees = sorted(free_vars(original), key=lambda v: v.name)
    arg_types = _args_of(typecheck(original))
    bad = []
    sem, plain = semantic_machine(budget), Machine(budget)
    for _ in range(samples):
        env = {v.name: _sample_value(v.type, rng) for v in frees}
        args = [_sample_value(a, rng) for a in arg_types]
        sem.reset()
        plain.reset()
        expect = _apply_value(sem.value(original, env), args)
        got = _apply_value(plain.value(output, env), args)
        if expect != got:
            bad.append(f"env={env} args={args} expected={expect} got={got}")
    return bad


def eliminate_lambda(t: Term, budget: EvalBudget = EvalBudget(), bounds=None, samples: int = 100,
                     seed: int = DEFAULT_SEED, inject_fault: bool = False):
    """Return (Leb/Eps-free term, report)."""
    ty = typecheck(t)
    for a in _args_of(ty) + [v.type for v in free_vars(t)]:
        if a not in (GROUND, TYPE1):
            raise UnsupportedTerm(f"inputs must have type 0 or 1, found {a}")
    names = abbreviations()
    nf = normalize_degree3(t, budget)
    tidied = tidy(nf.term, keep=names)   # stable binder names make reports reproducible
    nf = NormalForm(tidied, find_occurrences(tidied))
    out, reps = eliminate(nf, budget, bounds, inject_fault)
    out = tidy(out, keep=names)
    frag = fragment(out)
    report = PipelineReport(show(t, names), nf.table(names), reps, show(out, names), frag)
    if mentions(out, LEB, EPS):
        report.status = "failed"
        report.mismatches.append("output still mentions Leb or Eps")
        return out, report
    if any(r.provenance == "arithmetical-approx" for r in reps):
        report.status = "approximate"
        return out, report
    report.samples = samples
    report.mismatches = verify(t, out, samples, seed, budget)
    report.status = "failed" if report.mismatches else "passed"
    return out, report
