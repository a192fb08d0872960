"""Normal forms for terms with the type-3 constants Leb and Eps.

After normalization every occurrence of ``G`` in {Leb, Eps} is applied to a
type-2 argument whose only higher-type free variable is its own bound oracle.
Type-0 free variables ("residual parameters") may remain in the argument.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Union

from .errors import DanglingFreeVariable, TypeMismatch, UnsupportedTerm
from .nbe import eta_contract, nbe
from .terms import (EPS, LEB, App, Const, EvalBudget, Lam, Term, Var, fresh_var, free_vars,
                    replace_at, show, subterm, typecheck)
from .types import GROUND, TYPE1

G_KINDS = (LEB, EPS)


@dataclass(frozen=True)
class GOccurrence:
    path: tuple
    kind: str
    arg: Term
    var: Optional[Var]          # the designated type-1 variable, if the argument is a lambda
    residual: tuple             # type-0 free variables of ``arg``, sorted by name

    def describe(self, abbrev: Optional[dict] = None) -> str:
        frees = ",".join(v.name for v in self.residual) or "-"
        return f"{'.'.join(map(str, self.path)) or 'root'}\t{self.kind}\t{show(self.arg, abbrev)}\t{frees}"


@dataclass(frozen=True)
class NormalForm:
    term: Term
    occurrences: tuple

    def table(self, abbrev: Optional[dict] = None) -> list[str]:
        return [o.describe(abbrev) for o in self.occurrences]


def _is_g(t: Term) -> bool:
    return isinstance(t, App) and isinstance(t.fun, Const) and t.fun.kind in G_KINDS


def _walk(t: Term, path=()):
    yield path, t
    if isinstance(t, App):
        yield from _walk(t.fun, path + (0,))
        yield from _walk(t.arg, path + (1,))
    elif isinstance(t, Lam):
        yield from _walk(t.body, path + (0,))


def find_occurrences(t: Term) -> tuple:
    occ = []
    for path, u in _walk(t):
        if _is_g(u):
            a = u.arg
            res = tuple(sorted((v for v in free_vars(a) if v.type == GROUND), key=lambda v: v.name))
            occ.append(GOccurrence(path, u.fun.kind, a, a.var if isinstance(a, Lam) else None, res))
    # innermost first: deeper paths before their prefixes
    occ.sort(key=lambda o: (-len(o.path), o.path))
    return tuple(occ)


def _liftable(A: Term):
    """An application ``h e`` in ``A`` with ``h`` a type-1 variable free in ``A``
    and ``e`` mentioning no variable bound inside ``A``."""
    outside = free_vars(A)
    found_bad = None

    def go(u, bound):
        nonlocal found_bad
        if isinstance(u, App):
            if isinstance(u.fun, Var) and u.fun.type == TYPE1 and u.fun in outside and u.fun not in bound:
                if not (free_vars(u.arg) & bound):
                    return u
                found_bad = u
            return go(u.fun, bound) or go(u.arg, bound)
        if isinstance(u, Lam):
            return go(u.body, bound | {u.var})
        return None
    return go(A, frozenset()), found_bad


def _replace_sub(A: Term, target: Term, y: Var) -> Term:
    tv = free_vars(target)

    def go(u, bound):
        if u == target and not (tv & bound):
            return y
        if isinstance(u, App):
            return App(go(u.fun, bound), go(u.arg, bound))
        if isinstance(u, Lam):
            return Lam(u.var, go(u.body, bound | {u.var}))
        return u
    return go(A, frozenset())


def _lift_once(t: Term) -> Optional[Term]:
    for path, u in sorted(_walk(t), key=lambda pu: -len(pu[0])):
        if not _is_g(u):
            continue
        target, bad = _liftable(u.arg)
        if target is None:
            if bad is not None:
                raise UnsupportedTerm(
                    f"{show(bad)} depends on variables bound inside the argument of {u.fun.kind}")
            continue
        y = fresh_var(GROUND, "y", free_vars(t))
        core = App(u.fun, _replace_sub(u.arg, target, y))
        if path and path[-1] == 0:  # wrap the saturated application G A m
            host = path[:-1]
            m = subterm(t, host).arg
            return replace_at(t, host, App(Lam(y, App(core, m)), target))
        n = fresh_var(GROUND, "n", free_vars(t))
        return replace_at(t, path, Lam(n, App(Lam(y, App(core, n)), target)))
    return None


def _check(occ: GOccurrence, strict: bool) -> None:
    higher = [v for v in free_vars(occ.arg) if v.type != GROUND]
    if higher:
        raise UnsupportedTerm(
            f"argument of {occ.kind} has higher-type free variables {sorted(v.name for v in higher)}")
    if strict and occ.residual:
        raise UnsupportedTerm(
            f"strict mode: argument of {occ.kind} has type-0 parameters "
            f"{[v.name for v in occ.residual]}; coding them into the oracle changes the measure")


def normalize_degree3(t: Term, budget: EvalBudget = EvalBudget(), strict: bool = False) -> NormalForm:
    """Normal form of ``t`` plus its occurrence table (innermost first)."""
    typecheck(t)
    u = nbe(t)
    while True:
        nxt = _lift_once(u)
        if nxt is None:
            break
        u = nxt
    u = eta_contract(u)
    occ = find_occurrences(u)
    for o in occ:
        _check(o, strict)
    return NormalForm(u, occ)


def check_shape(nf: Union[NormalForm, Term]) -> bool:
    """Every G node sits at a listed path with only type-0 frees besides its oracle."""
    term = nf.term if isinstance(nf, NormalForm) else nf
    occ = find_occurrences(term)
    if isinstance(nf, NormalForm) and {o.path for o in occ} != {o.path for o in nf.occurrences}:
        return False
    for path, u in _walk(term):
        if isinstance(u, Const) and u.kind in G_KINDS:
            if not (path and path[-1] == 0 and _is_g(subterm(term, path[:-1]))):
                return False
    return all(v.type == GROUND for o in occ for v in free_vars(o.arg))


Interpreter = Union[Mapping, Callable[[GOccurrence], Term]]


def replace_occurrences(nf: NormalForm, interpreter: Interpreter) -> Term:
    """Replace occurrences innermost first.  A mapping is keyed by path; a callable
    receives each occurrence with inner replacements already applied."""
    term = nf.term
    for o in sorted(nf.occurrences, key=lambda o: (-len(o.path), o.path)):
        node = subterm(term, o.path)
        cur = GOccurrence(o.path, o.kind, node.arg, o.var, o.residual)
        if callable(interpreter):
            rep = interpreter(cur)
        else:
            rep = interpreter.get(o.path)
            if rep is None:
                continue
        rt = typecheck(rep)
        if rt != TYPE1:
            raise TypeMismatch(f"replacement for {o.kind} at {o.path} has type {rt}, expected {TYPE1}")
        extra = free_vars(rep) - free_vars(cur.arg)
        if extra:
            raise DanglingFreeVariable(
                f"replacement at {o.path} introduces {sorted(v.name for v in extra)}")
        term = replace_at(term, o.path, rep)
    return term
