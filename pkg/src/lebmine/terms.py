"""Typed combinator terms.

The kernel has variables, constants and application.  ``Lam`` nodes are
accepted by the type checker and the evaluators, but kernel operations such
as :func:`reduce_step` require them to be compiled away first with
:func:`compile_lambdas` (bracket abstraction over ``Pi``/``Sigma``).
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import BudgetExhausted, IllTyped
from .types import GROUND, TYPE1, TYPE2, TYPE12, Arrow, FiniteType, arrows

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

ZERO_K = "0"
SUCC = "S"
PI = "Pi"
SIGMA = "Sigma"
REC0 = "R0"
COND = "Cond"
MU = "Mu"
LEB = "Leb"
EPS = "Eps"

CONSTANT_KINDS = (ZERO_K, SUCC, PI, SIGMA, REC0, COND, MU, LEB, EPS)
_ARITY = {PI: 2, SIGMA: 3, COND: 1}


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        return show(self)


_NO_FV: frozenset = frozenset()


@dataclass(frozen=True, eq=True)
class Var(Term):
    name: str
    type: FiniteType
    _h: int = field(init=False, repr=False, compare=False)
    _fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("v", self.name, self.type)))
        object.__setattr__(self, "_fv", frozenset((self,)))

    def __hash__(self):
        return self._h

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, eq=True)
class Const(Term):
    kind: str
    params: tuple = ()
    _h: int = field(init=False, repr=False, compare=False)
    _fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in CONSTANT_KINDS:
            raise ValueError(f"unknown constant {self.kind!r}")
        if len(self.params) != _ARITY.get(self.kind, 0):
            raise ValueError(f"{self.kind} expects {_ARITY.get(self.kind, 0)} type parameters")
        object.__setattr__(self, "_h", hash(("c", self.kind, self.params)))
        object.__setattr__(self, "_fv", _NO_FV)

    def __hash__(self):
        return self._h

    def __str__(self) -> str:
        return self.kind


@dataclass(frozen=True, eq=True)
class App(Term):
    fun: Term
    arg: Term
    _h: int = field(init=False, repr=False, compare=False)
    _fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("a", self.fun._h, self.arg._h)))
        a, b = self.fun._fv, self.arg._fv
        object.__setattr__(self, "_fv", a | b if a and b else (a or b))

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, App) or self._h != other._h:
            return False
        return self.fun == other.fun and self.arg == other.arg

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, eq=True)
class Lam(Term):
    var: Var
    body: Term
    _h: int = field(init=False, repr=False, compare=False)
    _fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash(("l", self.var._h, self.body._h)))
        fv = self.body._fv
        object.__setattr__(self, "_fv", fv - {self.var} if self.var in fv else fv)

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Lam) or self._h != other._h:
            return False
        return self.var == other.var and self.body == other.body

    def __str__(self) -> str:
        return show(self)


ZERO = Const(ZERO_K)
S = Const(SUCC)
R0 = Const(REC0)
MU_C = Const(MU)
LEB_C = Const(LEB)
EPS_C = Const(EPS)


def Pi(rho: FiniteType, sigma: FiniteType) -> Const:
    return Const(PI, (rho, sigma))


def Sigma(rho: FiniteType, sigma: FiniteType, tau: FiniteType) -> Const:
    return Const(SIGMA, (rho, sigma, tau))


def Cond(rho: FiniteType = GROUND) -> Const:
    return Const(COND, (rho,))


def constant_type(c: Const) -> FiniteType:
    k = c.kind
    if k == ZERO_K:
        return GROUND
    if k == SUCC:
        return TYPE1
    if k == PI:
        r, s = c.params
        return arrows([r, s], r)
    if k == SIGMA:
        r, s, t = c.params
        return arrows([arrows([r, s], t), Arrow(r, s), r], t)
    if k == REC0:
        return arrows([GROUND, GROUND, arrows([GROUND, GROUND], GROUND)], GROUND)
    if k == COND:
        (r,) = c.params
        return arrows([GROUND, r, r], r)
    if k == MU:
        return TYPE2
    return TYPE12  # Leb, Eps


def apply(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def spine(t: Term) -> tuple[Term, list[Term]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def numeral(n: int) -> Term:
    t: Term = ZERO
    for _ in range(n):
        t = App(S, t)
    return t


def numeral_value(t: Term) -> Optional[int]:
    n = 0
    while isinstance(t, App) and t.fun == S:
        n += 1
        t = t.arg
    return n if t == ZERO else None


# -- typing -----------------------------------------------------------------

_TYPES: dict = {}


def typecheck(t: Term) -> FiniteType:
    return _tc(t, ())


def _tc(t: Term, loc: tuple) -> FiniteType:
    if isinstance(t, Var):
        return t.type
    if isinstance(t, Const):
        return constant_type(t)
    known = _TYPES.get(t)
    if known is not None:
        return known
    if len(_TYPES) > 200_000:
        _TYPES.clear()
    if isinstance(t, Lam):
        known = _TYPES[t] = Arrow(t.var.type, _tc(t.body, loc + (0,)))
        return known
    if isinstance(t, App):
        ft = _tc(t.fun, loc + (0,))
        at = _tc(t.arg, loc + (1,))
        if not isinstance(ft, Arrow):
            raise IllTyped(f"{show(t.fun)} of type {ft} is not a function", loc)
        if ft.argument != at:
            raise IllTyped(f"argument of type {at} where {ft.argument} expected", loc)
        _TYPES[t] = ft.result
        return ft.result
    raise TypeError(f"not a term: {t!r}")


def constants(t: Term) -> Iterator[Const]:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Const):
            yield u
        elif isinstance(u, App):
            stack += [u.arg, u.fun]
        elif isinstance(u, Lam):
            stack.append(u.body)


def mentions(t: Term, *kinds: str) -> bool:
    return any(c.kind in kinds for c in constants(t))


def in_T0(t: Term) -> bool:
    return not mentions(t, MU, LEB, EPS)


def in_T0_mu(t: Term) -> bool:
    return not mentions(t, LEB, EPS)


def fragment(t: Term) -> str:
    if in_T0(t):
        return "T0"
    if in_T0_mu(t):
        return "T0[mu]"
    return "T0[mu,Leb,Eps]"


def is_kernel(t: Term) -> bool:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Lam):
            return False
        if isinstance(u, App):
            stack += [u.fun, u.arg]
    return True


def free_vars(t: Term) -> set[Var]:
    return set(t._fv)


def subterm(t: Term, path) -> Term:
    for step in path:
        if isinstance(t, App):
            t = t.fun if step == 0 else t.arg
        elif isinstance(t, Lam):
            t = t.body
        else:
            raise IndexError(path)
    return t


def replace_at(t: Term, path, new: Term) -> Term:
    if not path:
        return new
    step, rest = path[0], path[1:]
    if isinstance(t, App):
        if step == 0:
            return App(replace_at(t.fun, rest, new), t.arg)
        return App(t.fun, replace_at(t.arg, rest, new))
    if isinstance(t, Lam):
        return Lam(t.var, replace_at(t.body, rest, new))
    raise IndexError(path)


_counter = [0]


def fresh_var(typ: FiniteType, hint: str = "v", avoid=()) -> Var:
    """A variable whose name cannot be produced by the parser."""
    names = {v.name for v in avoid}
    while True:
        _counter[0] += 1
        name = f"_{hint}{_counter[0]}"
        if name not in names:
            return Var(name, typ)


def substitute(t: Term, mapping: dict) -> Term:
    """Capture-avoiding simultaneous substitution of variables."""
    if not mapping:
        return t
    fvs = set()
    for v in mapping.values():
        fvs |= free_vars(v)
    return _subst(t, mapping, fvs)


def _subst(t, mapping, fvs):
    if t._fv.isdisjoint(mapping):
        return t
    if isinstance(t, Var):
        return mapping.get(t, t)
    if isinstance(t, App):
        f = _subst(t.fun, mapping, fvs)
        a = _subst(t.arg, mapping, fvs)
        if f is t.fun and a is t.arg:
            return t
        return App(f, a)
    if isinstance(t, Lam):
        inner = {k: v for k, v in mapping.items() if k != t.var}
        if not inner:
            return t
        if t.var in fvs:
            nv = fresh_var(t.var.type, "r")
            body = _subst(t.body, {t.var: nv}, {nv})
            return Lam(nv, _subst(body, inner, fvs))
        return Lam(t.var, _subst(t.body, inner, fvs))
    return t


# -- bracket abstraction ----------------------------------------------------

def identity(rho: FiniteType) -> Term:
    # Sigma Pi Pi : rho -> rho
    return apply(Sigma(rho, Arrow(GROUND, rho), rho), Pi(rho, Arrow(GROUND, rho)), Pi(rho, GROUND))


def abstract(x: Var, m: Term) -> Term:
    """Kernel term equal to ``lam x. m`` (``m`` must be a kernel term)."""
    if x not in free_vars(m):
        return App(Pi(typecheck(m), x.type), m)
    if m == x:
        return identity(x.type)
    assert isinstance(m, App), m
    if m.arg == x and x not in free_vars(m.fun):
        return m.fun
    ft = typecheck(m.fun)
    sigma_t, tau = ft.argument, ft.result
    return apply(Sigma(x.type, sigma_t, tau), abstract(x, m.fun), abstract(x, m.arg))


def compile_lambdas(t: Term) -> Term:
    if isinstance(t, App):
        f = compile_lambdas(t.fun)
        a = compile_lambdas(t.arg)
        return t if (f is t.fun and a is t.arg) else App(f, a)
    if isinstance(t, Lam):
        return abstract(t.var, compile_lambdas(t.body))
    return t


# -- rewriting --------------------------------------------------------------

@dataclass(frozen=True)
class EvalBudget:
    max_steps: int = 10_000_000
    mu_bound: int = 10_000

    def __post_init__(self):
        if self.max_steps <= 0 or self.mu_bound <= 0:
            raise ValueError("budgets must be strictly positive")


class Normal:
    """Marker returned by :func:`reduce_step` on normal terms."""

    def __repr__(self) -> str:
        return "NORMAL"


NORMAL = Normal()


def _contract(t: Term) -> Optional[Term]:
    head, args = spine(t)
    if not isinstance(head, Const):
        return None
    k = head.kind
    if k == PI and len(args) == 2:
        return args[0]
    if k == SIGMA and len(args) == 3:
        x, y, z = args
        return App(App(x, z), App(y, z))
    if k == REC0 and len(args) == 3:
        x, y, z = args
        if x == ZERO:
            return y
        if isinstance(x, App) and x.fun == S:
            return apply(z, apply(R0, x.arg, y, z), x.arg)
        return None
    if k == COND and len(args) == 3:
        c, x, y = args
        if c == ZERO:
            return x
        if isinstance(c, App) and c.fun == S:
            return y
    return None


def reduce_step(t: Term):
    """One leftmost-innermost rewrite, or ``NORMAL``."""
    if not is_kernel(t):
        raise ValueError("reduce_step works on kernel terms; compile lambdas first")
    r = _step(t)
    return NORMAL if r is None else r


def _step(t: Term) -> Optional[Term]:
    if not isinstance(t, App):
        return None
    r = _step(t.fun)
    if r is not None:
        return App(r, t.arg)
    r = _step(t.arg)
    if r is not None:
        return App(t.fun, r)
    return _contract(t)


def normalize(t: Term, budget: EvalBudget = EvalBudget()) -> Term:
    steps = 0
    while True:
        r = reduce_step(t)
        if r is NORMAL:
            return t
        steps += 1
        if steps > budget.max_steps:
            raise BudgetExhausted(f"no normal form within {budget.max_steps} steps")
        t = r


# -- printing ---------------------------------------------------------------

def show(t: Term, abbrev: Optional[dict] = None) -> str:
    """Render ``t``; subterms found in ``abbrev`` are printed by name."""
    parts: list[str] = []
    _show(t, parts, abbrev or {})
    return "".join(parts)


def _show(t, out, abbrev):
    name = abbrev.get(t) if abbrev and not isinstance(t, (Var, Const)) else None
    if name is not None:
        out.append(name)
    elif isinstance(t, Var):
        out.append(t.name)
    elif isinstance(t, Const):
        out.append(t.kind)
    elif isinstance(t, App):
        n = numeral_value(t)
        if n is not None:
            out.append(str(n))
            return
        out.append("(")
        _show(t.fun, out, abbrev)
        out.append(" ")
        _show(t.arg, out, abbrev)
        out.append(")")
    elif isinstance(t, Lam):
        out.append(f"(lam {t.var.name}:{t.var.type} ")
        _show(t.body, out, abbrev)
        out.append(")")
