"""Normalization by evaluation into eta-long beta-normal form.

``Pi``/``Sigma`` are interpreted by their defining equations, ``Cond`` with a
numeral scrutinee is decided and otherwise lifted to ground type, ``R0`` with
a numeral scrutinee is unrolled (small counts only).  ``S``, ``Mu``, ``Leb``,
``Eps`` and free variables stay syntactic.  The output is typed, contains
only ``Cond`` at type 0, and every constant occurrence is fully applied.
"""
from __future__ import annotations

from .terms import (COND, EPS, LEB, MU, PI, REC0, SIGMA, SUCC, ZERO_K, App, Const,
                    Lam, Term, Var, apply, fresh_var, numeral_value, typecheck)
from .types import GROUND, Arrow, FiniteType, TYPE1, TYPE2, arrows

UNROLL_LIMIT = 32
_R0_TYPE3 = arrows([GROUND, GROUND], GROUND)


class _Neutral:
    __slots__ = ("term",)

    def __init__(self, term):
        self.term = term


def reify(v, t: FiniteType) -> Term:
    if isinstance(t, Arrow):
        x = fresh_var(t.argument, "n" if t.argument == GROUND else "g")
        return Lam(x, reify(v(reflect(x, t.argument)), t.result))
    if isinstance(v, int):
        from .arith import nat
        return nat(v)
    return v.term


def reflect(term: Term, t: FiniteType):
    if isinstance(t, Arrow):
        return lambda a: reflect(App(term, reify(a, t.argument)), t.result)
    n = numeral_value(term)
    return n if n is not None else _Neutral(term)


def _cond(c, x, y, t: FiniteType):
    if isinstance(c, int):
        return x if c == 0 else y
    if isinstance(t, Arrow):
        return lambda u: _cond(c, x(u), y(u), t.result)
    return _Neutral(apply(Const(COND, (GROUND,)), c.term, reify(x, GROUND), reify(y, GROUND)))


def _rec(x, y, z):
    if isinstance(x, int):
        acc = y
        for i in range(x):
            acc = z(acc)(i)
            if not isinstance(acc, int) and x > UNROLL_LIMIT:
                break
        else:
            return acc
    return _Neutral(apply(Const(REC0), reify(x, GROUND), reify(y, GROUND), reify(z, _R0_TYPE3)))


def _const(c: Const):
    k = c.kind
    if k == ZERO_K:
        return 0
    if k == SUCC:
        return lambda n: n + 1 if isinstance(n, int) else _Neutral(App(c, n.term))
    if k == PI:
        return lambda x: lambda y: x
    if k == SIGMA:
        return lambda x: lambda y: lambda z: x(z)(y(z))
    if k == REC0:
        return lambda x: lambda y: lambda z: _rec(x, y, z)
    if k == COND:
        (r,) = c.params
        return lambda cc: lambda x: lambda y: _cond(cc, x, y, r)
    if k == MU:
        return lambda f: _Neutral(App(c, reify(f, TYPE1)))
    if k in (LEB, EPS):
        return lambda X: reflect(App(c, reify(X, TYPE2)), TYPE1)
    raise AssertionError(k)


def _eval(t: Term, env: dict):
    if isinstance(t, Var):
        if t in env:
            return env[t]
        return reflect(t, t.type)
    if isinstance(t, Const):
        return _const(t)
    if isinstance(t, App):
        return _eval(t.fun, env)(_eval(t.arg, env))
    if isinstance(t, Lam):
        return lambda v: _eval(t.body, {**env, t.var: v})
    raise TypeError(t)


def nbe(t: Term, typ: FiniteType = None) -> Term:
    """Eta-long beta-normal form of ``t`` (free variables are kept)."""
    if typ is None:
        typ = typecheck(t)
    return reify(_eval(t, {}), typ)


def eta_contract(t: Term) -> Term:
    from .terms import free_vars

    if isinstance(t, App):
        return App(eta_contract(t.fun), eta_contract(t.arg))
    if isinstance(t, Lam):
        body = eta_contract(t.body)
        if isinstance(body, App) and body.arg == t.var and t.var not in free_vars(body.fun):
            return body.fun
        return Lam(t.var, body)
    return t


def tidy(t: Term, keep=()) -> Term:
    """Rename bound variables to short readable names that avoid the free ones.
    Closed subterms listed in ``keep`` are left alone."""
    from .terms import free_vars

    taken = {v.name for v in free_vars(t)}
    counters: dict = {}

    def pick(v: Var) -> Var:
        base = "n" if v.type == GROUND else ("f" if v.type == TYPE1 else "X")
        while True:
            counters[base] = counters.get(base, 0) + 1
            name = f"{base}{counters[base]}"
            if name not in taken:
                taken.add(name)
                return Var(name, v.type)

    def go(u: Term, ren: dict) -> Term:
        if u in keep:
            return u
        if isinstance(u, Var):
            return ren.get(u, u)
        if isinstance(u, App):
            return App(go(u.fun, ren), go(u.arg, ren))
        if isinstance(u, Lam):
            nv = pick(u.var)
            return Lam(nv, go(u.body, {**ren, u.var: nv}))
        return u
    return go(t, {})
