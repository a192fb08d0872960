"""Uniform continuity of type-2 functionals over Cantor space.

The primary tool is exhaustive branching: a functional is run on a symbolic
0/1 oracle and every unanswered query forks the run.  Majorants give an
independent static bound on the same modulus.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from .errors import BudgetExhausted, IllTyped, UnsupportedConstant, UnsupportedTerm
from .evaluate import Machine
from .terms import (COND, EPS, LEB, MU, REC0, App, Const, EvalBudget, Lam, Term, Var,
                    apply, free_vars, spine, substitute, typecheck)
from .types import GROUND, TYPE2, FiniteType


@dataclass(frozen=True)
class Leaf:
    value: int
    constraints: tuple  # ((index, bit), ...) in query order


@dataclass(frozen=True)
class Node:
    index: int
    zero: "Tree"
    one: "Tree"


Tree = Union[Leaf, Node]


@dataclass(frozen=True)
class BranchTree:
    root: Tree

    def leaves(self) -> Iterator[Leaf]:
        stack = [self.root]
        while stack:
            t = stack.pop()
            if isinstance(t, Leaf):
                yield t
            else:
                stack += [t.one, t.zero]

    def queried(self) -> set[int]:
        out, stack = set(), [self.root]
        while stack:
            t = stack.pop()
            if isinstance(t, Node):
                out.add(t.index)
                stack += [t.zero, t.one]
        return out

    @property
    def modulus(self) -> int:
        q = self.queried()
        return 1 + max(q) if q else 0

    def mass(self) -> Fraction:
        return sum((Fraction(1, 2 ** len(l.constraints)) for l in self.leaves()), Fraction(0))

    def to_dict(self) -> dict:
        return _tree_dict(self.root)

    @classmethod
    def from_dict(cls, d: dict) -> "BranchTree":
        return cls(_tree_from(d, ()))


def _tree_dict(t: Tree) -> dict:
    if isinstance(t, Leaf):
        return {"value": t.value, "constraints": [list(c) for c in t.constraints]}
    return {"query": t.index, "0": _tree_dict(t.zero), "1": _tree_dict(t.one)}


def _tree_from(d: dict, path) -> Tree:
    if "query" in d:
        n = d["query"]
        return Node(n, _tree_from(d["0"], path + ((n, 0),)), _tree_from(d["1"], path + ((n, 1),)))
    return Leaf(d["value"], tuple(tuple(c) for c in d["constraints"]))


class _NeedBit(Exception):
    def __init__(self, index: int, owner: object):
        self.index, self.owner = index, owner


def tree_of(X, machine: Machine) -> BranchTree:
    """Branch tree of an already evaluated type-2 value ``X``."""

    owner = object()  # nested trees (Leb inside Leb) must not catch each other's requests

    def explore(assign: dict, order: tuple) -> Tree:
        def oracle(n):
            try:
                return assign[n]
            except KeyError:
                raise _NeedBit(n, owner) from None

        machine.incomplete = False
        try:
            v = X(oracle)
        except _NeedBit as need:
            if need.owner is not owner:
                raise
            n = need.index
            return Node(n, explore({**assign, n: 0}, order + ((n, 0),)),
                        explore({**assign, n: 1}, order + ((n, 1),)))
        if machine.incomplete:
            raise BudgetExhausted("modulus undetermined within budget")
        return Leaf(v, order)

    outer = machine.incomplete
    try:
        return BranchTree(explore({}, ()))
    finally:
        machine.incomplete = outer


def _as_functional(t: Term, var: Optional[Var]) -> Term:
    if var is not None:
        t = Lam(var, t)
    typ = typecheck(t)
    if typ != TYPE2:
        raise IllTyped(f"expected a term of type 2, got {typ}")
    return t


def branch_evaluate(t: Term, budget: EvalBudget = EvalBudget(), env=None,
                    var: Optional[Var] = None, leb=None, eps=None) -> BranchTree:
    """Decision tree of ``t`` (type 2, or type 0 with designated free ``var``)."""
    t = _as_functional(t, var)
    m = Machine(budget, leb=leb, eps=eps)
    return tree_of(m.value(t, env), m)


def uniform_modulus(t: Term, budget: EvalBudget = EvalBudget(), env=None,
                    var: Optional[Var] = None) -> int:
    return branch_evaluate(t, budget, env, var).modulus


# -- majorants --------------------------------------------------------------

def generic_majorant(f):
    """``n -> max(f(0), ..., f(n))`` for a type-1 function ``f``."""
    from .evaluate import to_oracle

    f = to_oracle(f)
    cache = [f(0)]

    def fM(n):
        while len(cache) <= n:
            cache.append(max(cache[-1], f(len(cache))))
        return cache[n]
    return fM


def max_at(t: FiniteType) -> Term:
    """Pointwise maximum at type ``t``."""
    from .arith import MAX

    x, y = Var("x", t), Var("y", t)
    if t == GROUND:
        return MAX
    u = Var("u", t.argument)
    return Lam(x, Lam(y, Lam(u, apply(max_at(t.result), App(x, u), App(y, u)))))


def _r0_star() -> Term:
    from .arith import lib
    from .parser import parse_term

    return parse_term(
        "(lam x:0 (lam y:0 (lam z:(0->(0->0)) (R0 x y (lam a:0 (lam i:0 (max a (z a i))))))))",
        defs={"max": lib("max")}, compile=False)


def _cond_star(rho: FiniteType) -> Term:
    c, x, y = Var("c", GROUND), Var("x", rho), Var("y", rho)
    return Lam(c, Lam(x, Lam(y, apply(max_at(rho), x, y))))


@dataclass(frozen=True)
class Majorant:
    term: Term
    original: Term

    def value(self, env=None, budget: EvalBudget = EvalBudget()):
        """Evaluate the majorant with every type-1 input replaced by its ``f^M``."""
        env = dict(env or {})
        fixed = {k: (v if isinstance(v, int) else generic_majorant(v)) for k, v in env.items()}
        return Machine(budget).value(self.term, fixed)


def majorize(t: Term) -> Majorant:
    """Howard majorant built constant by constant; defined on T0 only."""
    return Majorant(_maj(t), t)


def _maj(t: Term) -> Term:
    if isinstance(t, Const):
        if t.kind in (MU, LEB, EPS):
            raise UnsupportedConstant(f"majorize is defined on T0 only ({t.kind} found)")
        if t.kind == REC0:
            return _r0_star()
        if t.kind == COND:
            return _cond_star(t.params[0])
        return t
    if isinstance(t, App):
        return App(_maj(t.fun), _maj(t.arg))
    if isinstance(t, Lam):
        return Lam(t.var, _maj(t.body))
    return t


def static_modulus_bound(t: Term, budget: EvalBudget = EvalBudget(), env=None,
                         var: Optional[Var] = None) -> int:
    """Modulus bound read off the majorant: run ``t*`` on the constant-1 oracle
    (which majorizes every 0/1 oracle) and take 1 + the largest index it asks."""
    t = _as_functional(t, var)
    star = majorize(t).term
    seen = [-1]

    def one(n):
        if n > seen[0]:
            seen[0] = n
        return 1
    Machine(budget).value(star, env)(one)
    return seen[0] + 1



def _one() -> Term:
    n = Var("n", GROUND)
    return Lam(n, App(Const("S"), Const("0")))


def modulus_bound_term(A: Term) -> Term:
    """A T0 term, in the type-0 free variables of the type-2 term ``A``, that
    bounds 1 + every oracle index ``A`` can query on a 0/1 oracle."""
    from .nbe import nbe

    bad = [v for v in free_vars(A) if v.type != GROUND]
    if bad:
        raise UnsupportedTerm(f"free variables of higher type: {[v.name for v in bad]}")
    nf = nbe(A, TYPE2)
    assert isinstance(nf, Lam)
    return _query_bound(nf.body, nf.var)


def _upper(e: Term, g: Var) -> Term:
    return substitute(_maj(e), {g: _one()})


def _query_bound(e: Term, g: Var) -> Term:
    from .arith import MAX

    if g not in free_vars(e):
        return Const("0")
    head, args = spine(e)
    if head == g and len(args) == 1:
        return apply(MAX, _query_bound(args[0], g), App(Const("S"), _upper(args[0], g)))
    if head == Const("S") and len(args) == 1:
        return _query_bound(args[0], g)
    if isinstance(head, Const) and head.kind == COND and len(args) == 3:
        qc, qx, qy = (_query_bound(a, g) for a in args)
        return apply(MAX, qc, apply(MAX, qx, qy))
    if isinstance(head, Const) and head.kind == REC0 and len(args) == 3:
        x, y, z = args
        if not (isinstance(z, Lam) and isinstance(z.body, Lam)):
            raise UnsupportedTerm("recursor step not in eta-long form")
        a, i = z.var, z.body.var
        body = z.body.body
        j = Var("_qj", GROUND)
        acc = Lam(j, apply(_r0_star(), j, _upper(y, g), Lam(a, Lam(i, _upper(body, g)))))
        qz = substitute(_query_bound(body, g), {a: App(acc, i)})
        q = Var("_qq", GROUND)
        loop = apply(Const(REC0), _upper(x, g), Const("0"), Lam(q, Lam(i, apply(MAX, q, qz))))
        return apply(MAX, _query_bound(x, g), apply(MAX, _query_bound(y, g), loop))
    raise UnsupportedTerm(f"cannot bound queries of {head}")
