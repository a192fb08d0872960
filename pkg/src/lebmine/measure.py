"""Lebesgue measure and selection for term-coded subsets of Cantor space.

A set code is a type-2 term ``X``; ``f`` is a member iff ``X f = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import NamedTuple, Optional, Sequence

from . import arith
from .continuity import BranchTree, Leaf, branch_evaluate, modulus_bound_term, tree_of
from .dyadic import Dyadic
from .errors import BudgetExhausted, IllTyped
from .evaluate import Machine, to_oracle
from .terms import (COND, Const, EvalBudget, Lam, MU_C, R0, S, Term, Var, ZERO, App, apply,
                    compile_lambdas, fresh_var, free_vars, substitute, typecheck)
from .types import GROUND, TYPE1, TYPE2, arrows

F = arith.lib


def _lam(typ, body_fn, hint="v", avoid=()):
    v = fresh_var(typ, hint, avoid)
    return Lam(v, body_fn(v))


def _kernel(t: Term) -> Term:
    return compile_lambdas(t)


def _code(X: Term) -> Term:
    if typecheck(X) != TYPE2:
        raise IllTyped(f"set code must have type 2, got {typecheck(X)}")
    return X


# -- basic sets ---------------------------------------------------------------

_BASIC: list = []


def basic_open(bits: Sequence[int]) -> Term:
    """[s]: all f whose sg-values extend ``bits``.

    After the first mismatch the code only re-reads ``f 0``, so its branch
    tree has ``len(bits) + 1`` leaves instead of ``2 ** len(bits)``.
    """
    if not _BASIC:
        c, n = Var("c", GROUND), Var("n", GROUND)
        f, m, i = Var("f", TYPE1), Var("m", GROUND), Var("i", GROUND)
        cond = Const(COND, (GROUND,))
        probe = App(f, apply(cond, m, i, ZERO))
        miss = apply(F("dist"), App(F("sg"), probe), apply(F("seqbit"), c, i))
        step = Lam(m, Lam(i, apply(cond, m, miss, arith.nat(1))))
        _BASIC.append(_kernel(Lam(c, Lam(n, Lam(f, apply(R0, n, ZERO, step))))))
    bits = tuple(bits)
    return apply(_BASIC[0], arith.nat(arith.string_code(bits)), arith.nat(len(bits)))


def basic_open_coded(compiled: bool = True) -> Term:
    """Type 0 -> 2: the basic open of the string with code ``c``."""
    c, f = Var("c", GROUND), Var("f", TYPE1)
    a, i = Var("a", GROUND), Var("i", GROUND)
    step = Lam(a, Lam(i, apply(F("max"), a,
                               apply(F("dist"), App(F("sg"), App(f, i)), apply(F("seqbit"), c, i)))))
    t = Lam(c, Lam(f, apply(R0, App(F("lth"), c), ZERO, step)))
    return _kernel(t) if compiled else t


def full_set() -> Term:
    return _kernel(_lam(TYPE1, lambda f: ZERO, "f"))


def empty_set() -> Term:
    return _kernel(_lam(TYPE1, lambda f: App(S, ZERO), "f"))


# -- set algebra --------------------------------------------------------------

def _binop(op: str, X: Term, Y: Term) -> Term:
    _code(X), _code(Y)
    avoid = free_vars(X) | free_vars(Y)
    return _kernel(_lam(TYPE1, lambda f: apply(F(op), App(F("sg"), App(X, f)),
                                              App(F("sg"), App(Y, f))), "f", avoid))


def set_union(X: Term, Y: Term) -> Term:
    return _binop("min", X, Y)


def set_intersection(X: Term, Y: Term) -> Term:
    return _binop("max", X, Y)


def set_complement(X: Term) -> Term:
    _code(X)
    return _kernel(_lam(TYPE1, lambda f: apply(F("sub"), App(S, ZERO), App(X, f)), "f", free_vars(X)))


def set_difference(X: Term, Y: Term) -> Term:
    return set_intersection(X, set_complement(Y))


def sg_normalize(X: Term) -> Term:
    """λf. sg(X(λn. sg(f n)))."""
    _code(X)

    def body(f):
        n = fresh_var(GROUND, "n")
        return App(F("sg"), App(X, Lam(n, App(F("sg"), App(f, n)))))
    return _kernel(_lam(TYPE1, body, "f", free_vars(X)))


def union_all(Xs: Sequence[Term]) -> Term:
    if not Xs:
        return empty_set()
    acc = Xs[0]
    for X in Xs[1:]:
        acc = set_union(acc, X)
    return acc


def disjointify(Xs: Sequence[Term]) -> list[Term]:
    """X'_i = X_i minus the union of the earlier X_j (finite family)."""
    out = []
    for i, X in enumerate(Xs):
        out.append(X if i == 0 else set_difference(X, union_all(list(Xs[:i]))))
    return out


def _earlier_union(Fam: Term, n: Term, f: Term) -> Term:
    """0 iff f lies in some Fam j with j < n."""
    a, j = fresh_var(GROUND, "a"), fresh_var(GROUND, "j")
    return apply(R0, n, App(S, ZERO),
                 Lam(a, Lam(j, apply(F("min"), a, App(F("sg"), apply(Fam, j, f))))))


def disjointify_indexed(Fam: Term, compiled: bool = True) -> Term:
    """Indexed version for a family term of type 0 -> 2, built with R0."""
    if typecheck(Fam) != arrows([GROUND], TYPE2):
        raise IllTyped("family must have type 0 -> 2")
    avoid = free_vars(Fam)
    n, f = fresh_var(GROUND, "n", avoid), fresh_var(TYPE1, "f", avoid)
    body = apply(F("max"), App(F("sg"), apply(Fam, n, f)),
                 apply(F("sub"), App(S, ZERO), _earlier_union(Fam, n, f)))
    t = Lam(n, Lam(f, body))
    return _kernel(t) if compiled else t


def countable_union(Fam: Term, compiled: bool = True) -> Term:
    """λf. Fam(N f) f with N f = Mu(λn. Fam n f)."""
    if typecheck(Fam) != arrows([GROUND], TYPE2):
        raise IllTyped("family must have type 0 -> 2")
    avoid = free_vars(Fam)
    f, n = fresh_var(TYPE1, "f", avoid), fresh_var(GROUND, "n", avoid)
    N = App(MU_C, Lam(n, apply(Fam, n, f)))
    t = Lam(f, apply(Fam, N, f))
    return _kernel(t) if compiled else t


# -- evaluation ------------------------------------------------------------------

class Membership(NamedTuple):
    member: bool
    incomplete: bool


def member(X: Term, f, budget: EvalBudget = EvalBudget(), env=None) -> Membership:
    m = Machine(budget)
    v = m.value(_code(X), env)(to_oracle(f))
    return Membership(v == 0, m.incomplete)


def tree_measure(tree: BranchTree) -> Dyadic:
    total = Dyadic(0)
    for leaf in tree.leaves():
        if leaf.value == 0:
            total = total + Dyadic(1, len(leaf.constraints))
    return total


def measure_clopen(X: Term, budget: EvalBudget = EvalBudget(), env=None) -> Dyadic:
    """Exact measure: the total weight of the 0-valued cells of the branch tree."""
    return tree_measure(branch_evaluate(_code(X), budget, env))


def measure_bruteforce(X: Term, k: int, budget: EvalBudget = EvalBudget(), env=None,
                       jets: bool = True) -> Dyadic:
    """2^-k times the number of s in 2^k whose 0-extension is a member."""
    m = Machine(budget, jets=jets)
    fn = m.value(_code(X), env)
    count = 0
    for s in product((0, 1), repeat=k):
        count += fn(to_oracle(s)) == 0
    if m.incomplete:
        raise BudgetExhausted("mu search bound hit during enumeration")
    return Dyadic(count, k)


# -- selection --------------------------------------------------------------------

def _padded(leaf: Leaf, k: int) -> tuple:
    bits = [0] * k
    for i, b in leaf.constraints:
        bits[i] = b
    return tuple(bits)


def tree_epsilon_point(tree: BranchTree) -> Optional[tuple]:
    """Lexicographically least 0-padded member cell, or None if the set is empty."""
    k = tree.modulus
    cands = [_padded(l, k) for l in tree.leaves() if l.value == 0]
    return min(cands) if cands else None


def point_term(bits: Sequence[int], compiled: bool = True) -> Term:
    """λx. bit(N, x) with N = sum bits_i 2^i: the 0-padded point ``bits``."""
    N = sum(b << i for i, b in enumerate(bits))
    t = _lam(GROUND, lambda x: ZERO, "x") if N == 0 else App(F("bit"), arith.nat(N))
    return _kernel(t) if compiled else t


def epsilon_select(X: Term, budget: EvalBudget = EvalBudget(), env=None) -> Term:
    p = tree_epsilon_point(branch_evaluate(_code(X), budget, env))
    return point_term(p or ())


def epsilon_point(X: Term, budget: EvalBudget = EvalBudget(), env=None) -> tuple:
    """The selected point as its first ``modulus`` values."""
    tree = branch_evaluate(_code(X), budget, env)
    return tree_epsilon_point(tree) or (0,) * tree.modulus


# -- reals --------------------------------------------------------------------------

def real_code(d: Dyadic):
    """Canonical type-1 code of a dyadic: n -> floor(d * 2^n)."""
    d = Dyadic.of(d)
    return lambda n: d.floor_scaled(n)


def real_term(d: Dyadic, compiled: bool = True) -> Term:
    """λn. shiftr(shiftl(m, n), k) for d = m/2^k."""
    d = Dyadic.of(d)
    t = _lam(GROUND, lambda n: apply(F("shiftr"), apply(F("shiftl"), arith.nat(d.m), n),
                                     arith.nat(d.k)), "n")
    return _kernel(t) if compiled else t


# -- semantic constants ---------------------------------------------------------------

def leb_handler(X, machine: Machine):
    """Meaning of Leb on an evaluated set code: its real code."""
    return real_code(tree_measure(tree_of(X, machine)))


def eps_handler(X, machine: Machine):
    p = tree_epsilon_point(tree_of(X, machine)) or ()
    return lambda x: p[x] if x < len(p) else 0


def semantic_machine(budget: EvalBudget = EvalBudget(), jets: bool = True) -> Machine:
    return Machine(budget, leb=leb_handler, eps=eps_handler, jets=jets)


# -- uniform replacements for codes with type-0 parameters -------------------------------

def _nbe_body(A: Term):
    from .nbe import nbe
    nf = nbe(A, TYPE2)
    return nf.var, nf.body


def measure_term(A: Term) -> Term:
    """A T0 real code for the measure of ``A``, uniform in its type-0 free variables."""
    K = modulus_bound_term(A)
    g, B = _nbe_body(A)
    avoid = free_vars(A) | free_vars(B) | {g}
    k, c, s, j, n = (fresh_var(GROUND, h, avoid) for h in "kcsjn")
    cell = substitute(B, {g: Lam(j, apply(F("bit"), s, j))})
    count = apply(R0, App(F("pow2"), k), ZERO,
                  Lam(c, Lam(s, apply(F("add"), c, App(F("iszero"), cell)))))
    real = Lam(n, apply(F("shiftr"), apply(F("shiftl"), count, n), k))
    return App(Lam(k, real), K)


def _point_of(s: Term, k: Term, avoid) -> Term:
    x = fresh_var(GROUND, "x", avoid)
    return Lam(x, apply(Const(COND, (GROUND,)), apply(F("sub"), k, x), ZERO,
                        apply(F("bit"), s, apply(F("sub"), k, App(S, x)))))


def eps_term(A: Term) -> Term:
    """A T0 type-1 term selecting the lexicographically least member cell of ``A``."""
    K = modulus_bound_term(A)
    g, B = _nbe_body(A)
    avoid = free_vars(A) | free_vars(B) | {g}
    k, a, i, s = (fresh_var(GROUND, h, avoid) for h in "kais")
    P = App(F("pow2"), k)
    cond = Const(COND, (GROUND,))
    hit = substitute(B, {g: _point_of(i, k, avoid)})
    step = Lam(a, Lam(i, apply(cond, apply(F("dist"), a, P), apply(cond, hit, i, a), a)))
    best = apply(R0, P, P, step)
    return App(Lam(k, App(Lam(s, _point_of(s, k, avoid)), best)), K)


# -- arithmetical sets ----------------------------------------------------------------

_QUANT = {"U": "U", "union": "U", "∪": "U", "I": "I", "intersection": "I", "∩": "I"}


@dataclass(frozen=True)
class ArithSetFamily:
    """``term : 0 -> ... -> 0 -> 2`` with one quantifier (union or intersection) per parameter."""
    term: Term
    signature: tuple

    def __post_init__(self):
        sig = tuple(_QUANT[q] for q in self.signature)
        object.__setattr__(self, "signature", sig)
        if typecheck(self.term) != arrows([GROUND] * len(sig), TYPE2):
            raise IllTyped(f"family with {len(sig)} parameters must have type 0 -> ... -> 2")

    @classmethod
    def parse_signature(cls, term: Term, text: str) -> "ArithSetFamily":
        return cls(term, tuple(q for q in text.replace(",", " ").split() if q))

    def truncation(self, bounds: Sequence[int]) -> Term:
        """The finite union/intersection with parameter j ranging below ``bounds[j]``."""
        if len(bounds) != len(self.signature):
            raise ValueError(f"need {len(self.signature)} bounds, got {len(bounds)}")
        return _kernel(_truncate(self.term, self.signature, list(bounds)))


def _truncate(Fam: Term, sig, bounds) -> Term:
    if not sig:
        return Fam
    avoid = free_vars(Fam)
    f, a, n = (fresh_var(t, h, avoid) for t, h in ((TYPE1, "f"), (GROUND, "a"), (GROUND, "n")))
    inner = _truncate(App(Fam, n), sig[1:], bounds[1:])
    cell = App(F("sg"), App(inner, f))
    if sig[0] == "U":
        init, comb = App(S, ZERO), apply(F("min"), a, cell)
    else:
        init, comb = ZERO, apply(F("max"), a, App(F("sg"), cell))
    return Lam(f, apply(R0, arith.nat(bounds[0]), init, Lam(a, Lam(n, comb))))


class ArithMeasure(NamedTuple):
    value: Dyadic
    certificate: Optional[str]  # "lower", "upper", "exact" or None
    bounds: tuple


def measure_arithmetical(fam: ArithSetFamily, bounds: Sequence[int],
                         budget: EvalBudget = EvalBudget()) -> ArithMeasure:
    value = measure_clopen(fam.truncation(bounds), budget)
    sig = set(fam.signature)
    cert = "exact" if not sig else {frozenset("U"): "lower", frozenset("I"): "upper"}.get(frozenset(sig))
    return ArithMeasure(value, cert, tuple(bounds))


def bounded_mu(F: Term, m: int) -> Term:
    """Least i < m with F i = 0, else 0: the search of Mu cut off at ``m``."""
    avoid = free_vars(F)
    a, i, r = (fresh_var(GROUND, h, avoid) for h in "air")
    cond, M = Const(COND, (GROUND,)), arith.nat(m)
    step = Lam(a, Lam(i, apply(cond, apply(arith.lib("dist"), a, M),
                               apply(cond, App(F, i), i, a), a)))
    found = apply(R0, M, M, step)
    return App(Lam(r, apply(cond, apply(arith.lib("dist"), r, M), ZERO, r)), found)


def truncate_mu(t: Term, bounds: Sequence[int]) -> Term:
    """Replace the k-th Mu (preorder) by its search cut off at bounds[k] (last bound repeats)."""
    from .terms import MU
    if not bounds:
        raise ValueError("truncation needs at least one bound")
    count = [0]

    def next_bound():
        b = bounds[min(count[0], len(bounds) - 1)]
        count[0] += 1
        return b

    def go(u: Term) -> Term:
        if isinstance(u, App) and isinstance(u.fun, Const) and u.fun.kind == MU:
            b = next_bound()
            return bounded_mu(go(u.arg), b)
        if isinstance(u, Const) and u.kind == MU:
            b = next_bound()
            h = fresh_var(TYPE1, "h")
            return Lam(h, bounded_mu(h, b))
        if isinstance(u, App):
            return App(go(u.fun), go(u.arg))
        if isinstance(u, Lam):
            return Lam(u.var, go(u.body))
        return u
    return go(t)
