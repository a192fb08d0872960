"""Formulas over typed terms and the translations on them: extensional
equality and its relativization, quantifier collapse with Mu, negative
translation, Dialectica shapes, prenexing and the Skolemized measure axiom."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Optional, Union

from . import arith
from .errors import IllTyped, NonArithmetical, ParseError
from .evaluate import Machine
from .nbe import eta_contract
from .parser import Elaborator, Tokens, parse_surface, parse_type_tokens, tokenize, _is_ident
from .terms import (MU_C, R0, App, Cond, EvalBudget, Lam, S, Term, Var, ZERO, apply, free_vars,
                    numeral, numeral_value, show, substitute, typecheck)
from .types import GROUND, TYPE1, Arrow, FiniteType, arrows


# -- syntax ---------------------------------------------------------------------

@dataclass(frozen=True)
class Prime:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: Var
    body: "Formula"


Formula = Union[Prime, And, Or, Implies, Not, Forall, Exists]
Quant = (Forall, Exists)
BINARY = (And, Or, Implies)
FALSUM = Prime(numeral(1), ZERO)


def conj(*fs: Formula) -> Formula:
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def check(A: Formula) -> Formula:
    """Type-check every prime formula: both sides must be of type 0."""
    for p in primes(A):
        for side in (p.lhs, p.rhs):
            if typecheck(side) != GROUND:
                raise IllTyped(f"prime formula side {show(side)} is not of type 0")
    return A


def primes(A: Formula) -> Iterable[Prime]:
    if isinstance(A, Prime):
        yield A
    elif isinstance(A, BINARY):
        yield from primes(A.left)
        yield from primes(A.right)
    elif isinstance(A, Not):
        yield from primes(A.body)
    else:
        yield from primes(A.body)


def is_qf(A: Formula) -> bool:
    if isinstance(A, Prime):
        return True
    if isinstance(A, BINARY):
        return is_qf(A.left) and is_qf(A.right)
    if isinstance(A, Not):
        return is_qf(A.body)
    return False


def formula_free_vars(A: Formula) -> set:
    if isinstance(A, Prime):
        return free_vars(A.lhs) | free_vars(A.rhs)
    if isinstance(A, BINARY):
        return formula_free_vars(A.left) | formula_free_vars(A.right)
    if isinstance(A, Not):
        return formula_free_vars(A.body)
    return formula_free_vars(A.body) - {A.var}


def bound_names(A: Formula) -> set:
    if isinstance(A, Prime):
        return set()
    if isinstance(A, BINARY):
        return bound_names(A.left) | bound_names(A.right)
    if isinstance(A, Not):
        return bound_names(A.body)
    return {A.var.name} | bound_names(A.body)


def fresh_name(base: str, taken: set) -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def subst(A: Formula, mapping: Mapping[Var, Term]) -> Formula:
    """Capture-avoiding substitution of terms for free variables."""
    if not mapping:
        return A
    if isinstance(A, Prime):
        return Prime(substitute(A.lhs, dict(mapping)), substitute(A.rhs, dict(mapping)))
    if isinstance(A, BINARY):
        return type(A)(subst(A.left, mapping), subst(A.right, mapping))
    if isinstance(A, Not):
        return Not(subst(A.body, mapping))
    inner = {k: v for k, v in mapping.items() if k != A.var}
    incoming = set().union(*(free_vars(t) for t in inner.values())) if inner else set()
    var = A.var
    if var in incoming:
        taken = {v.name for v in incoming | formula_free_vars(A.body)}
        var = Var(fresh_name(A.var.name, taken), A.var.type)
        inner[A.var] = var
    return type(A)(var, subst(A.body, inner))


def show_formula(A: Formula, abbrev: Optional[dict] = None) -> str:
    s = lambda t: show(t, abbrev)
    if isinstance(A, Prime):
        return f"{s(A.lhs)} = {s(A.rhs)}"
    if isinstance(A, Not):
        return f"~{_atom(A.body, abbrev)}"
    if isinstance(A, BINARY):
        op = {And: "&", Or: "|", Implies: "->"}[type(A)]
        return f"{_atom(A.left, abbrev)} {op} {_atom(A.right, abbrev)}"
    q = "forall" if isinstance(A, Forall) else "exists"
    return f"{q} {A.var.name}:{A.var.type}. {show_formula(A.body, abbrev)}"


def _atom(A: Formula, abbrev) -> str:
    text = show_formula(A, abbrev)
    return text if isinstance(A, (Prime, Not)) else f"({text})"


# -- parsing --------------------------------------------------------------------------

class _FormulaParser:
    def __init__(self, src: str, defs):
        self.ts = Tokens(tokenize(src))
        self.defs = defs

    def formula(self):
        left = self.disj()
        if self.ts.peek() == "->":
            self.ts.next()
            return ("imp", left, self.formula())
        return left

    def disj(self):
        node = self.conj()
        while self.ts.peek() == "|":
            self.ts.next()
            node = ("or", node, self.conj())
        return node

    def conj(self):
        node = self.unary()
        while self.ts.peek() == "&":
            self.ts.next()
            node = ("and", node, self.unary())
        return node

    def unary(self):
        tok = self.ts.peek()
        if tok == "~":
            self.ts.next()
            return ("not", self.unary())
        if tok in ("forall", "exists"):
            self.ts.next()
            name = self.ts.next()
            if not _is_ident(name):
                raise ParseError(f"bad bound variable {name!r}")
            self.ts.expect(":")
            typ = parse_type_tokens(self.ts)
            self.ts.expect(".")
            return (tok, name, typ, self.formula())
        save = self.ts.i
        try:
            lhs = parse_surface(self.ts, self.defs)
            if self.ts.peek() == "=":
                self.ts.next()
                return ("prime", lhs, parse_surface(self.ts, self.defs))
        except ParseError:
            pass
        self.ts.i = save
        if tok == "(":
            self.ts.next()
            node = self.formula()
            self.ts.expect(")")
            return node
        raise ParseError(f"expected a formula at {tok!r}")


def parse_formula(src: str, defs: Optional[Mapping[str, Term]] = None,
                  free_types: Optional[Mapping[str, FiniteType]] = None) -> Formula:
    """Parse ``forall x:T. A``, ``exists``, ``&``, ``|``, ``->``, ``~`` and ``t = s``."""
    p = _FormulaParser(src, arith._LIB if defs is None else defs)
    node = p.formula()
    if not p.ts.done():
        raise ParseError(f"trailing input: {p.ts.peek()!r}")
    el = Elaborator(free_types)

    def infer(n, ctx):
        tag = n[0]
        if tag == "prime":
            for side in n[1:]:
                el.unify(el.infer(side, ctx), GROUND)
        elif tag in ("forall", "exists"):
            infer(n[3], {**ctx, n[1]: el.lift(n[2])})
        else:
            for sub in n[1:]:
                infer(sub, ctx)

    def build(n, ctx):
        tag = n[0]
        if tag == "prime":
            return Prime(el.elaborate(n[1], ctx), el.elaborate(n[2], ctx))
        if tag in ("forall", "exists"):
            v = Var(n[1], n[2])
            cls = Forall if tag == "forall" else Exists
            return cls(v, build(n[3], {**ctx, n[1]: v}))
        if tag == "not":
            return Not(build(n[1], ctx))
        cls = {"and": And, "or": Or, "imp": Implies}[tag]
        return cls(build(n[1], ctx), build(n[2], ctx))

    infer(node, {})
    return check(build(node, {}))


# -- model checking ----------------------------------------------------------------------

@dataclass
class Domains:
    """Finite ranges for quantifiers: numbers, 0/1 oracles of a fixed length, and
    optional explicit lists for higher types."""
    nat: int = 6
    oracle_length: int = 3
    higher: Optional[dict] = None

    def of(self, t: FiniteType):
        if t == GROUND:
            return range(self.nat)
        if t == TYPE1:
            return [tuple(s) for s in product((0, 1), repeat=self.oracle_length)]
        if self.higher and t in self.higher:
            return self.higher[t]
        raise NonArithmetical(f"no finite domain for type {t}")


def holds(A: Formula, env: Optional[Mapping] = None, domains: Domains = Domains(),
          machine: Optional[Machine] = None) -> bool:
    """Truth of ``A`` with quantifiers ranging over ``domains``."""
    m = machine or Machine(EvalBudget())
    env = {getattr(k, "name", k): v for k, v in (env or {}).items()}
    return _holds(A, env, domains, m)


def _holds(A, env, dom, m) -> bool:
    if isinstance(A, Prime):
        return m.value(A.lhs, env) == m.value(A.rhs, env)
    if isinstance(A, And):
        return _holds(A.left, env, dom, m) and _holds(A.right, env, dom, m)
    if isinstance(A, Or):
        return _holds(A.left, env, dom, m) or _holds(A.right, env, dom, m)
    if isinstance(A, Implies):
        return (not _holds(A.left, env, dom, m)) or _holds(A.right, env, dom, m)
    if isinstance(A, Not):
        return not _holds(A.body, env, dom, m)
    vals = dom.of(A.var.type)
    test = all if isinstance(A, Forall) else any
    return test(_holds(A.body, {**env, A.var.name: v}, dom, m) for v in vals)


# -- extensionality --------------------------------------------------------------------------

def ext_eq(rho: FiniteType, x: Term, y: Term, depth: int = 1) -> Formula:
    """Hereditary extensional equality at type ``rho``."""
    if rho == GROUND:
        return Prime(x, y)
    taken = {v.name for v in free_vars(x) | free_vars(y)}
    u = Var(fresh_name(f"u{depth}", taken), rho.argument)
    v = Var(fresh_name(f"v{depth}", taken | {u.name}), rho.argument)
    xu, xv, yv = App(x, u), App(x, v), App(y, v)
    return Forall(u, Forall(v, Implies(ext_eq(rho.argument, u, v, depth + 1),
                                       And(ext_eq(rho.result, xu, xv, depth + 1),
                                           ext_eq(rho.result, xu, yv, depth + 1)))))


def elim_ext(A: Formula) -> Formula:
    """Relativize every quantifier to hereditarily extensional objects."""
    if isinstance(A, Prime):
        return A
    if isinstance(A, BINARY):
        return type(A)(elim_ext(A.left), elim_ext(A.right))
    if isinstance(A, Not):
        return Not(elim_ext(A.body))
    x = A.var
    rel = ext_eq(x.type, x, x)
    if isinstance(A, Forall):
        return Forall(x, Implies(rel, elim_ext(A.body)))
    return Exists(x, And(rel, elim_ext(A.body)))


def erase_relativizers(A: Formula) -> Formula:
    """Inverse of :func:`elim_ext` on its image."""
    if isinstance(A, Prime):
        return A
    if isinstance(A, BINARY):
        return type(A)(erase_relativizers(A.left), erase_relativizers(A.right))
    if isinstance(A, Not):
        return Not(erase_relativizers(A.body))
    x, body = A.var, A.body
    rel = ext_eq(x.type, x, x)
    if isinstance(A, Forall) and isinstance(body, Implies) and body.left == rel:
        return Forall(x, erase_relativizers(body.right))
    if isinstance(A, Exists) and isinstance(body, And) and body.left == rel:
        return Exists(x, erase_relativizers(body.right))
    return type(A)(x, erase_relativizers(body))


# -- collapse of number quantifiers ----------------------------------------------------------

def characteristic(A: Formula) -> Term:
    """A type-0 term that is 0 exactly when the quantifier-free ``A`` holds."""
    L = arith.lib
    if isinstance(A, Prime):
        if numeral_value(A.rhs) == 0:
            return A.lhs
        if numeral_value(A.lhs) == 0:
            return A.rhs
        return apply(L("dist"), A.lhs, A.rhs)
    if isinstance(A, And):
        return apply(L("add"), characteristic(A.left), characteristic(A.right))
    if isinstance(A, Or):
        return apply(L("min"), characteristic(A.left), characteristic(A.right))
    if isinstance(A, Not):
        return apply(L("sub"), numeral(1), characteristic(A.body))
    if isinstance(A, Implies):
        return apply(L("min"), apply(L("sub"), numeral(1), characteristic(A.left)),
                     characteristic(A.right))
    raise NonArithmetical("characteristic term of a quantified formula")


def qf_collapse(A: Formula) -> Formula:
    """Replace number quantifiers by Mu, innermost first; quantifier-free parts stay."""
    if isinstance(A, Prime):
        return A
    if isinstance(A, BINARY):
        return type(A)(qf_collapse(A.left), qf_collapse(A.right))
    if isinstance(A, Not):
        return Not(qf_collapse(A.body))
    if A.var.type != GROUND:
        raise NonArithmetical(f"quantifier over {A.var.name} of type {A.var.type}")
    chi = characteristic(qf_collapse(A.body))
    n = A.var
    if isinstance(A, Exists):
        witness = App(MU_C, eta_contract(Lam(n, chi)))
    else:
        witness = App(MU_C, Lam(n, apply(arith.lib("sub"), numeral(1), chi)))
    return Prime(substitute(chi, {n: witness}), ZERO)


# -- negative translation and Dialectica shapes -------------------------------------------------

def rename_apart(A: Formula, taken: Optional[set] = None) -> Formula:
    """Give every bound variable a name distinct from all other variables."""
    taken = set(taken or ()) | {v.name for v in formula_free_vars(A)}

    def go(B):
        if isinstance(B, Prime):
            return B
        if isinstance(B, BINARY):
            return type(B)(go(B.left), go(B.right))
        if isinstance(B, Not):
            return Not(go(B.body))
        name = fresh_name(B.var.name, taken)
        taken.add(name)
        v = Var(name, B.var.type)
        body = subst(B.body, {B.var: v}) if v != B.var else B.body
        return type(B)(v, go(body))
    return go(A)


def kuroda(A: Formula, leading: bool = True) -> Formula:
    """Kuroda's negative translation: double negation after every universal
    quantifier and, when ``leading``, in front of the whole formula."""
    def star(B):
        if isinstance(B, Prime):
            return B
        if isinstance(B, BINARY):
            return type(B)(star(B.left), star(B.right))
        if isinstance(B, Not):
            return Not(star(B.body))
        if isinstance(B, Forall):
            return Forall(B.var, Not(Not(star(B.body))))
        return Exists(B.var, star(B.body))
    body = star(A)
    return Not(Not(body)) if leading else body


def simplify_negations(A: Formula) -> Formula:
    """Drop double negations in front of quantifier-free formulas and in
    front of universal formulas whose body is itself doubly negated."""
    if isinstance(A, Prime):
        return A
    if isinstance(A, BINARY):
        return type(A)(simplify_negations(A.left), simplify_negations(A.right))
    if isinstance(A, Not):
        inner = simplify_negations(A.body)
        if isinstance(inner, Not):
            core = inner.body
            if is_qf(core):
                return core
            if isinstance(core, Forall) and isinstance(core.body, Not) and isinstance(core.body.body, Not):
                return core
        return Not(inner)
    return type(A)(A.var, simplify_negations(A.body))


@dataclass(frozen=True)
class DialecticaShape:
    exists: tuple      # Vars
    forall: tuple      # Vars
    matrix: Formula

    def types(self) -> tuple:
        return tuple(v.type for v in self.exists), tuple(v.type for v in self.forall)

    def show(self, abbrev: Optional[dict] = None) -> str:
        ex = " ".join(f"{v.name}:{v.type}" for v in self.exists) or "-"
        fa = " ".join(f"{v.name}:{v.type}" for v in self.forall) or "-"
        return f"exists {ex}\nforall {fa}\nmatrix {show_formula(self.matrix, abbrev)}"

    def instance(self, witnesses: Mapping[str, object]) -> Formula:
        """The universal closure of the matrix (existentials left free for ``witnesses``)."""
        out = self.matrix
        for v in reversed(self.forall):
            out = Forall(v, out)
        return out


class _Names:
    def __init__(self, taken):
        self.taken = set(taken)

    def __call__(self, base: str, typ: FiniteType) -> Var:
        name = fresh_name(base, self.taken)
        self.taken.add(name)
        return Var(name, typ)


def _functionalize(xs, deps, names: _Names, M: Formula, extra_deps=()):
    """Replace each x in ``xs`` by a functional of ``deps`` applied to them."""
    dep_list = list(deps) + list(extra_deps)
    out, mapping = [], {}
    for x in xs:
        if not dep_list:
            out.append(x)
            continue
        F = names(x.name[:1].upper() + x.name[1:] if x.name[:1].islower() else x.name + "'",
                  arrows([d.type for d in dep_list], x.type))
        out.append(F)
        mapping[x] = apply(F, *dep_list)
    return out, subst(M, mapping)


def _dialectica(A: Formula, names: _Names):
    if isinstance(A, Prime):
        return [], [], A
    if isinstance(A, And):
        xa, ya, ma = _dialectica(A.left, names)
        xb, yb, mb = _dialectica(A.right, names)
        return xa + xb, ya + yb, And(ma, mb)
    if isinstance(A, Or):
        xa, ya, ma = _dialectica(A.left, names)
        xb, yb, mb = _dialectica(A.right, names)
        z = names("z", GROUND)
        zero = Prime(z, ZERO)
        return [z] + xa + xb, ya + yb, And(Implies(zero, ma), Implies(Not(zero), mb))
    if isinstance(A, Exists):
        xb, yb, mb = _dialectica(A.body, names)
        return [A.var] + xb, yb, mb
    if isinstance(A, Forall):
        xb, yb, mb = _dialectica(A.body, names)
        xs, m = _functionalize(xb, [A.var], names, mb)
        return xs, [A.var] + yb, m
    if isinstance(A, Not):
        xa, ya, ma = _dialectica(A.body, names)
        gs, m = _functionalize(ya, xa, names, ma)
        return gs, xa, Not(m)
    xa, ya, ma = _dialectica(A.left, names)
    xb, yb, mb = _dialectica(A.right, names)
    fs, mb2 = _functionalize(xb, xa, names, mb)
    gs, ma2 = _functionalize(ya, xa, names, ma, extra_deps=yb)
    return fs + gs, xa + yb, Implies(ma2, mb2)


def dialectica(A: Formula) -> DialecticaShape:
    """Goedel's interpretation of ``A`` itself (no negative translation)."""
    A = rename_apart(A)
    names = _Names({v.name for v in formula_free_vars(A)} | bound_names(A))
    xs, ys, m = _dialectica(A, names)
    return DialecticaShape(tuple(xs), tuple(ys), simplify_negations(m))


def nd_interpret(A: Formula) -> DialecticaShape:
    """Shape of the Dialectica interpretation of the Kuroda translation of ``A``.
    The outermost double negation is dropped and double negations in front of
    quantifier-free formulas are removed; both are classically harmless and
    keep the witnessing types those of the original formula."""
    return dialectica(simplify_negations(kuroda(A, leading=False)))


# -- prenex normal form ---------------------------------------------------------------------------

def _flip(prefix):
    return [("exists" if q == "forall" else "forall", v) for q, v in prefix]


def _merge(p, q):
    out, p, q = [], list(p), list(q)
    kind = "forall"
    while p or q:
        for side in (p, q):
            while side and side[0][0] == kind:
                out.append(side.pop(0))
        kind = "exists" if kind == "forall" else "forall"
    return out


def _prenex(A: Formula):
    if isinstance(A, Prime):
        return [], A
    if isinstance(A, Not):
        p, m = _prenex(A.body)
        return _flip(p), Not(m)
    if isinstance(A, Forall):
        p, m = _prenex(A.body)
        return [("forall", A.var)] + p, m
    if isinstance(A, Exists):
        p, m = _prenex(A.body)
        return [("exists", A.var)] + p, m
    pa, ma = _prenex(A.left)
    pb, mb = _prenex(A.right)
    if isinstance(A, Implies):
        pa = _flip(pa)
    return _merge(pa, pb), type(A)(ma, mb)


def prenex(A: Formula) -> Formula:
    """Classical prenex form; independent quantifier blocks are interleaved
    universal block first, so alternations are not multiplied."""
    prefix, matrix = _prenex(rename_apart(A))
    out = matrix
    for q, v in reversed(prefix):
        out = (Forall if q == "forall" else Exists)(v, out)
    return out


# -- the Skolemized measure axiom --------------------------------------------------------------

TYPE3 = Arrow(Arrow(TYPE1, GROUND), TYPE1)


def skolemize_measure_axiom(collapse: bool = True) -> Formula:
    """The measure axiom with its selector, as a formula in free ``leb``, ``eps``
    (type 3) and ``X`` (type 2).  Reals are compared through their canonical
    codes n -> floor(2^n x); the family (X_i) is read off X as X_i f = X(i+1 :: f)."""
    from .measure import basic_open_coded, countable_union, disjointify_indexed

    L = arith.lib
    leb, eps = Var("leb", TYPE3), Var("eps", TYPE3)
    X = Var("X", Arrow(TYPE1, GROUND))
    n, k, m, s, i, a, j = (Var(c, GROUND) for c in ("n", "k", "m", "s", "i", "a", "j"))
    f = Var("f", TYPE1)
    cond = apply(Cond(), j, App(S, i), App(f, App(L("pred"), j)))
    fam = Lam(i, Lam(f, App(X, Lam(j, cond))))
    disj = disjointify_indexed(fam, compiled=False)
    union = countable_union(disj, compiled=False)
    lebX = lambda Y, p: apply(leb, Y, p)

    nonneg = Forall(n, Prime(apply(L("sub"), ZERO, lebX(X, n)), ZERO))
    witness = Implies(Not(Prime(App(X, App(eps, X)), ZERO)), Forall(n, Prime(lebX(X, n), ZERO)))

    p = apply(L("add"), n, m)
    partial = apply(R0, m, ZERO, Lam(a, Lam(i, apply(L("add"), a, lebX(App(disj, i), p)))))
    gap = apply(L("dist"), apply(L("shiftr"), lebX(union, p), m), apply(L("shiftr"), partial, m))
    sigma = Forall(n, Exists(k, Forall(m, Implies(Prime(apply(L("sub"), k, m), ZERO),
                                                  Prime(apply(L("sub"), gap, numeral(2)), ZERO)))))

    basic = Forall(s, Forall(n, Prime(lebX(App(basic_open_coded(compiled=False), s), n),
                                      apply(L("shiftr"), apply(L("shiftl"), numeral(1), n),
                                            App(L("lth"), s)))))

    sgX = Lam(f, App(L("sg"), App(X, f)))
    x = Var("x", GROUND)
    Xsg = Lam(f, App(X, Lam(x, App(L("sg"), App(f, x)))))
    coding = And(Forall(n, Prime(lebX(sgX, n), lebX(Xsg, n))), Forall(n, Prime(lebX(Xsg, n), lebX(X, n))))

    A = conj(And(nonneg, witness), sigma, basic, coding)
    return qf_collapse(A) if collapse else A

