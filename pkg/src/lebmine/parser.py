"""Textual term syntax.

    type ::= "0" | "(" type "->" type ")"
    term ::= ident | "0" | "S" | "Pi" | "Sigma" | "R0" | "Cond" | "Mu" | "Leb" | "Eps"
           | "(" term term ")" | "(lam " ident ":" type " " term ")"

Whitespace is insignificant.  Extensions accepted on input: decimal numerals,
``(f a b c)`` for left-nested application, ``n`` as a type for the pure type
``n``, and unparenthesised right-associative arrows.  Type parameters of
``Pi``/``Sigma``/``Cond`` and types of free variables are inferred by
unification; anything left undetermined defaults to ``0``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import IllTyped, ParseError
from .terms import (COND, CONSTANT_KINDS, PI, SIGMA, App, Const, Lam, Term, Var,
                    compile_lambdas, numeral, typecheck)
from .types import GROUND, Arrow, FiniteType, pure

_TOKEN = re.compile(r"\s*(->|[()]|:|\.|&|\||~|=|[A-Za-z][A-Za-z0-9_']*|\d+)")
KEYWORDS = {"lam", "forall", "exists"}


def tokenize(src: str) -> list[str]:
    src = "\n".join(line.split("#", 1)[0] for line in src.splitlines())
    pos, out = 0, []
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            return out
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r} at offset {pos}")
        out.append(m.group(1))
        pos = m.end()


class Tokens:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self, k: int = 0) -> Optional[str]:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise ParseError(f"expected {tok!r}, got {got!r}")

    def done(self) -> bool:
        return self.i >= len(self.toks)


# -- surface syntax ---------------------------------------------------------

@dataclass
class SVar:
    name: str


@dataclass
class SConst:
    kind: str
    params: tuple = ()


@dataclass
class SNum:
    value: int


@dataclass
class SApp:
    fun: object
    arg: object


@dataclass
class SLam:
    name: str
    type: FiniteType
    body: object


@dataclass
class STerm:
    term: Term


def parse_type_tokens(ts: Tokens) -> FiniteType:
    tok = ts.next()
    if tok == "(":
        t = parse_type_tokens(ts)
        ts.expect(")")
    elif tok.isdigit():
        t = pure(int(tok))
    else:
        raise ParseError(f"bad type token {tok!r}")
    if ts.peek() == "->":
        ts.next()
        return Arrow(t, parse_type_tokens(ts))
    return t


def parse_type(src: str) -> FiniteType:
    ts = Tokens(tokenize(src))
    t = parse_type_tokens(ts)
    if not ts.done():
        raise ParseError(f"trailing input after type: {ts.peek()!r}")
    return t


def parse_surface(ts: Tokens, defs: Mapping[str, Term]):
    tok = ts.next()
    if tok == "(":
        if ts.peek() == "lam":
            ts.next()
            name = ts.next()
            if not _is_ident(name):
                raise ParseError(f"bad binder {name!r}")
            ts.expect(":")
            typ = parse_type_tokens(ts)
            body = parse_surface(ts, defs)
            ts.expect(")")
            return SLam(name, typ, body)
        node = parse_surface(ts, defs)
        if ts.peek() == ")":
            ts.next()
            return node
        while ts.peek() != ")":
            if ts.peek() is None:
                raise ParseError("unbalanced parenthesis")
            node = SApp(node, parse_surface(ts, defs))
        ts.next()
        return node
    if tok.isdigit():
        return SNum(int(tok))
    if tok in CONSTANT_KINDS:
        return SConst(tok)
    if re.fullmatch(r"R\d+", tok):
        raise ParseError(f"recursor {tok} not available: only R0 is supported")
    if tok in defs:
        return STerm(defs[tok])
    if _is_ident(tok):
        return SVar(tok)
    raise ParseError(f"unexpected token {tok!r}")


def _is_ident(tok: str) -> bool:
    return bool(re.fullmatch(r"[A-Za-z][A-Za-z0-9_']*", tok)) and tok not in KEYWORDS


# -- inference --------------------------------------------------------------

class _TV:
    __slots__ = ("id",)

    def __init__(self, i):
        self.id = i


class Elaborator:
    """Infers types for surface terms sharing one table of free variables."""

    def __init__(self, free_types: Optional[Mapping[str, FiniteType]] = None):
        self.subst: dict[int, object] = {}
        self.count = 0
        self.free: dict[str, object] = dict(free_types or {})

    def tv(self):
        self.count += 1
        return _TV(self.count)

    def find(self, t):
        while isinstance(t, _TV) and t.id in self.subst:
            t = self.subst[t.id]
        return t

    def occurs(self, v: _TV, t) -> bool:
        t = self.find(t)
        if isinstance(t, _TV):
            return t.id == v.id
        if isinstance(t, tuple):
            return self.occurs(v, t[0]) or self.occurs(v, t[1])
        return False

    def lift(self, t: FiniteType):
        if isinstance(t, Arrow):
            return (self.lift(t.argument), self.lift(t.result))
        return GROUND

    def unify(self, a, b) -> None:
        a, b = self.find(a), self.find(b)
        if isinstance(a, _TV) and isinstance(b, _TV) and a.id == b.id:
            return
        if isinstance(a, _TV):
            if self.occurs(a, b):
                raise IllTyped("infinite type")
            self.subst[a.id] = b
            return
        if isinstance(b, _TV):
            self.unify(b, a)
            return
        if isinstance(a, tuple) and isinstance(b, tuple):
            self.unify(a[0], b[0])
            self.unify(a[1], b[1])
            return
        if a is GROUND and b is GROUND:
            return
        raise IllTyped("type mismatch")

    def resolve(self, t) -> FiniteType:
        t = self.find(t)
        if isinstance(t, tuple):
            return Arrow(self.resolve(t[0]), self.resolve(t[1]))
        return GROUND

    def arrow(self, *ts):
        t = ts[-1]
        for a in reversed(ts[:-1]):
            t = (a, t)
        return t

    def infer(self, node, ctx: dict):
        if isinstance(node, SVar):
            if node.name in ctx:
                return ctx[node.name]
            if node.name not in self.free:
                self.free[node.name] = self.tv()
            elif isinstance(self.free[node.name], (Arrow, type(GROUND))):
                self.free[node.name] = self.lift(self.free[node.name])
            return self.free[node.name]
        if isinstance(node, SNum):
            return GROUND
        if isinstance(node, STerm):
            return self.lift(typecheck(node.term))
        if isinstance(node, SConst):
            k = node.kind
            if k == PI:
                r, s = self.tv(), self.tv()
                node.params = (r, s)
                return self.arrow(r, s, r)
            if k == SIGMA:
                r, s, t = self.tv(), self.tv(), self.tv()
                node.params = (r, s, t)
                return self.arrow(self.arrow(r, s, t), (r, s), r, t)
            if k == COND:
                r = self.tv()
                node.params = (r,)
                return self.arrow(GROUND, r, r, r)
            return self.lift(typecheck(Const(k)))
        if isinstance(node, SLam):
            body = self.infer(node.body, {**ctx, node.name: self.lift(node.type)})
            return (self.lift(node.type), body)
        if isinstance(node, SApp):
            ft = self.infer(node.fun, ctx)
            at = self.infer(node.arg, ctx)
            res = self.tv()
            try:
                self.unify(ft, (at, res))
            except IllTyped as e:
                raise IllTyped(f"ill-typed application ({e})") from None
            return res
        raise TypeError(node)

    def elaborate(self, node, ctx: dict) -> Term:
        if isinstance(node, SVar):
            if node.name in ctx:
                return ctx[node.name]
            return Var(node.name, self.resolve(self.free[node.name]))
        if isinstance(node, SNum):
            return numeral(node.value)
        if isinstance(node, STerm):
            return node.term
        if isinstance(node, SConst):
            return Const(node.kind, tuple(self.resolve(p) for p in node.params))
        if isinstance(node, SLam):
            v = Var(node.name, node.type)
            return Lam(v, self.elaborate(node.body, {**ctx, node.name: v}))
        if isinstance(node, SApp):
            return App(self.elaborate(node.fun, ctx), self.elaborate(node.arg, ctx))
        raise TypeError(node)


def parse_term(src: str, defs: Optional[Mapping[str, Term]] = None, compile: bool = True,
               free_types: Optional[Mapping[str, FiniteType]] = None) -> Term:
    """Parse and type a term; with ``compile`` the result is a kernel term."""
    ts = Tokens(tokenize(src))
    node = parse_surface(ts, defs or {})
    if not ts.done():
        raise ParseError(f"trailing input: {ts.peek()!r}")
    el = Elaborator(free_types)
    el.infer(node, {})
    t = el.elaborate(node, {})
    typecheck(t)
    return compile_lambdas(t) if compile else t
