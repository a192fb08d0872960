"""Budgeted call-by-value evaluation of terms.

Terms are compiled once to Python closures; function values are Python
callables.  ``Mu`` is the canonical least-zero search, bounded by the budget.
When the bound is hit without a zero the result is 0 and the evaluation is
flagged incomplete.

Known closed recursor step functions (addition, halving, ...) may be
registered as *jets*: ``R0 x y z`` with such a ``z`` is then computed by a
closed form.  Jets never change results; tests compare both paths.
"""
from __future__ import annotations

from typing import Callable, Mapping, NamedTuple, Optional

from .errors import BudgetExhausted, UnassignedVariable, UnsupportedConstant
from .terms import (COND, EPS, LEB, MU, PI, REC0, SIGMA, SUCC, ZERO_K, App, Const,
                    EvalBudget, Lam, Term, Var, free_vars, spine)


class Evaluation(NamedTuple):
    value: object
    incomplete: bool


_JETS: dict = {}
_CLOSED_KEYS: dict = {}


def closed_key(t: Term):
    """``alpha_key`` of a closed term, memoized; None for open terms."""
    if t._fv:
        return None
    k = _CLOSED_KEYS.get(t)
    if k is None:
        if len(_CLOSED_KEYS) > 200_000:
            _CLOSED_KEYS.clear()
        k = _CLOSED_KEYS[t] = alpha_key(t)
    return k


def alpha_key(t: Term, bound=()):
    if bound and not t._fv and not isinstance(t, Const):
        return closed_key(t)
    if isinstance(t, Var):
        for i, b in enumerate(reversed(bound)):
            if b == t:
                return ("B", i)
        return ("F", t.name, t.type)
    if isinstance(t, Const):
        return t
    if isinstance(t, App):
        return ("A", alpha_key(t.fun, bound), alpha_key(t.arg, bound))
    return ("L", t.var.type, alpha_key(t.body, bound + (t.var,)))


def register_jet(step: Term, closed_form: Callable[[int, int], int]) -> None:
    """Compute ``R0 x y step`` as ``closed_form(x, y)``."""
    _JETS[alpha_key(step)] = closed_form


def to_oracle(v):
    if callable(v):
        return v
    if isinstance(v, Mapping):
        return lambda n: v.get(n, 0)
    seq = tuple(v)
    return lambda n: seq[n] if n < len(seq) else 0


class Machine:
    """Holds the budget, the counters, and the interpretations of Leb/Eps."""

    def __init__(self, budget: EvalBudget = EvalBudget(), leb=None, eps=None, jets: bool = True):
        from . import arith  # noqa: F401  (registers jets)

        self.budget = budget
        self.leb = leb
        self.eps = eps
        self.jets = jets
        self.steps = 0
        self.incomplete = False
        self._cache: dict = {}

    def reset(self) -> None:
        self.steps = 0
        self.incomplete = False

    def tick(self, n: int = 1) -> None:
        self.steps += n
        if self.steps > self.budget.max_steps:
            raise BudgetExhausted(f"step budget {self.budget.max_steps} exhausted")

    def mu(self, f) -> int:
        for n in range(self.budget.mu_bound):
            if f(n) == 0:
                return n
        self.incomplete = True
        return 0

    # -- compilation --------------------------------------------------------

    def compile(self, t: Term):
        fn = self._cache.get(t)
        if fn is None:
            fn = self._comp(t)
            self._cache[t] = fn
        return fn

    def _const(self, c: Const):
        k = c.kind
        m = self
        if k == ZERO_K:
            return 0
        if k == SUCC:
            return lambda n: n + 1
        if k == PI:
            return lambda x: lambda y: x
        if k == SIGMA:
            return lambda x: lambda y: lambda z: x(z)(y(z))
        if k == REC0:
            def rec(x):
                def with_y(y):
                    def with_z(z):
                        acc = y
                        for i in range(x):
                            m.tick()
                            acc = z(acc)(i)
                        return acc
                    return with_z
                return with_y
            return rec
        if k == COND:
            return lambda c: lambda x: lambda y: x if c == 0 else y
        if k == MU:
            return m.mu
        if k == LEB:
            if m.leb is None:
                raise UnsupportedConstant("no interpretation supplied for Leb")
            return lambda X: m.leb(X, m)
        if k == EPS:
            if m.eps is None:
                raise UnsupportedConstant("no interpretation supplied for Eps")
            return lambda X: m.eps(X, m)
        raise AssertionError(k)

    def _comp(self, t: Term):
        m = self
        if self.jets:
            from .arith import VALUE_JETS_ALPHA, VALUE_JETS_KERNEL
            if not isinstance(t, Lam):
                native = VALUE_JETS_KERNEL.get(t)
            else:
                key = closed_key(t)
                native = None if key is None else VALUE_JETS_ALPHA.get(key)
            if native is not None:
                return lambda env: native
        if isinstance(t, Var):
            name = t.name
            return lambda env: env[name]
        if isinstance(t, Const):
            if t.kind in (LEB, EPS, MU):
                return lambda env: m._const(t)
            v = self._const(t)
            return lambda env: v
        if isinstance(t, Lam):
            body = self.compile(t.body)
            name = t.var.name

            def closure(env):
                return lambda v: body({**env, name: v})
            return closure
        if isinstance(t, App):
            if isinstance(t.fun, Const) and t.fun.kind in (LEB, EPS) and not t.arg._fv:
                # a closed set code denotes one set: interpret it once
                cf, ca = self.compile(t.fun), self.compile(t.arg)
                memo = []

                def once(env):
                    if not memo:
                        memo.append(cf(env)(ca(env)))
                    return memo[0]
                return once
            if self.jets:
                head, args = spine(t)
                if isinstance(head, Const) and head.kind == REC0 and len(args) == 3:
                    key = closed_key(args[2])
                    jet = None if key is None else _JETS.get(key)
                    if jet is not None:
                        cx, cy = self.compile(args[0]), self.compile(args[1])

                        def jetted(env):
                            m.tick()
                            return jet(cx(env), cy(env))
                        return jetted
            cf, ca = self.compile(t.fun), self.compile(t.arg)

            def run(env):
                m.steps += 1
                if m.steps > m.budget.max_steps:
                    raise BudgetExhausted(f"step budget {m.budget.max_steps} exhausted")
                return cf(env)(ca(env))
            return run
        raise TypeError(t)

    def value(self, t: Term, env: Optional[Mapping] = None):
        env = {getattr(k, "name", k): x for k, x in (env or {}).items()}
        for v in free_vars(t):
            if v.name not in env:
                raise UnassignedVariable(v.name)
        env = {k: (to_oracle(x) if not isinstance(x, int) else x) for k, x in env.items()}
        return self.compile(t)(env)


def evaluate(t: Term, env: Optional[Mapping] = None, budget: EvalBudget = EvalBudget(),
             leb=None, eps=None) -> Evaluation:
    m = Machine(budget, leb=leb, eps=eps)
    v = m.value(t, env)
    return Evaluation(v, m.incomplete)


def mu_eval(f, budget: EvalBudget = EvalBudget()) -> Evaluation:
    """Least ``x < mu_bound`` with ``f(x) = 0``; ``f`` is a type-1 term or a callable."""
    m = Machine(budget)
    fn = m.value(f) if isinstance(f, Term) else f
    v = m.mu(fn)
    return Evaluation(v, m.incomplete)
