import pytest
from hypothesis import given, settings, strategies as st

from corpus import P
from lebmine import arith
from lebmine.errors import BudgetExhausted, IllTyped, ParseError, UnassignedVariable
from lebmine.evaluate import Machine, evaluate, mu_eval
from lebmine.nbe import nbe
from lebmine.terms import (NORMAL, R0, S, ZERO, App, Cond, EvalBudget, Pi, Sigma, Var,
                           apply, compile_lambdas, fragment, normalize, numeral,
                           numeral_value, reduce_step, typecheck)
from lebmine.types import GROUND, TYPE1, Arrow, degree, pure

N = GROUND


def test_degrees():
    assert degree(GROUND) == 0
    assert [degree(pure(n)) for n in range(5)] == [0, 1, 2, 3, 4]
    assert degree(Arrow(pure(2), pure(1))) == 3
    assert pure(3) == Arrow(pure(2), GROUND)


def test_typecheck_examples():
    assert typecheck(S) == pure(1)
    assert typecheck(App(S, ZERO)) == GROUND
    with pytest.raises(IllTyped):
        typecheck(App(ZERO, ZERO))


def test_reduce_step_examples():
    y, z = Var("y", N), Var("z", Arrow(N, Arrow(N, N)))
    assert reduce_step(apply(R0, ZERO, y, z)) == y
    a, b = Var("a", N), Var("b", N)
    assert reduce_step(apply(Cond(N), App(S, ZERO), a, b)) == b
    assert reduce_step(Var("x", N)) is NORMAL


def test_subject_reduction_on_library():
    for name in ("add", "mul", "sub", "max"):
        t = apply(arith.kernel(name), numeral(3), numeral(2))
        ty = typecheck(t)
        while (r := reduce_step(t)) is not NORMAL:
            assert typecheck(r) == ty
            t = r


def test_normalize_examples():
    a, b, c = Var("a", N), Var("b", N), Var("c", N)
    k = Sigma(N, N, N)
    sk = apply(k, Pi(N, N), Pi(N, N))
    assert normalize(App(sk, c)) == c
    nf = normalize(apply(arith.kernel("add"), numeral(2), numeral(3)))
    assert normalize(nf) == nf and numeral_value(nf) == 5
    assert normalize(a) == a
    step = compile_lambdas(P("(lam c:0 (lam i:0 (S c)))"))
    assert numeral_value(normalize(apply(R0, numeral(2), ZERO, step))) == 2
    with pytest.raises(BudgetExhausted):
        normalize(apply(arith.kernel("mul"), numeral(4), numeral(4)), EvalBudget(max_steps=10))
    del b


def test_evaluate_examples():
    f = Var("f", TYPE1)
    assert evaluate(numeral(2)).value == 2
    assert evaluate(App(f, App(S, ZERO)), {"f": [0] * 5}).value == 0
    r = evaluate(P("(Mu f)"), {"f": lambda n: abs(n - 3)})
    assert r == (3, False)
    with pytest.raises(UnassignedVariable):
        evaluate(App(f, ZERO))


def test_mu_eval_examples():
    assert mu_eval(P("(lam n:0 0)")) == (0, False)
    assert mu_eval(P("(lam n:0 (sub 3 n))")) == (3, False)
    assert mu_eval(P("(lam n:0 (S 0))"), EvalBudget(mu_bound=10_000)) == (0, True)


def test_budget_positive():
    with pytest.raises(ValueError):
        EvalBudget(max_steps=0)
    with pytest.raises(ValueError):
        EvalBudget(mu_bound=-1)


def test_parser_sugar_and_errors():
    assert P("3", compile=True) == numeral(3)
    assert typecheck(P("(lam x:(0->0) (x 0))")) == pure(2)
    assert typecheck(P("(lam X:2 (X (lam n:0 n)))")) == pure(3)
    for bad in ["(S 0", "(lam x 0)", "(R1 0 0 0)", "(0 0)", "$"]:
        with pytest.raises((ParseError, IllTyped)):
            P(bad)


def test_fragment_tags():
    assert fragment(P("(lam f:1 (f 0))")) == "T0"
    assert fragment(P("(Mu (lam n:0 n))")) == "T0[mu]"
    assert fragment(P("(Leb (lam f:1 (f 0)) 1)")) not in ("T0", "T0[mu]")


# -- properties ------------------------------------------------------------------------

_OPS = {"add": lambda a, b: a + b, "mul": lambda a, b: a * b, "sub": lambda a, b: max(a - b, 0),
        "max": max, "min": min, "dist": lambda a, b: abs(a - b)}


def closed_nat():
    """Closed type-0 expressions paired with their intended value."""
    leaf = st.integers(0, 4).map(lambda n: (str(n), n))

    def extend(inner):
        return st.one_of(
            st.tuples(st.sampled_from(sorted(_OPS)), inner, inner).map(
                lambda t: (f"({t[0]} {t[1][0]} {t[2][0]})", _OPS[t[0]](t[1][1], t[2][1]))),
            inner.map(lambda x: (f"(halve {x[0]})", x[1] // 2)),
            st.tuples(inner, inner, inner).map(
                lambda t: (f"(Cond {t[0][0]} {t[1][0]} {t[2][0]})", t[1][1] if t[0][1] == 0 else t[2][1])),
            st.tuples(st.integers(0, 3), inner).map(
                lambda t: (f"(R0 {t[0]} {t[1][0]} (lam c:0 (lam i:0 (add c i))))",
                           t[1][1] + sum(range(t[0])))),
            inner.map(lambda x: (f"(S {x[0]})", x[1] + 1)),
        )
    return st.recursive(leaf, extend, max_leaves=6)


@settings(max_examples=60, deadline=None)
@given(closed_nat())
def test_confluence_at_type0(case):
    src, expected = case
    t = P(src, compile=True)
    assert Machine(jets=True).value(t) == expected
    assert Machine(jets=False).value(t) == expected
    assert numeral_value(nbe(t)) == expected
    if expected < 40:
        assert numeral_value(normalize(t, EvalBudget(max_steps=200_000))) == expected


CONTEXTS = ["(add X 3)", "(mul X (f 1))", "(Cond (f 0) X 7)", "(R0 2 X (lam c:0 (lam i:0 (add c (f i)))))"]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CONTEXTS), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3),
       st.lists(st.integers(0, 2), min_size=4, max_size=4))
def test_sub_rules_observational(ctx, u, a, b, oracle):
    step = "(lam c:0 (lam i:0 (add c (S i))))"
    pairs = [
        (f"(Pi {a} {b})", f"{a}"),
        (f"(Sigma (lam x:0 (lam y:0 (add x y))) (lam x:0 (S x)) {a})", f"(add {a} (S {a}))"),
        (f"(R0 0 {a} {step})", f"{a}"),
        (f"(R0 (S {u}) {a} {step})", f"({step} (R0 {u} {a} {step}) {u})"),
        (f"(Cond 0 {a} {b})", f"{a}"),
        (f"(Cond (S {u}) {a} {b})", f"{b}"),
    ]
    for lhs, rhs in pairs:
        vl = evaluate(P(ctx.replace("X", lhs), compile=True), {"f": oracle}).value
        vr = evaluate(P(ctx.replace("X", rhs), compile=True), {"f": oracle}).value
        assert vl == vr


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=12))
def test_mu_equation(values):
    fn = lambda n: values[n] if n < len(values) else 1  # noqa: E731
    x, incomplete = mu_eval(fn, EvalBudget(mu_bound=50))
    if not incomplete:
        assert fn(x) == 0 and all(fn(y) != 0 for y in range(x))
    else:
        assert 0 not in values
