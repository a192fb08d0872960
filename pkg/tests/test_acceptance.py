"""Acceptance suite: one test per primary criterion, each printing a PASS/FAIL line."""
import random
import time
from fractions import Fraction
from itertools import product

import pytest

from corpus import FAMILIES, NESTED, P, PIPELINE_TERMS, SET_CODES, cell_src, random_codes
from lebmine.baire import closed_empty, nowhere_dense, symmetric_difference_empty, witness_clopen, witness_complement
from lebmine.continuity import branch_evaluate, static_modulus_bound, uniform_modulus
from lebmine.dyadic import Dyadic
from lebmine.evaluate import Machine, to_oracle
from lebmine.logic import Exists, Forall, Implies, is_qf, nd_interpret, parse_formula, prenex
from lebmine.measure import (ArithSetFamily, basic_open, disjointify, epsilon_select,
                             measure_arithmetical, measure_bruteforce, measure_clopen, member,
                             set_difference, set_intersection, union_all)
from lebmine.normalizer import check_shape, normalize_degree3
from lebmine.pipeline import _apply_value, _args_of, _sample_value, eliminate_lambda
from lebmine.measure import semantic_machine
from lebmine.terms import fragment, typecheck

RANDOM_CODES = random_codes(60, seed=2024)
T0_CORPUS = SET_CODES + RANDOM_CODES


@pytest.fixture
def report(capsys):
    def emit(name, ok, elapsed, limit=None, detail=""):
        within = limit is None or elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        budget = f" (limit {limit:.0f}s)" if limit else ""
        with capsys.disabled():
            print(f"\n[{status}] {name}: {elapsed:.2f}s{budget} {detail}".rstrip())
        assert ok, detail
        assert within, f"took {elapsed:.1f}s, limit {limit}s"
    return emit


def test_basic_open_axiom(report):
    t0 = time.perf_counter()
    bad = [s for k in range(1, 13) for s in product((0, 1), repeat=k)
           if measure_clopen(basic_open(s)) != Dyadic(1, len(s))]
    report("basic-open axiom |s|<=12", not bad, time.perf_counter() - t0, 60,
           f"{2 ** 13 - 2} strings, {len(bad)} wrong")


def test_oracle_equivalence(report):
    t0 = time.perf_counter()
    wrong, big = [], []
    for src in RANDOM_CODES:
        X = P(src)
        k = uniform_modulus(X)
        if k > 12:
            big.append(src)
        if measure_clopen(X) != measure_bruteforce(X, k):
            wrong.append(src)
    ok = len(RANDOM_CODES) >= 50 and not wrong and not big
    report("oracle equivalence (random T0 codes)", ok, time.perf_counter() - t0, 120,
           f"{len(RANDOM_CODES)} codes, {len(wrong)} disagreements, {len(big)} with modulus>12")


def test_leaf_mass(report):
    t0 = time.perf_counter()
    bad = [src for src in T0_CORPUS if branch_evaluate(P(src)).mass() != 1]
    report("leaf-mass normalization", not bad, time.perf_counter() - t0,
           detail=f"{len(T0_CORPUS)} trees, {len(bad)} off")


def test_sigma_additivity_and_partition(report):
    t0 = time.perf_counter()
    bad = []
    for fam in FAMILIES + [RANDOM_CODES[i:i + 4] for i in range(0, 20, 4)]:
        Xs = [P(s) for s in fam]
        parts = disjointify(Xs)
        total = sum((measure_clopen(X) for X in parts), Dyadic(0))
        if measure_clopen(union_all(Xs)) != total:
            bad.append(fam)
        for i, A in enumerate(parts):
            for B in parts[i + 1:]:
                if measure_clopen(set_intersection(A, B)) != Dyadic(0):
                    bad.append(fam)
    for k in range(13):
        if sum((measure_clopen(basic_open(s)) for s in product((0, 1), repeat=k)), Dyadic(0)) != 1:
            bad.append(f"partition k={k}")
    report("finite sigma-additivity + partition", not bad, time.perf_counter() - t0,
           detail=f"{len(bad)} failures")


EXT_PAIRS = [
    ("(lam f:1 (f 0))", "(lam f:1 (mul (f 0) (f 0)))"),
    ("(lam f:1 (min (f 0) (f 1)))", "(lam f:1 (min (f 1) (f 0)))"),
    ("(lam f:1 (max (f 0) (f 1)))", "(lam f:1 (add (f 0) (f 1)))"),
    ("(lam f:1 (f 2))", "(lam f:1 (sg (f 2)))"),
    ("(lam f:1 (sub 1 (f 0)))", "(lam f:1 (Cond (f 0) 1 0))"),
    ("(lam f:1 0)", "(lam f:1 (sub (f 0) (f 0)))"),
    ("(lam f:1 1)", "(lam f:1 (S (f 3)))"),
    ("(lam f:1 (dist (f 0) (f 1)))", "(lam f:1 (parity (add (f 0) (f 1))))"),
    ("(lam f:1 (f (f 0)))", "(lam f:1 (Cond (f 0) 0 (f 1)))"),
    ("(lam f:1 (add (f 0) (f 1)))", "(lam f:1 (add (f 1) (f 0)))"),
    ("(lam f:1 (R0 3 0 (lam c:0 (lam i:0 (add c (f i))))))", "(lam f:1 (add (f 0) (add (f 1) (f 2))))"),
    ("(lam f:1 (Cond (f 0) (f 1) (f 2)))", "(lam f:1 (add (mul (sub 1 (f 0)) (f 1)) (mul (f 0) (f 2))))"),
    (cell_src((1, 0)), "(lam f:1 (sg (add (f 1) (sub 1 (f 0)))))"),
    ("(lam f:1 (min (f 0) (sub 1 (f 0))))", "(lam f:1 0)"),
    ("(lam f:1 (halve (f 0)))", "(lam f:1 0)"),
    ("(lam f:1 (mul (f 4) (f 5)))", "(lam f:1 (min (f 5) (f 4)))"),
    ("(lam f:1 (sub (f 0) (f 1)))", "(lam f:1 (mul (f 0) (sub 1 (f 1))))"),
    ("(lam f:1 (f (add 1 (f 0))))", "(lam f:1 (Cond (f 0) (f 1) (f 2)))"),
    ("(lam f:1 (parity (f 7)))", "(lam f:1 (f 7))"),
    ("(lam f:1 (shiftr (f 0) 1))", "(lam f:1 (sub (f 0) (f 0)))"),
]


def test_extensionality(report):
    t0 = time.perf_counter()
    bad = []
    for a, b in EXT_PAIRS:
        X, Y = P(a), P(b)
        assert X != Y
        k = max(uniform_modulus(X), uniform_modulus(Y))
        mx, my = Machine().value(X), Machine().value(Y)
        same = all((mx(to_oracle(s)) == 0) == (my(to_oracle(s)) == 0) for s in product((0, 1), repeat=k))
        null = (measure_clopen(set_difference(X, Y)) == 0 and measure_clopen(set_difference(Y, X)) == 0)
        if not (same and null and measure_clopen(X) == measure_clopen(Y)):
            bad.append((a, b))
    report("extensionality of the measure (20 pairs)", len(EXT_PAIRS) == 20 and not bad,
           time.perf_counter() - t0, detail=f"{len(bad)} failures")


def test_epsilon_soundness(report):
    t0 = time.perf_counter()
    bad, positive = [], 0
    for src in T0_CORPUS:
        X = P(src)
        if measure_clopen(X) > 0:
            positive += 1
            if not member(X, Machine().value(epsilon_select(X))).member:
                bad.append(src)
    report("epsilon soundness", not bad, time.perf_counter() - t0,
           detail=f"{positive} non-null codes, {len(bad)} non-members")


def test_modulus_dominance(report):
    t0 = time.perf_counter()
    bad = [src for src in T0_CORPUS if static_modulus_bound(P(src)) < uniform_modulus(P(src))]
    report("static modulus bound dominates", not bad, time.perf_counter() - t0,
           detail=f"{len(T0_CORPUS)} terms, {len(bad)} violations")


def test_normalization_preservation(report):
    t0 = time.perf_counter()
    bad = []
    for src in PIPELINE_TERMS:
        t = P(src)
        nf = normalize_degree3(t)
        if not check_shape(nf):
            bad.append(("shape", src))
        rng = random.Random(src)
        arg_types = _args_of(typecheck(t))
        vt, vn = semantic_machine().value(t), semantic_machine().value(nf.term)
        for _ in range(100):
            args = [_sample_value(a, rng) for a in arg_types]
            if _apply_value(vt, args) != _apply_value(vn, args):
                bad.append(("value", src))
                break
    report("normalization preservation", not bad, time.perf_counter() - t0,
           detail=f"{len(PIPELINE_TERMS)} terms x 100, {len(bad)} failures")


def test_end_to_end_elimination(report):
    t0 = time.perf_counter()
    bad = []
    for src in PIPELINE_TERMS:
        out, rep = eliminate_lambda(P(src), samples=100)
        if fragment(out) not in ("T0", "T0[mu]") or rep.status != "passed" or rep.samples != 100:
            bad.append(src)
    ok = len(PIPELINE_TERMS) == 20 and len(NESTED) >= 3 and not bad
    report("end-to-end elimination (20 terms)", ok, time.perf_counter() - t0, 300,
           f"{len(NESTED)} nested, {len(bad)} failures")


LE = "(2->1)"
DIALECTICA = [
    ("(f 0) = 0", [], []),
    ("forall f:1. exists x:0. (f x) = 0", ["((0->0)->0)"], ["(0->0)"]),
    ("exists x:0. (f x) = 0", ["0"], []),
    ("forall x:0. (f x) = 0", [], ["0"]),
    ("forall x:0. exists y:0. (add x y) = 0", ["(0->0)"], ["0"]),
    ("((f 0) = 0) | ((f 1) = 0)", ["0"], []),
    ("(exists x:0. (f x) = 0) -> (g 0) = 0", [], ["0"]),
    ("forall n:0. exists f:1. (f n) = 0", ["(0->(0->0))"], ["0"]),
    ("~ (forall x:0. (f x) = 0)", ["0"], []),
    (f"((exists l:{LE}. exists e:{LE}. forall X:2. (X (e X)) = 0) -> "
     "(forall f:1. exists g:1. (g (f 0)) = 0))",
     ["((((0->0)->0)->(0->0))->((((0->0)->0)->(0->0))->((0->0)->(0->0))))",
      "((((0->0)->0)->(0->0))->((((0->0)->0)->(0->0))->((0->0)->((0->0)->0))))"],
     ["(((0->0)->0)->(0->0))", "(((0->0)->0)->(0->0))", "(0->0)"]),
]


def test_dialectica_shapes(report):
    t0 = time.perf_counter()
    bad = []
    for src, ex, fa in DIALECTICA:
        sh = nd_interpret(parse_formula(src))
        if [str(v.type) for v in sh.exists] != ex or [str(v.type) for v in sh.forall] != fa \
                or not is_qf(sh.matrix):
            bad.append(src)
    out, heads = prenex(parse_formula(DIALECTICA[-1][0])), []
    while isinstance(out, (Forall, Exists)):
        heads.append(("A" if isinstance(out, Forall) else "E") + out.var.name)
        out = out.body
    if heads != ["Al", "Ae", "Af", "EX", "Eg"] or not isinstance(out, Implies):
        bad.append("prenex")
    report("Dialectica shapes (10 benchmarks)", len(DIALECTICA) == 10 and not bad,
           time.perf_counter() - t0, detail=f"{len(bad)} mismatches")


UNION_FAMILIES = [
    ("U[0^n 1] -> 1",
     "(lam n:0 (lam f:1 (add (R0 n 0 (lam c:0 (lam i:0 (add c (f i))))) (sub 1 (f n)))))", Fraction(1)),
    ("U{f(n)=1} -> 1", "(lam n:0 (lam f:1 (sub 1 (f n))))", Fraction(1)),
    ("U[0^2n 1] -> 2/3",
     "(lam n:0 (lam f:1 (add (R0 (double n) 0 (lam c:0 (lam i:0 (add c (f i))))) (sub 1 (f (double n))))))",
     Fraction(2, 3)),
    ("U[1 0^n 1] -> 1/2",
     "(lam n:0 (lam f:1 (add (sub 1 (f 0)) (add (R0 n 0 (lam c:0 (lam i:0 (add c (f (S i))))))"
     " (sub 1 (f (S n)))))))", Fraction(1, 2)),
    ("U[0] constant -> 1/2", "(lam n:0 (lam f:1 (f 0)))", Fraction(1, 2)),
]


def test_arithmetical_monotone_bounds(report):
    t0 = time.perf_counter()
    bad, notes = [], []
    for name, src, limit in UNION_FAMILIES:
        fam = ArithSetFamily(P(src), ("U",))
        prev, close_at = Fraction(0), None
        # truncations grow exponentially in m, so stop once within tolerance
        for m in range(11):
            r = measure_arithmetical(fam, [m])
            v = r.value.fraction()
            if r.certificate != "lower" or v > limit or v < prev:
                bad.append(f"{name} m={m}")
            prev = v
            if limit - v <= Fraction(1, 256):
                close_at = m
                break
        if close_at is None:
            bad.append(f"{name} never within 2^-8")
        notes.append(f"{name.split(' ->')[0]}@m={close_at}")
    report("arithmetical monotone bounds (5 families)", not bad, time.perf_counter() - t0,
           detail=" ".join(notes) + (f" failures: {bad}" if bad else ""))


def test_baire_clopen_witnesses(report):
    t0 = time.perf_counter()
    bad = []
    codes = SET_CODES[:10]
    for src in codes:
        t = P(src)
        w = witness_clopen(t)
        if not symmetric_difference_empty(t, w):
            bad.append(("coverage", src))
        depth = max([len(s) for s in w.G.cells] + [1])
        c = witness_complement(w, depth)
        if not closed_empty(c.h(0), depth) or not all(nowhere_dense(H, depth) for H in c.listed()):
            bad.append(("border", src))
    report("Baire clopen witnesses (10 codes)", len(codes) == 10 and not bad,
           time.perf_counter() - t0, detail=f"{len(bad)} failures")
