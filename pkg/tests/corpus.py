"""Shared test corpora: set codes, families and pipeline terms in surface syntax."""
from __future__ import annotations

import random

from lebmine import arith
from lebmine.parser import parse_term

MAX_INDEX = 11          # queries stay below 12, so every random code has modulus <= 12


def P(src: str, compile: bool = False, **kw):
    return parse_term(src, defs=arith._LIB, compile=compile, **kw)


def cell_src(bits) -> str:
    """Surface code of the basic open set [bits]."""
    if not bits:
        return "(lam f:1 0)"
    body = "0"
    for i, b in enumerate(bits):
        q = f"(f {i})" if b == 0 else f"(sub 1 (f {i}))"
        body = q if body == "0" else f"(max {body} {q})"
    return f"(lam f:1 {body})"


# hand-written T0 set codes of type 2 (member iff the value is 0)
SET_CODES = [
    "(lam f:1 (f 0))",
    "(lam f:1 (min (f 0) (f 1)))",
    "(lam f:1 (max (f 0) (sub 1 (f 1))))",
    "(lam f:1 (add (f 2) (f 5)))",
    "(lam f:1 (Cond (f 0) (f 1) (f 2)))",
    "(lam f:1 (f (f 0)))",
    "(lam f:1 (f (add (f 0) (f 1))))",
    "(lam f:1 (parity (add (f 0) (add (f 1) (f 2)))))",
    "(lam f:1 (R0 3 0 (lam c:0 (lam i:0 (add c (f i))))))",
    "(lam f:1 (sub 2 (R0 4 0 (lam c:0 (lam i:0 (add c (f i)))))))",
    "(lam f:1 (dist (f 0) (f 3)))",
    "(lam f:1 1)",
    "(lam f:1 0)",
    "(lam f:1 (mul (f 0) (sub 1 (f 7))))",
    "(lam f:1 (Cond (f 1) 0 (f (add 2 (f 2)))))",
    cell_src((1, 0, 1)),
    cell_src((0, 0, 0, 0, 0, 1)),
]


def _rand_expr(rng: random.Random, depth: int) -> str:
    if depth <= 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.8:
            return f"(f {rng.randint(0, MAX_INDEX)})"
        return str(rng.randint(0, 1))
    a = lambda: _rand_expr(rng, depth - 1)  # noqa: E731
    op = rng.randrange(8)
    if op == 0:
        return f"(min {a()} {a()})"
    if op == 1:
        return f"(max {a()} {a()})"
    if op == 2:
        return f"(sub 1 {a()})"
    if op == 3:
        return f"(add {a()} {a()})"
    if op == 4:
        return f"(Cond {a()} {a()} {a()})"
    if op == 5:
        return f"(f (min {a()} {MAX_INDEX}))"
    if op == 6:
        k = rng.randint(0, MAX_INDEX + 1)
        return f"(R0 {k} {a()} (lam c:0 (lam j:0 (max c (f j)))))"
    return f"(parity {a()})"


def random_code_src(rng: random.Random, depth: int = 4) -> str:
    return f"(lam f:1 {_rand_expr(rng, depth)})"


def random_codes(n: int, seed: int = 7, depth: int = 4) -> list[str]:
    rng = random.Random(seed)
    return [random_code_src(rng, depth) for _ in range(n)]


# finite families of set codes for disjointify / additivity
FAMILIES = [
    [cell_src((0,)), cell_src((0, 1)), cell_src((1,))],
    [SET_CODES[1], SET_CODES[2], SET_CODES[3]],
    [cell_src((0, 0)), cell_src((0, 0)), cell_src((1, 1, 0))],
    [SET_CODES[5], SET_CODES[7], SET_CODES[8], SET_CODES[12]],
    [SET_CODES[11], SET_CODES[0]],
]


# terms mentioning Leb/Eps for the normalizer and the pipeline
PIPELINE_TERMS = [
    "(lam g:1 (Leb (lam f:1 (f 0)) 3))",
    "(lam g:1 (Leb (lam f:1 (min (f 0) (f 1))) (g 0)))",
    "(lam g:1 (add (Leb (lam f:1 (max (f 0) (f 1))) 4) (g 1)))",
    "(lam g:1 (Leb (lam f:1 (min (f 0) (g 1))) 5))",
    "(lam g:1 (Leb (lam f:1 (f (g 0))) 2))",
    "(lam g:1 (Eps (lam f:1 (sub 1 (f 2))) 2))",
    "(lam g:1 (Eps (lam f:1 (max (f 0) (sub 1 (f 1)))) (g 0)))",
    "(lam g:1 (Eps (lam f:1 (dist (f 0) (g 0))) 0))",
    "(lam g:1 (Cond (g 0) (Leb (lam f:1 (f 1)) 2) (Eps (lam f:1 (f 0)) 0)))",
    "(lam g:1 (R0 (g 0) (Leb (lam f:1 (f 0)) 6) (lam c:0 (lam i:0 (add c (g i))))))",
    "(lam g:1 (Leb (lam f:1 (R0 3 0 (lam c:0 (lam i:0 (add c (f i)))))) (add 2 (g 2))))",
    "(lam g:1 (Leb (lam f:1 (sub (f 0) (g 0))) 3))",
    "(lam g:1 (mul (Leb (lam f:1 1) 4) (Leb (lam f:1 0) 4)))",
    "(lam g:1 (Eps (lam f:1 (f 3)) (Leb (lam f:1 (f 3)) 1)))",
    "(lam g:1 (Leb (lam f:1 (Cond (g 2) (f 0) (f 1))) 3))",
    "(lam g:1 (Eps (lam f:1 (add (f 0) (f (g 1)))) 1))",
    # nested: G inside the argument of G
    "(lam g:1 (Leb (lam f:1 (sub (Leb (lam h:1 (h 0)) 2) (f 0))) 3))",
    "(lam g:1 (Eps (lam f:1 (sub (Leb (lam h:1 (max (h 0) (f 0))) 3) (g 0))) 2))",
    "(lam g:1 (Leb (lam f:1 (f (Eps (lam h:1 (sub 1 (h 1))) 1))) 4))",
    "(lam g:1 (Leb (lam f:1 (Leb (lam h:1 (min (h 0) (f 1))) (f 0))) 2))",
]
NESTED = PIPELINE_TERMS[16:]
