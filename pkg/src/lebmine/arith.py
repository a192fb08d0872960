"""Primitive recursive arithmetic as T0 terms, plus their jets."""
from __future__ import annotations

from .evaluate import alpha_key, register_jet
from .terms import App, Lam, S, Term, compile_lambdas, numeral

_LIB: dict[str, Term] = {}
_VALUE_JETS: dict = {}


def _define(name: str, src: str, native=None) -> Term:
    from .parser import parse_term

    t = parse_term(src, defs=_LIB, compile=False)
    _LIB[name] = t
    if native is not None:
        _VALUE_JETS[name] = (t, native)
    return t


def lib(name: str) -> Term:
    return _LIB[name]


def kernel(name: str) -> Term:
    return _KERNEL[name]


def _c2(f):
    return lambda a: lambda b: f(a, b)


ADD = _define("add", "(lam a:0 (lam b:0 (R0 b a (lam c:0 (lam i:0 (S c))))))", _c2(lambda a, b: a + b))
PRED = _define("pred", "(lam n:0 (R0 n 0 (lam c:0 (lam i:0 i))))", lambda n: n - 1 if n else 0)
SUB = _define("sub", "(lam a:0 (lam b:0 (R0 b a (lam c:0 (lam i:0 (pred c))))))", _c2(lambda a, b: max(a - b, 0)))
SG = _define("sg", "(lam n:0 (R0 n 0 (lam c:0 (lam i:0 (S 0)))))", lambda n: 1 if n else 0)
ISZERO = _define("iszero", "(lam n:0 (sub (S 0) n))", lambda n: 0 if n else 1)
MUL = _define("mul", "(lam a:0 (lam b:0 (R0 b 0 (lam c:0 (lam i:0 (add c a))))))", _c2(lambda a, b: a * b))
DOUBLE = _define("double", "(lam a:0 (add a a))", lambda a: 2 * a)
POW2 = _define("pow2", "(lam n:0 (R0 n (S 0) (lam c:0 (lam i:0 (double c)))))", lambda n: 1 << n)
PARITY = _define("parity", "(lam n:0 (R0 n 0 (lam c:0 (lam i:0 (sub (S 0) c)))))", lambda n: n % 2)
HALVE = _define("halve", "(lam n:0 (R0 n 0 (lam c:0 (lam i:0 (add c (parity i))))))", lambda n: n // 2)
SHIFTR = _define("shiftr", "(lam a:0 (lam k:0 (R0 k a (lam c:0 (lam i:0 (halve c))))))", _c2(lambda a, k: a >> k))
SHIFTL = _define("shiftl", "(lam a:0 (lam k:0 (R0 k a (lam c:0 (lam i:0 (double c))))))", _c2(lambda a, k: a << k))
BIT = _define("bit", "(lam s:0 (lam j:0 (parity (shiftr s j))))", _c2(lambda s, j: (s >> j) & 1))
MIN = _define("min", "(lam a:0 (lam b:0 (sub a (sub a b))))", _c2(min))
MAX = _define("max", "(lam a:0 (lam b:0 (add a (sub b a))))", _c2(max))
DIST = _define("dist", "(lam a:0 (lam b:0 (add (sub a b) (sub b a))))", _c2(lambda a, b: abs(a - b)))
NEQ = _define("neq", "(lam a:0 (lam b:0 (sg (dist a b))))", _c2(lambda a, b: int(a != b)))
LOG2 = _define("log2", "(lam n:0 (R0 n 0 (lam c:0 (lam i:0 (add c (sg (shiftr n (S i))))))))",
               lambda n: max(n.bit_length() - 1, 0))
LTH = _define("lth", "(lam c:0 (log2 (S c)))", lambda c: (c + 1).bit_length() - 1)


def _seqbit(c, i):
    n = (c + 1).bit_length() - 1
    return ((c + 1) >> max(n - (i + 1), 0)) & 1


SEQBIT = _define("seqbit", "(lam c:0 (lam i:0 (bit (S c) (sub (lth c) (S i)))))", _c2(_seqbit))


def nat(n: int) -> Term:
    """Numeral for ``n``: a successor tower when small, binary doubling otherwise."""
    if n <= 16:
        return numeral(n)
    half = nat(n // 2)
    t = App(DOUBLE, half)
    return App(S, t) if n % 2 else t


def string_code(bits) -> int:
    """Code of a finite 0/1 string: binary ``1 s0 s1 ...`` minus one."""
    c = 1
    for b in bits:
        c = 2 * c + (1 if b else 0)
    return c - 1


def decode_string(c: int) -> tuple:
    n = (c + 1).bit_length() - 1
    return tuple(_seqbit(c, i) for i in range(n))


# -- jets -------------------------------------------------------------------

def _parity_rec(x, y):
    if x == 0:
        return y
    a = max(1 - y, 0)
    return a if x % 2 else 1 - a


_STEP_JETS = {
    "add": lambda x, y: y + x,
    "pred": lambda x, y: x - 1 if x else y,
    "sub": lambda x, y: max(y - x, 0),
    "sg": lambda x, y: y if x == 0 else 1,
    "pow2": lambda x, y: y << x,
    "parity": _parity_rec,
    "halve": lambda x, y: y + x // 2,
    "shiftr": lambda x, y: y >> x,
    "shiftl": lambda x, y: y << x,
}

_KERNEL = {name: compile_lambdas(t) for name, t in _LIB.items()}
VALUE_JETS_KERNEL: dict = {}
VALUE_JETS_ALPHA: dict = {}


def _register():
    from .nbe import nbe

    for name, (t, native) in _VALUE_JETS.items():
        VALUE_JETS_KERNEL[_KERNEL[name]] = native
        VALUE_JETS_ALPHA[alpha_key(t)] = native
        VALUE_JETS_ALPHA[alpha_key(nbe(t))] = native
    for name, closed in _STEP_JETS.items():
        t = _LIB[name]
        while isinstance(t, Lam):
            t = t.body
        step = t.arg  # R0 x y step
        register_jet(step, closed)
        register_jet(nbe(step), closed)
        register_jet(compile_lambdas(step), closed)


_register()


def abbreviations() -> dict:
    """Library terms (lambda and kernel forms) mapped to their names, for display."""
    out = {t: name for name, t in _LIB.items()}
    out.update({t: name for name, t in _KERNEL.items()})
    return out
