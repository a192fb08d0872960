"""Open and closed codes on Cantor space and witnesses for the property of Baire.

An open code lists basic opens [s]; a closed code is the complement of an
open code.  A witness for X is an open G together with closed sets H_n that
are nowhere dense and cover the difference between X and G.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, NamedTuple, Optional, Sequence

from .arith import decode_string
from .continuity import branch_evaluate
from .errors import ParseError
from .evaluate import Machine, to_oracle
from .terms import EvalBudget, Term

Cell = tuple


def _cell(s) -> Cell:
    if isinstance(s, str):
        if any(c not in "01" for c in s):
            raise ParseError(f"cell {s!r} is not a 0/1 string")
        return tuple(int(c) for c in s)
    out = tuple(s)
    if any(b not in (0, 1) for b in out):
        raise ValueError(f"cell {s!r} is not a 0/1 string")
    return out


def cell_text(s: Cell) -> str:
    return "".join(map(str, s))


def compatible(s: Cell, t: Cell) -> bool:
    """[s] and [t] intersect."""
    return all(a == b for a, b in zip(s, t))


@dataclass(frozen=True)
class OpenCode:
    """G = union of [o(n)]: a finite tuple of cells, or an infinite listing given
    by a type-1 term (string codes) or a Python function of n."""
    cells: Optional[tuple] = None
    term: Optional[Term] = None
    fn: Optional[Callable[[int], Cell]] = field(default=None, compare=False)

    def __post_init__(self):
        if sum(x is not None for x in (self.cells, self.term, self.fn)) != 1:
            raise ValueError("an open code has exactly one listing")
        if self.cells is not None:
            object.__setattr__(self, "cells", tuple(_cell(s) for s in self.cells))

    @property
    def finite(self) -> bool:
        return self.cells is not None

    def entries(self, budget: EvalBudget = EvalBudget()):
        """The listing, truncated at ``budget.mu_bound`` for infinite codes."""
        if self.finite:
            yield from self.cells
            return
        for n in range(budget.mu_bound):
            s = self.nth(n)
            if s is not None:
                yield s

    def nth(self, n: int, budget: EvalBudget = EvalBudget()) -> Optional[Cell]:
        """Entry n of the listing (None marks a hole in a function listing)."""
        if self.finite:
            return self.cells[n] if n < len(self.cells) else None
        if self.term is not None:
            return _cell(decode_string(Machine(budget).value(self.term)(n)))
        s = self.fn(n)
        return None if s is None else _cell(s)


EMPTY_OPEN = OpenCode(cells=())
FULL_OPEN = OpenCode(cells=((),))


@dataclass(frozen=True)
class ClosedCode:
    """The complement of an open code."""
    open: OpenCode

    @property
    def finite(self) -> bool:
        return self.open.finite


EMPTY_CLOSED = ClosedCode(FULL_OPEN)


class OpenMembership(NamedTuple):
    member: bool
    incomplete: bool
    witness: Optional[int]


def open_membership(G: OpenCode, f, budget: EvalBudget = EvalBudget()) -> OpenMembership:
    """Search the listing for a cell that ``f`` extends."""
    f = to_oracle(f)
    for n, s in enumerate(G.entries(budget)):
        if all(f(i) == b for i, b in enumerate(s)):
            return OpenMembership(True, False, n)
    return OpenMembership(False, not G.finite, None)


def closed_membership(H: ClosedCode, f, budget: EvalBudget = EvalBudget()) -> OpenMembership:
    r = open_membership(H.open, f, budget)
    return OpenMembership(not r.member, r.incomplete, r.witness)


# -- pairing -----------------------------------------------------------------------

def pair(a: int, b: int) -> int:
    """Cantor pairing."""
    return (a + b) * (a + b + 1) // 2 + b


def unpair(z: int) -> tuple[int, int]:
    w = int(((8 * z + 1) ** 0.5 - 1) // 2)
    while (w + 1) * (w + 2) // 2 <= z:
        w += 1
    while w * (w + 1) // 2 > z:
        w -= 1
    b = z - w * (w + 1) // 2
    return w - b, b


# -- witnesses -----------------------------------------------------------------------

@dataclass(frozen=True)
class BaireWitness:
    """G and the closed sets H_n; ``H`` lists H_0, H_1, ... and H_n is empty beyond it
    (``H_fn`` overrides the tuple for re-indexed families)."""
    G: OpenCode
    H: tuple = ()
    H_fn: Optional[Callable[[int], ClosedCode]] = field(default=None, compare=False)
    support: int = 0
    incomplete_interior: bool = False

    def h(self, n: int) -> ClosedCode:
        if self.H_fn is not None:
            return self.H_fn(n)
        return self.H[n] if n < len(self.H) else EMPTY_CLOSED

    def listed(self) -> list:
        n = max(self.support, len(self.H))
        return [self.h(i) for i in range(n)]

    def to_dict(self) -> dict:
        if not self.G.finite or any(not H.finite for H in self.listed()):
            raise ValueError("only finite witnesses have a file representation")
        return {"open": [cell_text(s) for s in self.G.cells],
                "closed": [[cell_text(s) for s in H.open.cells] for H in self.listed()]}

    @classmethod
    def from_dict(cls, d: dict) -> "BaireWitness":
        try:
            G = OpenCode(cells=tuple(d["open"]))
            H = tuple(ClosedCode(OpenCode(cells=tuple(c))) for c in d.get("closed", []))
        except (KeyError, TypeError) as e:
            raise ParseError(f"bad witness file: {e}") from None
        return cls(G, H)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "BaireWitness":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as e:
            raise ParseError(f"bad witness file: {e}") from None


def _leaf_cells(constraints) -> list:
    """Cells whose union is exactly the set fixed by the (index, bit) constraints."""
    fixed = dict(constraints)
    length = 1 + max(fixed) if fixed else 0
    free = [i for i in range(length) if i not in fixed]
    out = []
    for bits in product((0, 1), repeat=len(free)):
        s = dict(fixed)
        s.update(zip(free, bits))
        out.append(tuple(s[i] for i in range(length)))
    return out


def witness_clopen(t: Term, budget: EvalBudget = EvalBudget()) -> BaireWitness:
    """For a clopen X: G lists the member cells of the branch tree, all H_n are empty."""
    tree = branch_evaluate(t, budget)
    cells = sorted(c for leaf in tree.leaves() if leaf.value == 0 for c in _leaf_cells(leaf.constraints))
    return BaireWitness(OpenCode(cells=tuple(cells)))


def union_open(codes: Sequence[OpenCode]) -> OpenCode:
    if all(c.finite for c in codes):
        out, cols = [], [list(c.cells) for c in codes]
        for r in range(max((len(c) for c in cols), default=0)):
            out += [c[r] for c in cols if r < len(c)]
        return OpenCode(cells=tuple(out))

    def interleave(n):
        # round-robin over the listings; an exhausted finite listing leaves a hole
        i, r = n % len(codes), n // len(codes)
        c = codes[i]
        if c.finite:
            return c.cells[r] if r < len(c.cells) else None
        return c.nth(r)
    return OpenCode(fn=interleave)


def witness_union(ws: Sequence[BaireWitness]) -> BaireWitness:
    """G is the interleaved union; H_<n1,n2> = H_n1 of the n2-th witness."""
    ws = list(ws)

    def H(z):
        n1, n2 = unpair(z)
        return ws[n2].h(n1) if n2 < len(ws) else EMPTY_CLOSED
    sup = max((len(w.listed()) for w in ws), default=0)
    support = pair(sup - 1, len(ws) - 1) + 1 if sup and ws else 0
    return BaireWitness(union_open([w.G for w in ws]), H_fn=H, support=support,
                        incomplete_interior=any(w.incomplete_interior for w in ws))


def all_cells(depth: int):
    for d in range(depth + 1):
        yield from product((0, 1), repeat=d)


def witness_complement(w: BaireWitness, depth: int, budget: EvalBudget = EvalBudget()) -> BaireWitness:
    """G' lists the minimal cells of length <= depth that miss G; H'_0 is the border
    (what G and G' leave uncovered), H'_{n+1} = H_n."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    incomplete = not w.G.finite
    listing = list(w.G.cells) if w.G.finite else []
    interior: list = []
    if not incomplete:
        for s in all_cells(depth):
            if any(compatible(s, t) for t in interior):
                continue
            if not any(compatible(s, t) for t in listing):
                interior.append(s)
    G2 = OpenCode(cells=tuple(interior))
    if w.G.finite:
        border = ClosedCode(OpenCode(cells=tuple(listing) + tuple(interior)))
    else:
        border = ClosedCode(union_open([w.G, G2]))
    prev = w

    def H(n):
        return border if n == 0 else prev.h(n - 1)
    return BaireWitness(G2, H_fn=H, support=max(len(w.listed()), w.support) + 1,
                        incomplete_interior=incomplete or w.incomplete_interior)


# -- checks ------------------------------------------------------------------------------

def nowhere_dense(H: ClosedCode, depth: int) -> bool:
    """No cell [s] with |s| <= depth lies inside H (finite codes only)."""
    if not H.finite:
        raise ValueError("nowhere-density is checked on finite closed codes only")
    cells = H.open.cells
    return all(any(compatible(s, t) for t in cells) for s in all_cells(depth))


def closed_empty(H: ClosedCode, depth: int) -> bool:
    """The complement of the listing is empty, certified by covering all cells of length ``depth``."""
    if not H.finite:
        return False
    cells = H.open.cells
    depth = max([depth] + [len(t) for t in cells])
    return all(any(compatible(s, t) and len(t) <= len(s) for t in cells)
               for s in product((0, 1), repeat=depth))


def open_equal_at(G1: OpenCode, G2: OpenCode, depth: int) -> bool:
    """Same members among 0-padded cells of length ``depth`` (finite cells of length <= depth)."""
    return all(open_membership(G1, s).member == open_membership(G2, s).member
               for s in product((0, 1), repeat=depth))


def symmetric_difference_empty(t: Term, w: BaireWitness, budget: EvalBudget = EvalBudget()) -> bool:
    """X and G(X) agree on every cell of length k (k the modulus of X and at least the cell lengths)."""
    tree = branch_evaluate(t, budget)
    k = max([tree.modulus] + [len(s) for s in (w.G.cells or ())])
    m = Machine(budget)
    X = m.value(t)
    return all((X(to_oracle(s)) == 0) == open_membership(w.G, s).member
               for s in product((0, 1), repeat=k))
