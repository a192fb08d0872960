from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from corpus import P, SET_CODES, cell_src
from lebmine.baire import (EMPTY_CLOSED, EMPTY_OPEN, FULL_OPEN, BaireWitness, ClosedCode,
                           OpenCode, closed_empty, compatible, closed_membership, nowhere_dense,
                           open_equal_at, open_membership, pair, symmetric_difference_empty,
                           unpair, witness_clopen, witness_complement, witness_union)
from lebmine.measure import empty_set, full_set
from lebmine.terms import EvalBudget


def test_open_membership_examples():
    G = OpenCode(cells=((0,),))
    assert open_membership(G, [0, 1, 1]) == (True, False, 0)
    assert open_membership(EMPTY_OPEN, [0]) == (False, False, None)
    never = OpenCode(fn=lambda n: None)
    r = open_membership(never, [0], EvalBudget(mu_bound=50))
    assert not r.member and r.incomplete
    assert open_membership(OpenCode(cells=((1,),)), []).member is False


def test_term_listing():
    T = P("(lam n:0 (pred (pow2 (S n))))")   # codes of 0^(n+1)
    G = OpenCode(term=T)
    assert [G.nth(i) for i in range(3)] == [(0,), (0, 0), (0, 0, 0)]
    assert open_membership(G, [0, 1]).member
    r = open_membership(G, [1], EvalBudget(mu_bound=30))
    assert not r.member and r.incomplete


def test_witness_clopen_examples():
    w = witness_clopen(P(cell_src((0,))))
    assert w.G.cells == ((0,),) and w.listed() == []
    assert witness_clopen(empty_set()).G.cells == ()
    assert symmetric_difference_empty(P(cell_src((0,))), w)


def test_pairing():
    assert pair(1, 2) == 8
    for z in range(200):
        assert pair(*unpair(z)) == z


def test_witness_union_examples():
    a, b = witness_clopen(P(cell_src((0,)))), witness_clopen(P(cell_src((1, 1))))
    u = witness_union([a, b])
    assert set(u.G.cells) == {(0,), (1, 1)}
    assert all(closed_empty(H, 3) for H in u.listed())
    # H_<n1,n2> is H_n1 of the n2-th witness
    c = witness_complement(a, 2)
    v = witness_union([a, b, c])
    assert v.h(pair(0, 2)) == c.h(0)
    assert v.h(pair(1, 2)) == c.h(1)


@pytest.mark.parametrize("pair_", [(0, 3), (1, 2), (4, 15), (5, 6)])
def test_union_soundness(pair_):
    X, Y = P(SET_CODES[pair_[0]]), P(SET_CODES[pair_[1]])
    wx, wy = witness_clopen(X), witness_clopen(Y)
    u = witness_union([wx, wy])
    for s in product((0, 1), repeat=5):
        expect = open_membership(wx.G, s).member or open_membership(wy.G, s).member
        assert open_membership(u.G, s).member == expect


def test_complement_examples():
    w = witness_clopen(P(cell_src((0,))))
    c = witness_complement(w, 1)
    assert c.G.cells == ((1,),)
    assert closed_empty(c.h(0), 1)
    full = witness_clopen(full_set())
    cf = witness_complement(full, 2)
    assert cf.G.cells == () and closed_empty(cf.h(0), 2)
    with pytest.raises(ValueError):
        witness_complement(w, 0)


@pytest.mark.parametrize("src", SET_CODES)
def test_double_complement_and_complement_soundness(src):
    t = P(src)
    w = witness_clopen(t)
    k = max([len(s) for s in w.G.cells] + [1])
    c = witness_complement(w, k)
    for s in c.G.cells:
        assert not any(compatible(s, u) for u in w.G.cells)
    assert closed_empty(c.h(0), k)
    cc = witness_complement(c, k)
    assert open_equal_at(cc.G, w.G, k)


@pytest.mark.parametrize("src", SET_CODES)
def test_coverage_and_nowhere_density(src):
    t = P(src)
    w = witness_clopen(t)
    assert symmetric_difference_empty(t, w)
    c = witness_complement(w, 4)
    for H in c.listed():
        assert nowhere_dense(H, 4)


def test_infinite_listing_complement_flags_incomplete():
    G = OpenCode(term=P("(lam n:0 (pred (pow2 (S n))))"))
    c = witness_complement(BaireWitness(G), 2)
    assert c.incomplete_interior and c.G.cells == ()


def test_closed_membership():
    H = ClosedCode(OpenCode(cells=((0,),)))
    assert closed_membership(H, [1]).member
    assert not closed_membership(H, [0]).member
    assert not closed_membership(EMPTY_CLOSED, [0, 1]).member


def test_json_roundtrip():
    w = witness_complement(witness_clopen(P(SET_CODES[2])), 2)
    text = w.dumps()
    back = BaireWitness.loads(text)
    assert back.G == w.G and [H.open.cells for H in back.listed()] == [H.open.cells for H in w.listed()]
    assert BaireWitness.from_dict(w.to_dict()).to_dict() == w.to_dict()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(0, 1), max_size=3).map(tuple), max_size=4))
def test_complement_partitions_cells(cells):
    w = BaireWitness(OpenCode(cells=tuple(cells)))
    c = witness_complement(w, 3)
    for s in product((0, 1), repeat=3):
        in_g = open_membership(w.G, s).member
        in_c = open_membership(c.G, s).member
        assert not (in_g and in_c)
        assert in_g or in_c           # exact at this depth: the border is empty
    assert closed_empty(c.h(0), 3)
    assert FULL_OPEN.cells == ((),)
