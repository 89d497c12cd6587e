import pytest
from hypothesis import given, settings, strategies as st

from momkit.corpus import four_valent_graphs
from momkit.graph_core import Multigraph
from momkit.mom_subgraph import (
    ADMISSIBLE,
    GENERAL,
    INVALID,
    MINIMAL,
    MomColoring,
    MoveError,
    apply_m1,
    apply_m2,
    apply_m2tilde,
    apply_move,
    classify,
    enumerate_moms,
    expand,
    format_coloring,
    inverse_move,
    invert,
    legal_moves,
    m2tilde_expansion,
    parse_coloring,
    reduce_to_minimal,
    relate,
    relate_minimal,
    replay,
)
from momkit.trace import Move, MoveTrace

CORPUS = four_valent_graphs(3)
GENERALS = [(g, s) for g in CORPUS for s in enumerate_moms(g)]


def doubled_square():
    # 4-cycle with every edge doubled: e0,e1 = 01, e2,e3 = 12, e4,e5 = 23, e6,e7 = 30
    return Multigraph.from_pairs(4, [(0, 1), (0, 1), (1, 2), (1, 2), (2, 3), (2, 3), (3, 0), (3, 0)])


def test_classify_by_hand():
    g = doubled_square()
    assert classify(MomColoring(g, "tftftfcf")) == MINIMAL
    # a t-cycle
    assert classify(MomColoring(g, "tttfffcf")) == INVALID
    # two c-edges on one tree
    assert classify(MomColoring(g, "tftftccf")) == INVALID


def test_minimal_counts_by_hand():
    two_loops = Multigraph.from_pairs(1, [(0, 0), (0, 0)])
    four_parallel = Multigraph.from_pairs(2, [(0, 1)] * 4)
    # a single vertex: no tree, one loop is c
    assert len(enumerate_moms(two_loops, MINIMAL)) == 2
    # choose the tree edge, then the c-edge among the rest
    assert len(enumerate_moms(four_parallel, MINIMAL)) == 4 * 3
    # no loops, so two one-vertex trees cannot carry c-edges
    assert len(enumerate_moms(four_parallel, GENERAL)) == 12


def test_m2tilde_expands_to_two_steps():
    gamma = MomColoring(doubled_square(), "tftftfcf")
    moves = m2tilde_expansion(gamma, 2, 6)
    assert moves == [Move("m2", (3, 4, 6)), Move("m2", (2, 2, 4))]
    out, _ = apply_m2tilde(gamma, 2, 6)
    assert out.colors == tuple("tfcftftf")
    assert replay(gamma, moves) == out


def test_m2tilde_rejects_edge_off_cycle():
    gamma = MomColoring(doubled_square(), "tftftfcf")
    with pytest.raises(MoveError):
        m2tilde_expansion(gamma, 1, 6)


def test_move_preconditions():
    gamma = MomColoring(doubled_square(), "tftftfcf")
    with pytest.raises(MoveError):
        apply_m1(gamma, 0, 0, 1)  # e0 is t, not c
    with pytest.raises(MoveError):
        apply_m2(gamma, 0, 0, 2)  # both t
    with pytest.raises(MoveError):
        apply_move(gamma, Move("m9", ()))


def test_expand_removes_composites():
    gamma = MomColoring(doubled_square(), "tftftfcf")
    tr = MoveTrace.from_moves([Move("m2tilde", (2, 6))])
    ex = expand(tr, gamma)
    assert ex.kinds() == ["m2", "m2"]
    assert replay(gamma, ex) == replay(gamma, tr)


def test_coloring_text_round_trip():
    g, s = GENERALS[-1]
    assert parse_coloring(g, format_coloring(s)) == s
    with pytest.raises(ValueError):
        parse_coloring(g, "edge 0 t\n")


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(GENERALS), st.data())
def test_single_moves_invert(pair, data):
    _, gamma = pair
    options = list(legal_moves(gamma, ADMISSIBLE))
    if not options:
        return
    mv, out = data.draw(st.sampled_from(options))
    assert classify(out) != INVALID
    assert apply_move(out, inverse_move(mv)) == gamma


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(GENERALS))
def test_reduce_reaches_minimal(pair):
    _, gamma = pair
    tr = reduce_to_minimal(gamma)
    assert classify(replay(gamma, tr)) == MINIMAL
    ks = [k for k, _ in tr.notes]
    assert ks == sorted(ks, reverse=True)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(GENERALS), st.data())
def test_relate_round_trip(pair, data):
    g, a = pair
    b = data.draw(st.sampled_from(enumerate_moms(g)))
    tr = relate(a, b)
    assert replay(a, tr) == b
    assert replay(b, invert(tr)) == a


def test_relate_minimal_uses_m1_and_m2tilde_only():
    g = CORPUS[-1]
    mins = enumerate_moms(g, MINIMAL)
    for b in mins[:10]:
        tr = relate_minimal(mins[0], b)
        assert set(tr.kinds()) <= {"m1", "m2tilde"}
        assert replay(mins[0], tr) == b
