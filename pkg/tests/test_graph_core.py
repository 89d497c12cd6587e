import pytest
from hypothesis import given, strategies as st

from momkit.corpus import four_valent_graphs
from momkit.graph_core import (
    GraphError,
    Multigraph,
    betti1,
    components,
    format_graph,
    fundamental_cycle,
    is_spanning_forest,
    parse_graph,
    replay_walk,
    spanning_forest,
    tree_path,
)


def theta_with_loop():
    # two vertices joined by two edges, a loop on each
    return Multigraph.from_pairs(2, [(0, 0), (0, 1), (0, 1), (1, 1)])


def test_from_pairs_assigns_slots_in_order():
    g = theta_with_loop()
    assert g.edges[0] == ((0, 0), (0, 1))
    assert g.edges[1] == ((0, 2), (1, 0))
    assert g.is_four_valent()
    assert g.is_loop(0) and not g.is_loop(1)


def test_reused_slot_rejected():
    with pytest.raises(GraphError):
        Multigraph(1, (((0, 0), (0, 1)), ((0, 1), (0, 2))))


def test_vertex_out_of_range():
    with pytest.raises(GraphError):
        Multigraph(1, (((0, 0), (1, 0)),))


def test_corpus_size_matches_hand_count():
    # 1 vertex: two loops. 2 vertices: 4 parallel edges, or 2 parallel plus a loop each.
    # 3 vertices: doubled triangle, triangle with loops, a path of doubled edges
    # with end loops, and one loop with a tripled edge.
    sizes = [g.vertex_count for g in four_valent_graphs(3)]
    assert sorted(sizes) == [1, 2, 2, 3, 3, 3, 3]


def test_spanning_forest_is_lowest_first():
    g = theta_with_loop()
    assert spanning_forest(g) == (1,)
    assert is_spanning_forest(g, [2])
    assert not is_spanning_forest(g, [0])
    assert not is_spanning_forest(g, [1, 2])


def test_fundamental_cycle_of_parallel_edge():
    g = theta_with_loop()
    assert fundamental_cycle(g, [1], 2) == [2, 1]
    assert fundamental_cycle(g, [1], 0) == [0]
    with pytest.raises(GraphError):
        fundamental_cycle(g, [1], 1)


def test_tree_path_missing_when_disconnected():
    g = Multigraph.from_pairs(3, [(0, 1), (1, 2)])
    assert tree_path(g, [0], 0, 2) is None
    assert tree_path(g, [0, 1], 0, 2) == [0, 1]


def test_components_and_betti():
    g = Multigraph.from_pairs(4, [(0, 1), (1, 0), (2, 3)])
    comps = components(g)
    assert [c.vertices for c in comps] == [(0, 1), (2, 3)]
    assert [betti1(g, c) for c in comps] == [1, 0]


def test_text_round_trip(corpus):
    for g in corpus:
        assert parse_graph(format_graph(g)) == g


def test_parse_errors():
    with pytest.raises(GraphError):
        parse_graph("edge 0.0 0.1\n")
    with pytest.raises(GraphError):
        parse_graph("vertices 1\nedge 0 0.1\n")


@given(st.data())
def test_fundamental_cycles_close_up(data):
    g = data.draw(st.sampled_from(four_valent_graphs(3)))
    forest = spanning_forest(g)
    for chord in set(range(g.edge_count)) - set(forest):
        cyc = fundamental_cycle(g, forest, chord)
        start = g.ends(chord)[0]
        assert replay_walk(g, cyc, start) == start
        assert len(components(g, forest)) == 1
