import random

import pytest
from hypothesis import given, settings, strategies as st

from momkit.surface_tri import SurfaceTriangulation, random_torus, split_triangle
from momkit.solid_torus import (
    FillError,
    base_lst,
    check_meridian,
    check_slope_triple,
    det,
    fill_problems,
    fill_solid_torus,
    fundamental_meridian,
    homology_weights,
    layer,
    layering_distance,
    realize_theta,
    replay_layers,
    unimodular_triples,
    verify_fill,
)

T2 = SurfaceTriangulation.two_triangle_torus()


def test_base_solid_torus():
    lst = base_lst()
    assert sorted(lst.weights) == [1, 2, 3]
    assert lst.complex.tet_count == 1
    assert lst.boundary.surface.is_torus()


def test_layering_follows_farey_by_hand():
    lst = base_lst()
    three = lst.weights.index(3)
    one = lst.weights.index(1)
    # replacing 3 by |1 - 2|, or 1 by 2 + 3
    assert sorted(layer(lst, three).weights) == [1, 1, 2]
    assert sorted(layer(lst, one).weights) == [2, 3, 5]


def test_layering_distance_by_hand():
    assert layering_distance([1, 2, 3]) == 0
    assert layering_distance([2, 1, 1]) == 1
    assert layering_distance([0, 1, 1]) == 2
    assert layering_distance([3, 5, 8]) == 2
    assert layering_distance([4, 4, 8]) is None


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=6))
def test_layer_weights_match_homology(seq):
    lst = replay_layers(seq)
    assert homology_weights(lst.complex) == lst.weights
    s = lst.slopes
    assert all(abs(det(s[i], s[j])) == 1 for i, j in ((0, 1), (0, 2), (1, 2)))
    assert replay_layers(lst.layerings).complex == lst.complex


def test_slope_triple_checks():
    assert check_slope_triple([(1, 0), (0, 1), (1, 1)]) == ((1, 0), (0, 1), (1, 1))
    with pytest.raises(FillError):
        check_slope_triple([(1, 0), (0, 1), (1, 2)])
    with pytest.raises(FillError):
        check_slope_triple([(2, 0), (0, 1), (1, 1)])


def test_realize_meridian_edge():
    lst, pos = realize_theta([(1, 0), (0, 1), (1, 1)])
    assert tuple(lst.weights[p] for p in pos) == (1, 0, 1)
    assert lst.complex.tet_count == 3


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(list(unimodular_triples(7))))
def test_realize_agrees_with_bfs(triple):
    lst, pos = realize_theta(triple)
    want = tuple(abs(a) for a, _ in triple)
    assert tuple(lst.weights[p] for p in pos) == want
    assert homology_weights(lst.complex) == lst.weights
    assert len(lst.layerings) == layering_distance(want)


def test_fill_minimal_torus_uses_only_the_cap():
    for e in range(3):
        mu = [0, 0, 0]
        mu[e] = 1
        ft = fill_solid_torus(T2, mu)
        assert verify_fill(ft)
        assert ft.tet_count == 3 and ft.count("cap") == 3
        assert len(ft.moves) == 0


def test_fill_accepts_multiples_of_a_slope():
    a = fill_solid_torus(T2, [1, 0, 0])
    b = fill_solid_torus(T2, [3, 0, 0])
    assert a.tet_count == b.tet_count
    assert b.meridian == (3, 0, 0)


def test_meridian_checks():
    with pytest.raises(FillError):
        check_meridian(T2, [0, 0, 0])
    with pytest.raises(FillError):
        check_meridian(T2, [1, 0])
    big = split_triangle(T2, 0)
    spoke = next(e for e in range(big.edge_count) if not big.is_loop(e))
    mu = [0] * big.edge_count
    mu[spoke] = 1
    with pytest.raises(FillError):
        check_meridian(big, mu)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 20), st.integers(0, 5))
def test_fill_random_tori(seed, steps, pick):
    delta = random_torus(random.Random(seed), steps, 24)
    ft = fill_solid_torus(delta, fundamental_meridian(delta, pick))
    assert fill_problems(ft) == []
    kinds = ft.moves.kinds()
    assert ft.count("layer") == kinds.count("s2")
    assert ft.count("cap3") == kinds.count("s3")
    assert ft.folds == kinds.count("s1")
    assert ft.tet_count == kinds.count("s2") + kinds.count("s3") + ft.cap.complex.tet_count
    assert ft.to_text().startswith("meridian ")
