import random

import pytest
from hypothesis import given, settings, strategies as st

from momkit.surface_tri import (
    SurfaceError,
    SurfaceTriangulation,
    apply_s1,
    apply_s1prime,
    apply_s2,
    apply_s3,
    apply_surface_move,
    random_torus,
    replay_surface,
    simplify_steps,
    simplify_torus,
    split_triangle,
    theta_dual,
)
from momkit.trace import Move

T2 = SurfaceTriangulation.two_triangle_torus()


def relabel(tri, perm, rot):
    """Permute triangles and rotate each one's sides; keeps the orientation."""
    def move(d):
        t, s = divmod(d, 3)
        return 3 * perm[t] + (s + rot[t]) % 3
    pairing = [0] * len(tri.pairing)
    for d, q in enumerate(tri.pairing):
        pairing[move(d)] = move(q)
    return SurfaceTriangulation(tri.triangle_count, tuple(pairing))


@st.composite
def tori(draw, max_triangles=30):
    seed = draw(st.integers(0, 10**6))
    steps = draw(st.integers(0, 25))
    return random_torus(random.Random(seed), steps, max_triangles)


def test_two_triangle_torus_counts():
    assert (T2.triangle_count, T2.edge_count, T2.vertex_count) == (2, 3, 1)
    assert T2.valences() == [6]
    assert T2.is_torus()


def test_bad_pairings():
    with pytest.raises(SurfaceError):
        SurfaceTriangulation(1, (1, 0, 2))
    with pytest.raises(SurfaceError):
        SurfaceTriangulation.from_gluings(2, [((0, 0), (1, 0))])


def test_split_then_s3_undoes():
    big = split_triangle(T2, 0)
    assert (big.triangle_count, big.vertex_count, big.edge_count) == (4, 2, 6)
    v = big.valences().index(3)
    assert apply_s3(big, v).isomorphic(T2)


def test_s3_needs_valence_three():
    with pytest.raises(SurfaceError):
        apply_s3(T2, 0)


def test_flip_on_minimal_torus_stays_minimal():
    for e in range(3):
        out = apply_s2(T2, e)
        assert out.vertex_count == 1 and out.isomorphic(T2)


def test_s1prime_clears_a_valence_two_vertex():
    # split, then flip one spoke: the new vertex drops to valence 2
    big = split_triangle(T2, 0)
    v = big.valences().index(3)
    e = big.incident_edges(v)[0]
    low = apply_s2(big, e)
    assert low.valences() == [10, 2]
    out = apply_s1prime(low, 1)
    assert (out.triangle_count, out.vertex_count) == (6, 3)
    assert sorted(out.valences()) == [3, 3, 12]


def test_unknown_move():
    with pytest.raises(SurfaceError):
        apply_surface_move(T2, Move("s7", ()))


def test_theta_dual_needs_one_vertex():
    th = theta_dual(T2)
    assert sorted(th.orders[0]) == [0, 1, 2]
    assert sorted(th.orders[1]) == [0, 1, 2]
    with pytest.raises(SurfaceError):
        theta_dual(split_triangle(T2, 0))


def test_simplify_rejects_non_torus():
    doubled = SurfaceTriangulation(4, T2.pairing + tuple(d + 6 for d in T2.pairing))
    with pytest.raises(SurfaceError):
        simplify_torus(doubled)


@settings(max_examples=40, deadline=None)
@given(tori(), st.data())
def test_canonical_form_ignores_labels(tri, data):
    n = tri.triangle_count
    perm = data.draw(st.permutations(range(n)))
    rot = data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    other = relabel(tri, perm, rot)
    assert other.isomorphic(tri)
    assert SurfaceTriangulation.parse(tri.to_text()) == tri


@settings(max_examples=40, deadline=None)
@given(tori(), st.data())
def test_double_flip_is_identity(tri, data):
    e = data.draw(st.integers(0, tri.edge_count - 1))
    d, q = tri.edge_darts(e)
    if d // 3 == q // 3:
        return
    once = apply_s2(tri, e)
    # the new diagonal is side 2 of the first triangle
    diag = once.edge_of[3 * (d // 3) + 2]
    assert apply_s2(once, diag).isomorphic(tri)


@settings(max_examples=40, deadline=None)
@given(tori())
def test_simplify_reaches_two_triangles(tri):
    steps = simplify_steps(tri)
    # (#valence 1, #valence 2, #vertices) never goes up between steps
    for a, b in zip(steps, steps[1:]):
        assert b.measure <= a.measure
    for st_ in steps:
        if st_.case == "3.1.a":
            assert len(st_.moves) == 1
    end = replay_surface(tri, simplify_torus(tri), check=lambda t: t.is_torus() or pytest.fail("left the torus"))
    assert (end.triangle_count, end.vertex_count, end.edge_count) == (2, 1, 3)
    assert end.isomorphic(T2)
