import pytest
from hypothesis import given, settings, strategies as st

from momkit.corpus import load_triangulation
from momkit.ideal_tri import (
    IdealTriangulation,
    TriangulationError,
    boundary_surface,
    complete_perm,
    pachner23,
    perm_compose,
    perm_inverse,
    perm_sign,
)


def test_perm_helpers():
    p = (1, 2, 3, 0)
    assert perm_compose(p, perm_inverse(p)) == (0, 1, 2, 3)
    assert perm_sign(p) == -1
    assert complete_perm({0: 2, 1: 3, 2: 0}) == (2, 3, 0, 1)


def test_figure_eight(fig8):
    rep = fig8.validate()
    assert rep.valid
    assert rep.summary() == "2 tets, 2 edge classes, boundary genus 1"
    assert sorted(ec.degree for ec in fig8.edge_classes) == [6, 6]
    assert fig8.homology_h1() == (1, ())
    assert fig8.dual_graph().is_four_valent()


def test_m003_has_torsion():
    tri = load_triangulation("m003.tri")
    assert tri.boundary_genera() == [(0, 1)]
    assert tri.homology_h1() == (1, (5,))


def test_genus_two_link():
    tri = load_triangulation("genus2.tri")
    assert [g for _, g in tri.boundary_genera()] == [2]
    assert [ec.degree for ec in tri.edge_classes] == [12]
    # a compact 3-manifold with genus-2 boundary has b1 at least 2
    assert tri.homology_h1()[0] >= 2


def test_text_round_trip(fig8):
    assert IdealTriangulation.parse(fig8.to_text()) == fig8


def test_parse_errors():
    with pytest.raises(TriangulationError):
        IdealTriangulation.parse("glue 0.0 0.1 perm=123\n")
    with pytest.raises(TriangulationError):
        IdealTriangulation.parse("tets 1\nglue 0.0 0.1 perm=12\n")


def test_open_complex_fails_validation():
    one = IdealTriangulation.from_gluings(1, [(0, 3, 0, (1, 2, 3, 0))])
    rep = one.validate()
    assert not rep.valid
    assert sum("unglued" in v for v in rep.violations) == 2
    with pytest.raises(TriangulationError):
        one.boundary_genera()


def test_orientation_reversing_gluing_flagged():
    # identity gluings alone give the double of a ball; swapping two corners on one face breaks it
    gl = [(0, f, 1, (0, 1, 2, 3)) for f in range(3)] + [(0, 3, 1, (1, 0, 2, 3))]
    bad = IdealTriangulation.from_gluings(2, gl)
    assert any("orientation" in v for v in bad.validate().violations)


def test_boundary_of_layered_base_is_a_torus():
    one = IdealTriangulation.from_gluings(1, [(0, 3, 0, (1, 2, 3, 0))])
    bs = boundary_surface(one)
    assert bs.surface.triangle_count == 2
    assert bs.surface.is_torus()


def test_pachner_counts(fig8):
    res = pachner23(fig8, 0)
    new = res.triangulation
    assert new.tet_count == 3
    assert len(new.face_classes) == 6
    assert len(new.edge_classes) == 3
    assert new.edge_classes[res.new_edge].degree == 3
    assert new.homology_h1() == fig8.homology_h1()
    assert [g for _, g in new.boundary_genera()] == [1]
    assert set(res.face_map) == {1, 2, 3}
    assert len(set(res.face_map.values()) | set(res.new_faces)) == 6


def test_pachner_rejects_self_glued_face():
    tri = load_triangulation("genus2.tri")
    with pytest.raises(TriangulationError):
        pachner23(tri, tri.face_class_of[(0, 0)])


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["fig8.tri", "m003.tri", "genus2.tri"]),
       st.lists(st.integers(0, 100), min_size=1, max_size=3))
def test_pachner_preserves_invariants(name, picks):
    tri = load_triangulation(name)
    h1, genera = tri.homology_h1(), sorted(g for _, g in tri.boundary_genera())
    for k in picks:
        ok = [i for i, (a, b) in enumerate(tri.face_classes) if a[0] != b[0]]
        if not ok:
            break
        res = pachner23(tri, ok[k % len(ok)])
        new = res.triangulation
        assert new.is_valid()
        assert len(new.edge_classes) == len(tri.edge_classes) + 1
        assert sum(ec.degree for ec in new.edge_classes) == 6 * new.tet_count
        tri = new
    assert tri.homology_h1() == h1
    assert sorted(g for _, g in tri.boundary_genera()) == genera
