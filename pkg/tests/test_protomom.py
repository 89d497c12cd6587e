import random

import pytest
from hypothesis import given, settings, strategies as st

from momkit.corpus import load_triangulation, resolve, small_fixtures
from momkit.mom_subgraph import GENERAL, apply_move, enumerate_moms, legal_moves
from momkit.protomom import (
    SPHERE,
    TORUS,
    InducedProtoMom,
    StructureError,
    assemble_ideal_triangulation,
    brute_force_maximal,
    c_collapse,
    c_expand,
    expand_to_maximal,
    from_mom_coloring,
    full_footprint,
    greedy_removal,
    handle_count_ok,
    induced_lateral_triangulation,
    m_move,
    maximal_structures,
    normalize_to_genuine,
    pachner_bridge,
    relate,
    replay_structure,
    to_mom_coloring,
    verify_structure_connectivity,
)
from momkit.trace import MoveTrace

FIG8 = load_triangulation("fig8.tri")
FIG8_MAX = maximal_structures(FIG8)


def load_struct(name):
    return InducedProtoMom.parse(resolve(name).read_text(), base_dir=resolve(name).parent)


def test_footprint_is_one_sphere_per_tet(fig8):
    raw = full_footprint(fig8)
    assert raw.lateral_kinds() == (SPHERE, SPHERE)
    assert raw.closure_ok()


def test_greedy_removal_on_fig8(fig8):
    rem = greedy_removal(full_footprint(fig8))
    # merging the two balls, then cutting the merged ball open
    assert [r for _, r in rem.deletions] == ["a", "c"]
    assert rem.structure.lateral_kinds() == (TORUS,)
    assert rem.structure.is_tau_maximal()


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 1000), st.sampled_from(["fig8.tri", "m003.tri", "fig8_23.tri"]))
def test_random_removal_lands_on_a_maximal_structure(seed, name):
    tri = load_triangulation(name)
    rem = greedy_removal(full_footprint(tri), "random", random.Random(seed))
    assert len(rem.deletions) == tri.tet_count
    assert rem.structure.key() in {s.key() for s in maximal_structures(tri)}


def test_duality_counts_on_fig8(fig8):
    colorings = enumerate_moms(fig8.dual_graph(), GENERAL)
    assert len(colorings) == 12
    # the t/c split inside a region does not change the kept faces
    assert len(FIG8_MAX) == 6
    assert [s.key() for s in brute_force_maximal(fig8)] == [s.key() for s in FIG8_MAX]


@pytest.mark.parametrize("name", sorted(small_fixtures(3)))
def test_duality_on_small_fixtures(name):
    tri = small_fixtures(3)[name]
    assert {s.key() for s in brute_force_maximal(tri)} == {s.key() for s in maximal_structures(tri)}
    for s in maximal_structures(tri):
        assert handle_count_ok(s)
        assert from_mom_coloring(tri, to_mom_coloring(s)) == s


def test_handle_count_on_fig8():
    for s in FIG8_MAX:
        assert (len(s.kept_edges), len(s.kept_faces)) == (2, 2)


def test_c_pair_cancels(fig8):
    s = InducedProtoMom(fig8, {0, 1}, {0})
    down, tr, stuck = normalize_to_genuine(s)
    assert down.key() == ((0,), ())
    assert tr.kinds() == ["c_collapse"]
    assert stuck == (0,)
    assert c_expand(down, 1, 0) == s
    assert c_collapse(c_expand(down, 1, 0), 1) == down


def test_c_move_preconditions(fig8):
    s = InducedProtoMom(fig8, {0, 1}, {0})
    with pytest.raises(StructureError):
        c_collapse(s, 0)  # valence 2
    with pytest.raises(StructureError):
        c_expand(s, 1, 1)  # edge already kept


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(enumerate_moms(FIG8.dual_graph(), GENERAL)), st.data())
def test_m_moves_commute_with_duality(gamma, data):
    s = from_mom_coloring(FIG8, gamma)
    options = list(legal_moves(gamma))
    if not options:
        return
    mv, out = data.draw(st.sampled_from(options))
    assert m_move(s, mv, gamma) == from_mom_coloring(FIG8, out)
    assert m_move(s, mv, gamma).is_tau_maximal()


def test_relate_replays_between_full_structures():
    full = [s for s in FIG8_MAX if s.is_full()]
    assert [s.key() for s in full] == [((0, 1), (0, 2)), ((0, 1), (1, 3))]
    tr = relate(full[0], full[1])
    end = replay_structure(full[0], MoveTrace.parse(tr.to_text()))[-1]
    assert end.key() == full[1].key()


@pytest.mark.parametrize("pair", [(a, b) for a in range(6) for b in range(6) if a != b])
def test_relate_all_maximal_pairs(pair):
    a, b = (FIG8_MAX[i] for i in pair)
    states = replay_structure(a, relate(a, b))
    assert states[-1].key() == b.key()
    assert all(x.is_internal_valid() for x in states)


def test_expand_to_maximal_fails_from_empty(fig8):
    with pytest.raises(StructureError):
        expand_to_maximal(InducedProtoMom(fig8, set(), set()))


def test_fullness_fixtures():
    full = load_struct("fig8_full.struct")
    annular = load_struct("fig8_annular.struct")
    assert full.is_full() and not annular.is_full()
    assert sorted(chi for _, chi in annular.lakes) == [0, 1, 1]
    assert InducedProtoMom.parse(full.to_text("fig8.tri"), base_dir=resolve("fig8.tri").parent) == full


def test_assembly_on_full_structure():
    s = load_struct("fig8_full.struct")
    new, s2, cert = assemble_ideal_triangulation(s)
    assert cert.ok
    assert new.is_valid()
    assert [g for _, g in new.boundary_genera()] == [1]
    assert induced_lateral_triangulation(s, 0).complex is not None


def test_assembly_refuses_annular_lake():
    with pytest.raises(StructureError):
        assemble_ideal_triangulation(load_struct("fig8_annular.struct"))


def test_bridge_expansions_are_maximal(fig8):
    for face in range(4):
        for s in FIG8_MAX:
            if face in s.kept_faces:
                continue
            br = pachner_bridge(s, face)
            outs = [c_expand(br.structure, e, f) for e, f in br.expansions]
            assert len(outs) == 3
            for out in outs:
                assert out.tri.is_valid()
                assert out.is_tau_maximal()


def test_bridge_rejects_kept_face():
    s = FIG8_MAX[0]
    with pytest.raises(StructureError):
        pachner_bridge(s, min(s.kept_faces))


def test_connectivity_on_fig8(fig8):
    cert = verify_structure_connectivity(fig8)
    assert cert.full_states == 2
    assert cert.connected
