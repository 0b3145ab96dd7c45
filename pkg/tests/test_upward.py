import pytest

from mlplanar.errors import StructureError
from mlplanar.graph import EmbeddedDigraph, classify_structure, compute_faces
from mlplanar.leveldraw import check_drawing
from mlplanar.levels import MultilevelAssignment, full_range
from mlplanar.oracle import multilevel_planar_bruteforce
from mlplanar import upward
from mlplanar.upward import (
    apply_augmentation,
    canonical_st_augmentation,
    top_vertex_per_face,
    upward_planar_embedded_sT,
)

from .helpers import build, embed_by_coordinates

DIAMOND_COORDS = {"s": (0, 0), "a": (-1, 1), "b": (1, 1), "t": (0, 2)}
DIAMOND_EDGES = ["s->a", "s->b", "a->t", "b->t"]


def diamond():
    return embed_by_coordinates(DIAMOND_COORDS, DIAMOND_EDGES)


def star():
    return embed_by_coordinates(
        {"s": (0, 0), "a": (-1, 1), "b": (0, 1), "c": (1, 1)},
        ["s->a", "s->b", "s->c"],
    )


def flipped_triangle_pendant():
    """Triangle with a pendant sink, outer face on the pure-triangle side."""
    g = embed_by_coordinates(
        {"s": (0, 0), "a": (2, 1), "v": (1, 2), "w": (1.2, 2.8)},
        ["s->a", "s->v", "a->v", "v->w"],
    )
    eid, side = g.outer_face
    other = "right" if side == "left" else "left"
    return EmbeddedDigraph(g.vertices, g.edges, rotation=g.rotation, outer_face=(eid, other))


def test_diamond_upward_and_plan_only_closes():
    g = diamond()
    res = upward_planar_embedded_sT(g)
    assert res.upward
    plan = res.plan
    # the single sink is canceled straight at the new global sink
    assert all(pe.head == plan.t_id for pe in plan.edges)
    assert [pe.tail for pe in plan.edges] == ["t"]


def test_star_upward_all_sinks_cancel_to_global_sink():
    g = star()
    res = upward_planar_embedded_sT(g)
    assert res.upward
    plan = canonical_st_augmentation(g)
    assert sorted(pe.tail for pe in plan.edges) == ["a", "b", "c"]
    assert all(pe.head == plan.t_id for pe in plan.edges)
    aug = apply_augmentation(g, plan)
    assert classify_structure(aug).category == "st_graph"


def test_flipped_pendant_rejected_and_oracle_agrees():
    g = flipped_triangle_pendant()
    res = upward_planar_embedded_sT(g)
    assert not res.upward
    assert not multilevel_planar_bruteforce(g, full_range(g), rotation=g.rotation).planar


def test_non_sT_rejected():
    g = build(["a", "b", "c", "d"], ["a->c", "b->c"])  # two sources
    with pytest.raises(StructureError):
        upward_planar_embedded_sT(g)


def test_single_vertex_accepted():
    g = EmbeddedDigraph(["s"], [], rotation={"s": []})
    res = upward_planar_embedded_sT(g)
    assert res.upward
    aug = apply_augmentation(g, res.plan)
    assert classify_structure(aug).category == "st_graph"


def test_augmentation_invariants():
    g = diamond()
    plan = canonical_st_augmentation(g)
    aug = apply_augmentation(g, plan)
    info = classify_structure(aug)
    assert info.category == "st_graph"
    assert len(info.sources) == 1 and len(info.sinks) == 1
    # the rotation of the augmented graph extends the rotation of G
    for v in g.vertices:
        old = [e for e in aug.rotation[v] if e in {eid for eid, _t, _h in g.edges}]
        # cyclic equality of the restriction
        i = old.index(g.rotation[v][0])
        assert old[i:] + old[:i] == g.rotation[v]


def test_top_vertex_diamond_inner_face():
    g = diamond()
    res = upward_planar_embedded_sT(g)
    tops = top_vertex_per_face(g, res.plan)
    assert len(tops) == 1
    assert set(tops.values()) == {"t"}


def nested_quads_with_pendant():
    """Two nested quads over s with a pendant inside the middle face.

    The middle face has sink switches t1, t2, d; its top vertex is t2.
    """
    return embed_by_coordinates(
        {"s": (0, 0), "x": (-2, 1), "y": (2, 1), "t1": (0, 2), "d": (0.5, 2.5), "t2": (0, 4)},
        ["s->x", "s->y", "x->t1", "y->t1", "x->t2", "y->t2", "x->d"],
    )


def test_top_vertex_face_with_two_candidate_targets():
    g = nested_quads_with_pendant()
    res = upward_planar_embedded_sT(g)
    assert res.upward
    plan = canonical_st_augmentation(g)
    tops = top_vertex_per_face(g, plan)
    faces = compute_faces(g)
    # d sits in the face bounded by t1, t2: it must cancel at that face's
    # top t2, never at the other sink switch t1
    (d_edge,) = [pe for pe in plan.edges if pe.tail == "d"]
    assert d_edge.head == "t2"
    (t1_edge,) = [pe for pe in plan.edges if pe.tail == "t1"]
    assert t1_edge.head == "t2"
    assert tops[d_edge.face_id] == "t2"


def test_pipeline_infeasible_edge_blames_head():
    g = embed_by_coordinates({"a": (0, 0), "b": (0, 1)}, ["a->b"])
    ml = MultilevelAssignment.from_dict({"a": [2], "b": [1]})
    res = upward.test_and_draw_embedded_sT(g, ml)
    assert not res.feasible
    assert res.infeasible.stage == "empty_level_set"
    assert res.infeasible.vertex == "b"


def test_pipeline_diamond_full_range():
    g = diamond()
    ml = MultilevelAssignment.from_intervals({v: [(1, 4)] for v in g.vertices})
    res = upward.test_and_draw_embedded_sT(g, ml)
    assert res.feasible
    assert res.gamma.gamma == {"s": 1, "a": 2, "b": 2, "t": 3}
    assert check_drawing(g, ml, res.drawing, rotation=g.rotation).ok


def test_pipeline_negative_fixture_full_range():
    g = flipped_triangle_pendant()
    res = upward.test_and_draw_embedded_sT(g, full_range(g))
    assert not res.feasible
    assert res.infeasible.stage == "not_upward_planar"


def test_pipeline_matches_oracle_on_small_embedded_family():
    cases = [
        diamond(),
        star(),
        nested_quads_with_pendant(),
        flipped_triangle_pendant(),
        embed_by_coordinates(
            {"s": (0, 0), "a": (2, 1), "v": (1, 2), "w": (1.2, 2.8)},
            ["s->a", "s->v", "a->v", "v->w"],
        ),
    ]
    level_sets = [
        lambda g: full_range(g),
        lambda g: MultilevelAssignment.from_intervals({v: [(0, 2)] for v in g.vertices}),
    ]
    for g in cases:
        for mk in level_sets:
            ml = mk(g)
            want = multilevel_planar_bruteforce(g, ml, rotation=g.rotation).planar
            got = upward.test_and_draw_embedded_sT(g, ml)
            assert got.feasible == want, f"verdict mismatch on {g.edges} with {ml}"
            if got.feasible:
                assert check_drawing(g, ml, got.drawing, rotation=g.rotation).ok
