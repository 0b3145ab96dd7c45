import pytest

from mlplanar.errors import SearchSpaceTooLarge
from mlplanar.leveldraw import check_drawing
from mlplanar.levels import LevelAssignment, MultilevelAssignment, full_range
from mlplanar.oracle import (
    enumerate_assignments,
    level_planar_bruteforce,
    multilevel_planar_bruteforce,
)

from .helpers import build, embed_by_coordinates


def test_enumerate_single_assignment():
    g = build(["u", "v"], ["u->v"])
    ml = MultilevelAssignment.from_dict({"u": [1, 2], "v": [1, 2]})
    gammas = list(enumerate_assignments(g, ml))
    assert gammas == [LevelAssignment({"u": 1, "v": 2})]


def test_enumerate_isolated_vertex():
    g = build(["x"], [])
    ml = MultilevelAssignment.from_dict({"x": [3, 5]})
    assert len(list(enumerate_assignments(g, ml))) == 2


def test_enumerate_cyclic_yields_nothing_via_error():
    g = build(["a", "b"], ["a->b", "b->a"])
    ml = MultilevelAssignment.from_dict({"a": [1], "b": [2]})
    res = multilevel_planar_bruteforce(g, ml)
    assert not res.planar and res.witness is None


def test_enumerate_cap():
    g = build([f"v{i}" for i in range(8)], [])
    ml = MultilevelAssignment.from_intervals({f"v{i}": [(0, 9)] for i in range(8)})
    with pytest.raises(SearchSpaceTooLarge):
        list(enumerate_assignments(g, ml, cap=10**6))


def test_diamond_level_planar():
    g = build(["s", "a", "b", "t"], ["s->a", "s->b", "a->t", "b->t"])
    gamma = LevelAssignment({"s": 0, "a": 1, "b": 1, "t": 2})
    assert level_planar_bruteforce(g, gamma)


def test_k22_two_levels_needs_crossing():
    # complete bipartite orientation on two levels is never level planar
    g = build(["s1", "s2", "t1", "t2"], ["s1->t1", "s1->t2", "s2->t1", "s2->t2"])
    gamma = LevelAssignment({"s1": 0, "s2": 0, "t1": 1, "t2": 1})
    assert not level_planar_bruteforce(g, gamma)


def test_trees_always_level_planar_smoke():
    g = build(["r", "a", "b", "c", "d"], ["r->a", "r->b", "a->c", "a->d"])
    for gamma in enumerate_assignments(g, full_range(g)):
        assert level_planar_bruteforce(g, gamma)


def test_multilevel_infeasible_edge():
    g = build(["a", "b"], ["a->b"])
    ml = MultilevelAssignment.from_dict({"a": [2], "b": [1]})
    assert not multilevel_planar_bruteforce(g, ml).planar


def test_alternating_cycle_single_slot_not_planar():
    g = build(["s1", "t1", "s2", "t2"], ["s1->t1", "s2->t1", "s2->t2", "s1->t2"])
    ml = MultilevelAssignment.from_dict({"s1": [0], "s2": [0], "t1": [1], "t2": [1]})
    assert not multilevel_planar_bruteforce(g, ml).planar


def test_alternating_cycle_relaxed_is_planar():
    g = build(["s1", "t1", "s2", "t2"], ["s1->t1", "s2->t1", "s2->t2", "s1->t2"])
    ml = MultilevelAssignment.from_intervals({v: [(0, 3)] for v in g.vertices})
    res = multilevel_planar_bruteforce(g, ml)
    assert res.planar
    report = check_drawing(g, ml, res.witness.drawing)
    assert report.ok, report


def test_diamond_witness_validates():
    g = build(["s", "a", "b", "t"], ["s->a", "s->b", "a->t", "b->t"])
    ml = full_range(g)
    res = multilevel_planar_bruteforce(g, ml)
    assert res.planar
    assert res.witness is not None
    assert check_drawing(g, ml, res.witness.drawing).ok
    # every true verdict ships a witness whose gamma the drawing realizes
    for v in g.vertices:
        assert res.witness.drawing.vertex_pos[v][1] == res.witness.gamma[v]


def test_fixed_embedding_implies_free():
    g = embed_by_coordinates(
        {"s": (0, 0), "a": (-1, 1), "b": (1, 1), "t": (0, 2)},
        ["s->a", "s->b", "a->t", "b->t"],
    )
    ml = full_range(g)
    fixed = multilevel_planar_bruteforce(g, ml, rotation=g.rotation)
    free = multilevel_planar_bruteforce(g, ml)
    assert fixed.planar
    assert free.planar


def test_fixed_embedding_outer_face_constrains():
    # triangle with a pendant sink inside: with the pure triangle side
    # chosen as outer face the pendant is trapped below the apex
    g = embed_by_coordinates(
        {"s": (0, 0), "a": (2, 1), "v": (1, 2), "w": (1.2, 2.8)},
        ["s->a", "s->v", "a->v", "v->w"],
    )
    # geometry places w's spur in the face s,a,v on the right side
    ml = full_range(g)
    assert multilevel_planar_bruteforce(g, ml, rotation=g.rotation).planar

    # redesignate the outer face as the other side of the same edge
    from mlplanar.graph import EmbeddedDigraph

    eid, side = g.outer_face
    other = "right" if side == "left" else "left"
    g2 = EmbeddedDigraph(g.vertices, g.edges, rotation=g.rotation, outer_face=(eid, other))
    assert not multilevel_planar_bruteforce(g2, ml, rotation=g2.rotation).planar
