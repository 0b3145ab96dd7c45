import pytest

from mlplanar.errors import (
    CyclicGraph,
    MissingRotation,
    NonPlanarRotation,
    ParallelEdgesError,
    StructureError,
)
from mlplanar.graph import (
    EmbeddedDigraph,
    classify_structure,
    compute_faces,
    cycle_vertex_sequence,
    topological_order,
)

from .helpers import build, embed_by_coordinates


# -- compute_faces ----------------------------------------------------------


def test_single_edge_has_one_face_of_two_darts():
    g = build(["u", "v"], ["u->v"], rotation={"u": ["e0"], "v": ["e0"]})
    faces = compute_faces(g)
    assert len(faces.faces) == 1
    assert len(faces.faces[0].boundary) == 2


def test_acyclic_triangle_has_two_faces():
    g = embed_by_coordinates({"a": (0, 0), "b": (2, 1), "c": (1, 2)}, ["a->b", "a->c", "b->c"])
    faces = compute_faces(g)
    assert len(faces.faces) == 2


K4_COORDS = {"a": (0, 0), "b": (3, 1), "c": (1, 2), "d": (0, 4)}
K4_EDGES = ["a->b", "a->c", "a->d", "b->c", "b->d", "c->d"]


def test_k4_orientation_has_four_faces():
    g = embed_by_coordinates(K4_COORDS, K4_EDGES)
    faces = compute_faces(g)
    assert len(faces.faces) == 4


def test_face_boundary_lengths_sum_to_twice_edges():
    g = embed_by_coordinates(
        {"s": (0, 0), "a": (-1, 1), "b": (1, 1), "t": (0, 2)},
        ["s->a", "s->b", "a->t", "b->t"],
    )
    faces = compute_faces(g)
    assert sum(len(f.boundary) for f in faces.faces) == 2 * len(g.edges)


def test_bad_rotation_fails_euler():
    # K4 with one vertex's rotation reflected is no longer planar
    g = embed_by_coordinates(K4_COORDS, K4_EDGES)
    rot = {v: list(ends) for v, ends in g.rotation.items()}
    assert len(rot["a"]) == 3
    rot["a"] = [rot["a"][1], rot["a"][0], rot["a"][2]]
    g2 = EmbeddedDigraph(g.vertices, g.edges, rotation=rot)
    with pytest.raises(NonPlanarRotation):
        compute_faces(g2)


def test_missing_rotation_rejected():
    g = build(["u", "v"], ["u->v"])
    with pytest.raises(MissingRotation):
        compute_faces(g)


def test_parallel_edges_rejected_by_faces():
    g = EmbeddedDigraph(
        ["u", "v"],
        [("e0", "u", "v"), ("e1", "u", "v")],
        rotation={"u": ["e0", "e1"], "v": ["e1", "e0"]},
    )
    with pytest.raises(ParallelEdgesError):
        compute_faces(g)


def test_self_loop_rejected_at_construction():
    with pytest.raises(StructureError):
        EmbeddedDigraph(["u"], [("e0", "u", "u")])


def test_outer_face_marked():
    g = embed_by_coordinates(
        {"s": (0, 0), "a": (-1, 1), "b": (1, 1), "t": (0, 2)},
        ["s->a", "s->b", "a->t", "b->t"],
    )
    faces = compute_faces(g)
    outer = faces.outer
    assert outer is not None
    assert sum(f.is_outer for f in faces.faces) == 1
    assert set(faces.boundary_vertices(outer)) == {"s", "a", "b", "t"}


# -- topological_order --------------------------------------------------------


def test_topological_order_path():
    g = build(["a", "b", "c"], ["a->b", "b->c"])
    assert topological_order(g) == {"a": 1, "b": 2, "c": 3}


def test_topological_order_cycle_witness():
    g = build(["a", "b", "c"], ["a->b", "b->c", "c->a"])
    with pytest.raises(CyclicGraph) as ei:
        topological_order(g)
    cyc = ei.value.cycle
    assert sorted(cyc) == ["a", "b", "c"]


def test_topological_order_diamond_tie_break():
    g = build(["s", "a", "b", "t"], ["s->a", "s->b", "a->t", "b->t"])
    tau = topological_order(g)
    assert tau["s"] == 1 and tau["t"] == 4
    assert tau["a"] == 2 and tau["b"] == 3  # id order breaks the tie


def test_topological_order_respects_all_edges():
    g = build(
        ["a", "b", "c", "d", "e"],
        ["a->c", "b->c", "c->d", "b->e", "d->e"],
    )
    tau = topological_order(g)
    for _eid, t, h in g.edges:
        assert tau[t] < tau[h]


# -- classify_structure -------------------------------------------------------


def test_classify_st_graph():
    g = build(["s", "a", "b", "t"], ["s->a", "s->b", "a->t", "b->t", "s->t"])
    info = classify_structure(g)
    assert info.category == "st_graph"
    assert info.sources == ("s",)
    assert info.sinks == ("t",)


def test_classify_star_is_sT():
    g = build(["s", "a", "b", "c"], ["s->a", "s->b", "s->c"])
    info = classify_structure(g)
    assert info.category == "sT_graph"
    assert info.sinks == ("a", "b", "c")


def test_classify_alternating_cycle():
    g = build(["s1", "t1", "s2", "t2"], ["s1->t1", "s2->t1", "s2->t2", "s1->t2"])
    info = classify_structure(g)
    assert info.category == "oriented_cycle"
    assert info.sources == ("s1", "s2")
    assert info.sinks == ("t1", "t2")


def test_classify_directed_cycle_is_cycle():
    g = build(["a", "b", "c"], ["a->b", "b->c", "c->a"])
    assert classify_structure(g).category == "oriented_cycle"


def test_classify_other():
    g = build(["a", "b", "c", "d"], ["a->b", "c->d"])
    assert classify_structure(g).category == "other"


def test_cycle_vertex_sequence_canonical():
    g = build(["s1", "t1", "s2", "t2"], ["s1->t1", "s2->t1", "s2->t2", "s1->t2"])
    seq = cycle_vertex_sequence(g)
    assert seq[0] == "s1"
    assert set(seq) == {"s1", "t1", "s2", "t2"}
    assert len(seq) == 4
