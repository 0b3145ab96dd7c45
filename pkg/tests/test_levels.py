import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlplanar.errors import CyclicGraph, EmptyLevelSet
from mlplanar.levels import (
    IntervalSet,
    LevelAssignment,
    MultilevelAssignment,
    from_level_assignment,
    full_range,
    infeasible_vertex,
    min_assignment,
    normalize,
)

from .helpers import build


# -- IntervalSet ---------------------------------------------------------------


def test_interval_merge_and_membership():
    s = IntervalSet.from_intervals([(5, 7), (1, 2), (3, 4)])
    assert s.intervals == ((1, 7),)
    assert 6 in s and 0 not in s and 8 not in s


def test_interval_nonadjacent_kept_separate():
    s = IntervalSet.from_intervals([(1, 2), (4, 5)])
    assert s.intervals == ((1, 2), (4, 5))
    assert 3 not in s
    assert list(s) == [1, 2, 4, 5]
    assert s.count() == 4


def test_interval_clip_and_snap():
    s = IntervalSet.from_intervals([(0, 0), (5, 9)])
    assert s.first_at_or_above(1) == 5
    assert s.first_at_or_above(7) == 7
    assert s.last_at_or_below(4) == 0
    assert s.clip(1, 6).intervals == ((5, 6),)
    assert s.clip(10, 20).is_empty()


# -- normalize -----------------------------------------------------------------


def test_normalize_path_derived():
    # hand-run of both passes, cross-checked against the oracle in
    # test_acceptance (feasibility preservation suite)
    g = build(["u", "v", "w"], ["u->v", "v->w"])
    ml = MultilevelAssignment.from_dict({"u": [1, 3], "v": [1, 2, 3], "w": [2, 3]})
    out = normalize(g, ml)
    assert out["u"] == IntervalSet.from_values([1])
    assert out["v"] == IntervalSet.from_values([2])
    assert out["w"] == IntervalSet.from_values([3])


def test_normalize_infeasible_edge():
    g = build(["a", "b"], ["a->b"])
    ml = MultilevelAssignment.from_dict({"a": [2], "b": [1]})
    out = normalize(g, ml)
    assert out["b"].is_empty()


def test_normalize_isolated_vertex():
    g = build(["x"], [])
    ml = MultilevelAssignment.from_dict({"x": [7]})
    assert normalize(g, ml)["x"] == IntervalSet.from_values([7])


def test_normalize_gap_snapping_keeps_normal_form():
    # raw bound propagation would leave min(v) above a later-min vertex
    g = build(["a", "u", "v"], ["a->u", "u->v"])
    ml = MultilevelAssignment.from_dict({"a": [2], "u": [0, 5], "v": [4, 8]})
    out = normalize(g, ml)
    assert out["u"] == IntervalSet.from_values([5])
    assert out["v"] == IntervalSet.from_values([8])
    for _e, t, h in g.edges:
        assert out[t].min < out[h].min
        assert out[t].max < out[h].max


def test_normalize_rejects_cyclic():
    g = build(["a", "b"], ["a->b", "b->a"])
    ml = MultilevelAssignment.from_dict({"a": [1], "b": [2]})
    with pytest.raises(CyclicGraph):
        normalize(g, ml)


def test_normalize_idempotent_example():
    g = build(["s", "a", "b", "t"], ["s->a", "s->b", "a->t", "b->t"])
    ml = MultilevelAssignment.from_intervals({v: [(0, 6)] for v in g.vertices})
    once = normalize(g, ml)
    twice = normalize(g, once)
    assert once == twice


@st.composite
def dag_with_levels(draw):
    n = draw(st.integers(min_value=1, max_value=6))
    names = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                edges.append(f"v{i}->v{j}")
    ml = {}
    for name in names:
        vals = draw(st.lists(st.integers(min_value=0, max_value=8), min_size=1, max_size=4))
        ml[name] = vals
    return build(names, edges), MultilevelAssignment.from_dict(ml)


@settings(max_examples=120, deadline=None, derandomize=True)
@given(dag_with_levels())
def test_normalize_properties(case):
    g, ml = case
    out = normalize(g, ml)
    # monotone shrinking
    for v in g.vertices:
        assert all(x in ml[v] for x in out[v])
    # idempotence
    again = normalize(g, out)
    assert again == out
    # normal-form inequalities when everything is nonempty
    if all(not out[v].is_empty() for v in g.vertices):
        for _e, t, h in g.edges:
            assert out[t].min < out[h].min
            assert out[t].max < out[h].max


# -- min_assignment & constructors ----------------------------------------------


def test_min_assignment_singletons():
    g = build(["u", "v"], ["u->v"])
    ml = MultilevelAssignment.from_dict({"u": [1], "v": [2]})
    gamma = min_assignment(g, normalize(g, ml))
    assert gamma.gamma == {"u": 1, "v": 2}


def test_min_assignment_takes_minima():
    g = build(["u", "v"], ["u->v"])
    ml = MultilevelAssignment.from_dict({"u": [0, 5], "v": [3, 9]})
    gamma = min_assignment(g, normalize(g, ml))
    assert gamma.gamma == {"u": 0, "v": 3}


def test_min_assignment_raises_on_empty_sets():
    g = build(["a", "b", "c"], ["a->b", "b->c"])
    ml = MultilevelAssignment.from_dict({"a": [2], "b": [1], "c": [1]})
    with pytest.raises(EmptyLevelSet):
        min_assignment(g, normalize(g, ml))


def test_infeasible_vertex_blames_first_forward_failure():
    g = build(["a", "b"], ["a->b"])
    ml = MultilevelAssignment.from_dict({"a": [2], "b": [1]})
    assert infeasible_vertex(g, ml) == "b"
    ok = MultilevelAssignment.from_dict({"a": [2], "b": [3]})
    assert infeasible_vertex(g, ok) is None


def test_from_level_assignment():
    gamma = LevelAssignment({"a": 1, "b": 2})
    ml = from_level_assignment(gamma)
    assert ml["a"] == IntervalSet.from_values([1])
    assert ml["b"] == IntervalSet.from_values([2])


def test_full_range():
    g = build(["a", "b", "c", "d"], ["a->b"])
    ml = full_range(g)
    for v in g.vertices:
        assert ml[v] == IntervalSet.from_intervals([(1, 4)])


def test_full_range_empty_graph():
    g = build([], [])
    assert full_range(g).levels == {}
