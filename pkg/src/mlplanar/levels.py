"""Multilevel assignments as interval sets and the normal-form transform.

A vertex's admissible levels are a finite integer set stored as sorted
disjoint intervals, so dense ranges stay O(1) per vertex. The normal
form tightens every set so that the minimum and maximum admissible
levels strictly increase along every edge; feasibility of drawings is
unchanged. All bound propagation here works on interval lists, never on
expanded element sets.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import CyclicGraph, EmptyLevelSet, StructureError
from .graph import EmbeddedDigraph, VertexId, topological_order


@dataclass(frozen=True)
class IntervalSet:
    """Sorted disjoint closed integer intervals; adjacent runs are merged."""

    intervals: tuple[tuple[int, int], ...]

    @staticmethod
    def from_intervals(pairs: Iterable[tuple[int, int]]) -> "IntervalSet":
        items = sorted((int(lo), int(hi)) for lo, hi in pairs)
        for lo, hi in items:
            if lo > hi:
                raise StructureError(f"interval [{lo}, {hi}] is empty")
        merged: list[list[int]] = []
        for lo, hi in items:
            if merged and lo <= merged[-1][1] + 1:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        return IntervalSet(tuple((lo, hi) for lo, hi in merged))

    @staticmethod
    def from_values(values: Iterable[int]) -> "IntervalSet":
        return IntervalSet.from_intervals((v, v) for v in values)

    @staticmethod
    def empty() -> "IntervalSet":
        return IntervalSet(())

    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def min(self) -> int:
        if not self.intervals:
            raise EmptyLevelSet("<empty interval set>")
        return self.intervals[0][0]

    @property
    def max(self) -> int:
        if not self.intervals:
            raise EmptyLevelSet("<empty interval set>")
        return self.intervals[-1][1]

    def count(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.intervals)

    def __contains__(self, value: int) -> bool:
        i = bisect_right(self.intervals, (value, float("inf"))) - 1
        return i >= 0 and self.intervals[i][0] <= value <= self.intervals[i][1]

    def __iter__(self) -> Iterator[int]:
        for lo, hi in self.intervals:
            yield from range(lo, hi + 1)

    def first_at_or_above(self, bound: int) -> Optional[int]:
        for lo, hi in self.intervals:
            if hi >= bound:
                return max(lo, bound)
        return None

    def last_at_or_below(self, bound: int) -> Optional[int]:
        for lo, hi in reversed(self.intervals):
            if lo <= bound:
                return min(hi, bound)
        return None

    def clip(self, lo: int, hi: int) -> "IntervalSet":
        """Intersection with the closed range [lo, hi]."""
        if lo > hi:
            return IntervalSet.empty()
        out = []
        for a, b in self.intervals:
            a2, b2 = max(a, lo), min(b, hi)
            if a2 <= b2:
                out.append((a2, b2))
        return IntervalSet(tuple(out))

    def __repr__(self) -> str:
        return "{" + ", ".join(f"[{lo},{hi}]" if lo != hi else str(lo) for lo, hi in self.intervals) + "}"


class MultilevelAssignment:
    """Per-vertex admissible level sets (the multilevel assignment)."""

    def __init__(self, levels: dict[VertexId, IntervalSet]):
        self.levels = dict(levels)

    def __getitem__(self, v: VertexId) -> IntervalSet:
        return self.levels[v]

    def __contains__(self, v: VertexId) -> bool:
        return v in self.levels

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MultilevelAssignment) and self.levels == other.levels

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}: {s!r}" for v, s in sorted(self.levels.items()))
        return f"MultilevelAssignment({{{inner}}})"

    @staticmethod
    def from_dict(d: dict[VertexId, Iterable[int]]) -> "MultilevelAssignment":
        return MultilevelAssignment({v: IntervalSet.from_values(vals) for v, vals in d.items()})

    @staticmethod
    def from_intervals(d: dict[VertexId, Iterable[tuple[int, int]]]) -> "MultilevelAssignment":
        return MultilevelAssignment({v: IntervalSet.from_intervals(ivs) for v, ivs in d.items()})

    def require_total(self, g: EmbeddedDigraph) -> None:
        missing = [v for v in g.vertices if v not in self.levels]
        if missing:
            raise StructureError(f"multilevel assignment missing vertices {missing}")

    def empty_vertices(self, order: Iterable[VertexId]) -> list[VertexId]:
        return [v for v in order if self.levels[v].is_empty()]

    def global_min(self) -> int:
        return min(s.min for s in self.levels.values() if not s.is_empty())

    def global_max(self) -> int:
        return max(s.max for s in self.levels.values() if not s.is_empty())


class LevelAssignment:
    """One concrete integer level per vertex, strictly increasing along edges."""

    def __init__(self, gamma: dict[VertexId, int]):
        self.gamma = dict(gamma)

    def __getitem__(self, v: VertexId) -> int:
        return self.gamma[v]

    def __contains__(self, v: VertexId) -> bool:
        return v in self.gamma

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LevelAssignment) and self.gamma == other.gamma

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}: {y}" for v, y in sorted(self.gamma.items()))
        return f"LevelAssignment({{{inner}}})"

    @property
    def min(self) -> int:
        return min(self.gamma.values())

    @property
    def max(self) -> int:
        return max(self.gamma.values())

    def validate(self, g: EmbeddedDigraph) -> None:
        for eid, tail, head in g.edges:
            if self.gamma[tail] >= self.gamma[head]:
                raise StructureError(
                    f"edge {eid!r} violates strict level increase: "
                    f"{tail!r}@{self.gamma[tail]} -> {head!r}@{self.gamma[head]}"
                )


def normalize(g: EmbeddedDigraph, levels: MultilevelAssignment) -> MultilevelAssignment:
    """Tighten a multilevel assignment to normal form.

    A forward pass over a topological order raises each vertex's lower
    bound above all its in-neighbors' lower bounds; a backward pass
    caps the upper bound below all out-neighbors' upper bounds. Both
    bounds are snapped to attainable members of the vertex's own set,
    which is what makes min and max strictly increase along edges
    whenever all resulting sets are nonempty. Drawings admissible under
    the input are exactly those admissible under the result.

    The result at each vertex is exactly the set of levels the vertex
    takes in some valid level assignment; in particular, when no valid
    assignment exists every resulting set is empty. Use
    infeasible_vertex to blame the first vertex that fails.
    """
    levels.require_total(g)
    tau = topological_order(g)  # raises CyclicGraph
    order = sorted(g.vertices, key=lambda v: tau[v])

    if infeasible_vertex(g, levels) is not None:
        # no level assignment exists at all, so the set of attainable
        # levels is empty at every vertex; this also makes the
        # transform trivially idempotent on infeasible inputs
        return MultilevelAssignment({v: IntervalSet.empty() for v in g.vertices})

    lower: dict[VertexId, int] = {}
    for v in order:
        s = levels[v]
        bound = s.min
        for eid in g.in_edges[v]:
            w = g.edge(eid)[1]
            bound = max(bound, lower[w] + 1)
        snapped = s.first_at_or_above(bound)
        assert snapped is not None  # guaranteed by the feasibility pass
        lower[v] = snapped

    upper: dict[VertexId, int] = {}
    for v in reversed(order):
        s = levels[v]
        bound = s.max
        for eid in g.out_edges[v]:
            w = g.edge(eid)[2]
            bound = min(bound, upper[w] - 1)
        snapped = s.last_at_or_below(bound)
        assert snapped is not None  # feasibility gives u >= l pointwise
        upper[v] = snapped

    return MultilevelAssignment({v: levels[v].clip(lower[v], upper[v]) for v in g.vertices})


def infeasible_vertex(g: EmbeddedDigraph, levels: MultilevelAssignment) -> Optional[VertexId]:
    """First vertex, in topological order, where no admissible level exists.

    Runs the forward lower-bound pass alone; returns None exactly when a
    valid level assignment within the given sets exists. Used to blame
    the right vertex in pipeline diagnostics.
    """
    levels.require_total(g)
    tau = topological_order(g)
    order = sorted(g.vertices, key=lambda v: tau[v])
    lower: dict[VertexId, int] = {}
    for v in order:
        s = levels[v]
        if s.is_empty():
            return v
        bound = s.min
        for eid in g.in_edges[v]:
            w = g.edge(eid)[1]
            bound = max(bound, lower[w] + 1)
        snapped = s.first_at_or_above(bound)
        if snapped is None:
            return v
        lower[v] = snapped
    return None


def min_assignment(g: EmbeddedDigraph, normalized: MultilevelAssignment) -> LevelAssignment:
    """The level assignment picking each vertex's minimum admissible level.

    Requires the input to be in normal form with all sets nonempty;
    raises EmptyLevelSet naming the first infeasible vertex in
    topological order otherwise.
    """
    normalized.require_total(g)
    tau = topological_order(g)
    for v in sorted(g.vertices, key=lambda v: tau[v]):
        if normalized[v].is_empty():
            raise EmptyLevelSet(v)
    gamma = LevelAssignment({v: normalized[v].min for v in g.vertices})
    gamma.validate(g)
    return gamma


def from_level_assignment(gamma: LevelAssignment) -> MultilevelAssignment:
    """Reduce level planarity to multilevel planarity: singleton sets."""
    return MultilevelAssignment(
        {v: IntervalSet.from_values([y]) for v, y in gamma.gamma.items()}
    )


def full_range(g: EmbeddedDigraph) -> MultilevelAssignment:
    """Reduce upward planarity to multilevel planarity: every level 1..|V|."""
    n = len(g.vertices)
    if n == 0:
        return MultilevelAssignment({})
    return MultilevelAssignment(
        {v: IntervalSet.from_intervals([(1, n)]) for v in g.vertices}
    )
