"""Hardness gadgets as instance generators, plus extraction maps and
miniature reference solvers for round-trip testing.

Scheduling with release times and deadlines turns into single-source
and tree-shaped multilevel instances; planar monotone 3-SAT turns into
embedded multi-source instances with at most two admissible levels per
vertex. The generators are paired with exhaustive solvers so that
equivalence can be checked instance by instance at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from .errors import (
    InternalError,
    InvalidDrawing,
    LayoutError,
    SearchSpaceTooLarge,
    StructureError,
)
from .graph import LEFT, EmbeddedDigraph, VertexId
from .leveldraw import Drawing, check_drawing
from .levels import IntervalSet, MultilevelAssignment

SRTD_TASK_CAP = 8
M3SAT_VARIABLE_CAP = 12


# ---------------------------------------------------------------------------
# Scheduling with release times and deadlines
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Task:
    release: int
    deadline: int
    processing: int

    def __post_init__(self):
        if min(self.release, self.deadline, self.processing) < 1:
            raise StructureError("task parameters must be positive integers")

    @property
    def window(self) -> Optional[tuple[int, int]]:
        """Admissible execution levels [release, deadline - 1], if any."""
        if self.release > self.deadline - 1:
            return None
        return (self.release, self.deadline - 1)


@dataclass(frozen=True)
class SrtdInstance:
    tasks: tuple[Task, ...]

    @staticmethod
    def of(triples) -> "SrtdInstance":
        return SrtdInstance(tuple(Task(r, d, p) for r, d, p in triples))


def _task_window_set(task: Task) -> IntervalSet:
    w = task.window
    return IntervalSet.empty() if w is None else IntervalSet.from_intervals([w])


def srtd_to_multilevel(inst: SrtdInstance) -> tuple[EmbeddedDigraph, MultilevelAssignment]:
    """Single-source gadget: per-task paths hung between shared u and v.

    No rotation is emitted; the reduction targets variable-embedding
    instances. Tasks with an empty execution window produce vertices
    with empty level sets, making the instance trivially infeasible.
    """
    vertices: list[VertexId] = ["s", "u", "v"]
    edges = [("b0", "s", "u"), ("b1", "s", "v")]
    levels: dict[VertexId, IntervalSet] = {
        "s": IntervalSet.from_values([-1]),
        "u": IntervalSet.from_values([0]),
        "v": IntervalSet.from_values([0]),
    }
    for i, task in enumerate(inst.tasks, start=1):
        window = _task_window_set(task)
        names = [f"w{i}_{j}" for j in range(1, task.processing + 1)]
        vertices.extend(names)
        for name in names:
            levels[name] = window
        edges.append((f"u{i}", "u", names[0]))
        edges.append((f"v{i}", "v", names[0]))
        for j in range(len(names) - 1):
            edges.append((f"p{i}_{j + 1}", names[j], names[j + 1]))
    return EmbeddedDigraph(vertices, edges), MultilevelAssignment(levels)


def schedule_from_drawing(inst: SrtdInstance, drawing: Drawing) -> list[int]:
    """Read a schedule off a multilevel-planar drawing of the reduction.

    Slot semantics: task i occupies slots sigma_i .. sigma_i + p_i - 1,
    and sigma_i is the level of the first path vertex. The extracted
    schedule is checked against releases, deadlines, and disjointness.
    """
    g, levels = srtd_to_multilevel(inst)
    report = check_drawing(g, levels, drawing)
    if not report.ok:
        raise InvalidDrawing(f"drawing does not certify the reduced instance: {report.violations[:3]}")
    sigma = [drawing.vertex_pos[f"w{i}_1"][1] for i in range(1, len(inst.tasks) + 1)]
    _assert_valid_schedule(inst, sigma)
    return sigma


def _assert_valid_schedule(inst: SrtdInstance, sigma: list[int]) -> None:
    occupied: dict[int, int] = {}
    for i, (task, start) in enumerate(zip(inst.tasks, sigma), start=1):
        if start < task.release or start + task.processing > task.deadline:
            raise InternalError(f"extracted start {start} violates task {i}'s window")
        for slot in range(start, start + task.processing):
            if slot in occupied:
                raise InternalError(f"tasks {occupied[slot]} and {i} overlap at slot {slot}")
            occupied[slot] = i


def srtd_to_tree(inst: SrtdInstance) -> tuple[EmbeddedDigraph, MultilevelAssignment]:
    """Tree-shaped gadget: anchored tripods plus a horizon-filling blocker.

    Every task hangs a tripod off the shared level-0 vertex u: three
    legs from u and the two level-0 anchors a_i, b_i meet at the path's
    first vertex. Because a strictly monotone curve can neither dip
    below its starting level nor pierce a leg, two tripods in a planar
    drawing either sit on opposite sides of u, or one lies entirely
    inside a floor-closed pocket of the other (below its first vertex),
    or its legs vault the other completely (above its last vertex). The
    two sides of u therefore behave like two independent machines, and
    within a side the execution intervals are forced pairwise disjoint.
    An extra blocker task whose window fills the entire horizon occupies
    one side by itself, leaving exactly one-machine scheduling. The long
    edge from c1 below level 0 up to c2 at the maximum deadline carries
    the base; it can always be drawn clear of the tripods.
    """
    d_max = max((t.deadline for t in inst.tasks), default=1)
    horizon = max(d_max, 2)
    vertices: list[VertexId] = ["c1", "c2", "u"]
    edges = [("b0", "c1", "u"), ("b1", "c1", "c2")]
    levels: dict[VertexId, IntervalSet] = {
        "c1": IntervalSet.from_values([-1]),
        "c2": IntervalSet.from_values([horizon]),
        "u": IntervalSet.from_values([0]),
    }

    def add_tripod(i: int | str, window: IntervalSet, length: int) -> None:
        names = [f"w{i}_{j}" for j in range(1, length + 1)]
        vertices.extend(names)
        for name in names:
            levels[name] = window
        vertices.extend([f"a{i}", f"b{i}"])
        levels[f"a{i}"] = IntervalSet.from_values([0])
        levels[f"b{i}"] = IntervalSet.from_values([0])
        edges.append((f"u{i}", "u", names[0]))
        edges.append((f"ea{i}", f"a{i}", names[0]))
        edges.append((f"eb{i}", f"b{i}", names[0]))
        for j in range(len(names) - 1):
            edges.append((f"p{i}_{j + 1}", names[j], names[j + 1]))

    add_tripod("B", IntervalSet.from_intervals([(1, horizon - 1)]), horizon - 1)
    for i, task in enumerate(inst.tasks, start=1):
        add_tripod(i, _task_window_set(task), task.processing)

    g = EmbeddedDigraph(vertices, edges)
    if len(g.weak_components) != 1 or len(g.edges) != len(g.vertices) - 1:
        raise InternalError("tree gadget is not a tree")
    return g, MultilevelAssignment(levels)


def srtd_bruteforce(inst: SrtdInstance, task_cap: int = SRTD_TASK_CAP) -> Optional[list[int]]:
    """Exhaustive search over start slots; first schedule found or None."""
    if len(inst.tasks) > task_cap:
        raise SearchSpaceTooLarge(len(inst.tasks), task_cap)
    sigma: list[int] = []
    occupied: set[int] = set()

    def rec(i: int) -> bool:
        if i == len(inst.tasks):
            return True
        task = inst.tasks[i]
        for start in range(task.release, task.deadline - task.processing + 1):
            slots = set(range(start, start + task.processing))
            if slots & occupied:
                continue
            sigma.append(start)
            occupied.update(slots)
            if rec(i + 1):
                return True
            sigma.pop()
            occupied.difference_update(slots)
        return False

    return list(sigma) if rec(0) else None


# ---------------------------------------------------------------------------
# Planar monotone 3-SAT
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Clause:
    positive: bool
    variables: tuple[str, str, str]


@dataclass(frozen=True)
class MonotoneFormula:
    """Monotone 3-SAT formula with variables in left-to-right order."""

    variables: tuple[str, ...]
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise StructureError("duplicate variable name")
        index = {x: i for i, x in enumerate(self.variables)}
        for c in self.clauses:
            if len(set(c.variables)) != 3:
                raise StructureError("clauses must reference 3 distinct variables")
            for x in c.variables:
                if x not in index:
                    raise StructureError(f"clause references unknown variable {x!r}")

    def var_index(self, x: str) -> int:
        return self.variables.index(x)

    def clause_span(self, c: Clause) -> tuple[int, int]:
        idx = sorted(self.var_index(x) for x in c.variables)
        return idx[0], idx[-1]

    def sorted_vars(self, c: Clause) -> tuple[str, str, str]:
        return tuple(sorted(c.variables, key=self.var_index))  # type: ignore[return-value]

    def satisfied_by(self, assignment: dict[str, bool]) -> bool:
        for c in self.clauses:
            want = c.positive
            if not any(assignment[x] == want for x in c.variables):
                return False
        return True


@dataclass(frozen=True)
class RectLayout:
    """Per-clause nesting depth of a planar rectilinear embedding.

    Depths are positive per side; deeper means farther from the
    variable line. Same-side clause spans must be laminar with the
    inner clause strictly shallower.
    """

    depths: tuple[int, ...]

    def validate(self, formula: MonotoneFormula) -> None:
        if len(self.depths) != len(formula.clauses):
            raise LayoutError("layout must assign a depth to every clause")
        if any(d < 1 for d in self.depths):
            raise LayoutError("depths must be positive")
        for side in (True, False):
            items = [
                (i, c) for i, c in enumerate(formula.clauses) if c.positive == side
            ]
            for (i, ci) in items:
                for (j, cj) in items:
                    if i == j:
                        continue
                    sp1, sp2 = formula.clause_span(ci), formula.clause_span(cj)
                    if min(sp1[1], sp2[1]) < max(sp1[0], sp2[0]):
                        continue  # disjoint spans
                    if sp1[0] <= sp2[0] and sp2[1] <= sp1[1] and sp1 != sp2:
                        if self.depths[j] >= self.depths[i]:
                            raise LayoutError(
                                f"nested clause span {sp2} inside {sp1} needs strictly smaller depth"
                            )
                        # the nested clause must fit one compartment of the
                        # outer clause, or its middle arc crosses the nested
                        # clause's segment
                        mid = formula.var_index(formula.sorted_vars(ci)[1])
                        if not (sp2[1] <= mid or mid <= sp2[0]):
                            raise LayoutError(
                                f"clause span {sp2} straddles the middle variable of {sp1}"
                            )
                    elif sp2[0] <= sp1[0] and sp1[1] <= sp2[1] and sp1 != sp2:
                        continue  # handled from the other direction
                    elif sp1 == sp2:
                        raise LayoutError(f"same-side clauses share the span {sp1}")
                    else:
                        raise LayoutError(f"clause spans {sp1} and {sp2} cross")


def nested_layout(formula: MonotoneFormula) -> RectLayout:
    """Depths for purely nested formulas: 1 + depth of the deepest
    same-side clause strictly inside. Raises LayoutError when two
    same-side spans partially overlap."""
    depths = [1] * len(formula.clauses)
    changed = True
    while changed:
        changed = False
        for i, c in enumerate(formula.clauses):
            span = formula.clause_span(c)
            best = 1
            for j, c2 in enumerate(formula.clauses):
                if i == j or c2.positive != c.positive:
                    continue
                sp2 = formula.clause_span(c2)
                inside = (span[0] <= sp2[0] and sp2[1] <= span[1]) and (sp2 != span or j < i)
                if inside:
                    best = max(best, depths[j] + 1)
            if depths[i] != best:
                depths[i] = best
                changed = True
    layout = RectLayout(tuple(depths))
    layout.validate(formula)
    return layout


def m3sat_to_embedded(
    formula: MonotoneFormula, layout: RectLayout
) -> tuple[EmbeddedDigraph, MultilevelAssignment]:
    """Embedded multi-source instance with at most two levels per vertex.

    Each positive clause contributes a bottom anchor fanning to its
    outer variables, two connector sources wedged under consecutive
    variable pairs, and a pendulum pinned to level 0 inside the clause
    face; satisfying the clause frees exactly the headroom the pendulum
    needs. Negative clauses are the mirror image above the variable
    line. The rotation realizes the rectilinear nesting and the outer
    face is the region left of the leftmost variable.
    """
    layout.validate(formula)
    vertices: list[VertexId] = list(formula.variables)
    levels: dict[VertexId, IntervalSet] = {
        x: IntervalSet.from_intervals([(0, 1)]) for x in formula.variables
    }
    edges: list[tuple[str, VertexId, VertexId]] = []
    # per variable and side, the clause walls in bracket order
    below: dict[str, list[str]] = {x: [] for x in formula.variables}
    above: dict[str, list[str]] = {x: [] for x in formula.variables}

    def clause_edges(i: int, c: Clause) -> dict[str, tuple[str, str]]:
        """Wall pair (first, second) per variable, in left-to-right order."""
        xa, xb, xc = formula.sorted_vars(c)
        anchor = f"B{i}" if c.positive else f"T{i}"
        k1, k2 = f"k{i}a", f"k{i}b"
        if c.positive:
            e = {
                "anchor_a": (f"c{i}_Ba", anchor, xa),
                "anchor_c": (f"c{i}_Bc", anchor, xc),
                "pend": (f"c{i}_p", anchor, f"p{i}"),
                "k1a": (f"c{i}_1a", k1, xa),
                "k1b": (f"c{i}_1b", k1, xb),
                "k2b": (f"c{i}_2b", k2, xb),
                "k2c": (f"c{i}_2c", k2, xc),
            }
        else:
            e = {
                "anchor_a": (f"c{i}_Ta", xa, anchor),
                "anchor_c": (f"c{i}_Tc", xc, anchor),
                "pend": (f"c{i}_p", f"p{i}", anchor),
                "k1a": (f"c{i}_1a", xa, k1),
                "k1b": (f"c{i}_1b", xb, k1),
                "k2b": (f"c{i}_2b", xb, k2),
                "k2c": (f"c{i}_2c", xc, k2),
            }
        return e

    clause_parts: list[dict] = []
    for i, c in enumerate(formula.clauses):
        xa, xb, xc = formula.sorted_vars(c)
        h = layout.depths[i]
        anchor = f"B{i}" if c.positive else f"T{i}"
        k1, k2 = f"k{i}a", f"k{i}b"
        pend = f"p{i}"
        vertices.extend([anchor, k1, k2, pend])
        if c.positive:
            levels[anchor] = IntervalSet.from_values([-h - 1])
            levels[k1] = IntervalSet.from_values([-h])
            levels[k2] = IntervalSet.from_values([-h])
            levels[pend] = IntervalSet.from_values([0])
        else:
            # mirror image of the positive gadget, levels reflected
            # about the line between 0 and 1 (y -> 1 - y)
            levels[anchor] = IntervalSet.from_values([h + 2])
            levels[k1] = IntervalSet.from_values([h + 1])
            levels[k2] = IntervalSet.from_values([h + 1])
            levels[pend] = IntervalSet.from_values([1])
        parts = clause_edges(i, c)
        edges.extend(parts.values())
        clause_parts.append(parts)

    # wall order per variable: the clauses at x form a containment chain;
    # walk it outermost first, tracking where the next inner gadget nests
    # (inside the wedge whose interval contains it)
    for x in formula.variables:
        for side in (True, False):
            using = [
                (i, c)
                for i, c in enumerate(formula.clauses)
                if c.positive == side and x in c.variables
            ]
            using.sort(
                key=lambda ic: (
                    formula.clause_span(ic[1])[0] - formula.clause_span(ic[1])[1],
                    -layout.depths[ic[0]],
                    ic[0],
                )
            )
            seq: list[str] = []
            pos = 0
            for rank, (i, c) in enumerate(using):
                xa, xb, xc = formula.sorted_vars(c)
                parts = clause_parts[i]
                if x == xa:
                    seq[pos:pos] = [parts["anchor_a"][0], parts["k1a"][0]]
                    pos += 2  # inner chain continues inside the left wedge
                elif x == xc:
                    seq[pos:pos] = [parts["k2c"][0], parts["anchor_c"][0]]
                    # inner chain continues inside the right wedge: before k2
                else:
                    seq[pos:pos] = [parts["k1b"][0], parts["k2b"][0]]
                    if rank + 1 < len(using):
                        _j, nxt = using[rank + 1]
                        if formula.sorted_vars(nxt)[2] == x:
                            pass  # inner sits in the left wedge: before k1
                        else:
                            pos += 2  # inner sits in the right wedge: after k2
            if side:
                below[x] = seq
            else:
                above[x] = seq

    rotation: dict[VertexId, list[str]] = {}
    for x in formula.variables:
        rotation[x] = above[x] + list(reversed(below[x]))
    for i, c in enumerate(formula.clauses):
        parts = clause_parts[i]
        anchor = f"B{i}" if c.positive else f"T{i}"
        if c.positive:
            rotation[anchor] = [parts["anchor_a"][0], parts["pend"][0], parts["anchor_c"][0]]
            rotation[f"k{i}a"] = [parts["k1a"][0], parts["k1b"][0]]
            rotation[f"k{i}b"] = [parts["k2b"][0], parts["k2c"][0]]
        else:
            rotation[anchor] = [parts["anchor_c"][0], parts["pend"][0], parts["anchor_a"][0]]
            rotation[f"k{i}a"] = [parts["k1a"][0], parts["k1b"][0]]
            rotation[f"k{i}b"] = [parts["k2b"][0], parts["k2c"][0]]
        rotation[f"p{i}"] = [parts["pend"][0]]

    outer = None
    for x in formula.variables:
        if below[x]:
            outer = (below[x][0], LEFT)
            break
        if above[x]:
            outer = (above[x][0], LEFT)
            break

    g = EmbeddedDigraph(vertices, edges, rotation=rotation, outer_face=outer)
    return g, MultilevelAssignment(levels)


def truth_from_drawing(formula: MonotoneFormula, layout: RectLayout, drawing: Drawing) -> dict[str, bool]:
    """Read the truth assignment off a multilevel-planar drawing: a
    variable is true exactly when it sits on level 1."""
    g, levels = m3sat_to_embedded(formula, layout)
    report = check_drawing(g, levels, drawing, rotation=g.rotation)
    if not report.ok:
        raise InvalidDrawing(f"drawing does not certify the reduced instance: {report.violations[:3]}")
    assignment = {x: drawing.vertex_pos[x][1] == 1 for x in formula.variables}
    if not formula.satisfied_by(assignment):
        raise InternalError("extracted assignment does not satisfy the formula")
    return assignment


def m3sat_bruteforce(
    formula: MonotoneFormula, variable_cap: int = M3SAT_VARIABLE_CAP
) -> Optional[dict[str, bool]]:
    """Exhaustive satisfiability check; first satisfying assignment or None."""
    if len(formula.variables) > variable_cap:
        raise SearchSpaceTooLarge(len(formula.variables), variable_cap)
    for bits in product([False, True], repeat=len(formula.variables)):
        assignment = dict(zip(formula.variables, bits))
        if formula.satisfied_by(assignment):
            return assignment
    return None
