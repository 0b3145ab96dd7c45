"""Embedded single-source machinery: upward-planarity test, st-augmentation,
per-face top vertices, and the full multilevel test-and-draw pipeline.

The decision procedure builds the face-sink graph: a bipartite graph on
the faces and on the vertices that are sink switches of at least one
face, with one edge per sink-switch corner. The embedded single-source
graph is upward planar with the designated outer face exactly when

  * the face-sink graph is a forest,
  * the tree containing the outer face has no internal vertex (a sink
    switch that still has outgoing edges elsewhere), every other tree
    has exactly one, and
  * the source lies on the outer face.

Rooting the outer tree at the outer face and every other tree at its
internal vertex then reads off a canonical augmentation directly: each
sink's parent is the face it is canceled in, and each inner face's
parent is its top vertex, the unique sink switch that is highest in
every homeomorphic drawing. Cancellations inside an inner face are
aimed at that top vertex; cancellations in the outer face are aimed at
the new global sink. This single edge set embeds into every drawing
with the same embedding, which is what makes the multilevel test sound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    AmbiguousTop,
    InternalError,
    MissingOuterFace,
    MissingRotation,
    StructureError,
)
from .graph import (
    RIGHT,
    EdgeId,
    EmbeddedDigraph,
    FaceSet,
    VertexId,
    classify_structure,
    compute_faces,
    topological_order,
)
from .leveldraw import Drawing, check_drawing, level_planar_draw_st
from .levels import (
    IntervalSet,
    LevelAssignment,
    MultilevelAssignment,
    infeasible_vertex,
    min_assignment,
    normalize,
)

Corner = tuple[VertexId, int]  # vertex and position in its rotation cycle


@dataclass
class FaceSinkGraph:
    """Bipartite graph of faces versus sink-switch vertices.

    One edge per sink-switch corner; corner (v, i) sits between
    rotation[v][i] and its cyclic successor.
    """

    corners: list[tuple[int, VertexId, Corner]]  # (face index, vertex, corner)
    internal: set[VertexId]  # sink switches that are not sinks of G
    components: list[dict]  # nodes, internal_count, has_outer


@dataclass
class PlanEdge:
    edge_id: EdgeId
    tail: VertexId
    head: VertexId
    face_id: Optional[str]  # face of the original graph, None for edgeless inputs
    tail_corner: Optional[Corner]
    head_corner: Optional[Corner]  # None when the head is the new sink


@dataclass
class AugmentationPlan:
    """Sink cancellations plus the closing (s, t) edge."""

    t_id: VertexId
    st_edge_id: EdgeId
    edges: list[PlanEdge] = field(default_factory=list)

    def added_edges(self) -> list[tuple[EdgeId, VertexId, VertexId]]:
        return [(pe.edge_id, pe.tail, pe.head) for pe in self.edges]


@dataclass
class UpwardResult:
    upward: bool
    reason: str = ""
    plan: Optional[AugmentationPlan] = None
    face_sink_graph: Optional[FaceSinkGraph] = None
    faces: Optional[FaceSet] = None


def _fresh_vertex_id(g: EmbeddedDigraph, base: str) -> VertexId:
    used = set(g.vertices)
    if base not in used:
        return base
    k = 1
    while f"{base}{k}" in used:
        k += 1
    return f"{base}{k}"


def _fresh_edge_ids(g: EmbeddedDigraph, count: int, base: str = "aug") -> list[EdgeId]:
    used = {e[0] for e in g.edges}
    out: list[EdgeId] = []
    k = 0
    while len(out) < count:
        cand = f"{base}{k}"
        if cand not in used:
            out.append(cand)
        k += 1
    return out


def _non_bimodal_vertex(g: EmbeddedDigraph) -> Optional[VertexId]:
    """A vertex whose in-ends and out-ends interleave in the rotation.

    Every vertex of an upward-planar drawing has its incoming ends in
    one contiguous angular block (they all arrive from below), so
    interleaving rules the embedding out immediately.
    """
    for v in g.vertices:
        darts = g._rotation_darts[v]
        k = len(darts)
        transitions = 0
        for i in range(k):
            if (darts[i] & 1) != (darts[(i + 1) % k] & 1):
                transitions += 1
        if transitions > 2:
            return v
    return None


def _sink_corners(g: EmbeddedDigraph, faces: FaceSet) -> list[tuple[int, VertexId, Corner]]:
    corners = []
    for v in g.vertices:
        darts = g._rotation_darts[v]
        k = len(darts)
        if k == 0:
            continue
        for i in range(k):
            a = darts[i]
            b = darts[(i + 1) % k]
            if (a & 1) and (b & 1):  # both ends incoming at v
                fidx = faces.face_index_of_dart(b)
                corners.append((fidx, v, (v, i)))
    return corners


def build_face_sink_graph(g: EmbeddedDigraph, faces: FaceSet) -> FaceSinkGraph:
    corners = _sink_corners(g, faces)
    internal = {v for _f, v, _c in corners if g.out_edges[v]}

    # union-find over face nodes ("f", idx) and vertex nodes ("v", id)
    parent: dict = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    forest = True
    for fidx, v, _c in corners:
        a, b = find(("f", fidx)), find(("v", v))
        if a == b:
            forest = False
        else:
            parent[a] = b

    comps: dict = {}
    outer_idx = next((i for i, f in enumerate(faces.faces) if f.is_outer), None)
    node_of_face = {}
    for fidx, v, _c in corners:
        for node in (("f", fidx), ("v", v)):
            root = find(node)
            comps.setdefault(root, {"nodes": set(), "internal_count": 0, "has_outer": False})
            if node not in comps[root]["nodes"]:
                comps[root]["nodes"].add(node)
                if node[0] == "v" and node[1] in internal:
                    comps[root]["internal_count"] += 1
                if node == ("f", outer_idx):
                    comps[root]["has_outer"] = True
    components = list(comps.values())
    fsg = FaceSinkGraph(corners=corners, internal=internal, components=components)
    fsg.is_forest = forest  # type: ignore[attr-defined]
    return fsg


def upward_planar_embedded_sT(g: EmbeddedDigraph) -> UpwardResult:
    """Decide upward planarity of an embedded single-source graph.

    Requires a rotation and a designated outer face (except for the
    one-vertex graph, which is trivially drawable). On yes, the plan
    cancels every sink of the input inside one face, aimed at that
    face's top vertex, or at the new global sink for the outer face.
    """
    info = classify_structure(g)
    if info.category not in ("sT_graph", "st_graph"):
        raise StructureError(f"upward test requires an embedded sT-graph, got {info.category}")
    g.reject_parallel_edges()
    s = info.sources[0]

    if not g.edges:
        t_id = _fresh_vertex_id(g, "t")
        (st_id,) = _fresh_edge_ids(g, 1, base="st")
        plan = AugmentationPlan(t_id=t_id, st_edge_id=st_id, edges=[])
        return UpwardResult(True, plan=plan, faces=None)

    if g.rotation is None:
        raise MissingRotation("upward test requires a rotation")
    if g.outer_face is None:
        raise MissingOuterFace("upward test requires a designated outer face")

    faces = compute_faces(g)
    outer = faces.outer
    assert outer is not None
    outer_idx = faces.faces.index(outer)

    if s not in set(faces.boundary_vertices(outer)):
        return UpwardResult(False, reason=f"source {s!r} is not on the outer face", faces=faces)

    bad = _non_bimodal_vertex(g)
    if bad is not None:
        return UpwardResult(
            False,
            reason=f"incoming and outgoing ends interleave at {bad!r}",
            faces=faces,
        )

    fsg = build_face_sink_graph(g, faces)
    if not fsg.is_forest:  # type: ignore[attr-defined]
        return UpwardResult(False, reason="face-sink graph contains a cycle", faces=faces, face_sink_graph=fsg)

    for comp in fsg.components:
        if comp["has_outer"]:
            if comp["internal_count"] != 0:
                return UpwardResult(
                    False,
                    reason="outer-face tree of the face-sink graph has an internal vertex",
                    faces=faces,
                    face_sink_graph=fsg,
                )
        elif comp["internal_count"] != 1:
            return UpwardResult(
                False,
                reason="a face-sink tree away from the outer face does not have exactly one internal vertex",
                faces=faces,
                face_sink_graph=fsg,
            )

    plan = _build_plan(g, faces, fsg, outer_idx, s)
    return UpwardResult(True, plan=plan, faces=faces, face_sink_graph=fsg)


def _build_plan(
    g: EmbeddedDigraph,
    faces: FaceSet,
    fsg: FaceSinkGraph,
    outer_idx: int,
    s: VertexId,
) -> AugmentationPlan:
    # adjacency of the face-sink forest, with the corner on each edge
    adj: dict = {}
    for fidx, v, corner in fsg.corners:
        adj.setdefault(("f", fidx), []).append((("v", v), corner))
        adj.setdefault(("v", v), []).append((("f", fidx), corner))

    # roots: the outer face for its tree, the internal vertex elsewhere
    roots = [("f", outer_idx)]
    for comp in fsg.components:
        if not comp["has_outer"]:
            internal = [n for n in comp["nodes"] if n[0] == "v" and n[1] in fsg.internal]
            roots.append(internal[0])

    parent_of: dict = {}
    seen = set()
    for root in roots:
        if root not in adj:
            continue
        stack = [root]
        seen.add(root)
        while stack:
            node = stack.pop()
            for nbr, corner in sorted(adj.get(node, []), key=lambda item: (str(item[0]), item[1])):
                if nbr in seen:
                    continue
                seen.add(nbr)
                parent_of[nbr] = (node, corner)
                stack.append(nbr)

    t_id = _fresh_vertex_id(g, "t")
    sinks = [v for v in g.sinks()]
    ids = _fresh_edge_ids(g, len(sinks) + 1)
    st_id = ids[-1]
    plan = AugmentationPlan(t_id=t_id, st_edge_id=st_id)

    for eid, v in zip(ids, sinks):
        if ("v", v) not in parent_of:
            raise InternalError(f"sink {v!r} is missing from the face-sink forest")
        (fnode, tail_corner) = parent_of[("v", v)]
        fidx = fnode[1]
        if fidx == outer_idx:
            head = t_id
            head_corner = None
        else:
            if fnode not in parent_of:
                raise InternalError(f"inner face {fidx} has no top vertex in the forest")
            (top_node, top_corner) = parent_of[fnode]
            head = top_node[1]
            head_corner = top_corner
        plan.edges.append(
            PlanEdge(
                edge_id=eid,
                tail=v,
                head=head,
                face_id=faces.faces[fidx].id,
                tail_corner=tail_corner,
                head_corner=head_corner,
            )
        )
    return plan


# ---------------------------------------------------------------------------
# Applying a plan: rotation extension
# ---------------------------------------------------------------------------


def _corner_departure_dart(g: EmbeddedDigraph, corner: Corner) -> int:
    v, i = corner
    darts = g._rotation_darts[v]
    return darts[(i + 1) % len(darts)]


def _source_corner_on_outer(g: EmbeddedDigraph, faces: FaceSet, s: VertexId) -> Corner:
    outer = faces.outer
    assert outer is not None
    darts = g._rotation_darts[s]
    for i in range(len(darts)):
        dep = darts[(i + 1) % len(darts)]
        if faces.face_of_dart(dep).is_outer:
            return (s, i)
    raise InternalError(f"source {s!r} has no corner on the outer face")


def apply_augmentation(g: EmbeddedDigraph, plan: AugmentationPlan) -> EmbeddedDigraph:
    """The st-graph obtained by adding the plan's edges into the embedding.

    The rotation of the result extends the input rotation: every added
    edge end is spliced into the corner of the face it is embedded in,
    fans sharing a head are nested in reverse boundary-walk order, and
    the new sink's rotation is the reverse walk of the outer face. The
    result designates its outer face as the right side of the new
    (s, t) edge and is Euler-checked on construction.
    """
    info = classify_structure(g)
    s = info.sources[0]

    if not g.edges:
        # one-vertex graph: the closing edge is the whole augmentation
        return EmbeddedDigraph(
            list(g.vertices) + [plan.t_id],
            [(plan.st_edge_id, s, plan.t_id)],
            rotation={s: [plan.st_edge_id], plan.t_id: [plan.st_edge_id]},
            outer_face=(plan.st_edge_id, RIGHT),
        )

    faces = compute_faces(g)
    orbits: dict[int, list[int]] = {}
    for fidx, face in enumerate(faces.faces):
        orbits[fidx] = [g.dart_of(d.edge, d.forward) for d in face.boundary]
    face_index_by_id = {face.id: i for i, face in enumerate(faces.faces)}
    outer_idx = next(i for i, f in enumerate(faces.faces) if f.is_outer)

    st_corner = _source_corner_on_outer(g, faces, s)

    # group insertions: tail corners carry single ends, head corners carry fans
    inserts: dict[VertexId, dict[int, list[EdgeId]]] = {v: {} for v in g.vertices}

    def orbit_pos(fidx: int, corner: Corner) -> int:
        dep = _corner_departure_dart(g, corner)
        return orbits[fidx].index(dep)

    for pe in plan.edges:
        v, i = pe.tail_corner
        inserts[v].setdefault(i, []).append(pe.edge_id)

    sv, si = st_corner
    inserts[sv].setdefault(si, []).append(plan.st_edge_id)

    fans: dict[tuple[VertexId, int], list[tuple[int, EdgeId]]] = {}
    outer_fan: list[tuple[int, EdgeId]] = []
    for pe in plan.edges:
        fidx = face_index_by_id[pe.face_id]
        pos = orbit_pos(fidx, pe.tail_corner)
        if pe.head_corner is None:
            outer_fan.append((pos, pe.edge_id))
        else:
            base = orbit_pos(fidx, pe.head_corner)
            rel = (pos - base) % len(orbits[fidx])
            fans.setdefault(pe.head_corner, []).append((rel, pe.edge_id))
    outer_fan.append((orbit_pos(outer_idx, st_corner), plan.st_edge_id))

    for head_corner, items in fans.items():
        hv, hi = head_corner
        items.sort(key=lambda it: -it[0])
        inserts[hv].setdefault(hi, []).extend(eid for _p, eid in items)

    rotation = {}
    for v in g.vertices:
        ends: list[EdgeId] = []
        for i, eid in enumerate(g.rotation[v]):
            ends.append(eid)
            ends.extend(inserts[v].get(i, []))
        rotation[v] = ends
    outer_fan.sort(key=lambda it: -it[0])
    rotation[plan.t_id] = [eid for _p, eid in outer_fan]

    new_edges = list(g.edges)
    for pe in plan.edges:
        new_edges.append((pe.edge_id, pe.tail, pe.head))
    new_edges.append((plan.st_edge_id, s, plan.t_id))

    augmented = EmbeddedDigraph(
        list(g.vertices) + [plan.t_id],
        new_edges,
        rotation=rotation,
        outer_face=(plan.st_edge_id, RIGHT),
    )
    aug_faces = compute_faces(augmented)  # Euler check backs the construction
    outer_boundary = set(aug_faces.boundary_vertices(aug_faces.outer))
    if s not in outer_boundary or plan.t_id not in outer_boundary:
        raise InternalError("augmented outer face lost the source or the sink")
    return augmented


# ---------------------------------------------------------------------------
# Top vertices and the canonical augmentation
# ---------------------------------------------------------------------------


def longest_path_levels(g: EmbeddedDigraph) -> dict[VertexId, int]:
    tau = topological_order(g)
    lam: dict[VertexId, int] = {}
    for v in sorted(g.vertices, key=lambda v: tau[v]):
        lam[v] = max((lam[g.edge(e)[1]] + 1 for e in g.in_edges[v]), default=0)
    return lam


def top_vertex_per_face(g: EmbeddedDigraph, plan: AugmentationPlan) -> dict[str, VertexId]:
    """Top vertex of every inner face of G, from the augmented st-graph.

    The top of an inner face is the boundary vertex with the greatest
    longest-path level in the augmented graph; it is asserted to be the
    unique maximum and a sink switch of the face.
    """
    faces = compute_faces(g)
    augmented = apply_augmentation(g, plan)
    lam = longest_path_levels(augmented)
    sink_switch: dict[int, set[VertexId]] = {}
    for fidx, v, _c in _sink_corners(g, faces):
        sink_switch.setdefault(fidx, set()).add(v)

    tops: dict[str, VertexId] = {}
    for fidx, face in enumerate(faces.faces):
        if face.is_outer:
            continue
        boundary = faces.boundary_vertices(face)
        best = max(lam[v] for v in boundary)
        winners = [v for v in boundary if lam[v] == best]
        if len(winners) != 1:
            raise AmbiguousTop(f"face {face.id} has top candidates {winners}")
        top = winners[0]
        if top not in sink_switch.get(fidx, set()):
            raise AmbiguousTop(f"top {top!r} of face {face.id} is not one of its sink switches")
        tops[face.id] = top
    return tops


def canonical_st_augmentation(g: EmbeddedDigraph) -> AugmentationPlan:
    """The augmentation whose edges fit into every homeomorphic drawing.

    Runs the upward test, then retargets every cancellation inside an
    inner face at that face's top vertex, and every cancellation in the
    outer face at the new global sink. The initial plan already has this
    shape; the retargeting pass re-derives each head from the top-vertex
    map and verifies they agree.
    """
    res = upward_planar_embedded_sT(g)
    if not res.upward:
        raise StructureError(f"not upward planar in this embedding: {res.reason}")
    plan = res.plan
    assert plan is not None
    if not g.edges:
        return plan
    tops = top_vertex_per_face(g, plan)
    for pe in plan.edges:
        if pe.head_corner is None:
            if pe.head != plan.t_id:
                raise InternalError("outer-face cancellation must target the new sink")
        else:
            expected = tops[pe.face_id]
            if pe.head != expected:
                raise InternalError(
                    f"cancellation in face {pe.face_id} targets {pe.head!r}, top vertex is {expected!r}"
                )
    return plan


# ---------------------------------------------------------------------------
# Full pipeline
# ---------------------------------------------------------------------------


@dataclass
class Infeasible:
    stage: str  # not_upward_planar | empty_level_set | directed_cycle
    detail: str
    vertex: Optional[VertexId] = None


@dataclass
class TestResult:
    feasible: bool
    drawing: Optional[Drawing] = None
    infeasible: Optional[Infeasible] = None
    gamma: Optional[LevelAssignment] = None
    plan: Optional[AugmentationPlan] = None
    augmented: Optional[EmbeddedDigraph] = None

    def __bool__(self) -> bool:
        return self.feasible


def extend_levels_for_sink(
    g_aug: EmbeddedDigraph, levels: MultilevelAssignment, t_id: VertexId
) -> MultilevelAssignment:
    lo = levels.global_min() - 1
    hi = levels.global_max() + 1
    ext = dict(levels.levels)
    ext[t_id] = IntervalSet.from_intervals([(lo, hi)])
    return MultilevelAssignment(ext)


def test_and_draw_embedded_sT(g: EmbeddedDigraph, levels: MultilevelAssignment) -> TestResult:
    """Multilevel-planarity test and drawing for an embedded sT-graph.

    Pipeline: canonical st-augmentation, normal form on the augmented
    graph, emptiness check, minimum level assignment, level-planar
    drawing of the augmented st-graph, then strip the helper edges. Any
    returned drawing passes the exact validator against the input
    levels, rotation included.
    """
    levels.require_total(g)
    res = upward_planar_embedded_sT(g)
    if not res.upward:
        return TestResult(False, infeasible=Infeasible("not_upward_planar", res.reason))
    plan = canonical_st_augmentation(g)
    augmented = apply_augmentation(g, plan)
    ext = extend_levels_for_sink(augmented, levels, plan.t_id)

    norm = normalize(augmented, ext)
    if any(norm[v].is_empty() for v in augmented.vertices):
        blame = infeasible_vertex(augmented, ext)
        return TestResult(
            False,
            infeasible=Infeasible("empty_level_set", f"empty level set at {blame!r}", vertex=blame),
            plan=plan,
            augmented=augmented,
        )
    gamma = min_assignment(augmented, norm)
    drawing_st = level_planar_draw_st(augmented, gamma)
    stripped = drawing_st.restricted_to(g)
    stripped.provenance = "embedded-st"
    report = check_drawing(g, levels, stripped, rotation=g.rotation)
    if not report.ok:
        raise InternalError(f"stripped drawing failed validation: {report.violations[:3]}")
    gamma_orig = LevelAssignment({v: gamma[v] for v in g.vertices})
    return TestResult(True, drawing=stripped, gamma=gamma_orig, plan=plan, augmented=augmented)
