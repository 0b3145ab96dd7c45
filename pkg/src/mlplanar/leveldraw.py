"""Level-planar drawing of embedded st-graphs and exact drawing validation.

The drawing algorithm never searches: for an st-graph with a valid level
assignment and planar rotation, a crossing-free drawing respecting the
rotation always exists. Long edges are subdivided into unit segments by
dummy nodes, then each level's left-to-right order is propagated bottom
up: scan the level below left to right and emit every node's outgoing
segments in the clockwise order that starts right after its incoming
block. Coordinates are per-level position indices, so the validator can
use exact integer arithmetic throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Optional, Union

from .errors import InternalError, MissingOuterFace, MissingRotation, StructureError
from .graph import (
    EdgeId,
    EmbeddedDigraph,
    FaceSet,
    VertexId,
    classify_structure,
    compute_faces,
)
from .levels import IntervalSet, LevelAssignment, MultilevelAssignment


# ---------------------------------------------------------------------------
# Proper level graph
# ---------------------------------------------------------------------------


@dataclass
class ProperLevelGraph:
    """Unit-span subdivision of a level graph.

    Nodes are dense ints: indices 0..n-1 are the original vertices in
    graph order, higher indices are dummies. Each original edge maps to
    a chain of nodes from tail to head, one per level it touches.
    """

    graph: EmbeddedDigraph
    level_of: list[int]
    chains: list[list[int]]  # per edge index: [tail_node, dummies..., head_node]
    out_segs: list[list[int]]  # per node: outgoing segment ids
    in_segs: list[list[int]]
    seg_tail: list[int]
    seg_head: list[int]
    seg_edge: list[int]  # original edge index per segment
    levels: list[int]  # distinct levels ascending
    nodes_by_level: dict[int, list[int]]

    @property
    def n_real(self) -> int:
        return len(self.graph.vertices)

    def node_of_vertex(self, v: VertexId) -> int:
        return self.graph._vindex[v]

    def is_dummy(self, node: int) -> bool:
        return node >= self.n_real


def make_proper(g: EmbeddedDigraph, gamma: LevelAssignment) -> ProperLevelGraph:
    """Subdivide every edge spanning more than one level with dummies."""
    gamma.validate(g)
    n = len(g.vertices)
    level_of = [gamma[v] for v in g.vertices]
    chains: list[list[int]] = []
    out_segs: list[list[int]] = [[] for _ in range(n)]
    in_segs: list[list[int]] = [[] for _ in range(n)]
    seg_tail: list[int] = []
    seg_head: list[int] = []
    seg_edge: list[int] = []

    def new_node(level: int) -> int:
        level_of.append(level)
        out_segs.append([])
        in_segs.append([])
        return len(level_of) - 1

    vindex = g._vindex
    for ei, (eid, tail, head) in enumerate(g.edges):
        lo, hi = gamma[tail], gamma[head]
        chain = [vindex[tail]]
        for lev in range(lo + 1, hi):
            chain.append(new_node(lev))
        chain.append(vindex[head])
        chains.append(chain)
        for a, b in zip(chain, chain[1:]):
            sid = len(seg_tail)
            seg_tail.append(a)
            seg_head.append(b)
            seg_edge.append(ei)
            out_segs[a].append(sid)
            in_segs[b].append(sid)

    nodes_by_level: dict[int, list[int]] = {}
    for node, lev in enumerate(level_of):
        nodes_by_level.setdefault(lev, []).append(node)
    return ProperLevelGraph(
        graph=g,
        level_of=level_of,
        chains=chains,
        out_segs=out_segs,
        in_segs=in_segs,
        seg_tail=seg_tail,
        seg_head=seg_head,
        seg_edge=seg_edge,
        levels=sorted(nodes_by_level),
        nodes_by_level=nodes_by_level,
    )


# ---------------------------------------------------------------------------
# Drawing
# ---------------------------------------------------------------------------


@dataclass
class Drawing:
    """Integer coordinates per vertex plus per-edge bend polylines."""

    vertex_pos: dict[VertexId, tuple[int, int]]
    edge_bends: dict[EdgeId, list[tuple[int, int]]] = field(default_factory=dict)
    provenance: str = ""

    def points_of(self, g: EmbeddedDigraph, eid: EdgeId) -> list[tuple[int, int]]:
        _e, tail, head = g.edge(eid)
        return [self.vertex_pos[tail], *self.edge_bends.get(eid, []), self.vertex_pos[head]]

    def restricted_to(self, g: EmbeddedDigraph) -> "Drawing":
        """Restriction to the vertices and edges of a subgraph."""
        eids = {e[0] for e in g.edges}
        return Drawing(
            vertex_pos={v: self.vertex_pos[v] for v in g.vertices},
            edge_bends={e: b for e, b in self.edge_bends.items() if e in eids},
            provenance=self.provenance,
        )


def drawing_from_orders(
    proper: ProperLevelGraph, orders: dict[int, list[int]], provenance: str = ""
) -> Drawing:
    """Mechanical conversion of per-level left-to-right orders to a Drawing."""
    pos: dict[int, tuple[int, int]] = {}
    for lev, nodes in orders.items():
        for i, node in enumerate(nodes):
            pos[node] = (i, lev)
    g = proper.graph
    vertex_pos = {v: pos[proper.node_of_vertex(v)] for v in g.vertices}
    edge_bends: dict[EdgeId, list[tuple[int, int]]] = {}
    for ei, chain in enumerate(proper.chains):
        if len(chain) > 2:
            edge_bends[g.edges[ei][0]] = [pos[d] for d in chain[1:-1]]
    return Drawing(vertex_pos=vertex_pos, edge_bends=edge_bends, provenance=provenance)


# ---------------------------------------------------------------------------
# Order propagation for embedded st-graphs
# ---------------------------------------------------------------------------


def _rotation_out_order(g: EmbeddedDigraph, v: VertexId, faces: FaceSet) -> list[int]:
    """Outgoing darts of v, leftmost first, per the clockwise rotation.

    In an upward drawing the clockwise rotation at a vertex reads all
    outgoing ends left to right followed by all incoming ends right to
    left, so the left-to-right out order starts right after the incoming
    block. A source has no incoming block; there the order starts at its
    corner on the outer face.
    """
    darts = g._rotation_darts[v]
    k = len(darts)
    is_out = [(d & 1) == 0 for d in darts]
    n_out = sum(is_out)
    if n_out == 0:
        return []
    if n_out == k:
        outer = faces.outer
        if outer is None:
            raise MissingOuterFace("source ordering requires a designated outer face")
        start = None
        for i, d in enumerate(darts):
            if faces.face_of_dart(d) is outer:
                start = i
                break
        if start is None:
            raise InternalError(f"source {v!r} has no corner on the outer face")
    else:
        start = None
        for i in range(k):
            if not is_out[i] and is_out[(i + 1) % k]:
                start = (i + 1) % k
        if start is None:
            raise InternalError(f"vertex {v!r} has no in/out transition")
    order = [darts[(start + j) % k] for j in range(k)]
    outs = [d for d in order if (d & 1) == 0]
    block = order[: len(outs)]
    if block != outs:
        raise InternalError(f"in/out blocks at {v!r} are not contiguous in the rotation")
    return outs


def level_planar_draw_st(
    g: EmbeddedDigraph,
    gamma: LevelAssignment,
    validate: bool = True,
) -> Drawing:
    """Crossing-free level drawing of an embedded st-graph realizing gamma.

    The graph must classify as an st-graph and carry a planar rotation
    with a designated outer face incident to both s and t. Raises
    InternalError if the produced drawing fails validation, which the
    construction guarantees cannot legitimately happen.
    """
    info = classify_structure(g)
    if info.category != "st_graph":
        raise StructureError(f"level_planar_draw_st requires an st-graph, got {info.category}")
    if g.rotation is None:
        raise MissingRotation("level_planar_draw_st requires a rotation")
    if g.outer_face is None:
        raise MissingOuterFace("level_planar_draw_st requires a designated outer face")
    faces = compute_faces(g)
    outer = faces.outer
    assert outer is not None
    s, t = info.sources[0], info.sinks[0]
    boundary = set(faces.boundary_vertices(outer))
    if s not in boundary or t not in boundary:
        raise StructureError("outer face must be incident to both the source and the sink")

    proper = make_proper(g, gamma)
    seg_of_out_dart: dict[int, int] = {}
    for ei, chain in enumerate(proper.chains):
        first_seg = proper.out_segs[chain[0]]
        # locate this edge's first segment at the tail
        for sid in first_seg:
            if proper.seg_edge[sid] == ei:
                seg_of_out_dart[ei << 1] = sid
                break

    out_order_cache: dict[int, list[int]] = {}
    for v in g.vertices:
        node = proper.node_of_vertex(v)
        outs = _rotation_out_order(g, v, faces)
        out_order_cache[node] = [seg_of_out_dart[d] for d in outs]

    orders: dict[int, list[int]] = {}
    placed = [False] * len(proper.level_of)
    s_node = proper.node_of_vertex(s)
    orders[proper.levels[0]] = [s_node]
    placed[s_node] = True
    if proper.nodes_by_level[proper.levels[0]] != [s_node]:
        raise InternalError("bottom level of an st-graph must contain only the source")

    for lev in proper.levels[:-1]:
        nxt: list[int] = []
        for node in orders[lev]:
            if proper.is_dummy(node):
                seg_ids = proper.out_segs[node]
            else:
                seg_ids = out_order_cache[node]
            for sid in seg_ids:
                head = proper.seg_head[sid]
                if not placed[head]:
                    placed[head] = True
                    nxt.append(head)
        next_lev = proper.levels[proper.levels.index(lev) + 1]
        if sorted(nxt) != sorted(proper.nodes_by_level[next_lev]):
            raise InternalError("order propagation lost nodes of a level")
        orders[next_lev] = nxt

    drawing = drawing_from_orders(proper, orders, provenance="leveldraw-st")
    if validate:
        report = check_drawing(g, gamma, drawing, rotation=g.rotation)
        if not report.ok:
            raise InternalError(f"constructed drawing failed validation: {report.violations[:3]}")
    return drawing


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # level | monotone | crossing | rotation | structure
    detail: str
    subjects: tuple = ()


@dataclass
class Report:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __repr__(self) -> str:
        if self.ok:
            return "Report(ok)"
        return f"Report({len(self.violations)} violations: {self.violations[:5]})"


def check_drawing(
    g: EmbeddedDigraph,
    levels: Union[MultilevelAssignment, LevelAssignment, None],
    drawing: Drawing,
    rotation: Optional[dict[VertexId, list[EdgeId]]] = None,
) -> Report:
    """Exact validation of a drawing; empty report certifies planarity.

    Checks level membership against a multilevel assignment (or exact
    equality against a level assignment), strict y-monotonicity of every
    edge polyline, pairwise crossing-freeness with integer arithmetic,
    and, when a rotation is supplied, that the drawing induces it.
    Total: malformed drawings yield violations, never exceptions.
    """
    v: list[Violation] = []

    for vertex in g.vertices:
        if vertex not in drawing.vertex_pos:
            v.append(Violation("structure", f"vertex {vertex!r} has no coordinates", (vertex,)))
    if v:
        return Report(v)

    coords: dict[tuple[int, int], VertexId] = {}
    for vertex in g.vertices:
        p = drawing.vertex_pos[vertex]
        if p in coords:
            v.append(Violation("structure", f"vertices {coords[p]!r} and {vertex!r} coincide", (coords[p], vertex)))
        coords[p] = vertex

    if levels is not None:
        for vertex in g.vertices:
            y = drawing.vertex_pos[vertex][1]
            if isinstance(levels, LevelAssignment):
                if y != levels[vertex]:
                    v.append(Violation("level", f"{vertex!r} drawn at level {y}, assigned {levels[vertex]}", (vertex,)))
            else:
                if vertex in levels.levels and y not in levels[vertex]:
                    v.append(Violation("level", f"{vertex!r} drawn at level {y} not in {levels[vertex]!r}", (vertex,)))

    polylines: dict[EdgeId, list[tuple[int, int]]] = {}
    for eid, tail, head in g.edges:
        pts = drawing.points_of(g, eid)
        polylines[eid] = pts
        for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
            if y2 <= y1:
                v.append(Violation("monotone", f"edge {eid!r} is not strictly y-monotone", (eid,)))
                break

    v.extend(_crossing_violations(g, polylines))

    if rotation is not None:
        v.extend(_rotation_violations(g, drawing, rotation))

    return Report(v)


def _unit_gap_structure(polylines: dict[EdgeId, list[tuple[int, int]]]) -> bool:
    return all(
        y2 - y1 == 1
        for pts in polylines.values()
        for (_x1, y1), (_x2, y2) in zip(pts, pts[1:])
    )


def _crossing_violations(
    g: EmbeddedDigraph, polylines: dict[EdgeId, list[tuple[int, int]]]
) -> list[Violation]:
    if _unit_gap_structure(polylines):
        return _crossings_by_inversion(polylines)
    return _crossings_pairwise(g, polylines)


def _crossings_by_inversion(polylines: dict[EdgeId, list[tuple[int, int]]]) -> list[Violation]:
    """Per-level-gap inversion criterion; exact and near-linear.

    Segments in the gap [k, k+1] cross exactly when their bottom and top
    x-orders invert. Detection sorts each gap once; offending pairs are
    only materialized when an inversion exists.
    """
    gaps: dict[int, list[tuple[int, int, EdgeId]]] = {}
    for eid, pts in polylines.items():
        for (x1, y1), (x2, _y2) in zip(pts, pts[1:]):
            gaps.setdefault(y1, []).append((x1, x2, eid))
    out: list[Violation] = []
    for y, segs in sorted(gaps.items()):
        segs_sorted = sorted(segs)
        best_top = None
        inverted = False
        for _xb, xt, _e in segs_sorted:
            if best_top is not None and xt < best_top:
                inverted = True
                break
            best_top = xt if best_top is None or xt > best_top else best_top
        if not inverted:
            continue
        for i in range(len(segs_sorted)):
            for j in range(i + 1, len(segs_sorted)):
                xb1, xt1, e1 = segs_sorted[i]
                xb2, xt2, e2 = segs_sorted[j]
                if (xb1 - xb2) * (xt1 - xt2) < 0:
                    out.append(
                        Violation("crossing", f"edges {e1!r} and {e2!r} cross in gap [{y}, {y + 1}]", (e1, e2))
                    )
    return out


def _orient(o: tuple[int, int], a: tuple[int, int], b: tuple[int, int]) -> int:
    val = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    return 0 if val == 0 else (1 if val > 0 else -1)


def _on_segment(p: tuple[int, int], q: tuple[int, int], r: tuple[int, int]) -> bool:
    """q collinear with p-r: does q lie within the bounding box of p-r?"""
    return min(p[0], r[0]) <= q[0] <= max(p[0], r[0]) and min(p[1], r[1]) <= q[1] <= max(p[1], r[1])


def _segments_intersect(
    p1: tuple[int, int], q1: tuple[int, int], p2: tuple[int, int], q2: tuple[int, int]
) -> bool:
    o1 = _orient(p1, q1, p2)
    o2 = _orient(p1, q1, q2)
    o3 = _orient(p2, q2, p1)
    o4 = _orient(p2, q2, q1)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _on_segment(p1, p2, q1):
        return True
    if o2 == 0 and _on_segment(p1, q2, q1):
        return True
    if o3 == 0 and _on_segment(p2, p1, q2):
        return True
    if o4 == 0 and _on_segment(p2, q1, q2):
        return True
    return False


def _crossings_pairwise(
    g: EmbeddedDigraph, polylines: dict[EdgeId, list[tuple[int, int]]]
) -> list[Violation]:
    """Exact quadratic fallback for drawings with arbitrary integer bends."""
    vertex_pos_of_edge: dict[EdgeId, tuple[tuple[int, int], tuple[int, int]]] = {}
    for eid, _tail, _head in g.edges:
        pts = polylines[eid]
        vertex_pos_of_edge[eid] = (pts[0], pts[-1])

    eids = [e[0] for e in g.edges]
    ends = {e[0]: {e[1], e[2]} for e in g.edges}
    out: list[Violation] = []
    for eid in eids:
        pts = polylines[eid]
        for i in range(len(pts) - 1):
            for ej in eids:
                if ej <= eid:
                    continue
                shared_vertices = ends[eid] & ends[ej]
                shared_pts = {vertex_pos_of_edge[eid][0], vertex_pos_of_edge[eid][1]} & {
                    vertex_pos_of_edge[ej][0],
                    vertex_pos_of_edge[ej][1],
                }
                qts = polylines[ej]
                hit = False
                for j in range(len(qts) - 1):
                    if not _segments_intersect(pts[i], pts[i + 1], qts[j], qts[j + 1]):
                        continue
                    # touching only at a shared endpoint vertex is fine
                    seg_pts = {pts[i], pts[i + 1]} & {qts[j], qts[j + 1]}
                    if shared_vertices and seg_pts and seg_pts <= shared_pts:
                        if not _overlap_beyond_point(pts[i], pts[i + 1], qts[j], qts[j + 1]):
                            continue
                    out.append(Violation("crossing", f"edges {eid!r} and {ej!r} cross", (eid, ej)))
                    hit = True
                    break
                if hit:
                    break
    return out


def _overlap_beyond_point(p1, q1, p2, q2) -> bool:
    """Collinear segments sharing an endpoint: do they overlap in a segment?"""
    if _orient(p1, q1, p2) != 0 or _orient(p1, q1, q2) != 0:
        return False
    pts = sorted([p1, q1, p2, q2])
    # overlap is a proper segment iff the middle two points differ
    return pts[1] != pts[2] and _on_segment(pts[0], pts[1], pts[3]) and _on_segment(pts[0], pts[2], pts[3])


def _cw_from_north_cmp(u: tuple[int, int], v: tuple[int, int]) -> int:
    def sector(d: tuple[int, int]) -> int:
        dx, dy = d
        if dx == 0:
            return 0 if dy > 0 else 2
        return 1 if dx > 0 else 3

    su, sv = sector(u), sector(v)
    if su != sv:
        return -1 if su < sv else 1
    cross = u[0] * v[1] - u[1] * v[0]
    if cross < 0:
        return -1
    if cross > 0:
        return 1
    return 0


def induced_rotation(g: EmbeddedDigraph, drawing: Drawing) -> dict[VertexId, list[EdgeId]]:
    """Clockwise edge-end order around each vertex read off the drawing."""
    rot: dict[VertexId, list[EdgeId]] = {}
    for v in g.vertices:
        vx, vy = drawing.vertex_pos[v]
        dirs: list[tuple[tuple[int, int], EdgeId]] = []
        for eid in g.out_edges[v]:
            pts = drawing.points_of(g, eid)
            dirs.append(((pts[1][0] - vx, pts[1][1] - vy), eid))
        for eid in g.in_edges[v]:
            pts = drawing.points_of(g, eid)
            dirs.append(((pts[-2][0] - vx, pts[-2][1] - vy), eid))
        dirs.sort(key=lambda item: item[1])
        dirs.sort(key=cmp_to_key(lambda a, b: _cw_from_north_cmp(a[0], b[0])))
        rot[v] = [eid for _d, eid in dirs]
    return rot


def _cyclic_equal(a: list, b: list) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    if set(a) != set(b):
        return False
    i = a.index(min(a))
    j = b.index(min(b))
    return [a[(i + k) % len(a)] for k in range(len(a))] == [b[(j + k) % len(b)] for k in range(len(b))]


def _rotation_violations(
    g: EmbeddedDigraph, drawing: Drawing, rotation: dict[VertexId, list[EdgeId]]
) -> list[Violation]:
    induced = induced_rotation(g, drawing)
    out = []
    for v in g.vertices:
        want = rotation.get(v, [])
        got = induced[v]
        if not _cyclic_equal(got, list(want)):
            out.append(
                Violation("rotation", f"rotation at {v!r} is {got}, embedding requires {list(want)}", (v,))
            )
    return out
