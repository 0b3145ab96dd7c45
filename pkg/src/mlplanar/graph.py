"""Directed-graph substrate: storage, rotation systems, faces, classification.

A graph is stored as vertex ids plus (edge id, tail, head) triples. An
embedding, when present, is a clockwise rotation system: for each vertex,
the cyclic sequence of its incident edge ends. Walking an edge tail to
head, the face on the LEFT is the one traced by the dart convention
below; the outer face is designated as a side of one edge.

Darts: every edge contributes two darts, one per direction. Internally a
dart is an int (2*edge_index for the tail-to-head dart, 2*edge_index+1
for the reverse). The face successor of a dart d is the clockwise
successor, around d's head, of d's twin. Orbits of that permutation are
the faces, and each face consists of the darts that have it on their left.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from .errors import (
    CyclicGraph,
    MissingOuterFace,
    MissingRotation,
    NonPlanarRotation,
    ParallelEdgesError,
    StructureError,
)

VertexId = str
EdgeId = str

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class Dart:
    """One direction of an edge: with the edge (forward) or against it."""

    edge: EdgeId
    forward: bool

    def __repr__(self) -> str:
        arrow = ">" if self.forward else "<"
        return f"Dart({self.edge}{arrow})"


@dataclass(frozen=True)
class Face:
    """A face of an embedded graph: a cyclic dart boundary walk."""

    id: str
    boundary: tuple[Dart, ...]
    is_outer: bool = False


class EmbeddedDigraph:
    """Loop-free directed multigraph with an optional combinatorial embedding.

    Immutable after construction; all derived tables are cached lazily.
    Parallel edges are representable but every planarity operation
    rejects them with ParallelEdgesError.
    """

    def __init__(
        self,
        vertices: Iterable[VertexId],
        edges: Iterable[tuple[EdgeId, VertexId, VertexId]],
        rotation: Optional[dict[VertexId, list[EdgeId]]] = None,
        outer_face: Optional[tuple[EdgeId, str]] = None,
    ):
        self.vertices: list[VertexId] = list(vertices)
        self.edges: list[tuple[EdgeId, VertexId, VertexId]] = [tuple(e) for e in edges]
        self.rotation = {v: list(ends) for v, ends in rotation.items()} if rotation is not None else None
        self.outer_face = tuple(outer_face) if outer_face is not None else None
        self._validate()

    # -- construction-time validation --------------------------------------

    def _validate(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise StructureError("duplicate vertex id")
        vset = set(self.vertices)
        seen_eids: set[EdgeId] = set()
        for eid, tail, head in self.edges:
            if eid in seen_eids:
                raise StructureError(f"duplicate edge id {eid!r}")
            seen_eids.add(eid)
            if tail not in vset or head not in vset:
                raise StructureError(f"edge {eid!r} references missing vertex")
            if tail == head:
                raise StructureError(f"edge {eid!r} is a self-loop")
        if self.rotation is not None:
            self._validate_rotation()
        if self.outer_face is not None:
            eid, side = self.outer_face
            if eid not in seen_eids:
                raise StructureError(f"outer face references missing edge {eid!r}")
            if side not in (LEFT, RIGHT):
                raise StructureError(f"outer face side must be 'left' or 'right', got {side!r}")
            if self.rotation is None:
                raise StructureError("outer face designated without a rotation")

    def _validate_rotation(self) -> None:
        assert self.rotation is not None
        incident: dict[VertexId, list[EdgeId]] = {v: [] for v in self.vertices}
        for eid, tail, head in self.edges:
            incident[tail].append(eid)
            incident[head].append(eid)
        if set(self.rotation) != set(self.vertices):
            raise StructureError("rotation must list every vertex exactly once")
        for v in self.vertices:
            if sorted(self.rotation[v]) != sorted(incident[v]):
                raise StructureError(f"rotation at {v!r} does not list its edge ends exactly once")

    # -- cached derived tables ----------------------------------------------

    @cached_property
    def _vindex(self) -> dict[VertexId, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _eindex(self) -> dict[EdgeId, int]:
        return {e[0]: i for i, e in enumerate(self.edges)}

    @cached_property
    def out_edges(self) -> dict[VertexId, list[EdgeId]]:
        out: dict[VertexId, list[EdgeId]] = {v: [] for v in self.vertices}
        for eid, tail, _head in self.edges:
            out[tail].append(eid)
        return out

    @cached_property
    def in_edges(self) -> dict[VertexId, list[EdgeId]]:
        inc: dict[VertexId, list[EdgeId]] = {v: [] for v in self.vertices}
        for eid, _tail, head in self.edges:
            inc[head].append(eid)
        return inc

    def edge(self, eid: EdgeId) -> tuple[EdgeId, VertexId, VertexId]:
        return self.edges[self._eindex[eid]]

    def sources(self) -> list[VertexId]:
        return sorted(v for v in self.vertices if not self.in_edges[v])

    def sinks(self) -> list[VertexId]:
        return sorted(v for v in self.vertices if not self.out_edges[v])

    def has_parallel_edges(self) -> bool:
        return len({(t, h) for _e, t, h in self.edges}) != len(self.edges)

    def reject_parallel_edges(self) -> None:
        if self.has_parallel_edges():
            raise ParallelEdgesError("parallel edges are not supported by planarity operations")

    # -- dart machinery (internal ints, public Dart on faces) ----------------

    def dart_origin(self, dart: int) -> VertexId:
        eid, tail, head = self.edges[dart >> 1]
        return tail if dart & 1 == 0 else head

    def dart_head(self, dart: int) -> VertexId:
        eid, tail, head = self.edges[dart >> 1]
        return head if dart & 1 == 0 else tail

    def dart_of(self, eid: EdgeId, forward: bool) -> int:
        return (self._eindex[eid] << 1) | (0 if forward else 1)

    @cached_property
    def _rotation_darts(self) -> dict[VertexId, list[int]]:
        """Rotation cycles translated to darts originating at each vertex."""
        if self.rotation is None:
            raise MissingRotation("operation requires a rotation system")
        rot: dict[VertexId, list[int]] = {}
        for v, ends in self.rotation.items():
            darts = []
            for eid in ends:
                _e, tail, head = self.edge(eid)
                darts.append(self.dart_of(eid, forward=(tail == v)))
            rot[v] = darts
        return rot

    @cached_property
    def _cw_next(self) -> list[int]:
        """next[d] = clockwise successor, around d's origin, of dart d."""
        nxt = [0] * (2 * len(self.edges))
        for _v, darts in self._rotation_darts.items():
            k = len(darts)
            for i, d in enumerate(darts):
                nxt[d] = darts[(i + 1) % k]
        return nxt

    def face_successor(self, dart: int) -> int:
        return self._cw_next[dart ^ 1]

    @cached_property
    def weak_components(self) -> list[set[VertexId]]:
        comp: dict[VertexId, int] = {}
        comps: list[set[VertexId]] = []
        adj: dict[VertexId, list[VertexId]] = {v: [] for v in self.vertices}
        for _e, t, h in self.edges:
            adj[t].append(h)
            adj[h].append(t)
        for v in self.vertices:
            if v in comp:
                continue
            cid = len(comps)
            stack = [v]
            group: set[VertexId] = set()
            while stack:
                u = stack.pop()
                if u in comp:
                    continue
                comp[u] = cid
                group.add(u)
                stack.extend(w for w in adj[u] if w not in comp)
            comps.append(group)
        return comps


@dataclass
class FaceSet:
    """All faces of an embedded graph plus dart-to-face lookup."""

    faces: list[Face]
    _dart_face: dict[int, int] = field(repr=False, default_factory=dict)
    _graph: EmbeddedDigraph | None = field(repr=False, default=None)

    def face_of_dart(self, dart: int) -> Face:
        return self.faces[self._dart_face[dart]]

    def face_index_of_dart(self, dart: int) -> int:
        return self._dart_face[dart]

    @property
    def outer(self) -> Optional[Face]:
        for f in self.faces:
            if f.is_outer:
                return f
        return None

    def boundary_vertices(self, face: Face) -> list[VertexId]:
        assert self._graph is not None
        seen: list[VertexId] = []
        got = set()
        for d in face.boundary:
            v = self._graph.dart_origin(self._graph.dart_of(d.edge, d.forward))
            if v not in got:
                got.add(v)
                seen.append(v)
        return seen


def compute_faces(g: EmbeddedDigraph) -> FaceSet:
    """Extract all faces of the rotation system and verify planarity.

    The planarity check is Euler's formula applied per edged component:
    the number of dart orbits must equal |E| - |V'| + 2C where V' and C
    count vertices and components of the subgraph spanned by edges.
    Isolated vertices have no darts and are always embeddable.
    """
    if g.rotation is None:
        raise MissingRotation("compute_faces requires a rotation system")
    g.reject_parallel_edges()

    n_darts = 2 * len(g.edges)
    face_of: dict[int, int] = {}
    orbits: list[list[int]] = []
    for d0 in range(n_darts):
        if d0 in face_of:
            continue
        fid = len(orbits)
        walk = []
        d = d0
        while True:
            face_of[d] = fid
            walk.append(d)
            d = g.face_successor(d)
            if d == d0:
                break
            if len(walk) > n_darts:
                raise NonPlanarRotation("face traversal does not close")
        orbits.append(walk)

    edged = [c for c in g.weak_components if any(len(g.out_edges[v]) + len(g.in_edges[v]) > 0 for v in c)]
    v_edged = sum(len(c) for c in edged)
    expected = len(g.edges) - v_edged + 2 * len(edged)
    if len(orbits) != expected:
        raise NonPlanarRotation(
            f"rotation yields {len(orbits)} faces, Euler's formula requires {expected}"
        )

    outer_dart: Optional[int] = None
    if g.outer_face is not None:
        eid, side = g.outer_face
        outer_dart = g.dart_of(eid, forward=(side == LEFT))

    faces = []
    for fid, walk in enumerate(orbits):
        boundary = tuple(Dart(g.edges[d >> 1][0], d & 1 == 0) for d in walk)
        is_outer = outer_dart is not None and face_of[outer_dart] == fid
        faces.append(Face(id=f"f{fid}", boundary=boundary, is_outer=is_outer))
    return FaceSet(faces=faces, _dart_face=face_of, _graph=g)


def topological_order(g: EmbeddedDigraph) -> dict[VertexId, int]:
    """Topological numbering 1..|V|, ties broken by vertex-id order.

    Raises CyclicGraph carrying one directed cycle as witness.
    """
    import heapq

    indeg = {v: len(g.in_edges[v]) for v in g.vertices}
    ready = [v for v in g.vertices if indeg[v] == 0]
    heapq.heapify(ready)
    order: dict[VertexId, int] = {}
    rank = 0
    while ready:
        v = heapq.heappop(ready)
        rank += 1
        order[v] = rank
        for eid in g.out_edges[v]:
            _e, _t, h = g.edge(eid)
            indeg[h] -= 1
            if indeg[h] == 0:
                heapq.heappush(ready, h)
    if rank != len(g.vertices):
        raise CyclicGraph(_find_cycle(g, {v for v in g.vertices if v not in order}))
    return order


def _find_cycle(g: EmbeddedDigraph, candidates: set[VertexId]) -> list[VertexId]:
    """One directed cycle within the given vertex set (which must contain one)."""
    succ = {
        v: sorted(g.edge(eid)[2] for eid in g.out_edges[v] if g.edge(eid)[2] in candidates)
        for v in candidates
    }
    state: dict[VertexId, int] = {}  # 1 = on stack, 2 = done
    for start in sorted(candidates):
        if state.get(start):
            continue
        stack: list[tuple[VertexId, int]] = [(start, 0)]
        path: list[VertexId] = []
        on_path: dict[VertexId, int] = {}
        while stack:
            v, idx = stack[-1]
            if idx == 0:
                state[v] = 1
                on_path[v] = len(path)
                path.append(v)
            if idx < len(succ[v]):
                stack[-1] = (v, idx + 1)
                w = succ[v][idx]
                if state.get(w) == 1:
                    return path[on_path[w]:]
                if not state.get(w):
                    stack.append((w, 0))
            else:
                stack.pop()
                path.pop()
                del on_path[v]
                state[v] = 2
    raise AssertionError("no cycle found among candidates")


@dataclass(frozen=True)
class StructureInfo:
    """Result of structural classification."""

    category: str  # st_graph | sT_graph | oriented_cycle | other
    sources: tuple[VertexId, ...]
    sinks: tuple[VertexId, ...]


def classify_structure(g: EmbeddedDigraph) -> StructureInfo:
    """Classify into st-graph, sT-graph, oriented cycle, or other.

    Classification is total. An acyclic single-source graph is an
    sT-graph; with a single sink t and the edge (s, t) present it is an
    st-graph. A graph whose underlying undirected graph is a simple
    cycle is an oriented cycle. Graphs qualifying both as st/sT and as
    oriented cycle report the st/sT category.
    """
    sources = tuple(g.sources())
    sinks = tuple(g.sinks())
    acyclic = True
    try:
        topological_order(g)
    except CyclicGraph:
        acyclic = False

    if acyclic and len(sources) == 1 and len(g.weak_components) == 1:
        if len(sinks) == 1:
            s, t = sources[0], sinks[0]
            if any(tail == s and head == t for _e, tail, head in g.edges):
                return StructureInfo("st_graph", sources, sinks)
        return StructureInfo("sT_graph", sources, sinks)

    if _is_simple_cycle(g):
        return StructureInfo("oriented_cycle", sources, sinks)

    return StructureInfo("other", sources, sinks)


def _is_simple_cycle(g: EmbeddedDigraph) -> bool:
    n = len(g.vertices)
    if n < 3 or len(g.edges) != n:
        return False
    if g.has_parallel_edges():
        return False
    if len(g.weak_components) != 1:
        return False
    return all(len(g.out_edges[v]) + len(g.in_edges[v]) == 2 for v in g.vertices)


def cycle_vertex_sequence(g: EmbeddedDigraph) -> list[VertexId]:
    """Vertices of an oriented cycle in a canonical cyclic order.

    Starts at the smallest vertex id and proceeds toward its smaller
    neighbor, so the sequence is invariant under relabeling-free
    rotation and reflection of the input.
    """
    if not _is_simple_cycle(g):
        raise StructureError("underlying undirected graph is not a simple cycle")
    nbrs: dict[VertexId, list[VertexId]] = {v: [] for v in g.vertices}
    for _e, t, h in g.edges:
        nbrs[t].append(h)
        nbrs[h].append(t)
    start = min(g.vertices)
    second = min(nbrs[start])
    seq = [start, second]
    while True:
        prev, cur = seq[-2], seq[-1]
        nxt = nbrs[cur][0] if nbrs[cur][1] == prev else nbrs[cur][1]
        if nxt == start:
            return seq
        seq.append(nxt)


def cycle_edge_between(g: EmbeddedDigraph, u: VertexId, v: VertexId) -> tuple[EdgeId, bool]:
    """The unique cycle edge joining u and v; bool marks direction u->v."""
    for eid, t, h in g.edges:
        if (t, h) == (u, v):
            return eid, True
        if (t, h) == (v, u):
            return eid, False
    raise StructureError(f"no cycle edge between {u!r} and {v!r}")
