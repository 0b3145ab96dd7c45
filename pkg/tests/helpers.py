"""Shared test fixtures: graph builders and coordinate-based embeddings."""

from __future__ import annotations

import math
from fractions import Fraction

from mlplanar.graph import LEFT, RIGHT, EmbeddedDigraph


def build(vertices, edges, rotation=None, outer_face=None):
    """Graph from 'a->b' edge strings; ids e0, e1, ... in order."""
    triples = []
    for i, spec in enumerate(edges):
        tail, head = spec.split("->")
        triples.append((f"e{i}", tail.strip(), head.strip()))
    return EmbeddedDigraph(vertices, triples, rotation=rotation, outer_face=outer_face)


def _seg_cross(p1, q1, p2, q2) -> bool:
    """Strict interior crossing of two straight segments (shared endpoints ok)."""

    def orient(o, a, b):
        v = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
        return (v > 0) - (v < 0)

    if len({p1, q1} & {p2, q2}) >= 1:
        # shared endpoint: only collinear overlap counts as a crossing
        if orient(p1, q1, p2) == 0 and orient(p1, q1, q2) == 0:
            pts = sorted([p1, q1, p2, q2])
            return pts[1] != pts[2] and not (pts[1] in (p1, q1) and pts[1] in (p2, q2))
        return False
    o1, o2 = orient(p1, q1, p2), orient(p1, q1, q2)
    o3, o4 = orient(p2, q2, p1), orient(p2, q2, q1)
    if o1 != o2 and o3 != o4 and (o1, o2) != (0, 0):
        return True
    for o, a, b, c in ((o1, p1, p2, q1), (o2, p1, q2, q1), (o3, p2, p1, q2), (o4, p2, q1, q2)):
        if o == 0 and min(a[0], c[0]) <= b[0] <= max(a[0], c[0]) and min(a[1], c[1]) <= b[1] <= max(a[1], c[1]):
            if b not in (a, c):
                return True
    return False


def embed_by_coordinates(vertices_xy, edge_specs):
    """Embedded graph from exact straight-line coordinates.

    vertices_xy: dict id -> (x, y); edge_specs: 'a->b' strings. Edges
    must be drawn upward and crossing-free; the clockwise rotation and
    the outer face are read off the geometry.
    """
    ids = list(vertices_xy)
    triples = []
    for i, spec in enumerate(edge_specs):
        tail, head = (p.strip() for p in spec.split("->"))
        if vertices_xy[head][1] <= vertices_xy[tail][1]:
            raise ValueError(f"edge {spec} is not upward")
        triples.append((f"e{i}", tail, head))

    pts = {v: (Fraction(x), Fraction(y)) for v, (x, y) in vertices_xy.items()}
    segs = [(pts[t], pts[h]) for _e, t, h in triples]
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            if _seg_cross(*segs[i], *segs[j]):
                raise ValueError(f"edges {triples[i][0]} and {triples[j][0]} cross")

    rotation = {}
    for v in ids:
        incident = []
        for eid, t, h in triples:
            if t == v:
                other = pts[h]
            elif h == v:
                other = pts[t]
            else:
                continue
            dx, dy = other[0] - pts[v][0], other[1] - pts[v][1]
            ang = math.atan2(float(dy), float(dx))
            incident.append((eid, ang))
        # clockwise from north: sort by decreasing angle starting at pi/2
        def cw_key(item):
            ang = item[1]
            shifted = (math.pi / 2 - ang) % (2 * math.pi)
            return shifted

        incident.sort(key=lambda it: (cw_key(it), it[0]))
        rotation[v] = [eid for eid, _a in incident]

    outer = _outer_from_geometry(vertices_xy, triples)
    return EmbeddedDigraph(ids, triples, rotation=rotation, outer_face=outer)


def _outer_from_geometry(vertices_xy, triples):
    """Outer face designation: the face left of the hull-most edge."""
    if not triples:
        return None
    # lowest vertex with an edge, then its out-edge of extreme angle
    pts = vertices_xy
    incident_edges = {}
    for eid, t, h in triples:
        incident_edges.setdefault(t, []).append((eid, h, True))
        incident_edges.setdefault(h, []).append((eid, t, False))
    v0 = min(incident_edges, key=lambda v: (pts[v][1], pts[v][0], v))
    # all edges at v0 point upward from it; the outer face lies left of the
    # leftmost end (counterclockwise-most direction)
    best = None
    for eid, other, is_out in incident_edges[v0]:
        dx, dy = pts[other][0] - pts[v0][0], pts[other][1] - pts[v0][1]
        ang = math.atan2(float(dy), float(dx))
        if best is None or ang > best[1]:
            best = ((eid, other, is_out), ang, eid)
    (eid, other, is_out), _ang, _ = best
    # walking v0 -> other keeps the unbounded region on the left
    if is_out:
        return (eid, LEFT)
    return (eid, RIGHT)
