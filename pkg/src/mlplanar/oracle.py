"""Brute-force ground truth for multilevel planarity at desk scale.

The oracle is deliberately independent of the constructive pipelines:
crossing-freeness is decided by the per-gap inversion criterion over
exhaustively enumerated per-level orders of the proper graph, never by
the drawing algorithm. A positive verdict always ships a witness whose
reconstructed drawing passes the exact validator.

Fixed-embedding mode constrains the induced clockwise rotation at every
vertex and, when an outer face is designated, the induced unbounded
face. Free-embedding mode enumerates per-level orders only, which is
equivalent to existence of a drawing over all embeddings.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Iterator, Optional

from .errors import CyclicGraph, SearchSpaceTooLarge, StructureError
from .graph import EdgeId, EmbeddedDigraph, VertexId, compute_faces
from .leveldraw import Drawing, ProperLevelGraph, drawing_from_orders, make_proper
from .levels import LevelAssignment, MultilevelAssignment, normalize

DEFAULT_ASSIGNMENT_CAP = 10**6
DEFAULT_PERMUTATION_CAP = factorial(10)


@dataclass
class Witness:
    """Certificate for a positive oracle verdict."""

    gamma: LevelAssignment
    level_orders: dict[int, list]  # per level, real ids and ("dummy", edge, i) labels
    drawing: Drawing


@dataclass
class OracleResult:
    planar: bool
    witness: Optional[Witness] = None

    def __bool__(self) -> bool:
        return self.planar


def enumerate_assignments(
    g: EmbeddedDigraph,
    levels: MultilevelAssignment,
    cap: int = DEFAULT_ASSIGNMENT_CAP,
) -> Iterator[LevelAssignment]:
    """All level assignments within the normalized sets, lexicographically.

    Vertices are filled in sorted-id order, each from its normalized set
    ascending, pruning as soon as an already-assigned neighbor violates
    the strict increase along an edge. Raises SearchSpaceTooLarge when
    the product of set sizes exceeds the cap, CyclicGraph on cyclic
    input.
    """
    norm = normalize(g, levels)  # raises CyclicGraph
    order = sorted(g.vertices)
    if any(norm[v].is_empty() for v in order):
        return
    product = 1
    for v in order:
        product *= norm[v].count()
        if product > cap:
            raise SearchSpaceTooLarge(product, cap)

    lower_nbrs: dict[VertexId, list[VertexId]] = {v: [] for v in order}
    upper_nbrs: dict[VertexId, list[VertexId]] = {v: [] for v in order}
    rank = {v: i for i, v in enumerate(order)}
    for _eid, tail, head in g.edges:
        # neighbor already assigned when we reach the later vertex
        if rank[tail] < rank[head]:
            lower_nbrs[head].append(tail)
        else:
            upper_nbrs[tail].append(head)

    assignment: dict[VertexId, int] = {}

    def rec(i: int) -> Iterator[LevelAssignment]:
        if i == len(order):
            yield LevelAssignment(dict(assignment))
            return
        v = order[i]
        for value in norm[v]:
            ok = all(assignment[w] < value for w in lower_nbrs[v]) and all(
                assignment[w] > value for w in upper_nbrs[v]
            )
            if ok:
                assignment[v] = value
                yield from rec(i + 1)
                del assignment[v]

    yield from rec(0)


# ---------------------------------------------------------------------------
# Per-level order enumeration
# ---------------------------------------------------------------------------


def _merge_free(fixed: list, free: list, groups: Optional[list] = None) -> Iterator[list]:
    """All arrangements keeping the fixed part's order: insert free nodes
    one at a time into every gap (each arrangement arises exactly once).

    When groups are given (one key per free node, equal keys meaning the
    nodes are interchangeable for every future constraint), arrangements
    that only swap group members are collapsed by keeping members in
    their list order."""

    def place(i: int, seq: list) -> Iterator[list]:
        if i == len(free):
            yield seq
            return
        start = 0
        if groups is not None and i > 0 and groups[i] == groups[i - 1]:
            start = seq.index(free[i - 1]) + 1
        for pos in range(start, len(seq) + 1):
            yield from place(i + 1, seq[:pos] + [free[i]] + seq[pos:])

    yield from place(0, list(fixed))


def _interchange_key(proper: ProperLevelGraph, node: int, collapse: bool):
    """Nodes with equal keys are interchangeable for all future checks.

    A node with a single outgoing chain is identified by the vertex the
    chain merges into and the distance to it: swapping two such parallel
    rails (including their chains, which stay collapsed level by level)
    is an automorphism of the constraint structure. Dead-end chains of
    equal length are likewise interchangeable wherever they hang.
    """
    if not collapse:
        return node  # unique key: no collapsing
    cur = node
    steps = 0
    while len(proper.out_segs[cur]) == 1:
        nxt = proper.seg_head[proper.out_segs[cur][0]]
        if len(proper.in_segs[nxt]) != 1:
            return ("bundle", nxt, steps)
        cur = nxt
        steps += 1
    if not proper.out_segs[cur]:
        return ("deadend", steps)
    return ("solo", node)


def _level_order_candidates(
    proper: ProperLevelGraph,
    prev_order: list[int],
    nodes: list[int],
    collapse: bool,
) -> Iterator[list[int]]:
    """Crossing-free orders of one level given the order below it.

    A node with incoming segments occupies a tail-position interval; two
    such nodes admit a crossing-free order only when their intervals are
    separated (a shared endpoint means a shared tail vertex, which never
    crosses). Nodes without incoming segments are placed everywhere; in
    free-embedding mode, such nodes with identical out-neighborhoods are
    interchangeable and only one representative arrangement is emitted.
    """
    pos = {node: i for i, node in enumerate(prev_order)}
    constrained: list[tuple[int, int, int]] = []
    free: list[int] = []
    for node in sorted(nodes):
        tails = [pos[proper.seg_tail[s]] for s in proper.in_segs[node]]
        if tails:
            constrained.append((min(tails), max(tails), node))
        else:
            free.append(node)
    constrained.sort()
    for (a_min, a_max, _a), (b_min, b_max, _b) in zip(constrained, constrained[1:]):
        if a_max > b_min:
            return  # inversion forced whatever the order

    groups: list[list[int]] = []
    group_keys: list[tuple[int, int]] = []
    for t_min, t_max, node in constrained:
        if groups and group_keys[-1] == (t_min, t_max) and t_min == t_max:
            groups[-1].append(node)
        else:
            groups.append([node])
            group_keys.append((t_min, t_max))

    free_keys = {node: _interchange_key(proper, node, collapse) for node in free}
    free.sort(key=lambda n: (repr(free_keys[n]), n))
    free_group_list = [free_keys[n] for n in free]

    def group_orders(i: int, acc: list[int]) -> Iterator[list[int]]:
        if i == len(groups):
            yield acc
            return
        members = groups[i]
        keys = {n: _interchange_key(proper, n, collapse) for n in members}
        members = sorted(members, key=lambda n: (repr(keys[n]), n))
        seen: set[tuple] = set()
        for perm in permutations(members):
            sig = tuple(keys[n] for n in perm)
            if sig in seen:
                continue
            seen.add(sig)
            yield from group_orders(i + 1, acc + list(perm))

    for fixed in group_orders(0, []):
        yield from _merge_free(fixed, free, free_group_list)


def _fixed_context(proper: ProperLevelGraph, rotation):
    """Prescriptions a fixed rotation imposes on per-level orders.

    For every real vertex: the left-to-right order of its incoming ends
    (exact when the vertex has outgoing ends to anchor the cycle, cyclic
    otherwise), and the left-to-right order of its outgoing ends (exact
    when anchored by incoming ends, cyclic for sources). Anchored in
    orders are additionally pushed down the incoming dummy chains as
    tokens, so a wrong arrangement dies at the level where it happens.
    Returns None when some rotation is not bimodal (no drawing exists).
    """
    g = proper.graph
    seg_at: dict[tuple[int, int], int] = {}
    for sid in range(len(proper.seg_tail)):
        seg_at[(proper.seg_tail[sid], proper.seg_edge[sid])] = sid
    in_seg_of: dict[tuple[int, int], int] = {}
    for node in range(len(proper.level_of)):
        for s in proper.in_segs[node]:
            in_seg_of[(node, proper.seg_edge[s])] = s

    in_seq: dict[int, tuple[list[int], bool]] = {}
    out_seq: dict[int, tuple[list[int], bool]] = {}
    for v in g.vertices:
        node = proper.node_of_vertex(v)
        cyc = list(rotation.get(v, []))
        k = len(cyc)
        ins = proper.in_segs[node]
        outs = proper.out_segs[node]
        if not cyc:
            continue
        in_ids = {g.edges[proper.seg_edge[s]][0] for s in ins}
        if ins:
            block = None
            for start in (i for i, e in enumerate(cyc) if e in in_ids):
                if all(cyc[(start + j) % k] in in_ids for j in range(len(in_ids))) and (
                    len(in_ids) == k or cyc[(start - 1) % k] not in in_ids
                ):
                    block = start
                    break
            if block is None:
                return None  # in ends are not consecutive in the rotation
            seq = [
                in_seg_of[(node, g._eindex[cyc[(block + j) % k]])]
                for j in range(len(in_ids))
            ]
            seq.reverse()  # clockwise in block reads right to left
            in_seq[node] = (seq, len(in_ids) < k)
            if outs:
                start_out = (block + len(in_ids)) % k
                oseq = [
                    seg_at[(node, g._eindex[cyc[(start_out + j) % k]])]
                    for j in range(k - len(in_ids))
                ]
                out_seq[node] = (oseq, True)
        elif outs:
            oseq = [seg_at[(node, g._eindex[e])] for e in cyc]
            out_seq[node] = (oseq, False)

    node_tokens: dict[int, list[tuple[int, int]]] = {}
    merge_anchored: dict[int, bool] = {}
    for node, (seq, anchored) in in_seq.items():
        merge_anchored[node] = anchored
        for rank, s in enumerate(seq):
            cur = proper.seg_tail[s]
            while True:
                node_tokens.setdefault(cur, []).append((node, rank))
                tails = proper.in_segs[cur]
                if proper.is_dummy(cur) and len(tails) == 1:
                    cur = proper.seg_tail[tails[0]]
                else:
                    break
    return in_seq, out_seq, node_tokens, merge_anchored


def _fixed_level_filter(proper: ProperLevelGraph, ctx):
    """Per-level rejection of orders that contradict the rotation."""
    in_seq, out_seq, node_tokens, merge_anchored = ctx
    levels = proper.levels

    def ok(idx: int, orders: dict[int, list[int]]) -> bool:
        cur = orders[levels[idx]]
        pos = {n: i for i, n in enumerate(cur)}

        ranks: dict[int, list[int]] = {}
        for n in cur:
            for merge, rank in node_tokens.get(n, ()):
                ranks.setdefault(merge, []).append(rank)
        for merge, seen in ranks.items():
            descents = sum(1 for a, b in zip(seen, seen[1:]) if b < a)
            if descents > (0 if merge_anchored[merge] else 1):
                return False

        if idx == 0:
            return True
        below = {n: i for i, n in enumerate(orders[levels[idx - 1]])}
        for n in cur:
            prescription = in_seq.get(n)
            if prescription is None or not proper.in_segs[n]:
                continue
            got = sorted(proper.in_segs[n], key=lambda s: below[proper.seg_tail[s]])
            want, anchored = prescription
            if anchored:
                if got != want:
                    return False
            elif not _cyclic_equal(got, want):
                return False
        for n in orders[levels[idx - 1]]:
            prescription = out_seq.get(n)
            if prescription is None:
                continue
            want, anchored = prescription
            got = sorted(proper.out_segs[n], key=lambda s: pos[proper.seg_head[s]])
            if anchored:
                if got != want:
                    return False
            elif not _cyclic_equal(got, want):
                return False
        return True

    return ok



def _enumerate_level_orders(
    proper: ProperLevelGraph,
    collapse: bool,
    level_filter=None,
) -> Iterator[dict[int, list[int]]]:
    """All crossing-free per-level orders, lazily.

    In collapse mode (free embedding), states whose suffix search came up
    empty are memoized by the relative order of the nodes that still
    have outgoing segments; nodes without them cannot influence any
    later level, so revisiting such a state cannot succeed either.

    level_filter(idx, orders) may reject a partial assignment right
    after the level at index idx was placed (used for incremental
    rotation checks in fixed-embedding mode).
    """
    levels = proper.levels
    if not levels:
        yield {}
        return
    failed: set = set()

    def signature(idx: int, order: list[int]):
        return idx, tuple(n for n in order if proper.out_segs[n])

    def rec(idx: int, orders: dict[int, list[int]]) -> Iterator[dict[int, list[int]]]:
        if idx == len(levels):
            yield dict(orders)
            return
        lev = levels[idx]
        nodes = proper.nodes_by_level[lev]
        prev = orders[levels[idx - 1]] if idx > 0 else []
        sig = signature(idx, prev) if collapse else None
        if sig is not None and sig in failed:
            return
        produced = False
        for cand in _level_order_candidates(proper, prev, nodes, collapse):
            orders[lev] = cand
            if level_filter is not None and not level_filter(idx, orders):
                continue
            for done in rec(idx + 1, orders):
                produced = True
                yield done
        orders.pop(lev, None)
        if sig is not None and not produced:
            failed.add(sig)

    yield from rec(0, {})


def _permutation_product(proper: ProperLevelGraph, cap: int, fixed: bool) -> None:
    """Upper bound on the number of per-level arrangements the search can
    visit. Free mode discounts interchangeable nodes; fixed mode counts
    the guided enumeration's choices (source linearizations and free
    block placements), which is far below the raw width factorial."""
    product = 1
    for lev in proper.levels:
        nodes = proper.nodes_by_level[lev]
        if not fixed:
            bound = factorial(len(nodes))
            sizes: dict = {}
            for node in nodes:
                key = _interchange_key(proper, node, True)
                sizes[key] = sizes.get(key, 0) + 1
            for count in sizes.values():
                bound //= factorial(count)
        else:
            bound = 1
            runs = 0
            blocks = 0
            for node in nodes:
                if proper.in_segs[node]:
                    runs += 1
                else:
                    blocks += 1
                    bound *= max(len(proper.out_segs[node]), 1)
            for i in range(1, blocks + 1):
                bound *= runs + i
        product *= max(bound, 1)
        if product > cap:
            raise SearchSpaceTooLarge(product, cap)


def _node_label(proper: ProperLevelGraph, node: int):
    if not proper.is_dummy(node):
        return proper.graph.vertices[node]
    # recover which edge and which interior position the dummy occupies
    for ei, chain in enumerate(proper.chains):
        if node in chain:
            return ("dummy", proper.graph.edges[ei][0], chain.index(node))
    raise AssertionError("dummy not found in any chain")


def _induced_rotation_from_orders(
    proper: ProperLevelGraph, orders: dict[int, list[int]]
) -> dict[VertexId, list[EdgeId]]:
    """Clockwise rotation induced at real vertices by per-level orders.

    Reading clockwise: outgoing ends left to right, then incoming ends
    right to left.
    """
    pos = {node: i for lev in orders for i, node in enumerate(orders[lev])}
    g = proper.graph
    rot: dict[VertexId, list[EdgeId]] = {}
    for v in g.vertices:
        node = proper.node_of_vertex(v)
        outs = sorted(proper.out_segs[node], key=lambda s: pos[proper.seg_head[s]])
        ins = sorted(proper.in_segs[node], key=lambda s: -pos[proper.seg_tail[s]])
        rot[v] = [g.edges[proper.seg_edge[s]][0] for s in outs] + [
            g.edges[proper.seg_edge[s]][0] for s in ins
        ]
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
    n = len(a)
    return all(a[(i + k) % n] == b[(j + k) % n] for k in range(n))


def _outer_face_matches(
    faces, proper: ProperLevelGraph, orders: dict[int, list[int]]
) -> bool:
    """Does the induced unbounded face equal the designated outer face?

    The unbounded face lies left of the leftmost outgoing end at the
    leftmost edged vertex of the lowest level that has one; isolated
    vertices bound no face and cannot pin it.
    """
    v0 = None
    for lev in proper.levels:
        if lev not in orders:
            break
        for node in orders[lev]:
            if not proper.is_dummy(node) and proper.out_segs[node]:
                v0 = node
                break
        if v0 is not None:
            break
    if v0 is None:
        return True  # edgeless graph
    pos = {node: i for lev in orders for i, node in enumerate(orders[lev])}
    leftmost_seg = min(proper.out_segs[v0], key=lambda s: pos[proper.seg_head[s]])
    ei = proper.seg_edge[leftmost_seg]
    dart = ei << 1  # first segment of the chain leaves the real tail
    return faces.face_of_dart(dart).is_outer


def level_planar_bruteforce(
    g: EmbeddedDigraph,
    gamma: LevelAssignment,
    rotation: Optional[dict[VertexId, list[EdgeId]]] = None,
    perm_cap: int = DEFAULT_PERMUTATION_CAP,
) -> bool:
    """Is (G, gamma) level planar, optionally respecting an embedding?

    Exhaustive over per-level left-to-right orders of the proper graph;
    crossing-freeness is zero inversions between consecutive levels.
    With a rotation, the induced rotation must match it cyclically at
    every vertex, and a designated outer face of G must come out as the
    unbounded face.
    """
    return _search_orders(g, gamma, rotation, perm_cap) is not None


def _search_orders(
    g: EmbeddedDigraph,
    gamma: LevelAssignment,
    rotation: Optional[dict[VertexId, list[EdgeId]]],
    perm_cap: int,
) -> Optional[tuple[ProperLevelGraph, dict[int, list[int]]]]:
    g.reject_parallel_edges()
    faces = None
    if rotation is not None and g.outer_face is not None:
        edged = [c for c in g.weak_components if any(g.out_edges[v] or g.in_edges[v] for v in c)]
        if len(edged) > 1:
            raise StructureError("outer-face checking requires one edged component")
        faces = compute_faces(g)
    proper = make_proper(g, gamma)
    # interchangeable-node collapsing is only sound when no rotation or
    # outer-face constraint can tell the swapped nodes apart
    collapse = rotation is None
    if perm_cap is not None:
        _permutation_product(proper, perm_cap, fixed=rotation is not None)

    if rotation is not None:
        ctx = _fixed_context(proper, rotation)
        if ctx is None:
            return None
        enumerator = _enumerate_level_orders(
            proper, collapse, level_filter=_fixed_level_filter(proper, ctx)
        )
    else:
        enumerator = _enumerate_level_orders(proper, collapse)
    for orders in enumerator:
        if rotation is not None:
            induced = _induced_rotation_from_orders(proper, orders)
            if not all(_cyclic_equal(induced[v], list(rotation.get(v, []))) for v in g.vertices):
                continue
            if faces is not None and not _outer_face_matches(faces, proper, orders):
                continue
        return proper, orders
    return None


def multilevel_planar_bruteforce(
    g: EmbeddedDigraph,
    levels: MultilevelAssignment,
    rotation: Optional[dict[VertexId, list[EdgeId]]] = None,
    cap: int = DEFAULT_ASSIGNMENT_CAP,
    perm_cap: int = DEFAULT_PERMUTATION_CAP,
) -> OracleResult:
    """Exhaustive multilevel-planarity decision with a validated witness.

    True iff some enumerated level assignment admits crossing-free
    per-level orders (respecting the embedding in fixed mode). Cyclic
    graphs admit no strictly monotone drawing and yield a negative
    verdict. SearchSpaceTooLarge propagates; it is never silently
    approximated.
    """
    try:
        assignments = list(enumerate_assignments(g, levels, cap=cap))
    except CyclicGraph:
        return OracleResult(False)
    for gamma in assignments:
        found = _search_orders(g, gamma, rotation, perm_cap)
        if found is None:
            continue
        proper, orders = found
        drawing = drawing_from_orders(proper, orders, provenance="oracle")
        labeled = {
            lev: [_node_label(proper, node) for node in order]
            for lev, order in orders.items()
        }
        return OracleResult(True, Witness(gamma=gamma, level_orders=labeled, drawing=drawing))
    return OracleResult(False)
