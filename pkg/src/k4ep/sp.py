"""Two-terminal series-parallel recognition."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .graph import Graph, GraphError


@dataclass(frozen=True)
class SPTree:
    """Composition tree; leaves partition the edges of the recognised graph.

    kind is one of "edge", "vertex", "series", "parallel". For series nodes
    `r` is the vertex shared by the two children.
    """

    kind: str
    s: int
    t: int
    children: tuple[SPTree, ...] = ()
    r: int | None = None
    eid: int | None = None
    edges: frozenset[int] = field(default=frozenset(), compare=False)
    vertices: frozenset[int] = field(default=frozenset(), compare=False)

    def leaves(self) -> Iterator[SPTree]:
        stack = [self]
        while stack:
            node = stack.pop()
            if node.kind in ("edge", "vertex"):
                yield node
            else:
                stack.extend(reversed(node.children))


def _edge_leaf(g: Graph, s: int, t: int) -> SPTree:
    e = g.edge_id(s, t)
    return SPTree("edge", s, t, eid=e, edges=frozenset([e]), vertices=frozenset([s, t]))


def _series(a: SPTree, b: SPTree) -> SPTree:
    return SPTree("series", a.s, b.t, (a, b), r=a.t,
                  edges=a.edges | b.edges, vertices=a.vertices | b.vertices)


def _parallel(a: SPTree, b: SPTree) -> SPTree:
    return SPTree("parallel", a.s, a.t, (a, b),
                  edges=a.edges | b.edges, vertices=a.vertices | b.vertices)


def _fold(items: list[SPTree], join) -> SPTree:
    # balanced folding keeps the tree depth logarithmic in long chains
    while len(items) > 1:
        nxt = [join(items[i], items[i + 1]) for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def sp_recognize(g: Graph, s: int, t: int) -> SPTree | None:
    """SPTree of g with terminals s, t, or None if g is not series-parallel so."""
    if not g.has_vertex(s) or not g.has_vertex(t):
        raise GraphError("terminals must be vertices of the graph")
    if s == t:
        if g.n == 1 and g.m == 0:
            return SPTree("vertex", s, s, vertices=frozenset([s]))
        return None
    if not g.is_connected():
        return None
    return _recognize(g, s, t)


def _recognize(g: Graph, s: int, t: int) -> SPTree | None:
    if g.m == 1:
        return _edge_leaf(g, s, t) if g.has_edge(s, t) and g.n == 2 else None
    pieces = _st_pieces(g, s, t)
    if len(pieces) >= 2:
        subtrees = []
        for piece in pieces:
            sub = _recognize(piece, s, t)
            if sub is None:
                return None
            subtrees.append(sub)
        return _fold(subtrees, _parallel)
    chain = _series_chain(g, s, t)
    if chain is None:
        return None
    subtrees = []
    for piece, a, b in chain:
        sub = _recognize(piece, a, b)
        if sub is None:
            return None
        subtrees.append(sub)
    return _fold(subtrees, _series)


def _st_pieces(g: Graph, s: int, t: int) -> list[Graph]:
    """The {s,t}-bridges of g: the edge st alone, and each component of g-{s,t}
    together with its attachment edges."""
    pieces = []
    if g.has_edge(s, t):
        pieces.append(g.edge_subgraph([g.edge_id(s, t)]))
    rest = g.without_vertices([s, t])
    for comp in rest.components():
        eids = {e for v in comp for e in g.incident(v).values()}
        pieces.append(g.edge_subgraph(eids))
    if len(pieces) == 1:
        return pieces
    for p in pieces:
        if not (p.has_vertex(s) and p.has_vertex(t)):
            return []  # a piece hanging on one terminal only: not series-parallel
    return pieces


def _series_chain(g: Graph, s: int, t: int) -> list[tuple[Graph, int, int]] | None:
    """Split g at a middle vertex separating s from t; None if something hangs off."""
    adj = g.adjacency()
    seps = _separating_vertices(adj, s, t)
    if not seps:
        return None
    r = seps[len(seps) // 2]
    side1 = _reach(adj, s, r) | {r}
    side2 = _reach(adj, t, r) | {r}
    if len(side1) + len(side2) - 1 != g.n:
        return None
    e1 = [e for e, u, v in g.edges() if u in side1 and v in side1]
    e2 = [e for e, u, v in g.edges() if u in side2 and v in side2]
    if len(e1) + len(e2) != g.m:
        return None
    return [(g.edge_subgraph(e1), s, r), (g.edge_subgraph(e2), r, t)]


def _reach(adj, start, banned) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        for w in adj[stack.pop()]:
            if w != banned and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _separating_vertices(adj, s, t) -> list[int]:
    """Vertices other than s, t lying on every s-t path, in path order."""
    path = _bfs_path(adj, s, t, None)
    if path is None:
        return []
    return [v for v in path[1:-1] if _bfs_path(adj, s, t, v) is None]


def _bfs_path(adj, s, t, banned):
    prev = {s: None}
    frontier = [s]
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w == banned or w in prev:
                    continue
                prev[w] = u
                if w == t:
                    path = [t]
                    while prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    return path[::-1]
                nxt.append(w)
        frontier = nxt
    return None
