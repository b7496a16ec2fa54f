"""Edge-disjoint path certificates: Menger, Mader S-paths, Koenig."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable

import networkx as nx
from networkx.algorithms import bipartite

from .graph import Graph, GraphError


@dataclass(frozen=True)
class PathsOrCut:
    """Exactly one of paths / cut is set."""

    paths: tuple[tuple[int, ...], ...] | None = None
    cut: frozenset[int] | None = None

    @property
    def found_paths(self) -> bool:
        return self.paths is not None


def edge_flow(g: Graph, sources: Iterable[int], sinks: Iterable[int], k: int | None = None,
              ) -> tuple[list[tuple[int, ...]], frozenset[int]]:
    """Maximum (or first k) edge-disjoint source-sink paths and, when the
    maximum is below k, a minimum separating edge set.

    Unit-capacity augmenting paths with BFS that scans neighbours in
    increasing id order. Sources and sinks must be disjoint.
    """
    src = set(sources)
    snk = set(sinks)
    if src & snk:
        raise GraphError("sources and sinks overlap")
    flow: dict[int, int] = {}  # edge id -> +1 (u->v with u<v), -1, or 0
    value = 0
    nbrs = {v: sorted(g.incident(v).items()) for v in g.vertices}

    def residual(x, y, e):
        u, _ = g.ends(e)
        f = flow.get(e, 0)
        return (1 - f) if x == u else (1 + f)

    def push(x, y, e):
        u, _ = g.ends(e)
        flow[e] = flow.get(e, 0) + (1 if x == u else -1)

    while k is None or value < k:
        prev: dict[int, tuple[int, int] | None] = {s: None for s in sorted(src)}
        frontier = sorted(src)
        hit = None
        while frontier and hit is None:
            nxt = []
            for x in frontier:
                for y, e in nbrs[x]:
                    if y in prev or residual(x, y, e) <= 0:
                        continue
                    prev[y] = (x, e)
                    if y in snk:
                        hit = y
                        break
                    nxt.append(y)
                if hit is not None:
                    break
            frontier = nxt
        if hit is None:
            reach = set(prev)
            cut = frozenset(e for e, u, v in g.edges() if (u in reach) != (v in reach))
            return _decompose(g, flow, src, snk), cut
        y = hit
        while prev[y] is not None:
            x, e = prev[y]
            push(x, y, e)
            y = x
        value += 1
    return _decompose(g, flow, src, snk), frozenset()


def _decompose(g: Graph, flow, src, snk) -> list[tuple[int, ...]]:
    out_arcs: dict[int, list[tuple[int, int]]] = {}
    for e, f in flow.items():
        if f == 0:
            continue
        u, v = g.ends(e)
        a, b = (u, v) if f > 0 else (v, u)
        out_arcs.setdefault(a, []).append((b, e))
    for lst in out_arcs.values():
        lst.sort()
    paths = []
    for s in sorted(src):
        while out_arcs.get(s):
            walk = [s]
            while walk[-1] not in snk or walk[-1] == s and len(walk) == 1:
                b, e = out_arcs[walk[-1]].pop(0)
                walk.append(b)
            paths.append(_shortcut(walk))
    return paths


def _shortcut(walk: list[int]) -> tuple[int, ...]:
    out: list[int] = []
    pos: dict[int, int] = {}
    for v in walk:
        if v in pos:
            del out[pos[v] + 1:]
            pos = {w: i for i, w in enumerate(out)}
        else:
            pos[v] = len(out)
            out.append(v)
    return tuple(out)


def menger_edge(g: Graph, a: int, b: int, k: int) -> PathsOrCut:
    """k edge-disjoint a-b paths, or an a-b edge cut of size below k."""
    if a == b:
        raise GraphError("menger_edge needs distinct ends")
    if not g.has_vertex(a) or not g.has_vertex(b):
        raise GraphError("end not in graph")
    paths, cut = edge_flow(g, [a], [b], k)
    if len(paths) >= k:
        return PathsOrCut(paths=tuple(paths[:k]))
    return PathsOrCut(cut=cut)


def max_edge_disjoint(g: Graph, a: Iterable[int] | int, b: Iterable[int] | int) -> int:
    a = [a] if isinstance(a, int) else list(a)
    b = [b] if isinstance(b, int) else list(b)
    paths, _ = edge_flow(g, a, b)
    return len(paths)


def paths_edge_disjoint(g: Graph, paths: Iterable[Iterable[int]]) -> bool:
    seen: set[int] = set()
    for p in paths:
        p = list(p)
        if len(set(p)) != len(p):
            return False
        for u, v in zip(p, p[1:]):
            if not g.has_edge(u, v):
                return False
            e = g.edge_id(u, v)
            if e in seen:
                return False
            seen.add(e)
    return True


def separates(g: Graph, cut: Iterable[int], a: Iterable[int], b: Iterable[int]) -> bool:
    h = g.without_edges(cut)
    a, b = set(a), set(b)
    seen = set(a & h.vertices)
    stack = list(seen)
    while stack:
        for w in h.incident(stack.pop()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return not (seen & b)


# -- Mader S-paths ---------------------------------------------------------------

def is_s_path(g: Graph, path: tuple[int, ...], S: set[int]) -> bool:
    if len(path) < 2 or len(set(path)) != len(path):
        return False
    if path[0] not in S or path[-1] not in S or any(v in S for v in path[1:-1]):
        return False
    return all(g.has_edge(u, v) for u, v in zip(path, path[1:]))


def has_s_path(g: Graph, S: Iterable[int], banned_edges: Iterable[int] = ()) -> bool:
    return find_s_path(g, set(S), set(banned_edges)) is not None


def find_s_path(g: Graph, S: set[int], banned: set[int]) -> tuple[int, ...] | None:
    """Some S-path avoiding banned edges (BFS from each S-vertex in turn)."""
    for s in sorted(S):
        prev = {s: None}
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for w, e in sorted(g.incident(u).items()):
                    if e in banned or w in prev:
                        continue
                    prev[w] = u
                    if w in S:
                        path = [w]
                        while prev[path[-1]] is not None:
                            path.append(prev[path[-1]])
                        return tuple(path[::-1])
                    nxt.append(w)
            frontier = nxt
    return None


def _pack_s_paths(g: Graph, S: set[int], k: int, node_budget: int = 200000):
    """Exact search for k edge-disjoint S-paths (None if there are fewer).

    Branches on the smallest edge still lying on an S-path: either some
    chosen path uses it, or it is discarded.
    """
    budget = [node_budget]

    def search(count, banned):
        if count == k:
            return []
        budget[0] -= 1
        if budget[0] < 0:
            raise RuntimeError("S-path search budget exhausted")
        rest = g.without_edges(banned)
        useful = s_path_edges(rest, S)
        if not useful:
            return None
        deg = sum(sum(1 for e in rest.incident(s).values() if e in useful) for s in S)
        if count + deg // 2 < k:
            return None
        e = min(useful)
        u, v = g.ends(e)
        for p in _s_paths_through(rest, S, u, v):
            es = set(rest.path_edges(p))
            got = search(count + 1, banned | es)
            if got is not None:
                return [p] + got
        return search(count, banned | {e})

    return search(0, frozenset())


def _s_paths_through(g: Graph, S: set[int], u: int, v: int):
    """S-paths of g containing the edge uv."""
    e = g.edge_id(u, v)
    if u in S and v in S:
        yield (u, v)
        return
    # grow from both sides of the edge until hitting S
    for left, lset in _half_paths(g, S, u, {e}, {v}):
        for right, _ in _half_paths(g, S, v, {e} | lset, set(left) | {v}):
            p = tuple(reversed(left)) + tuple(right)
            if p[0] != p[-1]:
                yield p


def _half_paths(g: Graph, S: set[int], start: int, banned: set[int], avoid: set[int]):
    """Paths start..s ending at the first S-vertex reached (start itself
    counts when it is in S), as (vertex list, edge set)."""
    if start in S:
        yield [start], set()
        return
    stack = [([start], set())]
    while stack:
        path, es = stack.pop()
        for w, e in sorted(g.incident(path[-1]).items(), reverse=True):
            if e in banned or e in es or w in path or w in avoid:
                continue
            if w in S:
                yield path + [w], es | {e}
            else:
                stack.append((path + [w], es | {e}))


def _greedy_s_paths(g: Graph, S: set[int]) -> list[tuple[int, ...]]:
    banned: set[int] = set()
    out = []
    while True:
        p = find_s_path(g, S, banned)
        if p is None:
            return out
        out.append(p)
        banned |= set(g.path_edges(p))


def s_path_edges(g: Graph, S: set[int]) -> set[int]:
    """Edges lying on at least one S-path."""
    out = set()
    comp_of: dict[int, int] = {}
    rest = g.without_vertices(S)
    comps = rest.components()
    for i, c in enumerate(comps):
        for v in c:
            comp_of[v] = i
    attach: dict[int, set[int]] = {}
    for v in S:
        for w in g.incident(v):
            if w in comp_of:
                attach.setdefault(comp_of[w], set()).add(v)
    for e, u, v in g.edges():
        if u in S and v in S:
            out.add(e)
            continue
        c = comp_of.get(u, comp_of.get(v))
        if len(attach.get(c, ())) >= 2:
            out.add(e)
    return out


def mader_s_paths(g: Graph, S: Iterable[int], k: int, node_budget: int = 200000) -> PathsOrCut:
    """k edge-disjoint S-paths, or an edge set of size at most 2k-2 meeting
    every S-path."""
    S = set(S)
    if len(S) < 2:
        raise GraphError("S needs at least two vertices")
    if not S <= g.vertices:
        raise GraphError("S not contained in the graph")
    if k <= 0:
        return PathsOrCut(paths=())
    greedy = _greedy_s_paths(g, S)
    if len(greedy) >= k:
        return PathsOrCut(paths=tuple(greedy[:k]))
    found = _pack_s_paths(g, S, k, node_budget)
    if found is not None:
        return PathsOrCut(paths=tuple(found))
    useful = sorted(s_path_edges(g, S))
    for size in range(0, 2 * k - 1):
        for cand in combinations(useful, size):
            if not has_s_path(g, S, cand):
                return PathsOrCut(cut=frozenset(cand))
    raise GraphError("no S-path cover within the Mader bound")


# -- Koenig -------------------------------------------------------------------------

@dataclass(frozen=True)
class MatchingOrCover:
    matching: tuple[tuple[Hashable, Hashable], ...] | None = None
    cover: frozenset | None = None  # of ("L", u) / ("R", v) tagged vertices


def bipartite_matching_or_cover(pairs: Iterable[tuple[Hashable, Hashable]], m: int) -> MatchingOrCover:
    """A matching of size >= m, or a vertex cover of size < m.

    Pair (u, v) is an edge between left vertex u and right vertex v.
    """
    pairs = list(dict.fromkeys(pairs))
    h = nx.Graph()
    left = {("L", u) for u, _ in pairs}
    h.add_nodes_from(left)
    h.add_nodes_from(("R", v) for _, v in pairs)
    h.add_edges_from((("L", u), ("R", v)) for u, v in pairs)
    match = bipartite.hopcroft_karp_matching(h, top_nodes=left) if pairs else {}
    edges = sorted((a[1], b[1]) for a, b in match.items() if a[0] == "L")
    if len(edges) >= m:
        return MatchingOrCover(matching=tuple(edges))
    cover = bipartite.to_vertex_cover(h, match, top_nodes=left) if pairs else set()
    return MatchingOrCover(cover=frozenset(cover))
