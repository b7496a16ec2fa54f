"""Deciding K4-subdivision freeness and producing explicit witnesses."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .graph import Graph, GraphError

PAIRS = tuple(combinations(range(4), 2))


def reduces_to_empty(adj: dict[int, set[int]]) -> bool:
    """Series-parallel reduction on a mutable adjacency map (consumed).

    Repeatedly deletes vertices of degree at most one and suppresses vertices
    of degree two, merging the parallel edges this creates. A graph has no K4
    minor, equivalently no K4-subdivision, iff this empties it.
    """
    stack = [v for v, nb in adj.items() if len(nb) <= 2]
    while stack:
        v = stack.pop()
        nb = adj.get(v)
        if nb is None or len(nb) > 2:
            continue
        del adj[v]
        for w in nb:
            adj[w].discard(v)
        if len(nb) == 2:
            a, b = nb
            adj[a].add(b)
            adj[b].add(a)
        for w in nb:
            if len(adj[w]) <= 2:
                stack.append(w)
    return not adj


def pairs_k4_free(pairs: Iterable[tuple[int, int]]) -> bool:
    adj: dict[int, set[int]] = {}
    for u, v in pairs:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return reduces_to_empty(adj)


def is_k4_free(g: Graph) -> bool:
    return reduces_to_empty(g.adjacency())


def edges_k4_free(g: Graph, eids: Iterable[int]) -> bool:
    return pairs_k4_free(g.ends(e) for e in eids)


@dataclass(frozen=True)
class K4Witness:
    """Four branch vertices and six paths, path i joining the pair PAIRS[i]."""

    branch_vertices: tuple[int, int, int, int]
    paths: tuple[tuple[int, ...], ...]

    def edge_ids(self, g: Graph) -> frozenset[int]:
        return frozenset(e for p in self.paths for e in g.path_edges(p))

    def vertex_set(self) -> frozenset[int]:
        return frozenset(v for p in self.paths for v in p)

    def edge_pairs(self) -> list[tuple[int, int]]:
        return [tuple(sorted(ab)) for p in self.paths for ab in zip(p, p[1:])]

    def path_between(self, a: int, b: int) -> tuple[int, ...]:
        i, j = self.branch_vertices.index(a), self.branch_vertices.index(b)
        p = self.paths[PAIRS.index((min(i, j), max(i, j)))]
        return p if i < j else p[::-1]

    def to_json(self) -> dict:
        return {"branch_vertices": list(self.branch_vertices),
                "paths": [list(p) for p in self.paths]}

    @classmethod
    def from_json(cls, data: dict) -> K4Witness:
        return cls(tuple(data["branch_vertices"]), tuple(tuple(p) for p in data["paths"]))


def validate_k4_witness(g: Graph, w: K4Witness) -> bool:
    b = w.branch_vertices
    if len(b) != 4 or len(set(b)) != 4 or len(w.paths) != 6:
        return False
    used: set[int] = set(b)
    for (i, j), p in zip(PAIRS, w.paths):
        if len(p) < 2 or p[0] != b[i] or p[-1] != b[j]:
            return False
        inner = p[1:-1]
        if len(set(inner)) != len(inner) or used & set(inner):
            return False
        used |= set(inner)
        for u, v in zip(p, p[1:]):
            if not g.has_edge(u, v):
                return False
    return True


def witness_from_edges(g: Graph, eids: Iterable[int]) -> K4Witness:
    """Read off the witness from an edge set that is exactly a K4-subdivision."""
    adj: dict[int, list[int]] = {}
    for e in eids:
        u, v = g.ends(e)
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    branch = sorted(v for v, nb in adj.items() if len(nb) == 3)
    if len(branch) != 4 or any(len(nb) not in (2, 3) for nb in adj.values()):
        raise GraphError("edge set is not a K4-subdivision")
    paths: dict[tuple[int, int], tuple[int, ...]] = {}
    for a in branch:
        for first in sorted(adj[a]):
            path = [a, first]
            while len(adj[path[-1]]) == 2:
                u, v = adj[path[-1]]
                path.append(v if u == path[-2] else u)
            end = path[-1]
            if end == a:
                raise GraphError("edge set is not a K4-subdivision")
            i, j = branch.index(a), branch.index(end)
            if i < j:
                if (i, j) in paths:
                    raise GraphError("edge set is not a K4-subdivision")
                paths[(i, j)] = tuple(path)
    if len(paths) != 6:
        raise GraphError("edge set is not a K4-subdivision")
    w = K4Witness(tuple(branch), tuple(paths[p] for p in PAIRS))
    if not validate_k4_witness(g, w):
        raise GraphError("edge set is not a K4-subdivision")
    return w


def minimal_k4_edges(g: Graph, eids: Iterable[int] | None = None,
                     keep_first: Iterable[int] = ()) -> list[int] | None:
    """Greedy edge minimalisation in id order; None if the edges are K4-free.

    Edges listed in keep_first are tried for deletion last, which biases the
    residue towards them.
    """
    pool = sorted(g.edge_ids if eids is None else set(eids))
    ends = {e: g.ends(e) for e in pool}
    if pairs_k4_free(ends.values()):
        return None
    pool = _strip_low_degree(ends)
    late = set(keep_first)
    order = [e for e in pool if e not in late] + [e for e in pool if e in late]
    alive = set(pool)
    for e in order:
        if e not in alive:
            continue
        alive.discard(e)
        if pairs_k4_free(ends[f] for f in alive):
            alive.add(e)
        else:
            # dangling edges left by the deletion never belong to the residue
            alive = set(_strip_low_degree({f: ends[f] for f in alive}))
    return sorted(alive)


def _strip_low_degree(ends: dict[int, tuple[int, int]]) -> list[int]:
    deg: dict[int, int] = {}
    inc: dict[int, list[int]] = {}
    for e, (u, v) in ends.items():
        for w in (u, v):
            deg[w] = deg.get(w, 0) + 1
            inc.setdefault(w, []).append(e)
    alive = set(ends)
    stack = [v for v, d in deg.items() if d <= 1]
    while stack:
        v = stack.pop()
        for e in inc[v]:
            if e in alive:
                alive.discard(e)
                for w in ends[e]:
                    deg[w] -= 1
                    if deg[w] == 1:
                        stack.append(w)
    return sorted(alive)


def extract_k4_witness(g: Graph, eids: Iterable[int] | None = None) -> K4Witness | None:
    found = minimal_k4_edges(g, eids)
    if found is None:
        return None
    return witness_from_edges(g, found)


def witnesses_edge_disjoint(g: Graph, ws: Iterable[K4Witness]) -> bool:
    seen: set[int] = set()
    for w in ws:
        es = w.edge_ids(g)
        if seen & es:
            return False
        seen |= es
    return True
