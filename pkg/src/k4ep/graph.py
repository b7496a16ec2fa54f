"""Immutable simple graphs with stable vertex and edge identities."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import networkx as nx

EdgeSet = frozenset  # frozenset[int] of edge ids of some host graph


class GraphError(ValueError):
    """Raised when an input violates a graph invariant."""


class Graph:
    """A finite simple undirected graph.

    Vertices are nonnegative integers. Every edge carries an integer id that
    is assigned once and never reused by graphs derived from this one, so
    certificates can refer to edges by id across deletions.
    """

    __slots__ = ("_adj", "_ends", "_next_eid", "_hash")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()):
        adj: dict[int, dict[int, int]] = {v: {} for v in vertices}
        ends: dict[int, tuple[int, int]] = {}
        for eid, (u, v) in enumerate(edges):
            _add(adj, ends, eid, u, v)
        self._adj = adj
        self._ends = ends
        self._next_eid = len(ends)
        self._hash = None

    @classmethod
    def from_edge_map(cls, vertices: Iterable[int], ends: Mapping[int, tuple[int, int]],
                      next_eid: int | None = None) -> Graph:
        adj: dict[int, dict[int, int]] = {v: {} for v in vertices}
        out: dict[int, tuple[int, int]] = {}
        for eid in sorted(ends):
            u, v = ends[eid]
            _add(adj, out, eid, u, v)
        return cls._raw(adj, out, max(out, default=-1) + 1 if next_eid is None else next_eid)

    @classmethod
    def _raw(cls, adj, ends, next_eid) -> Graph:
        g = cls.__new__(cls)
        g._adj = adj
        g._ends = ends
        g._next_eid = next_eid
        g._hash = None
        return g

    # -- queries -----------------------------------------------------------

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self._adj)

    @property
    def edge_ids(self) -> frozenset[int]:
        return frozenset(self._ends)

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return len(self._ends)

    @property
    def next_edge_id(self) -> int:
        return self._next_eid

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._adj[u][v]
        except KeyError:
            raise GraphError(f"no edge {u}-{v}") from None

    def ends(self, eid: int) -> tuple[int, int]:
        try:
            return self._ends[eid]
        except KeyError:
            raise GraphError(f"unknown edge id {eid}") from None

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield (eid, u, v) with u < v in increasing id order."""
        for eid in sorted(self._ends):
            u, v = self._ends[eid]
            yield eid, u, v

    def edge_pairs(self) -> list[tuple[int, int]]:
        return [self._ends[e] for e in sorted(self._ends)]

    def neighbors(self, v: int) -> list[int]:
        return sorted(self._adj[v])

    def incident(self, v: int) -> dict[int, int]:
        """Neighbour -> edge id map of v (read only by convention)."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def adjacency(self) -> dict[int, set[int]]:
        """A fresh mutable neighbour-set copy, for algorithms that destroy it."""
        return {v: set(nb) for v, nb in self._adj.items()}

    def path_edges(self, path: Iterable[int]) -> list[int]:
        """Edge ids along a vertex sequence; raises if a step is not an edge."""
        path = list(path)
        return [self.edge_id(a, b) for a, b in zip(path, path[1:])]

    def is_connected(self) -> bool:
        if not self._adj:
            return True
        start = next(iter(self._adj))
        seen = {start}
        stack = [start]
        while stack:
            for w in self._adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self._adj)

    def components(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        out = []
        for s in sorted(self._adj):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                for w in self._adj[stack.pop()]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            out.append(frozenset(comp))
        return out

    # -- derived graphs ----------------------------------------------------

    def without_edges(self, eids: Iterable[int]) -> Graph:
        drop = set(eids)
        unknown = drop - self._ends.keys()
        if unknown:
            raise GraphError(f"unknown edge ids {sorted(unknown)}")
        adj = {v: dict(nb) for v, nb in self._adj.items()}
        ends = dict(self._ends)
        for e in drop:
            u, v = ends.pop(e)
            del adj[u][v]
            del adj[v][u]
        return Graph._raw(adj, ends, self._next_eid)

    def without_vertices(self, vs: Iterable[int]) -> Graph:
        drop = set(vs)
        adj = {v: {w: e for w, e in nb.items() if w not in drop}
               for v, nb in self._adj.items() if v not in drop}
        ends = {e: (u, v) for e, (u, v) in self._ends.items() if u not in drop and v not in drop}
        return Graph._raw(adj, ends, self._next_eid)

    def induced(self, vs: Iterable[int]) -> Graph:
        keep = set(vs) & self._adj.keys()
        return self.without_vertices(self._adj.keys() - keep)

    def edge_subgraph(self, eids: Iterable[int], extra_vertices: Iterable[int] = ()) -> Graph:
        """Subgraph formed by the given edges and their ends (plus extra vertices)."""
        ends = {}
        for e in eids:
            ends[e] = self.ends(e)
        adj: dict[int, dict[int, int]] = {v: {} for v in extra_vertices}
        for v in extra_vertices:
            if v not in self._adj:
                raise GraphError(f"unknown vertex {v}")
        for e, (u, v) in ends.items():
            adj.setdefault(u, {})[v] = e
            adj.setdefault(v, {})[u] = e
        return Graph._raw(adj, ends, self._next_eid)

    def with_edges(self, pairs: Iterable[tuple[int, int]]) -> tuple[Graph, list[int]]:
        """Add edges (creating missing vertices); returns the graph and new ids."""
        adj = {v: dict(nb) for v, nb in self._adj.items()}
        ends = dict(self._ends)
        nxt = self._next_eid
        new = []
        for u, v in pairs:
            adj.setdefault(u, {})
            adj.setdefault(v, {})
            _add(adj, ends, nxt, u, v)
            new.append(nxt)
            nxt += 1
        return Graph._raw(adj, ends, nxt), new

    def with_vertices(self, vs: Iterable[int]) -> Graph:
        adj = {v: dict(nb) for v, nb in self._adj.items()}
        for v in vs:
            adj.setdefault(v, {})
        return Graph._raw(adj, dict(self._ends), self._next_eid)

    def union(self, other: Graph) -> Graph:
        """Union of two graphs sharing an id space; common ids must agree."""
        adj = {v: dict(nb) for v, nb in self._adj.items()}
        ends = dict(self._ends)
        for v in other._adj:
            adj.setdefault(v, {})
        for e, (u, v) in other._ends.items():
            if e in ends:
                if ends[e] != (u, v):
                    raise GraphError(f"edge id {e} disagrees between graphs")
                continue
            _add(adj, ends, e, u, v)
        return Graph._raw(adj, ends, max(self._next_eid, other._next_eid))

    def fresh_vertex(self) -> int:
        return max(self._adj, default=-1) + 1

    def to_networkx(self) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(self._adj)
        for e, (u, v) in self._ends.items():
            h.add_edge(u, v, eid=e)
        return h

    # -- value semantics ---------------------------------------------------

    def _key(self):
        return (frozenset(self._adj), frozenset(self._ends.items()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _add(adj, ends, eid, u, v):
    if u == v:
        raise GraphError(f"loop at {u}")
    if u not in adj or v not in adj:
        # vertices are implied by edges when building from a pair list
        adj.setdefault(u, {})
        adj.setdefault(v, {})
    if v in adj[u]:
        raise GraphError(f"parallel edge {u}-{v}")
    if eid in ends:
        raise GraphError(f"duplicate edge id {eid}")
    if u > v:
        u, v = v, u
    adj[u][v] = eid
    adj[v][u] = eid
    ends[eid] = (u, v)


def check_edge_set(g: Graph, f: Iterable[int]) -> EdgeSet:
    f = frozenset(f)
    unknown = f - g.edge_ids
    if unknown:
        raise GraphError(f"unknown edge ids {sorted(unknown)}")
    return f


def subgraph_without_edges(g: Graph, f: Iterable[int]) -> Graph:
    return g.without_edges(check_edge_set(g, f))


# -- blocks ------------------------------------------------------------------

@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[frozenset[int], ...]  # edge id sets, sorted by smallest id
    block_vertices: tuple[frozenset[int], ...]
    cutvertices: frozenset[int]
    # block index -> cutvertices on it, and cutvertex -> block indices
    block_cuts: tuple[frozenset[int], ...]
    cut_blocks: Mapping[int, frozenset[int]]

    def block_of_edge(self, eid: int) -> int:
        for i, b in enumerate(self.blocks):
            if eid in b:
                return i
        raise GraphError(f"edge {eid} in no block")


def blocks(g: Graph) -> BlockDecomposition:
    h = g.to_networkx()
    found = []
    for comp in nx.biconnected_component_edges(h):
        found.append(frozenset(h.edges[u, v]["eid"] for u, v in comp))
    found.sort(key=min)
    bverts = tuple(frozenset(v for e in b for v in g.ends(e)) for b in found)
    cuts = frozenset(nx.articulation_points(h))
    block_cuts = tuple(frozenset(bv & cuts) for bv in bverts)
    cut_blocks: dict[int, set[int]] = {c: set() for c in cuts}
    for i, bc in enumerate(block_cuts):
        for c in bc:
            cut_blocks[c].add(i)
    return BlockDecomposition(tuple(found), bverts, cuts, block_cuts,
                              {c: frozenset(s) for c, s in cut_blocks.items()})


def is_two_connected(g: Graph) -> bool:
    if g.n < 3 or not g.is_connected():
        return False
    return not any(True for _ in nx.articulation_points(g.to_networkx()))


def cutvertices(g: Graph) -> frozenset[int]:
    return frozenset(nx.articulation_points(g.to_networkx()))


# -- paths -------------------------------------------------------------------

def shortest_path(g: Graph, sources: Iterable[int], targets: Iterable[int],
                  avoid_vertices: Iterable[int] = (), avoid_edges: Iterable[int] = ()) -> list[int] | None:
    """BFS path from any source to any target, smallest ids first.

    Interior vertices avoid `avoid_vertices`; ends may lie in it only if they are
    sources or targets themselves.
    """
    srcs = sorted(set(sources))
    tgt = set(targets)
    bad_v = set(avoid_vertices)
    bad_e = set(avoid_edges)
    prev: dict[int, int | None] = {}
    for s in srcs:
        if s in g._adj:
            prev[s] = None
    frontier = [s for s in srcs if s in g._adj]
    for s in frontier:
        if s in tgt:
            return [s]
    while frontier:
        nxt = []
        for u in frontier:
            for w in sorted(g._adj[u]):
                if w in prev or g._adj[u][w] in bad_e:
                    continue
                if w in tgt:
                    prev[w] = u
                    path = [w]
                    while prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    return path[::-1]
                if w in bad_v:
                    continue
                prev[w] = u
                nxt.append(w)
        frontier = nxt
    return None


# -- text formats ------------------------------------------------------------

def parse_edgelist(text: str) -> Graph:
    verts: list[int] = []
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise GraphError(f"line {lineno}: not an integer pair: {raw!r}") from None
        if any(v < 0 for v in nums):
            raise GraphError(f"line {lineno}: negative vertex")
        if len(nums) == 1:
            verts.append(nums[0])  # isolated vertex
        elif len(nums) == 2:
            pairs.append((nums[0], nums[1]))
        else:
            raise GraphError(f"line {lineno}: expected 'u v'")
    return Graph(verts, pairs)


def format_edgelist(g: Graph) -> str:
    lines = [f"{u} {v}" for _, u, v in g.edges()]
    lines += [str(v) for v in sorted(g.vertices) if g.degree(v) == 0]
    return "\n".join(lines) + "\n"


def parse_graph6(text: str) -> Graph:
    h = nx.from_graph6_bytes(text.strip().encode())
    return Graph(h.nodes, sorted(tuple(sorted(e)) for e in h.edges))


def format_graph6(g: Graph) -> str:
    order = sorted(g.vertices)
    index = {v: i for i, v in enumerate(order)}
    h = nx.Graph()
    h.add_nodes_from(range(len(order)))
    h.add_edges_from((index[u], index[v]) for u, v in g.edge_pairs())
    return nx.to_graph6_bytes(h, header=False).decode().strip()


def load_graph(text: str, fmt: str = "edgelist") -> Graph:
    if fmt == "edgelist":
        return parse_edgelist(text)
    if fmt == "graph6":
        return parse_graph6(text)
    raise GraphError(f"unknown format {fmt!r}")
