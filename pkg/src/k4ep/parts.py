"""Apexed graphs, parts of G - x, their blocks, decompositions and types."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable

from .graph import Graph, GraphError, is_two_connected
from .k4 import is_k4_free
from .ned import NED, good_ned_of, x_ear_count
from .sp import SPTree, sp_recognize


class PartError(GraphError):
    pass


@dataclass(frozen=True, eq=False)
class ApexedGraph:
    """A graph with a distinguished apex x; X is x together with its neighbours."""

    g: Graph
    x: int

    def __post_init__(self):
        if not self.g.has_vertex(self.x):
            raise PartError(f"apex {self.x} not in graph")

    @cached_property
    def X(self) -> frozenset[int]:
        return frozenset(self.g.neighbors(self.x)) | {self.x}

    @cached_property
    def gx(self) -> Graph:
        """G - x."""
        return self.g.without_vertices([self.x])

    @cached_property
    def core(self) -> Graph:
        """G - X."""
        return self.g.without_vertices(self.X)

    @cached_property
    def NX(self) -> frozenset[int]:
        """Vertices outside X with a neighbour in X."""
        return frozenset(w for y in self.X - {self.x} for w in self.g.neighbors(y)
                         if w not in self.X)

    @cached_property
    def anchor(self) -> dict[int, int]:
        """X-vertex -> its neighbour outside X (for degree-2 X-vertices)."""
        out = {}
        for y in self.X - {self.x}:
            others = [w for w in self.g.neighbors(y) if w != self.x]
            if len(others) == 1:
                out[y] = others[0]
        return out

    @cached_property
    def leaves(self) -> dict[int, tuple[int, ...]]:
        """Vertex of G - X -> the X-vertices hanging on it."""
        out: dict[int, list[int]] = {}
        for y, v in self.anchor.items():
            out.setdefault(v, []).append(y)
        return {v: tuple(sorted(ys)) for v, ys in out.items()}

    def standard_violations(self) -> list[str]:
        """Problems with the normal form: X-vertices of degree 2 hanging on
        G - X, G - X 2-connected and K4-free, G not K4-free."""
        out = []
        for y in sorted(self.X - {self.x}):
            if self.g.degree(y) != 2:
                out.append(f"X-vertex {y} has degree {self.g.degree(y)}")
            elif y not in self.anchor or self.anchor[y] in self.X:
                out.append(f"X-vertex {y} is not attached to G - X")
        if not is_two_connected(self.core):
            out.append("G - X is not 2-connected")
        elif not is_k4_free(self.core):
            out.append("G - X contains a K4-subdivision")
        if is_k4_free(self.g):
            out.append("G contains no K4-subdivision")
        return out

    def is_standard(self) -> bool:
        return not self.standard_violations()

    def default_terminals(self) -> tuple[int, int]:
        """Ends of the smallest-id edge of G - X."""
        e = min(self.core.edge_ids)
        return self.core.ends(e)


class PartType(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"


@dataclass(frozen=True, eq=False)
class Part:
    """A subgraph of G - x with terminals s, t (s == t for trivial parts)."""

    host: ApexedGraph
    edges: frozenset[int]
    vertices: frozenset[int]
    s: int
    t: int

    @cached_property
    def graph(self) -> Graph:
        return self.host.gx.edge_subgraph(self.edges, self.vertices)

    @cached_property
    def core(self) -> Graph:
        """H - X."""
        return self.graph.without_vertices(self.host.X)

    @cached_property
    def x_vertices(self) -> frozenset[int]:
        return self.vertices & self.host.X

    @property
    def terminals(self) -> tuple[int, int]:
        return self.s, self.t

    @cached_property
    def is_trivial(self) -> bool:
        return self.core.n == 1

    @cached_property
    def is_substantial(self) -> bool:
        inner = self.core.vertices - {self.s, self.t}
        return any(self.host.anchor.get(y) in inner for y in self.x_vertices)

    @cached_property
    def is_simple(self) -> bool:
        return not self.x_vertices or self.is_trivial

    def key(self) -> tuple:
        return (self.edges, self.vertices, self.s, self.t)

    def __eq__(self, other):
        return isinstance(other, Part) and self.host is other.host and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Part(s={self.s}, t={self.t}, |E|={len(self.edges)}, |V|={len(self.vertices)})"


def found_terminals(host: ApexedGraph, edges: Iterable[int], vertices: Iterable[int]) -> set[int]:
    """Vertices incident with an edge of G - x outside the given subgraph."""
    edges = set(edges)
    gx = host.gx
    return {v for v in vertices if any(e not in edges for e in gx.incident(v).values())}


def make_part(host: ApexedGraph, edges: Iterable[int], s: int, t: int,
              vertices: Iterable[int] = ()) -> Part:
    edges = frozenset(edges)
    verts = set(vertices) | {s, t}
    for e in edges:
        verts |= set(host.gx.ends(e))
    extra = found_terminals(host, edges, verts) - {s, t}
    if extra:
        raise PartError(f"subgraph has terminals {sorted(extra)} besides {s}, {t}")
    return Part(host, edges, frozenset(verts), s, t)


def whole_part(host: ApexedGraph, s: int | None = None, t: int | None = None) -> Part:
    """The part G - x with terminals making G - X series-parallel."""
    if s is None or t is None:
        s, t = host.default_terminals()
    return make_part(host, host.gx.edge_ids, s, t, host.gx.vertices)


def leaf_edges(h: Part, v: int) -> list[int]:
    """Edges of h between v and X."""
    out = []
    for w, e in h.graph.incident(v).items():
        if w in h.host.X:
            out.append(e)
    return sorted(out)


def sub_part(h: Part, core_vertices: Iterable[int], s: int, t: int,
             leaves_at: Iterable[int] | None = None, core_edges: Iterable[int] | None = None) -> Part:
    """Part of h spanned by core vertices (or the given core edges) plus the
    X-leaves of h at `leaves_at` (default: every core vertex but s and t)."""
    cv = set(core_vertices) | {s, t}
    if core_edges is None:
        ce = {e for e, u, v in h.core.edges() if u in cv and v in cv}
    else:
        ce = set(core_edges)
    at = cv - {s, t} if leaves_at is None else set(leaves_at)
    es = set(ce)
    for v in at:
        es.update(leaf_edges(h, v))
    return make_part(h.host, es, s, t, cv)


# -- series-parallel structure of a part ----------------------------------

def part_sptree(h: Part) -> SPTree | None:
    return sp_recognize(h.core, h.s, h.t)


def good_ned(h: Part) -> NED:
    if h.core.m == 0:
        raise PartError("H - X has no edge")
    tree = part_sptree(h)
    if tree is None:
        raise PartError("H - X is not series-parallel with the part's terminals")
    return good_ned_of(tree, part_nx(h))


def part_nx(h: Part) -> frozenset[int]:
    """Vertices of H - X with an X-leaf inside H."""
    return frozenset(h.host.anchor[y] for y in h.x_vertices if y in h.host.anchor)


def x_ear_number(h: Part) -> int:
    if h.core.m == 0:
        return 0
    return x_ear_count(good_ned(h), part_nx(h))


# -- blocks along the terminal chain ----------------------------------------

@dataclass(frozen=True)
class ChainBlock:
    edges: frozenset[int]
    vertices: frozenset[int]
    a: int
    b: int


def separating_vertices(g: Graph, s: int, t: int) -> list[int]:
    from .sp import _separating_vertices

    return _separating_vertices(g.adjacency(), s, t)


def block_chain(h: Part) -> list[ChainBlock]:
    """Blocks of H - X in order from s to t."""
    if h.s == h.t:
        return []
    core = h.core
    stops = [h.s] + separating_vertices(core, h.s, h.t) + [h.t]
    index = {v: i for i, v in enumerate(stops)}
    rest = core.without_vertices(stops)
    groups: dict[int, set[int]] = {i: set() for i in range(len(stops) - 1)}
    for comp in rest.components():
        att = {index[w] for v in comp for w in core.neighbors(v) if w in index}
        lo = min(att)
        if att - {lo, lo + 1}:
            raise PartError("H - X is not a chain of blocks between its terminals")
        groups[lo] |= comp
    out = []
    for i in range(len(stops) - 1):
        a, b = stops[i], stops[i + 1]
        vs = groups[i] | {a, b}
        es = {e for e, u, v in core.edges() if u in vs and v in vs}
        out.append(ChainBlock(frozenset(es), frozenset(vs), a, b))
    if sum(len(b.edges) for b in out) != core.m:
        raise PartError("H - X is not a chain of blocks between its terminals")
    return out


def block_part(h: Part, blk: ChainBlock) -> Part:
    """The block with the X-leaves at its non-gate vertices."""
    return sub_part(h, blk.vertices, blk.a, blk.b, core_edges=blk.edges)


def block_parts(h: Part) -> list[Part]:
    return [block_part(h, b) for b in block_chain(h)]


def substantial_block_parts(h: Part) -> list[Part]:
    return [b for b in block_parts(h) if b.is_substantial]


def lrb_split(h: Part, b: Part) -> tuple[Part, Part, Part]:
    """H = L_B + B + R_B with L_B on terminals (s, a) and R_B on (b, t).

    X-leaves at the gate a go to L_B and those at the gate b to R_B.
    """
    chain = block_chain(h)
    idx = next((i for i, c in enumerate(chain) if c.edges == b.core.edge_ids), None)
    if idx is None or (chain[idx].a, chain[idx].b) != (b.s, b.t):
        raise PartError("not a block-part of this part")
    left = chain[:idx]
    right = chain[idx + 1:]
    lv = {h.s} | {v for c in left for v in c.vertices}
    rv = {h.t} | {v for c in right for v in c.vertices}
    L = sub_part(h, lv, h.s, b.s, leaves_at=lv,
                 core_edges={e for c in left for e in c.edges})
    R = sub_part(h, rv, b.t, h.t, leaves_at=rv,
                 core_edges={e for c in right for e in c.edges})
    if L.s == L.t == h.s and h.s != b.s:
        raise PartError("inconsistent split")
    return L, b, R


def st_bridges(h: Part) -> list[Part]:
    """The {s,t}-bridges of H - X, each with the X-leaves at its inner vertices."""
    core = h.core
    out = []
    if core.has_edge(h.s, h.t):
        out.append(sub_part(h, [h.s, h.t], h.s, h.t, core_edges=[core.edge_id(h.s, h.t)]))
    for comp in core.without_vertices([h.s, h.t]).components():
        es = {e for v in comp for e in core.incident(v).values()}
        out.append(sub_part(h, comp | {h.s, h.t}, h.s, h.t, core_edges=es))
    return out


def union_parts(parts: list[Part], s: int, t: int) -> Part:
    host = parts[0].host
    es = set().union(*(p.edges for p in parts))
    vs = set().union(*(p.vertices for p in parts))
    return make_part(host, es, s, t, vs)


def _xfree_except(p: Part, v: int) -> bool:
    return not ((p.core.vertices - {v}) & p.host.NX)


def classify_part_type(h: Part) -> PartType:
    if h.s == h.t:
        raise PartError("part type needs two terminals")
    subs = substantial_block_parts(h)
    if not subs:
        return PartType.I
    if len(subs) >= 2:
        return PartType.II
    b = subs[0]
    bridges = st_bridges(b)
    n_sub = sum(1 for br in bridges if br.is_substantial)
    L, _, R = lrb_split(h, b)
    if len(bridges) >= 2 and n_sub < len(bridges):
        if not _xfree_except(L, h.s) or not _xfree_except(R, h.t):
            return PartType.III
    if n_sub >= 2:
        return PartType.IV
    return PartType.V


def type_iii_split(h: Part) -> tuple[Part, Part, Part, Part]:
    """(L_B, B, R_B, B_2) with B_2 a non-substantial bridge of B."""
    b = substantial_block_parts(h)[0]
    L, _, R = lrb_split(h, b)
    non = [br for br in st_bridges(b) if not br.is_substantial]
    return L, b, R, non[0]


def parallel_split(b: Part, substantial_pair: bool) -> tuple[Part, Part]:
    """Split a block-part in parallel: B_1 takes every bridge but B_2.

    With substantial_pair, B_2 is a substantial bridge and B_1 still holds
    another one; otherwise B_2 is a non-substantial bridge.
    """
    bridges = st_bridges(b)
    pick = [br for br in bridges if br.is_substantial == substantial_pair]
    if not pick or len(bridges) < 2:
        raise PartError("no such parallel decomposition")
    b2 = pick[-1]
    rest = [br for br in bridges if br is not b2]
    b1 = union_parts(rest, b.s, b.t)
    # leaves hanging on the gates of b stay with b1
    gate_leaves = set(b.edges) - set(b1.edges) - set(b2.edges)
    if gate_leaves:
        b1 = make_part(b.host, b1.edges | gate_leaves, b.s, b.t, b1.vertices |
                       {v for e in gate_leaves for v in b.host.gx.ends(e)})
    return b1, b2


# -- decompositions -----------------------------------------------------------

def _series_at(h: Part, c: int, leaves_left: bool) -> tuple[Part, Part]:
    core = h.core
    if c == h.s or c == h.t:
        raise PartError("series split needs an inner cut vertex")
    left = {h.s} | _reach_avoiding(core, h.s, c)
    right = (core.vertices - left) | {c}
    ce_left = {e for e, u, v in core.edges() if u in left | {c} and v in left | {c}}
    ce_right = set(core.edge_ids) - ce_left
    left |= {c}
    lat = (left - {c}) | ({c} if leaves_left else set())
    rat = (right - {h.t} - {c}) | ({c} if not leaves_left else set()) | {h.t}
    h1 = sub_part(h, left, h.s, c, leaves_at=lat | {h.s}, core_edges=ce_left)
    h2 = sub_part(h, right, c, h.t, leaves_at=rat, core_edges=ce_right)
    return h1, h2


def _reach_avoiding(g: Graph, start: int, banned: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        for w in g.neighbors(stack.pop()):
            if w != banned and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def series_split(h: Part, c: int, leaves_left: bool = True) -> tuple[Part, Part]:
    return _series_at(h, c, leaves_left)


def terminal_star_split(h: Part, at_s: bool) -> tuple[Part, Part]:
    """Split off the X-leaves at s (or t) as a trivial part."""
    v = h.s if at_s else h.t
    star = leaf_edges(h, v)
    if not star:
        raise PartError("no X-leaves at that terminal")
    triv = make_part(h.host, star, v, v)
    rest = make_part(h.host, set(h.edges) - set(star), h.s, h.t,
                     h.vertices - {y for e in star for y in h.host.gx.ends(e) if y != v})
    return (triv, rest) if at_s else (rest, triv)


def decompose_part(h: Part, max_parallel: int = 4) -> list[tuple[str, Part, Part]]:
    """Candidate series and parallel decompositions into two parts.

    The degenerate split of h into itself and a bare terminal is excluded.
    """
    if h.s == h.t:
        return []
    out: list[tuple[str, Part, Part]] = []
    for at_s in (True, False):
        if leaf_edges(h, h.s if at_s else h.t):
            a, b = terminal_star_split(h, at_s)
            out.append(("series", a, b))
    for c in separating_vertices(h.core, h.s, h.t):
        has_leaves = bool(leaf_edges(h, c))
        for left in ((True, False) if has_leaves else (True,)):
            a, b = _series_at(h, c, left)
            out.append(("series", a, b))
    bridges = st_bridges(h)
    if len(bridges) >= 2:
        idx = range(len(bridges))
        subsets: list[tuple[int, ...]] = []
        if len(bridges) <= max_parallel:
            for r in range(1, len(bridges)):
                subsets += [c for c in combinations(idx, r) if 0 in c]
        else:
            subsets = [tuple(j for j in idx if j != i) for i in idx]
        gate = set(leaf_edges(h, h.s)) | set(leaf_edges(h, h.t))
        for sub in subsets:
            one = [bridges[j] for j in sub]
            two = [bridges[j] for j in idx if j not in sub]
            h1 = union_parts(one, h.s, h.t)
            if gate:
                h1 = make_part(h.host, h1.edges | gate, h.s, h.t,
                               h1.vertices | {v for e in gate for v in h.host.gx.ends(e)})
            h2 = union_parts(two, h.s, h.t)
            out.append(("parallel", h1, h2))
    return out


def induced_ned(d: NED, h1: Part, h2: Part) -> tuple[NED | None, NED | None]:
    """Restrictions of a NED of h1 + h2 to each side (None when empty)."""
    out = []
    for hj in (h1, h2):
        g = hj.core
        ears = []
        for ear in d.ears:
            runs = []
            cur: list[int] = []
            for a, b in zip(ear, ear[1:]):
                if g.has_edge(a, b):
                    cur = cur or [a]
                    cur.append(b)
                elif cur:
                    runs.append(cur)
                    cur = []
            if cur:
                runs.append(cur)
            if len(runs) > 1:
                raise PartError("ear meets a side in more than one path")
            if runs:
                ears.append(tuple(runs[0]))
        out.append(NED.build(ears) if ears else None)
    return out[0], out[1]
