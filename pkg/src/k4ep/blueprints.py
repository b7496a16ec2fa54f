"""Blueprints: the finitely many labelled graphs that traces of
K4-subdivisions on a part can be subdivisions of."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable

from .graph import Graph, GraphError
from .parts import Part

LABELS = ("s", "t", "x")

# Basic blueprints: vertex labels (None = unlabelled), solid edges and
# dashed (contractible) edges.
_BASIC: dict[str, tuple[tuple, tuple, tuple]] = {
    "a": (("s", "x"), ((0, 1),), ()),
    "b": (("s", "x", "t", "x"), ((0, 1), (2, 3)), ()),
    "c": (("s", "t"), ((0, 1),), ()),
    "d": (("s", None, "t", "x"), ((1, 2), (1, 3)), ((0, 1),)),
    "e": (("s", None, None, "t", "x", "x"), ((1, 2), (1, 4), (2, 5)), ((0, 1), (2, 3))),
    "f": (("s", None, None, None, "t", "x", "x", "x"),
          ((1, 2), (2, 3), (1, 5), (2, 6), (3, 7)), ((0, 1), (3, 4))),
    "g": ((None, None, None, "x", "x", "x"),
          ((0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)), ()),
    "h": ((None, None, None, "x", "x", "s"),
          ((0, 1), (1, 2), (0, 2), (0, 3), (1, 4)), ((2, 5),)),
    "i": ((None, None, None, "x", "t", "s"),
          ((0, 1), (1, 2), (0, 2), (0, 3)), ((1, 4), (2, 5))),
    "j": ((None, None, None, "t", None, "s", "x", "x"),
          ((0, 1), (1, 2), (0, 2), (1, 4), (2, 6), (4, 7)), ((0, 3), (4, 5))),
    "k": ((None, None, None, "x", "x", "s", "x", "t"),
          ((0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (6, 7)), ((2, 5),)),
    "l": ((None, None, None, None, "t", "x", "s", "x"),
          ((0, 1), (1, 2), (2, 3), (0, 3), (1, 5), (3, 7)), ((0, 4), (2, 6))),
    "m": ((None, None, None, None, "x", "x"),
          ((0, 1), (1, 2), (0, 2), (0, 3), (2, 3), (1, 4), (3, 5)), ()),
    "n": ((None, None, None, None, "s", "x"),
          ((0, 1), (1, 2), (0, 2), (0, 3), (2, 3), (3, 5)), ((1, 4),)),
    "o": ((None, None, None, None, "s", "x", "x", "t"),
          ((0, 1), (1, 2), (0, 2), (0, 3), (2, 3), (3, 5), (6, 7)), ((1, 4),)),
}

EXCEPTIONAL_BASES = frozenset("fjklo")

CATEGORY = {
    "a": "appendix", "b": "double appendix",
    "c": "comb", "d": "comb", "e": "comb", "f": "comb",
    "m": "rooted diamond", "n": "rooted diamond", "o": "rooted diamond",
}


@dataclass(frozen=True)
class LabelledGraph:
    labels: tuple[str | None, ...]
    edges: frozenset[tuple[int, int]]

    @property
    def n(self) -> int:
        return len(self.labels)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def key(self) -> tuple:
        return canonical_form(self)[0]


@dataclass(frozen=True)
class Provenance:
    basic: str
    contracted: tuple[tuple[int, int], ...] = ()
    swapped: bool = False
    accidental: tuple[tuple[str, str], ...] = ()  # (label, "vertex"|"subdivide")

    @property
    def exceptional(self) -> bool:
        return self.basic in EXCEPTIONAL_BASES

    def describe(self) -> str:
        parts = [f"({self.basic})"]
        if self.contracted:
            parts.append("contract " + ",".join(f"{u}{v}" for u, v in self.contracted))
        if self.swapped:
            parts.append("swap s/t")
        for lab, how in self.accidental:
            parts.append(f"accidental {lab} by {how}")
        return "; ".join(parts)


@dataclass(frozen=True)
class Blueprint:
    key: tuple
    graph: LabelledGraph
    provenance: tuple[Provenance, ...] = field(compare=False)

    @property
    def basic(self) -> str:
        return self.provenance[0].basic

    @property
    def exceptional(self) -> bool:
        return any(p.exceptional for p in self.provenance)

    @property
    def accidental_labels(self) -> frozenset[str]:
        return frozenset(lab for p in self.provenance[:1] for lab, _ in p.accidental)

    @property
    def category(self) -> str | None:
        name = CATEGORY.get(self.basic)
        if name == "comb":
            nx_ = sum(1 for lab in self.graph.labels if lab == "x")
            return f"{nx_}-comb"
        return name

    def to_json(self) -> dict:
        return {
            "labels": list(self.graph.labels),
            "edges": sorted(list(e) for e in self.graph.edges),
            "basic": self.basic,
            "exceptional": self.exceptional,
            "category": self.category,
            "provenance": [p.describe() for p in self.provenance],
        }


# -- canonical forms ----------------------------------------------------------

def canonical_form(g: LabelledGraph) -> tuple[tuple, tuple[int, ...]]:
    """(key, order): key is the smallest encoding over label-preserving
    relabellings that respect a degree refinement; order[i] is the vertex
    placed at position i."""
    n = g.n
    adj = [set() for _ in range(n)]
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    lab = [g.labels[v] or "" for v in range(n)]
    color = [(lab[v], len(adj[v])) for v in range(n)]
    for _ in range(3):
        color = [(color[v], tuple(sorted(color[w] for w in adj[v]))) for v in range(n)]
    classes: dict = {}
    for v in range(n):
        classes.setdefault(color[v], []).append(v)
    keys = sorted(classes)
    best = None
    best_order = None
    for choice in product(*(permutations(classes[c]) for c in keys)):
        order = [v for block in choice for v in block]
        pos = {v: i for i, v in enumerate(order)}
        enc = tuple(sorted(tuple(sorted((pos[u], pos[v]))) for u, v in g.edges))
        if best is None or enc < best:
            best = enc
            best_order = tuple(order)
    labels = tuple(lab[v] for v in best_order) if best_order else ()
    return (labels, best or ()), best_order or ()


# -- catalogue -----------------------------------------------------------------

def _contract(labels, edges, e):
    u, v = e
    keep, drop = (u, v) if labels[u] is not None else (v, u)
    new_labels = list(labels)
    new_edges = set()
    for a, b in edges:
        a = keep if a == drop else a
        b = keep if b == drop else b
        if a != b:
            new_edges.add((min(a, b), max(a, b)))
    # renumber without `drop`
    idx = {w: i for i, w in enumerate(w for w in range(len(labels)) if w != drop)}
    del new_labels[drop]
    return tuple(new_labels), frozenset((idx[a], idx[b]) for a, b in new_edges)


def _basic_variants() -> list[tuple[LabelledGraph, Provenance]]:
    out = []
    for name, (labels, solid, dashed) in _BASIC.items():
        for mask in range(1 << len(dashed)):
            picked = [dashed[i] for i in range(len(dashed)) if mask >> i & 1]
            labs = tuple(labels)
            edges = frozenset(tuple(sorted(e)) for e in solid + dashed)
            # contract one at a time, tracking renumbering by endpoint labels
            remaining = list(picked)
            while remaining:
                e = remaining.pop()
                drop = e[0] if labs[e[0]] is None else e[1]
                labs, edges = _contract(labs, edges, e)
                remaining = [tuple(w - (w > drop) for w in f) for f in remaining]
            for swapped in (False, True):
                lab2 = labs
                if swapped:
                    lab2 = tuple({"s": "t", "t": "s"}.get(x, x) for x in labs)
                out.append((LabelledGraph(lab2, edges), Provenance(name, tuple(picked), swapped)))
    return out


def _accidental(g: LabelledGraph, label: str) -> list[tuple[LabelledGraph, str]]:
    out = [(g, "omit")]
    for v in range(g.n):
        if g.labels[v] is None:
            labs = list(g.labels)
            labs[v] = label
            out.append((LabelledGraph(tuple(labs), g.edges), "vertex"))
    for u, v in sorted(g.edges):
        w = g.n
        edges = set(g.edges) - {(u, v)} | {(u, w), (v, w)}
        out.append((LabelledGraph(g.labels + (label,), frozenset(edges)), "subdivide"))
    return out


@lru_cache(maxsize=1)
def _catalogue() -> dict[tuple, Blueprint]:
    found: dict[tuple, tuple[LabelledGraph, list[Provenance]]] = {}

    def add(g: LabelledGraph, prov: Provenance):
        key = g.key()
        if key not in found:
            found[key] = (g, [])
        if prov not in found[key][1]:
            found[key][1].append(prov)

    for g, prov in _basic_variants():
        add(g, prov)
        missing = [lab for lab in ("s", "t") if lab not in g.labels]
        stage = [(g, ())]
        for lab in missing:
            nxt = []
            for h, acc in stage:
                for h2, how in _accidental(h, lab):
                    nxt.append((h2, acc if how == "omit" else acc + ((lab, how),)))
            stage = nxt
        for h, acc in stage:
            if acc:
                add(h, Provenance(prov.basic, prov.contracted, prov.swapped, acc))
    out = {}
    for key, (g, provs) in found.items():
        provs.sort(key=lambda p: (len(p.accidental), p.basic, len(p.contracted), p.swapped))
        out[key] = Blueprint(key, g, tuple(provs))
    return out


def blueprint_catalog() -> list[Blueprint]:
    """Every blueprint, deduplicated up to labelled isomorphism."""
    return sorted(_catalogue().values(), key=lambda b: (b.basic, b.graph.n, b.key))


def find_blueprint(g: LabelledGraph) -> Blueprint | None:
    return _catalogue().get(g.key())


def basic_blueprint(name: str, contracted: Iterable[tuple[int, int]] = (), swapped: bool = False) -> Blueprint:
    want = Provenance(name, tuple(contracted), swapped)
    for g, prov in _basic_variants():
        if prov.basic == want.basic and set(prov.contracted) == set(want.contracted) \
                and prov.swapped == want.swapped:
            return _catalogue()[g.key()]
    raise KeyError(name)


# -- modules ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ModuleRec:
    """A subgraph of a part together with its blueprint.

    `correspondence` maps each branch vertex of the subgraph to its index in
    the blueprint's labelled graph.
    """

    part: Part
    edges: frozenset[int]
    blueprint: Blueprint
    correspondence: dict[int, int]

    @property
    def branch_vertices(self) -> frozenset[int]:
        return frozenset(self.correspondence)

    def graph(self) -> Graph:
        return self.part.host.gx.edge_subgraph(self.edges)

    def __repr__(self):
        return f"ModuleRec(|E|={len(self.edges)}, blueprint={self.blueprint.provenance[0].describe()})"


def _vertex_labels(h: Part, vertices: Iterable[int]) -> dict[int, str | None]:
    X = h.host.X
    out = {}
    for v in vertices:
        if v == h.s:
            out[v] = "s"
        elif v == h.t:
            out[v] = "t"
        elif v in X:
            out[v] = "x"
        else:
            out[v] = None
    return out


def reduce_labelled(g: Graph, labels: dict[int, str | None]) -> tuple[LabelledGraph, list[int]] | None:
    """Suppress unlabelled degree-2 vertices; None if that would create a
    loop or a parallel edge, or if an unlabelled vertex has degree below 2."""
    adj = {v: set(g.neighbors(v)) for v in g.vertices if g.degree(v) > 0}
    changed = True
    while changed:
        changed = False
        for v in sorted(adj):
            if labels.get(v) is not None:
                continue
            if len(adj[v]) < 2:
                return None
            if len(adj[v]) == 2:
                a, b = sorted(adj[v])
                if b in adj[a]:
                    return None
                adj[a].discard(v)
                adj[b].discard(v)
                adj[a].add(b)
                adj[b].add(a)
                del adj[v]
                changed = True
                break
    order = sorted(adj)
    pos = {v: i for i, v in enumerate(order)}
    edges = frozenset((min(pos[u], pos[w]), max(pos[u], pos[w])) for u in adj for w in adj[u])
    return LabelledGraph(tuple(labels.get(v) for v in order), edges), order


def classify_edges(h: Part, edges: Iterable[int]) -> ModuleRec | None:
    """Blueprint of the subgraph of h spanned by the given edges, or None."""
    edges = frozenset(edges)
    if not edges or not edges <= h.edges:
        return None
    m = h.host.gx.edge_subgraph(edges)
    labels = _vertex_labels(h, m.vertices)
    red = reduce_labelled(m, labels)
    if red is None:
        return None
    lg, order = red
    bp = find_blueprint(lg)
    if bp is None:
        return None
    _, mine = canonical_form(lg)
    _, theirs = canonical_form(bp.graph)
    corr = {order[mine[i]]: theirs[i] for i in range(len(mine))}
    return ModuleRec(h, edges, bp, corr)


def classify_module(h: Part, m: Iterable[int], k4_edges: Iterable[int] | None = None) -> ModuleRec:
    """Blueprint of a module of h.

    If the K4-subdivision is supplied, the module must be its trace on h.
    """
    m = frozenset(m)
    if k4_edges is not None:
        trace = frozenset(k4_edges) & h.edges
        if trace != m:
            raise GraphError("subgraph is not the trace of the K4-subdivision on the part")
    rec = classify_edges(h, m)
    if rec is None:
        raise GraphError("subgraph has no blueprint")
    return rec


def same_blueprint(a: ModuleRec, b: ModuleRec) -> bool:
    return a.blueprint.key == b.blueprint.key


def substitute_path(h: Part, m: ModuleRec, p: tuple[int, ...], q: tuple[int, ...]) -> ModuleRec:
    """Replace the path p of m by q (same ends); the blueprint must survive."""
    gx = h.host.gx
    mg = m.graph()
    if len(p) < 2 or p[0] != q[0] or p[-1] != q[-1]:
        raise GraphError("replacement must join the ends of the path")
    pe = set(mg.path_edges(p))
    forbidden = {h.s, h.t} | h.host.X
    for v in p[1:-1]:
        if v in forbidden or mg.degree(v) >= 3:
            raise GraphError(f"path has interior vertex {v} that is a terminal, in X or branching")
    rest = mg.without_edges(pe).without_vertices(p[1:-1])
    for v in q[1:-1]:
        if v in {h.s, h.t} or (rest.has_vertex(v) and rest.degree(v) > 0):
            raise GraphError(f"replacement meets the module or a terminal at {v}")
    if len(set(q)) != len(q):
        raise GraphError("replacement is not a path")
    qe = set(gx.path_edges(q))
    if not qe <= h.edges:
        raise GraphError("replacement leaves the part")
    new = classify_edges(h, (m.edges - pe) | qe)
    if new is None or not same_blueprint(new, m):
        raise GraphError("substitution changed the blueprint")
    return new


def substitute_module(h1: Part, h2: Part, m1: ModuleRec, m2_new: Iterable[int]) -> ModuleRec:
    """Swap the trace of m1 on the sub-part h2 for another subgraph of h2
    with the same blueprint."""
    m2_new = frozenset(m2_new)
    if not h2.edges <= h1.edges:
        raise GraphError("h2 is not contained in h1")
    old = classify_edges(h2, m1.edges & h2.edges)
    new = classify_edges(h2, m2_new)
    if old is None or new is None or not same_blueprint(old, new):
        raise GraphError("replacement does not have the blueprint of the trace")
    rec = classify_edges(h1, (m1.edges - h2.edges) | m2_new)
    if rec is None or not same_blueprint(rec, m1):
        raise GraphError("recombined subgraph lost the blueprint")
    return rec


def two_disjoint_terminal_x_paths(m: ModuleRec) -> bool:
    """Whether the module holds two vertex-disjoint {s,t}-X paths."""
    import networkx as nx

    h = m.part
    g = m.graph().to_networkx()
    terms = {h.s, h.t} & set(g.nodes)
    xs = set(g.nodes) & h.host.X
    if len(terms) < 2 or len(xs) < 2:
        return False
    g.add_edges_from(("src", v) for v in terms)
    g.add_edges_from((y, "snk") for y in xs)
    return nx.node_connectivity(g, "src", "snk") >= 2
