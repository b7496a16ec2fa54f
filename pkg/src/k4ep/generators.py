"""Deterministic instance generators.

Every generator takes explicit sizes and, where randomness is involved, a
seed; the same arguments always give the same graph.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .graph import Graph
from .ned import NED
from .packing import FanSpec, LadderSpec


@dataclass
class Gadget:
    """A graph with apex x and, where meaningful, a designed NED of G - X."""

    g: Graph
    x: int | None = None
    ears: list[tuple[int, ...]] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def ned(self) -> NED:
        return NED.build(self.ears)


class _Builder:
    def __init__(self):
        self.pairs: list[tuple[int, int]] = []
        self.n = 0

    def new(self) -> int:
        self.n += 1
        return self.n - 1

    def edge(self, u: int, v: int):
        self.pairs.append((u, v))

    def path(self, u: int, v: int, inner: int) -> list[int]:
        vs = [u] + [self.new() for _ in range(inner)] + [v]
        for a, b in zip(vs, vs[1:]):
            self.edge(a, b)
        return vs

    def graph(self) -> Graph:
        return Graph(range(self.n), self.pairs)


class _EarBuilder(_Builder):
    """Builds G - X ear by ear, with x-links y-x hung on chosen vertices."""

    def __init__(self):
        super().__init__()
        self.x = self.new()
        self.ears: list[tuple[int, ...]] = []

    def xlink(self, v: int):
        y = self.new()
        self.edge(v, y)
        self.edge(y, self.x)

    def first(self, inner: int, links: Sequence[int] = ()) -> int:
        s, t = self.new(), self.new()
        vs = self.path(s, t, inner)
        for i in links:
            self.xlink(vs[i])
        self.ears.append(tuple(vs))
        return 0

    def ear(self, parent: int, i: int, j: int, inner: int, links: Sequence[int] = ()) -> int:
        p = self.ears[parent]
        vs = self.path(p[i], p[j], inner)
        for q in links:
            self.xlink(vs[q])
        self.ears.append(tuple(vs))
        return len(self.ears) - 1

    def close(self):
        """Add the edge between the ends of the first ear, making G - X 2-connected."""
        s, t = self.ears[0][0], self.ears[0][-1]
        self.edge(s, t)
        self.ears.append((s, t))

    def gadget(self, **meta) -> Gadget:
        return Gadget(self.graph(), self.x, list(self.ears), meta)


# -- side-by-side, nested and stacked configurations --------------------------------

def side_by_side(ell: int) -> Gadget:
    """A first ear carrying ell x-ears with consecutive disjoint intervals."""
    b = _EarBuilder()
    b.first(2 * ell)
    for i in range(ell):
        b.ear(0, 2 * i + 1, 2 * i + 2, 1, links=[1])
    b.close()
    return b.gadget(family="side-by-side", ell=ell, parent=0, x_ears=list(range(1, ell + 1)))


def nested_config(extra: int = 4) -> Gadget:
    """An x-ear E with F1, F2 nested in it, I(F2) inside I(F1), a third
    child F3 and a chain of further descendants hanging below F3."""
    b = _EarBuilder()
    e = b.first(7, links=[7])
    b.ear(e, 1, 4, 1, links=[1])
    b.ear(e, 2, 3, 1, links=[1])
    f3 = b.ear(e, 5, 6, 3, links=[2])
    cur = f3
    for _ in range(extra):
        cur = b.ear(cur, 1, 3, 3, links=[2])
    b.close()
    return b.gadget(family="nested", apex_ear=e)


def stacked_config(depth: int = 7) -> Gadget:
    """A chain of x-ears each nested in the previous one."""
    b = _EarBuilder()
    cur = b.first(3, links=[2])
    for _ in range(depth):
        cur = b.ear(cur, 1, 3, 3, links=[2])
    b.close()
    return b.gadget(family="stacked", apex_ear=0)


def side_config(children: int = 7) -> Gadget:
    """An x-ear with several x-ears side by side on it."""
    b = _EarBuilder()
    e = b.first(2 * children + 1, links=[2 * children + 1])
    for i in range(children):
        b.ear(e, 2 * i + 1, 2 * i + 2, 1, links=[1])
    b.close()
    return b.gadget(family="side", apex_ear=e)


def many_ears(count: int, seed: int = 0) -> Gadget:
    """A random tree of x-ears (each with one x-link) closed into G - X."""
    rng = random.Random(seed)
    b = _EarBuilder()
    b.first(3, links=[2])
    for _ in range(count - 1):
        p = rng.randrange(len(b.ears))
        ear = b.ears[p]
        if len(ear) < 3:
            p = 0
            ear = b.ears[0]
        i = rng.randrange(len(ear) - 1)
        b.ear(p, i, i + 1, 3, links=[2])
    b.close()
    return b.gadget(family="many-ears", count=count, seed=seed)


# -- ladders and fans ---------------------------------------------------------------

def _bundle(b: _Builder, u: int, v: int, width: int) -> frozenset[int]:
    start = len(b.pairs)
    for _ in range(width):
        b.path(u, v, 1)
    return frozenset(range(start, len(b.pairs)))


def ladder(k: int) -> tuple[Gadget, LadderSpec]:
    """A well-connected ladder: every part is a bundle of 4k paths of length
    two, with k X-leaves at both anchors."""
    b = _Builder()
    x = b.new()
    n = 3 * k + 3
    s = [b.new() for _ in range(n)]
    t = [b.new() for _ in range(n)]
    Q = [_bundle(b, s[i], s[i + 1], 4 * k) for i in range(n - 1)]
    R = [_bundle(b, t[i], t[i + 1], 4 * k) for i in range(n - 1)]
    S = [_bundle(b, s[i], t[i], 4 * k) for i in range(n)]
    for c in (s[0], s[-1]):
        for _ in range(k):
            y = b.new()
            b.edge(c, y)
            b.edge(y, x)
    g = b.graph()
    spec = LadderSpec(g, x, k, tuple(Q), tuple(R), tuple(S), tuple(s), tuple(t), s[0], s[-1])
    return Gadget(g, x, meta={"family": "ladder", "k": k}), spec


def fan(k: int) -> tuple[Gadget, FanSpec]:
    """A well-connected fan of size 3k: spine parts are bundles of 6k paths,
    spokes single paths of length two, k X-leaves at both spine ends."""
    b = _Builder()
    x = b.new()
    n = 3 * k + 1
    s = [b.new() for _ in range(n)]
    hub = b.new()
    Q = [_bundle(b, s[i], s[i + 1], 6 * k) for i in range(n - 1)]
    S = [_bundle(b, s[i], hub, 1) for i in range(n)]
    for c in (s[0], s[-1]):
        for _ in range(k):
            y = b.new()
            b.edge(c, y)
            b.edge(y, x)
    g = b.graph()
    spec = FanSpec(g, x, k, tuple(Q), tuple(S), tuple(s), hub)
    return Gadget(g, x, meta={"family": "fan", "k": k}), spec


# -- random series-parallel graphs -------------------------------------------------

def random_sp(n_ops: int, seed: int = 0, p_series: float = 0.5) -> tuple[Graph, int, int]:
    """A random 2-connected series-parallel graph built from a cycle by
    subdividing edges and adding paths parallel to edges.

    Returns the graph and the terminals (the ends of the starting edge).
    """
    rng = random.Random(seed)
    b = _Builder()
    s, t = b.new(), b.new()
    b.edge(s, t)
    b.path(s, t, 1)
    edges = list(b.pairs)
    for _ in range(n_ops):
        i = rng.randrange(len(edges))
        u, v = edges[i]
        if (u, v) == (s, t):
            i = rng.randrange(1, len(edges))
            u, v = edges[i]
        if rng.random() < p_series:
            w = b.new()
            edges[i] = (u, w)
            edges.append((w, v))
        else:
            w = b.new()
            edges += [(u, w), (w, v)]
    b.pairs = edges
    return b.graph(), s, t


def apexed_sp(n_ops: int, links: int, seed: int = 0, p_series: float = 0.5) -> Gadget:
    """G - X a random 2-connected SP graph, with `links` x-links y - x hung on
    random vertices of it (several may share a vertex)."""
    rng = random.Random(seed * 7919 + 1)
    core, s, t = random_sp(n_ops, seed, p_series)
    n = core.n
    x = n
    pairs = list(core.edge_pairs())
    verts = sorted(core.vertices)
    for i in range(links):
        y = n + 1 + i
        pairs += [(rng.choice(verts), y), (y, x)]
    g = Graph(range(n + 1 + links), pairs)
    return Gadget(g, x, meta={"family": "apexed-sp", "n_ops": n_ops, "links": links,
                              "seed": seed, "terminals": (s, t)})


def standard_apexed_sp(n_ops: int, links: int, seed: int = 0, tries: int = 50) -> Gadget:
    """Like apexed_sp but resampled until G contains a K4-subdivision."""
    from .k4 import is_k4_free

    for i in range(tries):
        gad = apexed_sp(n_ops, links, seed * 1000 + i)
        if not is_k4_free(gad.g):
            return gad
    raise ValueError("no instance with a K4-subdivision found")


# -- block structures over an apex ------------------------------------------------

def _two_paths(b: _Builder, u: int, v: int, width: int) -> list[int]:
    """width parallel u-v paths of length two; returns the middle vertices."""
    mids = []
    for _ in range(width):
        mids.append(b.path(u, v, 1)[1])
    return mids


def block_tree(n_blocks: int, seed: int = 0, max_size: int = 4) -> Gadget:
    """G - x a random tree of small blocks (cycles, some with a chord path),
    with x joined to random vertices, at least one per leaf block."""
    rng = random.Random(seed)
    b = _Builder()
    x = b.new()
    first = b.new()
    verts = [first]
    leafs = []
    for _ in range(n_blocks):
        at = rng.choice(verts)
        size = rng.randint(2, max_size)
        cyc = [at] + [b.new() for _ in range(size)]
        for p, q in zip(cyc, cyc[1:] + cyc[:1]):
            b.edge(p, q)
        if size >= 3 and rng.random() < 0.4:
            b.path(cyc[1], cyc[-1], rng.randint(0, 1))
        verts += cyc[1:]
        leafs.append(cyc[1:])
    linked = set()
    for cyc in leafs:
        linked.add(rng.choice(cyc))
    for v in rng.sample(verts, k=rng.randint(1, max(1, len(verts) // 2))):
        linked.add(v)
    for v in sorted(linked):
        b.edge(v, x)
    return Gadget(b.graph(), x, meta={"family": "block-tree", "blocks": n_blocks, "seed": seed})


def baseblock_star(ell: int) -> Gadget:
    """3 * ell cycles through a common cutvertex, each cycle carrying its own
    K4-subdivision with x, so each block is its own baseblock."""
    b = _Builder()
    x = b.new()
    r = b.new()
    z = b.new()
    b.edge(r, z)
    b.edge(z, x)
    for _ in range(3 * ell):
        cyc = [r] + [b.new() for _ in range(3)]
        for p, q in zip(cyc, cyc[1:] + cyc[:1]):
            b.edge(p, q)
        for v in cyc[1:]:
            b.edge(v, x)
    return Gadget(b.graph(), x, meta={"family": "baseblock-star", "ell": ell, "root": r})


def _triangle_branch(b: _Builder, x: int, u: int):
    """A triangle u-a-c with x joined to a and c: a block above u that is
    essential only through a u-x route below it."""
    a, c = b.new(), b.new()
    b.edge(u, a)
    b.edge(a, c)
    b.edge(c, u)
    b.edge(a, x)
    b.edge(c, x)


def esslem_branches(k: int) -> Gadget:
    """A root cycle Z with k triangle branches on it, and k edge-disjoint
    routes from their cutvertices down to x."""
    b = _Builder()
    x = b.new()
    r = b.new()
    z = b.new()
    b.edge(r, z)
    b.edge(z, x)
    cyc = [r] + [b.new() for _ in range(2 * k + 1)]
    for p, q in zip(cyc, cyc[1:] + cyc[:1]):
        b.edge(p, q)
    for i in range(k):
        u = cyc[2 * i + 1]
        _triangle_branch(b, x, u)
        b.edge(cyc[2 * i + 2], x)
    return Gadget(b.graph(), x, meta={"family": "esslem-branches", "k": k, "root": r})


def mader_branches(k: int) -> Gadget:
    """2k triangle branches on a root cycle whose only route to x is a
    single pendant path, so Y-x paths are scarce but Y-paths plenty."""
    b = _Builder()
    x = b.new()
    r = b.new()
    z = b.new()
    b.edge(r, z)
    b.edge(z, x)
    cyc = [r] + [b.new() for _ in range(2 * k)]
    for p, q in zip(cyc, cyc[1:] + cyc[:1]):
        b.edge(p, q)
    for u in cyc[1:]:
        _triangle_branch(b, x, u)
    return Gadget(b.graph(), x, meta={"family": "mader-branches", "k": k, "root": r})


def diamond_chain(k: int, extra: int = 1) -> Gadget:
    """A chain of k + 1 + extra two-gate blocks above a common baseblock,
    with k+5 edge-disjoint cycles through x crossing all of them.

    Each chain block is a theta on s, t with the gates u, v on two arms
    (the arms are bundles of paths of length two) and an s-t edge.
    """
    w = k + 5
    b = _Builder()
    x = b.new()
    r = b.new()
    z = b.new()
    b.edge(r, z)
    b.edge(z, x)
    u = b.new()
    for m in _two_paths(b, r, u, w):
        b.edge(m, x)
    chain = []
    for j in range(k + 1 + extra):
        s, t, v = b.new(), b.new(), b.new()
        for p, q in ((u, s), (u, t), (v, s), (v, t)):
            mids = _two_paths(b, p, q, w)
            if j == k + extra and p == v:
                for m in mids:
                    b.edge(m, x)
        b.edge(s, t)
        chain.append((u, v, s, t))
        u = v
    return Gadget(b.graph(), x, meta={"family": "diamond-chain", "k": k, "root": r, "chain": chain})
