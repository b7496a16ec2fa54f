"""Packing or covering K4-subdivisions of whole graphs.

Three layers, bottom up: the single-apex case (G - X 2-connected and
series-parallel, every X-vertex of degree 2), the reduction over the blocks
of G - x when every K4-subdivision meets x, and the outer peeling over a
vertex hitting set. Every layer either returns k edge-disjoint witnesses or
a cover together with its bound receipt.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .bounds import PAPER, BoundTable, Constants, Receipt, profile
from .covering import CoverError, PackingFound, hit_or_miss
from .flows import edge_flow, mader_s_paths
from .graph import Graph, GraphError, blocks, is_two_connected
from .k4 import (K4Witness, extract_k4_witness, is_k4_free, minimal_k4_edges,
                 validate_k4_witness, witness_from_edges, witnesses_edge_disjoint)
from .packing import (PackingError, SearchBudget, enumerate_k4_subdivisions,
                      pack_many_ears, search_packing)
from .parts import ApexedGraph, whole_part, x_ear_number

ROOT = -1  # virtual block below every block; its upper view is the whole graph


@dataclass
class PackOrCoverResult:
    """Either k edge-disjoint witnesses or a hitting set with its receipt."""

    witnesses: list[K4Witness] | None = None
    cover: frozenset[int] | None = None
    receipt: Receipt | None = None
    constants: str = PAPER.name
    branch: str = ""
    repairs: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def is_packing(self) -> bool:
        return self.witnesses is not None

    def problems(self, g: Graph, k: int) -> list[str]:
        """Empty iff the certificate is valid for (g, k)."""
        if self.is_packing:
            out = []
            if len(self.witnesses) != k:
                out.append(f"{len(self.witnesses)} witnesses, expected {k}")
            for i, w in enumerate(self.witnesses):
                if not validate_k4_witness(g, w):
                    out.append(f"witness {i} is not a K4-subdivision of the graph")
            if not out and not witnesses_edge_disjoint(g, self.witnesses):
                out.append("witnesses share an edge")
            return out
        if self.cover is None:
            return ["neither witnesses nor cover"]
        unknown = self.cover - g.edge_ids
        if unknown:
            return [f"cover names unknown edges {sorted(unknown)}"]
        w = extract_k4_witness(g.without_edges(self.cover))
        return [] if w is None else [f"K4-subdivision survives: {w.branch_vertices}"]


def _packing(ws: list[K4Witness], branch: str, c: Constants, notes=()) -> PackOrCoverResult:
    return PackOrCoverResult(witnesses=list(ws), constants=c.name, branch=branch, notes=list(notes))


def _cover(edges: Iterable[int], receipt: Receipt, c: Constants, branch: str,
           repairs: int = 0, notes=()) -> PackOrCoverResult:
    return PackOrCoverResult(cover=frozenset(edges), receipt=receipt, constants=c.name,
                             branch=branch, repairs=repairs, notes=list(notes))


def _repair(g: Graph, cover: set[int]) -> int:
    """Add one edge per surviving K4-subdivision until none is left; returns
    how many edges were added. Only reached if a construction misbehaves."""
    count = 0
    while True:
        w = minimal_k4_edges(g, g.edge_ids - cover)
        if w is None:
            return count
        cover.add(w[0])
        count += 1


def _disjoint_valid(g: Graph, ws: list[K4Witness]) -> bool:
    return all(validate_k4_witness(g, w) for w in ws) and witnesses_edge_disjoint(g, ws)


# -- gadgets and lifting ---------------------------------------------------------

@dataclass
class Gadget:
    """An auxiliary graph built from a host graph.

    Every new vertex has degree 2 and stands for a path of the host
    (`detour`, from its anchor to x); every new edge stands for a set of
    host edges (`edge_map`) when lifting a cover back.
    """

    g: Graph
    x: int
    detour: dict[int, tuple[int, ...]]
    edge_map: dict[int, frozenset[int]]

    def lift_edges(self, eids: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for e in eids:
            out |= self.edge_map.get(e, {e})
        return frozenset(out)

    def lift_witness(self, host: Graph, w: K4Witness) -> K4Witness | None:
        paths = []
        for p in w.paths:
            out = [p[0]]
            for v in p[1:]:
                if v in self.detour:
                    d = self.detour[v]
                    out.extend((d if out[-1] == d[0] else d[::-1])[1:])
                elif out[-1] != v:
                    out.append(v)
            paths.append(tuple(out))
        lifted = K4Witness(w.branch_vertices, tuple(paths))
        if validate_k4_witness(host, lifted):
            return lifted
        es = {host.edge_id(a, b) for p in paths for a, b in zip(p, p[1:]) if host.has_edge(a, b)}
        found = minimal_k4_edges(host, es)
        return None if found is None else witness_from_edges(host, found)

    def lift_packing(self, host: Graph, ws: list[K4Witness]) -> list[K4Witness] | None:
        out = [self.lift_witness(host, w) for w in ws]
        if any(w is None for w in out) or not _disjoint_valid(host, out):
            return None
        return out


class _Fresh:
    def __init__(self, g: Graph):
        self.next = g.fresh_vertex()

    def __call__(self) -> int:
        self.next += 1
        return self.next - 1


def _build_gadget(host: Graph, x: int, keep: Iterable[int], subdivide: Iterable[int],
                  bundles: Iterable[tuple[int, tuple[int, ...], frozenset[int]]] = ()) -> Gadget:
    """Host edges `keep`, the x-edges `subdivide` replaced by paths of length
    two, and for each (u, path, cut) in `bundles` a new u-y-x path standing
    for `path`, whose edges lift to `cut`."""
    fresh = _Fresh(host)
    base = host.edge_subgraph(keep, [x])
    pairs, images, detour = [], [], {}
    for e in sorted(subdivide):
        a, b = host.ends(e)
        v = b if a == x else a
        y = fresh()
        pairs += [(v, y), (y, x)]
        images += [frozenset({e})] * 2
        detour[y] = (v, x)
    for u, path, cut in bundles:
        y = fresh()
        pairs += [(u, y), (y, x)]
        images += [cut] * 2
        detour[y] = tuple(path)
    g, new = base.with_edges(pairs)
    return Gadget(g, x, detour, dict(zip(new, images)))


def _x_edges(g: Graph, x: int, among: Iterable[int] | None = None) -> list[int]:
    inc = g.incident(x)
    if among is None:
        return sorted(inc.values())
    among = set(among)
    return sorted(e for v, e in inc.items() if v in among)


def apex_gadget(g: Graph, x: int) -> Gadget:
    """g with every edge at x subdivided, so that the neighbours of x have
    degree 2 and G - X equals g - x."""
    xe = set(_x_edges(g, x))
    return _build_gadget(g, x, g.edge_ids - xe, xe)


# -- the single-apex case -----------------------------------------------------------

def cover_few_ears(ag: ApexedGraph, k: int, constants: Constants | str = PAPER) -> PackOrCoverResult:
    """A hit-or-miss set for the part G - x is a hitting set for G, unless
    some unhit module completes to k edge-disjoint K4-subdivisions."""
    c = profile(constants)
    h = whole_part(ag)
    lam = x_ear_number(h)
    try:
        hm = hit_or_miss(h, k)
    except PackingFound as p:
        return _packing(p.witnesses[:k], f"few-ears:{p.source}", c)
    cover = set(hm.edges)
    bound = BoundTable(k).few_ears(lam)
    rest = ag.g.without_edges(cover)
    repairs = 0
    notes = []
    if not is_k4_free(rest):
        # an unhit module: its k same-blueprint copies complete through
        # distinct X-vertices; look for the packing they form
        found = search_packing(ag.g, k)
        if len(found.witnesses) >= k:
            return _packing(found.witnesses[:k], "few-ears:lift", c)
        repairs = _repair(ag.g, cover)
        notes.append(f"{repairs} repair edges after the hit-or-miss set")
    rec = Receipt("few-ears", bound, len(cover), {"lambda": lam, "k": k}, [hm.receipt])
    if repairs:
        rec.children.append(Receipt("repair", 0, repairs))
    return _cover(cover, rec, c, "few-ears", repairs, notes)


def cover_single_apex(ag: ApexedGraph, k: int, constants: Constants | str = PAPER) -> PackOrCoverResult:
    """Many x-ears give a packing outright; otherwise cover_few_ears."""
    c = profile(constants)
    lam = x_ear_number(whole_part(ag))
    threshold = c.many_ears * k
    notes = [f"lambda={lam} threshold={threshold}"]
    if lam >= threshold:
        try:
            res = pack_many_ears(ag, constants=c)
            if len(res.witnesses) >= k:
                return _packing(res.witnesses[:k], "many-ears", c, notes)
            notes.append(f"many-ears gave {len(res.witnesses)} witnesses")
        except PackingError as err:
            notes.append(f"many-ears failed: {err}")
    res = cover_few_ears(ag, k, c)
    if res.is_packing:
        res.notes = notes + res.notes
        return res
    bound = BoundTable(k).single_apex(threshold)
    rec = Receipt("single-apex", bound, len(res.cover),
                  {"lambda": lam, "threshold": threshold}, [res.receipt])
    return _cover(res.cover, rec, c, "single-apex", res.repairs, notes + res.notes)


def _solve_gadget(host: Graph, gad: Gadget, k: int, c: Constants, lemma: str,
                  bound: int | None) -> PackOrCoverResult:
    """Run the single-apex case on a gadget and lift the answer to host."""
    ag = ApexedGraph(gad.g, gad.x)
    bad = ag.standard_violations()
    if bad:
        raise CoverError(f"{lemma} gadget not in normal form: {bad}")
    res = cover_single_apex(ag, k, c)
    if res.is_packing:
        lifted = gad.lift_packing(host, res.witnesses)
        if lifted is not None:
            return _packing(lifted, f"{lemma}:{res.branch}", c, res.notes)
        # fall back to a cover of the gadget; any hitting set will do
        cover = set()
        _repair(gad.g, cover)
        inner = Receipt("gadget-repair", None, len(cover))
        res = _cover(cover, inner, c, "gadget-repair", notes=["gadget packing did not lift"])
    y = _minimal_cover(gad.g, set(res.cover))
    out = gad.lift_edges(y)
    rec = Receipt(lemma, bound, len(out), {}, [res.receipt])
    return _cover(out, rec, c, lemma, res.repairs, res.notes)


def _minimal_cover(g: Graph, cover: set[int]) -> set[int]:
    for e in sorted(cover, reverse=True):
        cover.discard(e)
        if not is_k4_free(g.without_edges(cover)):
            cover.add(e)
    return cover


# -- block order -------------------------------------------------------------------

@dataclass
class BlockOrder:
    """Blocks of G - x ordered from a root cutvertex r*.

    B >= B' iff B' lies on the path from B down to r* in the block-cutvertex
    tree; `below[b]` lists that path starting at b itself.
    """

    g: Graph
    x: int
    root: int
    vertices: tuple[frozenset[int], ...]
    edges: tuple[frozenset[int], ...]
    gate: tuple[int, ...]
    below: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def geq(self, a: int, b: int) -> bool:
        if b == ROOT:
            return True
        if a == ROOT:
            return False
        return b in self.below[a]

    def up(self, b: int) -> list[int]:
        return [a for a in range(len(self)) if self.geq(a, b)]

    def geq_edges(self, b: int) -> frozenset[int]:
        if b == ROOT:
            return self.g.edge_ids
        ups = self.up(b)
        verts = set().union(*(self.vertices[a] for a in ups))
        es = set().union(*(self.edges[a] for a in ups))
        es |= set(_x_edges(self.g, self.x, verts - {self.gate[b]}))
        return frozenset(es)

    def ngeq_edges(self, b: int) -> frozenset[int]:
        return self.g.edge_ids - self.geq_edges(b)

    def view_geq(self, b: int) -> Graph:
        extra = [self.x] + ([self.gate[b]] if b != ROOT else [])
        return self.g.edge_subgraph(self.geq_edges(b), extra)

    def view_ngeq(self, b: int) -> Graph:
        extra = [self.x] + ([self.gate[b]] if b != ROOT else [])
        return self.g.edge_subgraph(self.ngeq_edges(b), extra)

    def gates(self, b: int, h: Graph | None = None) -> list[int]:
        """Vertices of b with a neighbour outside b in h (default g), x included."""
        h = self.g if h is None else h
        vs = self.vertices[b]
        return sorted(v for v in vs if h.has_vertex(v) and any(w not in vs for w in h.neighbors(v)))


def block_order(g: Graph, x: int, root: int | None = None) -> BlockOrder:
    gx = g.without_vertices([x])
    bd = blocks(gx)
    if not bd.cutvertices:
        raise GraphError("G - x has no cutvertex")
    r = min(bd.cutvertices) if root is None else root
    if r not in bd.cutvertices:
        raise GraphError(f"{r} is not a cutvertex of G - x")
    n = len(bd.blocks)
    gate = [None] * n
    below: list[tuple[int, ...] | None] = [None] * n
    queue = []
    for b in sorted(bd.cut_blocks[r]):
        gate[b], below[b] = r, (b,)
        queue.append(b)
    while queue:
        b = queue.pop(0)
        for c in sorted(bd.block_cuts[b] - {gate[b]}):
            for a in sorted(bd.cut_blocks[c]):
                if below[a] is None:
                    gate[a], below[a] = c, (a,) + below[b]
                    queue.append(a)
    if any(v is None for v in below):
        raise GraphError("G - x is not connected")
    return BlockOrder(g, x, r, bd.block_vertices, bd.blocks, tuple(gate), tuple(below))


# -- essential blocks and baseblocks -------------------------------------------------

def block_gadget(order: BlockOrder, b: int, h: Graph | None = None) -> Gadget:
    """G_B built inside h (default g): B, its direct edges to x (subdivided)
    and for every gate u as many u-y-x paths as there are edge-disjoint
    u-x paths internally disjoint from B, each lifting to a minimum cut."""
    g = order.g if h is None else h
    x = order.x
    vs = order.vertices[b]
    keep = {e for e in order.edges[b] if e in g.edge_ids}
    direct = set(_x_edges(g, x, vs)) if g.has_vertex(x) else set()
    bundles = []
    for u in order.gates(b, g):
        outside = [w for w in g.neighbors(u) if w not in vs and w != x]
        if not outside:
            continue
        region = g.without_vertices(vs - {u})
        if region.has_edge(u, x):
            region = region.without_edges([region.edge_id(u, x)])
        if not region.has_vertex(x):
            continue
        paths, cut = edge_flow(region, [u], [x])
        for p in paths:
            bundles.append((u, p, cut))
    return _build_gadget(g, x, keep, direct, bundles)


def is_made_essential(order: BlockOrder, b: int, h: Graph | None = None) -> bool:
    """Whether h (a subgraph of g) has a K4-subdivision whose trace on
    block b contains a cycle."""
    return not is_k4_free(block_gadget(order, b, h).g)


@dataclass
class Essentials:
    essential: tuple[int, ...]
    baseblock: dict[int, int]  # ROOT when no block view suffices

    @property
    def baseblocks(self) -> list[int]:
        return sorted(set(self.baseblock.values()))


def essential_and_baseblocks(g: Graph, order: BlockOrder, method: str = "gadget",
                             h: Graph | None = None) -> Essentials:
    """Essential blocks (of h, default g) and their baseblocks.

    method "gadget" decides each question with one K4 test on a G_B gadget;
    method "enumerate" lists every K4-subdivision and reads both off.
    """
    h = g if h is None else h
    if method == "enumerate":
        return _essentials_by_enumeration(h, order)
    ess, base = [], {}
    for b in range(len(order)):
        if len(order.edges[b]) < 3 or not is_made_essential(order, b, h):
            continue
        ess.append(b)
        base[b] = ROOT
        for a in order.below[b]:
            view = h.edge_subgraph(order.geq_edges(a) & h.edge_ids, [order.x])
            if is_made_essential(order, b, view):
                base[b] = a
                break
    return Essentials(tuple(ess), base)


def _cycle_in(g: Graph, es: Iterable[int]) -> bool:
    parent: dict[int, int] = {}

    def find(v):
        while parent.setdefault(v, v) != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in es:
        a, b = (find(v) for v in g.ends(e))
        if a == b:
            return True
        parent[a] = b
    return False


def _essentials_by_enumeration(h: Graph, order: BlockOrder) -> Essentials:
    subs = enumerate_k4_subdivisions(h, budget=200000)
    views = {a: order.geq_edges(a) for a in range(len(order))}
    base: dict[int, int] = {}
    for s in subs:
        for b in range(len(order)):
            if not _cycle_in(h, s & order.edges[b]):
                continue
            best = ROOT
            for a in order.below[b]:
                if s <= views[a]:
                    best = a
                    break
            old = base.get(b)
            if old is None or (best != ROOT and (old == ROOT or order.geq(best, old))):
                base[b] = best
            break
    return Essentials(tuple(sorted(base)), base)


# -- packings from the block structure ----------------------------------------

def pack_from_baseblocks(g: Graph, x: int, want: int) -> list[K4Witness]:
    """Repeatedly take a K4-subdivision from G_{>=A} for a <=-largest
    baseblock A and continue in G_{not>=A}. Many baseblocks give many
    witnesses; the result may be shorter than `want`."""
    out: list[K4Witness] = []
    queue = [g]
    while queue and len(out) < want:
        cur = queue.pop(0)
        for bl in blocks(cur).blocks:
            if len(out) >= want:
                break
            gb = cur.edge_subgraph(bl)
            if not gb.has_vertex(x) or is_k4_free(gb):
                continue
            gx = gb.without_vertices([x])
            if is_two_connected(gx) or gx.n < 3:
                out.append(extract_k4_witness(gb))
                continue
            order = block_order(gb, x)
            ess = essential_and_baseblocks(gb, order)
            bases = [a for a in ess.baseblocks if a != ROOT]
            top = [a for a in bases if not any(b != a and order.geq(b, a) for b in bases)]
            if not top:
                out.append(extract_k4_witness(gb))
                continue
            a1 = top[0]
            w = extract_k4_witness(order.view_geq(a1))
            if w is None:
                out.append(extract_k4_witness(gb))
                continue
            out.append(w)
            queue.append(order.view_ngeq(a1))
    return out


def _path_edges(g: Graph, path: Iterable[int]) -> set[int]:
    p = list(path)
    return {g.edge_id(a, b) for a, b in zip(p, p[1:])}


def _witness_in(g: Graph, es: Iterable[int]) -> K4Witness | None:
    found = minimal_k4_edges(g, es)
    return None if found is None else witness_from_edges(g, found)


def _diamond(g: Graph, es: Iterable[int], u: int, v: int) -> set[int] | None:
    """A u-v diamond in the K4-free edge set es: a K4-subdivision of es plus
    a new path u-z-v, minus that path."""
    h = g.edge_subgraph(es, [u, v])
    z = h.fresh_vertex()
    h2, new = h.with_edges([(u, z), (z, v)])
    found = minimal_k4_edges(h2, h2.edge_ids, keep_first=new)
    if found is None or not set(new) <= set(found):
        return None
    return set(found) - set(new)


def _subpath(p: tuple[int, ...], a: int, b: int) -> tuple[int, ...] | None:
    if a not in p or b not in p:
        return None
    i, j = p.index(a), p.index(b)
    return p[i:j + 1] if i <= j else p[j:i + 1][::-1]


def pack_diamond_chain(order: BlockOrder, chain: list[int], k: int) -> list[K4Witness] | None:
    """k edge-disjoint K4-subdivisions from a chain B^1 < ... < B^r (r > k)
    of essential blocks with a common baseblock, when k+5 edge-disjoint
    cycles through x use an edge of B^1: each witness combines a diamond in
    one block of the chain with cycle segments through all the others."""
    g, x = order.g, order.x
    r = len(chain)
    if r <= k:
        return None
    b1 = chain[0]
    n = k + 5
    ups, _ = edge_flow(order.view_geq(b1), [order.gate[b1]], [x], n)
    downs, _ = edge_flow(order.view_ngeq(b1), [order.gate[b1]], [x], n)
    if len(ups) < n or len(downs) < n:
        return None
    gates = [order.gate[b] for b in chain]
    # segments of the upward half of every cycle between consecutive gates
    seg = []
    for j in range(r - 1):
        row = []
        for p in ups:
            s = _subpath(p, gates[j], gates[j + 1])
            if s is None:
                return None
            row.append(s)
        seg.append(row)
    diamonds, slots = [], []
    for j in range(min(k, r - 1)):
        b = chain[j]
        vs = order.vertices[b]
        exits = {next((w for w in reversed(s) if w in vs), None) for s in seg[j]}
        if len(exits) != 1:
            return None
        v = exits.pop()
        hit = None
        for conflict in combinations(range(n), 5):
            avoid = set()
            for i in range(n):
                if i not in conflict:
                    avoid |= _path_edges(g, seg[j][i])
            d = _diamond(g, order.edges[b] - avoid, gates[j], v)
            if d is not None:
                hit = (d, conflict)
                break
        if hit is None:
            return None
        d, conflict = hit
        tail = _subpath(seg[j][conflict[0]], v, gates[j + 1])
        diamonds.append(d | _path_edges(g, tail))
        slots.append([i for i in range(n) if i not in conflict])
    for j in range(len(diamonds), r - 1):
        slots.append(list(range(5, n)))
    out = []
    for i in range(k):
        es = set(diamonds[i])
        for j in range(r - 1):
            if j != i:
                es |= _path_edges(g, seg[j][slots[j][i]])
        top = _subpath(ups[i], gates[-1], x)
        es |= _path_edges(g, top) | _path_edges(g, downs[i])
        w = _witness_in(g, es)
        if w is None:
            return None
        out.append(w)
    return out if _disjoint_valid(g, out) else None


# -- few essential blocks per baseblock -------------------------------------------

def cover_baseblock(order: BlockOrder, ess: Essentials, a: int, k: int) -> tuple[frozenset[int], Receipt]:
    """F_A: an edge set making all but few of the essential blocks with
    baseblock a inessential. Raises PackingFound when one of the path
    systems is large enough to build k witnesses."""
    g, x = order.g, order.x
    bt = BoundTable(k)
    members = [b for b in ess.essential if ess.baseblock[b] == a and b != a]
    minimal = [b for b in members if not any(c != b and order.geq(b, c) for c in members)]
    if not minimal:
        return frozenset(), Receipt("fewessblocks", bt.fewess(), 0, {"baseblock": a, "N": 0})
    common = set(g.edge_ids)
    for b in minimal:
        common &= order.ngeq_edges(b)
    base = g.edge_subgraph(common, [x] + [order.gate[b] for b in minimal])
    fresh = _Fresh(g)
    ys = [fresh() for _ in minimal]
    gp, art = base.with_edges([(y, order.gate[b]) for y, b in zip(ys, minimal)])
    index_of = {e: i for i, e in enumerate(art)}
    children = []

    # Menger between Y and x
    paths, cut1 = edge_flow(gp, ys, [x], k)
    if len(paths) >= k:
        ws = []
        for p in paths[:k]:
            i = ys.index(p[0])
            es = order.geq_edges(minimal[i]) | _path_edges(g, p[1:])
            ws.append(_witness_in(g, es))
        if all(w is not None for w in ws) and _disjoint_valid(g, ws):
            raise PackingFound(ws, "Y-x paths")
        _, cut1 = edge_flow(gp, ys, [x])
    children.append(Receipt("menger", bt.menger(), len(cut1)))

    # Mader on Y
    cut2: frozenset[int] = frozenset()
    if len(ys) >= 2:
        mader = mader_s_paths(gp, ys, k)
        if mader.found_paths:
            ws = []
            for q in mader.paths:
                i, j = ys.index(q[0]), ys.index(q[-1])
                es = order.geq_edges(minimal[i]) | order.geq_edges(minimal[j]) | _path_edges(g, q[1:-1])
                ws.append(_witness_in(g, es))
            if all(w is not None for w in ws) and _disjoint_valid(g, ws):
                raise PackingFound(ws, "Y-paths")
            more = k + 1
            while mader.found_paths:
                mader = mader_s_paths(gp, ys, more)
                more += 1
        cut2 = mader.cut
    children.append(Receipt("mader", bt.mader(), len(cut2)))

    # J: partners of the cut edges e_i that F'' does not separate
    gx = g.without_vertices([x]).without_edges(cut2 & g.edge_ids)
    comp = {}
    for ci, cs in enumerate(gx.components()):
        for v in cs:
            comp[v] = ci
    cut_idx = {index_of[e] for e in cut2 if e in index_of}
    J = set()
    for i in cut_idx:
        for j in range(len(minimal)):
            if j not in cut_idx and comp.get(order.gate[minimal[i]]) == comp.get(order.gate[minimal[j]]):
                J.add(j)
    I = sorted(J | cut_idx | {index_of[e] for e in cut1 if e in index_of})
    fa = set((cut1 | cut2) & g.edge_ids)
    limit = bt.cycles()
    for r in I:
        br = minimal[r]
        u = order.gate[br]
        up_paths, up_cut = edge_flow(order.view_geq(br), [u], [x], limit)
        dn_paths, dn_cut = edge_flow(order.view_ngeq(br), [u], [x], limit)
        if len(up_paths) >= limit and len(dn_paths) >= limit:
            chain = sorted((b for b in ess.essential if ess.baseblock[b] == a and order.geq(b, br)),
                           key=lambda b: len(order.below[b]))
            if len(chain) > k:
                ws = pack_diamond_chain(order, chain, k)
                if ws is not None:
                    raise PackingFound(ws, "diamond chain")
            children.append(Receipt("diamondchain", k, len(chain), {"block": br}))
            continue
        fr = up_cut if len(up_paths) < limit else dn_cut
        fa |= fr
        children.append(Receipt("cycles-cut", limit - 1, len(fr), {"block": br}))
    rec = Receipt("fewessblocks", bt.fewess(), len(fa), {"baseblock": a, "N": len(minimal), "I": len(I)},
                  children)
    return frozenset(fa), rec


# -- the block reduction -------------------------------------------------------------

def useful_edges(g: Graph, budget: int = 1000) -> frozenset[int] | None:
    """Edges lying in some K4-subdivision, or None past the budget."""
    try:
        subs = enumerate_k4_subdivisions(g, budget=budget)
    except SearchBudget:
        return None
    return frozenset().union(*subs) if subs else frozenset()


def cover_blocks(g: Graph, x: int, k: int, constants: Constants | str = PAPER,
                 normalise: bool = True) -> PackOrCoverResult:
    """Packing or cover for a graph in which every K4-subdivision meets x."""
    c = profile(constants)
    bad = extract_k4_witness(g.without_vertices([x]))
    if bad is not None:
        raise CoverError(f"K4-subdivision avoiding x: branch vertices {bad.branch_vertices}")
    bt = BoundTable(k)
    notes = []
    h = g
    if normalise:
        keep = useful_edges(g)
        if keep is not None and keep != g.edge_ids:
            notes.append(f"dropped {g.m - len(keep)} edges in no K4-subdivision")
            h = g.edge_subgraph(keep, [x])
    cover: set[int] = set()
    children = []
    repairs = 0
    for bl in blocks(h).blocks:
        gb = h.edge_subgraph(bl)
        if not gb.has_vertex(x) or is_k4_free(gb):
            continue
        res = _cover_block(gb, x, k, c)
        if res.is_packing:
            res.notes = notes + res.notes
            return res
        cover |= res.cover
        children.append(res.receipt)
        repairs += res.repairs
        notes += res.notes
    extra = _repair(g, cover)
    if extra:
        children.append(Receipt("repair", 0, extra))
        repairs += extra
    single = bt.single_apex(c.many_ears * k)
    rec = Receipt("blocks", bt.blocks(single), len(cover), {"x": x, "k": k}, children)
    return _cover(cover, rec, c, "blocks", repairs, notes)


def _cover_block(gb: Graph, x: int, k: int, c: Constants) -> PackOrCoverResult:
    bt = BoundTable(k)
    single = bt.single_apex(c.many_ears * k)
    gx = gb.without_vertices([x])
    if is_two_connected(gx):
        return _solve_gadget(gb, apex_gadget(gb, x), k, c, "apex-2-connected", single)
    order = block_order(gb, x)
    ess = essential_and_baseblocks(gb, order)
    bases = ess.baseblocks
    children = [Receipt("baseblocks", bt.baseblocks() - 1, len(bases))]
    if len(bases) >= bt.baseblocks():
        ws = pack_from_baseblocks(gb, x, k)
        if len(ws) >= k and _disjoint_valid(gb, ws[:k]):
            return _packing(ws[:k], "baseblocks", c)
    f: set[int] = set()
    for a in bases:
        try:
            fa, rec = cover_baseblock(order, ess, a, k)
        except PackingFound as p:
            return _packing(p.witnesses[:k], f"fewessblocks:{p.source}", c)
        f |= fa
        children.append(rec)
    rest = gb.without_edges(f)
    remaining = [b for b in ess.essential if is_made_essential(order, b, rest)]
    children.append(Receipt("remaining-blocks", bt.remaining_blocks(), len(remaining)))
    cover = set(f)
    repairs = 0
    notes = []
    for b in remaining:
        res = _solve_gadget(gb, block_gadget(order, b), k, c, "block-gadget", single)
        if res.is_packing:
            return res
        cover |= res.cover
        children.append(res.receipt)
        repairs += res.repairs
        notes += res.notes
    rec = Receipt("block-reduction", bt.all_fa() + bt.remaining_blocks() * single, len(cover),
                  {"blocks": len(order), "essential": len(ess.essential)}, children)
    return _cover(cover, rec, c, "block-reduction", repairs, notes)


# -- the whole graph ---------------------------------------------------------------

def vertex_hitting_set(g: Graph, exact_limit: int = 10) -> list[int]:
    """A vertex set meeting every K4-subdivision: minimum on small graphs,
    greedy (then pruned) otherwise."""
    if g.n <= exact_limit:
        from .oracle import exact_vertex_hitting

        return sorted(exact_vertex_hitting(g, vertex_limit=exact_limit))
    chosen: list[int] = []
    cur = g
    while True:
        w = extract_k4_witness(cur)
        if w is None:
            break
        v = max(w.branch_vertices, key=lambda u: (cur.degree(u), -u))
        chosen.append(v)
        cur = cur.without_vertices([v])
    for v in list(chosen):
        rest = [u for u in chosen if u != v]
        if is_k4_free(g.without_vertices(rest)):
            chosen = rest
    return chosen


def pack_or_cover(g: Graph, k: int, constants: Constants | str = PAPER,
                  budget: int = 20000) -> PackOrCoverResult:
    """k edge-disjoint K4-subdivisions of g, or an edge set meeting all of them."""
    if k < 1:
        raise ValueError("k must be positive")
    c = profile(constants)
    if is_k4_free(g):
        return _cover((), Receipt("main", 0, 0, {"k": k}), c, "k4-free")
    found = search_packing(g, k, budget)
    if len(found.witnesses) >= k:
        return _packing(found.witnesses[:k], "search", c)
    notes = [] if found.exact else ["packing search was not exhaustive"]
    xs = vertex_hitting_set(g)
    cover: set[int] = set()
    children = []
    repairs = 0
    for i, x in enumerate(xs):
        layer = g.without_vertices(xs[i + 1:]).without_edges(cover & g.without_vertices(xs[i + 1:]).edge_ids)
        if is_k4_free(layer):
            continue
        res = cover_blocks(layer, x, k, c)
        if res.is_packing:
            res.notes = notes + res.notes
            return res
        cover |= res.cover
        children.append(res.receipt)
        repairs += res.repairs
        notes += res.notes
    extra = _repair(g, cover)
    if extra:
        children.append(Receipt("repair", 0, extra))
        repairs += extra
    bt = BoundTable(k)
    per_layer = bt.blocks(bt.single_apex(c.many_ears * k))
    rec = Receipt("main", len(xs) * per_layer, len(cover), {"k": k, "hitting_vertices": len(xs)}, children)
    return _cover(cover, rec, c, "peeling", repairs, notes)
