"""Hit-or-miss sets for parts of G - x.

A set F is a hit-or-miss set for a part H if every module of H that F does
not hit has k edge-disjoint copies of its blueprint in H. The recursion
follows the part types; type V parts may instead yield a well-connected
ladder or fan, which is reported by raising PackingFound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .bounds import BoundTable, Receipt, f_bound, f_star
from .flows import bipartite_matching_or_cover, edge_flow, separates
from .graph import Graph, GraphError
from .k4 import K4Witness
from .packing import FanSpec, LadderSpec, PackingError, pack_fan, pack_ladder
from .parts import (Part, PartType, block_chain, classify_part_type, leaf_edges,
                    lrb_split, make_part, parallel_split, series_split, st_bridges, sub_part,
                    substantial_block_parts, terminal_star_split, type_iii_split, union_parts,
                    x_ear_number)


class CoverError(GraphError):
    pass


class PackingFound(Exception):
    """k edge-disjoint K4-subdivisions turned up while building a cover."""

    def __init__(self, witnesses: list[K4Witness], source: str):
        super().__init__(f"{len(witnesses)} edge-disjoint K4-subdivisions from a {source}")
        self.witnesses = witnesses
        self.source = source


@dataclass
class HitOrMiss:
    edges: frozenset[int]
    receipt: Receipt


def small_cut(g: Graph, a: Iterable[int] | int, b: Iterable[int] | int, limit: int) -> frozenset[int] | None:
    """An edge set of size at most `limit` separating a from b in g, or None."""
    a = {a} if isinstance(a, int) else set(a)
    b = {b} if isinstance(b, int) else set(b)
    a &= g.vertices
    b &= g.vertices
    if not a or not b:
        return frozenset()
    if a & b or limit < 0:
        return None
    paths, cut = edge_flow(g, a, b, limit + 1)
    if len(paths) > limit:
        return None
    return cut


def _receipt(lemma: str, bound: int | None, edges, children=(), **params) -> Receipt:
    return Receipt(lemma, bound, len(edges), params, list(children))


# -- simple parts ----------------------------------------------------------------

def cover_simple(h: Part, k: int) -> HitOrMiss:
    """Hit-or-miss set of size below k for a simple part."""
    if not h.is_simple:
        raise CoverError("part is not simple")
    if h.is_trivial:
        if len(h.x_vertices) >= k:
            f = frozenset()
        else:
            f = frozenset(h.edges)
        return HitOrMiss(f, _receipt("star", BoundTable(k).star(), f, leaves=len(h.x_vertices)))
    cut = small_cut(h.graph, h.s, h.t, k - 1)
    f = cut if cut is not None else frozenset()
    return HitOrMiss(f, _receipt("simple", BoundTable(k).simple(), f))


# -- type I ----------------------------------------------------------------------

def _nx_vertices(h: Part) -> list[int]:
    return sorted(v for v in h.core.vertices if leaf_edges(h, v))


def _star(h: Part, v: int) -> Part:
    return make_part(h.host, leaf_edges(h, v), v, v)


def cover_type1(h: Part, k: int) -> HitOrMiss:
    bound = BoundTable(k).type1()
    g = h.graph
    xs = h.x_vertices
    f1 = small_cut(g, h.s, h.t, k - 1)
    if f1 is not None:
        rest = g.without_edges(f1)
        f = set(f1)
        for v in (h.s, h.t):
            cut = small_cut(rest, v, xs, k - 1) if xs else None
            if cut:
                f |= cut
        f = frozenset(f)
        return HitOrMiss(f, _receipt("type1", bound, f, case="separable"))
    nxv = _nx_vertices(h)
    if len(nxv) >= 3 * k + 2:
        f = set()
        for v in (h.s, h.t):
            star = leaf_edges(h, v)
            if len(star) <= k - 1:
                f |= set(star)
        f = frozenset(f)
        return HitOrMiss(f, _receipt("type1", bound, f, case="many-neighbours", nx=len(nxv)))
    # series decomposition into stars at the neighbours of X and the block
    # segments between consecutive ones (including the end segments)
    chain = block_chain(h)
    stops = [h.s] + [c.b for c in chain]
    marks = [v for v in stops if v in set(nxv)]
    if set(nxv) - set(marks):
        raise CoverError("type I part has a neighbour of X inside a block")
    cuts = [h.s] + [v for v in marks if v not in (h.s, h.t)] + [h.t]
    children = []
    f: set[int] = set()
    for v in marks:
        r = cover_simple(_star(h, v), k)
        f |= r.edges
        children.append(r.receipt)
    pos = {v: i for i, v in enumerate(stops)}
    for a, b in zip(cuts, cuts[1:]):
        blk = chain[pos[a]:pos[b]]
        if not blk:
            continue
        es = {e for c in blk for e in c.edges}
        vs = {v for c in blk for v in c.vertices}
        seg = sub_part(h, vs, a, b, leaves_at=(), core_edges=es)
        r = cover_simple(seg, k)
        f |= r.edges
        children.append(r.receipt)
    f = frozenset(f)
    return HitOrMiss(f, _receipt("type1", bound, f, children, case="series", nx=len(nxv)))


# -- types II to IV --------------------------------------------------------------

def _lam(h: Part) -> int:
    return x_ear_number(h)


def cover_type2(h: Part, k: int) -> HitOrMiss:
    subs = substantial_block_parts(h)
    h1, h2 = series_split(h, subs[0].t, leaves_left=True)
    r1, r2 = hit_or_miss(h1, k), hit_or_miss(h2, k)
    f = r1.edges | r2.edges
    lam = _lam(h)
    return HitOrMiss(f, _receipt("type2", f_star(lam, k), f, [r1.receipt, r2.receipt], lam=lam))


def cover_type3(h: Part, k: int) -> HitOrMiss:
    L, b, R, _ = type_iii_split(h)
    rb = hit_or_miss(b, k)
    kids = [rb.receipt]
    f = set(rb.edges)
    for side in (L, R):
        r = _cover_side(side, k)
        if r is not None:
            f |= r.edges
            kids.append(r.receipt)
    f = frozenset(f)
    lam = _lam(h)
    return HitOrMiss(f, _receipt("type3", f_star(lam, k), f, kids, lam=lam))


def _cover_side(p: Part, k: int) -> HitOrMiss | None:
    """Hit-or-miss set of L_B or R_B (type I, or trivial)."""
    if not p.edges:
        return None
    if p.s == p.t:
        return cover_simple(p, k)
    return cover_type1(p, k)


def cover_type4(h: Part, k: int) -> HitOrMiss:
    b = substantial_block_parts(h)[0]
    L, _, R = lrb_split(h, b)
    b1, b2 = parallel_split(b, substantial_pair=True)
    kids = []
    f: set[int] = set()
    for side in (L, R):
        r = _cover_side(side, k)
        if r is not None:
            f |= r.edges
            kids.append(r.receipt)
    for p in (b1, b2):
        r = hit_or_miss(p, k)
        f |= r.edges
        kids.append(r.receipt)
    f = frozenset(f)
    lam = _lam(h)
    return HitOrMiss(f, _receipt("type4", f_star(lam, k), f, kids, lam=lam))


# -- pseudo-parts ----------------------------------------------------------------

@dataclass
class PseudoPart:
    """An X-free subgraph with terminals s', t', w'.

    mode "x": the set F separates w' from x in G - E(H'), and an s'-t' path
    of H' passes through w' exactly when it avoids D.
    mode "s": F separates w' from s' in H' - t'.
    """

    host: object
    edges: frozenset[int]
    s: int
    t: int
    w: int
    mode: str
    F: frozenset[int]
    D: frozenset[int] = frozenset()

    @property
    def graph(self) -> Graph:
        return self.host.gx.edge_subgraph(self.edges)

    def validate(self) -> list[str]:
        out = []
        g = self.graph
        ag = self.host
        if g.vertices & ag.X:
            out.append("pseudo-part meets X")
        core = ag.core
        for pair in ((self.s, self.t), (self.w, self.t)):
            if len(core.without_vertices(pair).components()) < 2:
                out.append(f"{pair} does not separate G - X")
        if self.mode == "x":
            if not separates(ag.g.without_edges(self.edges), self.F, [self.w], [ag.x]):
                out.append("F does not separate w' from x outside H'")
        elif self.mode == "s":
            if not separates(g.without_vertices([self.t]), self.F, [self.w], [self.s]):
                out.append("F does not separate w' from s' in H' - t'")
        else:
            out.append(f"unknown mode {self.mode!r}")
        return out


def cover_pseudo(p: PseudoPart, k: int, f: Iterable[int] | None = None) -> HitOrMiss:
    """The at most 2k extra edges for a simple pseudo-part."""
    g = p.graph
    out: set[int] = set()
    if p.mode == "x":
        for sub in (g.without_vertices([p.w]), g.without_edges(p.D)):
            cut = small_cut(sub, p.s, p.t, k)
            if cut:
                out |= cut
    else:
        rest = g.without_edges(p.F if f is None else f)
        for a in (p.s, p.w):
            cut = small_cut(rest, a, p.t, k)
            if cut:
                out |= cut
    out = frozenset(out)
    return HitOrMiss(out, _receipt("pseudo", BoundTable(k).pseudo(), out, mode=p.mode))


def cover_badcase(f: Iterable[int], fb: HitOrMiss, simple_parts: list[Part],
                  pseudo_parts: list[PseudoPart], k: int) -> HitOrMiss:
    """F together with F_B and the per-piece sets of the simple parts and
    pseudo-parts making up L."""
    f = set(f) | fb.edges
    base = len(f)
    kids = [fb.receipt]
    for p in simple_parts:
        r = cover_simple(p, k)
        f |= r.edges
        kids.append(r.receipt)
    for p in pseudo_parts:
        r = cover_pseudo(p, k)
        f |= r.edges
        kids.append(r.receipt)
    f = frozenset(f)
    bound = base + 2 * k * (len(simple_parts) + len(pseudo_parts))
    return HitOrMiss(f, _receipt("badcase", bound, f, kids,
                                 simple=len(simple_parts), pseudo=len(pseudo_parts)))


# -- type V ----------------------------------------------------------------------

@dataclass
class _Chain:
    """The ladder-like structure L = Q's + R's + S's with B* on the right."""

    u: list[int]            # s-side rail vertices u_0 .. u_l
    w: list[int]            # t-side rail vertices
    Q: list[Part] = field(default_factory=list)   # Q_j: u_{j-1} .. u_j
    R: list[Part] = field(default_factory=list)
    S: list[Part] = field(default_factory=list)   # S_j: u_j .. w_j
    bstar: Part | None = None

    @property
    def ell(self) -> int:
        return len(self.S)

    def l_edges(self) -> frozenset[int]:
        return frozenset().union(*(p.edges for p in self.Q + self.R + self.S))


def _build_chain(h: Part) -> _Chain:
    ch = _Chain([h.s], [h.t])
    cur = h
    while classify_part_type(cur) == PartType.V:
        b = substantial_block_parts(cur)[0]
        L, _, R = lrb_split(cur, b)
        if L.x_vertices or R.x_vertices:
            raise CoverError("type V chain meets X outside its substantial block")
        bridges = st_bridges(b)
        sub = [br for br in bridges if br.is_substantial]
        non = [br for br in bridges if not br.is_substantial]
        if len(sub) != 1 or not non:
            raise CoverError("substantial block of a type V part has no non-substantial bridge")
        bp = sub[0]
        gate = set(b.edges) - set().union(*(br.edges for br in bridges))
        if gate:
            bp = make_part(b.host, bp.edges | gate, b.s, b.t,
                           bp.vertices | {v for e in gate for v in b.host.gx.ends(e)})
        ch.Q.append(L)
        ch.R.append(R)
        ch.S.append(union_parts(non, b.s, b.t))
        ch.u.append(b.s)
        ch.w.append(b.t)
        cur = bp
    ch.bstar = cur
    return ch


def _graph_of(host, edges: Iterable[int], extra: Iterable[int] = ()) -> Graph:
    return host.gx.edge_subgraph(edges, extra)


def _union_edges(parts: Iterable[Part]) -> frozenset[int]:
    return frozenset().union(*(p.edges for p in parts)) if parts else frozenset()


def _ladder_attempt(ch: _Chain, rungs: list[int], k: int):
    """Try every window of 3k+3 matched rungs as a well-connected ladder."""
    ag = ch.bstar.host
    n = 3 * k + 3
    windows = [rungs[i:i + n] for i in range(0, len(rungs) - n + 1)]
    for win in windows[:1] + windows[-1:]:
        Q = tuple(_union_edges(ch.Q[a:b]) for a, b in zip(win, win[1:]))
        R = tuple(_union_edges(ch.R[a:b]) for a, b in zip(win, win[1:]))
        S = tuple(ch.S[j - 1].edges for j in win)
        s = tuple(ch.u[j] for j in win)
        t = tuple(ch.w[j] for j in win)
        for a in (s[0], t[0]):
            for b in (s[-1], t[-1]):
                spec = LadderSpec(ag.g, ag.x, k, Q, R, S, s, t, a, b)
                if not spec.validate():
                    try:
                        return pack_ladder(spec, k)
                    except PackingError:
                        continue
    return None


@dataclass
class _Fan:
    hub: int
    spine: list[int]
    spine_parts: list[Part]
    spokes: list[frozenset[int]]

    @property
    def size(self) -> int:
        return len(self.spine) - 1

    def edges(self) -> frozenset[int]:
        return _union_edges(self.spine_parts) | frozenset().union(*self.spokes)


def _fans(ch: _Chain, cover: frozenset) -> list[_Fan]:
    """Edge-disjoint fan-graphs along the cover vertices, together holding
    every rung."""
    zs = sorted(cover, key=lambda z: (z[0], z[1]))
    owner: dict[int, tuple] = {}
    for j in range(1, ch.ell + 1):
        for side, z in zs:
            if (side == "L" and ch.u[j] == z) or (side == "R" and ch.w[j] == z):
                owner[j] = (side, z)
                break
        else:
            raise CoverError("vertex cover misses a rung")
    out = []
    runs: list[list[int]] = []
    for j in range(1, ch.ell + 1):
        if runs and runs[-1][-1] == j - 1 and owner[runs[-1][-1]] == owner[j]:
            runs[-1].append(j)
        else:
            runs.append([j])
    for run in runs:
        side, z = owner[run[0]]
        rail = ch.w if side == "L" else ch.u
        rail_parts = ch.R if side == "L" else ch.Q
        spine: list[int] = []
        spokes: list[frozenset[int]] = []
        parts: list[Part] = []
        for j in run:
            if spine and rail[j] == spine[-1]:
                spokes[-1] = spokes[-1] | ch.S[j - 1].edges
            else:
                if spine:
                    parts.append(rail_parts[j - 1])
                spine.append(rail[j])
                spokes.append(ch.S[j - 1].edges)
        out.append(_Fan(z, spine, parts, spokes))
    return out


def _fan_attempt(ag, fan: _Fan, k: int):
    n = 3 * k
    if fan.size < n:
        return None
    for off in sorted({0, fan.size - n}):
        Q = tuple(p.edges for p in fan.spine_parts[off:off + n])
        S = tuple(fan.spokes[off:off + n + 1])
        spec = FanSpec(ag.g, ag.x, k, Q, S, tuple(fan.spine[off:off + n + 1]), fan.hub)
        if not spec.validate():
            try:
                return pack_fan(spec, k)
            except PackingError:
                continue
    return None


def cover_type5(h: Part, k: int) -> HitOrMiss:
    ag = h.host
    lam = _lam(h)
    kids: list[Receipt] = []
    f: set[int] = set()
    cur = h
    for at_s in (True, False):
        if cur.s != cur.t and leaf_edges(cur, cur.s if at_s else cur.t):
            a, b = terminal_star_split(cur, at_s)
            star, cur = (a, b) if at_s else (b, a)
            r = cover_simple(star, k)
            f |= r.edges
            kids.append(r.receipt)
    if classify_part_type(cur) != PartType.V:
        r = hit_or_miss(cur, k)
        f |= r.edges
        kids.append(r.receipt)
        f = frozenset(f)
        return HitOrMiss(f, _receipt("type5", f_bound(lam, k), f, kids, lam=lam))

    ch = _build_chain(cur)
    bstar = ch.bstar
    rstar = hit_or_miss(bstar, k)
    kids.append(rstar.receipt)
    s, t, s2, t2 = ch.u[0], ch.w[0], ch.u[-1], ch.w[-1]
    l_edges = ch.l_edges()
    lg = _graph_of(ag, l_edges, [s, t, s2, t2])

    # F': the four small separations
    f_prime: set[int] = set()
    qg = _graph_of(ag, _union_edges(ch.Q), [s, s2])
    rg = _graph_of(ag, _union_edges(ch.R), [t, t2])
    for g, a, b in ((cur.graph, s, t), (lg, s2, t2), (qg, s, s2), (rg, t, t2)):
        if a != b:
            cut = small_cut(g, a, b, k)
            if cut:
                f_prime |= cut
    # F'': separations between the two ends of L and towards x
    f_pp: set[int] = set()
    lv = lg.vertices
    outside = ag.g.without_vertices(lv - {s, t})
    bx_edges = set(bstar.edges) | {ag.g.edge_id(y, ag.x) for y in bstar.x_vertices
                                   if ag.g.has_edge(y, ag.x)}
    bxg = ag.g.edge_subgraph(bx_edges, [s2, t2, ag.x])
    for a in (s, t):
        for b in (s2, t2):
            if a != b:
                cut = small_cut(lg, a, b, 8 * k)
                if cut:
                    f_pp |= cut
        cut = small_cut(outside, a, ag.x, k)
        if cut:
            f_pp |= cut
    for b in (s2, t2):
        cut = small_cut(bxg, b, ag.x, k)
        if cut:
            f_pp |= cut
    f2 = set(rstar.edges) | f_prime | f_pp

    pairs = [(ch.u[j], ch.w[j]) for j in range(1, ch.ell + 1)]
    mc = bipartite_matching_or_cover(pairs, 3 * k + 3)
    if mc.matching is not None:
        matched = set(mc.matching)
        rungs, used = [], set()
        for j in range(1, ch.ell + 1):
            if pairs[j - 1] in matched and pairs[j - 1] not in used:
                used.add(pairs[j - 1])
                rungs.append(j)
        got = _ladder_attempt(ch, rungs, k)
        if got is not None:
            raise PackingFound(got, "well-connected ladder")
        mc = bipartite_matching_or_cover(pairs, len(pairs) + 1)
    cover = mc.cover

    fans = _fans(ch, cover)
    in_fan: set[int] = set()
    simple_parts: list[Part] = []
    pseudo: list[PseudoPart] = []
    f_w: set[int] = set()
    for fan in fans:
        if fan.size >= 3 * k:
            pp = _pseudo_from_fan(ag, fan, k)
            if pp is None:
                got = _fan_attempt(ag, fan, k)
                if got is not None:
                    raise PackingFound(got, "well-connected fan")
            if pp is not None:
                pseudo.append(pp)
                f_w |= pp.F
                in_fan |= fan.edges()
                continue
        for es, ends in zip(fan.spokes, fan.spine):
            simple_parts.append(make_part(ag, es, ends, fan.hub))
        for p in fan.spine_parts:
            simple_parts.append(p)
        in_fan |= fan.edges()
    for p in ch.Q + ch.R:
        if p.edges and not (p.edges & in_fan):
            simple_parts.append(p)
    f3 = f2 | f_w
    for pp in pseudo:
        if pp.mode == "s":
            pp.F = frozenset(f3)
    bc = cover_badcase(f3, rstar, simple_parts, pseudo, k)
    f |= bc.edges
    kids.append(_receipt("type5-structure", None, f3, [],
                         ell=ch.ell, cover=len(cover), fans=len(fans),
                         pseudo=len(pseudo), simple=len(simple_parts),
                         f_prime=len(f_prime), f_second=len(f_pp), f_w=len(f_w)))
    kids.append(bc.receipt)
    f = frozenset(f)
    return HitOrMiss(f, _receipt("type5", f_bound(lam, k), f, kids, lam=lam))


def _pseudo_from_fan(ag, fan: _Fan, k: int) -> PseudoPart | None:
    es = fan.edges()
    first, last = fan.spine[0], fan.spine[-1]
    rest = ag.g.without_edges(es)
    for c, other, spoke_idx in ((first, last, 0), (last, first, len(fan.spokes) - 1)):
        cut = small_cut(rest, c, ag.x, k)
        if cut is not None:
            d = frozenset().union(*(sp for i, sp in enumerate(fan.spokes) if i != spoke_idx))
            return PseudoPart(ag, es, other, fan.hub, c, "x", frozenset(cut), d)
    wg = ag.gx.edge_subgraph(es).without_vertices([fan.hub])
    cut = small_cut(wg, first, last, 6 * k - 1)
    if cut is not None:
        return PseudoPart(ag, es, last, fan.hub, first, "s", frozenset(cut))
    return None


# -- dispatch --------------------------------------------------------------------

def hit_or_miss(h: Part, k: int) -> HitOrMiss:
    """A hit-or-miss set for h with its bound receipt.

    Raises PackingFound when a well-connected ladder or fan turns up.
    """
    if k < 1:
        raise CoverError("k must be positive")
    if not h.edges:
        return HitOrMiss(frozenset(), _receipt("empty", 0, ()))
    if h.is_simple:
        return cover_simple(h, k)
    kind = classify_part_type(h)
    return {
        PartType.I: cover_type1,
        PartType.II: cover_type2,
        PartType.III: cover_type3,
        PartType.IV: cover_type4,
        PartType.V: cover_type5,
    }[kind](h, k)


def hit_or_miss_union(h1: Part, h2: Part, k: int) -> HitOrMiss:
    """Union of hit-or-miss sets of the two sides of a decomposition."""
    r1, r2 = hit_or_miss(h1, k), hit_or_miss(h2, k)
    f = r1.edges | r2.edges
    return HitOrMiss(f, _receipt("union", r1.receipt.size + r2.receipt.size, f,
                                 [r1.receipt, r2.receipt]))
