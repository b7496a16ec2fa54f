"""Explicit constructions of edge-disjoint K4-subdivisions: x-ears side by
side, configurations of nested x-ears, many x-ears, ladders and fans."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bounds import PAPER, Constants, profile
from .flows import edge_flow
from .graph import Graph, GraphError, shortest_path
from .k4 import K4Witness, edges_k4_free, minimal_k4_edges, validate_k4_witness, witness_from_edges, witnesses_edge_disjoint
from .ned import NED, compute_nesting, interval_span, is_ned, nest_orders, x_ear_mask
from .parts import ApexedGraph
from .sp import sp_recognize


class PackingError(GraphError):
    """A precondition of a packing construction does not hold."""


# -- F-bar and x-links ----------------------------------------------------------

def x_links(ag: ApexedGraph, v: int, h_edges: frozenset[int] | None = None) -> list[tuple[int, int, int]]:
    """(y, e(vy), e(yx)) for every length-2 v-x path through X, inside h_edges."""
    g = ag.g
    out = []
    for y, e1 in sorted(g.incident(v).items()):
        if y == ag.x or y not in ag.X or not g.has_edge(y, ag.x):
            continue
        e2 = g.edge_id(y, ag.x)
        if h_edges is None or (e1 in h_edges and e2 in h_edges):
            out.append((y, e1, e2))
    return out


def nx_of(ag: ApexedGraph, h_edges: frozenset[int] | None = None) -> frozenset[int]:
    """Vertices outside X joined to x by a length-2 path of H."""
    verts = ag.g.vertices - ag.X
    return frozenset(v for v in verts if x_links(ag, v, h_edges))


def fbar_edges(ag: ApexedGraph, ear: Sequence[int], h_edges: frozenset[int] | None = None) -> frozenset[int]:
    g = ag.g
    es = set(g.path_edges(ear))
    for v in ear[1:-1]:
        for _, e1, e2 in x_links(ag, v, h_edges):
            es |= {e1, e2}
    return frozenset(es)


def ned_host_edges(ag: ApexedGraph, ears: Iterable[Sequence[int]],
                   h_edges: frozenset[int] | None = None) -> frozenset[int]:
    out: set[int] = set()
    for ear in ears:
        out |= fbar_edges(ag, ear, h_edges)
    return frozenset(out)


def _x_vertex(ag: ApexedGraph, ear: Sequence[int], h_edges, avoid: set[int] = frozenset()):
    """First interior vertex of the ear with an x-link, and that link."""
    for v in ear[1:-1]:
        for y, _, _ in x_links(ag, v, h_edges):
            if y not in avoid:
                return v, y
    return None


def _subpath(path: Sequence[int], a: int, b: int) -> tuple[int, ...]:
    i, j = path.index(a), path.index(b)
    return tuple(path[i:j + 1]) if i <= j else tuple(path[j:i + 1][::-1])


def _witness(g: Graph, edges: Iterable[int]) -> K4Witness | None:
    res = minimal_k4_edges(g, edges)
    if res is None:
        return None
    return witness_from_edges(g, res)


# -- side by side -----------------------------------------------------------------

def pack_side_by_side(ag: ApexedGraph, d: NED, parent: int, ears: Sequence[int],
                      h_edges: frozenset[int] | None = None) -> list[K4Witness]:
    """floor(len(ears) / 3) edge-disjoint K4-subdivisions from x-ears nested
    in the same ear with pairwise edge-disjoint nest intervals."""
    E = d.ears[parent]
    spans = []
    for j in ears:
        if d.parents[j] != parent:
            raise PackingError(f"ear {j} is not nested in ear {parent}")
        if _x_vertex(ag, d.ears[j], h_edges) is None:
            raise PackingError(f"ear {j} is not an x-ear")
        spans.append((interval_span(d, j), j))
    spans.sort()
    for ((_, b1), _), ((a2, _), _) in zip(spans, spans[1:]):
        if a2 < b1:
            raise PackingError("nest intervals are not edge-disjoint")
    order = [j for _, j in spans]
    out = []
    g = ag.g
    for i in range(len(order) // 3):
        f1, f2, f3 = (d.ears[j] for j in order[3 * i:3 * i + 3])
        (a1, b1), (a2, b2), (a3, b3) = (s for s, _ in spans[3 * i:3 * i + 3])
        s2, t2 = E[a2], E[b2]
        t1, s3 = E[b1], E[a3]
        v1, y1 = _x_vertex(ag, f1, h_edges)
        v2, y2 = _x_vertex(ag, f2, h_edges)
        v3, y3 = _x_vertex(ag, f3, h_edges)
        c_cycle = list(_subpath(f2, s2, t2)) + list(E[a2:b2 + 1][::-1])[1:]
        p1 = list(E[b1:a2 + 1][::-1]) + list(_subpath(f1, t1, v1))[1:] + [y1, ag.x]
        p2 = [v2, y2, ag.x]
        p3 = list(E[b2:a3 + 1]) + list(_subpath(f3, s3, v3))[1:] + [y3, ag.x]
        es = set(g.path_edges(c_cycle)) | set(g.path_edges(p1)) | set(g.path_edges(p2)) \
            | set(g.path_edges(p3))
        w = witness_from_edges(g, es)
        out.append(w)
    if not witnesses_edge_disjoint(g, out):
        raise PackingError("side-by-side witnesses overlap")
    return out


# -- seven nest-descendants --------------------------------------------------------

def _nest_family(d: NED, e: int, mask) -> list[int]:
    fam = [e]
    for j in range(e + 1, len(d.ears)):
        if mask[j] and d.parents[j] in fam:
            fam.append(j)
    return fam


def k4_from_descendants(ag: ApexedGraph, d: NED, e: int,
                        h_edges: frozenset[int] | None = None) -> K4Witness:
    """A K4-subdivision inside the F-bars of x-ear e and its nest-descendants,
    which must number at least seven."""
    nxv = nx_of(ag, h_edges)
    mask = x_ear_mask(d, nxv)
    if not mask[e]:
        raise PackingError(f"ear {e} is not an x-ear")
    fam = _nest_family(d, e, mask)
    if len(fam) - 1 < 7:
        raise PackingError(f"ear {e} has only {len(fam) - 1} nest-descendants")
    g = ag.g
    members = set(fam)
    for f in fam:
        kids = [j for j in fam if j != e and d.parents[j] == f]
        if len(kids) < 3:
            continue
        spans = {j: interval_span(d, j) for j in kids}
        for j1 in kids:
            for j2 in kids:
                lo1, hi1 = spans[j1]
                lo2, hi2 = spans[j2]
                if j1 != j2 and lo1 <= lo2 and hi2 <= hi1 and (lo1, hi1) != (lo2, hi2) or \
                        j1 < j2 and (lo1, hi1) == (lo2, hi2):
                    w = _nested_case(ag, d, f, j1, j2, h_edges)
                    if w is not None:
                        return w
        trip = sorted(kids, key=lambda j: spans[j])[:3]
        return pack_side_by_side(ag, d, f, trip, h_edges)[0]
    for f1 in fam:
        if d.parents[f1] != e or f1 == e:
            continue
        for f2 in fam:
            if d.parents[f2] != f1:
                continue
            for f3 in fam:
                if d.parents[f3] != f2:
                    continue
                w = _stacked_case(ag, d, f1, f2, f3, h_edges)
                if w is not None:
                    return w
    # the constructions above cover every configuration; a failure means the
    # decomposition is not good, so fall back to a search for the witness
    union = ned_host_edges(ag, (d.ears[j] for j in members), h_edges)
    w = _witness(g, union)
    if w is None:
        raise PackingError("no K4-subdivision among the nest-descendants")
    return w


def _nested_case(ag, d, f, j1, j2, h_edges) -> K4Witness | None:
    """I(F2) within I(F1): cycle F2 + I(F2) joined to an X-neighbour of F1."""
    g = ag.g
    F = d.ears[f]
    f1, f2 = d.ears[j1], d.ears[j2]
    lo1, hi1 = interval_span(d, j1)
    lo2, hi2 = interval_span(d, j2)
    s1, t1, s2, t2 = F[lo1], F[hi1], F[lo2], F[hi2]
    got1 = _x_vertex(ag, f1, h_edges)
    got2 = _x_vertex(ag, f2, h_edges)
    if got1 is None or got2 is None:
        return None
    v, yv = got1
    u, yu = _x_vertex(ag, f2, h_edges, avoid={yv}) or (None, None)
    if u is None:
        return None
    cyc = list(_subpath(f2, s2, t2)) + list(F[lo2:hi2 + 1][::-1])[1:]
    q1 = [u, yu, ag.x, yv, v]
    q2 = list(F[lo1:lo2 + 1][::-1]) + list(_subpath(f1, s1, v))[1:]
    q3 = list(F[hi2:hi1 + 1]) + list(_subpath(f1, t1, v))[1:]
    es = set()
    for p in (cyc, q1, q2, q3):
        es |= set(g.path_edges(p))
    try:
        return witness_from_edges(g, es)
    except GraphError:
        return None


def _stacked_case(ag, d, j1, j2, j3, h_edges) -> K4Witness | None:
    """E > F1 > F2 > F3 nested: cycle F2 + I(F2) with three paths to x."""
    g = ag.g
    f1, f2, f3 = d.ears[j1], d.ears[j2], d.ears[j3]
    lo, hi = interval_span(d, j2)
    i_f2 = f1[lo:hi + 1]
    s2, t2 = f1[lo], f1[hi]
    cyc = list(_subpath(f2, s2, t2)) + list(i_f2[::-1])[1:]
    got = _x_vertex(ag, f2, h_edges)
    if got is None:
        return None
    u, yu = got
    used_y = {yu}
    p1 = [u, yu, ag.x]
    for v in (f3[0], f3[-1]):
        if v == u:
            continue
        walk = f3 if f3[0] == v else f3[::-1]
        hit = None
        for idx, w in enumerate(walk[1:-1], start=1):
            links = [y for y, _, _ in x_links(ag, w, h_edges) if y not in used_y]
            if links:
                hit = (idx, links[0])
                break
        if hit is None:
            continue
        p2 = list(walk[:hit[0] + 1]) + [hit[1], ag.x]
        used2 = used_y | {hit[1]}
        for p3 in _stacked_third(ag, f1, i_f2, lo, hi, h_edges, used2, {u, v}):
            es = set()
            for p in (cyc, p1, p2, p3):
                es |= set(g.path_edges(p))
            try:
                w = witness_from_edges(g, es)
            except GraphError:
                continue
            return w
    return None


def _stacked_third(ag, f1, i_f2, lo, hi, h_edges, used_y, taken):
    for w in i_f2[1:-1]:
        if w in taken:
            continue
        for y, _, _ in x_links(ag, w, h_edges):
            if y not in used_y:
                yield [w, y, ag.x]
    # walk along F1 from an end of F2 to the nearest X-neighbour outside I(F2)
    for start, step in ((lo, -1), (hi, 1)):
        if f1[start] in taken:
            continue
        idx = start
        while 0 < idx < len(f1) - 1 or idx == start:
            links = [y for y, _, _ in x_links(ag, f1[idx], h_edges) if y not in used_y]
            if links and 0 < idx < len(f1) - 1:
                seg = f1[min(start, idx):max(start, idx) + 1]
                seg = list(seg) if step > 0 else list(seg[::-1])
                yield seg + [links[0], ag.x]
                break
            idx += step
            if not 0 <= idx < len(f1):
                break


# -- many x-ears --------------------------------------------------------------------

@dataclass
class ManyEarsResult:
    witnesses: list[K4Witness]
    lam: int
    target: int
    constants: str
    branches: list[str] = field(default_factory=list)


def good_ned_for(ag: ApexedGraph, h_edges: frozenset[int], s: int, t: int) -> NED:
    """A good NED of H - X with first ear from s to t, with x-ears measured
    by the x-links inside H."""
    from .ned import good_ned_of

    h = ag.g.edge_subgraph(h_edges)
    core = h.without_vertices(ag.X & h.vertices)
    tree = sp_recognize(core, s, t)
    if tree is None:
        raise PackingError("H - X is not series-parallel with these terminals")
    return good_ned_of(tree, nx_of(ag, h_edges))


def pack_many_ears(ag: ApexedGraph, d: NED | None = None, constants: Constants | str = PAPER,
                   h_edges: frozenset[int] | None = None) -> ManyEarsResult:
    """floor(lambda / C) + 1 edge-disjoint K4-subdivisions in the union of
    the F-bars of a good NED with lambda x-ears (C = 200 by default).

    Without d, a good NED of G - X is computed. Under a non-default
    constants profile the count is best effort.
    """
    c = profile(constants)
    g = ag.g
    if d is None:
        s, t = ag.default_terminals()
        h_all = ned_host_edges(ag, [list(ag.core.ends(e)) for e in ag.core.edge_ids])
        d = good_ned_for(ag, h_all, s, t)
    if h_edges is None:
        h_edges = ned_host_edges(ag, d.ears)
    if minimal_k4_edges(g, h_edges) is None:
        raise PackingError("H contains no K4-subdivision")
    log: list[str] = []
    lam = sum(x_ear_mask(d, nx_of(ag, h_edges)))
    target = lam // c.many_ears + 1
    got = _many(ag, d, h_edges, c, log, depth=0)
    if c.name == PAPER.name and len(got) < target:
        raise PackingError(f"only {len(got)} of {target} K4-subdivisions found")
    got = got[:target]
    if not witnesses_edge_disjoint(g, got) or not all(validate_k4_witness(g, w) for w in got):
        raise PackingError("many-ears witnesses are invalid")
    return ManyEarsResult(got, lam, target, c.name, log)


def _many(ag: ApexedGraph, d: NED, h_edges: frozenset[int], c: Constants, log: list[str],
          depth: int) -> list[K4Witness]:
    g = ag.g
    nxv = nx_of(ag, h_edges)
    mask = x_ear_mask(d, nxv)
    lam = sum(mask)
    ell = lam // c.many_ears + 1
    if ell == 1:
        w = _witness(g, h_edges)
        log.append(f"{depth}:single")
        return [w] if w is not None else []
    orders = nest_orders(d, nxv)
    desc = {j: orders.descendants(j) for j in orders.x_ears}
    cands = [j for j in orders.x_ears if len(desc[j]) >= c.many_desc]
    refined = orders.refined
    maximal = [j for j in cands if not any((j, i) in refined for i in cands)]
    if not maximal:
        log.append(f"{depth}:no-candidate")
        w = _witness(g, h_edges)
        return [w] if w is not None else []
    star = maximal[0]
    if len(desc[star]) >= c.big_desc * ell:
        imm = orders.immediate_descendants(star)
        mine = [f for f in imm if d.parents[f] == star]
        parent = star
        if len(mine) < c.side * ell:
            parent = d.parents[star]
            mine = [f for f in imm if d.parents[f] == parent]
        if len(mine) >= c.side * ell and parent is not None:
            mine = sorted(mine, key=lambda j: interval_span(d, j))[:3 * ell]
            log.append(f"{depth}:side-by-side")
            return pack_side_by_side(ag, d, parent, mine, h_edges)
        log.append(f"{depth}:side-by-side-short")
    nest_desc = orders.nest_descendants(star)
    if len(nest_desc) >= c.nest_desc:
        side1 = _subtree(d, star)
        e1 = [j for j in range(len(d.ears)) if j in side1]
        e2 = [j for j in range(len(d.ears)) if j not in side1]
        ears1 = [d.ears[j] for j in e1]
        ears2 = [d.ears[j] for j in e2]
        log.append(f"{depth}:nest-split")
    else:
        if star == 0 or d.parents[star] is None:
            log.append(f"{depth}:no-split")
            w = _witness(g, h_edges)
            return [w] if w is not None else []
        ears1, ears2 = _interval_split(d, star, orders, mask)
        log.append(f"{depth}:interval-split")
    out: list[K4Witness] = []
    for ears in (ears1, ears2):
        if not ears or compute_nesting(ears) is None or not is_ned(ears):
            raise PackingError("split produced an invalid decomposition")
        hi = ned_host_edges(ag, ears, h_edges)
        if minimal_k4_edges(g, hi) is None:
            if c.name == PAPER.name:
                raise PackingError("a side of the split has no K4-subdivision")
            continue
        di = good_ned_for(ag, hi, ears[0][0], ears[0][-1])
        out += _many(ag, di, hi, c, log, depth + 1)
    return out


def _subtree(d: NED, root: int) -> set[int]:
    out = {root}
    for j in range(root + 1, len(d.ears)):
        if d.parents[j] in out:
            out.add(j)
    return out


def _interval_split(d: NED, star: int, orders, mask) -> tuple[list[tuple], list[tuple]]:
    """E1 = I(E*) plus the ears above E* that are not nest-descendants;
    E2 = the rest with E' rerouted through E*."""
    ep = d.parents[star]
    E_p = d.ears[ep]
    lo, hi = interval_span(d, star)
    i_star = tuple(E_p[lo:hi + 1])
    ears_star = d.ears[star]
    if ears_star[0] != E_p[lo]:
        ears_star = ears_star[::-1]
    e_dd = tuple(E_p[:lo]) + tuple(ears_star) + tuple(E_p[hi + 1:])
    above = {b for (a, b) in orders.refined if a == star}
    nest = set(orders.nest_descendants(star))
    first = above - nest
    side1: set[int] = set()
    for j in range(len(d.ears)):
        if j in (star, ep):
            continue
        if mask[j]:
            if j in first:
                side1.add(j)
            continue
        p = d.parents[j]
        if p in side1:
            side1.add(j)
        elif p == ep:
            a, b = interval_span(d, j)
            if lo <= a and b <= hi and (a, b) != (lo, hi):
                side1.add(j)
    ears1 = [i_star] + [d.ears[j] for j in range(len(d.ears)) if j in side1]
    ears2 = []
    for j in range(len(d.ears)):
        if j == ep:
            ears2.append(e_dd)
        elif j != star and j not in side1:
            ears2.append(d.ears[j])
    return ears1, ears2


# -- ladders and fans ----------------------------------------------------------------

@dataclass(frozen=True)
class LadderSpec:
    """Parts Q_1..Q_{3k+2}, R_1..R_{3k+2}, S_1..S_{3k+3} of G - x given by
    edge sets, rails s_i, t_i and end anchors a, b."""

    g: Graph
    x: int
    k: int
    Q: tuple[frozenset[int], ...]
    R: tuple[frozenset[int], ...]
    S: tuple[frozenset[int], ...]
    s: tuple[int, ...]
    t: tuple[int, ...]
    a: int
    b: int

    def terminals(self):
        n = len(self.s)
        for i in range(n - 1):
            yield "Q", i, self.Q[i], (self.s[i], self.s[i + 1])
            yield "R", i, self.R[i], (self.t[i], self.t[i + 1])
        for i in range(n):
            yield "S", i, self.S[i], (self.s[i], self.t[i])

    @property
    def edges(self) -> frozenset[int]:
        return frozenset().union(*self.Q, *self.R, *self.S)

    def validate(self) -> list[str]:
        k = self.k
        out = []
        n = 3 * k + 3
        if len(self.s) != n or len(self.t) != n or len(self.S) != n:
            out.append(f"ladder needs {n} rungs")
        if len(self.Q) != n - 1 or len(self.R) != n - 1:
            out.append(f"ladder needs {n - 1} rail parts per side")
        if len(set(self.s) | set(self.t)) != 2 * len(self.s):
            out.append("rail vertices are not distinct")
        if out:
            return out
        out += _check_parts(self.g, self.x, list(self.terminals()))
        if self.a not in (self.s[0], self.t[0]) or self.b not in (self.s[-1], self.t[-1]):
            out.append("anchors are not end rail vertices")
        if out:
            return out
        h = self.g.edge_subgraph(self.edges)
        paths, _ = edge_flow(h, [self.a], [self.b], 8 * k)
        if len(paths) < 8 * k:
            out.append(f"only {len(paths)} edge-disjoint a-b paths in H")
        for c, ends in ((self.a, {self.s[0], self.t[0]}), (self.b, {self.s[-1], self.t[-1]})):
            if len(_outside_paths(self.g, self.edges, c, self.x, ends, k)) < k:
                out.append(f"fewer than {k} edge-disjoint {c}-x paths outside H")
        return out


@dataclass(frozen=True)
class FanSpec:
    """Parts Q_1..Q_l and S_1..S_{l+1} with spine s_1..s_{l+1} and hub t."""

    g: Graph
    x: int
    k: int
    Q: tuple[frozenset[int], ...]
    S: tuple[frozenset[int], ...]
    s: tuple[int, ...]
    t: int

    @property
    def size(self) -> int:
        return len(self.Q)

    def terminals(self):
        for i in range(len(self.Q)):
            yield "Q", i, self.Q[i], (self.s[i], self.s[i + 1])
        for i in range(len(self.S)):
            yield "S", i, self.S[i], (self.s[i], self.t)

    @property
    def edges(self) -> frozenset[int]:
        return frozenset().union(*self.Q, *self.S)

    def validate(self) -> list[str]:
        k = self.k
        out = []
        if self.size != 3 * k or len(self.S) != self.size + 1 or len(self.s) != self.size + 1:
            out.append(f"fan needs size {3 * k}")
        if len(set(self.s) | {self.t}) != len(self.s) + 1:
            out.append("spine and hub are not distinct")
        if out:
            return out
        out += _check_parts(self.g, self.x, list(self.terminals()))
        if out:
            return out
        h = self.g.edge_subgraph(self.edges).without_vertices([self.t])
        paths, _ = edge_flow(h, [self.s[0]], [self.s[-1]], 6 * k)
        if len(paths) < 6 * k:
            out.append(f"only {len(paths)} edge-disjoint spine paths avoiding the hub")
        for c in (self.s[0], self.s[-1]):
            if len(_outside_paths(self.g, self.edges, c, self.x, {c}, k)) < k:
                out.append(f"fewer than {k} edge-disjoint {c}-x paths outside H")
        return out


def _check_parts(g: Graph, x: int, parts) -> list[str]:
    out = []
    owner: dict[int, str] = {}
    terms: set[int] = set()
    for _, _, _, ends in parts:
        terms |= set(ends)
    for kind, i, es, (u, v) in parts:
        name = f"{kind}{i + 1}"
        if not es:
            out.append(f"{name} is trivial")
            continue
        sub = g.edge_subgraph(es)
        if x in sub.vertices:
            out.append(f"{name} contains x")
        if u not in sub.vertices or v not in sub.vertices or shortest_path(sub, [u], [v]) is None:
            out.append(f"{name} does not join its terminals")
        for w in sub.vertices:
            if w in (u, v):
                continue
            if w in terms:
                out.append(f"{name} contains the foreign terminal {w}")
            if w in owner and owner[w] != name:
                out.append(f"{name} and {owner[w]} share the inner vertex {w}")
            owner[w] = name
    return out


def _outside_paths(g: Graph, h_edges: frozenset[int], c: int, x: int, allowed: set[int], k: int):
    """Up to k edge-disjoint c-x paths meeting H only in `allowed`."""
    hv = {v for e in h_edges for v in g.ends(e)}
    rest = g.without_edges(h_edges).without_vertices(hv - set(allowed))
    if c not in rest.vertices:
        return []
    paths, _ = edge_flow(rest, [c], [x], k)
    return paths


def _owner_map(g: Graph, paths) -> dict[int, int]:
    own = {}
    for i, p in enumerate(paths):
        for e in g.path_edges(p):
            own[e] = i
    return own


def _part_path(g: Graph, es: frozenset[int], u: int, v: int, paths, owner) -> tuple[int, ...]:
    """A u-v path in the part touching at most one of the given paths,
    preferably a segment of one of them."""
    for i, p in enumerate(paths):
        pe = set(g.path_edges(p))
        if pe & es and u in p and v in p:
            seg = _subpath(p, u, v)
            if set(g.path_edges(seg)) <= es:
                return seg
    sub = g.edge_subgraph(es)
    path = shortest_path(sub, [u], [v], avoid_edges={e for e in es if e in owner})
    if path is None:
        path = shortest_path(sub, [u], [v])
    return tuple(path)


def _close_units(g: Graph, units: list[set[int]], long_paths, ax, bx, k) -> list[K4Witness]:
    owner = _owner_map(g, long_paths)
    touched = set()
    for es in units:
        touched |= {owner[e] for e in es if e in owner}
    free = [i for i in range(len(long_paths)) if i not in touched]
    if len(free) < k:
        raise PackingError("not enough long paths avoid the chosen ladder units")
    out = []
    for i, es in enumerate(units):
        p = long_paths[free[i]]
        vs = {w for e in es for w in g.ends(e)}
        on = [idx for idx, w in enumerate(p) if w in vs]
        seg = set(g.path_edges(p[:on[0] + 1])) | set(g.path_edges(p[on[-1]:]))
        union = set(es) | seg | set(g.path_edges(ax[i])) | set(g.path_edges(bx[i]))
        w = _witness(g, union)
        if w is None:
            raise PackingError("ladder unit does not close to a K4-subdivision")
        out.append(w)
    if not witnesses_edge_disjoint(g, out):
        raise PackingError("ladder witnesses overlap")
    return out


def pack_ladder(spec: LadderSpec, k: int | None = None) -> list[K4Witness]:
    """k edge-disjoint K4-subdivisions from a well-connected ladder."""
    k = spec.k if k is None else k
    bad = spec.validate()
    if bad:
        raise PackingError("; ".join(bad))
    g = spec.g
    h = g.edge_subgraph(spec.edges)
    long_paths, _ = edge_flow(h, [spec.a], [spec.b], 8 * k)
    owner = _owner_map(g, long_paths)
    units = []
    for i in range(k):
        es: set[int] = set()
        # rail parts Q/R with indices 3i+2, 3i+3 and rungs 3i+2..3i+4 (1-based)
        for j in (3 * i + 1, 3 * i + 2):
            for part, ends in ((spec.Q[j], (spec.s[j], spec.s[j + 1])), (spec.R[j], (spec.t[j], spec.t[j + 1]))):
                es |= set(g.path_edges(_part_path(g, part, *ends, long_paths, owner)))
        for j in (3 * i + 1, 3 * i + 2, 3 * i + 3):
            es |= set(g.path_edges(_part_path(g, spec.S[j], spec.s[j], spec.t[j], long_paths, owner)))
        units.append(es)
    ax = _outside_paths(g, spec.edges, spec.a, spec.x, {spec.s[0], spec.t[0]}, k)
    bx = _outside_paths(g, spec.edges, spec.b, spec.x, {spec.s[-1], spec.t[-1]}, k)
    return _close_units(g, units, long_paths, ax, bx, k)


def pack_fan(spec: FanSpec, k: int | None = None) -> list[K4Witness]:
    """k edge-disjoint K4-subdivisions from a well-connected fan."""
    k = spec.k if k is None else k
    bad = spec.validate()
    if bad:
        raise PackingError("; ".join(bad))
    g = spec.g
    h = g.edge_subgraph(spec.edges).without_vertices([spec.t])
    long_paths, _ = edge_flow(h, [spec.s[0]], [spec.s[-1]], 6 * k)
    owner = _owner_map(g, long_paths)
    units = []
    for i in range(k):
        es: set[int] = set()
        for j in (3 * i, 3 * i + 1):
            es |= set(g.path_edges(_part_path(g, spec.Q[j], spec.s[j], spec.s[j + 1], long_paths, owner)))
        for j in (3 * i, 3 * i + 1, 3 * i + 2):
            es |= set(g.path_edges(_part_path(g, spec.S[j], spec.s[j], spec.t, long_paths, owner)))
        units.append(es)
    ax = _outside_paths(g, spec.edges, spec.s[0], spec.x, {spec.s[0]}, k)
    bx = _outside_paths(g, spec.edges, spec.s[-1], spec.x, {spec.s[-1]}, k)
    return _close_units(g, units, long_paths, ax, bx, k)


# -- searching for a packing -----------------------------------------------------

class SearchBudget(RuntimeError):
    """The exhaustive enumeration outgrew its node budget."""


def enumerate_k4_subdivisions(g: Graph, eids: Iterable[int] | None = None,
                              budget: int = 20000) -> list[frozenset[int]]:
    """Every K4-subdivision (as an edge set) inside the given edges.

    A K4-subdivision has no proper K4-subdivision subgraph, so the minimal
    K4-containing edge sets are exactly the subdivisions. They are found by
    branching: take one minimal witness, record it, and for each of its
    edges recurse with that edge deleted. Every other subdivision misses
    some edge of the recorded one and survives in that branch.
    """
    pool = frozenset(g.edge_ids if eids is None else eids)
    found: set[frozenset[int]] = set()
    seen: set[frozenset[int]] = set()
    stack = [frozenset()]
    while stack:
        banned = stack.pop()
        if banned in seen:
            continue
        seen.add(banned)
        if len(seen) > budget:
            raise SearchBudget(f"more than {budget} enumeration nodes")
        w = minimal_k4_edges(g, pool - banned)
        if w is None:
            continue
        w = frozenset(w)
        found.add(w)
        for e in sorted(w, reverse=True):
            stack.append(banned | {e})
    return sorted(found, key=lambda s: (len(s), sorted(s)))


@dataclass
class PackingSearch:
    witnesses: list[K4Witness]
    exact: bool  # True when fewer than k witnesses proves nu < k


def _max_disjoint(sets: list[frozenset[int]], need: int) -> list[frozenset[int]]:
    best: list[frozenset[int]] = []

    def grow(i: int, used: frozenset[int], chosen: list[frozenset[int]]):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if len(best) >= need or len(chosen) + len(sets) - i <= len(best):
            return
        for j in range(i, len(sets)):
            if sets[j] & used:
                continue
            chosen.append(sets[j])
            grow(j + 1, used | sets[j], chosen)
            chosen.pop()
            if len(best) >= need:
                return

    grow(0, frozenset(), [])
    return best


def greedy_packing(g: Graph, rounds: int = 30, seed: int = 0) -> list[frozenset[int]]:
    """Repeatedly peel a minimal witness off, over several edge orders."""
    import random

    rng = random.Random(seed)
    best: list[frozenset[int]] = []
    ids = sorted(g.edge_ids)
    for r in range(rounds):
        order = list(ids)
        if r:
            rng.shuffle(order)
        rank = {e: i for i, e in enumerate(order)}
        alive = set(ids)
        got = []
        while True:
            # minimal_k4_edges deletes in id order; keep_first biases the residue
            w = minimal_k4_edges(g, alive, keep_first=sorted(alive, key=rank.get)[: len(alive) // 2])
            if w is None:
                break
            got.append(frozenset(w))
            alive -= set(w)
        if len(got) > len(best):
            best = got
    return best


def packing_upper_bound(g: Graph) -> int:
    """Each witness has at least six edges and uses three edges at each of
    its four branch vertices."""
    return min(g.m // 6, sum(g.degree(v) // 3 for v in g.vertices) // 4)


def search_packing(g: Graph, k: int, budget: int = 20000) -> PackingSearch:
    """Up to k edge-disjoint K4-subdivisions of g, block by block.

    Within a block the search is exhaustive (enumeration plus a disjoint-set
    search) unless greedy peeling already meets the counting bound or the
    enumeration outgrows its budget.
    """
    from .graph import blocks

    if k <= 0:
        return PackingSearch([], True)
    found: list[K4Witness] = []
    exact = True
    for bl in blocks(g).blocks:
        need = k - len(found)
        if need <= 0:
            break
        gb = g.edge_subgraph(bl)
        cap = min(need, packing_upper_bound(gb))
        if cap == 0 or edges_k4_free(gb, bl):
            continue
        best = greedy_packing(gb, rounds=4)[:cap]
        if len(best) < cap:
            try:
                subs = enumerate_k4_subdivisions(gb, budget=budget)
                best = _max_disjoint(subs, cap)
            except SearchBudget:
                more = greedy_packing(gb, rounds=40, seed=1)[:cap]
                best = more if len(more) > len(best) else best
                exact = exact and len(best) >= cap
        found += [witness_from_edges(g, s) for s in best]
    return PackingSearch(found[:k], exact)
