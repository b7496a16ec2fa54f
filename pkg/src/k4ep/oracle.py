"""Exhaustive ground truth for small instances.

Every search here is exact. When an instance exceeds a cap the functions
raise OracleLimit instead of returning an approximation.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterable

from .graph import Graph
from .k4 import PAIRS, K4Witness, pairs_k4_free, reduces_to_empty, witness_from_edges
from .ned import NED, compute_nesting, is_ned


class OracleLimit(RuntimeError):
    """The instance is larger than the oracle is allowed to handle."""


# -- K4-subdivisions ----------------------------------------------------------

def all_k4_subdivisions(g: Graph, limit: int = 200000) -> list[frozenset[int]]:
    """Edge sets of every K4-subdivision subgraph of g."""
    adj = {v: dict(g.incident(v)) for v in g.vertices}
    found: set[frozenset[int]] = set()
    order = sorted(g.vertices)
    for quad in combinations(order, 4):
        if any(len(adj[v]) < 3 for v in quad):
            continue
        _extend(adj, quad, 0, frozenset(quad), frozenset(), found, limit)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def _extend(adj, quad, idx, used_v, used_e, found, limit):
    if idx == 6:
        found.add(used_e)
        if len(found) > limit:
            raise OracleLimit("too many K4-subdivisions")
        return
    i, j = PAIRS[idx]
    a, b = quad[i], quad[j]
    # all a-b paths whose interior avoids the vertices used so far
    stack = [(a, frozenset(), ())]
    while stack:
        v, inner, edges = stack.pop()
        for w, e in adj[v].items():
            if w == b:
                if not (used_e & set(edges)) and e not in used_e:
                    _extend(adj, quad, idx + 1, used_v | inner, used_e | set(edges) | {e},
                            found, limit)
                continue
            if w in used_v or w in inner:
                continue
            stack.append((w, inner | {w}, edges + (e,)))


def k4_subdivision_witnesses(g: Graph, limit: int = 200000) -> list[K4Witness]:
    return [witness_from_edges(g, es) for es in all_k4_subdivisions(g, limit)]


def exact_packing_number(g: Graph, cap: int, edge_limit: int = 24) -> tuple[int, list[K4Witness]]:
    """Maximum number (capped at cap) of edge-disjoint K4-subdivisions."""
    if g.m > edge_limit:
        raise OracleLimit(f"{g.m} edges exceeds the packing oracle limit {edge_limit}")
    subs = all_k4_subdivisions(g)
    if not subs or cap <= 0:
        return 0, []
    ids = sorted(g.edge_ids)
    bit = {e: 1 << i for i, e in enumerate(ids)}
    masks = sorted({sum(bit[e] for e in s) for s in subs}, key=lambda m: bin(m).count("1"))
    # keep only inclusion-minimal edge sets; any packing can use those instead
    minimal = []
    for m in masks:
        if not any(p & m == p for p in minimal):
            minimal.append(m)
    best: list[int] = []

    def search(chosen: list[int], union: int, start: int):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if len(best) >= cap:
            return
        for idx in range(start, len(minimal)):
            m = minimal[idx]
            if m & union:
                continue
            # bound: remaining disjoint candidates
            chosen.append(m)
            search(chosen, union | m, idx + 1)
            chosen.pop()
            if len(best) >= cap:
                return

    search([], 0, 0)
    inv = {b: e for e, b in bit.items()}
    out = []
    for m in best:
        es = [inv[1 << i] for i in range(m.bit_length()) if m >> i & 1]
        out.append(witness_from_edges(g, es))
    return len(out), out


def exact_cover_number(g: Graph, cap: int | None = None, edge_limit: int = 20) -> tuple[int, frozenset[int]]:
    """Minimum number of edges meeting every K4-subdivision.

    Branch and bound per block: branch on the edges of one K4-subdivision
    left in the graph, with iterative deepening on the budget. A lower bound
    comes from the fact that a K4-free graph on n vertices has at most 2n-3
    edges. If cap is given, search stops once the answer is known to exceed
    cap and returns (cap + 1, frozenset()).
    """
    if g.m > edge_limit:
        raise OracleLimit(f"{g.m} edges exceeds the cover oracle limit {edge_limit}")
    from .graph import blocks

    total = 0
    chosen: set[int] = set()
    for blk in blocks(g).blocks:
        pairs = {e: g.ends(e) for e in blk}
        if pairs_k4_free(pairs.values()):
            continue
        budget = cap - total if cap is not None else None
        size, cover = _block_cover(pairs, budget)
        if cover is None:
            return cap + 1, frozenset()
        total += size
        chosen |= cover
    return total, frozenset(chosen)


def _block_cover(pairs: dict[int, tuple[int, int]], budget: int | None):
    verts = {v for uv in pairs.values() for v in uv}
    lower = max(0, len(pairs) - (2 * len(verts) - 3))
    upper_cover = _greedy_cover(pairs)
    ids = sorted(pairs)

    @lru_cache(maxsize=None)
    def feasible(alive: frozenset[int], r: int) -> frozenset[int] | None:
        ends = [pairs[e] for e in alive]
        if pairs_k4_free(ends):
            return frozenset()
        if r == 0:
            return None
        vs = {v for uv in ends for v in uv}
        if len(alive) - (2 * len(vs) - 3) > r:
            return None
        wit = _some_k4(pairs, alive)
        for e in sorted(wit):
            sub = feasible(alive - {e}, r - 1)
            if sub is not None:
                return sub | {e}
        return None

    alive = frozenset(ids)
    for r in range(lower, len(upper_cover) + 1):
        if budget is not None and r > budget:
            return None, None
        got = feasible(alive, r)
        if got is not None:
            return len(got), set(got)
    return len(upper_cover), set(upper_cover)


def _some_k4(pairs, alive) -> list[int]:
    from .k4 import _strip_low_degree

    pool = sorted(alive)
    cur = set(_strip_low_degree({e: pairs[e] for e in pool}))
    for e in sorted(cur):
        cur.discard(e)
        if pairs_k4_free(pairs[f] for f in cur):
            cur.add(e)
    return sorted(cur)


def _greedy_cover(pairs) -> list[int]:
    """Complement of a maximal K4-free subgraph built in id order."""
    keep: list[int] = []
    out = []
    for e in sorted(pairs):
        if pairs_k4_free([pairs[f] for f in keep] + [pairs[e]]):
            keep.append(e)
        else:
            out.append(e)
    return out


def exact_vertex_hitting(g: Graph, vertex_limit: int = 14) -> frozenset[int]:
    """Minimum vertex set whose deletion leaves g K4-subdivision-free."""
    if g.n > vertex_limit:
        raise OracleLimit(f"{g.n} vertices exceeds the vertex hitting limit {vertex_limit}")
    verts = sorted(g.vertices)
    for size in range(len(verts) + 1):
        for cand in combinations(verts, size):
            if reduces_to_empty(g.without_vertices(cand).adjacency()):
                return frozenset(cand)
    return frozenset(verts)


# -- NEDs ---------------------------------------------------------------------

def enumerate_neds(g: Graph, s: int, t: int, cap: int = 100000, edge_limit: int = 8) -> list[NED]:
    """Every NED of g with first ear from s to t (ears after the first are
    oriented from their smaller endpoint)."""
    if g.m > edge_limit:
        raise OracleLimit(f"{g.m} edges exceeds the NED enumeration limit {edge_limit}")
    if s == t:
        return []
    all_edges = frozenset(g.edge_ids)
    out: set[tuple] = set()

    def paths(u, targets, covered, used):
        # simple paths from u using unused edges, interior outside covered
        stack = [(u, (u,), used)]
        while stack:
            v, path, es = stack.pop()
            for w, e in g.incident(v).items():
                if e in es:
                    continue
                if w in targets and w != u:
                    yield path + (w,), es | {e}
                if w in covered or w in path:
                    continue
                stack.append((w, path + (w,), es | {e}))

    def grow(ears, covered, used):
        if used == all_edges:
            if covered == set(g.vertices):
                out.add(tuple(ears))
                if len(out) > cap:
                    raise OracleLimit("too many NEDs")
            return
        for u in sorted(covered):
            for ear, es in paths(u, covered, covered, used):
                if ear[0] > ear[-1]:
                    continue
                cand = ears + [ear]
                if compute_nesting(cand) is None or not is_ned(cand):
                    continue
                grow(cand, covered | set(ear), es)

    for first, es in paths(s, {t}, {t}, frozenset()):
        if first[-1] == t:
            grow([first], set(first), es)
    return [NED.build(e) for e in sorted(out)]


# -- modules and hit-or-miss sets ------------------------------------------------
#
# Blueprints are compared here by labelled isomorphism of the suppressed
# multigraphs, independently of the blueprint catalogue.

def _module_shape(h, edges: frozenset[int]):
    import networkx as nx

    gx = h.host.gx
    X = h.host.X
    m = nx.MultiGraph()
    for e in edges:
        u, v = gx.ends(e)
        m.add_edge(u, v)
    for v in m.nodes:
        m.nodes[v]["label"] = "s" if v == h.s else "t" if v == h.t else "x" if v in X else ""
    for v in sorted(m.nodes):
        if m.nodes[v]["label"] or m.degree(v) != 2:
            continue
        nb = [w for _, w in m.edges(v)]
        if nb[0] == v:
            continue
        m.remove_node(v)
        m.add_edge(nb[0], nb[1])
    return m


def _same_shape(a, b) -> bool:
    import networkx as nx

    if a.number_of_nodes() != b.number_of_nodes() or a.number_of_edges() != b.number_of_edges():
        return False
    return nx.is_isomorphic(a, b, node_match=lambda p, q: p["label"] == q["label"])


def enumerate_modules(h, limit: int = 200000) -> dict[frozenset[int], list[frozenset[int]]]:
    """Module edge set -> the K4-subdivisions of G whose trace on h it is."""
    out: dict[frozenset[int], list[frozenset[int]]] = {}
    for k in all_k4_subdivisions(h.host.g, limit):
        trace = k & h.edges
        if trace:
            out.setdefault(trace, []).append(k)
    return out


def _disjoint_count(sets: list[frozenset[int]], need: int) -> int:
    best = 0

    def search(i, used, count):
        nonlocal best
        best = max(best, count)
        if best >= need or i == len(sets) or count + len(sets) - i <= best:
            return
        if not (sets[i] & used):
            search(i + 1, used | sets[i], count + 1)
        search(i + 1, used, count)

    search(0, frozenset(), 0)
    return best


def _shape_classes(shapes: dict) -> dict:
    """Module -> index of its labelled-isomorphism class."""
    buckets: dict[tuple, list] = {}
    for m, a in shapes.items():
        inv = (a.number_of_nodes(), a.number_of_edges(),
               tuple(sorted((d["label"], a.degree(v)) for v, d in a.nodes(data=True))))
        buckets.setdefault(inv, []).append(m)
    cls: dict = {}
    reps: list = []
    for group in buckets.values():
        local: list[int] = []
        for m in group:
            for c in local:
                if _same_shape(shapes[m], shapes[reps[c]]):
                    cls[m] = c
                    break
            else:
                reps.append(m)
                local.append(len(reps) - 1)
                cls[m] = len(reps) - 1
    return cls


def check_hit_or_miss(h, f: Iterable[int], k: int, limit: int = 200000) -> list[frozenset[int]]:
    """Modules of h that f fails: not hit, and without k edge-disjoint
    modules of h sharing their blueprint."""
    f = frozenset(f)
    mods = enumerate_modules(h, limit)
    unhit = [m for m, ks in mods.items() if not all(kk & f for kk in ks)]
    if not unhit:
        return []
    cls = _shape_classes({m: _module_shape(h, m) for m in mods})
    members: dict[int, list[frozenset[int]]] = {}
    for m in mods:
        members.setdefault(cls[m], []).append(m)
    enough: dict[int, bool] = {}
    failed = []
    for m in sorted(unhit, key=lambda m: (len(m), sorted(m))):
        c = cls[m]
        if c not in enough:
            twins = sorted(members[c], key=len)
            enough[c] = _disjoint_count(twins, k) >= k
        if not enough[c]:
            failed.append(m)
    return failed
