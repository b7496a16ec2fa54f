"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with `pytest tests/test_acceptance.py -s` or `python tests/test_acceptance.py`.
The lines are also repeated in the pytest terminal summary.
"""

from __future__ import annotations

import random
import time
from functools import lru_cache
from itertools import combinations

import networkx as nx

from k4ep import generators as gens
from k4ep.blueprints import classify_module
from k4ep.cover import pack_or_cover
from k4ep.covering import PackingFound, hit_or_miss
from k4ep.flows import is_s_path, mader_s_paths, paths_edge_disjoint
from k4ep.graph import Graph
from k4ep.k4 import is_k4_free, validate_k4_witness, witnesses_edge_disjoint
from k4ep.ned import exchange_violations, ned_from_sptree, validate_ned, x_ear_count
from k4ep.oracle import (all_k4_subdivisions, check_hit_or_miss, enumerate_neds, exact_cover_number,
                         exact_packing_number)
from k4ep.packing import k4_from_descendants, pack_fan, pack_ladder, pack_side_by_side
from k4ep.parts import ApexedGraph, classify_part_type, decompose_part, good_ned, part_nx, whole_part
from k4ep.sp import sp_recognize

RESULTS: dict[int, str] = {}


def report(n: int, ok: bool, detail: str):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


# -- corpus ------------------------------------------------------------------------

def _atlas_sample(count: int, seed: int = 0) -> list[Graph]:
    conn = [h for h in nx.graph_atlas_g()[1:] if h.number_of_nodes() <= 7 and nx.is_connected(h)]
    rng = random.Random(seed)
    picked = rng.sample(conn, count)
    return [Graph(h.nodes, h.edges) for h in picked]


def _family_graphs() -> list[tuple[str, Graph]]:
    out = []
    for s in range(50):
        out.append(("apexed-sp", gens.standard_apexed_sp(4 + s % 5, 2 + s % 4, s).g))
        out.append(("block-tree", gens.block_tree(3 + s % 3, s).g))
        out.append(("many-ears", gens.many_ears(5 + s % 6, s).g))
        out.append(("random-sp", gens.random_sp(s % 10, s)[0]))
    fixed = [("side-by-side", gens.side_by_side(3)), ("side-by-side", gens.side_by_side(6)),
             ("nested", gens.nested_config()), ("stacked", gens.stacked_config()),
             ("side", gens.side_config()), ("ladder", gens.ladder(1)[0]), ("fan", gens.fan(1)[0]),
             ("baseblock-star", gens.baseblock_star(1)), ("baseblock-star", gens.baseblock_star(2)),
             ("esslem-branches", gens.esslem_branches(1)), ("esslem-branches", gens.esslem_branches(2)),
             ("mader-branches", gens.mader_branches(1)), ("mader-branches", gens.mader_branches(2)),
             ("diamond-chain", gens.diamond_chain(1)), ("diamond-chain", gens.diamond_chain(2))]
    out += [(name, gad.g) for name, gad in fixed]
    return out


@lru_cache(maxsize=None)
def corpus() -> list[tuple[str, Graph]]:
    return [("atlas", g) for g in _atlas_sample(320)] + _family_graphs()


@lru_cache(maxsize=None)
def corpus_runs():
    """(name, graph, k, result, seconds) for every corpus graph and k in 1..3."""
    runs = []
    for name, g in corpus():
        for k in (1, 2, 3):
            t = time.perf_counter()
            res = pack_or_cover(g, k, "paper")
            runs.append((name, g, k, res, time.perf_counter() - t))
    return runs


def _certificate_failures(g: Graph, k: int, res) -> list[str]:
    """Independent replay: witnesses re-validated, covers re-searched."""
    if res.is_packing:
        ws = res.witnesses
        if len(ws) != k:
            return [f"{len(ws)} witnesses"]
        if not all(validate_k4_witness(g, w) for w in ws):
            return ["invalid witness"]
        if not witnesses_edge_disjoint(g, ws):
            return ["witnesses overlap"]
        return []
    rest = g.without_edges(res.cover)
    if not is_k4_free(rest):
        return ["cover misses a K4-subdivision"]
    if rest.m <= 30 and all_k4_subdivisions(rest):
        return ["exhaustive search finds a K4-subdivision after the cover"]
    if res.repairs:
        return [f"{res.repairs} repaired edges"]
    return []


# -- criteria ------------------------------------------------------------------------

def test_criterion_1_soundness():
    t0 = time.perf_counter()
    runs = corpus_runs()
    elapsed = time.perf_counter() - t0
    bad = [(name, k, why) for name, g, k, res, _ in runs for why in _certificate_failures(g, k, res)]
    n_graphs = len(corpus())
    covers = sum(1 for r in runs if not r[3].is_packing)
    ok = not bad and n_graphs >= 500 and elapsed <= 600
    report(1, ok, f"{n_graphs} graphs x 3 k, {covers} covers, {len(bad)} failures, {elapsed:.0f}s"
           + (f" first={bad[0]}" if bad else ""))


def test_criterion_2_duality():
    bad = []
    checked = 0
    cache = {}
    for name, g, k, res, _ in corpus_runs():
        if g.n > 10:
            continue
        if id(g) not in cache:
            nu, _ = exact_packing_number(g, g.m, edge_limit=40)
            tau, _ = exact_cover_number(g, edge_limit=40)
            if tau < nu:
                bad.append((name, "tau < nu"))
            cache[id(g)] = nu
            checked += 1
        nu = cache[id(g)]
        if res.is_packing and len(res.witnesses) > nu:
            bad.append((name, k, "packing exceeds nu"))
        if not res.is_packing and nu >= k:
            bad.append((name, k, "cover although nu >= k"))
    report(2, not bad and checked > 0, f"{checked} graphs with <= 10 vertices, {len(bad)} violations"
           + (f" first={bad[0]}" if bad else ""))


def _receipt_problems(rec, k: int) -> list[str]:
    out = []
    for r in rec.walk():
        if r.bound is not None and r.size > r.bound:
            out.append(f"{r.lemma}: {r.size} > {r.bound}")
        # the bounds are recomputed here rather than read from the receipt
        if r.lemma == "type1" and r.size > 6 * k * k:
            out.append(f"type1 size {r.size} > 6k^2")
        if r.lemma == "mader" and r.size > 2 * k - 2:
            out.append(f"mader size {r.size} > 2k-2")
    return out


def test_criterion_3_receipts():
    bad = []
    seen = {"type1": 0, "mader": 0}
    n_covers = 0
    for name, g, k, res, _ in corpus_runs():
        if res.is_packing:
            continue
        n_covers += 1
        bad += [(name, k, p) for p in _receipt_problems(res.receipt, k)]
        for r in res.receipt.walk():
            if r.lemma in seen:
                seen[r.lemma] += 1
    for h, _ in _small_parts(50, max_edges=14) + _mixed_parts(50):
        for k in (1, 2, 3):
            try:
                hm = hit_or_miss(h, k)
            except PackingFound:
                continue
            bad += [("part", k, p) for p in _receipt_problems(hm.receipt, k)]
            seen["type1"] += sum(1 for r in hm.receipt.walk() if r.lemma == "type1")
    sbs = []
    for ell in range(3, 13):
        gad = gens.side_by_side(ell)
        ws = pack_side_by_side(ApexedGraph(gad.g, gad.x), gad.ned(), gad.meta["parent"], gad.meta["x_ears"])
        if len(ws) != ell // 3 or not witnesses_edge_disjoint(gad.g, ws):
            sbs.append(ell)
    ok = not bad and not sbs
    report(3, ok, f"{n_covers} covers, {seen['type1']} type-I and {seen['mader']} Mader receipts, "
           f"side-by-side ell=3..12 exact; {len(bad) + len(sbs)} violations"
           + (f" first={(bad + sbs)[0]}" if bad or sbs else ""))


def _st_sp_label(g: Graph, s: int, t: int) -> bool:
    """Independent label: 2-terminal series-parallel iff G + st is
    2-connected and has no K4 minor."""
    h = g.to_networkx()
    h.add_edge(s, t)
    if h.number_of_nodes() < 3 or not nx.is_biconnected(h):
        return False
    plus = Graph(h.nodes, h.edges)
    return not all_k4_subdivisions(plus)


def _eppstein_instances():
    sp, non = [], []
    seed = 0
    while len(sp) < 200:
        g, s, t = gens.random_sp(seed % 5, seed, p_series=0.3 + 0.1 * (seed % 5))
        seed += 1
        if g.m <= 8:
            sp.append((g, s, t))
    rng = random.Random(7)
    while len(non) < 200:
        n = rng.randint(3, 6)
        pairs = rng.sample(list(combinations(range(n), 2)), rng.randint(2, min(8, n * (n - 1) // 2)))
        g = Graph(range(n), pairs)
        s, t = rng.sample(range(n), 2)
        if not _st_sp_label(g, s, t):
            non.append((g, s, t))
    return sp, non


def test_criterion_4_eppstein():
    t0 = time.perf_counter()
    sp, non = _eppstein_instances()
    bad = []
    for label, group in (("sp", sp), ("non-sp", non)):
        for g, s, t in group:
            tree = sp_recognize(g, s, t)
            neds = enumerate_neds(g, s, t)
            if (tree is not None) != bool(neds):
                bad.append((label, g.edge_pairs(), s, t))
            if tree is not None and not validate_ned(g, ned_from_sptree(tree), (s, t)):
                bad.append((label, "invalid ned", g.edge_pairs()))
            if (tree is not None) != (label == "sp"):
                bad.append((label, "disagrees with the independent label", g.edge_pairs(), s, t))
    elapsed = time.perf_counter() - t0
    report(4, not bad and elapsed <= 300,
           f"{len(sp)} SP + {len(non)} non-SP graphs, {len(bad)} violations, {elapsed:.0f}s"
           + (f" first={bad[0]}" if bad else ""))


def _small_parts(count: int, max_edges: int):
    """Whole parts of random standard apexed-SP graphs, plus the host graph."""
    out = []
    seed = 0
    while len(out) < count:
        gad = gens.standard_apexed_sp(1 + seed % 5, 2 + seed % 3, 1000 + seed)
        seed += 1
        ag = ApexedGraph(gad.g, gad.x)
        h = whole_part(ag, *gad.meta["terminals"])
        if len(h.edges) <= max_edges:
            out.append((h, gad))
    return out


def _mixed_parts(count: int, max_edges: int = 12):
    """Non-simple parts with few edges, drawn from decompositions of random
    apexed-SP graphs and spread as evenly as possible over types I-V."""
    buckets: dict[str, list] = {}
    for seed in range(40):
        gad = gens.standard_apexed_sp(4 + seed % 5, 3 + seed % 3, 300 + seed)
        ag = ApexedGraph(gad.g, gad.x)
        parts = _decomposition_parts(whole_part(ag, *gad.meta["terminals"]), cap=150)
        for p in sorted(parts, key=lambda p: sorted(p.edges)):
            if len(p.edges) <= max_edges and not p.is_simple:
                buckets.setdefault(classify_part_type(p).value, []).append((p, gad))
    out = []
    for i in range(count):
        for kind in sorted(buckets):
            # stride through each bucket so picks come from different instances
            b = buckets[kind]
            stride = max(1, len(b) // count)
            if i * stride < len(b) and len(out) < count:
                out.append(b[i * stride])
    return out


def _ned_parts(count: int):
    out = []
    seed = 0
    while len(out) < count:
        gad = gens.standard_apexed_sp(1 + seed % 5, 2 + seed % 4, 5000 + seed)
        seed += 1
        ag = ApexedGraph(gad.g, gad.x)
        h = whole_part(ag, *gad.meta["terminals"])
        if h.core.m <= 8:
            out.append(h)
    return out


def test_criterion_5_good_ned():
    bad = []
    parts = _ned_parts(100)
    for h in parts:
        d = good_ned(h)
        nxv = part_nx(h)
        best = max(x_ear_count(e, nxv) for e in enumerate_neds(h.core, h.s, h.t))
        if x_ear_count(d, nxv) != best:
            bad.append(("not optimal", x_ear_count(d, nxv), best))
        if not validate_ned(h.core, d, (h.s, h.t)):
            bad.append(("invalid",))
        if exchange_violations(d, nxv):
            bad.append(("exchange", exchange_violations(d, nxv)))
    report(5, not bad, f"{len(parts)} parts with <= 8 edges in H - X, {len(bad)} violations"
           + (f" first={bad[0]}" if bad else ""))


def test_criterion_6_constructive_packing():
    bad = []

    def check(tag, g, ws, want):
        if len(ws) != want or not all(validate_k4_witness(g, w) for w in ws) \
                or not witnesses_edge_disjoint(g, ws):
            bad.append((tag, len(ws), want))

    for ell in (3, 6, 9):
        gad = gens.side_by_side(ell)
        ws = pack_side_by_side(ApexedGraph(gad.g, gad.x), gad.ned(), gad.meta["parent"], gad.meta["x_ears"])
        check(f"side-by-side {ell}", gad.g, ws, ell // 3)
    for k in (1, 2):
        gad, spec = gens.ladder(k)
        check(f"ladder {k}", gad.g, pack_ladder(spec), k)
        gad, spec = gens.fan(k)
        check(f"fan {k}", gad.g, pack_fan(spec), k)
    for make in (gens.nested_config, gens.stacked_config, gens.side_config):
        gad = make()
        w = k4_from_descendants(ApexedGraph(gad.g, gad.x), gad.ned(), gad.meta["apex_ear"])
        check(gad.meta["family"], gad.g, [w], 1)
    report(6, not bad, f"side-by-side ell=3,6,9, ladder/fan k=1,2, three descendant configurations; "
           f"{len(bad)} failures" + (f" first={bad[0]}" if bad else ""))


def _decomposition_parts(h, cap: int = 400):
    seen = {h}
    stack = [h]
    while stack and len(seen) < cap:
        p = stack.pop()
        for _, a, b in decompose_part(p):
            for q in (a, b):
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
    return seen


def test_criterion_7_blueprint_closure():
    bad = []
    n_parts = n_modules = 0
    for seed in range(100):
        gad = gens.standard_apexed_sp(4 + seed % 4, 2 + seed % 3, seed)
        ag = ApexedGraph(gad.g, gad.x)
        parts = _decomposition_parts(whole_part(ag, *gad.meta["terminals"]))
        subs = all_k4_subdivisions(gad.g)
        n_parts += len(parts)
        for p in parts:
            for k in subs:
                trace = k & p.edges
                if not trace:
                    continue
                n_modules += 1
                try:
                    classify_module(p, trace, k)
                except Exception as err:
                    bad.append((seed, p, str(err)))
    report(7, not bad, f"100 instances, {n_parts} parts, {n_modules} traces classified, "
           f"{len(bad)} failures" + (f" first={bad[0]}" if bad else ""))


def test_criterion_8_hit_or_miss():
    t0 = time.perf_counter()
    bad = []
    emitted = found = 0
    parts = _mixed_parts(50)
    kinds = sorted({classify_part_type(h).value for h, _ in parts})
    for h, gad in parts:
        for k in (1, 2, 3):
            try:
                hm = hit_or_miss(h, k)
            except PackingFound as pf:
                found += 1
                if not (len(pf.witnesses) >= k and witnesses_edge_disjoint(gad.g, pf.witnesses)
                        and all(validate_k4_witness(gad.g, w) for w in pf.witnesses)):
                    bad.append(("bad packing", k))
                continue
            emitted += 1
            fails = check_hit_or_miss(h, hm.edges, k)
            if fails:
                bad.append((k, h, len(fails)))
    elapsed = time.perf_counter() - t0
    report(8, not bad and elapsed <= 600,
           f"{len(parts)} parts (types {','.join(kinds)}) x k=1..3: {emitted} sets checked, {found} packings, {len(bad)} failures, {elapsed:.0f}s"
           + (f" first={bad[0]}" if bad else ""))


def _s_path_left(g: Graph, S: set[int], removed) -> bool:
    h = g.without_edges(removed).to_networkx()
    return any(len(S & c) >= 2 for c in nx.connected_components(h))


def test_criterion_9_mader():
    bad = []
    counts = {"paths": 0, "cut": 0}
    for i in range(200):
        rng = random.Random(i)
        n = rng.randint(5, 9)
        h = nx.gnp_random_graph(n, rng.uniform(0.2, 0.6), seed=i)
        g = Graph(h.nodes, h.edges)
        size = 2 + i % 3
        k = 1 + (i // 3) % 3
        S = set(rng.sample(range(n), size))
        res = mader_s_paths(g, S, k)
        if (res.paths is None) == (res.cut is None):
            bad.append((i, "not exactly one branch"))
            continue
        if res.found_paths:
            counts["paths"] += 1
            if len(res.paths) != k or not paths_edge_disjoint(g, res.paths) \
                    or not all(is_s_path(g, p, S) and p[0] != p[-1] for p in res.paths):
                bad.append((i, "invalid paths"))
        else:
            counts["cut"] += 1
            if len(res.cut) > 2 * k - 2 or _s_path_left(g, S, res.cut):
                bad.append((i, "invalid cut"))
    report(9, not bad, f"200 instances, {counts['paths']} path and {counts['cut']} cut branches, "
           f"{len(bad)} failures" + (f" first={bad[0]}" if bad else ""))


if __name__ == "__main__":
    import sys

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
