import pytest

from k4ep.bounds import BoundTable
from k4ep.covering import PackingFound, hit_or_miss
from k4ep.generators import standard_apexed_sp
from k4ep.k4 import validate_k4_witness, witnesses_edge_disjoint
from k4ep.oracle import check_hit_or_miss
from k4ep.parts import ApexedGraph, classify_part_type, decompose_part, whole_part


def _parts(seed):
    gad = standard_apexed_sp(4 + seed % 4, 2 + seed % 3, seed)
    ag = ApexedGraph(gad.g, gad.x)
    h = whole_part(ag, *gad.meta["terminals"])
    out = [h]
    for _, a, b in decompose_part(h)[:3]:
        out += [p for p in (a, b) if p.edges]
    return gad.g, out


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("k", [1, 2])
def test_hit_or_miss_passes_module_check(seed, k):
    g, parts = _parts(seed)
    for p in parts:
        try:
            res = hit_or_miss(p, k)
        except PackingFound as found:
            assert len(found.witnesses) >= k
            assert all(validate_k4_witness(g, w) for w in found.witnesses)
            assert witnesses_edge_disjoint(g, found.witnesses)
            continue
        assert res.edges <= g.edge_ids  # hit-or-miss sets may use edges outside the part
        assert check_hit_or_miss(p, res.edges, k) == []
        assert res.receipt.violations() == []
        assert res.receipt.size == len(res.edges)


def test_type1_receipt_bound():
    for seed in range(30):
        g, parts = _parts(seed)
        for p in parts:
            if p.is_simple or classify_part_type(p).value != "I":
                continue
            for k in (1, 2, 3):
                try:
                    res = hit_or_miss(p, k)
                except PackingFound:
                    continue
                for r in res.receipt.walk():
                    if r.lemma == "type1":
                        assert r.size <= BoundTable(k).type1()
