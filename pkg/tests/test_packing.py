import pytest
from hypothesis import given
from hypothesis import strategies as st

from k4ep import generators as gens
from k4ep.k4 import validate_k4_witness, witnesses_edge_disjoint
from k4ep.oracle import exact_packing_number
from k4ep.packing import (PackingError, k4_from_descendants, pack_fan, pack_ladder, pack_many_ears,
                          pack_side_by_side, packing_upper_bound, search_packing)
from k4ep.parts import ApexedGraph

from conftest import disjoint_k4s, gnp


def _valid(g, ws):
    return all(validate_k4_witness(g, w) for w in ws) and witnesses_edge_disjoint(g, ws)


@pytest.mark.parametrize("ell", [3, 4, 5, 6])
def test_side_by_side_count(ell):
    gad = gens.side_by_side(ell)
    ag = ApexedGraph(gad.g, gad.x)
    ws = pack_side_by_side(ag, gad.ned(), gad.meta["parent"], gad.meta["x_ears"])
    assert len(ws) == ell // 3
    assert _valid(gad.g, ws)


def test_side_by_side_rejects_non_child():
    gad = gens.side_by_side(3)
    ag = ApexedGraph(gad.g, gad.x)
    with pytest.raises(PackingError):
        pack_side_by_side(ag, gad.ned(), 1, [2])


@pytest.mark.parametrize("k", [1, 2])
def test_ladder_and_fan(k):
    gad, spec = gens.ladder(k)
    assert spec.validate() == []
    ws = pack_ladder(spec)
    assert len(ws) == k and _valid(gad.g, ws)
    gad, spec = gens.fan(k)
    assert spec.validate() == []
    ws = pack_fan(spec)
    assert len(ws) == k and _valid(gad.g, ws)


@pytest.mark.parametrize("make", [gens.nested_config, gens.stacked_config, gens.side_config])
def test_k4_from_descendants(make):
    gad = make()
    ag = ApexedGraph(gad.g, gad.x)
    w = k4_from_descendants(ag, gad.ned(), gad.meta["apex_ear"])
    assert validate_k4_witness(gad.g, w)


def test_k4_from_descendants_needs_seven():
    gad = gens.stacked_config(depth=3)
    ag = ApexedGraph(gad.g, gad.x)
    with pytest.raises(PackingError):
        k4_from_descendants(ag, gad.ned(), 0)


def test_many_ears_small_profile_best_effort():
    gad = gens.many_ears(12, seed=1)
    ag = ApexedGraph(gad.g, gad.x)
    assert ag.is_standard()
    res = pack_many_ears(ag, constants="paper")
    assert res.target == res.lam // 200 + 1
    assert len(res.witnesses) >= res.target
    assert _valid(gad.g, res.witnesses)
    small = pack_many_ears(ag, constants="small")
    assert _valid(gad.g, small.witnesses)


def test_search_packing_disjoint_k4s():
    g = disjoint_k4s(3)
    res = search_packing(g, 3)
    assert len(res.witnesses) == 3 and _valid(g, res.witnesses)
    assert packing_upper_bound(g) == 3


@given(st.integers(0, 10_000), st.integers(1, 3))
def test_search_packing_never_beats_oracle(seed, k):
    g = gnp(7, 0.6, seed)
    res = search_packing(g, k)
    assert _valid(g, res.witnesses)
    if g.m <= 18:
        nu, _ = exact_packing_number(g, k)
        assert len(res.witnesses) <= nu
        if res.exact:
            assert min(len(res.witnesses), k) == min(nu, k)
