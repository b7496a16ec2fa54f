import pytest
from hypothesis import given
from hypothesis import strategies as st

from k4ep import generators as gens
from k4ep.bounds import Receipt
from k4ep.covering import CoverError
from k4ep.cover import (ROOT, apex_gadget, block_order, cover_blocks, essential_and_baseblocks,
                        pack_or_cover, vertex_hitting_set)
from k4ep.k4 import is_k4_free
from k4ep.oracle import exact_packing_number, exact_vertex_hitting

from conftest import complete, disjoint_k4s, gnp


def test_k4_free_gives_empty_cover():
    g = complete(3)
    res = pack_or_cover(g, 2)
    assert not res.is_packing and res.cover == frozenset()
    assert res.problems(g, 2) == []


def test_single_k4(k4):
    res = pack_or_cover(k4, 1)
    assert res.is_packing and res.problems(k4, 1) == []
    res = pack_or_cover(k4, 2)
    assert not res.is_packing and len(res.cover) >= 1
    assert res.problems(k4, 2) == []


def test_two_disjoint_k4s():
    g = disjoint_k4s(2)
    res = pack_or_cover(g, 2)
    assert res.is_packing and len(res.witnesses) == 2
    res = pack_or_cover(g, 3)
    assert not res.is_packing
    assert is_k4_free(g.without_edges(res.cover))
    assert res.receipt.violations() == []


def test_rejects_bad_k(k4):
    with pytest.raises(ValueError):
        pack_or_cover(k4, 0)


@given(st.integers(0, 10_000), st.integers(5, 8), st.integers(1, 3))
def test_random_certificates_validate(seed, n, k):
    g = gnp(n, 0.55, seed)
    res = pack_or_cover(g, k)
    assert res.problems(g, k) == []
    if res.is_packing:
        assert len(res.witnesses) == k
    else:
        assert res.receipt.violations() == []
        if g.m <= 20:
            nu, _ = exact_packing_number(g, k)
            assert nu < k


@pytest.mark.parametrize("make, k, branch", [
    (lambda: gens.baseblock_star(2), 2, "baseblocks"),
    (lambda: gens.esslem_branches(2), 2, "fewessblocks:Y-x paths"),
    (lambda: gens.mader_branches(2), 2, "fewessblocks:Y-paths"),
    (lambda: gens.diamond_chain(2), 2, "fewessblocks:diamond chain"),
])
def test_block_gadgets_reach_their_branch(make, k, branch):
    gad = make()
    res = cover_blocks(gad.g, gad.x, k)
    assert res.is_packing
    assert res.branch == branch
    assert res.problems(gad.g, k) == []


def test_cover_blocks_requires_apex():
    g = disjoint_k4s(2)
    with pytest.raises(CoverError):
        cover_blocks(g, 0, 1)


@pytest.mark.parametrize("seed", range(12))
def test_essentials_gadget_matches_enumeration(seed):
    gad = gens.block_tree(3, seed)
    order = block_order(gad.g, gad.x)
    try:
        slow = essential_and_baseblocks(gad.g, order, method="enumerate")
    except Exception as err:  # enumeration budget
        pytest.skip(str(err))
    fast = essential_and_baseblocks(gad.g, order)
    assert fast.essential == slow.essential
    assert fast.baseblock == slow.baseblock


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("k", [1, 2, 3])
def test_block_tree_covers(seed, k):
    gad = gens.block_tree(4, seed)
    if is_k4_free(gad.g):
        return
    res = cover_blocks(gad.g, gad.x, k)
    assert res.problems(gad.g, k) == []
    assert res.repairs == 0


def test_block_order_root_is_virtual():
    gad = gens.baseblock_star(1)
    order = block_order(gad.g, gad.x)
    for b in range(len(order)):
        assert order.geq(b, ROOT)


def test_apex_gadget_lifts_witness():
    gad = gens.side_by_side(3)
    gg = apex_gadget(gad.g, gad.x)
    from k4ep.k4 import extract_k4_witness, validate_k4_witness
    w = extract_k4_witness(gg.g)
    assert validate_k4_witness(gad.g, gg.lift_witness(gad.g, w))


@pytest.mark.parametrize("seed", range(10))
def test_vertex_hitting_set_hits(seed):
    g = gnp(8, 0.6, seed)
    xs = vertex_hitting_set(g)
    assert is_k4_free(g.without_vertices(xs))
    assert len(xs) == len(exact_vertex_hitting(g))


def test_receipt_json_round_trip():
    g = disjoint_k4s(2)
    res = pack_or_cover(g, 3)
    assert Receipt.from_json(res.receipt.to_json()) == res.receipt
