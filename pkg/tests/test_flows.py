import networkx as nx
from hypothesis import given
from hypothesis import strategies as st

from k4ep.flows import (bipartite_matching_or_cover, edge_flow, is_s_path, mader_s_paths, menger_edge,
                        paths_edge_disjoint, separates)
from k4ep.graph import Graph

from conftest import complete, gnp, small_graphs


def s_path_exists(g: Graph, S, removed) -> bool:
    """Independent check: an S-path exists iff some component holds two S-vertices."""
    h = g.without_edges(removed).to_networkx()
    return any(len(S & c) >= 2 for c in nx.connected_components(h))


@given(small_graphs(max_n=7), st.integers(1, 5))
def test_menger_branch_validates(g, k):
    vs = sorted(g.vertices)
    a, b = vs[0], vs[-1]
    res = menger_edge(g, a, b, k)
    lam = nx.edge_connectivity(g.to_networkx(), a, b) if g.m else 0
    if res.found_paths:
        assert len(res.paths) == k and lam >= k
        assert paths_edge_disjoint(g, res.paths)
        assert all(p[0] == a and p[-1] == b for p in res.paths)
    else:
        assert len(res.cut) < k and len(res.cut) == lam
        assert separates(g, res.cut, [a], [b])


def test_edge_flow_max_on_k5():
    g = complete(5)
    paths, _ = edge_flow(g, [0], [1])
    assert len(paths) == 4


@given(st.integers(0, 10_000), st.integers(2, 4), st.integers(1, 3))
def test_mader_branch_validates(seed, size, k):
    g = gnp(7, 0.35, seed)
    S = set(sorted(g.vertices)[:size])
    res = mader_s_paths(g, S, k)
    assert (res.paths is None) != (res.cut is None)
    if res.found_paths:
        assert len(res.paths) == k
        assert paths_edge_disjoint(g, res.paths)
        assert all(is_s_path(g, p, S) for p in res.paths)
    else:
        assert len(res.cut) <= 2 * k - 2
        assert not s_path_exists(g, S, res.cut)


def test_koenig_branches():
    pairs = [(0, "a"), (1, "a"), (2, "a")]
    assert bipartite_matching_or_cover(pairs, 1).matching is not None
    res = bipartite_matching_or_cover(pairs, 2)
    assert res.matching is None and res.cover == {("R", "a")}
