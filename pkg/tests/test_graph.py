import networkx as nx
import pytest
from hypothesis import given

from k4ep.graph import (Graph, GraphError, blocks, format_edgelist, format_graph6, is_two_connected,
                        load_graph, parse_edgelist, parse_graph6)

from conftest import complete, small_graphs


def test_loops_and_parallel_edges_rejected():
    with pytest.raises(GraphError):
        Graph([0], [(0, 0)])
    with pytest.raises(GraphError):
        Graph([0, 1], [(0, 1), (1, 0)])


def test_edge_ids_survive_deletion():
    g = complete(4)
    e = g.edge_id(2, 3)
    h = g.without_vertices([0])
    assert h.edge_id(2, 3) == e
    assert h.ends(e) == (2, 3)
    h2, new = h.with_edges([(1, 5)])
    assert new[0] >= g.next_edge_id
    assert e in h2.edge_ids


def test_derived_graphs_do_not_share_state():
    g = complete(4)
    h = g.without_edges([g.edge_id(0, 1)])
    assert g.has_edge(0, 1) and not h.has_edge(0, 1)
    assert g.m == 6 and h.m == 5


def test_edge_subgraph_keeps_extra_vertices():
    g = complete(4)
    h = g.edge_subgraph([g.edge_id(0, 1)], extra_vertices=[3])
    assert h.vertices == {0, 1, 3}
    assert h.m == 1


def test_parse_edgelist_comments_and_isolated():
    g = parse_edgelist("# a comment\n0 1\n1 2  # trailing\n7\n")
    assert g.vertices == {0, 1, 2, 7}
    assert g.m == 2
    with pytest.raises(GraphError):
        parse_edgelist("0 1 2\n")
    with pytest.raises(GraphError):
        parse_edgelist("a b\n")


@given(small_graphs())
def test_edgelist_round_trip(g):
    assert parse_edgelist(format_edgelist(g)) == g


@given(small_graphs())
def test_graph6_round_trip(g):
    h = parse_graph6(format_graph6(g))
    assert nx.is_isomorphic(h.to_networkx(), g.to_networkx())


def test_load_graph_unknown_format():
    with pytest.raises(GraphError):
        load_graph("0 1", "dot")


@given(small_graphs())
def test_blocks_partition_edges(g):
    bd = blocks(g)
    seen = [e for b in bd.blocks for e in b]
    assert sorted(seen) == sorted(g.edge_ids)
    assert bd.cutvertices == set(nx.articulation_points(g.to_networkx()))
    for i, b in enumerate(bd.blocks):
        sub = g.edge_subgraph(b)
        assert len(b) == 1 or is_two_connected(sub)
        for c in bd.block_cuts[i]:
            assert i in bd.cut_blocks[c]


@given(small_graphs())
def test_components_match_networkx(g):
    ours = sorted(sorted(c) for c in g.components())
    theirs = sorted(sorted(c) for c in nx.connected_components(g.to_networkx()))
    assert ours == theirs
