from hypothesis import given

from k4ep.graph import Graph
from k4ep.k4 import (K4Witness, extract_k4_witness, is_k4_free, minimal_k4_edges, validate_k4_witness,
                     witness_from_edges, witnesses_edge_disjoint)
from k4ep.oracle import all_k4_subdivisions

from conftest import complete, disjoint_k4s, small_graphs


def test_small_cases(k4):
    assert not is_k4_free(k4)
    assert is_k4_free(k4.without_edges([0]))
    assert is_k4_free(complete(3))
    assert not is_k4_free(complete(5))


def test_subdivided_k4_contains():
    # K4 with the edge 0-1 subdivided twice
    g = Graph(range(6), [(0, 4), (4, 5), (5, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    w = extract_k4_witness(g)
    assert w is not None and validate_k4_witness(g, w)
    assert w.branch_vertices == (0, 1, 2, 3)


def test_wheel_and_k23():
    wheel = Graph(range(5), [(0, i) for i in range(1, 5)] + [(1, 2), (2, 3), (3, 4), (4, 1)])
    assert not is_k4_free(wheel)
    k23 = Graph(range(5), [(a, b) for a in (0, 1) for b in (2, 3, 4)])
    assert is_k4_free(k23)


@given(small_graphs(max_n=6))
def test_detection_agrees_with_exhaustive_search(g):
    assert is_k4_free(g) == (not all_k4_subdivisions(g))


@given(small_graphs(max_n=7))
def test_extracted_witness_validates(g):
    w = extract_k4_witness(g)
    if w is None:
        assert is_k4_free(g)
    else:
        assert validate_k4_witness(g, w)
        assert witness_from_edges(g, w.edge_ids(g)) == w


@given(small_graphs(max_n=7))
def test_minimal_edges_are_a_subdivision(g):
    if is_k4_free(g):
        return
    es = minimal_k4_edges(g)
    w = witness_from_edges(g, es)
    assert w.edge_ids(g) == frozenset(es)


def test_witness_json_round_trip(k4):
    w = extract_k4_witness(k4)
    assert K4Witness.from_json(w.to_json()) == w


def test_tampered_witness_rejected(k4):
    w = extract_k4_witness(k4)
    bad = K4Witness(w.branch_vertices, (w.paths[0][::-1],) + w.paths[1:])
    assert not validate_k4_witness(k4, bad)
    missing = k4.without_edges([k4.edge_id(*w.paths[0][:2])])
    assert not validate_k4_witness(missing, w)


def test_disjointness():
    g = disjoint_k4s(2)
    ws = [extract_k4_witness(g, [g.edge_id(u, v) for u, v in g.edge_pairs() if u < 4]),
          extract_k4_witness(g, [g.edge_id(u, v) for u, v in g.edge_pairs() if u >= 4])]
    assert witnesses_edge_disjoint(g, ws)
    assert not witnesses_edge_disjoint(g, [ws[0], ws[0]])
