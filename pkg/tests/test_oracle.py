import pytest
from hypothesis import given

from k4ep.k4 import is_k4_free, validate_k4_witness
from k4ep.oracle import (OracleLimit, all_k4_subdivisions, exact_cover_number, exact_packing_number,
                         exact_vertex_hitting)

from conftest import complete, disjoint_k4s, small_graphs


def test_k4_counts(k4):
    assert len(all_k4_subdivisions(k4)) == 1
    assert exact_packing_number(k4, 5)[0] == 1
    assert exact_cover_number(k4)[0] == 1
    assert len(exact_vertex_hitting(k4)) == 1


def test_k5_values():
    g = complete(5)
    # every K4-subdivision needs at least 6 of the 10 edges
    assert exact_packing_number(g, 5)[0] == 1
    # a K4-minor-free graph on 5 vertices has at most 2 * 5 - 3 = 7 edges
    tau, cover = exact_cover_number(g)
    assert tau == 3 and is_k4_free(g.without_edges(cover))
    assert len(exact_vertex_hitting(g)) == 2


def test_disjoint_copies():
    g = disjoint_k4s(3)
    nu, ws = exact_packing_number(g, 5)
    assert nu == 3 and all(validate_k4_witness(g, w) for w in ws)
    assert exact_cover_number(g)[0] == 3


def test_limits():
    with pytest.raises(OracleLimit):
        exact_packing_number(complete(8), 2)
    with pytest.raises(OracleLimit):
        exact_cover_number(complete(7))


@given(small_graphs(max_n=6, max_m=12))
def test_weak_duality(g):
    nu, _ = exact_packing_number(g, g.m)
    tau, cover = exact_cover_number(g)
    assert tau >= nu
    assert is_k4_free(g.without_edges(cover))
    assert len(cover) == tau


def test_cover_cap_reports_excess():
    g = complete(5)
    assert exact_cover_number(g, cap=2) == (3, frozenset())
