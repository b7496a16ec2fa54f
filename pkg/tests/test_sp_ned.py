import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k4ep.generators import random_sp
from k4ep.graph import Graph, GraphError
from k4ep.ned import (NED, good_ned_of, exchange_violations, ned_from_sptree, validate_ned,
                      x_ear_count)
from k4ep.oracle import enumerate_neds
from k4ep.sp import sp_recognize

from conftest import complete


def test_cycle_is_sp():
    g = Graph(range(4), [(0, 1), (1, 2), (2, 3), (3, 0)])
    tree = sp_recognize(g, 0, 1)
    assert tree is not None
    assert frozenset(leaf.eid for leaf in tree.leaves() if leaf.kind == "edge") == g.edge_ids


def test_k4_is_not_sp():
    g = complete(4)
    assert all(sp_recognize(g, s, t) is None for s, t in [(0, 1), (2, 3)])


def test_terminals_matter():
    # a path a-b-c with an extra parallel edge a-c: SP for (a, c) and for (a, b)
    g = Graph(range(3), [(0, 1), (1, 2), (0, 2)])
    assert sp_recognize(g, 0, 2) is not None
    # a star is not 2-terminal SP between two leaves
    star = Graph(range(4), [(0, 1), (0, 2), (0, 3)])
    assert sp_recognize(star, 1, 2) is None


@given(st.integers(0, 8), st.integers(0, 10_000))
def test_random_sp_recognised_and_ned_valid(n_ops, seed):
    g, s, t = random_sp(n_ops, seed)
    tree = sp_recognize(g, s, t)
    assert tree is not None
    d = ned_from_sptree(tree)
    assert validate_ned(g, d, (s, t))
    assert d.terminals == (s, t)


def test_ned_build_rejects_unnested():
    with pytest.raises(GraphError):
        NED.build([(0, 1, 2), (5, 6)])


def test_validate_rejects_missing_edge():
    g, s, t = random_sp(4, 1)
    d = ned_from_sptree(sp_recognize(g, s, t))
    extra, _ = g.with_edges([(s, g.fresh_vertex())])
    assert not validate_ned(extra, d, (s, t))


@given(st.integers(0, 4), st.integers(0, 10_000), st.integers(0, 2**16))
def test_good_ned_is_optimal_on_small_sp(n_ops, seed, mask):
    g, s, t = random_sp(n_ops, seed)
    verts = sorted(g.vertices)
    nxv = frozenset(v for i, v in enumerate(verts) if mask >> i & 1)
    tree = sp_recognize(g, s, t)
    d = good_ned_of(tree, nxv)
    assert validate_ned(g, d, (s, t))
    assert exchange_violations(d, nxv) == []
    best = max(x_ear_count(e, nxv) for e in enumerate_neds(g, s, t, edge_limit=11))
    assert x_ear_count(d, nxv) == best


def test_good_ned_deterministic():
    rng = random.Random(5)
    g, s, t = random_sp(6, 3)
    nxv = frozenset(v for v in g.vertices if rng.random() < 0.5)
    tree = sp_recognize(g, s, t)
    assert good_ned_of(tree, nxv) == good_ned_of(sp_recognize(g, s, t), nxv)
