import pytest

from k4ep.blueprints import (Blueprint, LabelledGraph, basic_blueprint, blueprint_catalog, canonical_form,
                             classify_module, find_blueprint)
from k4ep.generators import standard_apexed_sp
from k4ep.graph import GraphError
from k4ep.oracle import all_k4_subdivisions
from k4ep.parts import ApexedGraph, whole_part


def test_catalogue_is_deduplicated():
    cat = blueprint_catalog()
    keys = [b.key for b in cat]
    assert len(keys) == len(set(keys))
    assert all(isinstance(b, Blueprint) and b.provenance for b in cat)


def test_catalogue_json_fields():
    for b in blueprint_catalog()[:10]:
        d = b.to_json()
        assert set(d) == {"labels", "edges", "basic", "exceptional", "category", "provenance"}


def test_canonical_form_is_label_invariant():
    a = LabelledGraph(("s", None, "x"), frozenset({(0, 1), (1, 2)}))
    b = LabelledGraph(("x", None, "s"), frozenset({(0, 1), (1, 2)}))
    assert canonical_form(a)[0] == canonical_form(b)[0]
    c = LabelledGraph(("t", None, "x"), frozenset({(0, 1), (1, 2)}))
    assert canonical_form(a)[0] != canonical_form(c)[0]


def test_basic_blueprint_lookup():
    bp = basic_blueprint("a")
    assert find_blueprint(bp.graph) == bp
    with pytest.raises(KeyError):
        basic_blueprint("no-such-blueprint")


@pytest.mark.parametrize("seed", range(6))
def test_every_trace_has_a_blueprint(seed):
    gad = standard_apexed_sp(5, 3, seed)
    ag = ApexedGraph(gad.g, gad.x)
    h = whole_part(ag, *gad.meta["terminals"])
    for k in all_k4_subdivisions(gad.g):
        trace = k & h.edges
        rec = classify_module(h, trace, k)
        assert rec.edges == trace
        assert set(rec.correspondence) <= h.vertices


def test_classify_rejects_wrong_trace():
    gad = standard_apexed_sp(5, 3, 0)
    ag = ApexedGraph(gad.g, gad.x)
    h = whole_part(ag, *gad.meta["terminals"])
    k = all_k4_subdivisions(gad.g)[0]
    with pytest.raises(GraphError):
        classify_module(h, frozenset(list(k & h.edges)[:1]), k)
