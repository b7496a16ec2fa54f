"""JSON certificates for pack-or-cover results.

Edges are written as endpoint pairs, so a certificate can be checked
against any copy of the graph regardless of how edge ids were assigned.
"""

from __future__ import annotations

from typing import Any

from .bounds import Receipt
from .cover import PackOrCoverResult
from .graph import Graph
from .k4 import K4Witness, extract_k4_witness, validate_k4_witness, witnesses_edge_disjoint

SCHEMA_KEYS = ("result", "k", "witnesses", "cover", "receipts", "constants_profile")


def to_certificate(g: Graph, k: int, res: PackOrCoverResult) -> dict[str, Any]:
    out: dict[str, Any] = {
        "result": "packing" if res.is_packing else "cover",
        "k": k,
        "witnesses": [w.to_json() for w in res.witnesses or []],
        "cover": sorted(sorted(g.ends(e)) for e in res.cover or ()),
        "receipts": res.receipt.to_json() if res.receipt else None,
        "constants_profile": res.constants,
        "branch": res.branch,
        "repairs": res.repairs,
    }
    if res.notes:
        out["notes"] = list(res.notes)
    return out


def verify_certificate(g: Graph, cert: dict[str, Any]) -> tuple[list[str], K4Witness | None]:
    """Problems with the certificate (empty when it is valid), plus a
    surviving K4-subdivision when a cover fails to hit everything."""
    missing = [key for key in SCHEMA_KEYS if key not in cert]
    if missing:
        return [f"missing keys {missing}"], None
    kind = cert["result"]
    k = cert["k"]
    if kind == "packing":
        try:
            ws = [K4Witness.from_json(d) for d in cert["witnesses"]]
        except (KeyError, TypeError, ValueError) as err:
            return [f"malformed witness: {err}"], None
        out = []
        if len(ws) != k:
            out.append(f"{len(ws)} witnesses for k = {k}")
        for i, w in enumerate(ws):
            if not validate_k4_witness(g, w):
                out.append(f"witness {i} is not a K4-subdivision of the graph")
        if not out and not witnesses_edge_disjoint(g, ws):
            out.append("witnesses share an edge")
        return out, None
    if kind != "cover":
        return [f"unknown result {kind!r}"], None
    eids = set()
    for pair in cert["cover"]:
        u, v = pair
        if not g.has_edge(u, v):
            return [f"cover edge {u}-{v} is not in the graph"], None
        eids.add(g.edge_id(u, v))
    w = extract_k4_witness(g.without_edges(eids))
    if w is not None:
        return ["a K4-subdivision avoids the cover"], w
    problems = []
    if cert["receipts"] is not None:
        rec = Receipt.from_json(cert["receipts"])
        if rec.size != len(eids):
            problems.append(f"receipt size {rec.size} differs from cover size {len(eids)}")
        for bad in rec.violations():
            problems.append(f"receipt {bad.lemma}: size {bad.size} exceeds bound {bad.bound}")
    return problems, None
