"""Command-line front end.

    k4ep detect --input g.txt
    k4ep pack-or-cover --input g.txt --k 2 --emit json > cert.json
    k4ep verify --input g.txt --certificate cert.json
    k4ep gen ladder --k 1 > ladder.txt

Graphs are read as edge lists (one "u v" per line) or graph6. Edge lists
written by `gen` carry a "# apex N" comment, which commands that need an
apex use when --apex is not given.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Any

from . import generators as gens
from .blueprints import blueprint_catalog
from .bounds import PROFILES
from .certificate import to_certificate, verify_certificate
from .cover import pack_or_cover
from .graph import Graph, GraphError, format_edgelist, format_graph6, load_graph
from .k4 import K4Witness, extract_k4_witness, is_k4_free
from .ned import NED, ned_from_sptree, x_ear_mask
from .oracle import OracleLimit, exact_cover_number, exact_packing_number, exact_vertex_hitting
from .packing import PackingError, pack_many_ears
from .parts import ApexedGraph, PartError, good_ned, part_nx, whole_part, x_ear_number
from .sp import sp_recognize

APEX_RE = re.compile(r"^#\s*apex\s+(\d+)\s*$", re.MULTILINE)


class UsageError(Exception):
    pass


def _read_input(args) -> tuple[Graph, str]:
    if args.input in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(args.input) as fh:
            text = fh.read()
    return load_graph(text, args.format), text


def _apex(args, text: str) -> int:
    if args.apex is not None:
        return args.apex
    m = APEX_RE.search(text)
    if m is None:
        raise UsageError("no apex given: pass --apex or add a '# apex N' line")
    return int(m.group(1))


def _emit(args, data: Any, text: str):
    if args.emit == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _witness_text(w: K4Witness) -> str:
    lines = ["branch vertices: " + " ".join(map(str, w.branch_vertices))]
    lines += ["  " + "-".join(map(str, p)) for p in w.paths]
    return "\n".join(lines)


# -- commands ------------------------------------------------------------------

def cmd_detect(args) -> int:
    g, _ = _read_input(args)
    free = is_k4_free(g)
    verdict = "k4-free" if free else "contains"
    _emit(args, {"contains": not free}, verdict)
    return 0


def cmd_witness(args) -> int:
    g, _ = _read_input(args)
    w = extract_k4_witness(g)
    if w is None:
        _emit(args, {"witness": None}, "k4-free")
        return 1
    _emit(args, {"witness": w.to_json()}, _witness_text(w))
    return 0


def _ned_rows(d: NED, flags) -> list[dict]:
    rows = []
    for j, ear in enumerate(d.ears):
        rows.append({
            "index": j,
            "ear": list(ear),
            "parent": d.parents[j],
            "interval": list(d.intervals[j]) if d.intervals[j] is not None else None,
            "x_ear": flags[j] if flags is not None else None,
        })
    return rows


def cmd_ned(args) -> int:
    g, text = _read_input(args)
    if args.apex is not None or APEX_RE.search(text):
        ag = ApexedGraph(g, _apex(args, text))
        h = whole_part(ag, args.s, args.t)
        d = good_ned(h)
        flags = x_ear_mask(d, part_nx(h))
    else:
        if args.s is None or args.t is None:
            raise UsageError("ned without an apex needs --s and --t")
        tree = sp_recognize(g, args.s, args.t)
        if tree is None:
            print(f"not series-parallel with terminals {args.s}, {args.t}", file=sys.stderr)
            return 1
        d = ned_from_sptree(tree)
        flags = None
    rows = _ned_rows(d, flags)
    lines = []
    for r in rows:
        mark = " x-ear" if r["x_ear"] else ""
        iv = "-".join(map(str, r["interval"])) if r["interval"] else "-"
        lines.append(f"E{r['index']}: {'-'.join(map(str, r['ear']))}  parent={r['parent']}"
                     f"  interval={iv}{mark}")
    _emit(args, {"ears": rows}, "\n".join(lines))
    return 0


def cmd_xears(args) -> int:
    g, text = _read_input(args)
    ag = ApexedGraph(g, _apex(args, text))
    n = x_ear_number(whole_part(ag, args.s, args.t))
    _emit(args, {"x_ear_number": n}, str(n))
    return 0


def cmd_blueprints(args) -> int:
    cat = blueprint_catalog()
    lines = []
    for b in cat:
        tag = " exceptional" if b.exceptional else ""
        lines.append(f"{b.basic} [{b.category}] labels={''.join(lab or '.' for lab in b.graph.labels)}"
                     f" edges={sorted(b.graph.edges)}{tag}")
        lines += ["    " + p.describe() for p in b.provenance]
    _emit(args, {"blueprints": [b.to_json() for b in cat]}, "\n".join(lines))
    return 0


def cmd_pack(args) -> int:
    g, text = _read_input(args)
    ag = ApexedGraph(g, _apex(args, text))
    bad = ag.standard_violations()
    if bad:
        print("not in normal form: " + "; ".join(bad), file=sys.stderr)
        return 1
    res = pack_many_ears(ag, constants=args.constants)
    data = {"witnesses": [w.to_json() for w in res.witnesses], "lambda": res.lam,
            "target": res.target, "constants_profile": res.constants, "branches": res.branches}
    text_out = [f"lambda={res.lam} target={res.target} found={len(res.witnesses)}"]
    text_out += [_witness_text(w) for w in res.witnesses]
    _emit(args, data, "\n".join(text_out))
    return 0


def cmd_pack_or_cover(args) -> int:
    g, _ = _read_input(args)
    res = pack_or_cover(g, args.k, args.constants)
    cert = to_certificate(g, args.k, res)
    if res.is_packing:
        text = f"packing ({res.branch}): {len(res.witnesses)} witnesses\n"
        text += "\n".join(_witness_text(w) for w in res.witnesses)
    else:
        text = f"cover ({res.branch}): {len(cert['cover'])} edges\n"
        text += " ".join(f"{u}-{v}" for u, v in cert["cover"])
    _emit(args, cert, text)
    return 0


def cmd_oracle(args) -> int:
    g, _ = _read_input(args)
    limit = args.limit
    try:
        if args.what == "nu":
            cap = args.k if args.k is not None else g.m
            nu, ws = exact_packing_number(g, cap, **({"edge_limit": limit} if limit else {}))
            _emit(args, {"nu": nu, "witnesses": [w.to_json() for w in ws]}, str(nu))
        elif args.what == "tau":
            tau, cover = exact_cover_number(g, None, **({"edge_limit": limit} if limit else {}))
            pairs = sorted(sorted(g.ends(e)) for e in cover)
            _emit(args, {"tau": tau, "cover": pairs}, str(tau))
        else:
            hs = exact_vertex_hitting(g, **({"vertex_limit": limit} if limit else {}))
            _emit(args, {"vhs": len(hs), "vertices": sorted(hs)}, str(len(hs)))
    except OracleLimit as err:
        print(f"oracle limit: {err}", file=sys.stderr)
        return 2
    return 0


def _generate(args) -> tuple[gens.Gadget, list[str]]:
    """The requested instance plus the problems its validator reports."""
    fam, k, seed = args.family, args.k or 1, args.seed
    size = args.size
    if fam == "side-by-side":
        return gens.side_by_side(size or 3), []
    if fam == "nested":
        return gens.nested_config(size or 4), []
    if fam == "stacked":
        return gens.stacked_config(size or 7), []
    if fam == "side":
        return gens.side_config(size or 7), []
    if fam == "many-ears":
        gad = gens.many_ears(size or 12, seed)
        return gad, ApexedGraph(gad.g, gad.x).standard_violations()
    if fam == "ladder":
        gad, spec = gens.ladder(k)
        return gad, spec.validate()
    if fam == "fan":
        gad, spec = gens.fan(k)
        return gad, spec.validate()
    if fam == "apexed-sp":
        gad = gens.standard_apexed_sp(size or 6, args.links, seed)
        return gad, ApexedGraph(gad.g, gad.x).standard_violations()
    if fam == "block-tree":
        return gens.block_tree(size or 4, seed), []
    if fam == "baseblock-star":
        return gens.baseblock_star(size or k), []
    if fam == "esslem-branches":
        return gens.esslem_branches(k), []
    if fam == "mader-branches":
        return gens.mader_branches(k), []
    if fam == "diamond-chain":
        return gens.diamond_chain(k), []
    raise UsageError(f"unknown family {fam!r}")


FAMILIES = ("side-by-side", "nested", "stacked", "side", "many-ears", "ladder", "fan",
            "apexed-sp", "block-tree", "baseblock-star", "esslem-branches", "mader-branches",
            "diamond-chain")


def cmd_gen(args) -> int:
    gad, bad = _generate(args)
    if bad:
        print("generated instance fails validation: " + "; ".join(bad), file=sys.stderr)
        return 1
    if args.format == "graph6":
        # graph6 relabels vertices 0..n-1 in sorted order; generators already use 0..n-1
        print(format_graph6(gad.g))
        return 0
    meta = {k: v for k, v in gad.meta.items() if isinstance(v, (int, str))}
    head = f"# {gad.meta.get('family', args.family)} " + " ".join(
        f"{k}={v}" for k, v in sorted(meta.items()) if k != "family")
    out = head.rstrip() + "\n"
    if gad.x is not None:
        out += f"# apex {gad.x}\n"
    out += format_edgelist(gad.g)
    sys.stdout.write(out)
    return 0


def cmd_verify(args) -> int:
    g, _ = _read_input(args)
    with open(args.certificate) as fh:
        cert = json.load(fh)
    problems, survivor = verify_certificate(g, cert)
    for p in problems:
        print(f"violation: {p}")
    if survivor is not None:
        if args.emit == "json":
            print(json.dumps({"surviving_witness": survivor.to_json()}, indent=2))
        else:
            print("surviving K4-subdivision:")
            print(_witness_text(survivor))
    if problems:
        return 1
    print("ok")
    return 0


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="graph file (default: stdin)")
    common.add_argument("--format", choices=["edgelist", "graph6"], default="edgelist")
    common.add_argument("--k", type=int, default=None)
    common.add_argument("--constants", choices=sorted(PROFILES), default="paper")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--emit", choices=["json", "text"], default="text")
    common.add_argument("--limit", type=int, default=None, help="edge cap for the oracles")
    common.add_argument("--apex", type=int, default=None)

    p = argparse.ArgumentParser(prog="k4ep", description="Pack or cover K4-subdivisions.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    add("detect", cmd_detect, "does the graph contain a K4-subdivision")
    add("witness", cmd_witness, "print one K4-subdivision")
    for name, func, help_ in (("ned", cmd_ned, "nested ear decomposition"),
                              ("xears", cmd_xears, "x-ear number of G - x")):
        sp = add(name, func, help_)
        sp.add_argument("--s", type=int, default=None)
        sp.add_argument("--t", type=int, default=None)
    add("blueprints", cmd_blueprints, "dump the blueprint catalogue")
    add("pack", cmd_pack, "pack from many x-ears of an apexed graph")
    add("pack-or-cover", cmd_pack_or_cover, "k disjoint K4-subdivisions or a hitting set")
    sp = add("oracle", cmd_oracle, "brute-force nu, tau or vertex hitting number")
    sp.add_argument("what", choices=["nu", "tau", "vhs"])
    sp = add("gen", cmd_gen, "generate an instance")
    sp.add_argument("family", choices=FAMILIES)
    sp.add_argument("--size", type=int, default=None, help="family size parameter (ell, count, ...)")
    sp.add_argument("--links", type=int, default=4, help="x-links for apexed-sp")
    sp = add("verify", cmd_verify, "replay a JSON certificate against a graph")
    sp.add_argument("--certificate", required=True)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "pack-or-cover" and args.k is None:
        args.k = 1
    try:
        return args.func(args)
    except (UsageError, GraphError, PartError, PackingError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
