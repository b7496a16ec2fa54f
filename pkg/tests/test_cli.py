import json

import pytest

from k4ep.certificate import to_certificate, verify_certificate
from k4ep.cli import main
from k4ep.cover import pack_or_cover
from k4ep.graph import format_edgelist, format_graph6, parse_edgelist

from conftest import complete, disjoint_k4s


@pytest.fixture
def files(tmp_path):
    def write(name, g):
        p = tmp_path / name
        p.write_text(format_edgelist(g))
        return str(p)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_detect_k4(files, capsys):
    code, out = run(capsys, "detect", "--input", files("k4.txt", complete(4)))
    assert code == 0 and out.strip() == "contains"
    code, out = run(capsys, "detect", "--input", files("k3.txt", complete(3)))
    assert code == 0 and out.strip() == "k4-free"


def test_detect_graph6(tmp_path, capsys):
    p = tmp_path / "k4.g6"
    p.write_text(format_graph6(complete(4)))
    code, out = run(capsys, "detect", "--format", "graph6", "--input", str(p))
    assert out.strip() == "contains"


def test_witness(files, capsys):
    code, out = run(capsys, "witness", "--emit", "json", "--input", files("k4.txt", complete(4)))
    assert code == 0 and len(json.loads(out)["witness"]["paths"]) == 6
    code, _ = run(capsys, "witness", "--input", files("k3.txt", complete(3)))
    assert code == 1


def test_pack_or_cover_two_k4s(files, capsys, tmp_path):
    path = files("two.txt", disjoint_k4s(2))
    code, out = run(capsys, "pack-or-cover", "--k", "2", "--emit", "json", "--input", path)
    cert = json.loads(out)
    assert code == 0 and cert["result"] == "packing" and len(cert["witnesses"]) == 2
    c = tmp_path / "cert.json"
    c.write_text(out)
    code, out = run(capsys, "verify", "--input", path, "--certificate", str(c))
    assert code == 0 and out.strip().endswith("ok")


@pytest.mark.parametrize("k", [1, 2, 3])
def test_round_trip(files, capsys, tmp_path, k):
    path = files("g.txt", disjoint_k4s(2))
    _, out = run(capsys, "pack-or-cover", "--k", str(k), "--emit", "json", "--input", path)
    c = tmp_path / "cert.json"
    c.write_text(out)
    code, _ = run(capsys, "verify", "--input", path, "--certificate", str(c))
    assert code == 0


def test_tampered_cover_prints_survivor(files, capsys, tmp_path):
    path = files("g.txt", disjoint_k4s(2))
    _, out = run(capsys, "pack-or-cover", "--k", "3", "--emit", "json", "--input", path)
    cert = json.loads(out)
    assert cert["result"] == "cover"
    cert["cover"] = cert["cover"][1:]
    c = tmp_path / "bad.json"
    c.write_text(json.dumps(cert))
    code, out = run(capsys, "verify", "--input", path, "--certificate", str(c))
    assert code != 0
    assert "surviving K4-subdivision" in out and "branch vertices" in out


def test_tampered_packing_rejected(files, capsys, tmp_path):
    path = files("g.txt", disjoint_k4s(2))
    _, out = run(capsys, "pack-or-cover", "--k", "2", "--emit", "json", "--input", path)
    cert = json.loads(out)
    cert["witnesses"][1] = cert["witnesses"][0]
    c = tmp_path / "bad.json"
    c.write_text(json.dumps(cert))
    code, out = run(capsys, "verify", "--input", path, "--certificate", str(c))
    assert code != 0 and "share an edge" in out


def test_verify_checks_receipt_sizes():
    g = disjoint_k4s(2)
    cert = to_certificate(g, 3, pack_or_cover(g, 3))
    cert["receipts"]["size"] += 1
    problems, _ = verify_certificate(g, cert)
    assert problems
    del cert["constants_profile"]
    problems, _ = verify_certificate(g, cert)
    assert "missing keys" in problems[0]


def test_certificate_uses_endpoint_pairs():
    g = disjoint_k4s(2)
    cert = to_certificate(g, 3, pack_or_cover(g, 3))
    assert all(len(p) == 2 and tuple(p) in set(g.edge_pairs()) for p in cert["cover"])


@pytest.mark.parametrize("family", ["side-by-side", "nested", "stacked", "side", "many-ears", "ladder",
                                    "fan", "apexed-sp", "block-tree", "baseblock-star",
                                    "esslem-branches", "mader-branches", "diamond-chain"])
def test_gen_families(capsys, family):
    code, out = run(capsys, "gen", family, "--seed", "3", "--k", "1")
    assert code == 0
    g = parse_edgelist(out)
    assert g.m > 0
    assert "# apex " in out


def test_gen_side_by_side_shape(capsys):
    _, out = run(capsys, "gen", "side-by-side", "--size", "3")
    g = parse_edgelist(out)
    # first ear with 6 inner vertices, three ears of one inner vertex, an x-link
    # on each, plus the apex and the closing edge
    assert g.n == 2 + 6 + 3 + 3 + 1
    assert g.m == 7 + 3 * 2 + 3 * 2 + 1


def test_ned_and_xears(tmp_path, capsys):
    _, out = run(capsys, "gen", "side-by-side", "--size", "3")
    p = tmp_path / "sbs.txt"
    p.write_text(out)
    code, out = run(capsys, "xears", "--input", str(p))
    assert code == 0 and out.strip() == "3"
    code, out = run(capsys, "ned", "--emit", "json", "--input", str(p))
    rows = json.loads(out)["ears"]
    assert code == 0 and sum(1 for r in rows if r["x_ear"]) == 3
    assert rows[0]["parent"] is None and all(r["parent"] is not None for r in rows[1:])


def test_ned_plain_sp(files, capsys):
    path = files("c4.txt", parse_edgelist("0 1\n1 2\n2 3\n3 0\n"))
    code, out = run(capsys, "ned", "--s", "0", "--t", "1", "--input", path)
    assert code == 0 and out.startswith("E0:")
    code, _ = run(capsys, "ned", "--s", "0", "--t", "1", "--input", files("k4.txt", complete(4)))
    assert code == 1


def test_oracles(files, capsys):
    path = files("two.txt", disjoint_k4s(2))
    assert run(capsys, "oracle", "nu", "--input", path)[1].strip() == "2"
    assert run(capsys, "oracle", "tau", "--input", path)[1].strip() == "2"
    assert run(capsys, "oracle", "vhs", "--input", path)[1].strip() == "2"
    code, _ = run(capsys, "oracle", "tau", "--limit", "5", "--input", path)
    assert code == 2


def test_blueprints_dump(capsys):
    code, out = run(capsys, "blueprints", "--emit", "json")
    data = json.loads(out)["blueprints"]
    assert code == 0 and data and all(b["provenance"] for b in data)


def test_pack_command(tmp_path, capsys):
    _, out = run(capsys, "gen", "many-ears", "--size", "10", "--seed", "2")
    p = tmp_path / "me.txt"
    p.write_text(out)
    code, out = run(capsys, "pack", "--emit", "json", "--input", str(p))
    assert code == 0 and len(json.loads(out)["witnesses"]) >= 1


def test_missing_apex_is_usage_error(files, capsys):
    code = main(["xears", "--input", files("k4.txt", complete(4))])
    assert code == 2
