import json
import re

import pytest

from circsep import cli
from circsep.geom import Circle, Point2
from circsep.oracle import OracleCircle


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_maxgap_preset(tmp_path, capsys):
    f = tmp_path / "mg.json"
    assert run(["gen", "--kind", "maxgap", "--n", "4", "--output", str(f)], capsys)[0] == 0
    doc = json.loads(f.read_text())
    assert doc["P"] == [[[2.5, 2.5], [2.5, 2.5]]]
    assert doc["Q"][-1] == [[0.0, 5.0], [5.0, 5.0]]
    assert [q[1][0] for q in doc["Q"][:-1]] == [0.0, 1.0, 4.0, 5.0]


def test_gen_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        run(["gen", "--kind", "random", "--n", "10", "--seed", "7", "--output", str(f)], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_gen_rejects_small_n(capsys):
    code, _, err = run(["gen", "--kind", "random", "--n", "1"], capsys)
    assert code == 2 and "at least 2" in err
    assert run(["gen", "--kind", "spiral", "--n", "5"], capsys)[0] == 2


@pytest.mark.parametrize("kind,n", [("random", 2), ("random", 50), ("random", 1000), ("maxgap", 4), ("maxgap", 300), ("equispaced", 20)])
def test_round_trip(tmp_path, capsys, kind, n):
    inst, res = tmp_path / "i.json", tmp_path / "r.json"
    assert run(["gen", "--kind", kind, "--n", str(n), "--seed", "3", "--output", str(inst)], capsys)[0] == 0
    assert run(["find", "--input", str(inst), "--output", str(res)], capsys)[0] == 0
    doc = cli.parse_result(res.read_text())
    assert doc["summary"]["count"] == len(doc["records"])
    for rec in doc["records"]:
        assert set(rec) >= {"center", "radius", "inside", "condition", "contacts", "source"}
        assert rec["condition"] in {"C1", "C1p", "C1pp", "C2", "C2p", "C2pp"}
        assert rec["source"]["kind"] in {"vertex", "edge"}
        for k in rec["contacts"]:
            assert k["set"] in {"P", "Q"} and len(k["point"]) == 2


def test_maxgap_find_output(tmp_path, capsys):
    inst = tmp_path / "i.json"
    run(["gen", "--kind", "maxgap", "--n", "4", "--output", str(inst)], capsys)
    code, out, err = run(["find", "--input", str(inst), "--no-timing", "--oracle-check"], capsys)
    assert code == 0 and "oracle check passed" in err
    doc = json.loads(out)
    largest = doc["records"][doc["summary"]["largest_index"]]
    assert largest["center"] == pytest.approx([2.5, 2.275])
    assert largest["radius"] == pytest.approx(2.725)
    assert largest["condition"] == "C1"
    assert re.search(r"2\.27499999999999\d\d|2\.2750000000000\d\d\d", out)  # 17 significant digits


def test_byte_stable(tmp_path, capsys):
    inst = tmp_path / "i.json"
    run(["gen", "--kind", "random", "--n", "80", "--seed", "2", "--output", str(inst)], capsys)
    outs = set()
    for threads in ("1", "1", "3"):
        code, out, _ = run(["find", "--input", str(inst), "--no-timing", "--threads", threads], capsys)
        assert code == 0
        outs.add(out)
    assert len(outs) == 1


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["find", "--input", str(bad)], capsys)[0] == 2
    empty = tmp_path / "empty.json"
    empty.write_text('{"P": [], "Q": [[[0, 0], [1, 0]]]}')
    code, _, err = run(["find", "--input", str(empty)], capsys)
    assert code == 2 and "P must be nonempty" in err
    shape = tmp_path / "shape.json"
    shape.write_text('{"P": [[1, 2]], "Q": [[[0, 0], [1, 0]]]}')
    assert run(["find", "--input", str(shape)], capsys)[0] == 2
    assert run(["find", "--input", str(tmp_path / "missing.json")], capsys)[0] == 2
    cross = tmp_path / "cross.json"
    cross.write_text('{"P": [[[0, 0], [2, 2]]], "Q": [[[0, 2], [2, 0]]]}')
    code, _, err = run(["find", "--input", str(cross)], capsys)
    assert code == 3 and "P[0] and Q[0]" in err
    assert run(["find"], capsys)[0] == 2


def test_oracle_mismatch_exit(tmp_path, capsys, monkeypatch):
    inst = tmp_path / "i.json"
    run(["gen", "--kind", "maxgap", "--n", "4", "--output", str(inst)], capsys)
    fake = [OracleCircle(Circle(Point2(9.0, 9.0), 1.0), "P", (), "C1")]
    monkeypatch.setattr(cli, "oracle_enumerate", lambda P, Q: fake)
    code, _, err = run(["find", "--input", str(inst), "--oracle-check"], capsys)
    assert code == 4 and "missing" in err and "extra" in err


def test_svg(tmp_path, capsys):
    inst, svg = tmp_path / "i.json", tmp_path / "o.svg"
    # only a Q-inside circle exists here: centered at the origin through the four P sites
    doc = {
        "P": [[[-3, 0], [-3, 0]], [[3, 0], [3, 0]], [[0, 3], [0, 3]], [[-1, -3], [1, -3]]],
        "Q": [[[0, 0.5], [0, 0.5]], [[-0.5, -0.5], [0.5, -0.6]]],
    }
    inst.write_text(json.dumps(doc))
    assert run(["find", "--input", str(inst), "--svg", str(svg)], capsys)[0] == 0
    text = svg.read_text()
    assert text.startswith("<svg") and "viewBox" in text
    assert 'r="3" fill="none"' in text and "stroke-dasharray" in text
    assert text.count("<line") == 2
    mg = tmp_path / "mg.json"
    run(["gen", "--kind", "maxgap", "--n", "4", "--output", str(mg)], capsys)
    assert run(["find", "--input", str(mg), "--svg", str(svg)], capsys)[0] == 0
    assert "stroke-dasharray" not in svg.read_text()  # P-inside circles are solid


def test_bench_format(capsys):
    code, out, _ = run(["bench", "--n-list", "64,128", "--seed", "1"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 4
    assert re.fullmatch(r"ratio 64 -> 128: \d+\.\d\d", lines[-1])
    assert run(["bench", "--n-list", "a,b"], capsys)[0] == 2
