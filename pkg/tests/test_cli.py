import json

import pytest

from lmpkit.cli import run


@pytest.fixture
def s3(tmp_path):
    path = tmp_path / "s3.json"
    assert run(["gallery", "build", "s3", "--out", str(path)]) == 0
    return path


def test_semipullback_demo_prints_obstruction(capsys):
    assert run(["semipullback", "demo", "--profile", "0,1"]) == 0
    assert "m0(V)=0, m1(V)=1" in capsys.readouterr().out


def test_semipullback_demo_without_gap_reports_property_failure(capsys):
    assert run(["semipullback", "demo", "--profile", "1/3,1/3"]) == 2


def test_event_bisimilarity_of_s_and_t(s3, capsys):
    capsys.readouterr()
    assert run(["bisim", "event", str(s3), "--pair", "s", "t"]) == 0
    assert "event-bisimilar: yes" in capsys.readouterr().out


def test_refute_then_verify(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    assert run(["bisim", "refute", "--full-s3", "--pair", "s", "t", "--out", str(cert)]) == 0
    assert run(["bisim", "verify-cert", str(cert)]) == 0
    assert "pass" in capsys.readouterr().out


def test_verify_tampered_certificate_fails(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    run(["bisim", "refute", "--pair-sum", "--samples", "50", "--out", str(cert)])
    data = json.loads(cert.read_text())
    data["steps"][-1]["right"] = "1/3"
    cert.write_text(json.dumps(data))
    capsys.readouterr()
    assert run(["bisim", "verify-cert", str(cert), "--json"]) == 2
    assert json.loads(capsys.readouterr().out)["failed_step"] == 4


def test_check_relation_exit_codes(s3, tmp_path):
    rel = tmp_path / "rel.json"
    rel.write_text(json.dumps({"pairs": [["s", "t"]]}))
    assert run(["bisim", "check", str(s3), "--relation", str(rel)]) == 2
    rel.write_text("[]")
    assert run(["bisim", "check", str(s3), "--relation", str(rel)]) == 0


def test_logic_commands(s3, tmp_path, capsys):
    capsys.readouterr()
    assert run(["logic", "eval", str(s3), "<inf>_{1/2} T", "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == ["s", "t"]
    dot = tmp_path / "equiv.dot"
    assert run(["logic", "equiv", str(s3), "--dot", str(dot)]) == 0
    assert dot.read_text().startswith("digraph partition")
    assert run(["logic", "eval", str(s3), "<inf>_{3/2} T"]) == 1


def test_validate_and_errors(s3, tmp_path):
    assert run(["lmp", "validate", str(s3)]) == 0
    assert run(["lmp", "validate", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["lmp", "validate", str(bad)]) == 1


def test_unknown_subcommand_is_a_usage_error():
    assert run(["nonsense"]) == 1


def test_zigzag_check(tmp_path):
    src, dst, fmap = (tmp_path / n for n in ("src.json", "dst.json", "map.json"))
    run(["gallery", "build", "s3-minus-t", "--out", str(src)])
    run(["gallery", "build", "T", "--out", str(dst)])
    regions = json.loads(src.read_text())["kernel"].keys() | {"x"}
    mapping = {r: ("t" if r == "s" else r.split("&")[0]) for r in regions}
    fmap.write_text(json.dumps(mapping))
    assert run(["zigzag", "check", str(src), str(dst), str(fmap)]) == 0
    mapping["x"] = "t"
    fmap.write_text(json.dumps(mapping))
    assert run(["zigzag", "check", str(src), str(dst), str(fmap)]) == 2


def test_json_output_is_deterministic(s3, tmp_path, capsys):
    outputs = []
    for _ in range(2):
        capsys.readouterr()
        run(["bisim", "refute", "--samples", "20", "--seed", "3", "--json"])
        outputs.append(capsys.readouterr().out)
        run(["bisim", "state", str(s3), "--json"])
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[2] and outputs[1] == outputs[3]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["gallery", "build", "sum", "--n", "3", "--out", str(a)])
    run(["gallery", "build", "sum", "--n", "3", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
