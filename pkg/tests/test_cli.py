import json

import pytest

from packclass.cli import main

FIVE_BOX = {
    "d": 2,
    "container": [5, 5],
    "boxes": [
        {"id": "b1", "size": [4, 1]},
        {"id": "b2", "size": [5, 1]},
        {"id": "b3", "size": [1, 3]},
        {"id": "b4", "size": [2, 2]},
        {"id": "b5", "size": [1, 2]},
    ],
}

INFEASIBLE = {
    "container": [3, 3],
    "boxes": [{"id": "a", "size": [2, 2]}, {"id": "b", "size": [2, 2]}],
}


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example.json"
    path.write_text(json.dumps(FIVE_BOX))
    return str(path)


def run(args):
    return main(args)


def test_opp_exit_codes(tmp_path, example_file):
    out = tmp_path / "res.json"
    assert run(["opp", example_file, "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["verdict"] == "feasible" and len(doc["positions"]) == 5
    bad = tmp_path / "inf.json"
    bad.write_text(json.dumps(INFEASIBLE))
    assert run(["opp", str(bad)]) == 1
    broken = tmp_path / "broken.json"
    broken.write_text("{nope")
    assert run(["opp", str(broken)]) == 64
    assert run(["opp", str(tmp_path / "missing.json")]) == 64


def test_opp_resource_limit_exit(example_file, capsys):
    assert run(["opp", example_file, "--no-heuristic", "--node-limit", "0"]) == 2
    capsys.readouterr()


def test_time_limit_env(example_file, monkeypatch, capsys):
    monkeypatch.setenv("PACKCLASS_TIME_LIMIT", "0.000001")
    assert run(["opp", example_file, "--no-heuristic"]) == 2
    capsys.readouterr()


def test_verify_roundtrip_and_failure(tmp_path, example_file, capsys):
    out = tmp_path / "res.json"
    assert run(["opp", example_file, "-o", str(out)]) == 0
    assert run(["verify", example_file, str(out)]) == 0
    doc = json.loads(out.read_text())
    # corrupt one coordinate to force an overlap
    doc["positions"]["b1"] = doc["positions"]["b2"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert run(["verify", example_file, str(bad)]) == 1
    assert "violation" in capsys.readouterr().out


def test_verify_class_with_shared_edge(tmp_path, capsys):
    inst = tmp_path / "two.json"
    inst.write_text(
        json.dumps(
            {"container": [3, 3],
             "boxes": [{"id": "a", "size": [1, 1]}, {"id": "b", "size": [1, 1]}]}
        )
    )
    artifact = tmp_path / "class.json"
    artifact.write_text(json.dumps({"class": [[["a", "b"]], [["a", "b"]]]}))
    assert run(["verify", str(inst), str(artifact)]) == 1
    assert "shared by all dimensions" in capsys.readouterr().out


def test_render_deterministic_and_structure_guard(tmp_path, example_file, capsys):
    res = tmp_path / "res.json"
    assert run(["opp", example_file, "-o", str(res)]) == 0
    svg1, svg2 = tmp_path / "a.svg", tmp_path / "b.svg"
    assert run(["render", example_file, str(res), str(svg1)]) == 0
    assert run(["render", example_file, str(res), str(svg2)]) == 0
    assert svg1.read_bytes() == svg2.read_bytes()
    assert svg1.read_text().count("<rect") == 6
    three_d = tmp_path / "3d.json"
    three_d.write_text(
        json.dumps(
            {"container": [2, 2, 2], "boxes": [{"id": "a", "size": [1, 1, 1]}]}
        )
    )
    res3 = tmp_path / "res3.json"
    assert run(["opp", str(three_d), "-o", str(res3)]) == 0
    assert run(["render", str(three_d), str(res3), str(tmp_path / "x.svg")]) == 65
    capsys.readouterr()


def test_okp_and_spp_results(tmp_path, example_file, capsys):
    okp_out = tmp_path / "okp.json"
    assert run(["okp", example_file, "-o", str(okp_out)]) == 0
    doc = json.loads(okp_out.read_text())
    assert doc["value"] == 18
    assert doc["chosen"] == ["b1", "b2", "b3", "b4", "b5"]
    assert run(["verify", example_file, str(okp_out)]) == 0

    spp_out = tmp_path / "spp.json"
    assert run(["spp", example_file, "--fixed-dims", "5", "-o", str(spp_out)]) == 0
    doc = json.loads(spp_out.read_text())
    assert doc["height"] == 4
    assert run(["verify", example_file, str(spp_out)]) == 0
    capsys.readouterr()


def test_okp_drop_unfit(tmp_path, capsys):
    inst = tmp_path / "unfit.json"
    inst.write_text(
        json.dumps(
            {"container": [3, 3],
             "boxes": [{"id": "big", "size": [9, 9]}, {"id": "a", "size": [2, 2]}]}
        )
    )
    assert run(["okp", str(inst)]) == 64  # hard error without the flag
    assert run(["okp", str(inst), "--drop-unfit"]) == 0
    captured = capsys.readouterr()
    assert "warning: dropped box 'big'" in captured.err


def test_oracle_commands(tmp_path, example_file, capsys):
    assert run(["oracle", "opp", example_file]) == 0
    inf = tmp_path / "inf.json"
    inf.write_text(json.dumps(INFEASIBLE))
    assert run(["oracle", "opp", str(inf)]) == 1
    out = tmp_path / "classes.json"
    assert run(["oracle", "classes", example_file, "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["total"] == len(doc["classes"]) > 0
    capsys.readouterr()


def test_convert_multi_instance(tmp_path, capsys):
    src = tmp_path / "two.ngcut"
    src.write_text("2\n1\n4 4\n2 2 5\n1\n6 6\n3 3 9\n")
    out = tmp_path / "conv.json"
    assert run(["convert", "--from", "ngcut", str(src), str(out)]) == 0
    captured = capsys.readouterr()
    assert "rule:" in captured.out
    first = json.loads((tmp_path / "conv_1.json").read_text())
    second = json.loads((tmp_path / "conv_2.json").read_text())
    assert first["container"] == [4, 4] and second["container"] == [6, 6]
    bad = tmp_path / "bad.ngcut"
    bad.write_text("1\n")
    assert run(["convert", "--from", "ngcut", str(bad), str(out)]) == 65
    capsys.readouterr()


def test_sweep_exhaustive_tiny(capsys):
    assert run(["sweep", "--mode", "exhaustive", "--max-boxes", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["instances"] == 54 and doc["disagreements"] == []


def test_sweep_random_seeded(capsys):
    assert run(["sweep", "--mode", "random", "--count", "8", "--seed", "3"]) == 0
    first = capsys.readouterr().out
    assert run(["sweep", "--mode", "random", "--count", "8", "--seed", "3"]) == 0
    assert capsys.readouterr().out == first


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        main(["nonsense"])
    assert err.value.code == 64
