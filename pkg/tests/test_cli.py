from unittest.mock import patch

import pytest

from hypercop.cli import EXIT_INVALID, EXIT_OK, EXIT_POLICY, build_parser, load_arena, main
from hypercop.exceptions import PolicyFailure
from hypercop.serializer import Serializer
from hypercop.surface import HyperbolicPlane

PURSUIT = {
    "surface": "plane",
    "robber": {"policy": "stay", "tau": 0.1, "cop_distance": 1.0},
    "cops": [{"policy": "greedy_pursuit"}],
    "stop": {"max_rounds": 20},
}


def write_config(tmp_path, data, name="run.json"):
    path = tmp_path / name
    Serializer().write_json(path, data)
    return path


def output(capsys):
    return Serializer().loads(capsys.readouterr().out)


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
    args = build_parser().parse_args(["verify", "--suite", "L5"])
    assert args.suite == "L5"
    assert args.seed == 7


def test_simulate(tmp_path, capsys):
    config = write_config(tmp_path, PURSUIT)
    out = tmp_path / "out"
    assert main(["simulate", str(config), "--out", str(out)]) == EXIT_OK

    summary = output(capsys)
    assert summary["capture"] is True
    assert summary["capture_round"] == 10
    assert (out / "trace.jsonl").exists()
    assert (out / "annotations.jsonl").exists()
    assert Serializer().read_json(out / "summary.json")["capture_round"] == 10


def test_simulate_zero_rounds(tmp_path, capsys):
    config = write_config(tmp_path, {**PURSUIT, "stop": {"max_rounds": 0}})
    assert main(["simulate", str(config), "--out", str(tmp_path / "out"), "--seed", "5"]) == EXIT_OK
    summary = output(capsys)
    assert summary["rounds"] == 0
    assert summary["seed"] == 5
    assert summary["capture"] is False


def test_simulate_yaml(tmp_path, capsys):
    config = tmp_path / "run.yaml"
    config.write_text(
        "surface: plane\n"
        "robber:\n  policy: stay\n  tau: 0.1\n"
        "cops:\n  - policy: greedy_pursuit\n"
        "stop:\n  max_rounds: 3\n"
        "initial:\n  robber: [0.0, 0.0]\n  cops: [[0.5, 0.0]]\n"
    )
    assert main(["simulate", str(config), "--out", str(tmp_path / "out")]) == EXIT_OK
    assert output(capsys)["rounds"] == 3


def test_simulate_malformed_config(tmp_path, capsys):
    config = write_config(tmp_path, {"robber": {"policy": "stay"}})
    assert main(["simulate", str(config)]) == EXIT_INVALID
    err = capsys.readouterr().err
    assert "error: ConfigInvalid: cops" in err


def test_simulate_unknown_policy(tmp_path, capsys):
    config = write_config(tmp_path, {**PURSUIT, "cops": [{"policy": "teleport"}]})
    assert main(["simulate", str(config)]) == EXIT_INVALID
    assert "Unknown cop policy" in capsys.readouterr().err


def test_simulate_policy_failure(tmp_path, capsys):
    config = write_config(tmp_path, PURSUIT)
    with patch("hypercop.cli.run", side_effect=PolicyFailure("c1 proposed 2 invalid moves in a row")):
        assert main(["simulate", str(config), "--out", str(tmp_path / "out")]) == EXIT_POLICY
    assert "error: PolicyFailure: c1 proposed 2 invalid moves" in capsys.readouterr().err


def test_verify_suite(capsys):
    assert main(["verify", "--suite", "L5,PY", "--samples", "20"]) == EXIT_OK
    result = output(capsys)
    assert result["passed"] is True
    assert [r["id"] for r in result["reports"]] == ["L5", "PY"]


def test_verify_unknown_check(capsys):
    assert main(["verify", "--suite", "L99"]) == EXIT_INVALID
    assert "UnknownCheck" in capsys.readouterr().err


def test_info_s2(capsys):
    assert main(["info", "S(2)"]) == EXIT_OK
    info = output(capsys)
    assert info["family"] == "S"
    assert info["k"] == 8
    assert info["systole"] == pytest.approx(3.057142, abs=1e-5)
    assert info["orientable"] is True


def test_info_s3(capsys):
    assert main(["info", "S(3)"]) == EXIT_OK
    assert output(capsys)["k"] == 12


def test_info_rejects_n2(capsys):
    assert main(["info", "N(2)"]) == EXIT_INVALID
    assert "NotHyperbolic" in capsys.readouterr().err


def test_info_round_trip(tmp_path, capsys):
    assert main(["info", "S(2)"]) == EXIT_OK
    path = tmp_path / "s2.json"
    path.write_text(capsys.readouterr().out)
    assert main(["info", str(path)]) == EXIT_OK
    assert output(capsys)["g"] == 2


def test_load_arena():
    assert isinstance(load_arena("plane"), HyperbolicPlane)


def test_schema(capsys):
    assert main(["schema"]) == EXIT_OK
    schema = output(capsys)
    assert "robber" in schema["properties"]


def test_render_surface(tmp_path, capsys):
    assert main(["info", "S(2)"]) == EXIT_OK
    surface = tmp_path / "s2.json"
    surface.write_text(capsys.readouterr().out)

    svg = tmp_path / "s2.svg"
    assert main(["render", str(surface), "--out", str(svg)]) == EXIT_OK
    assert capsys.readouterr().out.strip() == str(svg)
    assert svg.read_text().count('class="tile"') == 1


def test_render_trace(tmp_path, capsys):
    config = write_config(tmp_path, PURSUIT)
    out = tmp_path / "out"
    assert main(["simulate", str(config), "--out", str(out)]) == EXIT_OK
    capsys.readouterr()

    svg = tmp_path / "game.svg"
    assert main(["render", str(out / "trace.jsonl"), "--out", str(svg)]) == EXIT_OK
    text = svg.read_text()
    assert text.count('class="player"') == 2
    assert 'class="tile"' not in text


def test_render_rejects_negative_ball(tmp_path, capsys):
    assert main(["render", "missing.json", "--out", str(tmp_path / "x.svg"), "--ball", "-1"]) == EXIT_INVALID
    assert "--ball" in capsys.readouterr().err


def test_render_missing_input(tmp_path, capsys):
    assert main(["render", str(tmp_path / "missing.json"), "--out", str(tmp_path / "x.svg")]) == EXIT_INVALID
    assert "ConfigInvalid" in capsys.readouterr().err


def test_simulate_reads_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("HYPERCOP_MAX_ROUNDS", "4")
    config = write_config(tmp_path, {key: value for key, value in PURSUIT.items() if key != "stop"})
    assert main(["simulate", str(config), "--out", str(tmp_path / "a")]) == EXIT_OK
    assert output(capsys)["rounds"] == 4

    # the run file wins over the environment
    config = write_config(tmp_path, {**PURSUIT, "stop": {"max_rounds": 3}}, name="short.json")
    assert main(["simulate", str(config), "--out", str(tmp_path / "b")]) == EXIT_OK
    assert output(capsys)["rounds"] == 3


def test_invalid_environment(capsys, monkeypatch):
    monkeypatch.setenv("HYPERCOP_DIAMETER_SAMPLES", "many")
    assert main(["info", "S(2)"]) == EXIT_INVALID
    assert "HYPERCOP_DIAMETER_SAMPLES" in capsys.readouterr().err
