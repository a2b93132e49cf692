"""End-to-end CLI coverage: artifacts, round trips, seeds, exit codes."""

import json
import math

import pytest
from click.testing import CliRunner

from wallsys.cli import main
from wallsys.disks import IntervalFamily, extremal_disk


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, *args, expect=0):
    result = runner.invoke(main, [str(a) for a in args], catch_exceptions=False)
    assert result.exit_code == expect, result.output
    return result


class TestFamilyCommands:
    def test_extremal_area_round_trip(self, runner, tmp_path):
        path = tmp_path / "f.json"
        invoke(runner, "extremal", "--r", 5, "--out", path)
        out = invoke(runner, "area", "--in", path)
        payload = json.loads(out.output)
        assert payload == {"area": "75/2", "area2": 75}
        again = IntervalFamily.from_json_dict(json.loads(path.read_text()))
        assert again == extremal_disk(5)

    def test_validate_empty_family(self, runner, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text(json.dumps({"circumference2": 4, "intervals": []}))
        out = invoke(runner, "validate", "--in", path)
        payload = json.loads(out.output)
        assert payload["valid"] and payload["radius"] == 0

    def test_distance_command(self, runner, tmp_path):
        path = tmp_path / "f.json"
        invoke(runner, "extremal", "--r", 3, "--out", path)
        out = invoke(runner, "distance", "--in", path, "--p", "center", "--q", "0,0")
        assert json.loads(out.output) == {"distance": 3}

    def test_distance_fractions(self, runner, tmp_path):
        path = tmp_path / "f.json"
        invoke(runner, "extremal", "--r", 2, "--out", path)
        out = invoke(runner, "distance", "--in", path, "--p", "0,1/3", "--q", "center")
        assert json.loads(out.output) == {"distance": 2}

    def test_minimize_command(self, runner, tmp_path):
        fam = extremal_disk(2)
        from wallsys.moves import swap_nested_pair

        pert = swap_nested_pair(fam, fam.intervals.index((9, 3)), fam.intervals.index((11, 1)))
        src = tmp_path / "pert.json"
        src.write_text(json.dumps(pert.to_json_dict()))
        dst = tmp_path / "min.json"
        log = tmp_path / "log.json"
        out = invoke(runner, "minimize", "--in", src, "--out", dst, "--log", log)
        payload = json.loads(out.output)
        assert payload["area2"] == payload["n"] * 2
        assert len(json.loads(log.read_text())) == payload["moves"]

    def test_enumerate_stream_and_summary(self, runner, tmp_path):
        jl = tmp_path / "stream.jsonl"
        summ = tmp_path / "summary.json"
        out = invoke(
            runner, "enumerate", "--r", 1, "--n-max", 4, "--out", jl, "--summary", summ
        )
        payload = json.loads(out.output)
        assert payload["min_area"] == "3/2"
        lines = [json.loads(l) for l in jl.read_text().splitlines()]
        assert len(lines) == payload["count"] == 2
        assert json.loads(summ.read_text()) == payload

    def test_strands_report(self, runner, tmp_path):
        path = tmp_path / "f.json"
        invoke(runner, "extremal", "--r", 2, "--out", path)
        payload = json.loads(invoke(runner, "strands", "--in", path).output)
        assert payload["r"] == 2 and payload["strip_crossings"] == "4"
        assert payload["width_one_arc"] is not None


class TestMeasureCommands:
    def test_mu_distance_ext(self, runner):
        out = invoke(runner, "mu-distance", "--mu", "ext", "--x", "0,0", "--y", "1,0")
        assert json.loads(out.output)["distance"] == pytest.approx(math.sqrt(3) / 8)

    def test_mu_ball_and_area_csv(self, runner, tmp_path):
        ball = tmp_path / "ball.csv"
        invoke(runner, "mu-ball", "--mu", "ext", "--r", 1, "--resolution", 12, "--out", ball)
        rows = ball.read_text().splitlines()
        assert rows[0] == "x,y" and len(rows) == 13
        out = invoke(runner, "mu-area", "--mu", "ext", "--region", ball)
        assert json.loads(out.output)["area"] == pytest.approx(6 / math.pi, rel=1e-6)

    def test_measure_json_file(self, runner, tmp_path):
        spec = tmp_path / "mu.json"
        spec.write_text(
            json.dumps(
                {
                    "kind": "mixture",
                    "terms": [
                        {"weight": 1.0, "measure": {"kind": "uniform", "density": 1.0, "p_max": 2.0}}
                    ],
                }
            )
        )
        out = invoke(runner, "mu-distance", "--mu", spec, "--x", "0,0", "--y", "0,1")
        assert json.loads(out.output)["distance"] == pytest.approx(1.0)

    def test_mu_length(self, runner, tmp_path):
        poly = tmp_path / "seg.csv"
        poly.write_text("x,y\n0.0,0.0\n1.0,0.0\n")
        out = invoke(runner, "mu-length", "--mu", "uniform", "--polyline", poly)
        assert json.loads(out.output)["length"] == pytest.approx(1.0)


class TestStochasticCommands:
    def test_sample_determinism_and_seed_env(self, runner, tmp_path, monkeypatch):
        p1, p2, p3 = (tmp_path / f"c{i}.csv" for i in range(3))
        invoke(runner, "sample", "--n", 20, "--seed", 7, "--out", p1)
        invoke(runner, "sample", "--n", 20, "--seed", 7, "--out", p2)
        assert p1.read_text() == p2.read_text()
        monkeypatch.setenv("WALLSYS_SEED", "7")
        invoke(runner, "sample", "--n", 20, "--out", p3)
        assert p3.read_text() == p1.read_text()

    def test_converge_csv(self, runner, tmp_path):
        csv = tmp_path / "conv.csv"
        out = invoke(runner, "converge", "--n", "100", "--trials", 3, "--seed", 5, "--out", csv)
        payload = json.loads(out.output)
        assert payload["seed"] == 5 and "100" in payload["per_n"]
        assert len(csv.read_text().splitlines()) == 4  # header + 3 trials

    def test_wlln_json(self, runner):
        out = invoke(runner, "wlln", "--n", 60, "--eps", 0.1, "--trials", 50, "--seed", 2)
        payload = json.loads(out.output)
        assert payload["passes"] is True and payload["seed"] == 2


class TestRender:
    def test_family_svg(self, runner, tmp_path):
        fam = tmp_path / "f.json"
        invoke(runner, "extremal", "--r", 3, "--out", fam)
        svg_path = tmp_path / "f.svg"
        invoke(runner, "render", "--in", fam, "--out", svg_path)
        text = svg_path.read_text()
        assert text.startswith("<?xml") and "<svg" in text and "polyline" in text

    def test_ball_svg(self, runner, tmp_path):
        ball = tmp_path / "ball.csv"
        invoke(runner, "mu-ball", "--mu", "ext", "--r", 1, "--resolution", 12, "--out", ball)
        svg_path = tmp_path / "ball.svg"
        invoke(runner, "render", "--ball", ball, "--out", svg_path)
        assert "<polygon" in svg_path.read_text()

    def test_chords_svg(self, runner, tmp_path):
        csv = tmp_path / "c.csv"
        invoke(runner, "sample", "--n", 10, "--seed", 1, "--out", csv)
        svg_path = tmp_path / "c.svg"
        invoke(runner, "render", "--chords", csv, "--out", svg_path)
        assert "<circle" in svg_path.read_text()

    def test_render_requires_one_input(self, runner, tmp_path):
        result = CliRunner().invoke(main, ["render", "--out", str(tmp_path / "x.svg")])
        assert result.exit_code == 1


class TestExitCodes:
    def test_parse_error_is_1(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        result = runner.invoke(main, ["validate", "--in", str(bad)])
        assert result.exit_code == 1
        payload = json.loads(result.stderr if hasattr(result, "stderr") else result.output)
        assert payload["error"]["exit_code"] == 1

    def test_type_invariant_error_is_1(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"circumference2": 6, "intervals": [[0, 2]]}))
        result = runner.invoke(main, ["validate", "--in", str(bad)])
        assert result.exit_code == 1

    def test_precondition_error_is_2(self, runner, tmp_path):
        fam = tmp_path / "bad_disk.json"
        fam.write_text(json.dumps({"circumference2": 4, "intervals": [[1, 3], [3, 1]]}))
        result = runner.invoke(main, ["area", "--in", str(fam)])
        assert result.exit_code == 2

    def test_complexity_refusal_is_2(self, runner):
        result = runner.invoke(main, ["enumerate", "--r", "3", "--n-max", "9"])
        assert result.exit_code == 2

    def test_non_generic_cut_is_2(self, runner, tmp_path):
        path = tmp_path / "f.json"
        invoke(runner, "extremal", "--r", 1, "--out", path)
        result = runner.invoke(main, ["strands", "--in", str(path), "--t", "1"])
        assert result.exit_code == 2

    def test_non_generic_point_is_2(self, runner, tmp_path):
        path = tmp_path / "f.json"
        invoke(runner, "extremal", "--r", 1, "--out", path)
        result = runner.invoke(
            main, ["distance", "--in", str(path), "--p", "2,1", "--q", "center"]
        )
        assert result.exit_code == 2
