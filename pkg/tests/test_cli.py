"""CLI behaviour: exit codes, output formats, determinism, file handling."""

import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from vandermetric.cli import main
from vandermetric.io import read_points_csv, write_points_csv
from vandermetric import ArgumentError


@pytest.fixture
def runner():
    return CliRunner()


def write_csv(path, rows):
    path.write_text("\n".join(",".join(str(c) for c in row) for row in rows) + "\n")


@pytest.fixture
def complex_csv(tmp_path):
    path = tmp_path / "points.csv"
    write_csv(path, [(0, 0), (1, 0), (2, 0)])
    return str(path)


@pytest.fixture
def tetrahedron_csv(tmp_path):
    s2, s6 = math.sqrt(2.0), math.sqrt(6.0)
    path = tmp_path / "tetra.csv"
    write_csv(path, [
        (1.0, 0.0, 0.0),
        (-1.0 / 3.0, 2.0 * s2 / 3.0, 0.0),
        (-1.0 / 3.0, -s2 / 3.0, s6 / 3.0),
        (-1.0 / 3.0, -s2 / 3.0, -s6 / 3.0),
    ])
    return str(path)


class TestIO:
    def test_roundtrip_complex(self, tmp_path):
        path = tmp_path / "z.csv"
        write_points_csv(str(path), [1 + 2j, -0.5 + 0j, 3j])
        t = read_points_csv(str(path), complex_points=True)
        assert t.points == (1 + 2j, -0.5 + 0j, 3j)

    def test_roundtrip_vectors(self, tmp_path):
        path = tmp_path / "x.csv"
        pts = [(1.0, 2.0, 3.0), (0.0, 0.5, -1.0)]
        write_points_csv(str(path), pts)
        t = read_points_csv(str(path))
        assert t.points == tuple(pts)

    def test_comments_and_blanks_skipped(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("# header\n0,0\n\n1,0\n2,0\n")
        assert read_points_csv(str(path), complex_points=True).n == 3

    def test_malformed_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0,zero\n1,0\n")
        with pytest.raises(ArgumentError):
            read_points_csv(str(path))


class TestEval:
    def test_eval_complex(self, runner, complex_csv):
        result = runner.invoke(main, ["eval", "--input", complex_csv])
        assert result.exit_code == 0
        record = json.loads(result.output)
        assert record["value"] == 2.0

    def test_eval_vectors(self, runner, tetrahedron_csv):
        result = runner.invoke(main, ["eval", "--input", tetrahedron_csv,
                                      "--vectors", "--metric", "pairwise"])
        assert result.exit_code == 0
        record = json.loads(result.output)
        assert record["value"] == pytest.approx((8.0 / 3.0) ** 3, rel=1e-12)

    def test_missing_file_is_usage_error(self, runner):
        result = runner.invoke(main, ["eval", "--input", "/no/such/file.csv"])
        assert result.exit_code == 2


class TestSimplex:
    def test_holds(self, runner, complex_csv):
        result = runner.invoke(main, ["simplex", "--input", complex_csv, "--y", "0.5,0.5"])
        assert result.exit_code == 0
        assert json.loads(result.output)["pass"] is True

    def test_tetrahedron_fails_with_exit_1(self, runner, tetrahedron_csv):
        result = runner.invoke(main, ["simplex", "--input", tetrahedron_csv,
                                      "--vectors", "--metric", "pairwise",
                                      "--y", "0,0,0"])
        assert result.exit_code == 1
        assert json.loads(result.output)["pass"] is False


class TestExtended:
    def test_all_k(self, runner, complex_csv):
        result = runner.invoke(main, ["extended", "--input", complex_csv, "--y", "1,1"])
        assert result.exit_code == 0
        assert len(result.output.strip().splitlines()) == 3

    def test_bad_k(self, runner, complex_csv):
        result = runner.invoke(main, ["extended", "--input", complex_csv,
                                      "--y", "1,1", "--k", "7"])
        assert result.exit_code == 2


class TestEqualityFamily:
    def test_default_parameters(self, runner):
        result = runner.invoke(main, ["equality-family"])
        assert result.exit_code == 0
        record = json.loads(result.output)
        assert record["equality"] is True

    def test_negative_parameter(self, runner):
        result = runner.invoke(main, ["equality-family", "--q", "-1"])
        assert result.exit_code == 2


class TestPolygon:
    def test_regular_pentagon_all(self, runner):
        angles = [2 * math.pi * k / 5 for k in range(5)]
        spec = json.dumps({"R": 1.0, "angles": angles})
        result = runner.invoke(main, ["polygon", "--input", spec])
        assert result.exit_code == 0

    def test_quadrilateral_includes_ptolemy(self, runner):
        angles = [0.3, 1.2, 3.0, 5.0]
        spec = json.dumps({"R": 2.0, "angles": angles})
        result = runner.invoke(main, ["polygon", "--input", spec])
        assert result.exit_code == 0
        ops = [json.loads(line)["operation"] for line in result.output.strip().splitlines()]
        assert "ptolemy_gap" in ops and "quadrilateral_check" in ops

    def test_csv_output(self, runner):
        spec = json.dumps({"R": 1.0, "angles": [0.0, 2.0, 4.0]})
        result = runner.invoke(main, ["polygon", "--input", spec, "--check", "triangle",
                                      "--emit-csv"])
        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "operation,lhs,rhs,gap"

    def test_from_file(self, runner, tmp_path):
        path = tmp_path / "poly.json"
        path.write_text(json.dumps({"R": 1.0, "angles": [0.0, 2.1, 4.2]}))
        result = runner.invoke(main, ["polygon", "--input", str(path)])
        assert result.exit_code == 0

    def test_invalid_polygon(self, runner):
        spec = json.dumps({"R": -1.0, "angles": [0.0, 1.0, 2.0]})
        result = runner.invoke(main, ["polygon", "--input", spec])
        assert result.exit_code == 2


class TestMultilinearVerify:
    def test_passes(self, runner):
        result = runner.invoke(main, ["multilinear-verify", "--n", "3", "--m", "3",
                                      "--trials", "20", "--seed", "1"])
        assert result.exit_code == 0
        summary = json.loads(result.output.strip().splitlines()[-1])
        assert summary["pass"] is True


class TestDefiniteness:
    def test_definite_case(self, runner):
        result = runner.invoke(main, ["definiteness", "--n", "3", "--m", "3"])
        assert result.exit_code == 0
        assert json.loads(result.output)["verdict"] == "definite"

    def test_counterexample_case(self, runner):
        result = runner.invoke(main, ["definiteness", "--n", "4", "--m", "4"])
        assert result.exit_code == 0
        record = json.loads(result.output)
        assert record["verdict"] == "counterexample"
        assert "witness_matrix" in record

    def test_invalid_n(self, runner):
        result = runner.invoke(main, ["definiteness", "--n", "2", "--m", "3"])
        assert result.exit_code == 2


class TestCounterexample:
    def test_tetrahedron(self, runner):
        result = runner.invoke(main, ["counterexample", "tetrahedron"])
        assert result.exit_code == 0
        record = json.loads(result.output)
        assert record["reproduced"] is True
        assert record["simplex_holds"] is False

    def test_four_four(self, runner):
        result = runner.invoke(main, ["counterexample", "four-four"])
        assert result.exit_code == 0
        record = json.loads(result.output)
        assert record["reproduced"] is True
        assert record["metric_value"] == 0.0

    def test_unknown_choice(self, runner):
        result = runner.invoke(main, ["counterexample", "pentagon"])
        assert result.exit_code == 2


class TestOde:
    def problem_spec(self, steps=100):
        return json.dumps({
            "matrix": {"kind": "constant", "a0": [[-1.0, 0.0], [0.0, -1.0]]},
            "initials": [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            "grid": list(np.linspace(0.0, 1.0, steps + 1)),
        })

    def test_estimate_holds(self, runner):
        result = runner.invoke(main, ["ode", "--input", self.problem_spec()])
        assert result.exit_code == 0
        for line in result.output.strip().splitlines():
            assert json.loads(line)["pass"] is True

    def test_csv_format(self, runner):
        result = runner.invoke(main, ["ode", "--input", self.problem_spec(),
                                      "--format", "csv"])
        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "t,lhs,rhs,gap"

    def test_coarse_grid_usage_error(self, runner):
        spec = json.dumps({
            "matrix": {"kind": "constant", "a0": [[-10.0, 0.0], [0.0, -10.0]]},
            "initials": [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            "grid": [0.0, 1.0, 2.0],
        })
        result = runner.invoke(main, ["ode", "--input", spec])
        assert result.exit_code == 2


class TestCampaignCommand:
    def test_simplex_summary(self, runner):
        result = runner.invoke(main, ["campaign", "--op", "simplex",
                                      "--trials", "200", "--seed", "1"])
        assert result.exit_code == 0
        summary = json.loads(result.output.strip().splitlines()[-1])
        assert summary["pass"] is True

    def test_output_file_byte_identical(self, runner, tmp_path):
        paths = [tmp_path / "a.jsonl", tmp_path / "b.jsonl"]
        for path in paths:
            result = runner.invoke(main, ["campaign", "--op", "equality-family",
                                          "--trials", "300", "--seed", "9",
                                          "--output", str(path)])
            assert result.exit_code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_json_format(self, runner):
        result = runner.invoke(main, ["campaign", "--op", "polygon", "--check", "ngon",
                                      "--n", "5", "--trials", "50", "--format", "json"])
        assert result.exit_code == 0
        record = json.loads(result.output)
        assert record["summary"]["pass"] is True

    def test_csv_format(self, runner):
        result = runner.invoke(main, ["campaign", "--op", "simplex",
                                      "--trials", "50", "--format", "csv"])
        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "trial,lhs,rhs,gap"

    def test_unknown_op_rejected(self, runner):
        result = runner.invoke(main, ["campaign", "--op", "bogus"])
        assert result.exit_code == 2

    def test_bad_metric_usage_error(self, runner):
        result = runner.invoke(main, ["campaign", "--op", "simplex",
                                      "--metric", "bogus", "--trials", "10"])
        assert result.exit_code == 2


class TestLogging:
    def test_log_env_var(self, runner, complex_csv, monkeypatch):
        monkeypatch.setenv("VANDERMETRIC_LOG", "DEBUG")
        result = runner.invoke(main, ["eval", "--input", complex_csv])
        assert result.exit_code == 0
