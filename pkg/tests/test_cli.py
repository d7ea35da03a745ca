import json
import xml.etree.ElementTree as ET

import pytest

from fairpart import cli
from fairpart.cli import EnsembleReport, RunConfig, main, random_convex_polygon
from fairpart.geom import polygon_to_json
from fairpart.partition import SolverError, UnsupportedN

SVG = "{http://www.w3.org/2000/svg}"


def write_polygon(path, verts):
    path.write_text(json.dumps({"vertices": verts}))
    return str(path)


@pytest.fixture
def tri_file(tmp_path):
    return write_polygon(tmp_path / "tri.json", [[0, 0], [2, 0], [1, 3 ** 0.5]])


@pytest.fixture
def square_file(tmp_path):
    return write_polygon(tmp_path / "sq.json", [[0, 0], [1, 0], [1, 1], [0, 1]])


def test_partition_writes_json_and_svg(tmp_path, tri_file):
    out, svg = tmp_path / "r.json", tmp_path / "r.svg"
    assert main(["partition", "--n", "4", "--in", tri_file, "--out", str(out), "--svg", str(svg)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["pieces"]) == 4
    assert doc["report"]["perimeter_spread"] <= 1e-6
    root = ET.fromstring(svg.read_text())
    assert root.tag == SVG + "svg"
    assert len(root.findall(SVG + "polygon")) == 5
    assert len(root.findall(SVG + "line")) == 3
    assert len(root.findall(SVG + "text")) == 4


def test_symmetric_partition_draws_reflected_chords(tmp_path, square_file):
    svg = tmp_path / "r.svg"
    assert main(["partition", "--n", "4", "--in", square_file, "--out", str(tmp_path / "r.json"),
                 "--svg", str(svg)]) == 0
    assert len(ET.fromstring(svg.read_text()).findall(SVG + "line")) == 3


def test_partition_output_is_byte_identical(tmp_path, tri_file):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["partition", "--n", "4", "--in", tri_file, "--out", str(path), "--svg", str(path) + ".svg"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.json.svg").read_bytes() == (tmp_path / "b.json.svg").read_bytes()


def test_bare_vertex_list_input(tmp_path):
    src = tmp_path / "p.json"
    src.write_text("[[0, 0], [3, 0], [0, 1]]")
    assert main(["partition", "--n", "2", "--in", str(src), "--out", str(tmp_path / "r.json")]) == 0


@pytest.mark.parametrize("content", ['{"vertices": [[0,0],[1,0],[0.2,0.2],[0,1]]}', "not json", '{"points": []}',
                                     '{"vertices": [[0,0],[1,1]]}'])
def test_bad_input_exits_1(tmp_path, content, capsys):
    src = tmp_path / "p.json"
    src.write_text(content)
    assert main(["partition", "--n", "2", "--in", str(src), "--out", str(tmp_path / "r.json")]) == 1
    assert "error:" in capsys.readouterr().err


def test_missing_file_and_unsupported_n(tmp_path, square_file):
    assert main(["partition", "--n", "2", "--in", str(tmp_path / "nope.json"), "--out", str(tmp_path / "r")]) == 1
    assert main(["partition", "--n", "3", "--in", square_file, "--out", str(tmp_path / "r")]) == 1
    assert main(["partition", "--n", "4", "--in", square_file, "--out", str(tmp_path / "r"),
                 "--theta-samples", "16"]) == 1


def test_solver_failure_exits_2(tmp_path, square_file, monkeypatch, capsys):
    def boom(*args, **kwargs):
        raise SolverError("no solution")

    monkeypatch.setattr(cli, "fair_partition", boom)
    assert main(["partition", "--n", "4", "--in", square_file, "--out", str(tmp_path / "r.json")]) == 2
    assert "solver failed" in capsys.readouterr().err


def test_verification_failure_exits_2(tmp_path, tri_file, capsys):
    # the triangle's pieces agree to ~1e-13, not to 1e-300
    out = tmp_path / "r.json"
    assert main(["partition", "--n", "4", "--in", tri_file, "--out", str(out), "--tol", "1e-300"]) == 2
    assert out.exists()
    assert "verification failed" in capsys.readouterr().err


def test_alpha_command(tmp_path, tri_file):
    out, svg = tmp_path / "a.json", tmp_path / "a.svg"
    assert main(["alpha", "--in", tri_file, "--out", str(out), "--svg", str(svg)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["fair_bisectors"]) == 3
    assert all(b["proper"] for b in doc["fair_bisectors"])
    assert doc["profile"][0]["s_lo"] == 0.0
    assert len(ET.fromstring(svg.read_text()).findall(SVG + "line")) == 3


def test_curve_command(tmp_path, tri_file):
    out = tmp_path / "g.json"
    assert main(["curve", "--in", tri_file, "--out", str(out), "--theta-samples", "64"]) == 0
    doc = json.loads(out.read_text())
    assert all(doc["invariants"].values())
    assert len(doc["intersections"]) % 2 == 0 and doc["intersections"]


def test_ensemble_command(tmp_path):
    out = tmp_path / "e.json"
    args = ["ensemble", "--count", "6", "--vertices", "3..6", "--n", "2", "--seed", "4", "--out", str(out)]
    assert main(args) == 0
    first = out.read_bytes()
    doc = json.loads(first)
    agg = doc["aggregates"]
    assert agg["count"] == 6 and agg["success_rate"] == 1.0 and agg["parity_violations"] == 0
    assert [o["vertices"] for o in doc["outcomes"]] == [3, 4, 5, 6, 3, 4]
    assert all("runtime" not in o for o in doc["outcomes"])
    assert main(args) == 0
    assert out.read_bytes() == first
    assert main(args + ["--timing"]) == 0
    assert all(o["runtime"] >= 0 for o in json.loads(out.read_text())["outcomes"])


def test_ensemble_bad_range(tmp_path):
    with pytest.raises(SystemExit):
        main(["ensemble", "--count", "2", "--vertices", "5..4", "--out", str(tmp_path / "e.json")])


def test_ensemble_report_counts_parity_and_failures():
    rep = EnsembleReport({}, [
        {"proper_ranges": 3, "success": True, "area_spread": 0.0, "perimeter_spread": 1e-12},
        {"proper_ranges": 2, "success": False, "area_spread": None, "perimeter_spread": None},
    ])
    assert rep.success_rate == 0.5
    assert rep.parity_violations == 1
    assert rep.to_json()["aggregates"]["area_spread"]["max"] == 0.0


def test_run_config_validation():
    with pytest.raises(UnsupportedN):
        RunConfig(n=6)
    with pytest.raises(ValueError):
        RunConfig(n=4, theta_samples=10)


def test_log_level_from_environment(tmp_path, square_file, monkeypatch):
    monkeypatch.setenv("FAIRPART_LOG", "debug")
    assert main(["partition", "--n", "2", "--in", square_file, "--out", str(tmp_path / "r.json")]) == 0


def test_generator_and_json_round_trip(tmp_path):
    P = random_convex_polygon(17, 7)
    src = tmp_path / "p.json"
    src.write_text(json.dumps(polygon_to_json(P)))
    out = tmp_path / "r.json"
    assert main(["partition", "--n", "2", "--in", str(src), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["report"]["area_spread"] <= 1e-9
    with pytest.raises(ValueError):
        random_convex_polygon(1, 2)
