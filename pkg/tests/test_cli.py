"""Tests for the JSON-lines command line."""

import json

import pytest

from pytoricoda.cli import InputError, JobSpec, load_json, main, run

P2 = {"rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [0, 2], [1, 2]]}


@pytest.fixture
def files(tmp_path):
    def write(name: str, data) -> str:
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf8")
        return str(path)

    return write


def records(capsys) -> list[dict]:
    return [json.loads(line) for line in capsys.readouterr().out.splitlines()]


@pytest.fixture
def triangle_file(files):
    return files("triangle.json", {"vertices": [[0, 0], [1, 0], [0, 1]]})


@pytest.fixture
def double_file(files):
    return files("double.json", {"vertices": [[0, 0], [2, 0], [0, 2]]})


def test_phi(capsys, triangle_file):
    assert main(["oda", "phi", triangle_file, triangle_file]) == 0
    (record,) = records(capsys)
    assert record["command"] == "oda phi"
    assert record["descriptor"] == {"inputs": [triangle_file, triangle_file]}
    assert record["payload"] == {"missed": [], "dim_coker": 0}
    assert "error" not in record


def test_psi_with_svg(capsys, tmp_path, triangle_file, double_file):
    svg = tmp_path / "psi.svg"
    assert main(["oda", "psi", triangle_file, double_file, "--svg", str(svg)]) == 0
    (record,) = records(capsys)
    assert record["payload"]["covered"] is False
    assert record["payload"]["translates"] == [[0, 0], [0, 1], [1, 0]]
    assert record["payload"]["witness"] is not None
    text = svg.read_text(encoding="utf8")
    assert text.startswith("<?xml")
    assert "<title>(" in text


def test_poly_commands(capsys, triangle_file, double_file):
    assert main(["poly", "points", double_file]) == 0
    assert main(["poly", "sum", triangle_file, triangle_file]) == 0
    assert main(["poly", "diff", triangle_file, double_file]) == 0
    points, total, difference = records(capsys)
    assert points["payload"]["count"] == 6
    assert points["payload"]["points"] == [[0, 0], [0, 1], [0, 2], [1, 0], [1, 1], [2, 0]]
    assert total["payload"] == {"vertices": [["0", "0"], ["0", "2"], ["2", "0"]]}
    assert difference["payload"] == {"empty": True}


def test_fan_bounds(capsys, files):
    fan = files("p2.json", P2)
    bundle = files("o1.json", {"coeffs": [0, 0, 1]})
    assert main(["fan", "bounds", fan]) == 0
    assert main(["fan", "bounds", fan, "--bundle", bundle, "--rho", "1,0"]) == 0
    plain, with_ray = records(capsys)
    assert plain["payload"]["loqr_bound"] == 6
    assert plain["payload"]["lopr_bound"] is None
    assert with_ray["payload"]["lopr_bound"] == 13
    assert with_ray["payload"]["lopr"]["rho"] == [1, 0]


def test_fan_check(capsys, files):
    assert main(["fan", "check", files("p2.json", P2)]) == 0
    (record,) = records(capsys)
    assert record["payload"]["smooth"] is True
    assert record["payload"]["picard_number"] == 1
    assert len(record["payload"]["walls"]) == 3


def test_cover_run(capsys, files):
    job = files(
        "cover.json",
        {
            "target": {"vertices": [[0, 0], [2, 0], [0, 2], [2, 2]]},
            "pieces": [
                {"vertices": [[0, 0], [1, 0], [0, 2], [1, 2]]},
                {"vertices": [[1, 0], [2, 0], [1, 2], [2, 2]]},
            ],
        },
    )
    assert main(["cover", "run", job]) == 0
    (record,) = records(capsys)
    assert record["payload"] == {"covered": True, "witness": None, "pieces_used": 2}


def test_surface_commands(capsys, files):
    square = files("square.json", {"vertices": [[0, 0], [1, 0], [0, 1], [1, 1]]})
    big = files("big.json", {"vertices": [[0, 0], [3, 0], [0, 3]]})
    assert main(["surface", "contacts", square, "--direction", "1,0"]) == 0
    assert main(["surface", "classify", big, "--direction", "1,0", "--first", "3,0", "--second", "0,3"]) == 0
    contacts, classified = records(capsys)
    assert contacts["payload"]["points"] == [["1", "0"], ["1", "1"]]
    assert classified["payload"]["tag"] == "b"


def test_sfhn_precondition_is_an_error_record(capsys, triangle_file, double_file):
    assert main(["surface", "sfhn", triangle_file, double_file]) == 1
    (record,) = records(capsys)
    assert record["payload"] is None
    assert record["error"].startswith("PreconditionError")


def test_bad_inputs(capsys, files):
    broken = files("broken.json", "{\"vertices\": [")
    assert main(["poly", "points", broken]) == 1
    assert main(["poly", "points", broken + ".missing"]) == 1
    assert main(["cover", "run", files("list.json", [1, 2])]) == 1
    errors = [r["error"] for r in records(capsys)]
    assert all(e.startswith("InputError") for e in errors)
    assert "at byte" in errors[0]


def test_bad_vector_exits_with_usage(capsys, files):
    square = files("square.json", {"vertices": [[0, 0], [1, 0], [0, 1], [1, 1]]})
    assert main(["surface", "contacts", square, "--direction", "1,x"]) == 2
    assert records(capsys) == []
    with pytest.raises(SystemExit):
        main(["poly", "sum", square])


def test_scan(capsys, tmp_path):
    output = tmp_path / "scan.jsonl"
    argv = ["-o", str(output), "oda", "scan", "--family", "projective:dim=2", "--max-coeff", "2", "--sorted"]
    assert main(argv) == 0
    assert capsys.readouterr().out == ""
    lines = [json.loads(line) for line in output.read_text(encoding="utf8").splitlines()]
    assert [r["descriptor"]["coeffs"] for r in lines] == [
        [[0, 0, 1], [0, 0, 1]],
        [[0, 0, 1], [0, 0, 2]],
        [[0, 0, 2], [0, 0, 2]],
    ]
    assert all(r["family"] == "projective" and r["command"] == "oda scan" for r in lines)


def test_scan_unknown_family(capsys):
    assert main(["oda", "scan", "--family", "grassmannian"]) == 1
    (record,) = records(capsys)
    assert record["error"].startswith("FamilyError")


def test_run_and_load_json(files):
    path = files("triangle.json", {"vertices": [[0, 0], [1, 0], [0, 1]]})
    assert load_json(path) == {"vertices": [[0, 0], [1, 0], [0, 1]]}
    with pytest.raises(InputError):
        load_json(path + ".missing")
    (record,) = list(run(JobSpec("poly edges", (path,))))
    assert len(record.payload["edges"]) == 3
