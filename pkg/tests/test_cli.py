import json
import subprocess
import sys

import pytest

from forestident.cli import main
from forestident.graphs import MarkedGraph, triangle
from forestident.identities import FormalSum, gen_identity
from forestident.polyring import Poly


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def tri_file(tmp_path):
    path = tmp_path / "triangle.json"
    path.write_text(triangle().to_json())
    return str(path)


def test_forest_poly_example(capsys, tri_file):
    code, out, _ = run(capsys, "forest-poly", "--graph", tri_file, "--partition", "(1,2,2)")
    assert code == 0
    assert out == '{"poly":"b*c","forests":1}\n'


def test_forest_poly_round_trips_through_parser(capsys, tri_file):
    _, out, _ = run(capsys, "forest-poly", "--graph", tri_file, "--partition", "(1,1,1)")
    data = json.loads(out)
    G = triangle()
    assert Poly.parse(data["poly"], G.var_ids()).to_text(G.name_map()) == data["poly"]
    assert data["forests"] == 3


def test_gen_identity_json_round_trip(capsys):
    code, out, _ = run(capsys, "gen-identity", "--m", "4", "--c", "4", "--j", "1")
    assert code == 0
    data = json.loads(out)
    assert (data["m"], data["c"], data["j"]) == (4, 4, 1)
    assert FormalSum.from_json_terms(4, data["terms"]) == gen_identity(4, 4, 1).sum
    assert json.dumps(gen_identity(4, 4, 1).to_dict(), separators=(",", ":")) + "\n" == out


def test_verify_identity_and_perturbation(capsys, tmp_path):
    good = tmp_path / "id.json"
    good.write_text(json.dumps(gen_identity(4, 2, 1).to_dict()))
    code, out, _ = run(capsys, "verify-identity", "--file", str(good), "--graph", "K4", "--graph", "K5:4")
    assert code == 0 and json.loads(out)["verified"] is True

    data = json.loads(good.read_text())
    data["terms"][3]["coeff"] = "2"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify-identity", "--file", str(bad), "--graph", "K4")
    assert code == 1 and json.loads(out)["verified"] is False


@pytest.mark.parametrize(
    "argv",
    [
        ["verify-identity", "--file", "/nonexistent.json", "--graph", "K4"],
        ["forest-poly", "--graph", "nowhere.json", "--partition", "(1,2)"],
        ["forest-poly", "--graph", "triangle", "--partition", "(1,2)"],
        ["forest-poly", "--graph", "triangle", "--partition", "(1,7,1)"],
        ["gen-identity", "--m", "4", "--c", "5", "--j", "1"],
        ["mtt-check", "--graph", "triangle", "--rows", "1,2", "--cols", "1"],
        ["dim", "--m", "4", "--seed", "-1"],
        ["selftest", "--only", "nonsense"],
        ["no-such-command"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2
    assert out == ""


def test_schema_error_in_graph_file(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text('{"n": 3, "edges": [[1, 1, "a"]]}')
    code, _, err = run(capsys, "forest-poly", "--graph", str(path), "--partition", "(1,2,3)")
    assert code == 2 and "self-loop" in err
    path.write_text("not json")
    assert run(capsys, "forest-poly", "--graph", str(path), "--partition", "(1,2,3)")[0] == 2


def test_mtt_check(capsys):
    code, out, _ = run(capsys, "mtt-check", "--graph", "triangle", "--rows", "1,3", "--cols", "1,2")
    assert code == 0
    assert json.loads(out) == {"minor_det": "-a", "signed_forest_sum": "-a", "agree": True}


def test_mtt_check_reports_disagreement(capsys, monkeypatch):
    import forestident.laplacian as lap

    monkeypatch.setattr(lap, "forest_sign", lambda rows, cols, pairing: 1)
    code, out, _ = run(capsys, "mtt-check", "--graph", "triangle", "--rows", "1,3", "--cols", "1,2")
    assert code == 1 and json.loads(out)["agree"] is False


def test_dim_example(capsys):
    code, out, _ = run(capsys, "dim", "--m", "4", "--seed", "7", "--graphs", "auto")
    assert code == 0
    assert out == '{"m":4,"expected":8,"lower":8,"upper":8,"pass":true}\n'


def test_dim_with_a_one_graph_corpus_is_an_error(capsys):
    # Stabilisation needs two further graphs after the first, so one graph is not enough.
    code, out, err = run(capsys, "dim", "--m", "3", "--graphs", "triangle")
    assert code == 2 and "stabilise" in err


def test_blocks_and_colexp(capsys):
    code, out, _ = run(capsys, "blocks", "--m", "5")
    assert code == 0 and json.loads(out)["terms"] == 80
    code, out, _ = run(capsys, "colexp-check", "--k", "3", "--trials", "20", "--seed", "8")
    assert code == 0 and json.loads(out)["nonzero"] == 0


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "--output", str(target), "blocks", "--m", "4")
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["terms"] == 24


@pytest.mark.parametrize(
    "argv",
    [
        ["dim", "--m", "3", "--seed", "123"],
        ["vy-check", "--trials", "4", "--seed", "77"],
        ["colexp-check", "--k", "4", "--trials", "10", "--seed", "5"],
    ],
)
def test_byte_identical_under_fixed_seed(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def test_selftest_only_blocks(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "blocks")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2 and lines[0].startswith("[PASS] 5 blocks")


def test_console_entry_point(tri_file):
    proc = subprocess.run(
        [sys.executable, "-m", "forestident.cli", "forest-poly", "--graph", tri_file, "--partition", "(1,2,3)"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"poly": "a*b*c", "forests": 1}
    assert MarkedGraph.from_json(open(tri_file).read()) == triangle()
