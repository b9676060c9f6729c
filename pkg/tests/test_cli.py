import json
import subprocess
import sys

import pytest

from fillings.cli import main
from fillings.complex import AbstractTriangulation, dump, load, validate
from fillings.plmesh import presets
from fillings.search import wheel
from fillings.separators import MengerCertificate

QUAD = AbstractTriangulation(4, [(0, 1, 2), (0, 2, 3)], 4)


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, K in [("w4", wheel(4)), ("w5", wheel(5)), ("quad", QUAD)]:
        paths[name] = tmp_path / f"{name}.json"
        dump(K, paths[name])
    paths["bad"] = tmp_path / "bad.json"
    paths["bad"].write_text("{not json")
    paths["tri"] = tmp_path / "tri.json"
    paths["tri"].write_text(presets.equilateral_triangle().dumps())
    paths["mismatch"] = tmp_path / "mismatch.json"
    paths["mismatch"].write_text(json.dumps({"triangles": [[1, 1, 1], [2, 2, 2]], "gluings": [[[0, 0], [1, 0]]]}))
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify(capsys, files):
    code, out, _ = run(capsys, "verify", "-i", files["w4"], "--delta", "1")
    assert code == 0 and json.loads(out)["is_delta_filling"]
    code, out, _ = run(capsys, "verify", "-i", files["quad"], "--delta", "1")
    rec = json.loads(out)
    assert code == 1 and rec["lipschitz"]["witness"] == [0, 2] and rec["lipschitz"]["delta"] == [1, 2]
    code, _, err = run(capsys, "verify", "-i", files["bad"])
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "verify", "-i", files["w4"], "--delta", "0")
    assert code == 2


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--n", 9)
    rec = json.loads(out)
    assert code == 0
    assert rec["vertex_lower_bound"] == {"value": "12", "ceiling": 12}
    assert rec["triangle_lower_bound"]["value"] == "13"
    assert rec["chi"] == 2
    assert rec["path_sum_bound"] == {"1": "3/2", "2": "4", "3": "15/2", "4": "12"}
    assert rec["continuous_area_bound"] == pytest.approx(4.2736, abs=1e-4)
    assert run(capsys, "bounds", "--n", 9, "--delta", "0")[0] == 2


def test_bounds_text(capsys):
    code, out, _ = run(capsys, "bounds", "--n", 9, "--format", "text")
    assert code == 0 and "chi: 2" in out.splitlines()


def test_search(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--n", 4, "-o", tmp_path / "s")
    assert code == 0 and json.loads(out)["d_value"] == 5
    W = load(tmp_path / "s" / "witness.json")
    assert validate(W).ok and W.num_vertices == 5
    assert json.loads((tmp_path / "s" / "search.json").read_text())["proof_of_minimality"]
    code, out, _ = run(capsys, "search", "--n", 3)
    assert code == 0 and json.loads(out)["d_value"] == 3
    code, out, _ = run(capsys, "search", "--n", 6, "--budget-nodes", 10)
    assert code == 3 and json.loads(out)["budget_exhausted"]


def test_certificates(capsys, files, tmp_path):
    code, out, _ = run(capsys, "certificates", "-i", files["w5"], "--x", 0, "--y", 2, "-o", tmp_path / "c")
    rec = json.loads(out)
    assert code == 0
    assert rec["path_count"] == 1 and rec["menger"]["separator"] == [5] and rec["sperner"]["walk"] == [0, 5, 2]
    assert rec["menger_path_floor"] == "1"
    cert = MengerCertificate.from_dict(json.loads((tmp_path / "c" / "menger.json").read_text()))
    assert cert.separator == (5,)
    assert json.loads((tmp_path / "c" / "sperner.json").read_text()) == {"walk": [0, 5, 2]}
    assert run(capsys, "certificates", "-i", files["w5"], "--x", 0, "--y", 1)[0] == 2
    assert run(capsys, "certificates", "--preset", "wheel", "--n", 6, "--x", 0, "--y", 3)[0] == 0


def test_mesh(capsys, files, tmp_path):
    code, out, _ = run(capsys, "mesh", "-i", files["tri"], "--k", 20, "-o", tmp_path / "m")
    rec = json.loads(out)
    assert code == 0
    assert rec["report"]["area"] == pytest.approx(3**0.5 / 4, rel=1e-12)
    data = json.loads((tmp_path / "m" / "mesh.json").read_text())
    K = AbstractTriangulation.from_dict(data)
    assert validate(K).ok
    assert (tmp_path / "m" / "mesh.off").read_text().startswith("OFF\n")
    assert json.loads((tmp_path / "m" / "report.json").read_text()) == rec["report"]
    code, _, err = run(capsys, "mesh", "-i", files["mismatch"], "--k", 10)
    assert code == 1 and "validate_surface" in err
    assert run(capsys, "mesh", "-i", files["tri"])[0] == 2


def test_input_errors(capsys, files, tmp_path):
    assert run(capsys, "verify", "-i", tmp_path / "missing.json")[0] == 2
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "verify", "--preset", "disk")[0] == 2
    assert run(capsys, "search")[0] == 2
    assert run(capsys, "search", "--n", 4, "--threads", 0)[0] == 2


def _snapshot(capsys, argv, out_dir):
    code, out, _ = run(capsys, *argv, "-o", out_dir)
    files = {p.name: p.read_bytes() for p in sorted(out_dir.iterdir())} if out_dir.exists() else {}
    return code, out, files


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--preset", "wheel", "--n", 6, "--delta", "1/2"],
        ["bounds", "--n", 30, "--delta", "2/3"],
        ["search", "--n", 5, "--threads", 2],
        ["certificates", "--preset", "wheel", "--n", 8, "--x", 1, "--y", 5],
        ["mesh", "--preset", "disk", "--n", 8, "--k", 20],
    ],
)
def test_determinism(capsys, tmp_path, argv):
    a = _snapshot(capsys, argv, tmp_path / "a")
    b = _snapshot(capsys, argv, tmp_path / "b")
    assert a == b


def test_search_threads_match_single(capsys, tmp_path):
    one = _snapshot(capsys, ["search", "--n", 6], tmp_path / "one")
    two = _snapshot(capsys, ["search", "--n", 6, "--threads", 2], tmp_path / "two")
    assert one == two


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "fillings.cli", "bounds", "--n", "9"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["vertex_lower_bound"]["ceiling"] == 12
