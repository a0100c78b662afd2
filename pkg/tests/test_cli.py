import json
import subprocess
import sys

import pytest

from conftest import q
from cantorsurj.cli import main
from cantorsurj.experiments import QCopy
from cantorsurj.intervals import Filtering
from cantorsurj.surjections import from_filtering, identity


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_tangent(capsys):
    code, out, _ = run(capsys, "tangent", "4")
    assert code == 0 and out == "272\n"


def test_types(capsys):
    code, out, _ = run(capsys, "types", "2")
    got = json.loads(out)
    assert code == 0 and got["count"] == 2
    assert got["types"] == [[1, 0, 2], [2, 0, 1]]


def test_type_of_fingerprint(capsys, files):
    pts = files("pts.json", [p.to_json() for p in identity(2).fingerprint(2)])
    code, out, _ = run(capsys, "type-of", pts)
    got = json.loads(out)
    # nested tuple: legitimately answered as non-diagonal, color 0
    assert code == 0 and not got["diagonal"] and got["color"] == 0
    assert got["levels"] is None


def test_type_of_diagonal(capsys, files):
    pts = files("pts.json", [q(0, 0, 0).to_json(), q(0, 0, 1, 0).to_json()])
    code, out, _ = run(capsys, "type-of", pts)
    got = json.loads(out)
    assert got["diagonal"] and got["levels"] == [1, 0, 2] and got["color"] == 0


def test_color_devlin(capsys, files):
    pts = files("pts.json", {"points": [q(0, 0, 0, 0).to_json(), q(0, 1, 0).to_json()]})
    code, out, _ = run(capsys, "color-devlin", pts)
    assert code == 0 and out == "1\n"


def test_search_type(capsys, files):
    surj = files("id.json", identity(2).to_json())
    code, out, _ = run(capsys, "search-type", surj, "--levels", "1,0,2")
    got = json.loads(out)
    assert code == 0 and got["depth"] == 2 and len(got["found"]) == 2
    assert not got["exhausted"]


def test_eval(capsys, files):
    surj = files("h.json", from_filtering(Filtering(2, ((q(0, 0),),))).to_json())
    code, out, _ = run(capsys, "eval", surj, "--point", '{"b":2,"stem":[0,0],"tail":1}')
    got = json.loads(out)
    assert code == 0 and got["exact"] == {"b": 2, "stem": [0], "tail": 1}


def test_compose_and_factor(capsys, files, tmp_path):
    inner = files("h.json", from_filtering(Filtering(2, ((q(0, 0),),))).to_json())
    outer = files("id.json", identity(2).to_json())
    code, out, _ = run(capsys, "compose", outer, inner)
    assert code == 0
    chain = tmp_path / "chain.json"
    chain.write_text(out)
    code, out, _ = run(capsys, "factor", str(chain), inner, "--depth", "2")
    got = json.loads(out)
    assert code == 0 and got["depth"] == 2


def test_dist_tokens(capsys, files):
    a = files("id.json", identity(2).to_json())
    b = files("h.json", from_filtering(Filtering(2, ((q(0, 0),),))).to_json())
    assert run(capsys, "dist", a, b) == (0, "2^0\n", "")
    assert run(capsys, "dist", a, a) == (0, "0 (to cap 64)\n", "")
    code, out, _ = run(capsys, "dist", a, a, "--cap", "8")
    assert out == "0 (to cap 8)\n"


def test_boundaries(capsys, files):
    surj = files("id.json", identity(2).to_json())
    code, out, _ = run(capsys, "boundaries", surj, "--depth", "2")
    got = json.loads(out)
    assert code == 0 and len(got["entries"]) == 3
    assert got["entries"][1] == {"b": 2, "stem": [0], "tail": 1}


def test_color_omega(capsys, files):
    copy = files("y.json", QCopy.unrestricted(identity(2)).to_json())
    code, out, _ = run(capsys, "color-omega", copy)
    assert code == 0 and out == "0\n"


def test_witness_omega(capsys, files):
    copy = files("y.json", QCopy.unrestricted(identity(2)).to_json())
    code, out, _ = run(capsys, "witness-omega", copy, "--target", "2")
    got = json.loads(out)
    assert code == 0 and got["color"] == 2


def test_witness_omega_cap_failure(capsys, files):
    copy = files("y.json", QCopy.unrestricted(identity(2)).to_json())
    code, out, err = run(capsys, "witness-omega", copy, "--target", "40", "--cap", "6")
    assert code == 1
    dump = json.loads(out)
    assert dump["target"] == 40 and "error" in dump


def test_realize_all(capsys, files):
    surj = files("id.json", identity(2).to_json())
    code, out, _ = run(capsys, "realize-all", surj, "--k", "1")
    got = json.loads(out)
    assert code == 0 and got["complete"] and got["t"] == 1


def test_oscillation(capsys, files):
    spec = files(
        "spec.json",
        {"b": 2, "k": 2, "colors": 16, "kind": "relabeled_types", "relabel": list(range(16))},
    )
    code, out, _ = run(capsys, "oscillation", spec, "--eps", "0.3", "--seed", "0")
    got = json.loads(out)
    assert code == 0 and got["regime"] == "exact" and got["guaranteed"]


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "42", "--only", "1,2")
    assert code == 0
    assert out.startswith("cantorsurj verify seed=42\n")
    assert out.endswith("2/2 passed, seed=42\n")


def test_verify_json_flag(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "42", "--only", "1", "--json")
    got = json.loads(out)
    assert code == 0 and got["passed"] and got["seed"] == "42"


def test_malformed_input_exits_2(capsys, files, tmp_path):
    code, _, err = run(capsys, "type-of", str(tmp_path / "missing.json"))
    assert code == 2 and err.startswith("error:")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "color-devlin", str(bad))
    assert code == 2 and "bad.json" in err
    notpts = files("notpts.json", {"points": [{"b": 2, "stem": [0]}]})
    code, _, err = run(capsys, "type-of", notpts)
    assert code == 2


def test_bad_levels_exits_2(capsys, files):
    surj = files("id.json", identity(2).to_json())
    code, _, err = run(capsys, "search-type", surj, "--levels", "0,1,2")
    assert code == 2 and err.startswith("error:")


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "cantorsurj", "tangent", "3"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0 and out.stdout == "16\n"
