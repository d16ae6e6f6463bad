import json
import subprocess
import sys
from importlib import resources

import pytest

from pidlat import dist as dc
from pidlat.cli import fixed, main
from pidlat.constructions import witness_hat, witness_tilde
from pidlat.dist import JointDistribution

FIXTURES = resources.files("pidlat") / "fixtures"
XOR = str(FIXTURES / "xor_triple.json")
HAT = str(FIXTURES / "hat_table.json")


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    copy = JointDistribution.from_pmf(["S1", "S2", "S3"], {("0", "0", "0"): "1/2", ("1", "1", "1"): "1/2"})
    indep = JointDistribution.from_pmf(["S1", "S2", "S3"], {(a, b, c): "1/8" for a in "01" for b in "01" for c in "01"})
    return {
        "copy": write("copy.json", dc.to_json(copy)),
        "indep": write("indep.json", dc.to_json(indep)),
        "short": write("short.json", {"variables": ["X"], "pmf": [{"outcome": ["0"], "p": "99/100"}]}),
        "hat_spec": write("hat_spec.json", witness_hat().to_json()),
        "tilde_spec": write("tilde_spec.json", witness_tilde().to_json()),
        "bad_spec": write(
            "bad_spec.json",
            {"latents": [{"name": "a", "kind": "xor", "of": ["b"]}], "sources": {"S1": ["a"]}, "target": ["a"]},
        ),
        "closure_spec": write(
            "closure_spec.json",
            {
                "latents": [{"name": "x1", "kind": "free"}, {"name": "x2", "kind": "free"}, {"name": "y", "kind": "xor", "of": ["x1", "x2"]}],
                "sources": {"S1": ["x1"], "S2": ["x2", "y"]},
                "target": ["x1", "x2"],
            },
        ),
    }


def run(capsys, *argv):
    code = main([*argv, "--format", "json"])
    out = capsys.readouterr().out
    doc = json.loads(out) if out.strip() else None
    return code, doc


def test_lattice_table_output(capsys):
    assert main(["lattice", "--sources", "3", "--half"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("# 10")
    assert len(lines[1:]) == 10


def test_lattice_json(capsys):
    code, doc = run(capsys, "lattice", "--sources", "2")
    assert code == 0 and doc["status"] == "ok"
    assert doc["results"]["count"] == 4 and len(doc["results"]["antichains"]) == 4


def test_lattice_cap(capsys):
    code, doc = run(capsys, "lattice", "--sources", "9")
    assert code == 2 and doc["status"] == "input-error"


def test_measures(capsys, files):
    code, doc = run(capsys, "measures", XOR)
    assert code == 0
    assert doc["results"]["entropy"]["S1,S2,S3"] == 2.0
    code, doc = run(capsys, "measures", HAT)
    assert doc["results"]["entropy"]["T"] == 3.0
    code, doc = run(capsys, "measures", files["short"])
    assert code == 2 and doc["status"] == "input-error"


def test_measures_missing_file(capsys, tmp_path):
    code, _ = run(capsys, "measures", str(tmp_path / "absent.json"))
    assert code == 2


def test_sid_xor(capsys):
    code, doc = run(capsys, "sid", XOR)
    assert code == 0
    atoms = doc["results"]["atoms"]
    assert {k for k, v in atoms.items() if v} == {"{1}{23}", "{2}{13}", "{3}{12}"}
    assert doc["results"]["report"]["passed"] is True


def test_sid_independent(capsys, files):
    code, doc = run(capsys, "sid", files["indep"])
    assert code == 0
    assert {k: v for k, v in doc["results"]["atoms"].items() if v} == {"{1}": 1.0, "{2}": 1.0, "{3}": 1.0}


def test_sid_user_red_within_range_passes(capsys, files):
    code, doc = run(capsys, "sid", files["copy"], "--red", "0.5")
    assert code == 0 and doc["results"]["red_source"] == "user"


def test_sid_check_failure(capsys, files):
    code, doc = run(capsys, "sid", files["copy"], "--red", "1.5")
    assert code == 1 and doc["status"] == "check-failed"
    failed = [c["name"] for c in doc["results"]["report"]["checks"] if not c["passed"]]
    assert failed == ["monotonicity"]


def test_sid_wrong_arity(capsys):
    code, _ = run(capsys, "sid", HAT)
    assert code == 2


def test_gk(capsys, files):
    code, doc = run(capsys, "gk", files["copy"], "--group", "S1", "--group", "S2", "--group", "S3")
    assert code == 0 and doc["results"]["bits"] == 1.0
    assert len(doc["results"]["partition"]) == 2
    code, doc = run(capsys, "gk", XOR, "--group", "S1", "--group", "S2", "--group", "S3")
    assert doc["results"]["bits"] == 0.0
    code, doc = run(capsys, "gk", HAT, "--group", "S1", "--group", "S2")
    assert doc["results"]["bits"] == 0.0


def test_gk_errors(capsys):
    assert run(capsys, "gk", XOR, "--group", "S1", "--group", "Q")[0] == 2
    assert run(capsys, "gk", XOR, "--group", "S1")[0] == 2


def test_atoms(capsys, files):
    code, hat = run(capsys, "atoms", files["hat_spec"])
    assert code == 0 and hat["results"]["model"]["admitted"] is True
    assert {k: v for k, v in hat["results"]["atoms"].items() if v} == {"{1}{23}": 1.0, "{2}{13}": 1.0, "{3}{12}": 1.0}
    code, tilde = run(capsys, "atoms", files["tilde_spec"])
    assert code == 0 and tilde["results"]["atoms"] == hat["results"]["atoms"]


def test_atoms_errors(capsys, files):
    assert run(capsys, "atoms", files["bad_spec"])[0] == 2
    code, doc = run(capsys, "atoms", files["closure_spec"])
    assert code == 1 and doc["status"] == "check-failed"
    assert "atoms" not in doc["results"]
    assert doc["results"]["model"]["condition_i"]["violations"] == ["y"]


def test_reproduce_xor(capsys):
    code, doc = run(capsys, "reproduce", "xor-paradox")
    assert code == 0
    assert doc["results"]["downset_sum"] == 3.0 and doc["results"]["mi_total"] == 2.0
    assert doc["results"]["violation"] is True


def test_reproduce_witness(capsys):
    code, doc = run(capsys, "reproduce", "witness-pair")
    assert code == 0
    r = doc["results"]
    assert r["theorem_reproduced"] is True and r["atoms_equal"] is True
    assert (r["mi_hat"], r["mi_tilde"]) == (3.0, 2.0)
    assert r["fixture_match"]["hat_table"] is True


def test_bad_subcommand_exits_2():
    with pytest.raises(SystemExit) as err:
        main(["nonsense"])
    assert err.value.code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["lattice", "--sources", "3"],
        ["measures", XOR],
        ["sid", XOR],
        ["gk", XOR, "--group", "S1", "--group", "S2,S3"],
        ["reproduce", "xor-paradox"],
        ["reproduce", "witness-pair"],
    ],
)
def test_json_round_trip_fixpoint(capsys, argv):
    _, doc = run(capsys, *argv)
    assert set(doc) == {"command", "inputs", "results", "status"}
    again = json.loads(json.dumps(doc))
    assert again == doc
    assert fixed(again) == doc


def test_floats_fixed_to_nine_places():
    assert fixed({"a": [1 / 3, True, "x"]}) == {"a": [0.333333333, True, "x"]}


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pidlat.cli", "lattice", "--sources", "2"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1:] == ["{1}", "{1}{2}", "{2}", "{12}"]
