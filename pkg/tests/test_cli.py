import json

import pytest

from curvlab.cli import main
from curvlab.curvature import build_constant_curvature, load_tensor, validate_acdt, validate_acst
from curvlab.pseudolin import Signature


def run(tmp_path, *argv, name="out.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    text = out.read_text() if out.exists() else None
    return code, text


def test_build_ra(tmp_path):
    code, text = run(tmp_path, "build", "--ra", "p=2", "q=2", "a=1")
    assert code == 0
    data = json.loads(text)
    assert data["validation"] == {"curvature": 0}
    assert data["manifest"]["command"] == "build"
    assert validate_acst(load_tensor(data["tensor"])) == []


def test_build_metric_fab(tmp_path):
    code, text = run(tmp_path, "build", "--metric-fab", 'f="x1^2+x2^2"', "a=0", "b=1", "--at", "0,0,0,0,0")
    assert code == 0
    data = json.loads(text)
    assert data["validation"] == {"curvature": 0, "nabla": 0}
    R = load_tensor(data["curvature"])
    assert R.sig == Signature(2, 3)
    assert validate_acdt(load_tensor(data["nabla"])) == []


def test_build_rphi_is_constant_curvature(tmp_path):
    code, text = run(tmp_path, "build", "--rphi", "phi=diag:1,1,1", "p=0", "q=3")
    assert code == 0
    assert load_tensor(json.loads(text)["tensor"]) == build_constant_curvature(1, Signature(0, 3))


@pytest.mark.parametrize(
    "argv",
    [
        ["--warped", "eps=1,kappa=1,A=0,B=1,fiber=2", "--at", "3/4,1/3,0"],
        ["--gamma", "G[1][1][2]=x1", "--at", "1,0,1/2,1"],
        ["--psi", "[[x1*x1, 0],[0, x2*x2]]", "a=1", "--at", "1,1,0,0,0"],
    ],
)
def test_build_other_families(tmp_path, argv):
    code, text = run(tmp_path, "build", *argv)
    assert code == 0
    assert json.loads(text)["validation"] == {"curvature": 0, "nabla": 0}


def test_check_exit_codes(tmp_path):
    run(tmp_path, "build", "--ra", "p=2", "q=2", "a=1", name="ra.json")
    code, text = run(tmp_path, "check", str(tmp_path / "ra.json"), "--property", "timelike-osserman", "--samples", "300", "--seed", "7")
    assert code == 0
    assert json.loads(text)["verdict"] == "holds-on-samples"

    run(tmp_path, "build", "--metric-fab", 'f="x1^2+2*x2^2"', "a=1", "b=0", "--at", "1/2,-1,0,0,0", name="fab.json")
    code, text = run(tmp_path, "check", str(tmp_path / "fab.json"), "--property", "timelike-jordan-osserman", "--seed", "1")
    assert code == 3
    data = json.loads(text)
    assert data["verdict"] == "fails"
    assert data["witness"]["indices"][0] == 0


def test_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 0,\n "q": ')
    assert main(["check", str(bad), "--property", "spacelike-osserman"]) == 1
    assert "line 2" in capsys.readouterr().err


def test_usage_errors(tmp_path, capsys):
    assert main(["build", "--ra", "p=2", "q=2", "a=2"]) == 1
    assert main(["build", "--metric-fab", 'f="x1^2 +* x2"', "--at", "0,0,0,0"]) == 1
    assert "column" in capsys.readouterr().err
    assert main(["suite", "thm2.4", "--scalar", "float"]) == 1


def test_roundtrip_and_determinism(tmp_path, monkeypatch):
    run(tmp_path, "build", "--metric-fab", 'f="x1^3+x2^2"', "b=1", "--at", "1/2,-1,0,0,0", name="cubic.json")
    data = json.loads((tmp_path / "cubic.json").read_text())
    assert validate_acst(load_tensor(data["curvature"])) == []
    args = ["check", str(tmp_path / "cubic.json"), "--property", "spacelike-jordan-szabo", "--seed", "3"]
    code_a, a = run(tmp_path, *args, name="a.json")
    code_b, b = run(tmp_path, *args, name="b.json")
    assert code_a == code_b == 3
    # the output path is part of the manifest, so compare everything else
    ja, jb = json.loads(a), json.loads(b)
    ja["manifest"].pop("output"), jb["manifest"].pop("output")
    assert ja == jb
    monkeypatch.setenv("CURVLAB_SEED", "3")
    code_c, c = run(tmp_path, *args[:-2], name="a.json")
    jc = json.loads(c)
    assert jc["seed"] == 3 and jc["witness"] == ja["witness"]


def test_csv_output(tmp_path):
    run(tmp_path, "build", "--ra", "p=2", "q=2", "a=1", name="ra.json")
    code, text = run(tmp_path, "check", str(tmp_path / "ra.json"), "--property", "two-nilpotent", "--format", "csv", name="r.csv")
    assert code == 0
    assert text.splitlines()[0] == "property,verdict,samples,seed,witness_indices"


def test_suite_command(tmp_path):
    code, text = run(tmp_path, "suite", "thm2.4", "--seed", "1", "--samples", "60")
    assert code == 0
    data = json.loads(text)
    assert data["passed"] and data["manifest"]["inputs"]["name"] == "thm2.4"
