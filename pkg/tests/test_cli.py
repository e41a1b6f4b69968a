import json
import subprocess
import sys

import pytest

from extpow.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


@pytest.fixture
def identity4(tmp_path):
    p = tmp_path / "id.json"
    p.write_text(json.dumps([[int(i == j) for j in range(4)] for i in range(4)]))
    return str(p)


def test_power_identity(capsys, identity4):
    rc, out, _ = run(capsys, "power", "--ring", "fp:7", "--n", "4", "--m", "2", "--matrix", identity4)
    assert rc == 0
    obj = json.loads(out)
    assert obj["ring"] == "fp:7"
    assert obj["rows"] == [[int(i == j) for j in range(6)] for i in range(6)]


def test_commutator_triple(capsys):
    rc, out, _ = run(capsys, "commutator", "--ring", "poly", "--n", "6", "--m", "3", "--I", "1,3,5", "--J", "1,2,4", "--i", "4", "--j", "3")
    assert rc == 0
    obj = json.loads(out)
    assert obj["kind"] == "triple"
    assert obj["factors"] == ["t_{135,123}(xi*zeta)", "t_{145,123}(xi*zeta^2)", "t_{145,124}(-xi*zeta)"]


def test_pretty_commutator(capsys):
    rc, out, _ = run(capsys, "--pretty", "commutator", "--n", "7", "--m", "3", "--I", "135", "--J", "124", "--i", "7", "--j", "6")
    assert rc == 0 and out.strip().endswith("= e")


def test_transvection(capsys):
    rc, out, _ = run(capsys, "transvection", "--n", "4", "--m", "2", "--i", "1", "--j", "3")
    assert json.loads(out)["factors"] == ["t_{12,23}(-xi)", "t_{14,34}(xi)"]


def test_level_and_net_of_ideals(capsys):
    rc, out, _ = run(capsys, "level", "--ring", "z", "--n", "6", "--m", "2", "--gen", "12:34:4", "--gen", "13:14:6")
    assert rc == 0 and json.loads(out)["normal_form"] == 2
    rc, _, err = run(capsys, "level", "--ring", "z", "--n", "5", "--m", "2", "--gen", "12:34:4")
    assert rc == 1 and "net of ideals out of scope" in err


def test_witness_transcript(capsys):
    rc, out, _ = run(capsys, "--pretty", "witness", "raise", "--ring", "poly:xi,zeta,zeta1@fp:101", "--n", "8", "--m", "4", "--k", "2")
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("s0: GIVEN")
    assert "conclusion: t_{1248,1245}(xi^2*zeta*zeta1) in H" in lines
    assert lines[-1] == "valid: True"


def test_witness_json_validates(capsys):
    rc, out, _ = run(capsys, "witness", "equalize", "--ring", "poly:xi@fp:7", "--n", "4", "--m", "2", "--from", "12:34", "--to", "14:23")
    obj = json.loads(out)
    assert rc == 0 and obj["valid"]
    assert obj["derivation"]["conclusion"]["I"] == "1,4"


def test_witness_zfactor_and_perfect(capsys):
    rc, out, _ = run(capsys, "witness", "zfactor", "--n", "6", "--m", "2", "--I", "12", "--J", "34")
    obj = json.loads(out)
    assert rc == 0 and obj["exact"] and obj["conjugators_elementary"]
    rc, out, _ = run(capsys, "witness", "perfect", "--ring", "zmod:9", "--n", "6", "--m", "2", "--I", "12", "--J", "34", "--xi", "3")
    assert rc == 0 and json.loads(out)["exact"]
    rc, out, _ = run(capsys, "witness", "perfect", "--ring", "zmod:9", "--n", "6", "--m", "2", "--i", "1", "--j", "2", "--zeta", "5")
    assert rc == 0 and json.loads(out)["exact"]


def test_form_and_pluecker(capsys):
    rc, out, _ = run(capsys, "--pretty", "form", "--n", "4", "--m", "2")
    assert out.strip() == "x12*x34 - x13*x24 + x14*x23"
    rc, out, _ = run(capsys, "pluecker", "--n", "5", "--m", "2")
    obj = json.loads(out)
    assert obj["provenance"] == "pluecker-sym" and len(obj["generators"]) == 5


def test_stab_and_congr(capsys, tmp_path):
    from extpow import serialize as ser
    from extpow.exterior import ExteriorContext, exterior_power
    from extpow.linalg import Matrix
    from extpow.rings import IntegersMod

    Z9 = IntegersMod(9)
    h = Matrix(Z9, [[1, 2, 0, 0], [0, 1, 0, 3], [4, 0, 1, 0], [0, 0, 0, 1]])
    g = exterior_power(ExteriorContext(4, 2), h)
    p = tmp_path / "g.json"
    p.write_text(json.dumps(ser.matrix_to_json(g)))
    rc, out, _ = run(capsys, "congr", "--matrix", str(p), "--mod", "3")
    assert rc == 0 and json.loads(out)["member"] is True
    rc, out, _ = run(capsys, "stab", "--matrix", str(p), "--system", "pluecker")
    obj = json.loads(out)
    assert rc == 0 and obj["member"] and (obj["n"], obj["m"]) == (4, 2)
    rows = g.copy_rows()
    rows[0][5] = (rows[0][5] + 1) % 9
    p.write_text(json.dumps(ser.matrix_to_json(Matrix(Z9, rows))))
    rc, out, _ = run(capsys, "congr", "--matrix", str(p), "--mod", "3")
    assert json.loads(out)["member"] is False


def test_stab_refuses_six_three_form(capsys, tmp_path):
    p = tmp_path / "e.json"
    p.write_text(json.dumps({"ring": "fp:7", "rows": [[int(i == j) for j in range(20)] for i in range(20)]}))
    rc, _, err = run(capsys, "stab", "--matrix", str(p), "--system", "form", "--n", "6", "--m", "3")
    assert rc == 1 and "Pluecker" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
    rc, _, err = run(capsys, "commutator", "--n", "4", "--m", "2", "--I", "123", "--J", "12", "--i", "1", "--j", "2")
    assert rc == 2 and "--I" in err
    rc, _, _ = run(capsys, "form", "--n", "4")
    assert rc == 2


def test_domain_error_message_verbatim(capsys, tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"ring": "zmod:9", "rows": [[3, 0], [0, 1]]}))
    rc, _, err = run(capsys, "power", "--n", "2", "--m", "1", "--matrix", str(p))
    assert rc == 0
    rc, _, err = run(capsys, "stab", "--matrix", str(p), "--n", "2", "--m", "1", "--system", "pluecker")
    assert rc == 1 and "not invertible over this ring" in err


def test_console_script_is_deterministic():
    cmd = [sys.executable, "-m", "extpow.cli", "verify", "--suite", "formula-m", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    assert a.returncode == 0
    assert a.stdout == b.stdout
    assert json.loads(a.stdout)["ok"]
