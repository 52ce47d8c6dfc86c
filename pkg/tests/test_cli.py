"""Command-line interface, driven in process."""

import json

import pytest

from involution_atlas.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_order_numeric(capsys):
    rc, out, _ = run(capsys, "order", "--family", "O+", "--dim", "4",
                     "--q", "3")
    assert rc == 0 and out.strip() == "1152"


def test_order_symbolic(capsys):
    rc, out, _ = run(capsys, "order", "--family", "O+", "--dim", "4",
                     "--symbolic")
    assert rc == 0 and out.strip() == "2q^6 - 4q^4 + 2q^2"


def test_order_rejects_impossible_group(capsys):
    rc, _, err = run(capsys, "order", "--family", "O-", "--dim", "0",
                     "--q", "3")
    assert rc == 2 and "does not exist" in err


def test_involutions_numeric(capsys):
    rc, out, _ = run(capsys, "involutions", "--family", "Omega+",
                     "--dim", "4", "--q", "2")
    assert rc == 0 and out.strip() == "16"
    rc, out, _ = run(capsys, "involutions", "--family", "SO", "--dim", "3",
                     "--q", "3")
    assert rc == 0 and out.strip() == "10"
    rc, out, _ = run(capsys, "involutions", "--family", "O+", "--dim", "2",
                     "--q", "3", "--coset", "SO")
    assert rc == 0 and out.strip() == "2"


def test_involutions_symbolic_needs_branch(capsys):
    rc, _, err = run(capsys, "involutions", "--family", "Omega", "--dim", "3",
                     "--symbolic", "--char-parity", "odd")
    assert rc == 2 and "branch" in err
    rc, out, _ = run(capsys, "involutions", "--family", "Omega", "--dim", "3",
                     "--symbolic", "--branch", "1mod4")
    assert rc == 0 and out.strip() == "(1/2)q^2 + (1/2)q + 1"


def test_gf_verify_pass_and_sign_rules(capsys):
    rc, out, _ = run(capsys, "gf-verify", "--theorem", "6.3a", "--max-n", "6")
    assert rc == 0 and "PASS" in out
    rc, _, err = run(capsys, "gf-verify", "--theorem", "6.1b",
                     "--sign", "plus")
    assert rc == 2 and "no sign choice" in err
    # a signed theorem with no --sign covers both cases
    rc, out, _ = run(capsys, "gf-verify", "--theorem", "6.1a", "--max-n", "4")
    assert rc == 0
    assert "[sign=plus]" in out and "[sign=minus]" in out


def test_gf_verify_rejects_unknown_theorem(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gf-verify", "--theorem", "9.9"])
    assert exc.value.code == 2


def test_asym_tolerance_gate(capsys):
    rc, _, _ = run(capsys, "asym", "--kind", "ratio-omega-so", "--q", "3",
                   "--max-dim", "24", "--tolerance", "1e-3")
    assert rc == 0
    rc, _, _ = run(capsys, "asym", "--kind", "ratio-omega-so", "--q", "3",
                   "--max-dim", "24", "--tolerance", "1e-5")
    assert rc == 1


def test_asym_table_and_parity(capsys):
    rc, out, _ = run(capsys, "asym", "--kind", "so-0mod4", "--q", "3",
                     "--max-dim", "24")
    assert rc == 0
    final = [ln for ln in out.splitlines() if "dim= 24" in ln][0]
    ratio = float(final.split("ratio=")[1].split()[0])
    assert f"{ratio:.4f}" == "1.1690"
    rc, _, err = run(capsys, "asym", "--kind", "omega-even-0mod4", "--q", "3")
    assert rc == 2 and "even" in err


def test_oracle_formula_fixture_label(capsys):
    rc, out, _ = run(capsys, "oracle", "--family", "Sp", "--dim", "4",
                     "--q", "2")
    assert rc == 0 and "formula-fixture 76 = brute 76" in out
    rc, out, _ = run(capsys, "oracle", "--family", "Omega-", "--dim", "4",
                     "--q", "2")
    assert rc == 0 and "16 = brute 16" in out


def test_oracle_cap_exit(capsys):
    rc, _, err = run(capsys, "oracle", "--family", "O+", "--dim", "10",
                     "--q", "5")
    assert rc == 2 and "exceeds cap" in err


def test_tables_match(capsys):
    rc, out, _ = run(capsys, "tables", "--table", "omega", "--max-n", "5")
    assert rc == 0 and "all match" in out
    rc, out, _ = run(capsys, "tables", "--table", "sp", "--max-n", "1")
    assert rc == 0 and out.strip().startswith("0 rows")


def test_json_output_is_deterministic(capsys):
    argv = ["order", "--family", "Sp", "--dim", "4", "--q", "3",
            "--format", "json"]
    rc, first, _ = run(capsys, *argv)
    assert rc == 0
    rc, second, _ = run(capsys, *argv)
    assert first == second
    doc = json.loads(first)
    assert doc["schema"] == 1 and int(doc["order"]) == 51840


def test_json_gf_verify_shape(capsys):
    rc, out, _ = run(capsys, "gf-verify", "--theorem", "6.2", "--max-n", "4",
                     "--format", "json")
    assert rc == 0
    doc = json.loads(out)
    assert doc["schema"] == 1 and doc["all_equal"] is True
    rows = doc["reports"][0]["rows"]
    assert all(r["lhs"] == r["rhs"] for r in rows)
