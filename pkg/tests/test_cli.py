"""Command-line surface: outputs, exit codes, determinism."""

import json

from weylbranch.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_dim(capsys):
    code, out, _ = run(capsys, "dim", "B", "2", "2,0", "--p", "5")
    assert code == 0 and out.startswith("13\t")
    code, out, _ = run(capsys, "dim", "D", "4", "0,0,0,2", "--p", "0")
    assert code == 0 and out.startswith("35\t")
    code, out, _ = run(capsys, "dim", "A", "3", "1,0,0")
    assert code == 0 and out.startswith("4\t")
    code, out, _ = run(capsys, "dim", "C", "3", "1,1,0", "--p", "5")
    assert code == 0 and out.startswith("unknown\t")


def test_dim_bad_args(capsys):
    code, _, err = run(capsys, "dim", "B", "2", "2,0,0", "--p", "5")
    assert code == 2 and "error" in err


def test_branch(capsys):
    code, out, _ = run(capsys, "branch", "B", "3", "0,0,1", "c1:Dn")
    assert code == 0
    assert "conservation\t8 = 1 x 4 + 1 x 4" in out
    assert "kappa\t2" in out
    code, out, _ = run(capsys, "branch", "A", "5", "0,0,1,0,0", "c6:Dm")
    assert "conservation\t20 = 1 x 10 + 1 x 10" in out


def test_verify_shipped_and_exit_codes(capsys, tmp_path):
    code, out, err = run(capsys, "verify", "shipped:c4i", "--p", "0", "--rank-cap", "6")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert records and all(r["verdict"] in ("PASS", "INCONCLUSIVE") for r in records)
    assert set(records[0]) == {
        "entry_id", "p", "verdict", "kappa_expected", "kappa_found", "dim_lhs", "dim_rhs", "reasons",
    }
    # empty table: empty report, exit 0
    empty = tmp_path / "empty.tsv"
    empty.write_text("# nothing\n")
    code, out, err = run(capsys, "verify", str(empty))
    assert code == 0 and out == "" and "no entries" in err
    # a wrong row: exit 1
    bad = tmp_path / "bad.tsv"
    bad.write_text("c1\tB:3\tsub=Dn\tL(3)\tp!=2\t5\tw(1,3)\n")
    code, out, _ = run(capsys, "verify", str(bad))
    assert code == 1
    assert any(json.loads(l)["verdict"] == "FAIL" for l in out.splitlines())
    # malformed file: exit 2 with a line diagnostic
    broken = tmp_path / "broken.tsv"
    broken.write_text("c1\tB\tsub=Dn\n")
    code, _, err = run(capsys, "verify", str(broken))
    assert code == 2 and "broken.tsv:1" in err


def test_verify_determinism(capsys):
    _, out1, _ = run(capsys, "verify", "shipped:c136", "--p", "0,5", "--rank-cap", "5")
    _, out2, _ = run(capsys, "verify", "shipped:c136", "--p", "0,5", "--rank-cap", "5")
    assert out1 == out2


def test_scan_assert(capsys):
    code, out, err = run(capsys, "scan", "B", "3", "c1:Dn", "--bound", "2", "--assert")
    assert code == 0 and "assertion passed" in err
    last = json.loads(out.splitlines()[-1])
    assert last["assert"] is True and last["expected"] == [[0, 0, 1]]
    code, out, _ = run(capsys, "scan", "D", "4", "c2:Dl,l=2,t=2", "--bound", "1", "--assert")
    assert code == 0
    last = json.loads(out.splitlines()[-1])
    assert last["expected"] == [[0, 0, 0, 1], [0, 0, 1, 0], [1, 0, 0, 0]]


def test_rootsys_info_and_orbit(capsys):
    code, out, _ = run(capsys, "rootsys-info", "B", "3")
    assert code == 0 and "positive_roots\t9" in out and "eG\t2" in out
    code, out, _ = run(capsys, "orbit", "B", "3", "0,0,1", "--list")
    assert code == 0 and "orbit_size\t8" in out
    assert len([l for l in out.splitlines() if "," in l and "\t" not in l]) == 8


def test_orbit_cap_env(capsys, monkeypatch):
    monkeypatch.setenv("WEYLBRANCH_CAP", "4")
    code, _, err = run(capsys, "orbit", "B", "3", "0,0,1", "--list")
    assert code == 2 and "cap" in err
    monkeypatch.delenv("WEYLBRANCH_CAP")


def test_scan_assert_requires_p0(capsys):
    code, _, err = run(capsys, "scan", "B", "3", "c1:Dn", "--bound", "1", "--p", "7", "--assert")
    assert code == 2 and "requires --p 0" in err


def test_branch_torus_normalizer(capsys):
    code, out, _ = run(capsys, "branch", "A", "3", "0,1,0", "c2:l=0,t=4")
    assert code == 0
    assert "kappa\t6" in out and "clifford\tPASS" in out
