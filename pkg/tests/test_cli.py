"""End-to-end CLI behavior: records, formats, exit codes."""

import json
import subprocess
import sys

BIN = [sys.executable, "-m", "beauville.cli"]


def run(*args):
    proc = subprocess.run(BIN + list(args), capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def records(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


def test_group_info():
    rc, out, _ = run("group", "info", "--group", "sym:4")
    assert rc == 0
    (rec,) = records(out)
    assert rec["record"] == "group-info"
    assert rec["order"] == 24 and rec["aut_order"] == 24
    assert sum(rec["class_sizes"]) == 24


def test_json_lines_are_canonical():
    rc, out, _ = run("abelian", "bounds", "--n", "25")
    assert rc == 0
    line = out.splitlines()[0]
    rec = json.loads(line)
    # canonical: sorted keys, compact separators, rationals as num/den
    assert line == json.dumps(rec, sort_keys=True, separators=(",", ":"))
    assert rec["N"] == 15000
    assert rec["h_lower"] == {"num": 625, "den": 3}
    assert rec["h_upper"] == 2500


def test_structures_exists_sizes():
    rc, out, _ = run("structures", "exists", "--group", "alt:5",
                     "--sizes", "3,3")
    assert rc == 0
    (rec,) = records(out)
    assert rec["status"] == "none-exhaustive"
    rc, out, _ = run("structures", "exists", "--group", "ab:5,5",
                     "--sizes", "3,3")
    (rec,) = records(out)
    assert rec["status"] == "found" and len(rec["witness"]) == 2


def test_structures_exists_typed():
    rc, out, _ = run("structures", "exists", "--group", "ab:5,5",
                     "--type1", "5,5,5", "--type2", "5,5,5")
    assert rc == 0
    (rec,) = records(out)
    assert rec["status"] == "found"
    assert rec["tau1"] == [5, 5, 5] and rec["tau2"] == [5, 5, 5]


def test_orbits_count_d_and_h():
    rc, out, _ = run("orbits", "count-d", "--group", "ab:5,5",
                     "--type", "5,5,5", "--verify")
    assert rc == 0
    (rec,) = records(out)
    assert rec["count"] == 80
    rc, out, _ = run("orbits", "count-h", "--group", "ab:5,5",
                     "--type1", "5,5,5", "--type2", "5,5,5")
    (rec,) = records(out)
    assert rec["count"] == 1


def test_psl2_table():
    rc, out, _ = run("psl2", "table", "--p", "7", "--max-order", "7")
    assert rc == 0
    recs = records(out)
    assert recs
    first = next(r for r in recs if r["triple"] == [2, 3, 7])
    assert first["d_prime"] == 1 and first["method"] == "closed-form"


def test_abelian_admits_and_construct():
    rc, out, _ = run("abelian", "admits", "--factors", "2,2,2",
                     "--r1", "5", "--r2", "5")
    assert rc == 0
    (rec,) = records(out)
    assert rec["admits"] is False
    rc, out, _ = run("abelian", "construct", "--p", "7", "--r", "2")
    (rec,) = records(out)
    assert rec["invariants"]["k2"] == 8 * rec["invariants"]["chi"]


def test_invariants_compute():
    rc, out, _ = run("invariants", "compute", "--group", "ab:5,5",
                     "--type1", "5,5,5", "--type2", "5,5,5")
    assert rc == 0
    (rec,) = records(out)
    assert rec["chi"] == 1 and rec["k2"] == 8 and rec["euler"] == 4


def test_invariants_non_realizable_exit_codes():
    rc, out, _ = run("invariants", "compute", "--group", "ab:2,2",
                     "--type1", "2,2,2", "--type2", "2,2,2")
    assert rc == 0  # reported, not an error without --strict
    (rec,) = records(out)
    assert rec["status"] == "non-realizable"
    rc, _, _ = run("--strict", "invariants", "compute", "--group", "ab:2,2",
                   "--type1", "2,2,2", "--type2", "2,2,2")
    assert rc == 1


def test_usage_errors_exit_2():
    rc, _, err = run("group", "info", "--group", "nope:7")
    assert rc == 2
    rc, _, _ = run("structures", "exists", "--group", "sym:3")
    assert rc == 2  # neither --sizes nor --type1/--type2
    rc, _, _ = run("orbits", "count-d", "--group", "sym:3", "--type", "0,1")
    assert rc == 2


def test_verify_all_small():
    rc, out, _ = run("verify", "all", "--max-order", "30")
    recs = records(out)
    assert rc == 0
    assert all(r["status"] == "pass" for r in recs)
    assert len(recs) == 12


def test_table_format():
    rc, out, _ = run("--format", "table", "group", "info", "--group", "sym:3")
    assert rc == 0
    assert "order" in out and "6" in out
