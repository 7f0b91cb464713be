"""End-to-end CLI tests: records, ledgers, sidecars, reports, exit codes."""

import csv
import hashlib
import json

import pytest

from kwise import (
    SetFamily,
    balanced_block,
    linked_cubes,
    pair_of_cubes,
    pair_of_cubes_size,
)
from kwise.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_record(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    lines = [l for l in out.splitlines() if l]
    assert len(lines) == 1
    return json.loads(lines[0])


def test_construct_linked_cubes_record(capsys):
    rec = run_record(
        capsys, "construct", "linked-cubes", "--n", "9", "--no-timestamp"
    )
    assert rec["schema_version"] == 1
    assert rec["command"] == "construct"
    assert rec["seed"] == 0
    assert rec["params"] == {
        "construction": "linked-cubes",
        "n": 9,
        "s": [1, 2, 3, 4],
    }
    assert rec["result"]["size"] == 45
    assert "timestamp" not in rec
    fam = SetFamily.from_hex(9, rec["result"]["family"])
    assert fam == linked_cubes(9, balanced_block(9))


def test_construct_with_explicit_block_and_parts(capsys):
    rec = run_record(
        capsys, "construct", "pair-of-cubes", "--n", "4", "--s", "1,3",
        "--no-timestamp",
    )
    assert rec["params"]["s"] == [1, 3]
    assert rec["result"]["size"] == pair_of_cubes_size(4, 2)
    rec = run_record(
        capsys, "construct", "series-of-cubes", "--n", "6", "--parts", "3",
        "--no-timestamp",
    )
    assert rec["params"]["parts"] == 3
    assert rec["result"]["size"] == 10


def test_timestamp_controls(capsys):
    args = ("construct", "linked-cubes", "--n", "5")
    stamped = run_record(capsys, *args)
    assert "timestamp" in stamped
    a = run(capsys, *args, "--no-timestamp")
    b = run(capsys, *args, "--no-timestamp")
    assert a == b  # byte-identical reruns
    del stamped["timestamp"]
    assert stamped == json.loads(a[1])


def test_check_maximal_and_witness(capsys):
    good = linked_cubes(4, balanced_block(4)).to_hex()
    rec = run_record(
        capsys, "check", "--n", "4", "--k", "3", "--family", good,
        "--no-timestamp",
    )
    assert rec["result"] == {
        "size": 5,
        "kwise": True,
        "maximal": True,
        "addable_witness": None,
    }
    shaky = linked_cubes(3, 0b001).to_hex()
    rec = run_record(
        capsys, "check", "--n", "3", "--k", "3", "--family", shaky,
        "--no-timestamp",
    )
    assert rec["result"]["kwise"] is True
    assert rec["result"]["maximal"] is False
    assert isinstance(rec["result"]["addable_witness"], int)


def test_closure_record(capsys):
    rec = run_record(
        capsys, "closure", "--n", "2", "--k", "3", "--family", "8",
        "--no-timestamp",
    )
    assert rec["result"]["input_size"] == 1
    assert rec["result"]["size"] == 2
    assert rec["result"]["added"] == 1
    assert rec["result"]["family"] == "9"


def test_search_min_record(capsys):
    rec = run_record(
        capsys, "search-min", "--n", "4", "--k", "3", "--no-timestamp"
    )
    assert rec["result"]["f"] == 2
    assert rec["result"]["optimal"] is True
    assert rec["result"]["lower_bound"] == 2
    assert "seconds" not in rec["result"]
    for hx in rec["result"]["witnesses"]:
        assert len(SetFamily.from_hex(4, hx)) == 2
    timed = run_record(capsys, "search-min", "--n", "3", "--k", "3")
    assert "seconds" in timed["result"]


def test_gen_coverage_record(capsys):
    fam = pair_of_cubes(4, 0b0011).to_hex()
    rec = run_record(
        capsys, "gen-coverage", "--n", "4", "--k", "2", "--family", fam,
        "--no-timestamp",
    )
    assert rec["result"]["count"] == 16
    assert rec["result"]["fraction"] == "1/1"
    assert rec["result"]["uncovered_sample"] == []


def test_disjointness_records(capsys):
    rec = run_record(
        capsys, "disjointness", "--n", "2", "--family", "f", "--elem", "1",
        "--no-timestamp",
    )
    assert rec["result"]["bipartite"] is False
    assert rec["result"]["edge_count"] == 4
    assert rec["result"]["edges"] == [[0, 1], [0, 2], [0, 3], [1, 2]]
    assert rec["result"]["edges_touching"] == 3
    rec = run_record(
        capsys, "disjointness", "--n", "2", "--family", "f", "--family", "f",
        "--no-timestamp",
    )
    assert rec["result"]["bipartite"] is True
    assert rec["result"]["edge_count"] == 9


def test_stats_record(capsys):
    rec = run_record(
        capsys, "stats", "--n", "3", "--family", "0f", "--family", "11",
        "--ell", "2", "--elem", "3", "--no-timestamp",
    )
    assert rec["result"]["alpha"] == "1/1"
    assert rec["result"]["beta"] == "1/2"
    assert rec["result"]["x_ratios"] == ["1/2", "1/2", "0/1"]
    assert rec["result"]["e_total"] == 8
    assert rec["result"]["e_elem"] == 4
    assert rec["result"]["theta"] == "1/1"
    assert rec["result"]["phi"] == "1/1"


def test_audit_record(capsys):
    fam = linked_cubes(9, balanced_block(9)).to_hex()
    rec = run_record(
        capsys, "audit", "--n", "9", "--family", fam, "--s", "1,2,3,4",
        "--eps", "1/8", "--no-timestamp",
    )
    assert rec["result"]["outside_count"] == 420
    assert rec["result"]["pair_bound"] == "420/1"
    assert rec["result"]["product_bound"] == 420
    assert rec["result"]["product_bound_equality"] is True
    assert rec["result"]["hypotheses_met"] is True


def test_family_from_file(tmp_path, capsys):
    hex_path = tmp_path / "fam.hex"
    hex_path.write_text(linked_cubes(4, 0b0011).to_hex() + "\n")
    rec = run_record(
        capsys, "check", "--n", "4", "--k", "3", "--family", f"@{hex_path}",
        "--no-timestamp",
    )
    assert rec["result"]["maximal"] is True


def test_sidecar_for_large_ground(tmp_path, capsys):
    ledger = tmp_path / "runs.jsonl"
    code, out, err = run(
        capsys, "construct", "pair-of-cubes", "--n", "21",
        "--out", str(ledger), "--no-timestamp",
    )
    assert code == 0 and out == ""
    rec = json.loads(ledger.read_text().strip())
    payload = rec["result"]["family"]
    assert set(payload) == {"path", "sha256"}
    sidecar = tmp_path / f"family_{payload['sha256'][:16]}.hex"
    assert str(sidecar) == payload["path"]
    text = sidecar.read_text().strip()
    assert hashlib.sha256(text.encode()).hexdigest() == payload["sha256"]
    assert rec["result"]["size"] == pair_of_cubes_size(21, 10)
    fam = SetFamily.from_hex(21, text)
    assert len(fam) == rec["result"]["size"]


def test_exit_codes(tmp_path, capsys):
    code, _, err = run(capsys, "check", "--n", "2", "--k", "3", "--family", "zz")
    assert code == 1 and "error:" in err
    code, _, err = run(capsys, "check", "--n", "2", "--k", "3")
    assert code == 2
    code, _, err = run(capsys, "frobnicate")
    assert code == 2
    code, _, err = run(capsys)
    assert code == 2
    code, _, err = run(capsys, "report", str(tmp_path / "missing.jsonl"))
    assert code == 1
    code, _, err = run(
        capsys, "audit", "--n", "5", "--family", "ff", "--s", "1", "--eps", "1/8"
    )
    assert code == 1


def build_ledger(path, capsys, entries):
    for argv in entries:
        code, out, err = run(capsys, *argv, "--out", str(path), "--no-timestamp")
        assert code == 0, err


def test_report_tables(tmp_path, capsys):
    ledger = tmp_path / "runs.jsonl"
    good4 = linked_cubes(4, balanced_block(4)).to_hex()
    good3 = linked_cubes(3, balanced_block(3)).to_hex()
    build_ledger(
        ledger,
        capsys,
        [
            ("search-min", "--n", "3", "--k", "3"),
            ("search-min", "--n", "4", "--k", "3"),
            ("search-min", "--n", "3", "--k", "3"),  # duplicate, consistent
            ("check", "--n", "4", "--k", "3", "--family", good4),
            ("check", "--n", "3", "--k", "3", "--family", good3),
            ("check", "--n", "4", "--k", "3", "--family", "0" * 4),  # not linked
        ],
    )
    with ledger.open("a") as fh:
        fh.write("not json at all\n\n")
    code, out, err = run(capsys, "report", str(ledger), "--no-timestamp")
    assert code == 0
    assert "skipped 1 malformed" in err

    f_table = tmp_path / "runs_f_table.csv"
    m_table = tmp_path / "runs_linked_cubes_maximality.csv"
    with f_table.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == [
        "n", "k", "mode", "f", "balanced_pair_size", "series_size", "janzer_size",
    ]
    assert rows[1:] == [
        ["3", "3", "distinct", "2", "3", "", ""],
        ["4", "3", "distinct", "2", "5", "7", "5"],
    ]
    with m_table.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "k", "mode", "size", "maximal"]
    assert rows[1:] == [
        ["3", "3", "distinct", "3", "False"],
        ["4", "3", "distinct", "5", "True"],
    ]
    rec = json.loads(out.strip())
    assert rec["command"] == "report"
    assert rec["result"]["f_rows"] == 2
    assert rec["result"]["maximality_rows"] == 2
    assert rec["result"]["skipped_lines"] == 1


def test_report_empty_ledger(tmp_path, capsys):
    ledger = tmp_path / "empty.jsonl"
    ledger.write_text("")
    code, out, err = run(capsys, "report", str(ledger), "--no-timestamp")
    assert code == 0
    with (tmp_path / "empty_f_table.csv").open() as fh:
        assert len(list(csv.reader(fh))) == 1


def test_report_integrity_violation(tmp_path, capsys):
    ledger = tmp_path / "bad.jsonl"
    base = {
        "schema_version": 1,
        "command": "search-min",
        "params": {"n": 3, "k": 3, "mode": "distinct", "budget": 60.0},
        "seed": 0,
    }
    with ledger.open("w") as fh:
        fh.write(json.dumps({**base, "result": {"f": 2}}) + "\n")
        fh.write(json.dumps({**base, "result": {"f": 3}}) + "\n")
    code, out, err = run(capsys, "report", str(ledger), "--no-timestamp")
    assert code == 1
    assert "integrity violation" in err


def test_report_ignores_volatile_divergence(tmp_path, capsys):
    ledger = tmp_path / "ok.jsonl"
    base = {
        "schema_version": 1,
        "command": "search-min",
        "params": {"n": 3, "k": 3, "mode": "distinct", "budget": 60.0},
        "seed": 0,
    }
    with ledger.open("w") as fh:
        fh.write(json.dumps({**base, "result": {"f": 2, "seconds": 0.1}}) + "\n")
        fh.write(json.dumps({**base, "result": {"f": 2, "seconds": 0.9}}) + "\n")
    code, out, err = run(capsys, "report", str(ledger), "--no-timestamp")
    assert code == 0
