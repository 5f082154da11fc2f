"""End-to-end command-line interface behavior."""

import json

import pytest

from hornreduce.clauses import Theory, alpha_equivalent, canonical_key, parse_clause
from hornreduce.fragments import enumerate_fragment, horn_2c
from hornreduce.cli import run
from hornreduce.reduction import c_base, hnr_family
from hornreduce.resolution import proof_from_json_dict, replay_proof

from conftest import cl


def write_chain_theory(tmp_path, length=3):
    lines = []
    for k in range(1, length + 1):
        body = ", ".join(f"P{i}(a)" for i in range(1, k + 1))
        lines.append(f"P0(a) :- {body}.")
    path = tmp_path / "chain.thy"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# enumerate
# ---------------------------------------------------------------------------

def test_enumerate_unit_clauses():
    code, out, err = run(["enumerate", "--arity", "1", "--body", "0"])
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 1
    assert alpha_equivalent(parse_clause(lines[0]), cl("P0(a)."))


def test_enumerate_count_smallest_connected_fragment():
    code, out, _ = run(["enumerate", "--arity", "1", "--body", "3",
                        "--connected", "--most-general", "--count"])
    assert code == 0
    assert out == "3\n"


def test_enumerate_json_matches_plain_listing():
    argv = ["enumerate", "--arity", "2", "--body", "2",
            "--two-connected", "--most-general"]
    code, plain, _ = run(argv)
    assert code == 0
    code, as_json, _ = run(argv + ["--json"])
    assert code == 0
    payload = json.loads(as_json)
    assert payload["schema_version"] == 1
    assert payload["count"] == len(payload["clauses"])
    assert payload["clauses"] == plain.splitlines()
    expected = enumerate_fragment(horn_2c(2, 2))
    assert len(payload["clauses"]) == len(expected)
    for line, clause in zip(payload["clauses"], expected):
        assert alpha_equivalent(parse_clause(line), clause)


def test_enumerate_rejects_bad_flags():
    code, _, err = run(["enumerate", "--body", "2"])
    assert code == 64 and "error" in err
    code, _, _ = run(["enumerate", "--arity", "0", "--body", "2"])
    assert code == 64
    code, _, _ = run(["enumerate", "--arity", "1", "--body", "1",
                      "--connected", "--two-connected"])
    assert code == 64


# ---------------------------------------------------------------------------
# reduce
# ---------------------------------------------------------------------------

def test_reduce_theory_file(tmp_path):
    path = write_chain_theory(tmp_path)
    code, out, err = run(["reduce", "--theory", str(path)])
    assert code == 0
    payload = json.loads(out)
    assert payload["schema_version"] == 1
    assert len(payload["core"]) == 2
    assert len(payload["removed"]) == 1
    assert payload["bounds_hit"] is True
    core = Theory(parse_clause(line) for line in payload["core"])
    entry = payload["removed"][0]
    assert alpha_equivalent(parse_clause(entry["clause"]),
                            cl("P0(a) :- P1(a), P2(a), P3(a)."))
    proof = proof_from_json_dict(entry["proof"])
    assert replay_proof(proof, core)
    assert "core 2 clause(s)" in err


def test_reduce_fragment_core_bodies_bounded():
    code, out, _ = run(["reduce", "--fragment", "1,3,c"])
    assert code == 0
    payload = json.loads(out)
    for line in payload["core"]:
        assert parse_clause(line).body_size <= 2


def test_reduce_requires_exactly_one_source(tmp_path):
    path = write_chain_theory(tmp_path)
    code, _, _ = run(["reduce"])
    assert code == 64
    code, _, _ = run(["reduce", "--theory", str(path),
                      "--fragment", "1,3,c"])
    assert code == 64
    code, _, _ = run(["reduce", "--fragment", "1,3,q"])
    assert code == 64
    code, _, _ = run(["reduce", "--theory", str(tmp_path / "missing.thy")])
    assert code == 64


def test_reduce_stdout_is_deterministic():
    first = run(["reduce", "--fragment", "1,3,c"])
    second = run(["reduce", "--fragment", "1,3,c"])
    assert first[1] == second[1]


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def test_check_base_clause_irreducible_exit_zero():
    code, out, err = run(["check", "--clause", str(c_base()),
                          "--mode", "sld", "--arity-cap", "2"])
    assert code == 0
    payload = json.loads(out)
    assert payload["result"] == "irreducible"
    assert "irreducible" in err


def test_check_reducible_clause_exit_one():
    code, out, _ = run(["check", "--clause", "P0(a) :- P1(a), P2(a), P3(a).",
                        "--fragment-class", "c", "--arity-cap", "1"])
    assert code == 1
    payload = json.loads(out)
    assert payload["result"] == "reducible"
    witness = payload["witness"]
    assert parse_clause(witness["c1"]).body_size < 3
    assert parse_clause(witness["c2"]).body_size < 3


def test_check_standard_mode_emits_replayable_proof():
    code, out, _ = run(["check", "--clause", str(c_base()),
                        "--mode", "standard", "--arity-cap", "2"])
    assert code == 1
    payload = json.loads(out)
    proof = proof_from_json_dict(payload["proof"])
    assert replay_proof(proof)
    assert alpha_equivalent(proof.conclusion, c_base())


def test_check_inconclusive_on_tiny_pool_cap():
    code, out, err = run(["check", "--clause", str(c_base()),
                          "--method", "forward", "--arity-cap", "2",
                          "--max-pool", "10"])
    assert code == 2
    assert json.loads(out)["result"] == "inconclusive"
    assert "inconclusive" in err


def test_check_parse_error_exit_sixtyfive():
    code, _, err = run(["check", "--clause", "P0(a :- P1(a)."])
    assert code == 65
    assert "parse error" in err


# ---------------------------------------------------------------------------
# derive
# ---------------------------------------------------------------------------

def test_derive_found(tmp_path):
    path = write_chain_theory(tmp_path, length=2)
    code, out, _ = run(["derive", "--theory", str(path),
                        "--goal", "P0(z) :- P1(z), P2(z), P3(z)."])
    assert code == 0
    payload = json.loads(out)
    assert payload["result"] == "found"
    proof = proof_from_json_dict(payload["proof"])
    theory = Theory(parse_clause(line)
                    for line in (path.read_text().splitlines()))
    assert replay_proof(proof, theory)


def test_derive_unknown_within_bounds(tmp_path):
    path = write_chain_theory(tmp_path, length=1)
    code, out, err = run(["derive", "--theory", str(path),
                          "--goal", "P0(a) :- P1(a), P2(a)."])
    assert code == 2
    assert json.loads(out)["result"] == "unknown"
    assert "not found within bounds" in err


def test_derive_conclusively_not_derivable(tmp_path):
    path = tmp_path / "one.thy"
    path.write_text("P0(a) :- P1(a).\n", encoding="utf-8")
    code, out, _ = run(["derive", "--theory", str(path),
                        "--goal", "G0(a,b) :- G1(a,b).", "--max-depth", "2"])
    assert code == 1
    payload = json.loads(out)
    assert payload["result"] == "not-derivable"
    assert payload["truncated"] is False


# ---------------------------------------------------------------------------
# graph
# ---------------------------------------------------------------------------

def test_graph_report_two_connected():
    code, out, _ = run(["graph", "--clause", "P0(a,b) :- P1(a,c), P2(b,c)."])
    assert code == 0
    assert "connected: yes" in out
    assert "two-connected: yes" in out
    assert "pending: (none)" in out


def test_graph_report_pending_and_disconnected():
    code, out, _ = run(["graph", "--clause", "P0(a) :- P1(a,b)."])
    assert code == 0
    assert "two-connected: no" in out
    assert "pending: b" in out
    code, out, _ = run(["graph", "--clause", "P0(a) :- P1(a), P2(b), P3(b)."])
    assert code == 0
    assert "connected: no" in out


def test_graph_dot_output():
    code, out, _ = run(["graph", "--clause", "P0(a,b) :- P1(a,c), P2(b,c).",
                        "--dot"])
    assert code == 0
    assert out.startswith("graph clause {")
    assert out.rstrip().endswith("}")
    assert 'v0 -- v1 [label="a"];' in out
    assert 'role="head"' in out


# ---------------------------------------------------------------------------
# extend
# ---------------------------------------------------------------------------

def test_extend_single_pair_worked_example():
    code, out, _ = run(["extend",
                        "--clause", "H0(x1) :- P1(x1,x2), P2(x1,x3).",
                        "--pairs", "0,1"])
    assert code == 0
    assert out == ("H0(x1) :- P1(x1,x4), P2(x1,x5), P3(x4,x5), "
                   "P4(x4,x2), P5(x5,x3).\n")


def test_extend_depth_matches_family():
    code, out, _ = run(["extend", "--clause", str(c_base()), "--depth", "1"])
    assert code == 0
    got = {canonical_key(parse_clause(line)) for line in out.splitlines()}
    want = {canonical_key(m) for m in hnr_family(1)}
    assert got == want


def test_extend_validates_flags():
    clause = str(c_base())
    code, _, _ = run(["extend", "--clause", clause])
    assert code == 64
    code, _, _ = run(["extend", "--clause", clause, "--pairs", "0,1",
                      "--depth", "1"])
    assert code == 64
    code, _, _ = run(["extend", "--clause", clause, "--pairs", "0"])
    assert code == 64
    code, _, err = run(["extend", "--clause", clause, "--pairs", "0,3"])
    assert code == 64 and "share" in err
    code, _, _ = run(["extend", "--clause", clause, "--depth", "-1"])
    assert code == 64


# ---------------------------------------------------------------------------
# Shared behavior
# ---------------------------------------------------------------------------

def test_help_exits_zero():
    code, out, _ = run(["--help"])
    assert code == 0
    assert "usage" in out.lower()


def test_timing_goes_to_stderr_only():
    code, out, err = run(["enumerate", "--arity", "1", "--body", "1"])
    assert code == 0
    assert "completed in" in err
    assert "completed in" not in out


def test_theory_file_parse_error(tmp_path):
    path = tmp_path / "bad.thy"
    path.write_text("P0(a) :- nonsense(.\n", encoding="utf-8")
    code, _, err = run(["reduce", "--theory", str(path)])
    assert code == 65
    assert "parse error" in err
