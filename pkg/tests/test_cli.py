import json
import os
import subprocess
import sys

import pytest

from idealforge import NatSet
from idealforge.cli import build_parser, load_coloring, parse_pair_literal, \
    parse_set_literal, run
from idealforge.errors import Incomplete, ParseError
from idealforge.report import dumps_stable


def invoke(*argv):
    args = build_parser().parse_args(list(argv))
    return run(args)


def test_parse_set_literal():
    assert parse_set_literal("1,3,9") == NatSet([1, 3, 9])
    assert parse_set_literal("0..4") == NatSet([0, 1, 2, 3, 4])
    assert parse_set_literal("pow2(3)") == NatSet([1, 2, 4])
    assert parse_set_literal("1..3, pow2(2) 9") == NatSet([1, 2, 3, 9])
    assert parse_set_literal("") == NatSet()
    assert parse_set_literal("5, 5 5") == NatSet([5])


def test_parse_set_literal_errors():
    with pytest.raises(ParseError) as err:
        parse_set_literal("1, x, 3")
    assert err.value.position == 3
    with pytest.raises(ParseError):
        parse_set_literal("5..2")
    with pytest.raises(ParseError):
        parse_set_literal("pow2(x)")


def test_parse_pair_literal():
    assert parse_pair_literal("0 0, 0 1; 1 5") == [(0, 0), (0, 1), (1, 5)]
    with pytest.raises(ParseError):
        parse_pair_literal("0 1, nope")


def test_load_coloring_builtins(tmp_path):
    phi = load_coloring("identity", 10, "nat")
    assert phi(7) == 7
    assert load_coloring("const:7", 5, "pair")((0, 1)) == 7
    assert load_coloring("min-alpha", 16, "nat")(12) == 4
    assert load_coloring("pairing", 5, "pair")((0, 1)) == 2
    with pytest.raises(ParseError):
        load_coloring("no-such-builtin", 5, "nat")


def test_load_coloring_tables(tmp_path):
    nat = tmp_path / "nat.tbl"
    nat.write_text("0 0\n1 1\n2 2\n# comment\n")
    phi = load_coloring(str(nat), 3, "nat")
    assert [phi(x) for x in range(3)] == [0, 1, 2]

    missing = tmp_path / "short.tbl"
    missing.write_text("0 0\n1 1\n")
    with pytest.raises(Incomplete):
        load_coloring(str(missing), 3, "nat")

    pair = tmp_path / "pair.tbl"
    pair.write_text("0 1 5\n0 2 5\n1 2 5\n")
    psi = load_coloring(str(pair), 3, "pair")
    assert psi((2, 1)) == 5

    bad = tmp_path / "bad.tbl"
    bad.write_text("0 zero\n")
    with pytest.raises(ParseError):
        load_coloring(str(bad), 1, "nat")


def test_oracle_subcommand():
    code, rep = invoke("oracle", "--ideal", "vdw", "--ap-len", "3",
                       "--set", "pow2(8)")
    assert code == 0
    assert rep["body"]["positive"] is False

    code, rep = invoke("oracle", "--ideal", "vdw", "--op", "longest-ap",
                       "--set", "0..9")
    assert rep["body"]["longest_ap"] == 10

    code, rep = invoke("oracle", "--ideal", "summable", "--op", "sum",
                       "--set", "0,1,3")
    assert rep["body"]["reciprocal_sum"] == "7/4"

    code, rep = invoke("oracle", "--ideal", "ramsey", "--op", "clique",
                       "--edges", "0 1, 0 2, 1 2", "--k", "3")
    assert rep["body"]["clique"] == [0, 1, 2]

    code, rep = invoke("oracle", "--ideal", "fin2", "--pairs",
                       "0 0, 0 1, 0 2, 1 5", "--fs-size", "2")
    assert rep["body"]["positive"] is True

    code, rep = invoke("oracle", "--ideal", "hindman", "--op", "tall-witness",
                       "--set", "1..20", "--fs-size", "2", "--target", "7")
    assert code == 0 and len(rep["body"]["witness"]) >= 7

    code, rep = invoke("oracle", "--ideal", "vdw", "--op", "find-ap",
                       "--set", "3,5,7", "--k", "3")
    assert rep["body"]["progression"] == {"start": 3, "difference": 2}

    code, rep = invoke("oracle", "--ideal", "fin2", "--op", "heavy-columns",
                       "--pairs", "0 0, 0 1, 1 5", "--k", "2")
    assert rep["body"]["heavy_columns"] == [0]


def test_fs_subcommand():
    code, rep = invoke("fs", "--op", "very-sparse-subset",
                       "--pool", "1..50", "--k", "4")
    assert code == 0 and rep["body"]["basis"] == [1, 3, 9, 27]

    code, rep = invoke("fs", "--op", "fs", "--set", "1,2,4")
    assert rep["body"]["fs"] == [1, 2, 3, 4, 5, 6, 7]

    code, rep = invoke("fs", "--op", "alpha", "--set", "1,3,9", "--x", "13")
    assert rep["body"]["alpha"] == [1, 3, 9]

    code, rep = invoke("fs", "--op", "very-sparse", "--set", "1,2,4")
    assert rep["body"]["verified"] is False
    assert rep["body"]["counterexample"] == [1, 3]

    code, rep = invoke("fs", "--op", "conflict", "--set", "1,3,9", "--y", "1")
    assert rep["body"]["conflict_set"] == [1, 4, 10, 13]

    code, rep = invoke("fs", "--op", "shift", "--set", "3,5",
                       "--offset", "4", "--direction", "down")
    assert rep["body"]["shifted"] == [1]


def test_canonize_subcommand(tmp_path):
    code, rep = invoke("canonize", "--kind", "pairs", "--op", "classify",
                       "--phi", "min", "--window", "8", "--ground", "0..7")
    assert rep["body"]["case"] == "min"

    code, rep = invoke("canonize", "--kind", "fs", "--op", "find",
                       "--phi", "min-alpha", "--window", "64",
                       "--ground", "pow2(5)", "--m", "3")
    assert rep["body"]["result"] == {"basis": [1, 2, 4], "case": "min"}


def test_adversary_subcommand_and_exit_codes():
    code, rep = invoke("adversary", "--strategy", "w-summable",
                       "--phi", "identity", "--nmax", "3")
    assert code == 0
    steps = rep["body"]["transcript"]["steps"]
    assert steps[2]["chosen"] == [24, 25, 26]
    assert rep["body"]["reverified"]["passed"] is True

    code, rep = invoke("adversary", "--strategy", "w-summable",
                       "--phi", "const:0", "--nmax", "2")
    assert code == 2
    assert rep["body"]["status"] == "exhausted"
    assert rep["body"]["error"]["step"] == 1

    code, rep = invoke("oracle", "--ideal", "vdw", "--set", "oops")
    assert code == 1
    assert rep["body"]["error"]["code"] == "ParseError"


def test_adversary_h_and_r_strategies():
    code, rep = invoke("adversary", "--strategy", "h-summable",
                       "--phi", "min-alpha", "--case", "min",
                       "--basis", "pow2(14)", "--nmax", "6")
    assert code == 0
    assert rep["body"]["transcript"]["certificate"]["sum"]

    code, rep = invoke("adversary", "--strategy", "r-summable",
                       "--phi", "pairing", "--case", "inj",
                       "--ground", "0..80", "--nmax", "6")
    assert code == 0
    assert rep["body"]["reverified"]["passed"] is True


def test_search_subcommand():
    code, rep = invoke("search", "--src-ideal", "vdw", "--src-ground", "0..4",
                       "--dst-ideal", "vdw", "--dst-ground", "0..4",
                       "--ap-len", "3")
    assert code == 0
    assert rep["body"]["outcome"]["exhausted"] is False

    code, rep = invoke("search", "--src-ideal", "ramsey", "--src-ground", "3",
                       "--dst-ideal", "ramsey", "--dst-ground", "3",
                       "--clique-size", "3")
    assert code == 0
    assert rep["body"]["outcome"]["exhausted"] is False


def test_verify_subcommand_bundles(tmp_path):
    hnr = {
        "window": 4,
        "f": [[0, 1, 1], [0, 2, 3], [0, 3, 9], [1, 2, 27], [1, 3, 81], [2, 3, 243]],
        "b": [0, 1, 2, 3],
        "B": [[0, 1, 2, 3], [0, 1, 2, 3], [0, 2, 3], [0, 3]],
        "D": [1, 3, 9, 27, 81, 243],
        "fs_size": 2,
    }
    path = tmp_path / "hnr.json"
    path.write_text(json.dumps(hnr))
    code, rep = invoke("verify", "--what", "hnr", "--bundle", str(path))
    assert code == 0 and rep["body"]["report"]["passed"] is True

    rnh = {
        "case": 1,
        "X": [1, 10, 100, 1000, 10000],
        "D": [1, 10, 100, 1000, 10000],
        "k": 0,
        "x": [1, 10],
        "Dn": [[10, 100], [100]],
        "f": [[v, 1, 0] for v in
              [1, 10, 11, 100, 101, 110, 111, 1000, 1001, 1010, 1011, 1100,
               1101, 1110, 1111, 10000, 10001, 10010, 10011, 10100, 10101,
               10110, 10111, 11000, 11001, 11010, 11011, 11100, 11101, 11110,
               11111]],
    }
    path = tmp_path / "rnh.json"
    path.write_text(json.dumps(rnh))
    code, rep = invoke("verify", "--what", "rnh", "--bundle", str(path))
    assert code == 0 and rep["body"]["report"]["passed"] is True

    reduction = {
        "src": {"ideal": "vdw", "ground": "0..4"},
        "dst": {"ideal": "vdw", "ground": "0..4"},
        "map": [[x, x] for x in range(5)],
    }
    path = tmp_path / "red.json"
    path.write_text(json.dumps(reduction))
    code, rep = invoke("verify", "--what", "reduction", "--bundle", str(path),
                       "--ap-len", "3")
    assert code == 0 and rep["body"]["report"]["passed"] is True

    final = {
        "window": 4,
        "f": [[0, 1, 1], [0, 2, 3], [1, 2, 4], [0, 3, 9], [1, 3, 9], [2, 3, 9]],
        "D": [1, 3, 9],
        "b": [0, 1, 2, 3],
        "C": [1, 3],
    }
    path = tmp_path / "final.json"
    path.write_text(json.dumps(final))
    code, rep = invoke("verify", "--what", "final", "--bundle", str(path))
    assert code == 0 and rep["body"]["report"]["passed"] is True
    assert rep["body"]["report"]["meta"]["sizes"] == {"X": 1, "Y": 4, "Z": 1}


def test_report_determinism_in_process():
    first = dumps_stable(invoke("adversary", "--strategy", "w-summable",
                                "--phi", "identity", "--nmax", "4")[1])
    second = dumps_stable(invoke("adversary", "--strategy", "w-summable",
                                 "--phi", "identity", "--nmax", "4")[1])
    assert first == second


def test_report_determinism_across_thread_settings(tmp_path):
    cmd = [sys.executable, "-m", "idealforge.cli", "adversary",
           "--strategy", "w-summable", "--phi", "identity", "--nmax", "3"]
    outputs = []
    for threads in ("1", "7"):
        env = dict(os.environ, IDEALFORGE_THREADS=threads)
        res = subprocess.run(cmd, capture_output=True, env=env, cwd=str(tmp_path))
        assert res.returncode == 0
        outputs.append(res.stdout)
    assert outputs[0] == outputs[1]


def test_certificate_recomputes_from_report():
    from fractions import Fraction

    from idealforge import NatColoring, reciprocal_sum

    code, rep = invoke("adversary", "--strategy", "w-summable",
                       "--phi", "identity", "--nmax", "5")
    t = rep["body"]["transcript"]
    witness = NatSet(t["witness"]["set"])
    phi = NatColoring.identity(40000)
    recomputed = reciprocal_sum(NatSet(phi(x) for x in witness))
    assert Fraction(t["certificate"]["sum"]) == recomputed
