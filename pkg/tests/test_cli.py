import json

import pytest

from agdg.cli import int_range, main, parse_vertex


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_stats(capsys):
    code, out, _ = run(capsys, "build", "W:m=2,q=3", "--stats")
    assert code == 0 and "order 54" in out and "regular 3" in out


def test_build_bad_name_exit_2(capsys):
    assert run(capsys, "build", "X:bad")[0] == 2
    assert run(capsys, "build", "Nope:q=3")[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["build"])
    assert e.value.code == 2


def test_build_budget_exit_3(capsys):
    assert run(capsys, "build", "D:k=9,q=9")[0] == 3
    assert run(capsys, "build", "D:k=5,q=5", "--budget-vertices", "100")[0] == 3


def test_build_export_and_report(capsys, tmp_path):
    out_file = tmp_path / "d55.txt"
    code, out, _ = run(capsys, "build", "D:k=5,q=5", "--export", "edges", "--out", str(out_file))
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert len(lines) == 5**5 * 5
    verts = {t for ln in lines for t in ln.split()}
    assert len(verts) == 2 * 5**5
    rep = json.loads(out)
    assert set(rep) >= {"construction", "field", "dimension", "girth", "diameter", "components",
                        "runtime_ms"}


def test_build_json_analysis(capsys):
    code, out, _ = run(capsys, "build", "W:m=2,q=3", "--girth", "--diameter", "--components", "--json")
    rep = json.loads(out)
    assert (rep["girth"], rep["diameter"], rep["components"]) == (8, 6, 1)


def test_build_deterministic(capsys):
    a = run(capsys, "build", "W:m=1,q=3", "--export", "jsonl")[1]
    b = run(capsys, "build", "W:m=1,q=3", "--export", "jsonl")[1]
    assert a == b and a.count("\n") == 27


def test_field_flag(capsys):
    code, out, _ = run(capsys, "build", "W:m=1", "--field", "2^2", "--stats")
    assert code == 0 and "order 32" in out


def test_tables(capsys):
    code, out, _ = run(capsys, "table", "girth-D", "--k", "2..8", "--q", "3")
    rows = [ln.split("\t") for ln in out.splitlines()[1:]]
    assert code == 0 and [r[2] for r in rows] == ["6", "8", "12", "12", "12", "12", "12"]
    assert all(r[4] == "yes" for r in rows)
    code, out, _ = run(capsys, "table", "diam-CD", "--k", "2..6", "--q", "4", "--json")
    assert [r["computed"] for r in json.loads(out)] == ["4", "6", "6", "8", "8"]
    code, out, _ = run(capsys, "table", "components", "--k", "6", "--q", "3")
    assert out.splitlines()[1].split("\t") == ["3", "6", "3", "3", "yes"]


def test_table_unknown_cells_and_jobs(capsys):
    code, out, _ = run(capsys, "table", "girth-D", "--k", "2..3", "--q", "2")
    assert "\u2014" in out
    seq = run(capsys, "table", "girth-D", "--k", "2..5", "--q", "4,5")[1]
    par = run(capsys, "table", "girth-D", "--k", "2..5", "--q", "4,5", "--jobs", "2")[1]
    assert seq == par


def test_verify_suites(capsys):
    assert run(capsys, "verify", "invariants", "--k", "7", "--q", "3", "--seed", "42")[0] == 0
    code, out, _ = run(capsys, "verify", "permpoly", "--q", "27")
    assert code == 0 and out.strip().endswith("permpoly: pass")
    assert run(capsys, "verify", "decomposition", "--construction", "B:q=3")[0] == 0
    assert run(capsys, "verify", "ncc")[0] == 0
    assert run(capsys, "verify", "spectra", "--construction", "W:m=2,q=3")[0] == 0


def test_verify_failure_prints_counterexample(capsys):
    code, out, _ = run(capsys, "verify", "automorphisms", "--k", "5", "--q", "4")
    assert code == 1 and "first counterexample" in out


def test_spectrum_digraph_decompose(capsys):
    code, out, _ = run(capsys, "spectrum", "--construction", "W:m=2,q=3", "--mode", "both", "--json")
    assert code == 0 and json.loads(out)["residual"] < 1e-6
    code, out, _ = run(capsys, "digraph", "--q", "7", "--m", "2", "--n", "3",
                       "--report", "scc,diameter,census")
    assert code == 0 and out.startswith("scc 1")
    code, out, _ = run(capsys, "decompose", "--construction", "B:q=3,m=1,n=1",
                       "--mode", "bipartite", "--json")
    assert code == 0 and json.loads(out)["classes"] == 3


def test_dkq_commands(capsys):
    code, out, _ = run(capsys, "dkq", "invariant", "--k", "6", "--q", "3", "--vertex", "(0,0,0,0,0,1)")
    assert code == 0 and out.startswith("a ")
    assert run(capsys, "dkq", "components", "--k", "6", "--q", "3")[0] == 0
    assert run(capsys, "dkq", "verify-auto", "--kind", "mult", "--a", "2", "--b", "3")[0] == 0
    assert run(capsys, "dkq", "verify-auto", "--kind", "polarity", "--k", "5", "--q", "4")[0] == 1


def test_helpers():
    assert int_range("2..4,9") == [2, 3, 4, 9]
    assert parse_vertex("(1,2)").side == "P"
    assert parse_vertex("[1,2]").coords == (1, 2)


def test_budget_ms(capsys):
    assert run(capsys, "table", "girth-D", "--k", "2..7", "--q", "5", "--budget-ms", "0.001")[0] == 3
