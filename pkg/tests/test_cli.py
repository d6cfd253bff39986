import json
import subprocess
import sys

import pytest

from switchmix.cli import main
from switchmix.generators import gen_monotone_5
from switchmix.graph import format_matrix_text, parse_matrix_text

from conftest import CHAIN5, graph


@pytest.fixture
def staircase(tmp_path):
    path = tmp_path / "s5.txt"
    path.write_text(format_matrix_text(gen_monotone_5()))
    return str(path)


@pytest.fixture
def chain5(tmp_path):
    path = tmp_path / "c5.txt"
    path.write_text(format_matrix_text(graph(CHAIN5)))
    return str(path)


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_recognize(capsys, staircase):
    code, rep = run_json(capsys, ["recognize", staircase])
    assert code == 0 and rep["class"] == "Monotone" and rep["n"] == 5


@pytest.mark.parametrize("method", ["enumerate", "ryser", "chain", "convex-dp", "auto"])
def test_count(capsys, chain5, method):
    code, rep = run_json(capsys, ["count", chain5, "--method", method])
    assert code == 0 and rep["permanent"] == "16"


def test_count_wrong_class_exit_one(capsys, staircase):
    code, rep = run_json(capsys, ["count", staircase, "--method", "chain"])
    assert code == 1 and rep["error"] == "NotChainGraph"


def test_sample_seeded(capsys, staircase):
    _, a = run_json(capsys, ["sample", staircase, "--count", "5", "--seed", "3"])
    _, b = run_json(capsys, ["sample", staircase, "--count", "5", "--seed", "3"])
    assert a == b and len(a["samples"]) == 5
    g = gen_monotone_5()
    for s in a["samples"]:
        assert all(g.has_edge(i, c - 1) for i, c in enumerate(s))


def test_run_text(capsys, staircase):
    assert main(["run", staircase, "--start", "1,2,3,4,5", "--tmax", "100", "--format", "text"]) == 0
    line = capsys.readouterr().out.split()
    assert sorted(map(int, line)) == [1, 2, 3, 4, 5]


def test_bad_start_exit_one(capsys, staircase):
    assert main(["run", staircase, "--start", "1,2"]) == 1


def test_mix(capsys, staircase):
    code, rep = run_json(capsys, ["mix", staircase, "--eps", "0.36787944117144233"])
    assert code == 0 and rep["states"] == 10
    assert rep["tmix"] == {"0.36787944117144233": 11}
    assert abs(rep["gap"] - 0.0663930810699) < 1e-10
    assert main(["mix", staircase, "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t,delta" and lines[1].startswith("0,")


def test_canon(capsys, staircase):
    code, rep = run_json(capsys, ["canon", staircase, "--x", "1,2,3,4,5", "--y", "2,3,1,5,4"])
    assert code == 0 and rep["cycles"] == 2 and rep["invariant_ok"]
    assert rep["length"] == len(rep["moves"])
    assert main(["canon", staircase, "--format", "text"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert json.loads(out[-1])["length"] == len(out) - 1


def test_congestion(capsys, staircase):
    code, rep = run_json(capsys, ["congestion", staircase])
    assert code == 0 and rep["rho_exact"] == "30" and rep["max_load"] == 9
    assert rep["within_bounds"]


def test_climb(tmp_path, capsys):
    path = tmp_path / "h.txt"
    path.write_text("# example\n0\n2.5\n8\n5\n6\n3\n10\n4\n2\n7\n0\n")
    code, rep = run_json(capsys, ["climb", str(path)])
    assert code == 0 and rep["vertices"] == 22 and rep["components"] == [8, 14]
    assert main(["climb", str(path), "--format", "csv"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "event,ax,ay,bx,by" and len(rows) == 15


def test_gen_roundtrip(capsys):
    assert main(["gen", "gk", "3"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("# gk k=3\n")
    assert parse_matrix_text(text).n == 5
    assert main(["gen", "random", "Monotone", "6", "--seed", "4"]) == 0
    assert parse_matrix_text(capsys.readouterr().out).n == 6


def test_bench(capsys, chain5):
    assert main(["bench", chain5, "--count", "3", "--tmax", "10"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "method,n,seconds_per_sample"
    assert {r.split(",")[0] for r in rows[1:]} == {"chain", "convex-dp", "switch"}


def test_missing_file_and_bad_flag(capsys):
    assert main(["count", "/nonexistent/file"]) == 1
    with pytest.raises(SystemExit) as e:
        main(["count", "-", "--format", "xml"])
    assert e.value.code == 2


def test_module_entry_point_stdin():
    text = format_matrix_text(graph(CHAIN5))
    res = subprocess.run([sys.executable, "-m", "switchmix", "count", "-"], input=text,
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["permanent"] == "16"
