import httpx
import pytest
from fastapi.testclient import TestClient

from ggc.cli import EXIT_BAD_INPUT, EXIT_BUDGET, EXIT_INVARIANT, EXIT_OK, main
from ggc.service import app


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_prints_value(capsys):
    code, out, _ = run(capsys, "solve", "--param", "chi-g", "--mode", "total", "--graph6", "Bw")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "5"
    assert "1=B 2=B 3=B 4=B 5=A" in out


def test_solve_union_and_gcol(capsys):
    assert run(capsys, "solve", "--param", "chi-g", "--graph6", "Cw")[1].splitlines()[0] == "3"
    assert run(capsys, "solve", "--param", "gcol", "--mode", "edge", "--graph6", "Bw")[1].splitlines()[0] == "3"


def test_bad_graph6_exits_1(capsys):
    code, _, err = run(capsys, "solve", "--param", "gcol", "--graph6", "B~")
    assert code == EXIT_BAD_INPUT and "offset" in err


def test_budget_exits_3(capsys):
    code, _, _ = run(capsys, "solve", "--param", "gcol", "--graph6", "Bw", "--node-budget", "2")
    assert code == EXIT_BUDGET


def test_orient(capsys):
    code, out, _ = run(capsys, "orient", "--graph6", "Bg")
    assert code == EXIT_OK and out.splitlines()[0] == "1"


def test_verify_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--graph6", "Bg", "--exhaustive")
    assert code == EXIT_OK and out.startswith("ok k=6")
    trace = tmp_path / "t.txt"
    code, out, _ = run(capsys, "verify", "--graph6", "Bw", "--k", "4", "--exhaustive", "--trace", str(trace))
    # losing below the proven bound is not an invariant failure
    assert code == EXIT_OK and out.startswith("counterexample")
    assert run(capsys, "replay", str(trace))[:2] == (EXIT_OK, "replay ok\n")
    trace.write_text(trace.read_text().replace("turn=1 player=A", "turn=1 player=B"))
    assert run(capsys, "replay", str(trace))[0] == EXIT_INVARIANT


def test_lab_and_conjecture(capsys, tmp_path):
    out_csv = tmp_path / "rows.csv"
    code, _, _ = run(capsys, "lab", "--corpus", "exhaustive:1-3", "--out", str(out_csv))
    assert code == EXIT_OK
    code, out, _ = run(capsys, "conjecture", "--in", str(out_csv))
    assert code == EXIT_OK and "diff=2" in out


def test_lab_budget_exits_3(capsys):
    code, out, err = run(capsys, "lab", "--corpus", "graph6:Bw", "--node-budget", "5")
    assert code == EXIT_BUDGET and "skipped" in out and "budget" in err


def test_conjecture_missing_file(capsys, tmp_path):
    assert run(capsys, "conjecture", "--in", str(tmp_path / "none.csv"))[0] == EXIT_BAD_INPUT


@pytest.fixture
def remote(monkeypatch):
    client = TestClient(app)

    def post(url, json=None, timeout=None):
        return client.post(httpx.URL(url).path, json=json)

    monkeypatch.setattr(httpx, "post", post)
    return "http://ggc.test"


def test_remote_matches_local(capsys, remote):
    local = run(capsys, "solve", "--param", "chi-g", "--graph6", "Bw")
    assert run(capsys, "--url", remote, "solve", "--param", "chi-g", "--graph6", "Bw") == local


def test_remote_errors_map_to_exit_codes(capsys, remote):
    assert run(capsys, "--url", remote, "solve", "--param", "gcol", "--graph6", "B~")[0] == EXIT_BAD_INPUT
    assert run(capsys, "--url", remote, "solve", "--param", "gcol", "--graph6", "Bw",
               "--node-budget", "2")[0] == EXIT_BUDGET
