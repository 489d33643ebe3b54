from fastapi.testclient import TestClient

from ggc.service import app

client = TestClient(app)


def test_health():
    r = client.get("/health")
    assert r.status_code == 200 and r.json()["status"] == "ok"


def test_solve_total_chi_g():
    r = client.post("/solve", json={"param": "chi-g", "mode": "total", "graph6": "Bw"})
    assert r.status_code == 200
    body = r.json()
    assert body["value"] == 5
    assert body["wins"] == {"1": "Bob", "2": "Bob", "3": "Bob", "4": "Bob", "5": "Alice"}
    assert body["offline_chromatic"] == 3


def test_solve_single_k():
    r = client.post("/solve", json={"param": "gcol", "mode": "edge", "graph6": "Bw", "k": 2})
    assert r.json()["winner"] == "Bob"


def test_orient():
    body = client.post("/orient", json={"graph6": "Bw"}).json()
    assert body["dplus"] == 1 and len(body["orientation"]) == 3
    assert body["certificate"] == {"vertices": [0, 1, 2], "edges_within": 3, "k": 0}


def test_verify_exhaustive_and_random():
    body = client.post("/verify", json={"graph6": "Bg", "k": 6}).json()
    assert body["status"] == "ok" and body["lines"] > 0
    body = client.post("/verify", json={"graph6": "Bw", "k": 4}).json()
    assert body["status"] == "counterexample" and "# winner=Bob" in body["trace"]
    body = client.post("/verify", json={"graph6": "Bg", "exhaustive": False}).json()
    assert body["winner"] == "Alice" and body["k"] == 2 + 3 * 1 + 1


def test_lab_and_conjecture():
    rows = client.post("/lab", json={"corpus": "graph6:Bw,A_", "tasks": ["gcol_edge", "gcol_total"]}).json()["rows"]
    assert [r["conj_diff"] for r in rows] == [2, 2]
    rep = client.post("/conjecture", json={"rows": rows}).json()
    assert rep["histogram"] == {"2": 2} and rep["counterexamples"] == []


def test_error_statuses():
    r = client.post("/solve", json={"param": "gcol", "graph6": "B~"})
    assert r.status_code == 422 and r.json()["kind"] == "ParseError"
    r = client.post("/solve", json={"param": "gcol", "graph6": "Bw", "node_budget": 2})
    assert r.status_code == 503
    r = client.post("/solve", json={"param": "bogus", "graph6": "Bw"})
    assert r.status_code == 422
