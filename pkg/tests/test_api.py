"""HTTP service: snapshots, match reports, the review loop, error codes."""

import json

import pytest
from fastapi.testclient import TestClient

from rosa.api import KbStore, create_app
from rosa.config import Config
from rosa.graph import graph_from_doc
from rosa.matching import MatchLimits
from rosa.reports import dumps_report, match_report
from rosa.storage import load_kb


@pytest.fixture
def store(kb_file):
    return KbStore.open(kb_file)


@pytest.fixture
def client(store):
    return TestClient(create_app(store))


F7_MAPPING = {"e_prairie": "e7_prairie", "e_cereales": "e7_cereales",
              "e_ruisseau": "e7_rui1", "r_isole": "r7_isole"}


def review_body(decision="accept", mapping=None, expected_version=0, **extra):
    return {"match": {"case_id": "c_fig2", "target_graph_id": "f7",
                      "mapping": mapping or F7_MAPPING},
            "decision": decision, "expected_version": expected_version,
            **extra}


def test_version_endpoint(client):
    res = client.get("/api/version")
    assert res.status_code == 200
    assert res.json() == {"version": 0}


def test_kb_snapshot(client):
    doc = client.get("/api/kb").json()
    assert doc["version"] == 0
    assert {g["id"] for g in doc["graphs"]} == {f"f{i}" for i in range(1, 8)}
    f1 = next(g for g in doc["graphs"] if g["id"] == "f1")
    assert f1["farm_name"] == "La Jasse"
    assert "c_fig2" in f1["cases"]
    assert doc["policy"]["allowed_pairs"] == [["amande", "champ"]]
    assert doc["policy"]["forbidden_pairs"] == [["amande", "parc"]]
    assert any(r["name"] == "origine" and r["repeatable"]
               for r in doc["roles"])
    kinds = {c["kind"] for c in doc["concepts"]}
    assert kinds == {"entity", "relation"}


def test_graph_endpoint_round_trips(client, desk):
    doc = client.get("/api/graphs/f1").json()
    g = graph_from_doc(doc["graph"])
    assert g.canonical_form() == desk.graph("f1").canonical_form()
    assert "c_fig2" in doc["cases"]


def test_graph_endpoint_unknown(client):
    res = client.get("/api/graphs/atlantide")
    assert res.status_code == 404
    assert res.json()["code"] == "UnknownGraph"


def test_cases_endpoint_renders_explanations(client):
    doc = client.get("/api/cases").json()
    by_id = {c["id"]: c for c in doc["cases"]}
    fig2 = by_id["c_fig2"]
    assert fig2["status"] == "validated"
    assert "{v:e_prairie}" in fig2["explanation"]
    assert "{v:" not in fig2["rendered"]
    assert "prairie" in fig2["rendered"]


def test_match_endpoint_is_the_canonical_report(client, desk):
    res = client.post("/api/match", json={"target_graph_id": "f7"})
    assert res.status_code == 200
    assert res.headers["content-type"].startswith("application/json")
    expected = dumps_report(match_report(desk, "f7"))
    assert res.text == expected
    doc = res.json()
    assert doc["results"][0]["case_id"] == "c_fig2"
    assert doc["results"][0]["score"] == 1.0
    assert doc["results"][0]["score_exact"] == "1"
    assert doc["results"][1]["score_exact"] == "11/12"


def test_match_endpoint_repeats_identically(client):
    a = client.post("/api/match", json={"target_graph_id": "f7"}).content
    b = client.post("/api/match", json={"target_graph_id": "f7"}).content
    assert a == b


def test_match_endpoint_policy_override_and_k(client):
    res = client.post("/api/match", json={
        "target_graph_id": "f7", "k": 10,
        "policy": {"threshold": 1.0}})
    hits = [r["case_id"] for r in res.json()["results"]]
    assert "c_fig2" in hits
    assert "c_isole_parcours" not in hits
    res = client.post("/api/match", json={"target_graph_id": "f7", "k": 1})
    assert len(res.json()["results"]) == 1


def test_match_endpoint_errors(client):
    res = client.post("/api/match", json={"target_graph_id": "atlantide"})
    assert res.status_code == 404
    assert res.json()["code"] == "UnknownGraph"
    res = client.post("/api/match", json={"target_graph_id": "f7", "k": 0})
    assert res.status_code == 422
    assert res.json()["code"] == "LimitZero"


def test_review_accept_persists_to_disk(client, store):
    res = client.post("/api/reviews", json=review_body(
        reviewer="jeanne", note="même logique d'isolement"))
    assert res.status_code == 200
    doc = res.json()
    assert doc["decision"] == "accept"
    assert doc["source_case_id"] == "c_fig2"
    assert doc["new_case_id"] == "case-001"
    assert doc["version"] == store.snapshot().version

    on_disk = load_kb(store.path)
    assert on_disk.version == doc["version"]
    assert on_disk.case("case-001").graph_id == "f7"
    assert on_disk.case("c_fig2").status.value == "validated"

    assert client.get("/api/version").json()["version"] == doc["version"]
    top = client.post("/api/match",
                      json={"target_graph_id": "f7"}).json()["results"][0]
    assert top["case_id"] == "case-001"
    assert top["score"] == 1.0


def test_review_reject_records_note_only(client, store):
    res = client.post("/api/reviews", json=review_body(
        "reject", note="pas comparable"))
    assert res.status_code == 200
    assert res.json()["new_case_id"] is None
    kb = store.snapshot()
    assert "pas comparable" in kb.case("c_fig2").notes[-1]
    assert set(kb.cases) == set(load_kb(store.path).cases)


def test_review_stale_version_is_409(client, store):
    before = store.snapshot()
    res = client.post("/api/reviews", json=review_body(expected_version=41))
    assert res.status_code == 409
    assert res.json()["code"] == "StaleVersion"
    assert store.snapshot() is before  # nothing published


def test_review_rejects_bad_requests(client):
    res = client.post("/api/reviews", json=review_body(
        "reject", edited_text="interdit ici"))
    assert res.status_code == 422
    assert res.json()["code"] == "InvalidRequest"

    partial = {"e_prairie": "e7_prairie"}
    res = client.post("/api/reviews", json=review_body(mapping=partial))
    assert res.status_code == 422
    assert res.json()["code"] == "InvalidMapping"

    body = review_body()
    del body["expected_version"]
    assert client.post("/api/reviews", json=body).status_code == 422

    body = review_body()
    body["match"]["case_id"] = "ghost"
    res = client.post("/api/reviews", json=body)
    assert res.status_code == 404
    assert res.json()["code"] == "UnknownMatch"


def test_case_update_endpoint(client, store):
    res = client.put("/api/cases/c_acces", json={
        "explanation": "la {v:e_draille} mène au {v:e_parc}",
        "status": "validated", "expected_version": 0})
    assert res.status_code == 200
    doc = res.json()
    assert doc["case"]["status"] == "validated"
    assert doc["case"]["rendered"] == "la draille mène au grand parc"
    assert load_kb(store.path).case("c_acces").status.value == "validated"

    res = client.put("/api/cases/c_acces", json={
        "status": "draft", "expected_version": doc["version"]})
    assert res.status_code == 422
    assert res.json()["code"] == "IllegalTransition"

    res = client.put("/api/cases/c_acces", json={
        "explanation": "x", "expected_version": 999})
    assert res.status_code == 409

    res = client.put("/api/cases/ghost", json={"expected_version": doc["version"]})
    assert res.status_code == 404


def test_match_limits_from_config(kb_file):
    store = KbStore.open(kb_file)
    cfg = Config(kb_path=kb_file, match_limits=MatchLimits(max_mappings=1))
    client = TestClient(create_app(store, cfg))
    doc = client.post("/api/match", json={"target_graph_id": "f7"}).json()
    assert any(r["truncated"] for r in doc["results"])


def test_static_dir_serves_ui(kb_file, tmp_path):
    ui = tmp_path / "dist"
    ui.mkdir()
    (ui / "index.html").write_text("<!doctype html><title>rosa</title>")
    store = KbStore.open(kb_file)
    client = TestClient(create_app(store, Config(kb_path=kb_file,
                                                 static_dir=ui)))
    res = client.get("/")
    assert res.status_code == 200
    assert "rosa" in res.text
    # API still reachable next to the static mount
    assert client.get("/api/version").status_code == 200


def test_no_static_dir_root_is_404(client):
    assert client.get("/").status_code == 404
