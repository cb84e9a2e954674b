import json

import pytest
from fastapi.testclient import TestClient

from similes.service import ServiceConfig, create_app, load_service_config
from similes.store import APPROVED, CorpusStore, MANUAL, MINED, PENDING, SEED


@pytest.fixture
def harness(tmp_path):
    """Fresh store + app client factory; defaults are test-friendly."""
    made = []

    def build(**overrides):
        settings = dict(curator_password="lozinka", rate_limit_per_minute=0)
        settings.update(overrides)
        store = CorpusStore(tmp_path / f"store_{len(made)}.jsonl")
        app = create_app(store, ServiceConfig(**settings))
        client = TestClient(app)
        made.append((store, client))
        return client, store

    yield build
    for store, _ in made:
        store.close()


def login(client, password="lozinka"):
    response = client.post("/login", json={"password": password})
    assert response.status_code == 200
    token = response.json()["token"]
    return {"Authorization": f"Bearer {token}"}


class TestLogin:
    def test_wrong_password_is_unauthorized(self, harness):
        client, _ = harness()
        assert client.post("/login", json={"password": "pogresna"}).status_code == 401

    def test_login_returns_expiring_token(self, harness):
        client, _ = harness()
        body = client.post("/login", json={"password": "lozinka"}).json()
        assert set(body) == {"token", "expires_at"}
        assert len(body["token"]) == 32

    def test_expired_token_is_rejected(self, harness):
        client, _ = harness(token_ttl_seconds=-1)
        headers = login(client)
        assert client.get("/pending", headers=headers).status_code == 401


class TestListing:
    def fill(self, store):
        a, _ = store.add_entry("Radi kao konj", origin=MINED)
        store.add_entry("Beo kao sneg", origin=SEED, status=APPROVED)
        store.add_entry("Ljut kao ris", origin=MINED)
        store.set_status(a.id, APPROVED, actor="test")

    def test_default_listing_is_approved_only(self, harness):
        client, store = harness()
        self.fill(store)
        body = client.get("/similes").json()
        assert [e["text"] for e in body["items"]] == ["Beo kao sneg", "Radi kao konj"]
        assert body["total"] == 2
        assert all(e["status"] == APPROVED for e in body["items"])

    def test_non_approved_listing_needs_token(self, harness):
        client, store = harness()
        self.fill(store)
        assert client.get("/similes", params={"status": "pending"}).status_code == 401
        headers = login(client)
        body = client.get("/similes", params={"status": "pending"}, headers=headers).json()
        assert [e["text"] for e in body["items"]] == ["Ljut kao ris"]

    def test_unknown_status_is_bad_request(self, harness):
        client, store = harness()
        self.fill(store)
        headers = login(client)
        assert client.get("/similes", params={"status": "x"}, headers=headers).status_code == 400

    def test_prefix_and_paging_pass_through(self, harness):
        client, store = harness()
        self.fill(store)
        body = client.get("/similes", params={"prefix": "beo"}).json()
        assert body["total"] == 1
        body = client.get("/similes", params={"page": 2, "page_size": 1}).json()
        assert [e["text"] for e in body["items"]] == ["Radi kao konj"]
        assert (body["page"], body["page_size"], body["total"]) == (2, 1, 2)


class TestSearch:
    def test_empty_query_is_bad_request(self, harness):
        client, _ = harness()
        assert client.get("/similes/search", params={"q": "  "}).status_code == 400

    def test_search_returns_ranked_approved_matches(self, harness):
        client, store = harness()
        store.add_entry("Radi kao konj", origin=MINED, status=APPROVED)
        store.add_entry("Radi kao konj ceo dan", origin=MINED, status=APPROVED)
        store.add_entry("Radi k'o konj", origin=MINED)  # pending: hidden
        body = client.get("/similes/search", params={"q": "radi kao konj"}).json()
        texts = [r["entry"]["text"] for r in body["results"]]
        sims = [r["similarity"] for r in body["results"]]
        assert texts == ["Radi kao konj", "Radi kao konj ceo dan"]
        assert sims == [1.0, pytest.approx(3 / 5)]


class TestSubmission:
    def test_add_returns_entry_and_warnings(self, harness):
        client, store = harness()
        store.add_entry("Radi kao konj", origin=MINED, status=APPROVED)
        response = client.post("/similes", json={"text": "Radi k'o konj", "note": "cuo na pijaci"})
        assert response.status_code == 201
        body = response.json()
        assert body["entry"]["origin"] == MANUAL
        assert body["entry"]["status"] == PENDING
        assert body["entry"]["provenance"] == {"note": "cuo na pijaci"}
        assert [w["similarity"] for w in body["similar"]] == [1.0]
        assert store.get(body["entry_id"]).text == "Radi k'o konj"

    def test_submitter_is_recorded_as_actor(self, harness):
        client, store = harness()
        body = client.post("/similes", json={"text": "Nov kao igla"}).json()
        history = store.get(body["entry_id"]).history
        assert history[0].actor.startswith("contributor:")

    def test_empty_text_is_bad_request(self, harness):
        client, _ = harness()
        assert client.post("/similes", json={"text": "   "}).status_code == 400

    def test_missing_text_field_is_unprocessable(self, harness):
        client, _ = harness()
        assert client.post("/similes", json={"note": "bez teksta"}).status_code == 422

    def test_rate_limit_applies_per_client(self, harness):
        client, _ = harness(rate_limit_per_minute=2)
        assert client.post("/similes", json={"text": "Prvi kao prvi"}).status_code == 201
        assert client.post("/similes", json={"text": "Drugi kao drugi"}).status_code == 201
        assert client.post("/similes", json={"text": "Treći kao treći"}).status_code == 429


class TestCuration:
    def test_transitions_require_token(self, harness):
        client, store = harness()
        store.add_entry("Radi kao konj", origin=MINED)
        assert client.post("/similes/1/approve").status_code == 401
        assert client.post("/similes/1/reject").status_code == 401
        assert client.post("/similes/1/reopen").status_code == 401
        assert client.put("/similes/1", json={"text": "x kao y"}).status_code == 401

    def test_unknown_entry_is_not_found(self, harness):
        client, _ = harness()
        headers = login(client)
        assert client.post("/similes/99/approve", headers=headers).status_code == 404
        assert client.put("/similes/99", json={"text": "x kao y"}, headers=headers).status_code == 404

    def test_full_curation_flow(self, harness):
        client, store = harness()
        store.add_entry("Radi kao konj", origin=MINED)
        headers = login(client)

        assert client.get("/similes").json()["total"] == 0
        body = client.post("/similes/1/approve", headers=headers).json()
        assert body["entry"]["status"] == APPROVED
        assert client.get("/similes").json()["total"] == 1

        assert client.post("/similes/1/reopen", headers=headers).json()["entry"]["status"] == PENDING
        assert client.post("/similes/1/reject", headers=headers).json()["entry"]["status"] == "rejected"
        assert client.get("/similes").json()["total"] == 0

    def test_double_approve_conflicts(self, harness):
        client, store = harness()
        store.add_entry("Radi kao konj", origin=MINED)
        headers = login(client)
        assert client.post("/similes/1/approve", headers=headers).status_code == 200
        assert client.post("/similes/1/approve", headers=headers).status_code == 409
        assert client.post("/similes/1/reject", headers=headers).status_code == 409

    def test_edit_changes_text_and_key(self, harness):
        client, store = harness()
        store.add_entry("Radi kao konj", origin=MINED)
        headers = login(client)
        body = client.put("/similes/1", json={"text": "Radi kao crni konj"}, headers=headers).json()
        assert body["entry"]["text"] == "Radi kao crni konj"
        assert body["entry"]["stem_key"] == "crn ka konj rad"
        assert client.put("/similes/1", json={"text": " "}, headers=headers).status_code == 400


class TestQueueAndStats:
    def test_pending_queue_is_curator_only_and_oldest_first(self, harness):
        client, store = harness()
        store.add_entry("Radi kao konj", origin=MINED)
        store.add_entry("Beo kao sneg", origin=MINED)
        assert client.get("/pending").status_code == 401
        headers = login(client)
        body = client.get("/pending", headers=headers).json()
        assert [e["id"] for e in body["items"]] == [1, 2]
        assert body["total"] == 2

    def test_stats_are_public(self, harness):
        client, store = harness()
        store.add_entry("Radi kao konj", origin=MINED)
        store.add_entry("Radi k'o konj", origin=SEED, status=APPROVED)
        body = client.get("/stats").json()
        assert body == {
            "total": 2,
            "by_status": {"pending": 1, "approved": 1, "rejected": 0},
            "by_origin": {"mined": 1, "manual": 0, "seed": 1},
            "approved": 1,
            "seed_mined_overlap": 1,
        }


class TestCrossOrigin:
    def test_browser_clients_from_other_origins_are_allowed(self, harness):
        client, store = harness()
        store.add_entry("Beo kao sneg", origin=SEED, status=APPROVED)
        response = client.get("/similes", headers={"Origin": "http://localhost:5000"})
        assert response.status_code == 200
        assert response.headers["access-control-allow-origin"] == "*"

    def test_preflight_for_authorized_put(self, harness):
        client, _ = harness()
        response = client.options(
            "/similes/1",
            headers={
                "Origin": "http://localhost:5000",
                "Access-Control-Request-Method": "PUT",
                "Access-Control-Request-Headers": "Authorization, Content-Type",
            },
        )
        assert response.status_code == 200
        allowed = response.headers["access-control-allow-methods"]
        assert "PUT" in allowed
        assert "authorization" in response.headers["access-control-allow-headers"].lower()


class TestConfig:
    def test_defaults(self):
        config = load_service_config(env={})
        assert config.port == 8337
        assert config.rate_limit_per_minute == 30
        assert config.token_ttl_seconds == 8 * 3600

    def test_file_overrides_defaults(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"port": 9000, "curator_password": "tajna"}))
        config = load_service_config(path, env={})
        assert config.port == 9000
        assert config.curator_password == "tajna"
        assert config.host == "127.0.0.1"

    def test_env_overrides_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"port": 9000, "rate_limit_per_minute": 5}))
        env = {"SIMILES_PORT": "9100", "SIMILES_DEDUP_THRESHOLD": "0.8"}
        config = load_service_config(path, env=env)
        assert config.port == 9100
        assert config.rate_limit_per_minute == 5
        assert config.dedup_threshold == 0.8

    def test_unknown_file_key_rejected(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"prot": 9000}))
        with pytest.raises(ValueError, match="unknown config keys"):
            load_service_config(path, env={})

    def test_non_object_config_rejected(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("[1, 2]")
        with pytest.raises(ValueError, match="JSON object"):
            load_service_config(path, env={})
