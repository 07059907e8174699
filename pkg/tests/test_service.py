import concurrent.futures

import pytest
from fastapi.testclient import TestClient

from baitscore.embed import load_embeddings
from baitscore.persist import load_model
from baitscore.scorer import Scorer, ScoreRequest
from baitscore.service import create_app

VALID_BODY = {
    "postText": "You won't believe what happens next",
    "targetTitle": "A detailed look at energy this year",
    "targetDescription": "a energy article about recent developments",
    "targetParagraphs": ["officials said the new measures would take effect"],
    "targetKeywords": "energy, news",
    "targetCaptions": ["photo of energy"],
}


@pytest.fixture(scope="module")
def client(lr_model_file, synth_files):
    app = create_app(lr_model_file, synth_files["embeddings"], dimension=50)
    with TestClient(app, raise_server_exceptions=False) as c:
        yield c


class TestHealth:
    def test_health_after_startup(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "ok"
        assert body["modelType"] == "lr"
        assert body["embeddingDim"] == 50


class TestScore:
    def test_valid_request(self, client):
        response = client.post("/score", json=VALID_BODY)
        assert response.status_code == 200
        body = response.json()
        assert 0.0 <= body["probability"] <= 1.0
        assert body["label"] in ("clickbait", "no-clickbait")
        assert (body["label"] == "clickbait") == (body["probability"] >= 0.5)
        assert body["modelType"] == "lr"
        assert body["latencyMs"] > 0

    def test_empty_post_text_is_422_with_field_message(self, client):
        response = client.post("/score", json={**VALID_BODY, "postText": ""})
        assert response.status_code == 422
        detail = response.json()["detail"]
        assert any("postText" in str(item.get("loc", item)) for item in detail)

    def test_missing_post_text_is_422(self, client):
        body = dict(VALID_BODY)
        del body["postText"]
        assert client.post("/score", json=body).status_code == 422

    def test_whitespace_post_text_rejected(self, client):
        response = client.post("/score", json={**VALID_BODY, "postText": "   "})
        assert response.status_code == 422

    def test_deterministic(self, client):
        a = client.post("/score", json=VALID_BODY).json()
        b = client.post("/score", json=VALID_BODY).json()
        assert a["probability"] == b["probability"]

    def test_self_similarity_in_feature_echo(self, client):
        body = {
            "postText": "the same exact text",
            "targetTitle": "the same exact text",
            "includeFeatures": True,
        }
        response = client.post("/score", json=body)
        echo = response.json()["featureEcho"]
        assert echo["cosine_postText_targetTitle"] == pytest.approx(1.0)
        assert echo["jaccard_postText_targetTitle"] == pytest.approx(1.0)
        assert echo["wmd_postText_targetTitle"] == pytest.approx(0.0, abs=1e-9)

    def test_echo_absent_by_default(self, client):
        body = client.post("/score", json=VALID_BODY).json()
        assert "featureEcho" not in body

    def test_count_overrides_applied(self, client):
        body = {**VALID_BODY, "numImages": 7, "numParagraphs": 9, "includeFeatures": True}
        echo = client.post("/score", json=body).json()["featureEcho"]
        assert echo["count_targetCaptions"] == 7.0
        assert echo["count_targetParagraphs"] == 9.0

    def test_negative_count_rejected(self, client):
        assert client.post("/score", json={**VALID_BODY, "numImages": -1}).status_code == 422


class TestSchemaEndpoint:
    def test_schema_payload(self, client):
        body = client.get("/schema").json()
        assert len(body["featureNames"]) == 373
        assert body["model"]["type"] == "lr"
        assert all(name.startswith("wmd_") for name in body["sentinels"])


class TestSingleCodePath:
    def test_service_equals_direct_scorer_bitwise(self, client, lr_model_file, synth_files):
        scorer = Scorer(load_model(lr_model_file), load_embeddings(synth_files["embeddings"], 50))
        direct = scorer.score(ScoreRequest.from_dict(VALID_BODY))
        via_http = client.post("/score", json=VALID_BODY).json()
        assert via_http["probability"] == direct["probability"]
        assert via_http["label"] == direct["label"]


class TestConcurrency:
    def test_parallel_storm_matches_serial(self, client):
        bodies = [
            {**VALID_BODY, "postText": f"Post number {i} will shock you"} for i in range(20)
        ]
        serial = [client.post("/score", json=b).json()["probability"] for b in bodies]
        with concurrent.futures.ThreadPoolExecutor(max_workers=10) as pool:
            futures = [pool.submit(client.post, "/score", json=b) for b in bodies * 5]
            results = [f.result().json()["probability"] for f in futures]
        assert results == serial * 5
