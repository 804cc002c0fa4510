"""Service-level acceptance: protocol contract on the local checkpoint,
plus score-quality checks that need the published pretrained weights and
are skipped when no checkpoint can be fetched (offline environments)."""

import statistics

import pytest
from fastapi.testclient import TestClient

from semantic_sidecar import ModelBackend, ServiceConfig, create_app

CONTINUING_PAIRS = [
    {"a": "The committee reviewed the proposal in detail.",
     "b": "After long deliberation, they approved it unanimously."},
    {"a": "She planted tomato seedlings in early spring.",
     "b": "By July the vines were heavy with ripe fruit."},
    {"a": "The experiment required careful calibration of the sensors.",
     "b": "Each sensor was therefore tested against a reference signal."},
    {"a": "Traffic slowed to a crawl near the bridge.",
     "b": "An overturned truck was blocking two of the three lanes."},
    {"a": "The orchestra tuned their instruments quietly.",
     "b": "Then the conductor raised the baton and the hall fell silent."},
]

SHUFFLED_PAIRS = [
    {"a": "The committee reviewed the proposal in detail.",
     "b": "By July the vines were heavy with ripe fruit."},
    {"a": "She planted tomato seedlings in early spring.",
     "b": "An overturned truck was blocking two of the three lanes."},
    {"a": "The experiment required careful calibration of the sensors.",
     "b": "Then the conductor raised the baton and the hall fell silent."},
    {"a": "Traffic slowed to a crawl near the bridge.",
     "b": "After long deliberation, they approved it unanimously."},
    {"a": "The orchestra tuned their instruments quietly.",
     "b": "Each sensor was therefore tested against a reference signal."},
]


@pytest.fixture(scope="module")
def pretrained_client():
    try:
        backend = ModelBackend(ServiceConfig())   # published base checkpoint
    except OSError as exc:
        pytest.skip(f"pretrained checkpoint unavailable "
                    f"(offline environment): {exc}")
    return TestClient(create_app(backend=backend))


def test_protocol_contract(client):
    """Health dim matches embed vector lengths; malformed bodies map to
    the documented status codes."""
    dim = client.get("/v1/health").json()["dim"]
    body = client.post("/v1/embed", json={
        "context": "The network links papers together.",
        "entities": ["network", "papers"]}).json()
    assert body["dim"] == dim
    assert all(len(v) == dim for v in body["vectors"])

    assert client.post("/v1/nsp", json={"bad": True}).status_code == 400
    assert client.post("/v1/nsp", json={
        "pairs": [{"a": "x", "b": ""}]}).status_code == 400
    assert client.post("/v1/embed", json={
        "context": "The network links papers.",
        "entities": ["absent-entity"]}).status_code == 422


def test_continuing_pairs_outscore_shuffled(pretrained_client):
    cont = pretrained_client.post(
        "/v1/nsp", json={"pairs": CONTINUING_PAIRS}).json()["scores"]
    shuf = pretrained_client.post(
        "/v1/nsp", json={"pairs": SHUFFLED_PAIRS}).json()["scores"]
    assert statistics.median(cont) > statistics.median(shuf)


def test_context_shapes_embeddings(pretrained_client):
    """The same word across contrasting contexts drifts more than a word
    repeated in near-identical contexts."""

    def vec(context, entity):
        body = pretrained_client.post(
            "/v1/embed",
            json={"context": context, "entities": [entity]}).json()
        return body["vectors"][0]

    def cosine(u, v):
        dot = sum(a * b for a, b in zip(u, v))
        nu = sum(a * a for a in u) ** 0.5
        nv = sum(b * b for b in v) ** 0.5
        return dot / (nu * nv)

    contrast = cosine(
        vec("He sat by the river bank watching the water flow.", "bank"),
        vec("She opened a bank account to deposit her money.", "bank"))
    stable = cosine(
        vec("The river flowed past the quiet village at dawn.", "river"),
        vec("The river flowed past the quiet village at dusk.", "river"))
    assert contrast < stable
