import pytest
import torch
from fastapi.testclient import TestClient
from transformers import BertConfig, BertForNextSentencePrediction, \
    BertTokenizerFast

from semantic_sidecar import ModelBackend, ServiceConfig, create_app

# words the tests use; everything else falls back to [UNK]
_VOCAB_WORDS = [
    "the", "a", "network", "links", "papers", "together", "citation",
    "graph", "model", "entities", "cohesion", "metric", "rises", "falls",
    "alpha", "beta", "gamma", "delta", "streams", "engines", "river",
    "bank", "money", "water", "flows", "deposit", "sentence", "first",
    "second", "third", "kittens", "chase", "string", "clearly", "related",
]


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory):
    """Tiny randomly-initialized checkpoint saved to disk; exercises the
    full load/serve path without any network access."""
    path = tmp_path_factory.mktemp("tiny-bert")
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"] + _VOCAB_WORDS
    (path / "vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")
    tokenizer = BertTokenizerFast(vocab_file=str(path / "vocab.txt"),
                                  do_lower_case=True)
    tokenizer.save_pretrained(path)
    torch.manual_seed(20240817)
    config = BertConfig(vocab_size=len(vocab), hidden_size=32,
                        num_hidden_layers=2, num_attention_heads=2,
                        intermediate_size=64, max_position_embeddings=128)
    BertForNextSentencePrediction(config).save_pretrained(path)
    return str(path)


@pytest.fixture(scope="session")
def backend(checkpoint):
    return ModelBackend(ServiceConfig(model_id=checkpoint, max_batch=4))


@pytest.fixture(scope="session")
def client(backend):
    return TestClient(create_app(backend=backend))
