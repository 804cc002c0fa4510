"""Provider contracts for sequential-coherence scoring and entity embeddings.

Two providers implement the same surface:

* SurrogateProvider — deterministic, dependency-free. Coherence is the
  cosine between term-frequency vectors of the two sentences' content
  tokens (range [0, 1]); embeddings are positive-PMI co-occurrence
  vectors over a +/-3 token window, aggregated over all occurrences.
  Surrogate scores live on a different scale than transformer NSP
  logits, but the downstream IQR thresholding depends only on the score
  distribution's ordering, not its scale.

* RemoteProvider — HTTP client for the sidecar protocol
  (POST /v1/nsp, POST /v1/embed, GET /v1/health). Failures raise
  ProviderUnavailable; they are never silently downgraded to the
  surrogate, so metric values stay attributable to a provider.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import requests

from .corpus_io import Section, default_stopwords
from .errors import EntityAbsent, ProviderUnavailable, TooFewSentences

_WINDOW = 3  # tokens on each side for surrogate co-occurrence


@dataclass(frozen=True)
class CoherenceScore:
    pair_index: int   # 1-based position of the consecutive-sentence pair
    score: float


@dataclass(frozen=True)
class EntityEmbedding:
    entity: str
    vector: Tuple[float, ...]
    context_count: int


def cosine(a: Sequence[float], b: Sequence[float]) -> float:
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(x * x for x in b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    dot = sum(x * y for x, y in zip(a, b))
    return max(-1.0, min(1.0, dot / (na * nb)))


class SurrogateProvider:
    """Deterministic built-in provider; bit-exact across runs."""

    name = "surrogate-tf-ppmi"
    capabilities = frozenset({"coherence", "embedding"})

    def __init__(self, stopwords: Optional[Set[str]] = None) -> None:
        self._stopwords = default_stopwords() if stopwords is None else set(stopwords)

    def _content(self, tokens: Iterable[str]) -> List[str]:
        return [t for t in tokens if t not in self._stopwords]

    def score_pairs(self, section: Section) -> List[CoherenceScore]:
        sentences = section.sentences
        if len(sentences) < 2:
            raise TooFewSentences(
                f"section {section.index} has {len(sentences)} sentence(s)")
        scores = []
        for k in range(len(sentences) - 1):
            a = Counter(self._content(sentences[k].tokens))
            b = Counter(self._content(sentences[k + 1].tokens))
            vocab = sorted(set(a) | set(b))
            score = cosine([a[t] for t in vocab], [b[t] for t in vocab])
            scores.append(CoherenceScore(pair_index=k + 1, score=score))
        return scores

    def embed_entities(self, section: Section,
                       entities: Set[str]) -> List[EntityEmbedding]:
        pair_counts: Counter = Counter()
        token_occurrences: Counter = Counter()
        for sent in section.sentences:
            toks = sent.tokens
            token_occurrences.update(toks)
            for i, w in enumerate(toks):
                lo = max(0, i - _WINDOW)
                hi = min(len(toks), i + _WINDOW + 1)
                for j in range(lo, hi):
                    if j != i:
                        pair_counts[(w, toks[j])] += 1
        total = sum(pair_counts.values())
        marginal: Counter = Counter()
        for (w, _c), n in pair_counts.items():
            marginal[w] += n
        vocab = sorted(token_occurrences)
        vocab_index = {t: i for i, t in enumerate(vocab)}

        out = []
        for entity in sorted(entities):
            parts = entity.split()
            missing = [p for p in parts if token_occurrences[p] == 0]
            if missing or not parts:
                raise EntityAbsent(
                    f"entity {entity!r} absent from section {section.index}")
            # multi-word entities: mean of the constituent tokens' vectors
            vec = [0.0] * len(vocab)
            for part in parts:
                row = self._ppmi_row(part, pair_counts, marginal, total,
                                     vocab, vocab_index)
                for i, v in enumerate(row):
                    vec[i] += v / len(parts)
            count = min(token_occurrences[p] for p in parts)
            out.append(EntityEmbedding(entity=entity, vector=tuple(vec),
                                       context_count=count))
        return out

    @staticmethod
    def _ppmi_row(word: str, pair_counts: Counter, marginal: Counter,
                  total: int, vocab: List[str], vocab_index: Dict[str, int]
                  ) -> List[float]:
        row = [0.0] * len(vocab)
        if total == 0 or marginal[word] == 0:
            return row
        mw = marginal[word]
        for other in vocab:
            n = pair_counts[(word, other)]
            if n == 0:
                continue
            pmi = math.log(n * total / (mw * marginal[other]))
            if pmi > 0.0:
                row[vocab_index[other]] = pmi
        return row


class RemoteProvider:
    """Client for the semantic sidecar wire protocol."""

    capabilities = frozenset({"coherence", "embedding"})

    def __init__(self, endpoint: str, timeout: float = 60.0,
                 session: Optional[requests.Session] = None) -> None:
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self._session = session or requests.Session()
        meta = self.health()
        self.name = f"remote:{meta['name']}"
        self.dim = meta["dim"]
        self.model = meta["model"]

    def health(self) -> dict:
        meta = self._request("GET", "/v1/health")
        if not isinstance(meta.get("dim"), int) or meta["dim"] <= 0:
            raise ProviderUnavailable(f"invalid provider metadata: {meta!r}")
        if not meta.get("name") or not meta.get("model"):
            raise ProviderUnavailable(f"invalid provider metadata: {meta!r}")
        return meta

    def score_pairs(self, section: Section) -> List[CoherenceScore]:
        sentences = section.sentences
        if len(sentences) < 2:
            raise TooFewSentences(
                f"section {section.index} has {len(sentences)} sentence(s)")
        pairs = [{"a": sentences[k].raw, "b": sentences[k + 1].raw}
                 for k in range(len(sentences) - 1)]
        body = self._request("POST", "/v1/nsp", json={"pairs": pairs})
        scores = body.get("scores")
        if not isinstance(scores, list) or len(scores) != len(pairs):
            raise ProviderUnavailable(f"bad /v1/nsp response: {body!r}")
        return [CoherenceScore(pair_index=k + 1, score=float(s))
                for k, s in enumerate(scores)]

    def embed_entities(self, section: Section,
                       entities: Set[str]) -> List[EntityEmbedding]:
        ordered = sorted(entities)
        token_counts = Counter(t for s in section.sentences for t in s.tokens)
        for entity in ordered:
            if any(token_counts[p] == 0 for p in entity.split()):
                raise EntityAbsent(
                    f"entity {entity!r} absent from section {section.index}")
        context = " ".join(s.raw for s in section.sentences)
        body = self._request("POST", "/v1/embed",
                             json={"context": context, "entities": ordered})
        vectors = body.get("vectors")
        if not isinstance(vectors, list) or len(vectors) != len(ordered):
            raise ProviderUnavailable(f"bad /v1/embed response: {body!r}")
        out = []
        for entity, vec in zip(ordered, vectors):
            count = min(token_counts[p] for p in entity.split())
            out.append(EntityEmbedding(entity=entity,
                                       vector=tuple(float(x) for x in vec),
                                       context_count=count))
        return out

    def _request(self, method: str, path: str, **kwargs) -> dict:
        url = self.endpoint + path
        try:
            resp = self._session.request(method, url, timeout=self.timeout,
                                         **kwargs)
        except requests.RequestException as exc:
            raise ProviderUnavailable(f"{url}: {exc}") from exc
        if resp.status_code != 200:
            raise ProviderUnavailable(f"{url}: HTTP {resp.status_code}")
        try:
            return resp.json()
        except ValueError as exc:
            raise ProviderUnavailable(f"{url}: non-JSON response") from exc


def score_pairs(provider, section: Section) -> List[CoherenceScore]:
    return provider.score_pairs(section)


def embed_entities(provider, section: Section,
                   entities: Set[str]) -> List[EntityEmbedding]:
    return provider.embed_entities(section, entities)


def remote_health_check(endpoint: str, timeout: float = 10.0) -> dict:
    """Fail-fast health probe; returns {name, dim, model} on success."""
    try:
        resp = requests.get(endpoint.rstrip("/") + "/v1/health", timeout=timeout)
    except requests.RequestException as exc:
        raise ProviderUnavailable(str(exc)) from exc
    if resp.status_code != 200:
        raise ProviderUnavailable(f"HTTP {resp.status_code}")
    meta = resp.json()
    if not isinstance(meta.get("dim"), int) or meta["dim"] <= 0:
        raise ProviderUnavailable(f"invalid provider metadata: {meta!r}")
    return meta
