"""Transformer inference: NSP scoring and mention-averaged embeddings.

Scores are the model's raw is-next logits (not softmax probabilities):
the analyzer's thresholding only relies on score ordering, and logits
preserve more spread between confident and borderline pairs.

Entity mentions are located on whitespace-token boundaries after
lowercasing; punctuation glued to a token's edges is ignored so that
"network." matches the entity "network". Each occurrence's sub-token
vectors are mean-pooled first, then occurrences are averaged.
"""

from __future__ import annotations

import re
import threading
from typing import Dict, List, Sequence, Tuple

import torch
from transformers import AutoTokenizer, BertForNextSentencePrediction

from .config import ServiceConfig

_EDGE_PUNCT_RE = re.compile(r"^[^0-9a-z]+|[^0-9a-z]+$")


class EntityNotFound(Exception):
    """An entity has no whitespace-token occurrence in the context."""


def _core(word: str) -> str:
    return _EDGE_PUNCT_RE.sub("", word)


def _word_spans(text: str) -> List[Tuple[str, int, int]]:
    """(lowercased core, char_start, char_end) for each whitespace token."""
    spans = []
    for match in re.finditer(r"\S+", text.lower()):
        word = match.group()
        core = _core(word)
        if not core:
            continue
        offset = word.index(core)
        spans.append((core, match.start() + offset,
                      match.start() + offset + len(core)))
    return spans


class ModelBackend:
    """Loads one checkpoint and serves both operations from it.

    The NSP head's encoder doubles as the embedding model, so a single
    checkpoint backs the whole protocol. Inference runs in eval mode
    under no_grad; a lock serializes forward passes so concurrent
    requests stay safe on a shared model.
    """

    def __init__(self, config: ServiceConfig) -> None:
        self.config = config
        self._device = torch.device(
            "cuda" if config.device == "accelerator" else "cpu")
        self._tokenizer = AutoTokenizer.from_pretrained(config.model_id)
        self._model = BertForNextSentencePrediction.from_pretrained(
            config.model_id).to(self._device)
        self._model.eval()
        self._lock = threading.Lock()

    @property
    def dim(self) -> int:
        return int(self._model.config.hidden_size)

    @property
    def model_id(self) -> str:
        return self.config.model_id

    def nsp_scores(self, pairs: Sequence[Tuple[str, str]]) -> List[float]:
        """Is-next logit per (a, b) pair, order-preserving."""
        scores: List[float] = []
        batch = self.config.max_batch
        for start in range(0, len(pairs), batch):
            chunk = pairs[start:start + batch]
            enc = self._tokenizer(
                [a for a, _ in chunk], [b for _, b in chunk],
                padding=True, truncation=True, max_length=512,
                return_tensors="pt").to(self._device)
            with self._lock, torch.no_grad():
                logits = self._model(**enc).logits
            scores.extend(float(x) for x in logits[:, 0])
        return scores

    def embed(self, context: str, entities: Sequence[str]) -> List[List[float]]:
        """Mention-averaged final-layer vector per entity.

        Raises EntityNotFound when an entity never occurs in the context.
        """
        occurrences = {e: self.occurrence_vectors(context, e)
                       for e in entities}
        return [torch.stack(occurrences[e]).mean(dim=0).tolist()
                for e in entities]

    def occurrence_vectors(self, context: str,
                           entity: str) -> List[torch.Tensor]:
        """One mean-pooled sub-token vector per occurrence of ``entity``."""
        parts = [p for p in (_core(w) for w in entity.lower().split()) if p]
        if not parts:
            raise EntityNotFound(f"empty entity {entity!r}")
        words = _word_spans(context)
        spans = []
        for i in range(len(words) - len(parts) + 1):
            if [w for w, _, _ in words[i:i + len(parts)]] == parts:
                spans.append((words[i][1], words[i + len(parts) - 1][2]))
        if not spans:
            raise EntityNotFound(f"entity {entity!r} not found in context")

        enc = self._tokenizer(context.lower(), truncation=True, max_length=512,
                              return_offsets_mapping=True, return_tensors="pt")
        offsets = enc.pop("offset_mapping")[0].tolist()
        enc = enc.to(self._device)
        with self._lock, torch.no_grad():
            hidden = self._model.bert(**enc).last_hidden_state[0]

        out = []
        for start, end in spans:
            rows = [hidden[i] for i, (o_start, o_end) in enumerate(offsets)
                    if o_start < end and o_end > start and o_end > o_start]
            if not rows:
                # occurrence fell beyond the model's truncation window
                continue
            out.append(torch.stack(rows).mean(dim=0))
        if not out:
            raise EntityNotFound(
                f"entity {entity!r} occurs only beyond the context window")
        return out
