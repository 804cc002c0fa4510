"""Per-section layer network construction and section-level diagnostics.

Key-entity extraction is pluggable: the heuristic default keeps
noun-like content tokens ranked by frequency x sentence dispersion
(top 30%, at least one), while external-list mode takes gold entities
verbatim and matches them (including multi-word phrases) as token
subsequences. The noun-likeness suffix heuristic is an acknowledged
approximation; no POS tagger is involved.

Edge rules follow the co-occurrence construction: +1 weight per sentence
where both entities occur, and +1 per surviving consecutive-sentence
pair with one entity on each side. Pairs whose coherence score is <= the
section's lower fence are dropped and contribute no cross-sentence edges.
"""

from __future__ import annotations

import logging
import math
import statistics
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .corpus_io import Section, default_stopwords
from .errors import NoEntities
from .graph_core import WeightedGraph, connected_components
from .semantics import CoherenceScore
from .stats import lower_fence

log = logging.getLogger(__name__)

# evaluation-mode corpus filters
MIN_SENTENCES = 6
MIN_NODES = 4

_KEEP_SHARE = 0.30

# function words and similar non-entity content tokens that survive the
# stop-word list
_FUNCTION_WORDS = frozenset({
    "one", "two", "three", "many", "much", "several", "various", "due",
    "thus", "therefore", "hence", "moreover", "furthermore", "respectively",
    "often", "usually", "always", "never", "well", "still", "already",
    "first", "second", "third", "last", "next", "new", "old", "high", "low",
    "large", "small", "good", "bad", "different", "same", "able", "use",
    "used", "using", "based", "given", "shown", "seen", "say", "said",
    "show", "shows", "make", "makes", "made", "take", "takes", "get",
    "gets", "got", "go", "goes", "went", "come", "comes", "came",
})

# suffixes typical of adverbs/adjectives/verb forms, unlikely for nouns
_NON_NOUN_SUFFIXES = ("ly", "ize", "ise", "ify", "ous", "ive", "ful",
                      "less", "able", "ible", "ish", "ed")


@dataclass(frozen=True)
class KeyEntitySet:
    entities: frozenset
    # entity -> [(sentence_index, token_position), ...]; for multi-word
    # entities the position is the first token of the matched span
    occurrences: Dict[str, List[Tuple[int, int]]]


@dataclass(frozen=True)
class LayerNetwork:
    section_index: int
    graph: WeightedGraph
    fence: Optional[float]            # lower outlier fence over pair scores
    dropped_pairs: Tuple[int, ...]    # 1-based pair indices with score <= fence
    sentence_count: int


@dataclass(frozen=True)
class SectionMetrics:
    section_index: int
    slic: float
    slic_defined: bool
    component_count: int
    average_edge_weight: float
    node_count: int
    edge_count: int
    sentence_count: int
    below_filter: bool


def _noun_like(token: str) -> bool:
    if token in _FUNCTION_WORDS:
        return False
    core = token.rsplit("-", 1)[-1]   # judge hyphenated compounds by their head
    if len(core) < 2:
        return False
    return not core.endswith(_NON_NOUN_SUFFIXES)


def _is_wordish(token: str) -> bool:
    return any(ch.isalpha() for ch in token)


def extract_key_entities(section: Section, extractor: str = "heuristic",
                         external_entities: Optional[Sequence[str]] = None,
                         stopwords: Optional[Set[str]] = None) -> KeyEntitySet:
    if extractor == "heuristic":
        return _extract_heuristic(section, stopwords)
    if extractor == "external-list":
        return _extract_external(section, external_entities or [])
    raise ValueError(f"unknown extractor {extractor!r}")


def _extract_heuristic(section: Section,
                       stopwords: Optional[Set[str]]) -> KeyEntitySet:
    sw = default_stopwords() if stopwords is None else stopwords
    occurrences: Dict[str, List[Tuple[int, int]]] = {}
    sentences_with: Dict[str, Set[int]] = {}
    for sent in section.sentences:
        for pos, tok in enumerate(sent.tokens):
            if tok in sw or not _is_wordish(tok) or not _noun_like(tok):
                continue
            occurrences.setdefault(tok, []).append((sent.index, pos))
            sentences_with.setdefault(tok, set()).add(sent.index)

    if not occurrences:
        return KeyEntitySet(entities=frozenset(), occurrences={})

    n_sent = max(len(section.sentences), 1)

    def rank_key(tok: str):
        freq = len(occurrences[tok])
        dispersion = len(sentences_with[tok]) / n_sent
        return (-freq * dispersion, tok)

    ranked = sorted(occurrences, key=rank_key)
    keep = max(1, math.ceil(_KEEP_SHARE * len(ranked)))
    kept = ranked[:keep]
    return KeyEntitySet(entities=frozenset(kept),
                        occurrences={t: occurrences[t] for t in kept})


def _extract_external(section: Section,
                      entities: Sequence[str]) -> KeyEntitySet:
    occurrences: Dict[str, List[Tuple[int, int]]] = {}
    for raw_entity in entities:
        entity = raw_entity.lower().strip()
        parts = tuple(entity.split())
        if not parts:
            continue
        hits: List[Tuple[int, int]] = []
        for sent in section.sentences:
            toks = sent.tokens
            for pos in range(len(toks) - len(parts) + 1):
                if tuple(toks[pos:pos + len(parts)]) == parts:
                    hits.append((sent.index, pos))
        if hits:
            occurrences[entity] = hits
        else:
            log.warning("entity %r not found in section %d; dropped",
                        entity, section.index)
    return KeyEntitySet(entities=frozenset(occurrences), occurrences=occurrences)


def build_layer(section: Section, entities: KeyEntitySet,
                scores: Sequence[CoherenceScore],
                fence: Optional[float] = None) -> LayerNetwork:
    """Build the co-occurrence layer with coherence-filtered cross edges.

    ``fence`` overrides the per-section lower fence (used when the
    thresholding scope is the whole document).
    """
    if not entities.entities:
        raise NoEntities(f"section {section.index} has no key-entities")

    by_sentence: Dict[int, Set[str]] = {}
    for entity, occs in entities.occurrences.items():
        for sent_index, _pos in occs:
            by_sentence.setdefault(sent_index, set()).add(entity)

    if fence is None and scores:
        fence = lower_fence([s.score for s in scores])

    weights: Dict[Tuple[str, str], int] = {}

    def bump(x: str, y: str) -> None:
        key = (x, y) if x < y else (y, x)
        weights[key] = weights.get(key, 0) + 1

    # same-sentence co-occurrence: +1 per sentence where both occur
    for sent_index in sorted(by_sentence):
        ents = sorted(by_sentence[sent_index])
        for i, x in enumerate(ents):
            for y in ents[i + 1:]:
                bump(x, y)

    # consecutive-sentence co-occurrence, gated by the coherence fence
    dropped: List[int] = []
    for cs in scores:
        k = cs.pair_index
        if fence is not None and cs.score <= fence:
            dropped.append(k)
            continue
        first = by_sentence.get(k, set())
        second = by_sentence.get(k + 1, set())
        # unordered pairs, +1 each regardless of which side holds which entity
        cross = {(x, y) if x < y else (y, x)
                 for x in first for y in second if x != y}
        for x, y in sorted(cross):
            bump(x, y)

    graph = WeightedGraph()
    for entity in sorted(entities.entities):
        graph.add_node(entity)
    for (x, y), w in sorted(weights.items()):
        graph.add_edge(x, y, float(w))

    return LayerNetwork(section_index=section.index, graph=graph, fence=fence,
                        dropped_pairs=tuple(dropped),
                        sentence_count=len(section.sentences))


def section_metrics(layer: LayerNetwork) -> SectionMetrics:
    """SLIC (population coefficient of variation of edge weights) plus
    component and size diagnostics."""
    g = layer.graph
    weights = g.edge_weights()
    if weights:
        mu = sum(weights) / len(weights)
        sigma = statistics.pstdev(weights)
        slic, defined, w_avg = sigma / mu, True, mu
    else:
        log.warning("section %d layer has no edges; SLIC undefined, reported 0",
                    layer.section_index)
        slic, defined, w_avg = 0.0, False, 0.0
    return SectionMetrics(
        section_index=layer.section_index,
        slic=slic,
        slic_defined=defined,
        component_count=len(connected_components(g)),
        average_edge_weight=w_avg,
        node_count=g.node_count,
        edge_count=g.edge_count,
        sentence_count=layer.sentence_count,
        below_filter=(layer.sentence_count < MIN_SENTENCES
                      or g.node_count < MIN_NODES),
    )
