"""End-to-end document analysis: segmentation through findings.

The CLI is a thin wrapper around ``analyze_document``; tests drive this
function directly. Sections that cannot be analyzed (no sentences, no
key-entities) are reported as skipped and flagged as warnings rather
than aborting the run.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import mln as mln_mod
from .chiaa_report import (LOW_SLIC_RULE, CohesionReport, SectionResult,
                           generate_findings)
from .corpus_io import Document, Section
from .doc_metrics import DocumentMetrics, compute_document_metrics
from .errors import LayerTooSmall, ParseError
from .section_layer import (KeyEntitySet, LayerNetwork, SectionMetrics,
                            build_layer, extract_key_entities, section_metrics)
from .semantics import RemoteProvider, SurrogateProvider
from .stats import QUARTILE_METHOD, lower_fence

log = logging.getLogger(__name__)


@dataclass
class AnalysisConfig:
    provider: str = "surrogate"            # "surrogate" | "remote"
    endpoint: Optional[str] = None
    seed: int = 42
    threshold_scope: str = "section"       # "section" | "document"
    extractor: str = "heuristic"           # "heuristic" | "external-list"
    entities_path: Optional[str] = None
    apply_filters: bool = True
    clean: bool = False
    output_format: str = "json"            # "json" | "markdown"


def make_provider(config: AnalysisConfig):
    if config.provider == "surrogate":
        return SurrogateProvider()
    if config.provider == "remote":
        if not config.endpoint:
            raise ValueError("remote provider requires an endpoint")
        return RemoteProvider(config.endpoint)
    raise ValueError(f"unknown provider {config.provider!r}")


def load_entity_lists(path) -> Dict[int, List[str]]:
    """Sidecar entity lists: JSON {section_index: [entity, ...]}."""
    try:
        data = json.loads(Path(path).read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"entity list {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"entity list {path}: expected an object")
    return {int(k): [str(e) for e in v] for k, v in data.items()}


def _skipped(section: Section, reason: str) -> SectionResult:
    metrics = SectionMetrics(
        section_index=section.index, slic=0.0, slic_defined=False,
        component_count=0, average_edge_weight=0.0, node_count=0,
        edge_count=0, sentence_count=len(section.sentences), below_filter=True)
    return SectionResult(metrics=metrics, layer=None, skipped=True,
                         skip_reason=reason)


def analyze_document(doc: Document, config: AnalysisConfig,
                     provider=None) -> Tuple[CohesionReport, bool]:
    """Run the full pipeline; returns (report, had_warnings)."""
    if provider is None:
        provider = make_provider(config)
    entity_lists = (load_entity_lists(config.entities_path)
                    if config.entities_path else {})

    # first pass: entities and coherence scores per section
    prepared = []          # (section, entities, scores) or SectionResult
    all_scores: List[float] = []
    for section in doc.sections:
        if section.empty:
            prepared.append(_skipped(section, "empty section"))
            continue
        entities = extract_key_entities(
            section, extractor=config.extractor,
            external_entities=entity_lists.get(section.index))
        if not entities.entities:
            prepared.append(_skipped(section, "no key-entities"))
            continue
        scores = (provider.score_pairs(section)
                  if len(section.sentences) >= 2 else [])
        all_scores.extend(s.score for s in scores)
        prepared.append((section, entities, scores))

    document_fence = (lower_fence(all_scores)
                      if config.threshold_scope == "document" and all_scores
                      else None)

    section_results: List[SectionResult] = []
    analyzed: List[Tuple[Section, KeyEntitySet, LayerNetwork]] = []
    for item in prepared:
        if isinstance(item, SectionResult):
            section_results.append(item)
            continue
        section, entities, scores = item
        layer = build_layer(section, entities, scores, fence=document_fence)
        section_results.append(SectionResult(metrics=section_metrics(layer),
                                             layer=layer))
        analyzed.append((section, entities, layer))

    doc_metrics: Optional[DocumentMetrics] = None
    meta_after = None
    thresholds = None
    if analyzed:
        layers = [layer for _, _, layer in analyzed]
        embeddings = [
            provider.embed_entities(section, set(entities.entities))
            for section, entities, _ in analyzed
        ]
        network = mln_mod.build_interlayer(layers, embeddings)
        meta_before = mln_mod.condense(network, config.seed)
        meta_after, thresholds = mln_mod.prune(meta_before)
        try:
            doc_metrics = compute_document_metrics(layers, meta_before,
                                                   meta_after)
        except LayerTooSmall:
            log.warning("no layer large enough for document-level indices")

    findings = generate_findings(section_results, doc_metrics, meta_after)

    provenance: Dict[str, object] = {
        "provider": getattr(provider, "name", str(provider)),
        "quartile_method": QUARTILE_METHOD,
        "log_base": "e",
        "low_slic_rule": LOW_SLIC_RULE,
        "threshold_scope": config.threshold_scope,
        "extractor": config.extractor,
        "seed": config.seed,
        "similarity_cutoff": mln_mod.SIMILARITY_CUTOFF,
        "thresholds": {
            "document_fence": document_fence,
            "section_fences": {
                str(layer.section_index): layer.fence
                for _, _, layer in analyzed
            },
            "intralayer_fence": (thresholds.intralayer_fence
                                 if thresholds else None),
            "interlayer_fence": (thresholds.interlayer_fence
                                 if thresholds else None),
        },
    }

    report = CohesionReport(doc_id=doc.id, sections=tuple(section_results),
                            document=doc_metrics, findings=tuple(findings),
                            provenance=provenance)
    had_warnings = any(s.skipped for s in section_results) or doc_metrics is None
    return report, had_warnings
