"""Prescriptive findings and report rendering.

Findings localize cohesion gaps: low-SLIC sections (bottom quartile
within the document, or SLIC = 0 — the within-document rule keeps
single-document reports meaningful without a reference corpus),
multi-component sections with their dropped sentence pairs, layers whose
path length exceeds the small-world ideal, isolated concepts, and pruned
metaedges. Severities are sortable, explainable numbers: the SLIC gap to
the document median for low_slic, the negated deviation for
high_layer_deviation, and 1 otherwise.

Reports are a pure function of the analysis results; rendering the same
report twice yields byte-identical JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .doc_metrics import DocumentMetrics
from .stats import five_number_summary
from .mln import Metagraph
from .section_layer import LayerNetwork, SectionMetrics

LOW_SLIC_RULE = "bottom-quartile-within-document-or-zero"

FINDING_KINDS = (
    "low_slic",
    "multi_component",
    "dropped_pair",
    "high_layer_deviation",
    "isolated_concept",
    "pruned_interlayer_link",
    "pruned_intralayer_link",
)


@dataclass(frozen=True)
class Finding:
    kind: str
    location: Dict[str, int]
    severity: float
    message: str


@dataclass(frozen=True)
class SectionResult:
    metrics: SectionMetrics
    layer: Optional[LayerNetwork]     # None when the section was skipped
    skipped: bool = False
    skip_reason: Optional[str] = None


@dataclass(frozen=True)
class CohesionReport:
    doc_id: str
    sections: Tuple[SectionResult, ...]
    document: Optional[DocumentMetrics]
    findings: Tuple[Finding, ...]
    provenance: Dict[str, object]


def generate_findings(sections: Sequence[SectionResult],
                      doc: Optional[DocumentMetrics],
                      meta: Optional[Metagraph]) -> List[Finding]:
    findings: List[Finding] = []
    analyzed = [s for s in sections if not s.skipped]

    flagged_sections = set()
    if analyzed:
        slics = [s.metrics.slic for s in analyzed]
        summary = five_number_summary(slics)
        q1, median = summary.q1, summary.median
        for s in analyzed:
            m = s.metrics
            if m.slic < q1 or m.slic == 0.0:
                flagged_sections.add(m.section_index)
                findings.append(Finding(
                    kind="low_slic",
                    location={"section": m.section_index},
                    severity=median - m.slic,
                    message=(f"section {m.section_index} SLIC {m.slic:.4f} is in "
                             f"the document's bottom quartile (median {median:.4f}); "
                             f"review its sentence linkage"),
                ))
        for s in analyzed:
            m = s.metrics
            if m.component_count > 1:
                flagged_sections.add(m.section_index)
                dropped = list(s.layer.dropped_pairs) if s.layer else []
                findings.append(Finding(
                    kind="multi_component",
                    location={"section": m.section_index},
                    severity=1.0,
                    message=(f"section {m.section_index} splits into "
                             f"{m.component_count} entity components"
                             + (f"; dropped sentence pairs: {dropped}"
                                if dropped else "")),
                ))
        for s in analyzed:
            m = s.metrics
            if m.section_index in flagged_sections and s.layer is not None:
                for pair in s.layer.dropped_pairs:
                    findings.append(Finding(
                        kind="dropped_pair",
                        location={"section": m.section_index, "pair_index": pair},
                        severity=1.0,
                        message=(f"sentence pair ({pair}, {pair + 1}) in section "
                                 f"{m.section_index} fell below the coherence "
                                 f"fence; review the transition"),
                    ))

    if doc is not None:
        for term in doc.per_layer:
            if term.deviation is not None and term.deviation < 0:
                findings.append(Finding(
                    kind="high_layer_deviation",
                    location={"section": term.layer_index},
                    severity=-term.deviation,
                    message=(f"section {term.layer_index} path length exceeds "
                             f"the small-world ideal by {-term.deviation:.2f}; "
                             f"link its entities more tightly"),
                ))

    if meta is not None:
        for layer in meta.layer_indices():
            for mn in meta.isolated_metanodes(layer):
                suffix = (" (single-concept layer)"
                          if meta.metanode_count(layer) == 1 else "")
                findings.append(Finding(
                    kind="isolated_concept",
                    location={"section": layer, "community": mn.community},
                    severity=1.0,
                    message=(f"concept {layer}.{mn.community} "
                             f"({', '.join(sorted(mn.members)[:5])}) has no "
                             f"surviving link inside section {layer}{suffix}"),
                ))
        for p in meta.pruned:
            kind = ("pruned_interlayer_link" if p.kind == "interlayer"
                    else "pruned_intralayer_link")
            findings.append(Finding(
                kind=kind,
                location={"section": p.layer, "community": p.source,
                          "target_section": p.target_layer,
                          "target_community": p.target},
                severity=1.0,
                message=(f"link between concepts {p.layer}.{p.source} and "
                         f"{p.target_layer}.{p.target} (weight {p.weight:.4f}) "
                         f"fell below the fence {p.fence:.4f}; strengthen the "
                         f"linkage between the marked concepts"),
            ))

    kind_rank = {k: i for i, k in enumerate(FINDING_KINDS)}
    findings.sort(key=lambda f: (kind_rank[f.kind], -f.severity,
                                 sorted(f.location.items())))
    return findings


def _section_dict(s: SectionResult) -> dict:
    m = s.metrics
    out = {
        "index": m.section_index,
        "slic": m.slic,
        "slic_defined": m.slic_defined,
        "components": m.component_count,
        "nodes": m.node_count,
        "edges": m.edge_count,
        "sentences": m.sentence_count,
        "below_filter": m.below_filter,
        "skipped": s.skipped,
    }
    if s.skip_reason:
        out["skip_reason"] = s.skip_reason
    return out


def report_to_dict(report: CohesionReport) -> dict:
    doc = report.document
    document = None
    if doc is not None:
        document = {
            "eci": doc.eci,
            "epi": doc.epi,
            "cci": doc.cci,
            "ici": doc.ici,
            "k4_before": doc.k4_before,
            "k4_after": doc.k4_after,
            "annotations": list(doc.annotations),
            "per_layer": [
                {"section": t.layer_index, "nodes": t.node_count,
                 "wcc": t.wcc, "apl": t.apl, "deviation": t.deviation,
                 "metanodes": t.metanode_count, "isolated": t.isolated_count}
                for t in doc.per_layer
            ],
        }
    return {
        "doc_id": report.doc_id,
        "provenance": report.provenance,
        "sections": [_section_dict(s) for s in report.sections],
        "document": document,
        "findings": [
            {"kind": f.kind, "location": f.location,
             "severity": f.severity, "message": f.message}
            for f in report.findings
        ],
    }


def render_report(report: CohesionReport, format: str = "json") -> bytes:
    if format == "json":
        payload = json.dumps(report_to_dict(report), sort_keys=True, indent=2,
                             ensure_ascii=False)
        return (payload + "\n").encode("utf-8")
    if format == "markdown":
        return _render_markdown(report).encode("utf-8")
    raise ValueError(f"unknown format {format!r}")


def _render_markdown(report: CohesionReport) -> str:
    lines = [f"# Cohesion report: {report.doc_id}", ""]
    lines.append("## Sections")
    for s in report.sections:
        m = s.metrics
        if s.skipped:
            lines.append(f"- section {m.section_index}: skipped"
                         f" ({s.skip_reason or 'no analyzable content'})")
            continue
        flags = []
        if not m.slic_defined:
            flags.append("SLIC undefined")
        if m.below_filter:
            flags.append("below-filter")
        suffix = f" [{'; '.join(flags)}]" if flags else ""
        lines.append(f"- section {m.section_index}: SLIC {m.slic:.4f}, "
                     f"{m.component_count} component(s), {m.node_count} entities, "
                     f"{m.edge_count} edges{suffix}")
    lines.append("")
    if report.document is not None:
        d = report.document
        lines.append("## Document indices")
        lines.append(f"- entity connectivity (ECI): {d.eci:.6f}")
        lines.append(f"- entity proximity (EPI): {d.epi:.6f}")
        lines.append(f"- concept connectivity (CCI): {d.cci:.6f}")
        lines.append(f"- isolated concepts (ICI): {d.ici:.6f}")
        lines.append(f"- K4 before/after pruning: {d.k4_before}/{d.k4_after}")
        lines.append("")
    lines.append("## Findings")
    if not report.findings:
        lines.append("no cohesion gaps flagged")
    else:
        by_section: Dict[int, List[Finding]] = {}
        for f in report.findings:
            by_section.setdefault(f.location.get("section", 0), []).append(f)
        for section in sorted(by_section):
            lines.append(f"### Section {section}")
            for f in by_section[section]:
                lines.append(f"- [{f.kind}] (severity {f.severity:.3f}) {f.message}")
    lines.append("")
    return "\n".join(lines)
