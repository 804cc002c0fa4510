"""Corpus-level experiments: component contingency, external correlations,
and metric export.

Section filters (at least six sentences and at least four entity nodes)
are applied identically in the contingency and correlation paths.
External cohesion indices (e.g. TAACO output) are ingested from CSV,
never recomputed here.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .chiaa_report import SectionResult
from .corpus_io import load_document
from .doc_metrics import DocumentMetrics
from .errors import DegenerateTable, JoinEmpty, ParseError
from .pipeline import AnalysisConfig, analyze_document, make_provider
from .stats import ChiSquareResult, chi_square_independence, pearson_correlation

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorpusRecord:
    doc_id: str
    category: str
    sections: Tuple[SectionResult, ...]
    metrics: Optional[DocumentMetrics]


@dataclass(frozen=True)
class ContingencyResult:
    categories: Tuple[str, str]
    # rows: multiple components, single component; columns follow categories
    table: Tuple[Tuple[int, int], Tuple[int, int]]
    chi_square: ChiSquareResult
    # category -> (multi_count, total_count, empirical probability)
    probabilities: Dict[str, Tuple[int, int, float]]


def load_manifest(path) -> List[Tuple[Path, str]]:
    """Corpus manifest: JSON list of {path, category}."""
    base = Path(path).parent
    try:
        data = json.loads(Path(path).read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"manifest {path}: {exc}") from exc
    if not isinstance(data, list):
        raise ParseError(f"manifest {path}: expected a JSON list")
    entries = []
    for i, item in enumerate(data):
        if not isinstance(item, dict) or "path" not in item or "category" not in item:
            raise ParseError(f"manifest {path}: entry {i} needs path and category")
        doc_path = Path(item["path"])
        if not doc_path.is_absolute():
            doc_path = base / doc_path
        entries.append((doc_path, str(item["category"])))
    return entries


def analyze_corpus(manifest_path, config: AnalysisConfig) -> List[CorpusRecord]:
    """Analyze every manifest document; results sorted by document id."""
    provider = make_provider(config)
    records = []
    for doc_path, category in load_manifest(manifest_path):
        doc = load_document(doc_path, format="json", clean=config.clean)
        report, _ = analyze_document(doc, config, provider=provider)
        records.append(CorpusRecord(doc_id=doc.id, category=category,
                                    sections=report.sections,
                                    metrics=report.document))
    records.sort(key=lambda r: r.doc_id)
    return records


def _eligible_sections(record: CorpusRecord, apply_filters: bool):
    for s in record.sections:
        if s.skipped:
            continue
        if apply_filters and s.metrics.below_filter:
            continue
        yield s


def component_contingency(records: Sequence[CorpusRecord],
                          apply_filters: bool = True) -> ContingencyResult:
    """2x2 chi-square: components (multiple/single) x document category."""
    categories = sorted({r.category for r in records})
    if len(categories) != 2:
        raise DegenerateTable(
            f"need exactly 2 categories, got {categories!r}")
    counts = {cat: [0, 0] for cat in categories}   # [multiple, single]
    for record in records:
        for s in _eligible_sections(record, apply_filters):
            row = 0 if s.metrics.component_count > 1 else 1
            counts[record.category][row] += 1
    table = (
        (counts[categories[0]][0], counts[categories[1]][0]),
        (counts[categories[0]][1], counts[categories[1]][1]),
    )
    result = chi_square_independence(table)
    probabilities = {}
    for cat in categories:
        multi, single = counts[cat]
        total = multi + single
        probabilities[cat] = (multi, total, multi / total if total else 0.0)
    return ContingencyResult(categories=(categories[0], categories[1]),
                             table=table, chi_square=result,
                             probabilities=probabilities)


def correlate_external(records: Sequence[CorpusRecord], external_csv,
                       apply_filters: bool = True) -> List[Dict[str, float]]:
    """Pearson r of SLIC against each external index column.

    The CSV must have a header ``doc_id, section_index, <index...>`` and
    is joined on (doc id, section index).
    """
    slic_by_key: Dict[Tuple[str, int], float] = {}
    for record in records:
        for s in _eligible_sections(record, apply_filters):
            slic_by_key[(record.doc_id, s.metrics.section_index)] = s.metrics.slic

    with open(external_csv, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        if "doc_id" not in fields or "section_index" not in fields:
            raise ParseError(
                f"{external_csv}: header must include doc_id and section_index")
        index_names = [f for f in fields if f not in ("doc_id", "section_index")]
        joined: Dict[str, List[Tuple[float, float]]] = {n: [] for n in index_names}
        for row in reader:
            key = (row["doc_id"], int(row["section_index"]))
            if key not in slic_by_key:
                continue
            for name in index_names:
                value = row.get(name)
                if value not in (None, ""):
                    joined[name].append((slic_by_key[key], float(value)))

    if all(not pairs for pairs in joined.values()):
        raise JoinEmpty(f"no (doc_id, section_index) overlap with {external_csv}")
    out = []
    for name in index_names:
        pairs = joined[name]
        if len(pairs) < 2:
            log.warning("index %r has %d joined rows; skipped", name, len(pairs))
            continue
        xs = [p[0] for p in pairs]
        ys = [p[1] for p in pairs]
        out.append({"index_name": name,
                    "pearson_r": pearson_correlation(xs, ys),
                    "n": len(pairs)})
    return out


def export_metrics_csv(records: Sequence[CorpusRecord], path) -> None:
    """One row per document: id, category, and the four indices, with a
    corpus min-max normalized proximity column."""
    if not records:
        raise JoinEmpty("no records to export")
    scored = [r for r in records if r.metrics is not None]
    epis = [r.metrics.epi for r in scored]
    lo, hi = (min(epis), max(epis)) if epis else (0.0, 0.0)
    span = hi - lo

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "category", "eci", "epi", "epi_minmax",
                         "cci", "ici"])
        for record in sorted(records, key=lambda r: r.doc_id):
            m = record.metrics
            if m is None:
                writer.writerow([record.doc_id, record.category,
                                 "", "", "", "", ""])
                continue
            epi_minmax = (m.epi - lo) / span if span > 0 else 0.0
            writer.writerow([record.doc_id, record.category,
                             repr(m.eci), repr(m.epi), repr(epi_minmax),
                             repr(m.cci), repr(m.ici)])
