import csv
import json

import pytest

from cohesia.chiaa_report import SectionResult
from cohesia.doc_metrics import DocumentMetrics
from cohesia.errors import DegenerateTable, JoinEmpty, ParseError
from cohesia.eval_harness import (ContingencyResult, CorpusRecord,
                                  analyze_corpus, component_contingency,
                                  correlate_external, export_metrics_csv,
                                  load_manifest)
from cohesia.pipeline import AnalysisConfig
from cohesia.section_layer import SectionMetrics


def section(index, components=1, slic=0.5, below_filter=False, skipped=False):
    metrics = SectionMetrics(
        section_index=index, slic=slic, slic_defined=True,
        component_count=components, average_edge_weight=1.0, node_count=5,
        edge_count=5, sentence_count=7, below_filter=below_filter)
    return SectionResult(metrics=metrics, layer=None, skipped=skipped)


def record(doc_id, category, sections, metrics=None):
    return CorpusRecord(doc_id=doc_id, category=category,
                        sections=tuple(sections), metrics=metrics)


def doc_metrics(eci=0.1, epi=1.0, cci=0.0, ici=0.0):
    return DocumentMetrics(eci=eci, epi=epi, cci=cci, ici=ici, per_layer=(),
                           k4_before=0, k4_after=0)


class TestManifest:
    def test_relative_paths_resolved(self, tmp_path):
        (tmp_path / "docs").mkdir()
        manifest = tmp_path / "manifest.json"
        manifest.write_text(json.dumps([
            {"path": "docs/a.json", "category": "expert"},
            {"path": str(tmp_path / "b.json"), "category": "student"},
        ]), encoding="utf-8")
        entries = load_manifest(manifest)
        assert entries[0][0] == tmp_path / "docs" / "a.json"
        assert entries[0][1] == "expert"
        assert entries[1][0] == tmp_path / "b.json"

    def test_malformed_manifest(self, tmp_path):
        p = tmp_path / "m.json"
        p.write_text(json.dumps({"not": "a list"}), encoding="utf-8")
        with pytest.raises(ParseError):
            load_manifest(p)
        p.write_text(json.dumps([{"path": "x.json"}]), encoding="utf-8")
        with pytest.raises(ParseError):
            load_manifest(p)


class TestContingency:
    def records(self):
        # expert: 1 multi of 4 eligible; student: 3 multi of 4 eligible
        return [
            record("d1", "expert", [section(1, components=2), section(2),
                                    section(3), section(4)]),
            record("d2", "student", [section(1, components=3),
                                     section(2, components=2),
                                     section(3, components=2), section(4)]),
        ]

    def test_table_and_probabilities(self):
        result = component_contingency(self.records())
        assert result.categories == ("expert", "student")
        assert result.table == ((1, 3), (3, 1))
        assert result.probabilities["expert"] == (1, 4, 0.25)
        assert result.probabilities["student"] == (3, 4, 0.75)
        assert result.chi_square.dof == 1

    def test_filters_exclude_sections(self):
        records = self.records()
        records.append(record("d3", "expert",
                              [section(1, components=2, below_filter=True),
                               section(2, skipped=True)]))
        filtered = component_contingency(records, apply_filters=True)
        assert filtered.table == ((1, 3), (3, 1))
        unfiltered = component_contingency(records, apply_filters=False)
        assert unfiltered.table == ((2, 3), (3, 1))

    def test_needs_two_categories(self):
        with pytest.raises(DegenerateTable):
            component_contingency([record("d1", "expert", [section(1)])])
        three = [record(f"d{i}", cat, [section(1)])
                 for i, cat in enumerate(["a", "b", "c"])]
        with pytest.raises(DegenerateTable):
            component_contingency(three)

    def test_published_counts_reproduce_statistic(self):
        # 101/649 vs 42/1175 multi-component sections
        records = []
        records.append(record("expert-doc", "expert",
                              [section(i + 1, components=2) for i in range(42)]
                              + [section(i + 43) for i in range(1133)]))
        records.append(record("student-doc", "student",
                              [section(i + 1, components=2) for i in range(101)]
                              + [section(i + 102) for i in range(548)]))
        result = component_contingency(records)
        # columns follow sorted categories: expert, student
        assert result.table == ((42, 101), (1133, 548))
        assert result.chi_square.statistic == pytest.approx(83.2, abs=0.1)
        assert result.chi_square.p_value < 0.001
        assert result.probabilities["expert"][2] == pytest.approx(42 / 1175)
        assert result.probabilities["student"][2] == pytest.approx(101 / 649)


class TestCorrelateExternal:
    def write_csv(self, tmp_path, rows, header="doc_id,section_index,taaco"):
        p = tmp_path / "external.csv"
        p.write_text("\n".join([header] + rows) + "\n", encoding="utf-8")
        return p

    def records(self):
        return [record("d1", "expert", [section(1, slic=0.1),
                                        section(2, slic=0.2),
                                        section(3, slic=0.3)])]

    def test_perfect_correlation(self, tmp_path):
        p = self.write_csv(tmp_path, ["d1,1,1.0", "d1,2,2.0", "d1,3,3.0"])
        rows = correlate_external(self.records(), p)
        assert rows == [{"index_name": "taaco",
                         "pearson_r": pytest.approx(1.0), "n": 3}]

    def test_unmatched_rows_ignored(self, tmp_path):
        p = self.write_csv(tmp_path, ["d1,1,1.0", "d1,2,2.0", "ghost,9,5.0"])
        rows = correlate_external(self.records(), p)
        assert rows[0]["n"] == 2

    def test_no_overlap_raises(self, tmp_path):
        p = self.write_csv(tmp_path, ["ghost,1,1.0"])
        with pytest.raises(JoinEmpty):
            correlate_external(self.records(), p)

    def test_missing_header_columns(self, tmp_path):
        p = self.write_csv(tmp_path, ["d1,1.0"], header="doc_id,taaco")
        with pytest.raises(ParseError):
            correlate_external(self.records(), p)

    def test_sparse_column_skipped(self, tmp_path, caplog):
        p = self.write_csv(tmp_path, ["d1,1,1.0,", "d1,2,2.0,", "d1,3,3.0,9.9"],
                           header="doc_id,section_index,taaco,sparse")
        with caplog.at_level("WARNING"):
            rows = correlate_external(self.records(), p)
        assert [r["index_name"] for r in rows] == ["taaco"]
        assert any("sparse" in r.message for r in caplog.records)


class TestExportCsv:
    def test_rows_and_minmax(self, tmp_path):
        records = [
            record("d1", "expert", [section(1)], doc_metrics(epi=1.0)),
            record("d2", "student", [section(1)], doc_metrics(epi=3.0)),
            record("d3", "student", [section(1)], doc_metrics(epi=2.0)),
            record("d0", "expert", [section(1)], None),
        ]
        out = tmp_path / "metrics.csv"
        export_metrics_csv(records, out)
        with open(out, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        assert [r["id"] for r in rows] == ["d0", "d1", "d2", "d3"]
        assert rows[0]["eci"] == ""   # metric-less document
        assert float(rows[1]["epi_minmax"]) == pytest.approx(0.0)
        assert float(rows[2]["epi_minmax"]) == pytest.approx(1.0)
        assert float(rows[3]["epi_minmax"]) == pytest.approx(0.5)

    def test_constant_epi_normalizes_to_zero(self, tmp_path):
        records = [record("d1", "a", [section(1)], doc_metrics(epi=2.0)),
                   record("d2", "b", [section(1)], doc_metrics(epi=2.0))]
        out = tmp_path / "metrics.csv"
        export_metrics_csv(records, out)
        with open(out, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        assert all(float(r["epi_minmax"]) == 0.0 for r in rows)

    def test_values_round_trip_exactly(self, tmp_path):
        dm = doc_metrics(eci=0.123456789012345, epi=1.1, cci=1 / 3, ici=5 / 23)
        records = [record("d1", "a", [section(1)], dm)]
        out = tmp_path / "metrics.csv"
        export_metrics_csv(records, out)
        with open(out, newline="", encoding="utf-8") as fh:
            row = next(csv.DictReader(fh))
        assert float(row["eci"]) == dm.eci
        assert float(row["cci"]) == dm.cci
        assert float(row["ici"]) == dm.ici

    def test_empty_raises(self, tmp_path):
        with pytest.raises(JoinEmpty):
            export_metrics_csv([], tmp_path / "x.csv")


SECTION_TEXT = (
    "The citation network links every paper to its references. "
    "Each paper cites earlier papers inside the network. "
    "A reference ties one paper to another paper directly. "
    "Dense citation patterns make the network cohesive. "
    "Sparse references leave the network fragmented. "
    "The network therefore mirrors the citation structure of papers."
)


def write_doc(tmp_path, doc_id, n_sections=2):
    payload = {"id": doc_id,
               "sections": [{"heading": None, "text": SECTION_TEXT}
                            for _ in range(n_sections)]}
    p = tmp_path / f"{doc_id}.json"
    p.write_text(json.dumps(payload), encoding="utf-8")
    return p


def test_analyze_corpus_end_to_end(tmp_path):
    write_doc(tmp_path, "doc-b")
    write_doc(tmp_path, "doc-a")
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps([
        {"path": "doc-b.json", "category": "student"},
        {"path": "doc-a.json", "category": "expert"},
    ]), encoding="utf-8")
    records = analyze_corpus(manifest, AnalysisConfig())
    assert [r.doc_id for r in records] == ["doc-a", "doc-b"]
    assert records[0].metrics is not None
    # identical inputs give identical metrics
    assert records[0].metrics == records[1].metrics
    export_metrics_csv(records, tmp_path / "out.csv")
    assert (tmp_path / "out.csv").exists()
