"""Command-line entry points.

Exit codes: 0 success, 2 analysis completed with warnings (e.g. skipped
sections), 1 error. ``COHESIA_ENDPOINT`` is the fallback for --endpoint.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .chiaa_report import render_report
from .corpus_io import load_document
from .errors import CohesiaError
from .eval_harness import (analyze_corpus, component_contingency,
                           correlate_external, export_metrics_csv)
from .pipeline import AnalysisConfig, analyze_document
from .semantics import remote_health_check
from .errors import DegenerateTable

log = logging.getLogger("cohesia")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--provider", choices=["surrogate", "remote"],
                        default="surrogate")
    parser.add_argument("--endpoint",
                        default=os.environ.get("COHESIA_ENDPOINT"),
                        help="remote provider URL (or $COHESIA_ENDPOINT)")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--threshold-scope", choices=["section", "document"],
                        default="section")
    parser.add_argument("--entities", metavar="FILE", default=None,
                        help="JSON entity-list sidecar {section_index: [entity]}")
    parser.add_argument("--no-filters", action="store_true",
                        help="disable the corpus section filters")
    parser.add_argument("--clean", action="store_true",
                        help="best-effort heading/caption stripping")


def _config_from(args) -> AnalysisConfig:
    return AnalysisConfig(
        provider=args.provider,
        endpoint=args.endpoint,
        seed=args.seed,
        threshold_scope=args.threshold_scope,
        extractor="external-list" if args.entities else "heuristic",
        entities_path=args.entities,
        apply_filters=not args.no_filters,
        clean=args.clean,
        output_format=getattr(args, "format", "json"),
    )


def cmd_analyze(args) -> int:
    config = _config_from(args)
    if config.provider == "remote":
        # fail fast before any analysis work
        remote_health_check(config.endpoint or "")
    doc = load_document(args.document, format=args.input_format,
                        clean=config.clean)
    report, had_warnings = analyze_document(doc, config)
    payload = render_report(report, format=args.format)
    if args.output:
        Path(args.output).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
    return 2 if had_warnings else 0


def cmd_eval(args) -> int:
    config = _config_from(args)
    records = analyze_corpus(args.manifest, config)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rc = 0

    export_metrics_csv(records, out_dir / "document_metrics.csv")
    try:
        contingency = component_contingency(records,
                                            apply_filters=config.apply_filters)
    except DegenerateTable as exc:
        log.warning("contingency skipped: %s", exc)
        rc = 2
    else:
        summary = {
            "categories": list(contingency.categories),
            "table": {"multiple": list(contingency.table[0]),
                      "single": list(contingency.table[1])},
            "statistic": contingency.chi_square.statistic,
            "p_value": contingency.chi_square.p_value,
            "dof": contingency.chi_square.dof,
            "seed": config.seed,
        }
        (out_dir / "contingency.json").write_text(
            json.dumps(summary, indent=2, sort_keys=True) + "\n", "utf-8")
        print(f"components x category: chi2 = "
              f"{contingency.chi_square.statistic:.4f}, "
              f"p = {contingency.chi_square.p_value:.3g}")
        for cat, (multi, total, p) in contingency.probabilities.items():
            print(f"  {cat}: {multi}/{total} = {p:.8f} multi-component sections")

    if args.external_csv:
        rows = correlate_external(records, args.external_csv,
                                  apply_filters=config.apply_filters)
        with open(out_dir / "correlations.csv", "w", encoding="utf-8") as fh:
            fh.write("index_name,pearson_r,n\n")
            for row in rows:
                fh.write(f"{row['index_name']},{row['pearson_r']!r},{row['n']}\n")
        for row in rows:
            print(f"SLIC vs {row['index_name']}: r = {row['pearson_r']:.4f} "
                  f"(n = {row['n']})")
    return rc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cohesia",
        description="Multilayer-network discourse cohesion analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="analyze one document")
    p_an.add_argument("document", help="document file")
    p_an.add_argument("--input-format", choices=["json", "plain"],
                      default="json")
    p_an.add_argument("--format", choices=["json", "md"], default="json")
    p_an.add_argument("--output", default=None, help="write report here")
    _add_common(p_an)
    p_an.set_defaults(func=cmd_analyze)

    p_ev = sub.add_parser("eval", help="run corpus experiments")
    p_ev.add_argument("manifest", help="JSON manifest [{path, category}]")
    p_ev.add_argument("--external-csv", default=None,
                      help="external cohesion indices to correlate against")
    p_ev.add_argument("--out-dir", default="cohesia-eval")
    _add_common(p_ev)
    p_ev.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if getattr(args, "format", None) == "md":
        args.format = "markdown"
    try:
        return args.func(args)
    except CohesiaError as exc:
        module = type(exc).__module__.split(".")[-1]
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
