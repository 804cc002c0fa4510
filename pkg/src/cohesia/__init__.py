"""Cohesia: multilayer-network discourse cohesion analysis.

Models a structured document as a multilayer network of key-entities,
computes section-level (SLIC) and document-level (ECI, EPI, CCI, ICI)
cohesion indices, and emits prescriptive CHIAA reports that localize
cohesion gaps.
"""

from .corpus_io import Document, Section, Sentence, load_document
from .errors import CohesiaError
from .pipeline import AnalysisConfig, analyze_document

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "CohesiaError",
    "Document",
    "Section",
    "Sentence",
    "analyze_document",
    "load_document",
    "__version__",
]
