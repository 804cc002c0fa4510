"""Document ingestion, cleaning, and sentence/token segmentation.

Canonical input is JSON ``{"id": str, "sections": [{"heading": str|null,
"text": str}]}``; text is assumed pre-cleaned by the producer, with a
best-effort cleaner (heading/caption line stripping) available behind a
flag. Plain-text input splits sections on a delimiter line (default
``===``), using the file stem as document id.

Sentence segmentation is deliberately rule based: split at ``.?!``
followed by whitespace and an upper-case letter or digit, unless the
token before the terminator is a known abbreviation. The abbreviation
list ships as a data file and is user extendable. The same decision is
reached whether sentences are separated by spaces or newlines, which
makes re-segmentation of joined output idempotent.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import List, Optional, Sequence, Set, Tuple

from .errors import EmptyDocument, ParseError

_TOKEN_RE = re.compile(r"[a-z0-9]+(?:-[a-z0-9]+)*")
_TERMINATOR_RE = re.compile(r"[.?!]+")

# best-effort cleaner patterns: figure/table captions and numbered headings
_CAPTION_RE = re.compile(r"^\s*(figure|fig\.?|table|tab\.?)\s*\d+\s*[:.]", re.I)
_NUMBERED_HEADING_RE = re.compile(r"^\s*\d+(\.\d+)*\.?\s+\S")
# equation-only line: contains a math operator and no run of 3+ letters
# (variables in displayed equations are short; prose words are not)
_MATH_OPERATOR_RE = re.compile(r"[=+*/^<>{}\\]|(?<=\s)-(?=\s)")
_LONG_WORD_RE = re.compile(r"[a-zA-Z]{3,}")


def _load_wordlist(name: str) -> List[str]:
    text = resources.files("cohesia.data").joinpath(name).read_text("utf-8")
    return [line.strip() for line in text.splitlines()
            if line.strip() and not line.startswith("#")]


def default_stopwords() -> Set[str]:
    return set(_load_wordlist("stopwords.txt"))


def default_abbreviations() -> Set[str]:
    return set(_load_wordlist("abbreviations.txt"))


@dataclass(frozen=True)
class Sentence:
    index: int           # 1-based within its section
    raw: str
    tokens: Tuple[str, ...]


@dataclass(frozen=True)
class Section:
    index: int           # 1-based within its document
    heading: Optional[str]
    sentences: Tuple[Sentence, ...]

    @property
    def empty(self) -> bool:
        return len(self.sentences) == 0


@dataclass(frozen=True)
class Document:
    id: str
    sections: Tuple[Section, ...]


def tokenize(text: str) -> Tuple[str, ...]:
    """Lowercased word tokens; hyphenated words are kept whole."""
    return tuple(_TOKEN_RE.findall(text.lower()))


def segment_sentences(text: str,
                      abbreviations: Optional[Set[str]] = None) -> List[Sentence]:
    """Deterministic rule-based sentence split. Empty input gives []."""
    if abbreviations is None:
        abbreviations = default_abbreviations()
    pieces: List[str] = []
    start = 0
    for match in _TERMINATOR_RE.finditer(text):
        end = match.end()
        rest = text[end:]
        if not rest or not rest[0].isspace():
            continue                      # terminator must be followed by whitespace
        stripped = rest.lstrip()
        if not stripped:
            continue                      # trailing whitespace; final piece covers it
        nxt = stripped[0]
        if not (nxt.isupper() or nxt.isdigit()):
            continue
        if _is_abbreviation(text[:end], abbreviations):
            continue
        pieces.append(text[start:end])
        start = end
    pieces.append(text[start:])

    sentences: List[Sentence] = []
    for piece in pieces:
        raw = piece.strip()
        if not raw:
            continue
        sentences.append(Sentence(index=len(sentences) + 1, raw=raw,
                                  tokens=tokenize(raw)))
    return sentences


def _is_abbreviation(prefix: str, abbreviations: Set[str]) -> bool:
    words = prefix.split()
    if not words:
        return False
    last = words[-1].lower().lstrip("([{'\"")
    if last in abbreviations:
        return True
    if len(words) >= 2:
        return f"{words[-2].lower()} {last}" in abbreviations
    return False


def clean_text(text: str) -> str:
    """Best-effort removal of heading, caption, and equation-only lines."""
    kept = []
    for line in text.splitlines():
        if _CAPTION_RE.match(line):
            continue
        if line.strip() and _MATH_OPERATOR_RE.search(line) \
                and not _LONG_WORD_RE.search(line):
            continue
        if _NUMBERED_HEADING_RE.match(line) and len(line.split()) <= 8 \
                and not line.rstrip().endswith((".", "?", "!")):
            continue
        kept.append(line)
    return "\n".join(kept)


def _build_section(index: int, heading: Optional[str], text: str,
                   clean: bool, abbreviations: Optional[Set[str]]) -> Section:
    body = clean_text(text) if clean else text
    sentences = segment_sentences(body, abbreviations)
    return Section(index=index, heading=heading, sentences=tuple(sentences))


def load_document(path, format: str = "json", *, clean: bool = False,
                  delimiter: str = "===",
                  abbreviations: Optional[Set[str]] = None) -> Document:
    """Load and segment a document from disk.

    Raises ParseError for malformed files and EmptyDocument when no
    section yields any sentence.
    """
    path = Path(path)
    try:
        raw = path.read_text("utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc

    if format == "json":
        doc_id, section_specs = _parse_json(raw, path)
    elif format == "plain":
        doc_id = path.stem
        section_specs = [(None, chunk) for chunk in _split_plain(raw, delimiter)]
    else:
        raise ParseError(f"unknown format {format!r}")

    if not section_specs:
        raise EmptyDocument(f"{path}: no sections")
    sections = tuple(
        _build_section(i + 1, heading, text, clean, abbreviations)
        for i, (heading, text) in enumerate(section_specs)
    )
    if all(s.empty for s in sections):
        raise EmptyDocument(f"{path}: no non-empty section")
    return Document(id=doc_id, sections=sections)


def _parse_json(raw: str, path: Path):
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "id" not in data or "sections" not in data:
        raise ParseError(f"{path}: expected object with 'id' and 'sections'")
    if not isinstance(data["id"], str) or not isinstance(data["sections"], list):
        raise ParseError(f"{path}: bad types for 'id' or 'sections'")
    specs = []
    for i, sec in enumerate(data["sections"]):
        if not isinstance(sec, dict) or "text" not in sec:
            raise ParseError(f"{path}: section {i} missing 'text'")
        heading = sec.get("heading")
        if heading is not None and not isinstance(heading, str):
            raise ParseError(f"{path}: section {i} heading must be string or null")
        if not isinstance(sec["text"], str):
            raise ParseError(f"{path}: section {i} text must be a string")
        specs.append((heading, sec["text"]))
    return data["id"], specs


def _split_plain(raw: str, delimiter: str) -> List[str]:
    chunks: List[str] = []
    current: List[str] = []
    for line in raw.splitlines():
        if line.strip() == delimiter:
            chunks.append("\n".join(current))
            current = []
        else:
            current.append(line)
    chunks.append("\n".join(current))
    return [c for c in chunks if c.strip()]
