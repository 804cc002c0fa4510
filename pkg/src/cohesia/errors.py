"""Shared exception hierarchy.

Every module raises subclasses of CohesiaError so the CLI can tag
failures with the module they came from.
"""


class CohesiaError(Exception):
    """Base class for all analyzer errors."""


# corpus_io
class ParseError(CohesiaError):
    """Input file is malformed for the declared format."""


class EmptyDocument(CohesiaError):
    """Document contains no non-empty section."""


# semantics
class TooFewSentences(CohesiaError):
    """Coherence scoring needs at least two sentences."""


class ProviderUnavailable(CohesiaError):
    """Remote semantic provider unreachable or reported invalid metadata."""


class EntityAbsent(CohesiaError):
    """Requested an embedding for an entity not present in the section."""


# stats
class EmptyInput(CohesiaError):
    """Statistic requested on an empty sample."""


class DegenerateTable(CohesiaError):
    """Contingency table has a zero marginal (or too few categories)."""


class LengthMismatch(CohesiaError):
    """Paired samples have different lengths."""


class ZeroVariance(CohesiaError):
    """Correlation undefined: one of the samples is constant."""


# graph_core
class TooFewNodes(CohesiaError):
    """Average path length needs at least two nodes."""


class EmptyGraph(CohesiaError):
    """Community detection needs a non-empty graph."""


# section_layer
class NoEntities(CohesiaError):
    """Layer construction got an empty key-entity set."""


# mln
class MissingEmbedding(CohesiaError):
    """A layer entity has no embedding to build interlayer edges from."""


class EmptyLayer(CohesiaError):
    """Condensation requires every layer graph to be non-empty."""


# doc_metrics
class NoLayers(CohesiaError):
    """Document-level index requested with no layers."""


class LayerTooSmall(CohesiaError):
    """No layer is large enough for the requested index."""


class NoMetanodes(CohesiaError):
    """Isolation index requested on a metagraph without metanodes."""


# eval_harness
class JoinEmpty(CohesiaError):
    """External-index join produced no rows."""
