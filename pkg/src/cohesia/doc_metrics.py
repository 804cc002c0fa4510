"""Document-level cohesion indices computed from layers and metagraphs.

  * entity connectivity: root-mean-square gap of per-layer weighted
    clustering coefficients from the ideal value 1,
  * entity proximity: root-mean-square gap of per-layer average path
    length from the small-world ideal ln(n_i),
  * concept connectivity: fractional loss of 4-cliques in the flattened
    metagraph caused by weak-metaedge pruning,
  * isolated concepts: fraction of metanodes with no surviving
    intralayer metaedge.

Layers with fewer than two nodes are excluded from the proximity index
(with a warning); a layer whose metagraph has a single metanode is
counted isolated per the letter of the definition but annotated
``single-concept-layer`` so downstream users can exclude it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .errors import LayerTooSmall, NoLayers, NoMetanodes
from .graph_core import (WeightedGraph, average_path_length, count_k4,
                         weighted_clustering)
from .mln import Metagraph
from .section_layer import LayerNetwork

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LayerTerm:
    layer_index: int
    node_count: int
    wcc: float
    apl: Optional[float]              # None when node_count < 2
    deviation: Optional[float]        # ln(n_i) - apl_i
    metanode_count: int = 0
    isolated_count: int = 0
    single_concept: bool = False


@dataclass(frozen=True)
class DocumentMetrics:
    eci: float
    epi: float
    cci: float
    ici: float
    per_layer: Tuple[LayerTerm, ...]
    k4_before: int
    k4_after: int
    annotations: Tuple[str, ...] = ()


def _graph_of(layer) -> WeightedGraph:
    return layer.graph if isinstance(layer, LayerNetwork) else layer


def compute_eci(layers: Sequence) -> float:
    """sqrt(mean((1 - WCC_i)^2)) over all layers."""
    if not layers:
        raise NoLayers("entity connectivity index needs at least one layer")
    gaps = [(1.0 - weighted_clustering(_graph_of(l))) ** 2 for l in layers]
    return math.sqrt(sum(gaps) / len(gaps))


def compute_epi(layers: Sequence) -> float:
    """sqrt(mean((ln n_i - APL_i)^2)) over layers with n_i >= 2."""
    if not layers:
        raise NoLayers("entity proximity index needs at least one layer")
    gaps = []
    for layer in layers:
        g = _graph_of(layer)
        if g.node_count < 2:
            log.warning("layer with %d node(s) excluded from proximity index",
                        g.node_count)
            continue
        gaps.append((math.log(g.node_count) - average_path_length(g)) ** 2)
    if not gaps:
        raise LayerTooSmall("no layer has two or more nodes")
    return math.sqrt(sum(gaps) / len(gaps))


def compute_cci(meta_before: Metagraph,
                meta_after: Metagraph) -> Tuple[float, int, int, Tuple[str, ...]]:
    """1 - K4_after / K4_before on the flattened metagraphs.

    Returns (cci, k4_before, k4_after, annotations); a zero baseline
    yields cci = 0 annotated ``no-k4-baseline``.
    """
    k4_before = count_k4(meta_before.flatten())
    k4_after = count_k4(meta_after.flatten())
    if k4_before == 0:
        return 0.0, 0, k4_after, ("no-k4-baseline",)
    return 1.0 - k4_after / k4_before, k4_before, k4_after, ()


def compute_ici(meta_after: Metagraph
                ) -> Tuple[float, List[Tuple[int, int, int]], Tuple[str, ...]]:
    """Fraction of metanodes with no surviving intralayer metaedge.

    Returns (ici, [(layer, metanode_count, isolated_count)], annotations).
    """
    total = meta_after.total_metanodes()
    if total == 0:
        raise NoMetanodes("isolation index on empty metagraph")
    per_layer = []
    annotations: List[str] = []
    isolated_total = 0
    for layer in meta_after.layer_indices():
        count = meta_after.metanode_count(layer)
        isolated = len(meta_after.isolated_metanodes(layer))
        if count == 1:
            annotations.append(f"single-concept-layer:{layer}")
        per_layer.append((layer, count, isolated))
        isolated_total += isolated
    return isolated_total / total, per_layer, tuple(annotations)


def compute_document_metrics(layers: Sequence[LayerNetwork],
                             meta_before: Metagraph,
                             meta_after: Metagraph) -> DocumentMetrics:
    """Assemble all four indices plus per-layer diagnostics."""
    eci = compute_eci(layers)
    epi = compute_epi(layers)
    cci, k4_before, k4_after, cci_notes = compute_cci(meta_before, meta_after)
    ici, iso_per_layer, ici_notes = compute_ici(meta_after)
    iso_by_layer = {layer: (count, isolated)
                    for layer, count, isolated in iso_per_layer}

    per_layer = []
    for layer in layers:
        g = layer.graph
        n = g.node_count
        apl = average_path_length(g) if n >= 2 else None
        deviation = (math.log(n) - apl) if apl is not None else None
        count, isolated = iso_by_layer.get(layer.section_index, (0, 0))
        per_layer.append(LayerTerm(
            layer_index=layer.section_index,
            node_count=n,
            wcc=weighted_clustering(g),
            apl=apl,
            deviation=deviation,
            metanode_count=count,
            isolated_count=isolated,
            single_concept=(count == 1),
        ))

    return DocumentMetrics(eci=eci, epi=epi, cci=cci, ici=ici,
                           per_layer=tuple(per_layer),
                           k4_before=k4_before, k4_after=k4_after,
                           annotations=tuple(cci_notes) + tuple(ici_notes))
