"""Multilayer assembly, concept condensation, and weak-metaedge pruning.

Interlayer edges connect entities of consecutive layers whose embedding
cosine is >= 0.5 (inclusive). Condensation runs Louvain per layer and
aggregates:

  * intralayer metaedge weight = ln(sum of connecting edge weights) * m,
    where m is the number of connecting edges; a sum of 1 gives ln 1 = 0,
    which is treated as "no metaedge" (layer weights are integer counts,
    so sums < 1 cannot occur),
  * interlayer metaedge weight = sum of surviving interlayer entity-edge
    weights between the two concepts' members.

Pruning computes one lower fence over the document's intralayer metaedge
weights and one over the interlayer weights, removes metaedges strictly
below their fence, and records every removal. Interlayer direction is
kept only as display metadata (source layer < target layer); all metrics
are direction-agnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .errors import EmptyLayer, MissingEmbedding
from .graph_core import WeightedGraph, louvain
from .section_layer import LayerNetwork
from .semantics import EntityEmbedding, cosine
from .stats import lower_fence

SIMILARITY_CUTOFF = 0.5

# (entity_in_alpha, entity_in_alpha_plus_1, weight)
InterlayerEdge = Tuple[str, str, float]


@dataclass(frozen=True)
class MultilayerNetwork:
    layers: Tuple[LayerNetwork, ...]
    # interlayer[a] holds edges between layers[a] and layers[a+1]
    interlayer: Tuple[Tuple[InterlayerEdge, ...], ...]


@dataclass(frozen=True)
class Metanode:
    layer: int            # 1-based layer index
    community: int
    members: FrozenSet[str]


@dataclass(frozen=True)
class PrunedEdge:
    kind: str             # "intralayer" | "interlayer"
    layer: int            # for interlayer: the source layer alpha
    source: int           # community id r
    target_layer: int     # == layer for intralayer edges
    target: int           # community id s
    weight: float
    fence: float


@dataclass(frozen=True)
class Metagraph:
    # layer index -> metanodes of that layer, ordered by community id
    metanodes: Dict[int, Tuple[Metanode, ...]]
    # (layer, r, s) with r < s -> weight
    intralayer: Dict[Tuple[int, int, int], float]
    # (alpha, r, s) meaning (alpha, r) -- (alpha+1, s) -> weight
    interlayer: Dict[Tuple[int, int, int], float]
    pruned: Tuple[PrunedEdge, ...] = ()

    def layer_indices(self) -> List[int]:
        return sorted(self.metanodes)

    def metanode_count(self, layer: int) -> int:
        return len(self.metanodes[layer])

    def total_metanodes(self) -> int:
        return sum(len(v) for v in self.metanodes.values())

    def isolated_metanodes(self, layer: int) -> List[Metanode]:
        """Metanodes with no intralayer metaedge within their layer."""
        connected = set()
        for (li, r, s) in self.intralayer:
            if li == layer:
                connected.add(r)
                connected.add(s)
        return [mn for mn in self.metanodes[layer]
                if mn.community not in connected]

    def flatten(self) -> WeightedGraph:
        """Single simple graph over (layer, community) ids, both edge kinds."""
        g = WeightedGraph()
        for layer in self.layer_indices():
            for mn in self.metanodes[layer]:
                g.add_node((layer, mn.community))
        for (layer, r, s), w in self.intralayer.items():
            g.add_edge((layer, r), (layer, s), w)
        for (alpha, r, s), w in self.interlayer.items():
            g.add_edge((alpha, r), (alpha + 1, s), w)
        return g


@dataclass(frozen=True)
class PruningThresholds:
    intralayer_fence: Optional[float]
    interlayer_fence: Optional[float]


def build_interlayer(layers: Sequence[LayerNetwork],
                     embeddings: Sequence[Sequence[EntityEmbedding]]
                     ) -> MultilayerNetwork:
    """Connect consecutive layers by embedding cosine >= 0.5.

    ``embeddings[i]`` must cover every entity of ``layers[i]``. A single
    layer yields an MLN with an empty interlayer set.
    """
    if len(embeddings) != len(layers):
        raise MissingEmbedding("one embedding list per layer required")
    by_layer: List[Dict[str, EntityEmbedding]] = []
    for layer, embs in zip(layers, embeddings):
        table = {e.entity: e for e in embs}
        missing = [n for n in layer.graph.nodes if n not in table]
        if missing:
            raise MissingEmbedding(
                f"layer {layer.section_index} lacks embeddings for {missing!r}")
        by_layer.append(table)

    interlayer: List[Tuple[InterlayerEdge, ...]] = []
    for a in range(len(layers) - 1):
        edges: List[InterlayerEdge] = []
        for e1 in sorted(by_layer[a]):
            for e2 in sorted(by_layer[a + 1]):
                sim = cosine(by_layer[a][e1].vector, by_layer[a + 1][e2].vector)
                if sim >= SIMILARITY_CUTOFF:
                    edges.append((e1, e2, sim))
        interlayer.append(tuple(edges))
    return MultilayerNetwork(layers=tuple(layers), interlayer=tuple(interlayer))


def condense(mln: MultilayerNetwork, seed: int) -> Metagraph:
    """Per-layer Louvain communities become metanodes; aggregate edges."""
    partitions = []
    for layer in mln.layers:
        if layer.graph.node_count == 0:
            raise EmptyLayer(f"layer {layer.section_index} is empty")
        partitions.append(louvain(layer.graph, seed))

    metanodes: Dict[int, Tuple[Metanode, ...]] = {}
    for layer, part in zip(mln.layers, partitions):
        li = layer.section_index
        comms = part.communities()
        metanodes[li] = tuple(
            Metanode(layer=li, community=cid, members=frozenset(comms[cid]))
            for cid in sorted(comms)
        )

    intralayer: Dict[Tuple[int, int, int], float] = {}
    for layer, part in zip(mln.layers, partitions):
        li = layer.section_index
        sums: Dict[Tuple[int, int], float] = {}
        counts: Dict[Tuple[int, int], int] = {}
        for u, v, w in layer.graph.edges():
            r, s = part.assignment[u], part.assignment[v]
            if r == s:
                continue
            key = (min(r, s), max(r, s))
            sums[key] = sums.get(key, 0.0) + w
            counts[key] = counts.get(key, 0) + 1
        for (r, s), total in sorted(sums.items()):
            weight = math.log(total) * counts[(r, s)]
            if weight > 0.0:
                intralayer[(li, r, s)] = weight

    interlayer: Dict[Tuple[int, int, int], float] = {}
    for a, edges in enumerate(mln.interlayer):
        alpha = mln.layers[a].section_index
        part_a = partitions[a].assignment
        part_b = partitions[a + 1].assignment
        for e1, e2, w in edges:
            key = (alpha, part_a[e1], part_b[e2])
            interlayer[key] = interlayer.get(key, 0.0) + w
    interlayer = {k: v for k, v in sorted(interlayer.items()) if v > 0.0}

    return Metagraph(metanodes=metanodes, intralayer=intralayer,
                     interlayer=interlayer, pruned=())


def prune(meta: Metagraph) -> Tuple[Metagraph, PruningThresholds]:
    """Drop metaedges strictly below the document-wide lower fences."""
    intra_fence = (lower_fence(list(meta.intralayer.values()))
                   if meta.intralayer else None)
    inter_fence = (lower_fence(list(meta.interlayer.values()))
                   if meta.interlayer else None)

    kept_intra: Dict[Tuple[int, int, int], float] = {}
    kept_inter: Dict[Tuple[int, int, int], float] = {}
    removed: List[PrunedEdge] = []

    for (layer, r, s), w in sorted(meta.intralayer.items()):
        if intra_fence is not None and w < intra_fence:
            removed.append(PrunedEdge("intralayer", layer, r, layer, s,
                                      w, intra_fence))
        else:
            kept_intra[(layer, r, s)] = w
    for (alpha, r, s), w in sorted(meta.interlayer.items()):
        if inter_fence is not None and w < inter_fence:
            removed.append(PrunedEdge("interlayer", alpha, r, alpha + 1, s,
                                      w, inter_fence))
        else:
            kept_inter[(alpha, r, s)] = w

    pruned_meta = Metagraph(metanodes=meta.metanodes, intralayer=kept_intra,
                            interlayer=kept_inter, pruned=tuple(removed))
    return pruned_meta, PruningThresholds(intralayer_fence=intra_fence,
                                          interlayer_fence=inter_fence)


def export_metagraph(meta: Metagraph) -> dict:
    """JSON-serializable form consumed by the report and visualizers."""
    return {
        "metanodes": [
            {"layer": mn.layer, "community": mn.community,
             "members": sorted(mn.members)}
            for layer in meta.layer_indices()
            for mn in meta.metanodes[layer]
        ],
        "intralayer_metaedges": [
            {"layer": layer, "source": r, "target": s, "weight": w}
            for (layer, r, s), w in sorted(meta.intralayer.items())
        ],
        "interlayer_metaedges": [
            {"source_layer": alpha, "source": r,
             "target_layer": alpha + 1, "target": s, "weight": w}
            for (alpha, r, s), w in sorted(meta.interlayer.items())
        ],
        "pruned": [
            {"kind": p.kind, "layer": p.layer, "source": p.source,
             "target_layer": p.target_layer, "target": p.target,
             "weight": p.weight, "fence": p.fence}
            for p in meta.pruned
        ],
    }
