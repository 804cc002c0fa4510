import math

import pytest

from cohesia.doc_metrics import (compute_cci, compute_document_metrics,
                                 compute_eci, compute_epi, compute_ici)
from cohesia.errors import LayerTooSmall, NoLayers, NoMetanodes
from cohesia.graph_core import WeightedGraph
from cohesia.mln import Metagraph, Metanode, prune
from cohesia.section_layer import LayerNetwork


def complete_graph(n, weight=1.0):
    g = WeightedGraph()
    for i in range(n):
        for j in range(i + 1, n):
            g.add_edge(i, j, weight)
    return g


def as_layer(g, index=1):
    return LayerNetwork(section_index=index, graph=g, fence=None,
                        dropped_pairs=(), sentence_count=6)


class TestEci:
    def test_all_complete_layers_give_zero(self):
        layers = [as_layer(complete_graph(4), 1), as_layer(complete_graph(5), 2)]
        assert compute_eci(layers) == pytest.approx(0.0)

    def test_triangle_free_layer_gives_one(self):
        g = WeightedGraph()
        g.add_edge("a", "b", 1.0)
        g.add_edge("b", "c", 1.0)
        assert compute_eci([as_layer(g)]) == pytest.approx(1.0)

    def test_rms_of_gaps(self):
        # layer 1: wcc = 1 (complete); layer 2: wcc = 0 (path)
        path = WeightedGraph()
        path.add_edge("a", "b", 1.0)
        path.add_edge("b", "c", 1.0)
        layers = [as_layer(complete_graph(3), 1), as_layer(path, 2)]
        assert compute_eci(layers) == pytest.approx(math.sqrt(0.5))

    def test_no_layers(self):
        with pytest.raises(NoLayers):
            compute_eci([])

    def test_range(self):
        g = WeightedGraph()
        g.add_edge("a", "b", 2.0)
        g.add_edge("b", "c", 1.0)
        g.add_edge("a", "c", 3.0)
        g.add_edge("c", "d", 1.0)
        assert 0.0 <= compute_eci([as_layer(g)]) <= 1.0


class TestEpi:
    def test_hand_value(self):
        # complete graph n=4: apl = 1, ln 4 - 1
        assert compute_epi([as_layer(complete_graph(4))]) == \
            pytest.approx(abs(math.log(4) - 1.0))

    def test_rms_over_layers(self):
        # n=4 complete: gap = ln4 - 1; n=3 path a-b-c: apl = 4/3, gap = ln3 - 4/3
        path = WeightedGraph()
        path.add_edge("a", "b", 1.0)
        path.add_edge("b", "c", 1.0)
        layers = [as_layer(complete_graph(4), 1), as_layer(path, 2)]
        g1 = math.log(4) - 1.0
        g2 = math.log(3) - 4 / 3
        assert compute_epi(layers) == pytest.approx(
            math.sqrt((g1 ** 2 + g2 ** 2) / 2))

    def test_single_node_layer_skipped(self, caplog):
        lone = WeightedGraph()
        lone.add_node("x")
        layers = [as_layer(complete_graph(4), 1), as_layer(lone, 2)]
        with caplog.at_level("WARNING"):
            epi = compute_epi(layers)
        assert epi == pytest.approx(abs(math.log(4) - 1.0))
        assert any("excluded" in r.message for r in caplog.records)

    def test_all_layers_too_small(self):
        lone = WeightedGraph()
        lone.add_node("x")
        with pytest.raises(LayerTooSmall):
            compute_epi([as_layer(lone)])

    def test_no_layers(self):
        with pytest.raises(NoLayers):
            compute_epi([])

    def test_disconnected_layer_counts_unreachable_as_n(self):
        g = WeightedGraph()
        g.add_edge("a", "b", 1.0)
        g.add_edge("c", "d", 1.0)
        # apl = 3 (see graph tests), gap = ln 4 - 3
        assert compute_epi([as_layer(g)]) == pytest.approx(
            abs(math.log(4) - 3.0))


def k4_metagraph():
    """Flattened form: K5 on communities 0-4 of layer 1, plus community 5
    attached to {1,2,3,4} and community 6 attached to {2,3,4}. One weak
    edge (5,1) = 0.1 dies at the fence, killing 3 of the 14 4-cliques."""
    metanodes = {1: tuple(Metanode(1, c, frozenset({str(c)}))
                          for c in range(7))}
    intralayer = {}
    for i in range(5):
        for j in range(i + 1, 5):
            intralayer[(1, i, j)] = 10.0
    for j in (2, 3, 4):
        intralayer[(1, j, 5)] = 10.0
    intralayer[(1, 1, 5)] = 0.1
    for j in (2, 3, 4):
        intralayer[(1, j, 6)] = 10.0
    return Metagraph(metanodes=metanodes, intralayer=intralayer, interlayer={})


class TestCci:
    def test_fractional_k4_loss(self):
        before = k4_metagraph()
        after, thresholds = prune(before)
        assert thresholds.intralayer_fence == pytest.approx(10.0)
        cci, k4_b, k4_a, notes = compute_cci(before, after)
        # before: 5 in the K5 + C(4,3)=4 with node 5 + 1 with node 6 ...
        # counted exactly by the clique counter; the weak edge kills the
        # 3 cliques {1, 5, x, y}
        assert k4_b - k4_a == 3
        assert cci == pytest.approx(3 / k4_b)
        assert notes == ()

    def test_no_baseline(self):
        metanodes = {1: (Metanode(1, 0, frozenset({"a"})),
                         Metanode(1, 1, frozenset({"b"})))}
        meta = Metagraph(metanodes=metanodes, intralayer={(1, 0, 1): 2.0},
                         interlayer={})
        cci, k4_b, k4_a, notes = compute_cci(meta, meta)
        assert (cci, k4_b, k4_a) == (0.0, 0, 0)
        assert notes == ("no-k4-baseline",)

    def test_no_pruning_means_zero(self):
        meta = k4_metagraph()
        cci, k4_b, k4_a, notes = compute_cci(meta, meta)
        assert cci == 0.0
        assert k4_b == k4_a


class TestIci:
    def narrative_metagraph(self):
        """Six layers with 4, 4, 3, 3, 4, 5 concepts; layers 2 and 4 are
        fully chained, the rest leave 1, 3, and 1 concepts unlinked."""
        metanodes = {}
        intralayer = {}

        def layer(li, count, linked_pairs):
            metanodes[li] = tuple(Metanode(li, c, frozenset({f"L{li}c{c}"}))
                                  for c in range(count))
            for r, s in linked_pairs:
                intralayer[(li, r, s)] = 2.0

        layer(1, 4, [(0, 1), (1, 2)])          # concept 3 isolated
        layer(2, 4, [(0, 1), (1, 2), (2, 3)])  # none isolated
        layer(3, 3, [])                        # all 3 isolated
        layer(4, 3, [(0, 1), (1, 2)])          # none isolated
        layer(5, 4, [(0, 1), (1, 2), (2, 3)])  # none isolated
        layer(6, 5, [(0, 1), (1, 2), (2, 3)])  # concept 4 isolated
        return Metagraph(metanodes=metanodes, intralayer=intralayer,
                         interlayer={})

    def test_narrative_fraction(self):
        ici, per_layer, notes = compute_ici(self.narrative_metagraph())
        assert ici == pytest.approx(5 / 23)
        assert per_layer == [(1, 4, 1), (2, 4, 0), (3, 3, 3),
                             (4, 3, 0), (5, 4, 0), (6, 5, 1)]
        assert notes == ()

    def test_interlayer_edges_do_not_rescue_isolation(self):
        # isolation is about intralayer links only
        metanodes = {1: (Metanode(1, 0, frozenset({"a"})),),
                     2: (Metanode(2, 0, frozenset({"b"})),)}
        meta = Metagraph(metanodes=metanodes, intralayer={},
                         interlayer={(1, 0, 0): 5.0})
        ici, _per_layer, notes = compute_ici(meta)
        assert ici == 1.0
        assert "single-concept-layer:1" in notes
        assert "single-concept-layer:2" in notes

    def test_empty_metagraph(self):
        with pytest.raises(NoMetanodes):
            compute_ici(Metagraph(metanodes={}, intralayer={}, interlayer={}))


class TestAssembled:
    def test_full_document_metrics(self):
        layers = [as_layer(complete_graph(4), 1), as_layer(complete_graph(3), 2)]
        meta = k4_metagraph()
        after, _ = prune(meta)
        dm = compute_document_metrics(layers, meta, after)
        assert dm.eci == pytest.approx(0.0)
        assert dm.k4_before - dm.k4_after == 3
        assert len(dm.per_layer) == 2
        term = dm.per_layer[0]
        assert term.layer_index == 1
        assert term.node_count == 4
        assert term.wcc == pytest.approx(1.0)
        assert term.apl == pytest.approx(1.0)
        assert term.deviation == pytest.approx(math.log(4) - 1.0)

    def test_deviation_sign_flags_sprawl(self):
        # a long path has apl >> ln(n): deviation is negative
        g = WeightedGraph()
        for i in range(7):
            g.add_edge(i, i + 1, 1.0)
        metanodes = {1: (Metanode(1, 0, frozenset({"x"})),
                         Metanode(1, 1, frozenset({"y"})))}
        meta = Metagraph(metanodes=metanodes, intralayer={(1, 0, 1): 2.0},
                         interlayer={})
        dm = compute_document_metrics([as_layer(g)], meta, meta)
        assert dm.per_layer[0].deviation < 0
