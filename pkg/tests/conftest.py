import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cohesia.corpus_io import Section, Sentence, tokenize
from cohesia.graph_core import WeightedGraph


def make_section(texts, index=1, heading=None):
    sentences = tuple(
        Sentence(index=i + 1, raw=raw, tokens=tokenize(raw))
        for i, raw in enumerate(texts)
    )
    return Section(index=index, heading=heading, sentences=sentences)


def random_graph(n, p, rng, weighted=False):
    g = WeightedGraph()
    for i in range(n):
        g.add_node(i)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                w = rng.uniform(0.5, 5.0) if weighted else 1.0
                g.add_edge(i, j, w)
    return g


@pytest.fixture
def rng():
    return random.Random(20240817)
