import itertools
import random

import pytest
from hypothesis import strategies as st

from oridiam.generators import random_bridgeless_graph, random_corpus
from oridiam.graph import UndirectedGraph

CORPUS_SEED = 20240601
CORPUS_SIZE = 200


@st.composite
def simple_graphs(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return UndirectedGraph.from_edges(n, chosen)


@st.composite
def bridgeless_graphs(draw, min_n=3, max_n=12, max_extra=4):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    extra = draw(st.integers(0, max_extra))
    return random_bridgeless_graph(n, random.Random(seed), extra)


@pytest.fixture(scope="session")
def corpus():
    return random_corpus(CORPUS_SIZE, CORPUS_SEED, max_n=40)
