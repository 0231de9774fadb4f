from __future__ import annotations

import pytest

from twistgraph.corpus import named_graphs
from twistgraph.groupoid import PartialSystem


@pytest.fixture
def graphs():
    return named_graphs()


@pytest.fixture
def graph_a(graphs):
    return graphs["graph_A"]


@pytest.fixture
def two_point():
    """``T = {a, b}`` with ``sigma(a) = b`` and ``sigma(b) = b``."""
    return PartialSystem(["a", "b"], {"a": "b", "b": "b"})
