from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistgraph.corpus import random_graph, small_graphs
from twistgraph.errors import NonComposable
from twistgraph.graph import Path, TopGraph, classify_vertices, concat_paths, enumerate_paths


def test_empty_graph_classification():
    c = classify_vertices(TopGraph([], {}))
    assert c.fin == c.sce == c.rg == c.sg == frozenset()


def test_graph_a_classification(graph_a):
    c = graph_a.classification
    assert c.rg == {"v"}
    assert c.sg == {"w"}
    assert c.sce == {"w"}
    assert c.fin == {"v", "w"}


def test_loop_is_regular(graphs):
    c = graphs["loop"].classification
    assert c.rg == {"v"} and c.sg == frozenset()


def test_enumerate_paths_examples(graphs, graph_a):
    loop = graphs["loop"]
    assert [p.edges for p in enumerate_paths(loop, 3)] == [("f", "f", "f")]
    assert enumerate_paths(graph_a, 2) == []
    assert {p.range for p in enumerate_paths(graph_a, 0)} == {"v", "w"}
    with pytest.raises(ValueError):
        enumerate_paths(graph_a, -1)


def test_concatenation_units(graph_a, graphs):
    e = graph_a.path("e")
    assert concat_paths(graph_a.vertex_path("v"), e) == e
    assert concat_paths(e, graph_a.vertex_path("w")) == e
    loop = graphs["loop"]
    assert concat_paths(loop.path("f"), loop.path("f")) == loop.path("f", "f")
    with pytest.raises(NonComposable):
        concat_paths(e, e)


def test_path_validation(graph_a):
    assert graph_a.is_path(Path(("e",), "v", "w"))
    assert not graph_a.is_path(Path(("e",), "w", "v"))
    assert not graph_a.is_path(Path(("x",), "v", "w"))
    with pytest.raises(ValueError):
        TopGraph(["v", "v"], {})
    with pytest.raises(ValueError):
        TopGraph(["v"], {"e": ("v", "u")})


def test_acyclicity(graphs, graph_a):
    assert graph_a.is_acyclic
    assert graphs["chain"].is_acyclic
    assert not graphs["loop"].is_acyclic
    assert not TopGraph(["a", "b"], {"x": ("a", "b"), "y": ("b", "a")}).is_acyclic


def test_small_graph_corpus_size():
    # isomorphism classes of multigraphs with loops, <= 3 vertices and <= 4 edges
    assert len(small_graphs(1, 2)) == 3
    assert len(small_graphs(3, 4)) == 177


def _brute_paths(g, n):
    out = set()
    for word in itertools.product(g.edges, repeat=n):
        if all(g.s[word[i]] == g.r[word[i + 1]] for i in range(n - 1)):
            out.add(word)
    return out


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_enumerate_paths_matches_brute_force(seed, n):
    import random

    g = random_graph(random.Random(seed), 4, 5)
    got = {p.edges for p in enumerate_paths(g, n)}
    assert got == _brute_paths(g, n)
    for p in enumerate_paths(g, n):
        assert g.is_path(p)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_classification_partitions_vertices(seed):
    import random

    g = random_graph(random.Random(seed), 4, 5)
    c = g.classification
    assert c.rg | c.sg == set(g.vertices)
    assert not c.rg & c.sg
    assert c.rg == {g.r[e] for e in g.edges}
