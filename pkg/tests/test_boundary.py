from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistgraph.boundary import (
    BasicOpen,
    BoundaryPath,
    ConstantTail,
    PresentedSequence,
    UnrollingTail,
    boundary_path_set,
    in_basic_open,
    is_boundary,
    is_yeend_boundary,
    periodic,
    prepend,
    seq_converges,
    shift,
    some_boundary_path_from,
)
from twistgraph.corpus import random_graph
from twistgraph.errors import BoundExceeded, NotInDomain, UnsupportedPresentation
from twistgraph.graph import TopGraph, enumerate_paths


def test_is_boundary_examples(graph_a, graphs):
    assert is_boundary(graph_a, graph_a.path("e"))
    assert not is_boundary(graph_a, graph_a.vertex_path("v"))
    assert not is_boundary(graphs["loop"], graphs["loop"].vertex_path("v"))


@pytest.mark.parametrize("method", ["pruned", "maximal", "subsets"])
def test_yeend_examples(graph_a, method):
    assert is_yeend_boundary(graph_a, graph_a.path("e"), 4, method)
    assert not is_yeend_boundary(graph_a, graph_a.vertex_path("v"), 4, method)
    assert is_yeend_boundary(graph_a, graph_a.vertex_path("w"), 4, method)


def test_yeend_bounds(graph_a):
    with pytest.raises(BoundExceeded):
        is_yeend_boundary(graph_a, graph_a.path("e"), len_bound=1, method="pruned")
    big = TopGraph(["v"], {f"e{i}": ("v", "v") for i in range(3)})
    with pytest.raises(BoundExceeded):
        is_yeend_boundary(big, big.vertex_path("v"), len_bound=3, method="subsets", subset_cap=5)
    with pytest.raises(ValueError):
        is_yeend_boundary(graph_a, graph_a.vertex_path("v"), method="bogus")


def test_boundary_sets(graph_a, graphs):
    bset = boundary_path_set(graph_a)
    assert bset.complete
    assert sorted(str(x) for x in bset) == ["e", "w"]
    loop = boundary_path_set(graphs["loop"], 3)
    assert not loop.complete
    assert [str(x) for x in loop] == [str(periodic(graphs["loop"], (), ("f",)))]
    assert len(boundary_path_set(TopGraph([], {}))) == 0
    with pytest.raises(ValueError):
        boundary_path_set(graphs["loop"])


def test_periodic_canonical_form(graphs):
    loop = graphs["loop"]
    x = periodic(loop, ("f", "f"), ("f", "f", "f"))
    assert x == periodic(loop, (), ("f",))
    assert x.head.edges == () and x.cycle.edges == ("f",)
    with pytest.raises(ValueError):
        periodic(loop, (), ())


def test_shift(graph_a, graphs):
    e = BoundaryPath(graph_a.path("e"))
    assert shift(graph_a, e) == BoundaryPath(graph_a.vertex_path("w"))
    finf = periodic(graphs["loop"], (), ("f",))
    assert shift(graphs["loop"], finf) == finf
    with pytest.raises(NotInDomain):
        shift(graph_a, BoundaryPath(graph_a.vertex_path("w")))


def test_basic_opens(graph_a, graphs):
    e = BoundaryPath(graph_a.path("e"))
    w = BoundaryPath(graph_a.vertex_path("w"))
    assert in_basic_open(e, BasicOpen(frozenset({graph_a.path("e")})))
    loop = graphs["loop"]
    finf = periodic(loop, (), ("f",))
    assert not in_basic_open(finf, BasicOpen(frozenset({loop.path("f", "f")}), frozenset({loop.path("f", "f", "f")})))
    assert in_basic_open(w, BasicOpen(frozenset({graph_a.vertex_path("w")}), frozenset({graph_a.path("e")})))


def test_convergence_examples(graph_a, graphs):
    e = BoundaryPath(graph_a.path("e"))
    w = BoundaryPath(graph_a.vertex_path("w"))
    assert seq_converges(graph_a, PresentedSequence(ConstantTail(e)), e)
    loop = graphs["loop"]
    finf = periodic(loop, (), ("f",))
    unroll = PresentedSequence(UnrollingTail(loop.vertex_path("v"), loop.path("f")))
    assert seq_converges(loop, unroll, finf)
    # terms all equal e, limit w: the ranges differ as well, so no convergence
    assert not seq_converges(graph_a, PresentedSequence(ConstantTail(e)), w)
    # exceptional terms never matter
    assert seq_converges(graph_a, PresentedSequence(ConstantTail(e), (w, w)), e)
    with pytest.raises(UnsupportedPresentation):
        seq_converges(loop, PresentedSequence(UnrollingTail(loop.vertex_path("v"), loop.vertex_path("v"))), finf)


def test_prepend_and_some_path(graphs):
    chain = graphs["chain"]
    z = some_boundary_path_from(chain, "u")
    assert z.range == "u" and z.is_finite and is_boundary(chain, z.head)
    loop = graphs["loop"]
    finf = some_boundary_path_from(loop, "v")
    assert not finf.is_finite
    assert prepend(loop, loop.path("f"), finf) == finf


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_definitions_agree_on_random_graphs(seed):
    g = random_graph(random.Random(seed), 3, 4)
    for n in range(3):
        for p in enumerate_paths(g, n):
            assert is_boundary(g, p) == is_yeend_boundary(g, p, method="maximal")
            assert is_boundary(g, p) == is_yeend_boundary(g, p, method="pruned")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_shift_domain_identity(seed):
    g = random_graph(random.Random(seed), 4, 5, acyclic=True)
    bset = boundary_path_set(g)
    positive = {x for x in bset if x.length >= 1}
    vertices = {x for x in bset if x.length == 0}
    assert {x.range for x in vertices} == set(g.classification.sg)
    assert positive == set(bset) - vertices
    for x in positive:
        assert shift(g, x) in bset
