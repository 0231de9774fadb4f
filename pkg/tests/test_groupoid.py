from __future__ import annotations

from collections import Counter

import pytest

from twistgraph.boundary import BoundaryPath, boundary_path_set, periodic
from twistgraph.corpus import sgds_instances, small_graphs
from twistgraph.errors import CyclicGraph, NonComposable, NotInGroupoid
from twistgraph.graph import TopGraph
from twistgraph.groupoid import (
    Bisection,
    BoundaryShift,
    PartialSystem,
    boundary_groupoid_elements,
    canonical_pair,
    check_groupoid_axioms,
    compose,
    element,
    hat_graph,
    inverse,
    iterate,
    shift_system,
    system_elements,
    unit,
)


def test_composition_and_inverse(two_point):
    s = two_point
    a = element(s, "a", 1, "b")
    b = element(s, "b", 2, "b")
    assert (compose(s, a, b).x, compose(s, a, b).n) == ("a", 3)
    assert compose(s, a, inverse(a)) == unit("a")
    assert inverse(inverse(a)) == a
    assert inverse(unit("a")) == unit("a")
    with pytest.raises(NonComposable):
        compose(s, a, a)


def test_canonical_pairs(graph_a, graphs):
    s = BoundaryShift(graph_a)
    e = BoundaryPath(graph_a.path("e"))
    w = BoundaryPath(graph_a.vertex_path("w"))
    assert canonical_pair(s, e, 1, w) == (1, 0)
    assert canonical_pair(s, e, 0, e) == (0, 0)
    loop = graphs["loop"]
    ls = BoundaryShift(loop, 3)
    finf = periodic(loop, (), ("f",))
    g = compose(ls, element(ls, finf, 1, finf), element(ls, finf, 1, finf))
    assert (g.n, g.k1, g.k2) == (2, 2, 0)
    assert canonical_pair(ls, finf, 0, finf) == (0, 0)
    with pytest.raises(NotInGroupoid):
        canonical_pair(s, e, 0, w)


def test_graph_a_groupoid(graph_a):
    gs = boundary_groupoid_elements(graph_a)
    assert gs.complete
    assert sorted(str(g) for g in gs) == sorted(["(w, 0, w)", "(e, 0, e)", "(e, 1, w)", "(w, -1, e)"])
    assert len(boundary_groupoid_elements(TopGraph(["v"], {}))) == 1


def test_loop_groupoid_is_capped(graphs):
    gs = boundary_groupoid_elements(graphs["loop"], 2)
    assert not gs.complete
    assert sorted(g.n for g in gs) == [-2, -1, 0, 1, 2]


def test_hat_graph(graph_a, graphs):
    hat = hat_graph(graph_a)
    assert len(hat.vertices) == 2 and len(hat.edges) == 1
    (x,) = hat.edges
    assert str(hat.r[x]) == "e" and str(hat.s[x]) == "w"
    iso = hat_graph(graphs["isolated"])
    assert len(iso.vertices) == 1 and not iso.edges
    chain = hat_graph(graphs["chain"])
    assert sorted(str(v) for v in chain.vertices) == ["e1.e2", "e2", "w"]
    assert len(chain.edges) == 2
    with pytest.raises(CyclicGraph):
        hat_graph(graphs["loop"])
    with pytest.raises(CyclicGraph):
        shift_system(graphs["loop"])


def test_bisections(graph_a):
    b = Bisection(graph_a.path("e"), graph_a.vertex_path("w"))
    assert b.degree == 1
    (arrow,) = b.arrows(BoundaryShift(graph_a))
    assert str(arrow) == "(e, 1, w)"
    with pytest.raises(ValueError):
        Bisection(graph_a.path("e"), graph_a.vertex_path("v"))


def _orbit_oracle(sys_):
    """Classes of ``x ~ y`` iff some iterates meet, by brute force."""
    pts = sys_.points
    reach = {x: {iterate(sys_, x, k) for k in range(len(pts) + 1)} - {None} for x in pts}
    classes = []
    for x in pts:
        for cls in classes:
            if reach[x] & reach[cls[0]]:
                cls.append(x)
                break
        else:
            classes.append([x])
    return classes


@pytest.mark.parametrize("g", [g for g in small_graphs(3, 3) if g.is_acyclic])
def test_acyclic_groupoid_counts(g):
    # acyclic graphs have no isotropy, so |Gamma| = sum of squared orbit sizes
    sys_ = shift_system(g)
    gs = boundary_groupoid_elements(g)
    assert len(gs) == sum(len(c) ** 2 for c in _orbit_oracle(sys_))
    assert check_groupoid_axioms(sys_, gs).passed


@pytest.mark.parametrize("sys_", sgds_instances(3), ids=repr)
def test_system_groupoid_axioms(sys_):
    rep = check_groupoid_axioms(sys_, system_elements(sys_, 3))
    assert rep.passed, rep.failures()


def test_partial_system_validation():
    with pytest.raises(ValueError):
        PartialSystem(["a"], {"a": "b"})
    s = PartialSystem(["a", "b"], {"a": "b"})
    assert s.as_graph().edges == ("a",)
    assert Counter(g.n for g in system_elements(s)) == Counter({0: 2, 1: 1, -1: 1})
