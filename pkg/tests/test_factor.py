from __future__ import annotations

import random

import pytest

from twistgraph.corpus import cocycle_family, factor_triples, random_factor_map, random_graph
from twistgraph.errors import CyclicGraph, NonComposable, NotRegular
from twistgraph.factor import (
    FactorMap,
    boundary_factor_map,
    check_boundary_factor_map,
    check_factor_triple,
    check_functoriality,
    check_induced_hom,
    compose_factor_maps,
    identity_factor_map,
    induced_hom,
    is_regular,
    validate_factor_map,
)
from twistgraph.graph import TopGraph
from twistgraph.twist import constant_cocycle, trivial_cocycle


def test_identity_map(graph_a):
    fm = identity_factor_map(graph_a)
    assert validate_factor_map(fm).passed
    assert is_regular(fm).regular
    c = constant_cocycle(graph_a.edges, "1/3")
    h = induced_hom(fm, c)
    for b in (h.domain.pi({"v": 1}), h.domain.term(graph_a.path("e"), graph_a.vertex_path("w"), 2)):
        assert h(b).terms == b.terms


def test_boundary_factor_maps(graph_a, graphs):
    fm = boundary_factor_map(graph_a)
    assert {str(k): v for k, v in fm.m0.items()} == {"w": "w", "e": "v"}
    assert {str(k): v for k, v in fm.m1.items()} == {"e": "e"}
    for name in ("graph_A", "isolated", "chain"):
        assert check_boundary_factor_map(graphs[name]).passed
    with pytest.raises(CyclicGraph):
        boundary_factor_map(graphs["loop"])


def test_dropping_an_edge_breaks_lifting(graph_a):
    F = TopGraph(["v", "w1", "w2"], {"e1": ("v", "w1")})
    fm = FactorMap(F, graph_a, {"v": "v", "w1": "w", "w2": "w"}, {"e1": "e"})
    rep = validate_factor_map(fm)
    assert not rep["unique_lifting"].passed


def test_non_regular_map():
    E = TopGraph(["a", "b"], {"f": ("a", "b")})
    F = TopGraph(["x", "y"], {"g": ("y", "y")})
    fm = FactorMap(TopGraph(["x"], {}), E, {"x": "a"}, {})
    reg = is_regular(fm)
    assert validate_factor_map(fm).passed
    assert not reg.regular and reg.agree
    with pytest.raises(NotRegular):
        induced_hom(fm, trivial_cocycle(E.edges))
    del F


def test_composition(graph_a):
    rng = random.Random(4)
    m = random_factor_map(graph_a, rng)
    n = random_factor_map(m.source, rng)
    mn = compose_factor_maps(m, n)
    assert validate_factor_map(mn).passed and is_regular(mn).regular
    assert compose_factor_maps(identity_factor_map(graph_a), m).m0 == m.m0
    with pytest.raises(NonComposable):
        compose_factor_maps(n, m)


def test_composition_is_associative():
    for t in factor_triples(1, 5):
        k = random_factor_map(t.n.source, random.Random(0))
        if k is None:
            continue
        left = compose_factor_maps(compose_factor_maps(t.m, t.n), k)
        right = compose_factor_maps(t.m, compose_factor_maps(t.n, k))
        assert dict(left.m0) == dict(right.m0) and dict(left.m1) == dict(right.m1)


def test_induced_hom_and_injectivity(graph_a):
    c = constant_cocycle(graph_a.edges, "1/3")
    rep = check_induced_hom(boundary_factor_map(graph_a), c)
    assert rep.passed and rep["injective_iff_m0_onto"].detail["injective"]
    # the inclusion of graph A into graph A plus an isolated vertex: m0 misses u
    E = TopGraph(["u", "v", "w"], {"e": ("v", "w")})
    inc = FactorMap(graph_a, E, {"v": "v", "w": "w"}, {"e": "e"})
    assert validate_factor_map(inc).passed and is_regular(inc).regular
    rep = check_induced_hom(inc, trivial_cocycle(E.edges))
    assert rep.passed
    assert rep["injective_iff_m0_onto"].detail == {"injective": False, "m0_onto": False}


def test_invalid_map_is_not_a_homomorphism(graph_a):
    # no lift of e at w: unique lifting fails and psi(e) would be sent to 0
    sub = FactorMap(TopGraph(["w"], {}), graph_a, {"w": "w"}, {})
    assert not validate_factor_map(sub)["unique_lifting"].passed
    assert not check_induced_hom(sub, trivial_cocycle(graph_a.edges))["star_homomorphism"].passed


def test_functoriality_samples():
    for t in factor_triples(7, 5):
        c = cocycle_family(t.m.target.edges, 0)[1][1]
        assert check_functoriality(t.m, t.n, c).passed
        assert check_factor_triple(t.m, t.n, c).passed


@pytest.mark.parametrize("seed", range(8))
def test_regularity_conditions_agree(seed):
    rng = random.Random(seed)
    E = random_graph(rng, 3, 3, acyclic=True)
    fm = random_factor_map(E, rng)
    if fm is not None:
        assert is_regular(fm).agree
