from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistgraph.corpus import cocycle_family, named_graphs, small_graphs
from twistgraph.correspondence import (
    CorrespondenceElement,
    check_three_pictures,
    delta,
    from_charts,
    from_line_bundle_picture,
    functions_equal,
    in_covariance_ideal,
    inner_product,
    left_action,
    norm_squared,
    pairing,
    phi,
    phi_decomposition,
    rank_one,
    right_action,
    spanning_deltas,
    to_line_bundle_picture,
    zero,
)
from twistgraph.errors import ChartMismatch, UnsupportedSupport
from twistgraph.scalars import Cyclotomic, conj, scalars_equal
from twistgraph.twist import constant_cocycle, trivial_cocycle

W = Cyclotomic.root_of_unity(Fraction(1, 3))


def test_inner_product_examples(graph_a, graphs):
    c = trivial_cocycle(graph_a.edges)
    x = delta(graph_a, c, "e")
    assert functions_equal(inner_product(x, x), {"w": 1})
    assert functions_equal(inner_product(zero(graph_a, c), x), {})
    loop = graphs["loop"]
    lc = trivial_cocycle(loop.edges)
    y = delta(loop, lc, "f", value=3 + 4j)
    assert scalars_equal(inner_product(y, y)["v"], 25)


def test_delta_in_other_chart_carries_transition(graph_a):
    c = constant_cocycle(graph_a.edges, "1/3")
    x1 = delta(graph_a, c, "e", 1)
    x2 = delta(graph_a, c, "e", 2)
    # x_2(e) = 1 means x_1(e) = s_12(e) x_2(e) = omega, the stored least-chart value
    assert scalars_equal(x2.at("e"), W)
    assert scalars_equal(pairing(x1, x2)["e"], W)
    assert scalars_equal(x2.chart_value(2, "e"), 1)
    with pytest.raises(ChartMismatch):
        from_charts(graph_a, c, {1: {"e": 1}, 2: {"e": 1}})
    assert from_charts(graph_a, c, {1: {"e": 1}, 2: {"e": W.conjugate()}}).equals(x1)


def test_actions(graph_a):
    c = constant_cocycle(graph_a.edges, "1/3")
    x = delta(graph_a, c, "e", 2)
    assert left_action({"v": 1, "w": 1}, x).equals(x)
    assert not left_action({"w": 1}, x).values
    y = delta(graph_a, c, "e", 1, value=2)
    f = {"w": 3}
    assert functions_equal(inner_product(x, right_action(y, f)),
                           {v: inner_product(x, y)[v] * f.get(v, 0) for v in graph_a.vertices})
    assert rank_one(x, zero(graph_a, c))(y).equals(zero(graph_a, c))


def test_phi_decomposition_examples(graph_a, graphs):
    c = trivial_cocycle(graph_a.edges)
    (x,) = phi_decomposition(graph_a, c, {"v": 1})
    assert x.values == {"e": 1}
    for z in spanning_deltas(graph_a, c):
        assert rank_one(x, x)(z).equals(phi({"v": 1})(z))
    assert phi_decomposition(graph_a, c, {}) == []
    with pytest.raises(UnsupportedSupport):
        phi_decomposition(graph_a, c, {"w": 1})
    loop = graphs["loop"]
    (y,) = phi_decomposition(loop, trivial_cocycle(loop.edges), {"v": 2})
    assert scalars_equal(y.at("f") * conj(y.at("f")), 2)
    assert in_covariance_ideal(graph_a, c, "v")
    assert not in_covariance_ideal(graph_a, c, "w")


def test_three_picture_roundtrips(graph_a):
    c = constant_cocycle(graph_a.edges, "1/3")
    assert from_line_bundle_picture(graph_a, to_line_bundle_picture(zero(graph_a, c))).equals(zero(graph_a, c))
    assert check_three_pictures(graph_a, c).passed


@pytest.mark.parametrize("name", sorted(named_graphs()))
def test_three_pictures_named(name):
    g = named_graphs()[name]
    for _, c in cocycle_family(g.edges, 2):
        assert check_three_pictures(g, c).passed


vals = st.sampled_from([0, 1, 2, -1, 1j, 0.5 + 0.25j])


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 176), st.lists(vals, min_size=4, max_size=4), st.lists(vals, min_size=4, max_size=4))
def test_inner_product_properties(idx, xv, yv):
    g = small_graphs(3, 4)[idx]
    c = cocycle_family(g.edges, idx)[-1][1]
    x = CorrespondenceElement(g, c, dict(zip(g.edges, xv)))
    y = CorrespondenceElement(g, c, dict(zip(g.edges, yv)))
    xy, yx, xx = inner_product(x, y), inner_product(y, x), inner_product(x, x)
    assert functions_equal(xy, {v: conj(val) for v, val in yx.items()})
    assert all(complex(val).real >= -1e-12 and abs(complex(val).imag) < 1e-12 for val in xx.values())
    assert norm_squared(x) >= 0
