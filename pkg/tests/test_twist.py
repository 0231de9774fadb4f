from __future__ import annotations

import random
from dataclasses import replace
from fractions import Fraction

import pytest

from twistgraph.corpus import cocycle_family, random_cover_cocycle, sgds_instances
from twistgraph.errors import ChartMismatch, InvalidCocycle, NonComposable
from twistgraph.groupoid import PartialSystem, element, system_elements
from twistgraph.scalars import Phase
from twistgraph.twist import (
    CoverCocycle,
    GluedBundle,
    TwistContext,
    TwistElement,
    alternate_presentation,
    apply_coboundary,
    associativity_elements,
    build_twist,
    check_associativity,
    check_chart_changes,
    check_pullback,
    constant_cocycle,
    glue_bundle,
    phase_ratio,
    pullback,
    trivial_cocycle,
    validate_cocycle,
    verify_twist_axioms,
)

W = Phase(Fraction(1, 3))


def test_cocycle_validation_examples():
    assert validate_cocycle(trivial_cocycle(["e"])).passed
    assert validate_cocycle(constant_cocycle(["e", "f"], "1/3")).passed
    bad = CoverCocycle.build(["e"], {1: ["e"], 2: ["e"]}, {(1, 2, "e"): "1/3", (2, 1, "e"): "1/3"})
    rep = validate_cocycle(bad)
    assert not rep["symmetry"].passed and not rep["triple"].passed
    # omega^2 = 1 makes the same data valid
    ok = CoverCocycle.build(["e"], {1: ["e"], 2: ["e"]}, {(1, 2, "e"): "1/2", (2, 1, "e"): "1/2"})
    assert validate_cocycle(ok).passed
    with pytest.raises(InvalidCocycle):
        glue_bundle(bad)


def test_phase_ratio_and_bundle():
    c = constant_cocycle(["e"], "1/3")
    assert phase_ratio(c, ("e", Phase(Fraction(1, 2)), 1), ("e", Phase(Fraction(1, 4)), 1)) == Phase(Fraction(1, 4))
    assert phase_ratio(c, ("e", 0, 1), ("e", 0, 2)) == W
    with pytest.raises(ChartMismatch):
        phase_ratio(c, ("e", 0, 1), ("f", 0, 1))
    b = GluedBundle(c)
    assert b.canonical(("e", 0, 2)) == ("e", W.conjugate(), 1)
    assert b.equivalent(("e", 0, 1), ("e", W, 2))


def test_coboundary_trivialises():
    c = constant_cocycle(["e", "f"], "1/3")
    flat = apply_coboundary(c, {(2, "e"): W, (2, "f"): W})
    assert all(v.is_one() for v in flat.transitions.values())
    u = {(1, "e"): Phase(Fraction(1, 5)), (2, "f"): Phase(Fraction(2, 7))}
    back = apply_coboundary(apply_coboundary(c, u), {k: v.conjugate() for k, v in u.items()})
    assert back.transitions == c.transitions
    assert apply_coboundary(c, {}).transitions == c.transitions


def test_coboundary_trivialisation_is_well_defined():
    rng = random.Random(3)
    for _ in range(10):
        keys = ["a", "b", "c"]
        ones = {(1, 2, k): 0 for k in keys[:2]}
        base = CoverCocycle.build(keys, {1: keys, 2: keys[:2]}, ones)
        u = {(a, k): Phase(Fraction(rng.randrange(6), 6)) for a in (1, 2) for k in keys}
        c = apply_coboundary(base, u)
        triv = GluedBundle(c).trivialisation(u)
        for p in GluedBundle(c).points([0, Fraction(1, 3)]):
            e, z, a = p
            for b in c.charts_containing(e):
                assert triv(p) == triv((e, z * c.s(a, b, e), b))


def test_pullback_examples(graph_a):
    c = constant_cocycle(["e"], "1/3")
    assert pullback(c, {"e": "e"}).transitions == c.transitions
    assert pullback(trivial_cocycle(["e"]), {"x": "e", "y": "e"}).charts[1] == {"x", "y"}
    q = pullback(c, {"p": "e"})
    assert q.charts == {1: frozenset({"p"}), 2: frozenset({"p"})}
    assert q.s(1, 2, "p") == W


def test_trivial_products(two_point):
    ctx = build_twist(two_point, trivial_cocycle(two_point.dom))
    for a in system_elements(two_point, 2):
        for b in system_elements(two_point, 2):
            if a.y == b.x:
                prod = ctx.mul(ctx.lift(a, Fraction(1, 5)), ctx.lift(b, Fraction(1, 7)))
                assert prod.phase == Phase(Fraction(1, 5) + Fraction(1, 7))


def test_mismatched_middle_chart_phase(two_point):
    ctx = build_twist(two_point, constant_cocycle(two_point.dom, "1/3"))
    first = TwistElement("b", "a", 0, 1, Phase.one(), (), (2,))
    second = TwistElement("a", "b", 1, 0, Phase.one(), (1,), ())
    assert ctx.mul(first, second).phase == W
    matched = TwistElement("a", "b", 1, 0, Phase.one(), (2,), ())
    assert ctx.mul(first, matched).phase.is_one()
    with pytest.raises(NonComposable):
        ctx.mul(first, first)


def test_inverse_examples(two_point):
    ctx = build_twist(two_point, constant_cocycle(two_point.dom, "1/3"))
    for g in system_elements(two_point, 2):
        for lam in ctx.presentations(g, Fraction(1, 4)):
            assert ctx.equal(ctx.mul(lam, ctx.inv(lam)), ctx.unit(lam.x))
            assert ctx.inv(ctx.inv(lam)) == lam
    u = ctx.unit("a", Fraction(1, 3))
    assert ctx.inv(u).phase == Phase(Fraction(2, 3))


def test_chart_change_examples(two_point):
    ctx = build_twist(two_point, constant_cocycle(two_point.dom, "1/3"))
    g = element(two_point, "a", 1, "b")
    lam = ctx.lift(g, Fraction(1, 5))
    assert ctx.chart_change(lam, lam.k1, lam.k2, lam.charts_out, lam.charts_in) == lam
    other = ctx.chart_change(lam, lam.k1 + 1, lam.k2 + 1, (2, 2), (1,))
    assert ctx.chart_change(other, lam.k1, lam.k2, lam.charts_out, lam.charts_in) == lam
    assert ctx.reduce(ctx.enlarge(lam, 1), 1) == lam
    with pytest.raises(ChartMismatch):
        ctx.chart_change(lam, 3, 3, (1,), (1,))


def test_auxiliary_chart_independence(two_point):
    ctx = build_twist(two_point, constant_cocycle(two_point.dom, "1/3"))
    lam = ctx.lift(element(two_point, "a", 1, "b"))
    forms = {ctx.canonicalize(ctx.enlarge(lam, 1, (a,), (b,))) for a in (1, 2) for b in (1, 2)}
    assert forms == {lam}


def test_axioms_examples(two_point):
    assert verify_twist_axioms(build_twist(two_point, trivial_cocycle(two_point.dom))).passed
    ctx = build_twist(two_point, constant_cocycle(two_point.dom, "1/3"))
    assert verify_twist_axioms(ctx).passed
    assert check_pullback(ctx).passed


def test_corrupted_transition_is_detected(two_point):
    c = constant_cocycle(two_point.dom, "1/3")
    bad = c.with_value(1, 2, "a", "1/5")
    with pytest.raises(InvalidCocycle):
        build_twist(two_point, bad)
    rep = verify_twist_axioms(TwistContext(two_point, bad))
    assert not rep.passed
    assert rep.failures()[0].check.startswith("cocycle.")


def test_float_mode_axioms(two_point):
    c = CoverCocycle.build(two_point.dom, {1: two_point.dom, 2: two_point.dom},
                           {(1, 2, t): complex(0.6, 0.8) for t in two_point.dom})
    assert not c.exact
    assert verify_twist_axioms(build_twist(two_point, c)).passed


@pytest.mark.parametrize("sys_", sgds_instances(2), ids=repr)
def test_chart_changes_and_associativity(sys_):
    arrows = system_elements(sys_, 2)
    for name, c in cocycle_family(sys_.dom, 1):
        ctx = build_twist(sys_, c)
        assert check_chart_changes(ctx, arrows, max_witness=2).passed, name
        assert check_associativity(ctx, associativity_elements(ctx, arrows, 2)) is None, name


def test_associativity_detects_a_broken_product(two_point):
    ctx = build_twist(two_point, constant_cocycle(two_point.dom, "1/3"))
    arrows = system_elements(two_point, 2)
    elements = associativity_elements(ctx, arrows, 2)
    real = ctx._mul

    def skewed(l1, l2):
        out = real(l1, l2)
        return replace(out, phase=out.phase * Phase(Fraction(1, 9))) if l1.x == "a" else out

    ctx._products.clear()
    ctx._mul = skewed
    assert check_associativity(ctx, elements) is not None


def test_alternate_presentation_is_the_same_point(two_point):
    ctx = build_twist(two_point, random_cover_cocycle(two_point.dom, random.Random(5)))
    for g in system_elements(two_point, 2):
        lam = ctx.lift(g, Fraction(2, 9))
        alt = alternate_presentation(ctx, lam)
        assert ctx.equal(alt, lam)
