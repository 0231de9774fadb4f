"""Multiplying in a twist built from a cover cocycle.

Two points t0 -> t1 with t0 covered by two charts whose transition is a
third of a turn.  Composing an arrow with its inverse lands on the unit with
trivial phase, and moving to another chart only shifts phases by the
transition function.
"""

from __future__ import annotations

from fractions import Fraction

from twistgraph.groupoid import PartialSystem, element, system_elements
from twistgraph.scalars import Phase
from twistgraph.twist import CoverCocycle, build_twist, verify_twist_axioms

sys_ = PartialSystem(["t0", "t1"], {"t0": "t1"})
c = CoverCocycle.build(sys_.dom, {1: ["t0"], 2: ["t0"]}, {(1, 2, "t0"): Phase(Fraction(1, 3))})
ctx = build_twist(sys_, c)

g = element(sys_, "t0", 1, "t1")
lam = ctx.lift(g, Fraction(1, 4))
print("lift:", lam)
print("lift * inverse:", ctx.mul(lam, ctx.inv(lam)))
# the same arrow presented in chart 2 differs only by the transition phase
other = ctx.chart_change(lam, lam.k1, lam.k2, (2,), ())
print("in chart 2:", other, "equal:", ctx.equal(lam, other))
print("arrows:", [str(a) for a in system_elements(sys_)])
print("axioms:", "pass" if verify_twist_axioms(ctx).passed else "fail")
