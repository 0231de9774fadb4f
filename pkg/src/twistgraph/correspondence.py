"""The twisted graph correspondence in its three pictures.

An element of the cover-cocycle picture is a family ``x_alpha`` on the charts
with ``x_alpha = s_ab x_beta`` on overlaps.  Compatibility makes the family
determined by its value in the least chart at each edge, which is what
:class:`CorrespondenceElement` stores.  The line bundle picture stores a
chart-tagged value per edge, the circle bundle picture an equivariant
function on chart points ``(e, z, alpha)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .errors import ChartMismatch, ContextMismatch, UnsupportedSupport
from .graph import TopGraph, sorted_ids
from .reports import Report
from .scalars import Phase, Scalar, conj, is_zero, scalars_equal, sqrt_nonneg, to_exact
from .twist import CoverCocycle, GluedBundle

BaseFunction = Mapping  # vertex -> scalar, zero when absent


def _s(c: CoverCocycle, a, b, e) -> Scalar:
    return c.s(a, b, e).scalar()


@dataclass(frozen=True)
class CorrespondenceElement:
    graph: TopGraph
    cocycle: CoverCocycle
    values: Mapping = field(default_factory=dict)  # edge -> value in the least chart

    def __post_init__(self) -> None:
        clean = {e: v for e, v in self.values.items() if not is_zero(v)}
        for e in clean:
            if e not in self.graph.r:
                raise ValueError(f"unknown edge {e!r}")
        object.__setattr__(self, "values", clean)

    def at(self, e) -> Scalar:
        return self.values.get(e, 0)

    def chart_value(self, a, e) -> Scalar:
        """``x_alpha(e)``."""
        k = self.cocycle.least_chart(e)
        if e not in self.cocycle.charts.get(a, ()):
            raise ChartMismatch(f"{e!r} is not in chart {a!r}")
        return _s(self.cocycle, a, k, e) * self.at(e)

    def chart_functions(self) -> dict:
        return {a: {e: self.chart_value(a, e) for e in sorted_ids(members)} for a, members in self.cocycle.charts.items()}

    def __add__(self, other: CorrespondenceElement) -> CorrespondenceElement:
        _same(self, other)
        keys = set(self.values) | set(other.values)
        return CorrespondenceElement(self.graph, self.cocycle, {e: self.at(e) + other.at(e) for e in keys})

    def scale(self, c: Scalar) -> CorrespondenceElement:
        return CorrespondenceElement(self.graph, self.cocycle, {e: c * v for e, v in self.values.items()})

    def equals(self, other: CorrespondenceElement) -> bool:
        _same(self, other)
        keys = set(self.values) | set(other.values)
        return all(scalars_equal(self.at(e), other.at(e)) for e in keys)


def _same(x: CorrespondenceElement, y: CorrespondenceElement) -> None:
    if x.graph is not y.graph and x.graph != y.graph or x.cocycle != y.cocycle:
        raise ContextMismatch("elements belong to different correspondences")


def zero(graph: TopGraph, c: CoverCocycle) -> CorrespondenceElement:
    return CorrespondenceElement(graph, c, {})


def from_charts(graph: TopGraph, c: CoverCocycle, family: Mapping) -> CorrespondenceElement:
    """Build from ``{alpha: {e: x_alpha(e)}}``; raises when not compatible."""
    values = {}
    for e in graph.edges:
        k = c.least_chart(e)
        base = family.get(k, {}).get(e, 0)
        for a in c.charts_containing(e):
            got = family.get(a, {}).get(e, 0)
            if not scalars_equal(got, _s(c, a, k, e) * base):
                raise ChartMismatch(f"x_{a} and x_{k} are not compatible at {e!r}")
        values[e] = base
    return CorrespondenceElement(graph, c, values)


def delta(graph: TopGraph, c: CoverCocycle, e, chart=None, value: Scalar = 1) -> CorrespondenceElement:
    """The element supported at ``e`` with ``x_chart(e) = value`` (least chart by default)."""
    k = c.least_chart(e)
    a = k if chart is None else chart
    if e not in c.charts.get(a, ()):
        raise ChartMismatch(f"{e!r} is not in chart {a!r}")
    return CorrespondenceElement(graph, c, {e: _s(c, k, a, e) * to_exact(value)})


def spanning_deltas(graph: TopGraph, c: CoverCocycle) -> list:
    """A delta for every (edge, chart containing it)."""
    return [delta(graph, c, e, a) for e in graph.edges for a in c.charts_containing(e)]


def pairing(x: CorrespondenceElement, y: CorrespondenceElement) -> dict:
    """``[x|y](e) = conj(x_alpha(e)) y_alpha(e)``."""
    _same(x, y)
    return {e: conj(x.at(e)) * y.at(e) for e in x.graph.edges}


def pairing_in_chart(x: CorrespondenceElement, y: CorrespondenceElement, a, e) -> Scalar:
    return conj(x.chart_value(a, e)) * y.chart_value(a, e)


def inner_product(x: CorrespondenceElement, y: CorrespondenceElement) -> dict:
    """``<x, y>(v) = sum over s(e) = v of [x|y](e)``."""
    pr = pairing(x, y)
    out = {v: 0 for v in x.graph.vertices}
    for e, val in pr.items():
        v = x.graph.s[e]
        out[v] = out[v] + val
    return out


def right_action(x: CorrespondenceElement, f: BaseFunction) -> CorrespondenceElement:
    g = x.graph
    return CorrespondenceElement(g, x.cocycle, {e: v * f.get(g.s[e], 0) for e, v in x.values.items()})


def left_action(f: BaseFunction, x: CorrespondenceElement) -> CorrespondenceElement:
    g = x.graph
    return CorrespondenceElement(g, x.cocycle, {e: f.get(g.r[e], 0) * v for e, v in x.values.items()})


def norm_squared(x: CorrespondenceElement) -> Scalar:
    """``max_v <x, x>(v)`` as a real number."""
    ip = inner_product(x, x)
    return max((complex(v).real for v in ip.values()), default=0.0)


def rank_one(x: CorrespondenceElement, y: CorrespondenceElement) -> Callable:
    """``Theta_{x,y}(z) = x . <y, z>``."""

    def theta(z: CorrespondenceElement) -> CorrespondenceElement:
        return right_action(x, inner_product(y, z))

    return theta


def phi(f: BaseFunction) -> Callable:
    """The left action of ``f`` as an operator."""
    return lambda z: left_action(f, z)


def functions_equal(f: Mapping, g: Mapping) -> bool:
    keys = set(f) | set(g)
    return all(scalars_equal(f.get(k, 0), g.get(k, 0)) for k in keys)


def phi_decomposition(graph: TopGraph, c: CoverCocycle, f: BaseFunction, verify: bool = True) -> list:
    """Elements ``x_i`` with ``phi(f) = sum Theta_{x_i, x_i}``.

    ``f`` must be non-negative and supported on regular vertices.  The cover
    of ``r^{-1}(supp f)`` uses singleton sections ``{e}`` with indicator
    partitions of unity, so ``x_e`` is supported at ``e`` with least-chart
    value ``sqrt(f(r(e)))``.
    """
    support = [v for v in graph.vertices if not is_zero(f.get(v, 0))]
    outside = [v for v in support if v not in graph.classification.rg]
    if outside:
        raise UnsupportedSupport(f"f is non-zero at singular vertices {outside}")
    xs = []
    for v in support:
        root = sqrt_nonneg(f[v])
        for e in graph.edges_into[v]:
            xs.append(CorrespondenceElement(graph, c, {e: root}))
    if verify:
        for z in spanning_deltas(graph, c):
            total = zero(graph, c)
            for x in xs:
                total = total + rank_one(x, x)(z)
            if not total.equals(left_action(f, z)):
                raise AssertionError("phi decomposition failed")
    return xs


def in_covariance_ideal(graph: TopGraph, c: CoverCocycle, v) -> bool:
    """Whether ``1_v`` is in ``phi^{-1}(K(X)) intersected with (ker phi)^perp``.

    Every operator is compact here, so the test is orthogonality to
    ``ker phi``; ``ker phi`` is spanned by indicators of vertices whose
    ``phi`` kills every delta.
    """
    kernel = []
    for w in graph.vertices:
        ind = {w: 1}
        if all(not left_action(ind, z).values for z in spanning_deltas(graph, c)):
            kernel.append(w)
    return v not in kernel


# -- the other two pictures -------------------------------------------------


@dataclass(frozen=True)
class LineBundleSection:
    """``e -> (e, value, chart)`` modulo ``(e, l, a) ~ (e, s_ba(e) l, b)``."""

    cocycle: CoverCocycle
    entries: Mapping  # edge -> (value, chart)

    def value_in(self, e, b) -> Scalar:
        val, a = self.entries.get(e, (0, self.cocycle.least_chart(e)))
        return _s(self.cocycle, b, a, e) * val


def to_line_bundle_picture(x: CorrespondenceElement, chart_choice: Callable | None = None) -> LineBundleSection:
    """``Phi(x)(e) = (e, x_alpha(e), alpha)`` for a chosen chart at every edge."""
    c = x.cocycle
    entries = {}
    for e in x.graph.edges:
        a = chart_choice(e) if chart_choice else c.least_chart(e)
        entries[e] = (x.chart_value(a, e), a)
    return LineBundleSection(c, entries)


def from_line_bundle_picture(graph: TopGraph, sec: LineBundleSection) -> CorrespondenceElement:
    c = sec.cocycle
    return CorrespondenceElement(graph, c, {e: sec.value_in(e, c.least_chart(e)) for e in graph.edges})


def line_inner_product(graph: TopGraph, a: LineBundleSection, b: LineBundleSection) -> dict:
    out = {v: 0 for v in graph.vertices}
    for e in graph.edges:
        k = a.cocycle.least_chart(e)
        out[graph.s[e]] = out[graph.s[e]] + conj(a.value_in(e, k)) * b.value_in(e, k)
    return out


def line_left_action(graph: TopGraph, f: BaseFunction, sec: LineBundleSection) -> LineBundleSection:
    return LineBundleSection(sec.cocycle, {e: (f.get(graph.r[e], 0) * v, a) for e, (v, a) in sec.entries.items()})


def line_right_action(graph: TopGraph, sec: LineBundleSection, f: BaseFunction) -> LineBundleSection:
    return LineBundleSection(sec.cocycle, {e: (v * f.get(graph.s[e], 0), a) for e, (v, a) in sec.entries.items()})


@dataclass(frozen=True)
class CircleBundleFunction:
    """An equivariant function ``xi(e, z, a)``, stored at the points ``(e, 1, least chart)``."""

    cocycle: CoverCocycle
    base: Mapping  # edge -> value at the canonical point

    def __call__(self, b: tuple) -> Scalar:
        e, z, a = b
        ce, cz, _ = GluedBundle(self.cocycle).canonical((e, z, a))
        return cz.scalar() * self.base.get(ce, 0)


def to_circle_bundle_picture(x: CorrespondenceElement) -> CircleBundleFunction:
    """``Phi(x)(e, z, alpha) = z x_alpha(e)``."""
    c = x.cocycle
    return CircleBundleFunction(c, {e: x.chart_value(c.least_chart(e), e) for e in x.graph.edges})


def from_circle_bundle_picture(graph: TopGraph, xi: CircleBundleFunction) -> CorrespondenceElement:
    c = xi.cocycle
    return CorrespondenceElement(graph, c, {e: xi((e, Phase.one(), c.least_chart(e))) for e in graph.edges})


def circle_inner_product(graph: TopGraph, a: CircleBundleFunction, b: CircleBundleFunction, point: Callable) -> dict:
    """``sum over s(e) = v of conj(a(b_e)) b(b_e)`` for any chosen point ``b_e`` over ``e``."""
    out = {v: 0 for v in graph.vertices}
    for e in graph.edges:
        p = point(e)
        out[graph.s[e]] = out[graph.s[e]] + conj(a(p)) * b(p)
    return out


def circle_left_action(graph: TopGraph, f: BaseFunction, xi: CircleBundleFunction) -> CircleBundleFunction:
    return CircleBundleFunction(xi.cocycle, {e: f.get(graph.r[e], 0) * v for e, v in xi.base.items()})


def circle_right_action(graph: TopGraph, xi: CircleBundleFunction, f: BaseFunction) -> CircleBundleFunction:
    return CircleBundleFunction(xi.cocycle, {e: v * f.get(graph.s[e], 0) for e, v in xi.base.items()})


def check_three_pictures(graph: TopGraph, c: CoverCocycle, phases: Iterable = (0,)) -> Report:
    """Both Phi maps preserve inner products and actions on all spanning deltas."""
    rep = Report()
    deltas = spanning_deltas(graph, c)
    funcs = [{v: 1} for v in graph.vertices] + [{v: i + 2 for i, v in enumerate(graph.vertices)}]
    bad = {"line_roundtrip": None, "line_inner": None, "line_actions": None,
           "circle_roundtrip": None, "circle_inner": None, "circle_actions": None}

    for x in deltas:
        lx = to_line_bundle_picture(x)
        alt = to_line_bundle_picture(x, lambda e: c.charts_containing(e)[-1])
        if not from_line_bundle_picture(graph, lx).equals(x) or not from_line_bundle_picture(graph, alt).equals(x):
            bad["line_roundtrip"] = bad["line_roundtrip"] or x
        bx = to_circle_bundle_picture(x)
        if not from_circle_bundle_picture(graph, bx).equals(x):
            bad["circle_roundtrip"] = bad["circle_roundtrip"] or x
        for f in funcs:
            if not from_line_bundle_picture(graph, line_left_action(graph, f, alt)).equals(left_action(f, x)):
                bad["line_actions"] = bad["line_actions"] or (x, f)
            if not from_line_bundle_picture(graph, line_right_action(graph, alt, f)).equals(right_action(x, f)):
                bad["line_actions"] = bad["line_actions"] or (x, f)
            if not from_circle_bundle_picture(graph, circle_left_action(graph, f, bx)).equals(left_action(f, x)):
                bad["circle_actions"] = bad["circle_actions"] or (x, f)
            if not from_circle_bundle_picture(graph, circle_right_action(graph, bx, f)).equals(right_action(x, f)):
                bad["circle_actions"] = bad["circle_actions"] or (x, f)
        for y in deltas:
            want = inner_product(x, y)
            ly = to_line_bundle_picture(y, lambda e: c.charts_containing(e)[-1])
            if not functions_equal(line_inner_product(graph, lx, ly), want):
                bad["line_inner"] = bad["line_inner"] or (x, y)
            by = to_circle_bundle_picture(y)
            for a in c.indices:
                for z in phases:

                    def point(e, a=a, z=z):
                        b = a if e in c.charts[a] else c.least_chart(e)
                        return (e, Phase.of(z), b)

                    if not functions_equal(circle_inner_product(graph, bx, by, point), want):
                        bad["circle_inner"] = bad["circle_inner"] or (x, y, a, z)
    for name, cx in bad.items():
        rep.add(name, cx is None, cx)
    return rep
