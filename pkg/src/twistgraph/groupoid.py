"""Renault-Deaconu groupoids of partial local homeomorphisms.

Two kinds of system share one small protocol (``in_domain``, ``sigma``,
``witness_bound`` and optionally a finite ``points`` tuple):

* :class:`PartialSystem`, a finite set with a partially defined self-map;
* :class:`BoundaryShift`, the one-sided shift on the boundary path space.

Elements are stored as ``(x, n, y)`` together with the least witness pair
``(k1, k2)``, ``k1 - k2 = n`` and ``sigma^k1(x) = sigma^k2(y)``.  The
admissible ``k2`` form an up-set, so least is unique.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

from .boundary import BoundaryPath, boundary_path_set, prepend, shift
from .errors import CyclicGraph, NonComposable, NotInDomain, NotInGroupoid
from .graph import Path, TopGraph, sort_key, sorted_ids
from .reports import Report


class PartialSystem:
    """A finite set ``T`` with ``sigma: dom -> T``."""

    is_finite = True

    def __init__(self, space: Iterable, sigma: Mapping) -> None:
        self.points: tuple = tuple(sorted_ids(space))
        pts = set(self.points)
        if len(pts) != len(self.points):
            raise ValueError("points must be distinct")
        for t, u in sigma.items():
            if t not in pts or u not in pts:
                raise ValueError(f"sigma({t!r}) = {u!r} leaves the space")
        self.dom: tuple = tuple(sorted_ids(sigma))
        self._sigma = MappingProxyType(dict(sigma))

    def __repr__(self) -> str:
        body = ", ".join(f"{t}->{self._sigma[t]}" for t in self.dom)
        return f"PartialSystem(T={list(self.points)}, sigma={{{body}}})"

    def in_domain(self, t) -> bool:
        return t in self._sigma

    def sigma(self, t):
        try:
            return self._sigma[t]
        except KeyError:
            raise NotInDomain(f"{t!r} is not in dom(sigma)") from None

    def witness_bound(self, x, n: int, y) -> int:
        # Past |T| steps both orbits are periodic, so a first meeting happens
        # within |T| further steps of k2 if at all.
        return len(self.points) + abs(n)

    def as_graph(self) -> TopGraph:
        """The graph ``(T, dom, id, sigma)``: edge ``t`` runs from ``sigma(t)`` to ``t``."""
        return TopGraph(self.points, {t: (t, self._sigma[t]) for t in self.dom})


class BoundaryShift:
    """The shift map on the boundary paths of ``g``."""

    def __init__(self, g: TopGraph, bound: int | None = None) -> None:
        self.graph = g
        self.is_finite = g.is_acyclic
        if g.is_acyclic or bound is not None:
            bset = boundary_path_set(g, bound)
            self.points: tuple | None = bset.paths
            self.complete = bset.complete
            self.dom: tuple | None = tuple(x for x in self.points if x.length >= 1)
        else:
            self.points = self.dom = None
            self.complete = False

    def in_domain(self, x: BoundaryPath) -> bool:
        return x.length >= 1

    def sigma(self, x: BoundaryPath) -> BoundaryPath:
        return shift(self.graph, x)

    def witness_bound(self, x: BoundaryPath, n: int, y: BoundaryPath) -> int:
        if x.is_finite and y.is_finite:
            return len(y.head) + 1
        extra = len(x.cycle) if x.cycle is not None else len(y.cycle)
        return len(x.head) + len(y.head) + abs(n) + extra + 1


def iterate(sys, x, k: int):
    """``sigma^k(x)``, or ``None`` when it leaves the domain."""
    for _ in range(k):
        if not sys.in_domain(x):
            return None
        x = sys.sigma(x)
    return x


@dataclass(frozen=True)
class GroupoidElement:
    x: object
    n: int
    y: object
    k1: int
    k2: int

    @property
    def range(self):
        return self.x

    @property
    def source(self):
        return self.y

    @property
    def is_unit(self) -> bool:
        return self.n == 0 and self.x == self.y

    def sort_key(self) -> tuple:
        return (sort_key(self.x), self.n, sort_key(self.y))

    def __str__(self) -> str:
        return f"({self.x}, {self.n}, {self.y})"


def canonical_pair(sys, x, n: int, y) -> tuple[int, int]:
    """The least ``(k1, k2)`` with ``k1 - k2 = n`` and ``sigma^k1 x = sigma^k2 y``."""
    k2 = max(0, -n)
    bound = sys.witness_bound(x, n, y)
    a = iterate(sys, x, k2 + n)
    b = iterate(sys, y, k2)
    while a is not None and b is not None and k2 <= bound:
        if a == b:
            return k2 + n, k2
        a = sys.sigma(a) if sys.in_domain(a) else None
        b = sys.sigma(b) if sys.in_domain(b) else None
        k2 += 1
    raise NotInGroupoid(f"({x}, {n}, {y}) has no witness within bound {bound}")


def element(sys, x, n: int, y) -> GroupoidElement:
    k1, k2 = canonical_pair(sys, x, n, y)
    return GroupoidElement(x, n, y, k1, k2)


def unit(x) -> GroupoidElement:
    return GroupoidElement(x, 0, x, 0, 0)


def compose(sys, a: GroupoidElement, b: GroupoidElement) -> GroupoidElement:
    if a.y != b.x:
        raise NonComposable(f"s({a}) differs from r({b})")
    return element(sys, a.x, a.n + b.n, b.y)


def inverse(a: GroupoidElement) -> GroupoidElement:
    return GroupoidElement(a.y, -a.n, a.x, a.k2, a.k1)


@dataclass(frozen=True)
class GroupoidSet:
    elements: tuple
    complete: bool

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


def system_elements(sys, max_shift: int | None = None) -> tuple:
    """Every element of ``Gamma(T, sigma)`` for a finite system, sorted.

    ``max_shift`` caps ``k1`` and ``k2``; by default it is ``|T|`` which is
    enough for a finite system (see :meth:`PartialSystem.witness_bound`).
    """
    pts = sys.points
    cap = len(pts) if max_shift is None else max_shift
    orbit = {x: [iterate(sys, x, k) for k in range(cap + 1)] for x in pts}
    found = {}
    for x in pts:
        for y in pts:
            for k1, a in enumerate(orbit[x]):
                if a is None:
                    break
                for k2, b in enumerate(orbit[y]):
                    if b is None:
                        break
                    if a == b:
                        n = k1 - k2
                        key = (x, n, y)
                        if key not in found or k1 < found[key].k1:
                            found[key] = GroupoidElement(x, n, y, k1, k2)
    return tuple(sorted(found.values(), key=sort_key))


def boundary_groupoid_elements(g: TopGraph, bound: int | None = None) -> GroupoidSet:
    """``Gamma(dE, sigma)``: complete for acyclic ``g``, else witnesses up to ``bound``."""
    sys = BoundaryShift(g, bound)
    if g.is_acyclic:
        return GroupoidSet(system_elements(sys), True)
    return GroupoidSet(system_elements(sys, bound), False)


def check_groupoid_axioms(sys, elements: Iterable[GroupoidElement]) -> Report:
    """Unit, inverse and associativity laws on a finite set of arrows.

    Products that fall outside ``elements`` (possible when isotropy was capped)
    are skipped rather than counted as failures.
    """
    rep = Report()
    els = list(elements)
    present = set(els)
    by_range: dict = {}
    for a in els:
        by_range.setdefault(a.x, []).append(a)
    bad_unit = bad_inv = None
    for a in els:
        if compose(sys, unit(a.x), a) != a or compose(sys, a, unit(a.y)) != a:
            bad_unit = bad_unit or a
        if compose(sys, a, inverse(a)) != unit(a.x) or inverse(inverse(a)) != a:
            bad_inv = bad_inv or a
    rep.add("units", bad_unit is None, bad_unit)
    rep.add("inverses", bad_inv is None, bad_inv)
    bad = None
    triples = 0
    for a in els:
        for b in by_range.get(a.y, []):
            ab = compose(sys, a, b)
            if (ab.x, ab.y) != (a.x, b.y):
                bad = bad or (a, b)
            if ab not in present:
                continue
            for c in by_range.get(b.y, []):
                bc = compose(sys, b, c)
                if bc in present:
                    triples += 1
                    if compose(sys, ab, c) != compose(sys, a, bc):
                        bad = bad or (a, b, c)
    rep.add("associativity", bad is None, bad, triples=triples)
    return rep


@dataclass(frozen=True)
class Bisection:
    """``Z(mu, nu) = {(mu z, |mu| - |nu|, nu z)}``."""

    mu: Path
    nu: Path

    def __post_init__(self) -> None:
        if self.mu.source != self.nu.source:
            raise ValueError(f"s({self.mu}) differs from s({self.nu})")

    @property
    def degree(self) -> int:
        return len(self.mu) - len(self.nu)

    def sort_key(self) -> tuple:
        return (self.mu.sort_key(), self.nu.sort_key())

    def __str__(self) -> str:
        return f"Z({self.mu}, {self.nu})"

    def arrow_at(self, sys: BoundaryShift, z: BoundaryPath) -> GroupoidElement:
        g = sys.graph
        return element(sys, prepend(g, self.mu, z), self.degree, prepend(g, self.nu, z))

    def arrows(self, sys: BoundaryShift) -> list[GroupoidElement]:
        """All arrows of the bisection (finite systems only)."""
        if not sys.is_finite:
            raise CyclicGraph("bisections over a graph with cycles are infinite")
        return [self.arrow_at(sys, z) for z in sys.points if z.range == self.mu.source]


def hat_graph(g: TopGraph) -> TopGraph:
    """The graph ``(dE, dE minus the singular vertices, iota, sigma)``."""
    if not g.is_acyclic:
        raise CyclicGraph("the boundary path space is infinite for graphs with cycles")
    pts = boundary_path_set(g).paths
    return TopGraph(pts, {x: (x, shift(g, x)) for x in pts if x.length >= 1})


def shift_system(g: TopGraph) -> PartialSystem:
    """The boundary shift of an acyclic graph as a finite system."""
    if not g.is_acyclic:
        raise CyclicGraph("the boundary path space is infinite for graphs with cycles")
    pts = boundary_path_set(g).paths
    return PartialSystem(pts, {x: shift(g, x) for x in pts if x.length >= 1})
