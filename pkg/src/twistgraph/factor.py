"""Factor maps between finite graphs and the homomorphisms they induce.

A factor map ``m = (m0, m1)`` from ``F`` to ``E`` intertwines range and
source and lifts every edge uniquely along sources.  A regular one induces
``h: O(E) -> O(F)`` with ``h(pi_E(f)) = pi_F(f o m0)`` and
``h(psi_E(x)) = psi_F(x o m1)``, the cocycle on ``F`` being pulled back
along ``m1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .algebra import (
    AlgebraElement,
    BisectionAlgebra,
    MatrixModel,
    adjoint,
    boundary_arrow_algebra,
    matrices_equal,
    word_product,
)
from .boundary import boundary_path_set
from .correspondence import CorrespondenceElement
from .errors import CyclicGraph, NonComposable, NotRegular
from .graph import TopGraph, enumerate_paths, sorted_ids
from .groupoid import hat_graph
from .reports import Report
from .twist import CoverCocycle, pullback


@dataclass(frozen=True)
class FactorMap:
    """``m0: F^0 -> E^0`` and ``m1: F^1 -> E^1`` from ``source = F`` to ``target = E``."""

    source: TopGraph
    target: TopGraph
    m0: Mapping
    m1: Mapping

    def __post_init__(self) -> None:
        object.__setattr__(self, "m0", MappingProxyType(dict(self.m0)))
        object.__setattr__(self, "m1", MappingProxyType(dict(self.m1)))

    def __repr__(self) -> str:
        return f"FactorMap(m0={dict(self.m0)}, m1={dict(self.m1)})"


def identity_factor_map(g: TopGraph) -> FactorMap:
    return FactorMap(g, g, {v: v for v in g.vertices}, {e: e for e in g.edges})


def validate_factor_map(fm: FactorMap) -> Report:
    F, E = fm.source, fm.target
    rep = Report()
    bad = [u for u in F.vertices if fm.m0.get(u) not in E.vertices]
    bad += [f for f in F.edges if fm.m1.get(f) not in E.edges]
    rep.add("total", not bad, bad[:1] or None)
    if bad:
        return rep
    bad = None
    for f in F.edges:
        e = fm.m1[f]
        if E.r[e] != fm.m0[F.r[f]]:
            bad = bad or ("range", f)
        if E.s[e] != fm.m0[F.s[f]]:
            bad = bad or ("source", f)
    rep.add("intertwines", bad is None, bad)
    bad = None
    for u in F.vertices:
        for e in E.edges_from[fm.m0[u]]:
            lifts = [f for f in F.edges_from[u] if fm.m1[f] == e]
            if len(lifts) != 1 and bad is None:
                bad = {"edge": e, "vertex": u, "lifts": lifts}
    rep.add("unique_lifting", bad is None, bad)
    return rep


@dataclass(frozen=True)
class Regularity:
    regular: bool
    singular_to_singular: bool
    preimage_of_regular: bool
    ranges_nonempty: bool
    witness: object

    @property
    def agree(self) -> bool:
        return self.singular_to_singular == self.preimage_of_regular == self.ranges_nonempty


def is_regular(fm: FactorMap) -> Regularity:
    """The three equivalent regularity conditions, evaluated separately."""
    F, E = fm.source, fm.target
    fc, ec = F.classification, E.classification
    bad1 = [u for u in sorted_ids(fc.sg) if fm.m0[u] not in ec.sg]
    bad2 = [u for u in F.vertices if fm.m0[u] in ec.rg and u not in fc.rg]
    bad3 = [u for u in F.vertices if fm.m0[u] in ec.rg and not F.edges_into[u]]
    c1, c2, c3 = not bad1, not bad2, not bad3
    return Regularity(c1, c1, c2, c3, (bad1 or bad2 or bad3 or [None])[0])


def compose_factor_maps(m: FactorMap, n: FactorMap) -> FactorMap:
    """``m o n`` for ``n: G -> F`` and ``m: F -> E``."""
    if n.target != m.source:
        raise NonComposable("the target of n is not the source of m")
    return FactorMap(n.source, m.target, {u: m.m0[n.m0[u]] for u in n.source.vertices},
                     {f: m.m1[n.m1[f]] for f in n.source.edges})


def boundary_factor_map(g: TopGraph) -> FactorMap:
    """``(r, Q)`` from the graph on the boundary paths to ``g``."""
    if not g.is_acyclic:
        raise CyclicGraph("the boundary graph is infinite for graphs with cycles")
    hat = hat_graph(g)
    return FactorMap(hat, g, {x: x.range for x in hat.vertices}, {x: x.head.edges[0] for x in hat.edges})


# -- induced homomorphisms ---------------------------------------------------


class InducedHom:
    """``h: O(E) -> O(F)`` on the bisection model of both sides."""

    def __init__(self, fm: FactorMap, domain: BisectionAlgebra) -> None:
        if domain.graph != fm.target:
            raise ValueError("the domain algebra must live over the target graph of the factor map")
        reg = is_regular(fm)
        if not reg.regular:
            raise NotRegular(f"vertex {reg.witness!r} breaks regularity")
        self.fm = fm
        self.domain = domain
        self.codomain = BisectionAlgebra(fm.source, pullback(domain.cocycle, fm.m1))
        self._pi: dict = {}
        self._psi: dict = {}

    def pi_image(self, v) -> AlgebraElement:
        """``h(pi(1_v)) = pi(1_v o m0)``."""
        if v not in self._pi:
            pre = {u: 1 for u in self.fm.source.vertices if self.fm.m0[u] == v}
            self._pi[v] = self.codomain.pi(pre)
        return self._pi[v]

    def psi_image(self, e) -> AlgebraElement:
        """``h(psi(delta_e)) = psi(delta_e o m1)``."""
        if e not in self._psi:
            F = self.fm.source
            x = CorrespondenceElement(F, self.codomain.cocycle, {f: 1 for f in F.edges if self.fm.m1[f] == e})
            self._psi[e] = self.codomain.psi(x)
        return self._psi[e]

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        if a.algebra is not self.domain:
            raise ValueError("element of a different algebra")
        total = self.codomain.zero()
        for s, c in a.terms.items():
            word = word_product(self.codomain, s.mu, s.nu, self.psi_image, self.pi_image)
            total = total + word.scale(c)
        return total


def induced_hom(fm: FactorMap, domain: BisectionAlgebra | CoverCocycle) -> InducedHom:
    if isinstance(domain, CoverCocycle):
        domain = BisectionAlgebra(fm.target, domain)
    return InducedHom(fm, domain)


# -- matrices for acyclic graphs ---------------------------------------------


class AcyclicMatrices:
    """Matrix images of bisection elements over an acyclic graph."""

    def __init__(self, alg: BisectionAlgebra) -> None:
        if not alg.graph.is_acyclic:
            raise CyclicGraph("matrix images need an acyclic graph")
        self.alg = alg
        self.model = MatrixModel(boundary_arrow_algebra(alg.graph, alg.cocycle))

    def __call__(self, a: AlgebraElement) -> np.ndarray:
        return self.model.matrix(self.alg.to_arrows(a, self.model.alg))


def bisection_basis(alg: BisectionAlgebra) -> list:
    """``b(mu, nu)`` with a common singular source: a basis for an acyclic graph."""
    g = alg.graph
    sg = g.classification.sg
    paths = [p for n in range(len(g.vertices)) for p in enumerate_paths(g, n) if p.source in sg]
    return [alg.term(mu, nu) for mu in paths for nu in paths if mu.source == nu.source]


def _rank(ms: list) -> int:
    if not ms:
        return 0
    rows = np.array([[complex(v) for v in m.flat] for m in ms])
    return int(np.linalg.matrix_rank(rows, tol=1e-9))


def check_induced_hom(fm: FactorMap, cocycle: CoverCocycle) -> Report:
    """``h`` is a *-homomorphism, and injective exactly when ``m0`` is onto (acyclic)."""
    rep = Report()
    h = induced_hom(fm, cocycle)
    dom, cod = h.domain, h.codomain
    mat = AcyclicMatrices(cod)
    basis = bisection_basis(dom)
    images = [h(b) for b in basis]
    ms = [mat(x) for x in images]
    bad = None
    for i, a in enumerate(basis):
        if not matrices_equal(mat(h(dom.involution(a))), adjoint(ms[i])):
            bad = bad or ("adjoint", str(next(iter(a.terms))))
        for j, b in enumerate(basis):
            if not matrices_equal(mat(h(dom.convolve(a, b))), ms[i].dot(ms[j])):
                bad = bad or ("product", str(next(iter(a.terms))), str(next(iter(b.terms))))
    rep.add("star_homomorphism", bad is None, bad, basis=len(basis))
    injective = _rank(ms) == len(basis)
    onto = set(fm.m0.values()) == set(fm.target.vertices)
    rep.add("injective_iff_m0_onto", injective == onto, None, injective=injective, m0_onto=onto)
    return rep


def check_functoriality(m: FactorMap, n: FactorMap, cocycle: CoverCocycle) -> Report:
    """``h_{m o n} = h_n o h_m`` as matrices on a basis of ``O(E)``."""
    rep = Report()
    h_m = induced_hom(m, cocycle)
    h_n = induced_hom(n, h_m.codomain)
    h_mn = induced_hom(compose_factor_maps(m, n), h_m.domain)
    mat_n = AcyclicMatrices(h_n.codomain)
    mat_mn = AcyclicMatrices(h_mn.codomain)
    bad = None
    basis = bisection_basis(h_m.domain)
    for b in basis:
        if not matrices_equal(mat_mn(h_mn(b)), mat_n(h_n(h_m(b)))):
            bad = bad or str(next(iter(b.terms)))
    rep.add("composite_hom", bad is None, bad, basis=len(basis))
    return rep


def check_boundary_factor_map(g: TopGraph) -> Report:
    fm = boundary_factor_map(g)
    rep = Report()
    rep.extend(validate_factor_map(fm), "valid.")
    reg = is_regular(fm)
    rep.add("regular", reg.regular and reg.agree, reg.witness)
    onto0 = set(fm.m0.values()) == set(g.vertices)
    onto1 = set(fm.m1.values()) == set(g.edges)
    rep.add("surjective", onto0 and onto1, None, m0=onto0, m1=onto1)
    rep.add("hat_vertices", len(fm.source.vertices) == len(boundary_path_set(g).paths), None)
    return rep


def check_factor_triple(m: FactorMap, n: FactorMap, cocycle: CoverCocycle) -> Report:
    """Functoriality for ``G -n-> F -m-> E`` plus the per-map checks on ``m``, ``n``, ``m o n``."""
    rep = Report()
    mn = compose_factor_maps(m, n)
    for name, fm, c in (("m", m, cocycle), ("n", n, pullback(cocycle, m.m1)), ("mn", mn, cocycle)):
        rep.extend(validate_factor_map(fm), f"{name}.valid.")
        reg = is_regular(fm)
        rep.add(f"{name}.regular", reg.regular and reg.agree, reg.witness)
        rep.extend(check_induced_hom(fm, c), f"{name}.")
    rep.extend(check_functoriality(m, n, cocycle))
    return rep
