"""Seeded instance generators for the verification sweeps.

Everything here is deterministic given the seed.  Graphs use vertex ids
``v0, v1, ...`` and edge ids ``e0, e1, ...``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .algebra import AlgebraElement, BisectionAlgebra
from .factor import FactorMap, compose_factor_maps, is_regular, validate_factor_map
from .graph import Path, TopGraph, enumerate_paths
from .groupoid import PartialSystem
from .scalars import Phase
from .twist import CoverCocycle, apply_coboundary, constant_cocycle, trivial_cocycle

_DENOMINATORS = (2, 3, 4, 5, 6, 8, 12)


# -- graphs ------------------------------------------------------------------


def _graph(n: int, pairs) -> TopGraph:
    """``pairs`` lists ``(range, source)`` vertex indices."""
    vs = [f"v{i}" for i in range(n)]
    return TopGraph(vs, {f"e{i}": (vs[r], vs[s]) for i, (r, s) in enumerate(pairs)})


def _canonical_form(n: int, pairs) -> tuple:
    return min(tuple(sorted((p[r], p[s]) for r, s in pairs)) for p in itertools.permutations(range(n)))


def small_graphs(max_vertices: int = 3, max_edges: int = 4) -> list[TopGraph]:
    """Every graph with ``1..max_vertices`` vertices and at most ``max_edges``
    edges, one per isomorphism class."""
    out = []
    for n in range(1, max_vertices + 1):
        slots = list(itertools.product(range(n), repeat=2))
        seen = set()
        for k in range(max_edges + 1):
            for pairs in itertools.combinations_with_replacement(slots, k):
                form = _canonical_form(n, pairs)
                if form not in seen:
                    seen.add(form)
                    out.append(_graph(n, form))
    return out


def random_graph(rng: random.Random, max_vertices: int = 4, max_edges: int = 5, acyclic: bool = False) -> TopGraph:
    n = rng.randint(1, max_vertices)
    k = rng.randint(0, max_edges)
    pairs = []
    for _ in range(k):
        if acyclic:
            if n < 2:
                break
            r, s = sorted(rng.sample(range(n), 2))
        else:
            r, s = rng.randrange(n), rng.randrange(n)
        pairs.append((r, s))
    return _graph(n, pairs)


def random_graphs(seed: int = 0, count: int = 200, max_vertices: int = 4, max_edges: int = 5) -> list[TopGraph]:
    rng = random.Random(seed)
    return [random_graph(rng, max_vertices, max_edges) for _ in range(count)]


def boundary_corpus(seed: int = 0) -> list[TopGraph]:
    return small_graphs(3, 4) + random_graphs(seed, 200, 4, 5)


def named_graphs() -> dict[str, TopGraph]:
    return {
        "graph_A": TopGraph(["v", "w"], {"e": ("v", "w")}),
        "isolated": TopGraph(["v"], {}),
        "chain": TopGraph(["u", "v", "w"], {"e1": ("u", "v"), "e2": ("v", "w")}),
        "loop": TopGraph(["v"], {"f": ("v", "v")}),
        "two_loop": TopGraph(["v"], {"e1": ("v", "v"), "e2": ("v", "v")}),
    }


# -- dynamical systems -------------------------------------------------------


def sgds_instances(max_points: int = 3) -> list[PartialSystem]:
    """Every partial self-map of a set with ``1..max_points`` points with
    non-empty domain, one per isomorphism class."""
    out = []
    for n in range(1, max_points + 1):
        pts = [f"t{i}" for i in range(n)]
        seen = set()
        for images in itertools.product(range(-1, n), repeat=n):
            if all(i < 0 for i in images):
                continue
            form = min(
                tuple(sorted((p[t], p[i]) for t, i in enumerate(images) if i >= 0))
                for p in itertools.permutations(range(n))
            )
            if form in seen:
                continue
            seen.add(form)
            out.append(PartialSystem(pts, {pts[t]: pts[i] for t, i in form}))
    return out


# -- cocycles ----------------------------------------------------------------


def random_phase(rng: random.Random) -> Fraction:
    d = rng.choice(_DENOMINATORS)
    return Fraction(rng.randrange(d), d)


def random_cover(keys, rng: random.Random, charts: int = 3) -> dict:
    """Charts ``1..charts``; every key lies in a random non-empty set of them."""
    cover = {a: set() for a in range(1, charts + 1)}
    for k in keys:
        chosen = [a for a in cover if rng.random() < 0.5] or [rng.randint(1, charts)]
        for a in chosen:
            cover[a].add(k)
    return {a: v for a, v in cover.items() if v}


def random_coboundary(c: CoverCocycle, rng: random.Random) -> dict:
    """``u`` on every ``(chart, key)`` for :func:`~twistgraph.twist.apply_coboundary`."""
    return {(a, k): random_phase(rng) for a in c.indices for k in c.charts[a]}


def random_cover_cocycle(keys, rng: random.Random) -> CoverCocycle:
    """A cocycle on a random partial cover, ``s_ab = u_a conj(u_b)``."""
    keys = tuple(keys)
    cover = random_cover(keys, rng)
    ones = {(a, b, k): 0 for a in cover for b in cover for k in cover[a] & cover[b]}
    base = CoverCocycle.build(keys, cover, ones)
    return apply_coboundary(base, random_coboundary(base, rng))


def cocycle_family(keys, seed: int = 0) -> list[tuple[str, CoverCocycle]]:
    """Trivial, constant two-chart roots of unity, and random coboundary transforms."""
    keys = tuple(keys)
    rng = random.Random(seed)
    fam = [("trivial", trivial_cocycle(keys)), ("constant_1/3", constant_cocycle(keys, "1/3"))]
    if not keys:
        return fam
    fam.append(("constant_1/4_coboundary", apply_coboundary(constant_cocycle(keys, "1/4"), random_coboundary(constant_cocycle(keys, "1/4"), rng))))
    fam.append(("random_cover", random_cover_cocycle(keys, rng)))
    return fam


def coboundaries(c: CoverCocycle, seed: int = 0, count: int = 20) -> list[dict]:
    rng = random.Random(seed)
    return [random_coboundary(c, rng) for _ in range(count)]


# -- factor maps -------------------------------------------------------------


def _r_closure(E: TopGraph, start: set) -> set:
    """Smallest superset closed under ``v -> r(e)`` for ``s(e) = v``."""
    out, todo = set(start), list(start)
    while todo:
        v = todo.pop()
        for e in E.edges_from[v]:
            if E.r[e] not in out:
                out.add(E.r[e])
                todo.append(E.r[e])
    return out


def random_factor_map(E: TopGraph, rng: random.Random, max_vertices: int = 5, tries: int = 50) -> FactorMap | None:
    """A regular factor map into ``E`` whose ``m0`` has an ``r``-closed image.

    Each image vertex gets one or two preimages; every edge lift picks a
    random range among the admissible preimages.
    """
    for _ in range(tries):
        start = {v for v in E.vertices if rng.random() < 0.6} or {rng.choice(E.vertices)}
        image = sorted(_r_closure(E, start))
        mult = {v: 1 for v in image}
        budget = max_vertices - len(image)
        for v in image:
            if budget > 0 and rng.random() < 0.4:
                mult[v] += 1
                budget -= 1
        fv = [f"{v}.{i}" for v in image for i in range(mult[v])]
        m0 = {u: u.rsplit(".", 1)[0] for u in fv}
        pre = {v: [u for u in fv if m0[u] == v] for v in image}
        edges, m1 = {}, {}
        for u in fv:
            for e in E.edges_from[m0[u]]:
                f = f"{e}@{u}"
                edges[f] = (rng.choice(pre[E.r[e]]), u)
                m1[f] = e
        fm = FactorMap(TopGraph(fv, edges), E, m0, m1)
        if validate_factor_map(fm).passed and is_regular(fm).regular:
            return fm
    return None


@dataclass(frozen=True)
class FactorTriple:
    """``n: G -> F`` and ``m: F -> E``."""

    m: FactorMap
    n: FactorMap

    @property
    def composite(self) -> FactorMap:
        return compose_factor_maps(self.m, self.n)


def factor_triples(seed: int = 0, count: int = 50) -> list[FactorTriple]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        E = random_graph(rng, 3, 3, acyclic=True)
        m = random_factor_map(E, rng, 4)
        if m is None:
            continue
        n = random_factor_map(m.source, rng, 5)
        if n is None:
            continue
        out.append(FactorTriple(m, n))
    return out


# -- algebra elements --------------------------------------------------------


def _paths_up_to(g: TopGraph, n: int) -> list[Path]:
    return [p for k in range(n + 1) for p in enumerate_paths(g, k)]


def random_homogeneous(alg: BisectionAlgebra, rng: random.Random, degree: int, max_len: int = 2, terms: int = 3) -> AlgebraElement:
    """A sum of up to ``terms`` basis elements ``b(mu, nu)`` with ``|mu| - |nu| = degree``."""
    paths = _paths_up_to(alg.graph, max_len)
    pairs = [(mu, nu) for mu in paths for nu in paths if mu.source == nu.source and len(mu) - len(nu) == degree]
    out = alg.zero()
    if not pairs:
        return out
    for _ in range(rng.randint(1, terms)):
        mu, nu = rng.choice(pairs)
        coeff = rng.choice((1, 2, -1)) * Phase.of(random_phase(rng)).scalar()
        out = out + alg.term(mu, nu, coeff)
    return out


def homogeneous_pairs(seed: int = 0, count: int = 500) -> Iterator[tuple[AlgebraElement, int, AlgebraElement, int]]:
    """``(a, deg a, b, deg b)`` over the named graphs and a few random ones."""
    rng = random.Random(seed)
    graphs = [g for g in named_graphs().values() if g.edges] + [
        g for g in random_graphs(seed + 1, 12, 3, 4) if g.edges
    ]
    algebras = []
    for i, g in enumerate(graphs):
        for _, c in cocycle_family(g.edges, seed + i)[1:3]:
            algebras.append(BisectionAlgebra(g, c))
    made = 0
    while made < count:
        alg = rng.choice(algebras)
        d1, d2 = rng.randint(-2, 2), rng.randint(-2, 2)
        a = random_homogeneous(alg, rng, d1)
        b = random_homogeneous(alg, rng, d2)
        if not a.terms or not b.terms:
            continue
        made += 1
        yield a, d1, b, d2

