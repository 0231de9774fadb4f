"""Finite discrete topological graphs and their finite paths.

Conventions follow Katsura: an edge ``e`` goes from ``s(e)`` to ``r(e)`` and a
path ``mu = mu_1 ... mu_n`` is composable when ``s(mu_i) = r(mu_{i+1})``.  So
``r(mu) = r(mu_1)`` and ``s(mu) = s(mu_n)``; paths are read from their range.

Everything is finite and discrete, hence closures are identities and every
vertex is in ``E^0_fin``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Hashable, Iterable, Iterator, Mapping

import numpy as np

from .errors import NonComposable

Vertex = Hashable
Edge = Hashable


def sort_key(obj) -> tuple:
    """A total order on heterogeneous ids, stable across runs."""
    if hasattr(obj, "sort_key"):
        return (2, obj.sort_key())
    if isinstance(obj, tuple):
        return (1, tuple(sort_key(o) for o in obj))
    if isinstance(obj, (int, float)):
        return (0, "", obj)
    return (0, type(obj).__name__, str(obj))


def sorted_ids(items: Iterable) -> list:
    return sorted(items, key=sort_key)


@dataclass(frozen=True)
class Path:
    """A finite path with its range and source vertex.

    A length-0 path is a vertex; then ``range == source``.
    """

    edges: tuple
    range: Vertex
    source: Vertex

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def sort_key(self) -> tuple:
        return (len(self.edges), tuple(sort_key(e) for e in self.edges), sort_key(self.range))

    def __str__(self) -> str:
        if not self.edges:
            return str(self.range)
        return ".".join(str(e) for e in self.edges)


def concat_paths(p: Path, q: Path) -> Path:
    """The path ``p q`` (``p`` first from the range side)."""
    if p.source != q.range:
        raise NonComposable(f"s({p}) = {p.source!r} differs from r({q}) = {q.range!r}")
    return Path(p.edges + q.edges, p.range, q.source)


@dataclass(frozen=True)
class VertexClassification:
    fin: frozenset
    sce: frozenset
    rg: frozenset
    sg: frozenset


class TopGraph:
    """A finite topological graph ``(E^0, E^1, r, s)`` with discrete topology."""

    def __init__(self, vertices: Iterable, edges: Mapping | Iterable = (), range_map=None, source_map=None):
        """Build from vertices and either an ``{edge: (r, s)}`` mapping or
        explicit ``range_map``/``source_map`` dictionaries.
        """
        vertices = list(vertices)
        if len(set(vertices)) != len(vertices):
            raise ValueError("vertex ids must be distinct")
        if range_map is None:
            edges = dict(edges)
            range_map = {e: rs[0] for e, rs in edges.items()}
            source_map = {e: rs[1] for e, rs in edges.items()}
            edge_list = list(edges)
        else:
            edge_list = list(edges)
            if len(set(edge_list)) != len(edge_list):
                raise ValueError("edge ids must be distinct")
        vset = set(vertices)
        for e in edge_list:
            if e not in range_map or e not in source_map:
                raise ValueError(f"edge {e!r} lacks a range or source")
            if range_map[e] not in vset or source_map[e] not in vset:
                raise ValueError(f"edge {e!r} has an endpoint outside the vertex set")
        self.vertices: tuple = tuple(sorted_ids(vertices))
        self.edges: tuple = tuple(sorted_ids(edge_list))
        self.r: Mapping = MappingProxyType({e: range_map[e] for e in self.edges})
        self.s: Mapping = MappingProxyType({e: source_map[e] for e in self.edges})

    def __repr__(self) -> str:
        body = ", ".join(f"{e}:{self.s[e]}->{self.r[e]}" for e in self.edges)
        return f"TopGraph(V={list(self.vertices)}, E=[{body}])"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TopGraph):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.edges == other.edges
            and dict(self.r) == dict(other.r)
            and dict(self.s) == dict(other.s)
        )

    __hash__ = None

    @cached_property
    def edges_into(self) -> Mapping:
        """``r^{-1}(v)`` for every vertex, sorted."""
        out = defaultdict(list)
        for e in self.edges:
            out[self.r[e]].append(e)
        return MappingProxyType({v: tuple(out[v]) for v in self.vertices})

    @cached_property
    def edges_from(self) -> Mapping:
        """``s^{-1}(v)`` for every vertex, sorted."""
        out = defaultdict(list)
        for e in self.edges:
            out[self.s[e]].append(e)
        return MappingProxyType({v: tuple(out[v]) for v in self.vertices})

    def vertex_path(self, v: Vertex) -> Path:
        if v not in self.vertices:
            raise ValueError(f"unknown vertex {v!r}")
        return Path((), v, v)

    def path(self, *edges) -> Path:
        """The path ``edges[0] edges[1] ...``; raises on non-composable input."""
        if not edges:
            raise ValueError("use vertex_path for length-0 paths")
        for a, b in zip(edges, edges[1:]):
            if self.s[a] != self.r[b]:
                raise NonComposable(f"s({a!r}) != r({b!r})")
        return Path(tuple(edges), self.r[edges[0]], self.s[edges[-1]])

    def is_path(self, p: Path) -> bool:
        if not p.edges:
            return p.range == p.source and p.range in self.vertices
        if any(e not in self.r for e in p.edges):
            return False
        if any(self.s[a] != self.r[b] for a, b in zip(p.edges, p.edges[1:])):
            return False
        return p.range == self.r[p.edges[0]] and p.source == self.s[p.edges[-1]]

    @cached_property
    def classification(self) -> VertexClassification:
        return classify_vertices(self)

    @cached_property
    def adjacency(self) -> np.ndarray:
        """``A[i, j]`` = number of edges with range ``vertices[i]`` and source ``vertices[j]``."""
        idx = {v: i for i, v in enumerate(self.vertices)}
        a = np.zeros((len(self.vertices), len(self.vertices)), dtype=np.int64)
        for e in self.edges:
            a[idx[self.r[e]], idx[self.s[e]]] += 1
        return a

    @cached_property
    def is_acyclic(self) -> bool:
        indeg = {v: 0 for v in self.vertices}
        for e in self.edges:
            indeg[self.s[e]] += 1
        # Kahn's algorithm on the r -> s orientation.
        stack = [v for v in self.vertices if indeg[v] == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for e in self.edges_into[v]:
                w = self.s[e]
                indeg[w] -= 1
                if indeg[w] == 0:
                    stack.append(w)
        return seen == len(self.vertices)

    def paths_from_range(self, v: Vertex, max_len: int) -> Iterator[Path]:
        """All paths with range ``v`` and length at most ``max_len`` (DFS order)."""
        stack = [Path((), v, v)]
        while stack:
            p = stack.pop()
            yield p
            if len(p) < max_len:
                for e in reversed(self.edges_into[p.source]):
                    stack.append(Path(p.edges + (e,), p.range, self.s[e]))

    def extend(self, p: Path, e: Edge) -> Path:
        if self.r[e] != p.source:
            raise NonComposable(f"r({e!r}) != s({p})")
        return Path(p.edges + (e,), p.range, self.s[e])


def classify_vertices(g: TopGraph) -> VertexClassification:
    fin = frozenset(g.vertices)
    hit = {g.r[e] for e in g.edges}
    sce = frozenset(v for v in g.vertices if v not in hit)
    rg = fin - sce
    sg = frozenset(g.vertices) - rg
    return VertexClassification(fin=fin, sce=sce, rg=rg, sg=sg)


def enumerate_paths(g: TopGraph, n: int) -> list[Path]:
    """Every path of length exactly ``n``, in a deterministic order."""
    if n < 0:
        raise ValueError("path length must be non-negative")
    layer = [Path((), v, v) for v in g.vertices]
    for _ in range(n):
        layer = [Path(p.edges + (e,), p.range, g.s[e]) for p in layer for e in g.edges_into[p.source]]
    return sorted(layer, key=lambda p: p.sort_key())
