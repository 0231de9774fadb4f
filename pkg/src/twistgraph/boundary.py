"""The boundary path space of a finite graph, its cylinder sets, and the
exhaustive-set characterisation of boundary paths.

Infinite paths are only representable when eventually periodic, so a
:class:`BoundaryPath` is either a finite path whose source is singular or a
word ``head . cycle . cycle ...`` kept in a canonical form (shortest head,
primitive cycle).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Union

from .errors import BoundExceeded, NonComposable, NotInDomain, UnsupportedPresentation
from .graph import Path, TopGraph, concat_paths, sort_key


@dataclass(frozen=True)
class BoundaryPath:
    """Finite boundary path (``cycle is None``) or eventually periodic infinite path."""

    head: Path
    cycle: Path | None = None

    @property
    def is_finite(self) -> bool:
        return self.cycle is None

    @property
    def length(self) -> float:
        return len(self.head) if self.cycle is None else math.inf

    @property
    def range(self):
        return self.head.range

    def edge(self, i: int):
        """The ``i``-th edge, 1-based."""
        if i <= len(self.head):
            return self.head.edges[i - 1]
        if self.cycle is None:
            raise IndexError(i)
        k = (i - len(self.head) - 1) % len(self.cycle)
        return self.cycle.edges[k]

    def prefix_edges(self, n: int) -> tuple:
        """The first ``n`` edges (``n`` must not exceed the length)."""
        if n > self.length:
            raise IndexError(n)
        return tuple(self.edge(i) for i in range(1, n + 1))

    def sort_key(self) -> tuple:
        if self.cycle is None:
            return (0, self.head.sort_key())
        return (1, len(self.head) + len(self.cycle), self.head.sort_key(), self.cycle.sort_key())

    def __str__(self) -> str:
        if self.cycle is None:
            return str(self.head)
        head = "" if self.head.is_vertex else f"{self.head}."
        return f"{head}({self.cycle})^inf"

    def __repr__(self) -> str:
        return f"BoundaryPath({str(self)!r})"


def finite_boundary(g: TopGraph, p: Path) -> BoundaryPath:
    if not is_boundary(g, p):
        raise ValueError(f"{p} does not end at a singular vertex")
    return BoundaryPath(p)


def _sub(g: TopGraph, edges: tuple, rng) -> Path:
    if not edges:
        return Path((), rng, rng)
    return Path(tuple(edges), g.r[edges[0]], g.s[edges[-1]])


def periodic(g: TopGraph, head: Iterable, cycle: Iterable) -> BoundaryPath:
    """The canonical form of ``head . cycle^inf`` (edge sequences)."""
    head = tuple(head)
    cycle = tuple(cycle)
    if not cycle:
        raise ValueError("cycle must be non-empty")
    if g.s[cycle[-1]] != g.r[cycle[0]]:
        raise ValueError("cycle does not close")
    if head and g.s[head[-1]] != g.r[cycle[0]]:
        raise ValueError("head does not run into the cycle")
    g.path(*cycle)
    if head:
        g.path(*head)
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle == cycle[:d] * (n // d):
            cycle = cycle[:d]
            break
    while head and head[-1] == cycle[-1]:
        cycle = (cycle[-1],) + cycle[:-1]
        head = head[:-1]
    rng = g.r[head[0]] if head else g.r[cycle[0]]
    return BoundaryPath(_sub(g, head, rng), g.path(*cycle))


def is_boundary(g: TopGraph, p: Path) -> bool:
    return p.source in g.classification.sg


@dataclass(frozen=True)
class BoundarySet:
    paths: tuple
    complete: bool

    def __iter__(self):
        return iter(self.paths)

    def __len__(self) -> int:
        return len(self.paths)

    def __contains__(self, x) -> bool:
        return x in self.paths


def _all_paths(g: TopGraph, max_len: int) -> list[Path]:
    out = []
    for v in g.vertices:
        out.extend(g.paths_from_range(v, max_len))
    return out


def boundary_path_set(g: TopGraph, bound: int | None = None) -> BoundarySet:
    """All boundary paths (acyclic graphs), or those of size at most ``bound``.

    For a graph with cycles the finite members have length at most ``bound``
    and the periodic ones satisfy ``|head| + |cycle| <= bound``; the result is
    then flagged incomplete.
    """
    if g.is_acyclic:
        max_len = len(g.vertices)
        found = [BoundaryPath(p) for p in _all_paths(g, max_len) if is_boundary(g, p)]
        return BoundarySet(tuple(sorted(found, key=sort_key)), True)
    if bound is None:
        raise ValueError("a bound is required for graphs with cycles")
    found = {BoundaryPath(p) for p in _all_paths(g, bound) if is_boundary(g, p)}
    closed = [p for p in _all_paths(g, bound) if p.edges and p.source == p.range]
    for cyc in closed:
        for v in g.vertices:
            for head in g.paths_from_range(v, bound - len(cyc)):
                if head.source == cyc.range:
                    found.add(periodic(g, head.edges, cyc.edges))
    return BoundarySet(tuple(sorted(found, key=sort_key)), False)


def shift(g: TopGraph, x: BoundaryPath) -> BoundaryPath:
    """Remove the first edge."""
    if x.length == 0:
        raise NotInDomain(f"{x} has length 0")
    if x.cycle is None:
        rest = x.head.edges[1:]
        return BoundaryPath(_sub(g, rest, g.s[x.head.edges[0]]))
    if x.head.edges:
        rest = x.head.edges[1:]
        return BoundaryPath(_sub(g, rest, g.s[x.head.edges[0]]), x.cycle)
    c = x.cycle.edges
    return BoundaryPath(_sub(g, (), g.s[c[0]]), g.path(*(c[1:] + c[:1])))


def some_boundary_path_from(g: TopGraph, v) -> BoundaryPath:
    """A boundary path with range ``v``; exists since ``r`` is onto."""
    edges: list = []
    seen = {v: 0}
    cur = v
    while g.edges_into[cur]:
        e = g.edges_into[cur][0]
        edges.append(e)
        cur = g.s[e]
        if cur in seen:
            start = seen[cur]
            return periodic(g, edges[:start], edges[start:])
        seen[cur] = len(edges)
    return BoundaryPath(_sub(g, tuple(edges), v))


@dataclass(frozen=True)
class BasicOpen:
    """``Z(positive) \\ Z(forbidden)`` for finite sets of finite paths."""

    positive: frozenset
    forbidden: frozenset = frozenset()


def in_cylinder(x: BoundaryPath, paths: Iterable[Path]) -> bool:
    """Membership of ``x`` in ``Z(S)``."""
    for p in paths:
        if p.is_vertex:
            if x.range == p.range:
                return True
        elif len(p) <= x.length and x.prefix_edges(len(p)) == p.edges:
            return True
    return False


def in_basic_open(x: BoundaryPath, b: BasicOpen) -> bool:
    return in_cylinder(x, b.positive) and not in_cylinder(x, b.forbidden)


# -- the exhaustive-set characterisation ------------------------------------


def _witness_chain(g: TopGraph, p: Path, m: int) -> tuple[object, set]:
    """Anchor vertex and the set of witness paths for the index ``m``."""
    tail = p.edges[m:]
    anchor = g.r[tail[0]] if tail else p.source
    chain = {_sub(g, tail[:j], anchor) for j in range(len(tail) + 1)}
    return anchor, chain


def _counterexample_maximal(g: TopGraph, anchor, chain: set, depth: int, explicit: bool):
    """Search for a vertex set N and an exhaustive K avoiding ``chain``.

    For fixed ``N = r(K)`` the largest candidate is every path of length at
    most ``depth`` with range in ``N`` minus ``chain``; any admissible K sits
    inside it, and enlarging K keeps it exhaustive, so trying that one K per
    N decides existence.
    """
    others = [v for v in g.vertices if v != anchor]
    for k in range(len(others) + 1):
        for extra in itertools.combinations(others, k):
            N = (anchor,) + extra
            if explicit:
                ok = _maximal_ok_explicit(g, N, chain, depth)
            else:
                ok = _maximal_ok_dfs(g, N, chain, depth)
            if ok:
                return frozenset(N)
    return None


def _maximal_ok_explicit(g: TopGraph, N, chain: set, depth: int) -> bool:
    universe = [p for v in N for p in g.paths_from_range(v, depth)]
    K = [p for p in universe if p not in chain]
    if {p.range for p in K} != set(N):
        return False
    for lam in universe:
        if not any(_comparable(a, lam) for a in K):
            return False
    return True


def _comparable(a: Path, b: Path) -> bool:
    if a.range != b.range:
        return False
    n = min(len(a), len(b))
    return a.edges[:n] == b.edges[:n]


def _maximal_ok_dfs(g: TopGraph, N, chain: set, depth: int) -> bool:
    # Nodes outside the chain are themselves in K and cover their subtree,
    # so the scan only descends through chain nodes.
    def has_extension_in_K(lam: Path) -> bool:
        stack = [lam]
        while stack:
            p = stack.pop()
            if p not in chain:
                return True
            if len(p) < depth:
                stack.extend(g.extend(p, e) for e in g.edges_into[p.source])
        return False

    for v in N:
        if not has_extension_in_K(Path((), v, v)):
            return False  # r(K) misses v
        stack = [Path((), v, v)]
        while stack:
            lam = stack.pop()
            if lam not in chain:
                continue
            if not has_extension_in_K(lam):
                return False
            if len(lam) < depth:
                stack.extend(g.extend(lam, e) for e in g.edges_into[lam.source])
    return True


def _counterexample_subsets(g: TopGraph, anchor, chain: set, depth: int, cap: int):
    universe = _all_paths(g, depth)
    if len(universe) > cap:
        raise BoundExceeded(f"{len(universe)} candidate paths exceed the subset cap {cap}")
    for k in range(1, len(universe) + 1):
        for K in itertools.combinations(universe, k):
            rK = {a.range for a in K}
            if anchor not in rK:
                continue
            if any(a in chain for a in K):
                continue
            lams = [lam for lam in universe if lam.range in rK]
            if all(any(_comparable(a, lam) for a in K) for lam in lams):
                return frozenset(K)
    return None


def is_yeend_boundary(
    g: TopGraph,
    p: Path,
    len_bound: int | None = None,
    method: str = "pruned",
    subset_cap: int = 14,
) -> bool:
    """Decide membership of a finite path in the exhaustive-set boundary.

    ``method`` selects the search over compact sets K:

    ``"pruned"``  candidate K truncated at depth ``|tail| + 1`` (sufficient by
                  the truncation argument); raises BoundExceeded if that depth
                  exceeds ``len_bound``;
    ``"maximal"`` the full search space of paths of length at most
                  ``len_bound``, one maximal K per vertex set;
    ``"subsets"`` literal enumeration of every K, only for tiny graphs.
    """
    if not g.is_path(p):
        raise ValueError(f"{p} is not a path of the graph")
    if len_bound is None:
        len_bound = len(g.vertices) * len(g.edges) + len(p) + 1
    for m in range(len(p) + 1):
        anchor, chain = _witness_chain(g, p, m)
        if method == "pruned":
            depth = len(p) - m + 1
            if depth > len_bound:
                raise BoundExceeded(f"pruned search needs depth {depth} > {len_bound}")
            bad = _counterexample_maximal(g, anchor, chain, depth, explicit=True)
        elif method == "maximal":
            bad = _counterexample_maximal(g, anchor, chain, len_bound, explicit=False)
        elif method == "subsets":
            bad = _counterexample_subsets(g, anchor, chain, len_bound, subset_cap)
        else:
            raise ValueError(f"unknown method {method!r}")
        if bad is not None:
            return False
    return True


# -- convergence of finitely presented sequences ----------------------------


@dataclass(frozen=True)
class ConstantTail:
    term: BoundaryPath


@dataclass(frozen=True)
class UnrollingTail:
    """The n-th term is ``prefix . cycle^n . suffix`` (``suffix`` optional)."""

    prefix: Path
    cycle: Path
    suffix: Path | None = None


Tail = Union[ConstantTail, UnrollingTail]


@dataclass(frozen=True)
class PresentedSequence:
    tail: Tail
    exceptional: tuple = ()


def _unrolled_word(g: TopGraph, t: UnrollingTail) -> BoundaryPath:
    return periodic(g, t.prefix.edges, t.cycle.edges)


def convergence_conditions(g: TopGraph, seq: PresentedSequence, limit: BoundaryPath) -> tuple[bool, bool, bool]:
    """The three conditions (range, prefixes, no wandering) for the tail.

    Finitely many exceptional terms never affect any of them.  With a
    discrete edge space, ``K = E^1`` is compact and the wandering condition
    reduces to: only finitely many terms strictly extend the limit's length.
    A length-0 limit has an empty prefix condition, read as true.
    """
    tail = seq.tail
    if isinstance(tail, ConstantTail):
        c = tail.term
        c1 = c.range == limit.range
        if limit.is_finite:
            n = len(limit.head)
            c2 = c.length >= n and c.prefix_edges(n) == limit.head.edges
            c3 = c.length <= n
        else:
            c2 = c == limit
            c3 = True
        return c1, c2, c3
    if isinstance(tail, UnrollingTail):
        if tail.cycle.is_vertex or tail.cycle.range != tail.cycle.source:
            raise UnsupportedPresentation("unrolling tail needs a closed cycle of positive length")
        if tail.prefix.source != tail.cycle.range:
            raise UnsupportedPresentation("prefix does not run into the cycle")
        if tail.suffix is not None and tail.suffix.range != tail.cycle.source:
            raise UnsupportedPresentation("suffix does not leave from the cycle")
        word = _unrolled_word(g, tail)
        c1 = word.range == limit.range
        if limit.is_finite:
            n = len(limit.head)
            c2 = word.prefix_edges(n) == limit.head.edges
            c3 = False
        else:
            c2 = word == limit
            c3 = True
        return c1, c2, c3
    raise UnsupportedPresentation(f"unsupported tail {type(tail).__name__}")


def seq_converges(g: TopGraph, seq: PresentedSequence, limit: BoundaryPath) -> bool:
    return all(convergence_conditions(g, seq, limit))


def prepend(g: TopGraph, mu: Path, z: BoundaryPath) -> BoundaryPath:
    """The boundary path ``mu z``; needs ``s(mu) = r(z)``."""
    if mu.source != z.range:
        raise NonComposable(f"s({mu}) differs from r({z})")
    if z.cycle is None:
        return BoundaryPath(concat_paths(mu, z.head))
    return periodic(g, mu.edges + z.head.edges, z.cycle.edges)
