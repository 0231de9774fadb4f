"""Circle-valued cocycles on a finite cover and the twist they induce.

A :class:`CoverCocycle` lives on a finite key set (the edge set of a graph or
the domain of a partial map).  A :class:`TwistContext` couples it with a
system (``in_domain``/``sigma``) and a key map telling which key a domain
point is charted by: the identity for a finite system, the first edge for the
boundary shift.

Twist elements use the explicit coordinates: an underlying arrow with some
witness ``(k1, k2)``, a phase ``z``, chart indices ``alpha_i`` for the points
``sigma^{i-1}(x)`` and ``alpha'_j`` for ``sigma^{j-1}(y)``.  Presentations are
related by chart relabelling and by enlarging or reducing the witness.  The
canonical presentation has the least witness and the least chart at every
point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from functools import cached_property
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Iterable, Mapping

from .errors import ChartMismatch, InvalidCocycle, NonComposable, NotInDomain, NotInGroupoid
from .groupoid import GroupoidElement, canonical_pair, iterate, system_elements
from .graph import sort_key, sorted_ids
from .reports import Report
from .scalars import Phase


@dataclass(frozen=True)
class CoverCocycle:
    """Charts ``N_alpha`` covering ``keys`` and transitions ``s_ab(e)``.

    Every ordered pair on an overlap is stored, diagonal included, so a
    single corrupted value is visible to :func:`validate_cocycle`.
    """

    keys: tuple
    charts: Mapping
    transitions: Mapping

    @classmethod
    def build(cls, keys: Iterable, charts: Mapping, transitions: Mapping = None, fill: bool = True) -> CoverCocycle:
        """Normalise input; with ``fill`` the diagonal and reversed pairs are completed."""
        keys = tuple(sorted_ids(keys))
        ch = {a: frozenset(v) for a, v in charts.items()}
        tr = {k: Phase.of(v) for k, v in (transitions or {}).items()}
        if fill:
            for a, members in ch.items():
                for e in members:
                    tr.setdefault((a, a, e), Phase.one())
            for (a, b, e), v in list(tr.items()):
                tr.setdefault((b, a, e), v.conjugate())
        return cls(keys, MappingProxyType(ch), MappingProxyType(tr))

    @cached_property
    def indices(self) -> tuple:
        return tuple(sorted_ids(self.charts))

    @cached_property
    def _containing(self) -> dict:
        return {k: tuple(a for a in self.indices if k in self.charts[a]) for k in self.keys}

    def charts_containing(self, key) -> tuple:
        hit = self._containing.get(key)
        if hit is None:
            return tuple(a for a in self.indices if key in self.charts[a])
        return hit

    def least_chart(self, key):
        for a in self.indices:
            if key in self.charts[a]:
                return a
        raise ChartMismatch(f"{key!r} lies in no chart")

    def s(self, a, b, key) -> Phase:
        try:
            return self.transitions[(a, b, key)]
        except KeyError:
            if key not in self.charts.get(a, ()) or key not in self.charts.get(b, ()):
                raise ChartMismatch(f"{key!r} is not in both charts {a!r}, {b!r}") from None
            raise InvalidCocycle(f"transition ({a!r}, {b!r}) missing at {key!r}") from None

    @property
    def exact(self) -> bool:
        return all(v.exact for v in self.transitions.values())

    def with_value(self, a, b, key, value) -> CoverCocycle:
        """Copy with a single transition entry replaced (for mutation tests)."""
        tr = dict(self.transitions)
        tr[(a, b, key)] = Phase.of(value)
        return CoverCocycle(self.keys, self.charts, MappingProxyType(tr))


def trivial_cocycle(keys: Iterable) -> CoverCocycle:
    keys = tuple(keys)
    return CoverCocycle.build(keys, {1: keys})


def constant_cocycle(keys: Iterable, omega) -> CoverCocycle:
    """Two charts covering everything with ``s_12 = omega``."""
    keys = tuple(keys)
    w = Phase.of(omega)
    return CoverCocycle.build(keys, {1: keys, 2: keys}, {(1, 2, e): w for e in keys})


def validate_cocycle(c: CoverCocycle) -> Report:
    rep = Report()
    keyset = set(c.keys)
    covered = set().union(*c.charts.values()) if c.charts else set()
    missing = sorted_ids(keyset - covered)
    rep.add("cover", not missing and covered <= keyset, missing or sorted_ids(covered - keyset) or None)
    stray = [k for k in c.transitions if k[2] not in c.charts.get(k[0], ()) or k[2] not in c.charts.get(k[1], ())]
    rep.add("support", not stray, sorted(stray, key=sort_key)[:1] or None)
    idx = c.indices
    bad_total = bad_diag = bad_sym = bad_triple = None
    for e in c.keys:
        here = c.charts_containing(e)
        for a in here:
            for b in here:
                if (a, b, e) not in c.transitions and bad_total is None:
                    bad_total = (a, b, e)
        for a in here:
            v = c.transitions.get((a, a, e))
            if v is not None and not v.is_one() and bad_diag is None:
                bad_diag = (a, a, e)
        for a, b in itertools.combinations(here, 2):
            u, v = c.transitions.get((a, b, e)), c.transitions.get((b, a, e))
            if u is not None and v is not None and not (u * v).is_one() and bad_sym is None:
                bad_sym = (a, b, e)
        for a, b, g in itertools.product(here, repeat=3):
            u, v, w = (c.transitions.get(t) for t in ((a, b, e), (b, g, e), (a, g, e)))
            if None not in (u, v, w) and u * v != w and bad_triple is None:
                bad_triple = (a, b, g, e)
    del idx
    rep.add("defined_on_overlaps", bad_total is None, bad_total)
    rep.add("diagonal", bad_diag is None, bad_diag)
    rep.add("symmetry", bad_sym is None, bad_sym)
    rep.add("triple", bad_triple is None, bad_triple)
    return rep


def phase_ratio(c: CoverCocycle, b1: tuple, b2: tuple) -> Phase:
    """``b1 / b2`` for chart points ``(key, z, alpha)`` over the same key."""
    e1, z1, a1 = b1
    e2, z2, a2 = b2
    if e1 != e2:
        raise ChartMismatch(f"points over different keys {e1!r}, {e2!r}")
    for e, a in ((e1, a1), (e2, a2)):
        if e not in c.charts.get(a, ()):
            raise ChartMismatch(f"{e!r} is not in chart {a!r}")
    return Phase.of(z1) * Phase.of(z2).conjugate() * c.s(a1, a2, e1)


class GluedBundle:
    """``(disjoint union of N_alpha x T) / (e, z, a) ~ (e, z s_ab(e), b)``."""

    def __init__(self, c: CoverCocycle) -> None:
        self.cocycle = c

    def canonical(self, b: tuple) -> tuple:
        e, z, a = b
        k = self.cocycle.least_chart(e)
        return (e, Phase.of(z) * self.cocycle.s(a, k, e), k)

    def equivalent(self, b1: tuple, b2: tuple) -> bool:
        return self.canonical(b1) == self.canonical(b2)

    def points(self, phases: Iterable) -> list:
        """Every chart presentation over every key, for the given phases."""
        c = self.cocycle
        return [(e, Phase.of(z), a) for e in c.keys for a in c.charts_containing(e) for z in phases]

    def trivialisation(self, u: Mapping) -> Callable:
        """``(e, z, a) -> z u_a(e)``; well defined exactly when ``s_ab = u_a conj(u_b)``."""

        def triv(b: tuple) -> Phase:
            e, z, a = b
            return Phase.of(z) * Phase.of(u.get((a, e), 0))

        return triv


def glue_bundle(c: CoverCocycle) -> GluedBundle:
    rep = validate_cocycle(c)
    if not rep.passed:
        raise InvalidCocycle(f"cocycle fails {[r.check for r in rep.failures()]}")
    return GluedBundle(c)


def pullback(c: CoverCocycle, m1: Mapping) -> CoverCocycle:
    """Pull charts and transitions back along ``m1: new keys -> keys``."""
    keys = tuple(sorted_ids(m1))
    charts = {a: frozenset(k for k in keys if m1[k] in members) for a, members in c.charts.items()}
    tr = {}
    for k in keys:
        here = [a for a in c.indices if m1[k] in c.charts[a]]
        for a in here:
            for b in here:
                if (a, b, m1[k]) in c.transitions:
                    tr[(a, b, k)] = c.transitions[(a, b, m1[k])]
    return CoverCocycle(keys, MappingProxyType(charts), MappingProxyType(tr))


def apply_coboundary(c: CoverCocycle, u: Mapping) -> CoverCocycle:
    """``s'_ab = u_a s_ab conj(u_b)``; ``u`` maps ``(alpha, key)`` to a phase, default 1."""

    def uu(a, e) -> Phase:
        return Phase.of(u.get((a, e), 0))

    tr = {(a, b, e): uu(a, e) * v * uu(b, e).conjugate() for (a, b, e), v in c.transitions.items()}
    return CoverCocycle(c.keys, c.charts, MappingProxyType(tr))


# -- the twist groupoid ------------------------------------------------------


@dataclass(frozen=True)
class TwistElement:
    x: object
    y: object
    k1: int
    k2: int
    phase: Phase
    charts_out: tuple
    charts_in: tuple

    @property
    def n(self) -> int:
        return self.k1 - self.k2

    def sort_key(self) -> tuple:
        return (sort_key(self.x), self.n, sort_key(self.y), self.k1, sort_key(self.charts_out), sort_key(self.charts_in))

    def __str__(self) -> str:
        return f"[{self.x}, {self.n}, {self.y}; z={self.phase}; {self.charts_out}|{self.charts_in}]"


class TwistContext:
    """The twist over ``Gamma(system)`` glued from a cover cocycle."""

    def __init__(self, system, cocycle: CoverCocycle, key: Callable | None = None) -> None:
        self.system = system
        self.cocycle = cocycle
        self.key = key if key is not None else (lambda t: t)
        self._canon: dict = {}
        self._lifts: dict = {}
        self._products: dict = {}

    # chart bookkeeping

    def charts_at(self, t) -> tuple:
        if not self.system.in_domain(t):
            raise NotInDomain(f"{t!r} is not in dom(sigma)")
        return self.cocycle.charts_containing(self.key(t))

    def least_chart(self, t):
        if not self.system.in_domain(t):
            raise NotInDomain(f"{t!r} is not in dom(sigma)")
        return self.cocycle.least_chart(self.key(t))

    def s(self, a, b, t) -> Phase:
        return self.cocycle.s(a, b, self.key(t))

    def orbit(self, t, k: int) -> list:
        """``[t, sigma t, ..., sigma^{k-1} t]``."""
        out = []
        for _ in range(k):
            out.append(t)
            t = self.system.sigma(t)
        return out

    def check(self, lam: TwistElement) -> None:
        """Raise unless ``lam`` is a valid presentation."""
        if len(lam.charts_out) != lam.k1 or len(lam.charts_in) != lam.k2:
            raise ChartMismatch("chart lists do not match the witness")
        a = iterate(self.system, lam.x, lam.k1)
        b = iterate(self.system, lam.y, lam.k2)
        if a is None or b is None or a != b:
            raise NotInGroupoid(f"({lam.k1}, {lam.k2}) is not a witness for {lam}")
        for t, al in zip(self.orbit(lam.x, lam.k1), lam.charts_out):
            if al not in self.charts_at(t):
                raise ChartMismatch(f"{t} is not in chart {al!r}")
        for t, al in zip(self.orbit(lam.y, lam.k2), lam.charts_in):
            if al not in self.charts_at(t):
                raise ChartMismatch(f"{t} is not in chart {al!r}")

    # constructors

    def lift(self, g: GroupoidElement, z=0) -> TwistElement:
        """The canonical presentation over ``g`` with phase ``z``."""
        charts = self._lifts.get(g)
        if charts is None:
            out = tuple(self.least_chart(t) for t in self.orbit(g.x, g.k1))
            inn = tuple(self.least_chart(t) for t in self.orbit(g.y, g.k2))
            charts = self._lifts[g] = (out, inn)
        return TwistElement(g.x, g.y, g.k1, g.k2, Phase.of(z), *charts)

    def element(self, x, n: int, y, z=0) -> TwistElement:
        k1, k2 = canonical_pair(self.system, x, n, y)
        return self.lift(GroupoidElement(x, n, y, k1, k2), z)

    def unit(self, t, z=0) -> TwistElement:
        """``i(z, t)``."""
        return TwistElement(t, t, 0, 0, Phase.of(z), (), ())

    def p_prime(self, lam: TwistElement) -> GroupoidElement:
        k1, k2 = canonical_pair(self.system, lam.x, lam.n, lam.y)
        return GroupoidElement(lam.x, lam.n, lam.y, k1, k2)

    # presentation changes

    def relabel(self, lam: TwistElement, out: tuple, inn: tuple) -> TwistElement:
        """Same witness, new charts."""
        out, inn = tuple(out), tuple(inn)
        if len(out) != lam.k1 or len(inn) != lam.k2:
            raise ChartMismatch("relabelling must keep the witness")
        z = lam.phase
        for t, a, b in zip(self.orbit(lam.x, lam.k1), lam.charts_out, out):
            z = z * self.s(a, b, t)
        for t, a, b in zip(self.orbit(lam.y, lam.k2), lam.charts_in, inn):
            z = z * self.s(b, a, t)
        return TwistElement(lam.x, lam.y, lam.k1, lam.k2, z, out, inn)

    def enlarge(self, lam: TwistElement, d: int, aux_out: tuple | None = None, aux_in: tuple | None = None) -> TwistElement:
        """Witness ``(k1, k2) -> (k1 + d, k2 + d)``; default auxiliary charts are least."""
        if d < 0:
            raise ValueError("enlarge needs d >= 0")
        meet = iterate(self.system, lam.x, lam.k1)
        pts = self.orbit(meet, d)
        aux_out = tuple(self.least_chart(t) for t in pts) if aux_out is None else tuple(aux_out)
        aux_in = tuple(self.least_chart(t) for t in pts) if aux_in is None else tuple(aux_in)
        z = lam.phase
        for t, a, b in zip(pts, aux_out, aux_in):
            if a not in self.charts_at(t) or b not in self.charts_at(t):
                raise ChartMismatch(f"{t} is not in the auxiliary charts {a!r}, {b!r}")
            z = z * self.s(b, a, t)
        return TwistElement(lam.x, lam.y, lam.k1 + d, lam.k2 + d, z, lam.charts_out + aux_out, lam.charts_in + aux_in)

    def reduce(self, lam: TwistElement, d: int) -> TwistElement:
        """Witness ``(k1, k2) -> (k1 - d, k2 - d)`` when that is still a witness."""
        l1, l2 = lam.k1 - d, lam.k2 - d
        if d < 0 or l1 < 0 or l2 < 0:
            raise ValueError(f"cannot reduce {lam} by {d}")
        meet = iterate(self.system, lam.x, l1)
        if meet is None or meet != iterate(self.system, lam.y, l2):
            raise NotInGroupoid(f"({l1}, {l2}) is not a witness for {lam}")
        z = lam.phase
        for t, a, b in zip(self.orbit(meet, d), lam.charts_out[l1:], lam.charts_in[l2:]):
            z = z * self.s(a, b, t)
        return TwistElement(lam.x, lam.y, l1, l2, z, lam.charts_out[:l1], lam.charts_in[:l2])

    def chart_change(self, lam: TwistElement, k1: int, k2: int, out: tuple, inn: tuple) -> TwistElement:
        """The map between presentations with witnesses ``(lam.k1, lam.k2)`` and ``(k1, k2)``."""
        out, inn = tuple(out), tuple(inn)
        if k1 - k2 != lam.n or len(out) != k1 or len(inn) != k2:
            raise ChartMismatch("target presentation does not match the arrow")
        d = k1 - lam.k1
        if d >= 0:
            big = self.enlarge(lam, d, out[lam.k1 :], inn[lam.k2 :])
            return self.relabel(big, out, inn)
        head = self.relabel(lam, out + lam.charts_out[k1:], inn + lam.charts_in[k2:])
        return self.reduce(head, -d)

    def canonicalize(self, lam: TwistElement) -> TwistElement:
        hit = self._canon.get(lam)
        if hit is None:
            g = self.p_prime(lam)
            low = self.reduce(lam, lam.k1 - g.k1)
            least = self.lift(g)
            hit = self._canon[lam] = self.relabel(low, least.charts_out, least.charts_in)
        return hit

    def equal(self, a: TwistElement, b: TwistElement) -> bool:
        return self.canonicalize(a) == self.canonicalize(b)

    # groupoid operations

    def mul(self, l1: TwistElement, l2: TwistElement) -> TwistElement:
        if l1.y != l2.x:
            raise NonComposable(f"s({l1}) differs from r({l2})")
        key = (l1, l2)
        hit = self._products.get(key)
        if hit is None:
            hit = self._products[key] = self._mul(l1, l2)
        return hit

    def _mul(self, l1: TwistElement, l2: TwistElement) -> TwistElement:
        m = max(l1.k2, l2.k1)
        a = self.enlarge(l1, m - l1.k2)
        b = self.enlarge(l2, m - l2.k1)
        z = a.phase * b.phase
        for t, mid_in, mid_out in zip(self.orbit(l1.y, m), a.charts_in, b.charts_out):
            z = z * self.s(mid_out, mid_in, t)
        prod = TwistElement(l1.x, l2.y, a.k1, b.k2, z, a.charts_out, b.charts_in)
        return self.canonicalize(prod)

    def inv(self, lam: TwistElement) -> TwistElement:
        return TwistElement(lam.y, lam.x, lam.k2, lam.k1, lam.phase.conjugate(), lam.charts_in, lam.charts_out)

    def scale(self, lam: TwistElement, z) -> TwistElement:
        return replace(lam, phase=lam.phase * Phase.of(z))

    def phase_of(self, lam: TwistElement) -> Phase:
        """The phase of ``lam`` against the canonical lift of its arrow."""
        return self.canonicalize(lam).phase

    # enumeration

    def presentations(self, g: GroupoidElement, z=0, extra: int = 1) -> list:
        """All presentations over ``g``: witnesses up to ``extra`` beyond least, every chart choice."""
        out = []
        for d in range(extra + 1):
            meet_ok = iterate(self.system, g.x, g.k1 + d)
            if meet_ok is None:
                break
            xs = self.orbit(g.x, g.k1 + d)
            ys = self.orbit(g.y, g.k2 + d)
            base = self.enlarge(self.lift(g, z), d)
            opts_out = [self.charts_at(t) for t in xs]
            opts_in = [self.charts_at(t) for t in ys]
            for co in itertools.product(*opts_out):
                for ci in itertools.product(*opts_in):
                    out.append(self.relabel(base, co, ci))
        return out


def build_twist(system, cocycle: CoverCocycle, key: Callable | None = None) -> TwistContext:
    rep = validate_cocycle(cocycle)
    if not rep.passed:
        raise InvalidCocycle(f"cocycle fails {[r.check for r in rep.failures()]}")
    ctx = TwistContext(system, cocycle, key)
    if system.is_finite:
        for t in system.dom:
            if not ctx.charts_at(t):
                raise InvalidCocycle(f"{t!r} lies in no chart")
    return ctx


def default_phases(exact: bool = True) -> list:
    if exact:
        return [Phase(Fraction(0)), Phase(Fraction(1, 3)), Phase(Fraction(3, 4))]
    return [Phase.of(1), Phase.of(complex(0.6, 0.8)), Phase.of(complex(-0.28, 0.96))]


def check_pullback(ctx: TwistContext, phases: Iterable | None = None) -> Report:
    """Restricting the twist to ``j(t) = (t, 1, sigma t)`` gives back the glued bundle."""
    rep = Report()
    phases = list(phases or default_phases(ctx.cocycle.exact))
    bundle = GluedBundle(ctx.cocycle)
    bad = None
    for t in ctx.system.dom:
        st = ctx.system.sigma(t)
        for a in ctx.charts_at(t):
            for z in phases:
                lam = TwistElement(t, st, 1, 0, z, (a,), ())
                canon = ctx.canonicalize(lam)
                e, w, k = bundle.canonical((ctx.key(t), z, a))
                if canon.phase != w or canon.charts_out != (k,):
                    bad = bad or (t, a, z)
                for b in ctx.charts_at(t):
                    other = TwistElement(t, st, 1, 0, z * ctx.s(a, b, t), (b,), ())
                    if not ctx.equal(lam, other):
                        bad = bad or (t, a, b, z)
    rep.add("pullback_bundle", bad is None, bad)
    return rep


def verify_twist_axioms(ctx: TwistContext, arrows: Iterable | None = None, phases: Iterable | None = None, extra: int = 1) -> Report:
    """Check the twist axioms exhaustively over ``arrows`` (all arrows of a finite system by default)."""
    rep = Report()
    rep.extend(validate_cocycle(ctx.cocycle), "cocycle.")
    if not rep.passed:
        return rep
    arrows = list(arrows if arrows is not None else system_elements(ctx.system))
    phases = list(phases or default_phases(ctx.cocycle.exact))
    units = sorted({g.x for g in arrows} | {g.y for g in arrows}, key=sort_key)

    pres = {g: ctx.presentations(g, extra=extra) for g in arrows}

    bad = None
    for g, ps in pres.items():
        for lam in ps:
            canon = ctx.canonicalize(lam)
            if ctx.p_prime(lam) != g or (canon.k1, canon.k2) != (g.k1, g.k2):
                bad = bad or lam
            for other in ps:
                if (other.k1, other.k2) == (lam.k1, lam.k2):
                    moved = ctx.relabel(lam, other.charts_out, other.charts_in)
                    if ctx.canonicalize(moved) != canon:
                        bad = bad or (lam, other)
    rep.add("presentation_independence", bad is None, bad)

    seen = {}
    bad = None
    for t in units:
        for z in phases:
            c = ctx.canonicalize(ctx.unit(t, z))
            if c in seen and seen[c] != (t, z):
                bad = bad or ((t, z), seen[c])
            seen[c] = (t, z)
    for g, ps in pres.items():
        if g.is_unit:
            for lam in ps:
                # the canonical form of anything over a unit is some i(z, t)
                c = ctx.canonicalize(lam)
                if c != ctx.unit(c.x, c.phase):
                    bad = bad or lam
    rep.add("unit_embedding", bad is None, bad)

    bad = None
    for g in arrows:
        if ctx.p_prime(ctx.lift(g)) != g:
            bad = bad or g
    by_range = {}
    for g in arrows:
        by_range.setdefault(g.x, []).append(g)
    for a in arrows:
        for b in by_range.get(a.y, []):
            for z in phases[:2]:
                prod = ctx.mul(ctx.lift(a, z), ctx.lift(b))
                want = (a.x, a.n + b.n, b.y)
                pp = ctx.p_prime(prod)
                if (pp.x, pp.n, pp.y) != want:
                    bad = bad or (a, b)
    rep.add("projection", bad is None, bad)

    bad_conj = bad_inv = None
    for g, ps in pres.items():
        for lam in ps:
            r_unit = ctx.unit(lam.x, 0)
            if ctx.mul(lam, ctx.inv(lam)) != ctx.canonicalize(r_unit):
                bad_inv = bad_inv or lam
            if ctx.inv(ctx.inv(lam)) != lam:
                bad_inv = bad_inv or lam
            for z in phases:
                left = ctx.mul(ctx.mul(lam, ctx.unit(lam.y, z)), ctx.inv(lam))
                if left != ctx.canonicalize(ctx.unit(lam.x, z)):
                    bad_conj = bad_conj or (lam, z)
    rep.add("inverse", bad_inv is None, bad_inv)
    rep.add("conjugation", bad_conj is None, bad_conj)
    rep.extend(check_pullback(ctx, phases))
    return rep


def check_associativity(ctx: TwistContext, elements: Iterable) -> tuple | None:
    """First composable triple violating associativity, or ``None``."""
    elements = list(elements)
    by_range = {}
    for e in elements:
        by_range.setdefault(e.x, []).append(e)
    for a in elements:
        for b in by_range.get(a.y, []):
            ab = ctx.mul(a, b)
            for c in by_range.get(b.y, []):
                if ctx.mul(ab, c) != ctx.mul(a, ctx.mul(b, c)):
                    return (a, b, c)
    return None


def coboundary_map(ctx: TwistContext, u: Mapping) -> Callable:
    """The isomorphism from the twist of ``c`` to the twist of ``apply_coboundary(c, u)``.

    Presentations keep their charts and the phase picks up
    ``prod conj(u_{alpha_i}) * prod u_{alpha'_j}`` at the corresponding points.
    """

    def uu(a, t) -> Phase:
        return Phase.of(u.get((a, ctx.key(t)), 0))

    def f(lam: TwistElement) -> TwistElement:
        z = lam.phase
        for t, a in zip(ctx.orbit(lam.x, lam.k1), lam.charts_out):
            z = z * uu(a, t).conjugate()
        for t, a in zip(ctx.orbit(lam.y, lam.k2), lam.charts_in):
            z = z * uu(a, t)
        return replace(lam, phase=z)

    return f


def alternate_presentation(ctx: TwistContext, lam: TwistElement) -> TwistElement:
    """Another presentation of ``lam``: witness enlarged by one where possible and
    the greatest chart at every point, so that relabelling factors appear."""
    meet = iterate(ctx.system, lam.x, lam.k1)
    if meet is not None and ctx.system.in_domain(meet):
        top = ctx.charts_at(meet)[-1]
        lam = ctx.enlarge(lam, 1, (top,), (ctx.charts_at(meet)[0],))
    out = tuple(ctx.charts_at(t)[-1] for t in ctx.orbit(lam.x, lam.k1))
    inn = tuple(ctx.charts_at(t)[-1] for t in ctx.orbit(lam.y, lam.k2))
    return ctx.relabel(lam, out, inn)


def _witnesses(g: GroupoidElement, ctx: TwistContext, max_witness: int) -> list:
    out = []
    k1, k2 = g.k1, g.k2
    while k1 <= max_witness and k2 <= max_witness and iterate(ctx.system, g.x, k1) is not None:
        out.append((k1, k2))
        k1, k2 = k1 + 1, k2 + 1
    return out


def _chart_choices(ctx: TwistContext, g: GroupoidElement, w: tuple) -> list:
    """Least and greatest charts along the witness ``w``."""
    xs, ys = ctx.orbit(g.x, w[0]), ctx.orbit(g.y, w[1])
    least = (tuple(ctx.charts_at(t)[0] for t in xs), tuple(ctx.charts_at(t)[0] for t in ys))
    most = (tuple(ctx.charts_at(t)[-1] for t in xs), tuple(ctx.charts_at(t)[-1] for t in ys))
    return [least] if least == most else [least, most]


def check_chart_changes(ctx: TwistContext, arrows: Iterable, max_witness: int = 3, phases: Iterable | None = None) -> Report:
    """Coherence of the explicit witness-changing maps ``h``.

    Over every presentation with witness at most ``max_witness``: ``h`` to the
    same presentation is the identity, ``h`` keeps the underlying arrow,
    going there and back is the identity, and ``h`` to ``m`` through ``l``
    equals ``h`` straight to ``m``.  Also checks that ``mul`` does not see
    the presentation of either factor.
    """
    rep = Report()
    phases = list(phases or default_phases(ctx.cocycle.exact)[1:2])
    arrows = [g for g in arrows if g.k1 <= max_witness and g.k2 <= max_witness]
    bad_id = bad_proj = bad_inv = bad_comp = None
    for g in arrows:
        ws = _witnesses(g, ctx, max_witness)
        targets = [(w, ch) for w in ws for ch in _chart_choices(ctx, g, w)]
        for z in phases:
            for lam in ctx.presentations(g, z, extra=len(ws) - 1):
                if ctx.chart_change(lam, lam.k1, lam.k2, lam.charts_out, lam.charts_in) != lam:
                    bad_id = bad_id or lam
                for (l1, l2), (lo, li) in targets:
                    mid = ctx.chart_change(lam, l1, l2, lo, li)
                    if ctx.p_prime(mid) != g:
                        bad_proj = bad_proj or (lam, (l1, l2))
                    if ctx.chart_change(mid, lam.k1, lam.k2, lam.charts_out, lam.charts_in) != lam:
                        bad_inv = bad_inv or (lam, (l1, l2))
                    for (m1, m2), (mo, mi) in targets:
                        if ctx.chart_change(mid, m1, m2, mo, mi) != ctx.chart_change(lam, m1, m2, mo, mi):
                            bad_comp = bad_comp or (lam, (l1, l2), (m1, m2))
    rep.add("identity", bad_id is None, bad_id)
    rep.add("projection", bad_proj is None, bad_proj)
    rep.add("inverse", bad_inv is None, bad_inv)
    rep.add("composition", bad_comp is None, bad_comp)

    bad = None
    by_range: dict = {}
    for g in arrows:
        by_range.setdefault(g.x, []).append(g)
    for a in arrows:
        pa = ctx.presentations(a, phases[-1], extra=len(_witnesses(a, ctx, max_witness)) - 1)
        for b in by_range.get(a.y, []):
            want = ctx.mul(ctx.lift(a, phases[-1]), ctx.lift(b))
            for lam in pa:
                if ctx.mul(lam, ctx.lift(b)) != want:
                    bad = bad or (lam, b)
            for mu in ctx.presentations(b, 0, extra=len(_witnesses(b, ctx, max_witness)) - 1):
                if ctx.mul(ctx.lift(a, phases[-1]), mu) != want:
                    bad = bad or (a, mu)
    rep.add("mul_well_defined", bad is None, bad)
    return rep


def associativity_elements(ctx: TwistContext, arrows: Iterable, max_witness: int = 3) -> list:
    """A canonical lift with a non-trivial phase and an alternate presentation per arrow."""
    z = default_phases(ctx.cocycle.exact)[1]
    out = []
    for g in arrows:
        if g.k1 <= max_witness and g.k2 <= max_witness:
            lam = ctx.lift(g, z)
            out.append(lam)
            alt = alternate_presentation(ctx, lam)
            if alt != lam:
                out.append(alt)
    return out
