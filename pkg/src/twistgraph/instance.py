"""JSON instance files: a graph with optional system, cocycle, factor maps and options.

Layout::

    {
      "id": "graph_A",
      "graph": {"vertices": ["v", "w"], "edges": [{"id": "e", "r": "v", "s": "w"}]},
      "system": {"points": ["t0", "t1"], "sigma": {"t0": "t1"}},
      "cover": {"1": ["e"], "2": ["e"]},
      "cocycle": [{"alpha": "1", "beta": "2", "edge": "e", "angle": "1/3"}],
      "factor_maps": [{"id": "m", "target": "graph", "source": {...}, "m0": {...}, "m1": {...}}],
      "options": {"bound": 3}
    }

Angles are exact turns written as ``"p/q"`` strings, or ``[re, im]`` pairs
when ``exact_mode`` is off.  The cover is over the system's domain when a
system is given and over the edges otherwise.  A factor map's ``target`` is
``"graph"`` or the id of an earlier map, meaning that map's source.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path as FsPath

from .errors import ParseError
from .factor import FactorMap
from .graph import TopGraph, sort_key
from .groupoid import PartialSystem
from .scalars import Phase
from .twist import CoverCocycle

DEFAULT_OPTIONS = {
    "bound": 3,
    "path_length": 4,
    "max_shift": 3,
    "tolerance": 1e-12,
    "exact_mode": True,
    "seed": 0,
}

_TOP_KEYS = {"id", "graph", "system", "cover", "cocycle", "factor_maps", "options"}


@dataclass
class NamedFactorMap:
    id: str
    target: str
    map: FactorMap


@dataclass
class Instance:
    id: str
    graph: TopGraph
    system: PartialSystem | None = None
    cocycle: CoverCocycle | None = None
    factor_maps: list = field(default_factory=list)
    options: dict = field(default_factory=dict)

    @property
    def keys(self) -> tuple:
        """What the cover is over: the system's domain, or the edges."""
        return self.system.dom if self.system is not None else self.graph.edges

    def option(self, name: str):
        return self.options.get(name, DEFAULT_OPTIONS[name])


# -- parsing -----------------------------------------------------------------


def _need(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise ParseError(f"{where}: missing {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        raise ParseError(f"{where}: {key!r} has the wrong type")
    return val


def _ids(items, where: str) -> list:
    if not isinstance(items, list) or not all(isinstance(i, str) for i in items):
        raise ParseError(f"{where}: expected a list of string ids")
    if len(set(items)) != len(items):
        raise ParseError(f"{where}: duplicate ids")
    return items


def parse_graph(obj, where: str = "graph") -> TopGraph:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    vertices = _ids(_need(obj, "vertices", list, where), f"{where}.vertices")
    edges = {}
    for i, e in enumerate(obj.get("edges", [])):
        w = f"{where}.edges[{i}]"
        if not isinstance(e, dict):
            raise ParseError(f"{w}: expected an object")
        eid = _need(e, "id", str, w)
        if eid in edges:
            raise ParseError(f"{w}: duplicate edge {eid!r}")
        r, s = _need(e, "r", str, w), _need(e, "s", str, w)
        if r not in vertices or s not in vertices:
            raise ParseError(f"{w}: endpoint outside the vertex set")
        edges[eid] = (r, s)
    return TopGraph(vertices, edges)


def parse_angle(val, exact_mode: bool = True) -> Phase:
    if isinstance(val, str):
        try:
            return Phase(turns=Fraction(val))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad angle {val!r}") from None
    if isinstance(val, list) and len(val) == 2 and all(isinstance(v, (int, float)) for v in val):
        if exact_mode:
            raise ParseError("complex angles need exact_mode off")
        z = complex(val[0], val[1])
        if abs(abs(z) - 1) > 1e-9:
            raise ParseError(f"{val!r} is not a unit complex number")
        return Phase(value=z)
    raise ParseError(f"bad angle {val!r}")


def _parse_system(obj) -> PartialSystem:
    if not isinstance(obj, dict):
        raise ParseError("system: expected an object")
    points = _ids(_need(obj, "points", list, "system"), "system.points")
    sigma = _need(obj, "sigma", dict, "system")
    for t, u in sigma.items():
        if t not in points or u not in points:
            raise ParseError(f"system.sigma: {t!r} -> {u!r} leaves the space")
    return PartialSystem(points, sigma)


def _parse_cocycle(obj: dict, keys: tuple, exact_mode: bool) -> CoverCocycle | None:
    if "cover" not in obj and "cocycle" not in obj:
        return None
    cover = obj.get("cover")
    if cover is None:
        cover = {"1": list(keys)}
    if not isinstance(cover, dict):
        raise ParseError("cover: expected an object")
    keyset = set(keys)
    charts = {}
    for a, members in cover.items():
        members = _ids(members, f"cover.{a}")
        stray = [k for k in members if k not in keyset]
        if stray:
            raise ParseError(f"cover.{a}: unknown id {stray[0]!r}")
        charts[a] = members
    transitions = {}
    entries = obj.get("cocycle", [])
    if not isinstance(entries, list):
        raise ParseError("cocycle: expected a list")
    for i, ent in enumerate(entries):
        w = f"cocycle[{i}]"
        if not isinstance(ent, dict):
            raise ParseError(f"{w}: expected an object")
        a, b, e = (_need(ent, k, str, w) for k in ("alpha", "beta", "edge"))
        if a not in charts or b not in charts:
            raise ParseError(f"{w}: unknown chart")
        if e not in charts[a] or e not in charts[b]:
            raise ParseError(f"{w}: {e!r} is not on the overlap of {a!r} and {b!r}")
        if (a, b, e) in transitions:
            raise ParseError(f"{w}: duplicate entry")
        transitions[(a, b, e)] = parse_angle(_need(ent, "angle", (str, list), w), exact_mode)
    return CoverCocycle.build(keys, charts, transitions)


def _parse_factor_maps(items, graph: TopGraph) -> list:
    if not isinstance(items, list):
        raise ParseError("factor_maps: expected a list")
    out: list[NamedFactorMap] = []
    for i, obj in enumerate(items):
        w = f"factor_maps[{i}]"
        if not isinstance(obj, dict):
            raise ParseError(f"{w}: expected an object")
        mid = _need(obj, "id", str, w)
        if any(m.id == mid for m in out):
            raise ParseError(f"{w}: duplicate id {mid!r}")
        target_ref = _need(obj, "target", str, w)
        if target_ref == "graph":
            target = graph
        else:
            earlier = [m for m in out if m.id == target_ref]
            if not earlier:
                raise ParseError(f"{w}: unknown target {target_ref!r}")
            target = earlier[0].map.source
        source = parse_graph(_need(obj, "source", dict, w), f"{w}.source")
        m0, m1 = _need(obj, "m0", dict, w), _need(obj, "m1", dict, w)
        if set(m0) != set(source.vertices) or set(m1) != set(source.edges):
            raise ParseError(f"{w}: m0 and m1 must be defined on the whole source")
        if not set(m0.values()) <= set(target.vertices) or not set(m1.values()) <= set(target.edges):
            raise ParseError(f"{w}: image outside the target")
        out.append(NamedFactorMap(mid, target_ref, FactorMap(source, target, m0, m1)))
    return out


def parse_instance(obj) -> Instance:
    if not isinstance(obj, dict):
        raise ParseError("instance: expected an object")
    extra = set(obj) - _TOP_KEYS
    if extra:
        raise ParseError(f"instance: unknown keys {sorted(extra)}")
    options = obj.get("options", {})
    if not isinstance(options, dict) or set(options) - set(DEFAULT_OPTIONS):
        raise ParseError(f"options: allowed keys are {sorted(DEFAULT_OPTIONS)}")
    graph = parse_graph(_need(obj, "graph", dict, "instance"))
    system = _parse_system(obj["system"]) if "system" in obj else None
    inst = Instance(str(obj.get("id", "instance")), graph, system, None, [], dict(options))
    inst.cocycle = _parse_cocycle(obj, inst.keys, inst.option("exact_mode"))
    inst.factor_maps = _parse_factor_maps(obj.get("factor_maps", []), graph)
    return inst


def loads(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    return parse_instance(obj)


def load(path) -> Instance:
    try:
        text = FsPath(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return loads(text)


# -- serialisation -----------------------------------------------------------


def graph_to_json(g: TopGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e, "r": g.r[e], "s": g.s[e]} for e in g.edges],
    }


def angle_to_json(p: Phase):
    if p.exact:
        return str(p.turns)
    return [p.value.real, p.value.imag]


def instance_to_json(inst: Instance) -> dict:
    out: dict = {"id": inst.id, "graph": graph_to_json(inst.graph)}
    if inst.system is not None:
        sys = inst.system
        out["system"] = {"points": list(sys.points), "sigma": {t: sys.sigma(t) for t in sys.dom}}
    c = inst.cocycle
    if c is not None:
        out["cover"] = {str(a): [k for k in c.keys if k in c.charts[a]] for a in c.indices}
        out["cocycle"] = [
            {"alpha": str(a), "beta": str(b), "edge": e, "angle": angle_to_json(v)}
            for (a, b, e), v in sorted(c.transitions.items(), key=lambda kv: sort_key(kv[0]))
        ]
    if inst.factor_maps:
        out["factor_maps"] = [
            {
                "id": m.id,
                "target": m.target,
                "source": graph_to_json(m.map.source),
                "m0": {u: m.map.m0[u] for u in m.map.source.vertices},
                "m1": {f: m.map.m1[f] for f in m.map.source.edges},
            }
            for m in inst.factor_maps
        ]
    if inst.options:
        out["options"] = dict(sorted(inst.options.items()))
    return out


def dumps(inst: Instance) -> str:
    return json.dumps(instance_to_json(inst), indent=2, ensure_ascii=False) + "\n"
