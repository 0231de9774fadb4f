"""Command line entry point.

Every command reads one instance file (``corpus`` needs none) and prints one
JSON record per check, with fields ``check``, ``instance``, ``status``,
``counterexample`` and ``detail`` in that order.  Exit codes: 0 when all
checks pass, 1 when one fails, 2 for an unreadable instance, 3 when a search
bound is exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, Iterable, TextIO

from .algebra import BisectionAlgebra, check_covariance, check_grading, check_toeplitz, verify_main_isomorphism
from .boundary import BoundaryPath, boundary_path_set, is_boundary, is_yeend_boundary
from .corpus import cocycle_family, random_graphs, small_graphs
from .errors import BoundExceeded, CyclicGraph, ParseError
from .factor import check_functoriality, check_induced_hom, is_regular, validate_factor_map
from .graph import Path, TopGraph, enumerate_paths, sort_key, sorted_ids
from .groupoid import Bisection, GroupoidElement, boundary_groupoid_elements, check_groupoid_axioms, shift_system, system_elements
from .instance import Instance, load
from .reports import Report
from .scalars import Cyclotomic, Phase
from .twist import (
    CoverCocycle,
    TwistElement,
    associativity_elements,
    build_twist,
    check_associativity,
    check_chart_changes,
    pullback,
    trivial_cocycle,
    validate_cocycle,
    verify_twist_axioms,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_BOUND = 0, 1, 2, 3


def jsonable(obj):
    """A deterministic JSON-ready rendering of report payloads."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Phase):
        return str(obj.turns) if obj.exact else [obj.value.real, obj.value.imag]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (Path, BoundaryPath, Bisection, GroupoidElement, TwistElement, Cyclotomic)):
        return str(obj)
    if isinstance(obj, dict) or hasattr(obj, "items"):
        items = sorted(obj.items(), key=lambda kv: sort_key(kv[0]))
        return {str(jsonable(k)): jsonable(v) for k, v in items}
    if isinstance(obj, (set, frozenset)):
        return [jsonable(x) for x in sorted_ids(obj)]
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if hasattr(obj, "values") and hasattr(obj, "graph"):
        return jsonable(obj.values)
    return str(obj)


class Emitter:
    """Collects records and writes them as JSON lines."""

    def __init__(self, out: TextIO) -> None:
        self.out = out
        self.failed = 0
        self.total = 0

    def record(self, check: str, instance: str, passed: bool, counterexample=None, **detail) -> None:
        self.total += 1
        self.failed += not passed
        rec = {
            "check": check,
            "instance": instance,
            "status": "pass" if passed else "fail",
            "counterexample": jsonable(counterexample),
            "detail": jsonable(detail),
        }
        self.out.write(json.dumps(rec, ensure_ascii=False) + "\n")

    def report(self, rep: Report, instance: str, prefix: str = "") -> None:
        for r in rep.results:
            self.record(prefix + r.check, instance, r.passed, r.counterexample, **r.detail)

    def error(self, kind: str, instance: str, message: str) -> None:
        rec = {"check": kind, "instance": instance, "status": "error", "counterexample": None, "detail": {"message": message}}
        self.out.write(json.dumps(rec, ensure_ascii=False) + "\n")


def _cocycle(inst: Instance) -> CoverCocycle:
    return inst.cocycle if inst.cocycle is not None else trivial_cocycle(inst.keys)


def _graph(inst: Instance) -> TopGraph:
    """The graph whose edges carry the cocycle."""
    return inst.system.as_graph() if inst.system is not None else inst.graph


# -- commands ----------------------------------------------------------------


def cmd_classify(inst: Instance, em: Emitter) -> None:
    c = inst.graph.classification
    em.record("classify", inst.id, True, None, sources=c.fin, sce=c.sce, rg=c.rg, sg=c.sg,
              vertices=len(inst.graph.vertices), edges=len(inst.graph.edges))


def _oracle_sweep(g: TopGraph, max_len: int) -> tuple:
    bad, count = None, 0
    for n in range(max_len + 1):
        for p in enumerate_paths(g, n):
            count += 1
            if is_boundary(g, p) != is_yeend_boundary(g, p, method="maximal") and bad is None:
                bad = p
    return bad, count


def cmd_boundary(inst: Instance, em: Emitter) -> None:
    g = inst.graph
    bset = boundary_path_set(g, None if g.is_acyclic else inst.option("bound"))
    em.record("boundary.listing", inst.id, True, None, complete=bset.complete, count=len(bset), paths=list(bset))
    bad, count = _oracle_sweep(g, inst.option("path_length"))
    em.record("boundary.oracle_agreement", inst.id, bad is None, bad, paths=count)


def cmd_groupoid(inst: Instance, em: Emitter) -> None:
    if inst.system is not None:
        sys = inst.system
        els = system_elements(sys, inst.options.get("max_shift"))
        em.record("groupoid.elements", inst.id, True, None, count=len(els), elements=els)
        em.report(check_groupoid_axioms(sys, els), inst.id, "groupoid.")
        return
    g = inst.graph
    if g.is_acyclic:
        gs = boundary_groupoid_elements(g)
        em.record("groupoid.elements", inst.id, True, None, complete=gs.complete, count=len(gs), elements=gs.elements)
        em.report(check_groupoid_axioms(shift_system(g), gs.elements), inst.id, "groupoid.")
        return
    bound = inst.option("bound")
    paths = [p for n in range(bound + 1) for p in enumerate_paths(g, n)]
    bis = [Bisection(mu, nu) for mu in paths for nu in paths if mu.source == nu.source]
    em.record("groupoid.bisections", inst.id, True, None, complete=False, bound=bound, count=len(bis))


def _twist_context(inst: Instance, c: CoverCocycle):
    if inst.system is not None:
        return build_twist(inst.system, c)
    sys = shift_system(inst.graph)
    return build_twist(sys, c, key=lambda x: x.head.edges[0])


def cmd_twist_verify(inst: Instance, em: Emitter) -> None:
    c = _cocycle(inst)
    rep = validate_cocycle(c)
    em.report(rep, inst.id, "cocycle.")
    if not rep.passed:
        return
    ctx = _twist_context(inst, c)
    arrows = system_elements(ctx.system, inst.options.get("max_shift"))
    rep = verify_twist_axioms(ctx, arrows)
    em.report(Report([r for r in rep.results if not r.check.startswith("cocycle.")]), inst.id, "twist.")
    em.report(check_chart_changes(ctx, arrows), inst.id, "chart_change.")
    triple = check_associativity(ctx, associativity_elements(ctx, arrows))
    em.record("twist.associativity", inst.id, triple is None, triple, arrows=len(arrows))


def cmd_relations(inst: Instance, em: Emitter) -> None:
    alg = BisectionAlgebra(_graph(inst), _cocycle(inst))
    em.report(check_toeplitz(alg), inst.id, "toeplitz.")
    em.report(check_covariance(alg), inst.id)
    em.report(check_grading(alg), inst.id, "grading.")


def cmd_iso(inst: Instance, em: Emitter) -> None:
    g = _graph(inst)
    rep = verify_main_isomorphism(g, _cocycle(inst), inst.option("bound"))
    em.report(rep, inst.id, "iso.")
    if g.is_acyclic:
        d = rep["dimension"].detail
        n = d["representation"]
        em.record("iso.matrix_model", inst.id, rep.passed, None,
                  cuntz_pimsner=f"{n}x{n}", groupoid=[f"{b}x{b}" for b in d["blocks"]])


def cmd_factor(inst: Instance, em: Emitter) -> None:
    # factor maps live on the graph; a cocycle over a system's domain does not apply
    c = _cocycle(inst) if inst.system is None else trivial_cocycle(inst.graph.edges)
    cocycles = {"graph": c}
    maps = {m.id: m for m in inst.factor_maps}
    if not maps:
        em.record("factor.maps", inst.id, True, None, count=0)
        return
    for nm in inst.factor_maps:
        fm, tag = nm.map, f"factor.{nm.id}."
        valid = validate_factor_map(fm)
        em.report(valid, inst.id, tag)
        if not valid.passed:
            continue
        reg = is_regular(fm)
        em.record(tag + "regular", inst.id, reg.regular and reg.agree, reg.witness,
                  singular_to_singular=reg.singular_to_singular,
                  preimage_of_regular=reg.preimage_of_regular, ranges_nonempty=reg.ranges_nonempty)
        base = cocycles[nm.target]
        cocycles[nm.id] = pullback(base, fm.m1)
        if reg.regular and fm.source.is_acyclic and fm.target.is_acyclic:
            em.report(check_induced_hom(fm, base), inst.id, tag)
            if nm.target in maps:
                outer = maps[nm.target]
                em.report(check_functoriality(outer.map, fm, cocycles[outer.target]), inst.id,
                          f"factor.{outer.id}*{nm.id}.")


def cmd_corpus(seed: int, count: int, em: Emitter, family: int = 2) -> None:
    graphs = [(f"small_{i}", g) for i, g in enumerate(small_graphs(3, 4))]
    graphs += [(f"random_{seed}_{i}", g) for i, g in enumerate(random_graphs(seed, count, 4, 5))]
    for name, g in graphs:
        bad, n = _oracle_sweep(g, 4)
        em.record("boundary.oracle_agreement", name, bad is None, bad, paths=n)
        if not g.is_acyclic:
            continue
        for cname, c in cocycle_family(g.edges, seed)[:family]:
            rep = verify_main_isomorphism(g, c)
            em.record("iso", f"{name}/{cname}", rep.passed, [r.check for r in rep.failures()] or None,
                      dimension=rep["dimension"].detail["dimension"])


COMMANDS: dict[str, Callable[[Instance, Emitter], None]] = {
    "classify": cmd_classify,
    "boundary": cmd_boundary,
    "groupoid": cmd_groupoid,
    "twist-verify": cmd_twist_verify,
    "relations": cmd_relations,
    "iso": cmd_iso,
    "factor": cmd_factor,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twistgraph", description="Verify twisted graph algebra constructions on finite instances.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("instance", help="path to a JSON instance file")
        sp.add_argument("--bound", type=int, help="override the path bound for graphs with cycles")
    sp = sub.add_parser("corpus", help="sweep generated small graphs")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=20, help="number of seeded random graphs")
    return p


def run(argv: Iterable[str] | None = None, out: TextIO | None = None) -> int:
    args = build_parser().parse_args(None if argv is None else list(argv))
    em = Emitter(out or sys.stdout)
    if args.command == "corpus":
        cmd_corpus(args.seed, args.count, em)
        return EXIT_FAIL if em.failed else EXIT_OK
    ident = args.instance
    try:
        inst = load(args.instance)
        ident = inst.id
        if args.bound is not None:
            inst.options["bound"] = args.bound
        COMMANDS[args.command](inst, em)
    except ParseError as exc:
        em.error("parse", ident, str(exc))
        return EXIT_PARSE
    except (BoundExceeded, CyclicGraph) as exc:
        em.error("bound", ident, str(exc))
        return EXIT_BOUND
    return EXIT_FAIL if em.failed else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
