from __future__ import annotations

import random

from twistgraph.corpus import (
    FactorTriple,
    cocycle_family,
    coboundaries,
    factor_triples,
    homogeneous_pairs,
    random_cover_cocycle,
    random_graphs,
    sgds_instances,
)
from twistgraph.factor import is_regular, validate_factor_map
from twistgraph.twist import validate_cocycle


def test_sizes_and_determinism():
    assert len(sgds_instances(3)) == 21
    assert len(sgds_instances(1)) == 1
    assert [repr(g) for g in random_graphs(5, 10)] == [repr(g) for g in random_graphs(5, 10)]
    assert len(list(homogeneous_pairs(0, 20))) == 20


def test_cocycles_are_valid():
    for sys_ in sgds_instances(3):
        for name, c in cocycle_family(sys_.dom, 3):
            assert validate_cocycle(c).passed, name
    rng = random.Random(0)
    for _ in range(20):
        assert validate_cocycle(random_cover_cocycle("abcd", rng)).passed
    c = cocycle_family("ab", 0)[1][1]
    assert len(coboundaries(c, 0, 20)) == 20


def test_factor_triples():
    triples = factor_triples(0, 10)
    assert len(triples) == 10
    for t in triples:
        assert isinstance(t, FactorTriple)
        for fm in (t.m, t.n, t.composite):
            assert validate_factor_map(fm).passed and is_regular(fm).regular
    assert any(set(t.m.m0.values()) != set(t.m.target.vertices) for t in factor_triples(0, 50))
