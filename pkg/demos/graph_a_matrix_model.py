"""Graph A (one edge e from w to v) and its 2x2 matrix model.

The boundary paths are ``w`` and ``e``.  Both lie in one shift orbit, so the
twisted groupoid algebra is a single 2x2 block, and the Cuntz-Pimsner side
agrees with it whatever cocycle the edge carries.
"""

from __future__ import annotations

from twistgraph.algebra import matrix_model, verify_main_isomorphism
from twistgraph.boundary import boundary_path_set
from twistgraph.corpus import cocycle_family, named_graphs
from twistgraph.groupoid import system_elements

A = named_graphs()["graph_A"]
print("classification:", A.classification)
print("boundary paths:", list(boundary_path_set(A)))

for name, c in cocycle_family(A.edges, 0):
    rep = verify_main_isomorphism(A, c)
    model = matrix_model(A, c)
    print(f"{name:>14}: blocks {model.block_sizes}, dimension {model.dimension}, "
          f"isomorphism {'ok' if rep.passed else 'FAILED'}")

# each arrow of the groupoid becomes a matrix unit, up to the phase on e
model = matrix_model(A, cocycle_family(A.edges, 0)[1][1])
for a in system_elements(model.alg.system):
    print(a, [[str(x) for x in row] for row in model.matrix(model.alg.basis(a))])
