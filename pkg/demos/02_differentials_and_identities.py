#!/usr/bin/env python3
"""The operators and their algebra.

Applies the differentials to single generators and checks a few of the
operator identities exactly (the full machine-checked suite lives in the
tests and behind `gcohom verify`).
"""

from gcohom import GradedSlice, GraphVector, LabeledGraph, enumerate_basis
from gcohom import apply_expr, compose, op, verify_identity
from gcohom import fGC, fHGC

# delta on the one-vertex graph: splitting minus adding an edge leaves
# -1/2 times the single-edge graph.
sigma0 = GraphVector.from_labeled(LabeledGraph(1, ()), 0)
print("delta(point) =", apply_expr(op("delta"), sigma0))

# nabla adds an edge in all possible ways; on two isolated vertices each
# unordered pair is added twice.
two_points = GraphVector.from_labeled(LabeledGraph(2, ()), 0)
print("nabla(two points) =", apply_expr(op("nabla"), two_points))

# Deleting a vertex: on the single-edge graph both reconnections force a
# tadpole, so the result vanishes.
lam = GraphVector.from_labeled(LabeledGraph(2, ((0, 1),)), 0)
print("D(single edge) =", apply_expr(op("D"), lam))

# The commutator of the splitting differential with vertex deletion is
# exactly the edge-adding operator (even parity):
comm = compose("delta", "D") - compose("D", "delta")
slices = [GradedSlice(v, e) for e in range(0, 4) for v in range(1, e + 3)]
report = verify_identity("commutator", comm, op("nabla"), fGC(0), slices)
print("delta D - D delta = nabla on all slices with e <= 3:", report.verified)

# In the odd parity the same operators anticommute instead:
anti = compose("delta", "D") + compose("D", "delta")
from gcohom.operators import OperatorExpr
report = verify_identity("anticommutator", anti, OperatorExpr(()), fGC(1), slices)
print("delta D + D delta = 0 in the odd parity:", report.verified)

# The hair-to-edge operator Delta anticommutes with delta, so their sum is
# again a differential; check it squares to zero on a hairy sweep.
d = op("delta") + op("Delta")
hairy = [GradedSlice(v, e, h)
         for e in range(0, 3) for h in range(0, 3) for v in range(1, e + h + 2)]
for n in (0, 1):
    rep = verify_identity("square", d @ d, OperatorExpr(()), fHGC(n), hairy,
                          method="matrices")
    print("(delta + Delta)^2 = 0, parity %d:" % n, rep.verified)
