#!/usr/bin/env python3
"""Canonical graphs, orientation signs, and graded bases.

A generator of a graph complex is an isomorphism class of a multigraph
with hairs, modulo an orientation.  This walk-through builds a few labeled
graphs, canonicalizes them in both parities, and enumerates some graded
bases.
"""

from gcohom import GradedSlice, LabeledGraph, canonicalize, enumerate_basis
from gcohom import fGC, fGCc, fHGC

# A triangle, labeled two different ways.
tri = LabeledGraph(3, ((0, 1), (0, 2), (1, 2)))
tri_relabeled = LabeledGraph(3, ((2, 1), (0, 2), (1, 0)))

# In the even parity the triangle is a "zero graph": the reflection that
# fixes one vertex swaps the other two edges, an odd edge permutation.
print("triangle, parity 0:", canonicalize(tri, 0))

# In the odd parity it survives, and both labelings give the same
# canonical representative (possibly with a relative sign).
for g in (tri, tri_relabeled):
    cg, sign = canonicalize(g, 1)
    print("triangle, parity 1:", cg.encoding.hex(), "sign", sign)

# Parallel edges die in the even parity but can survive in the odd one:
theta = LabeledGraph(2, ((0, 1), (0, 1), (0, 1)))
print("theta graph, parity 0:", canonicalize(theta, 0))
print("theta graph, parity 1:", canonicalize(theta, 1)[0].encoding.hex())

# Graded bases: one canonical graph per nonzero class.
print()
print("plain even bases (v = e, loop order one):")
for e in range(1, 8):
    basis = enumerate_basis(fGC(0), GradedSlice(e, e))
    print("  v=e=%d: dim %d" % (e, len(basis)))

print("connected odd basis at (v=2, e=3):",
      [c.encoding.hex() for c in enumerate_basis(fGCc(1), GradedSlice(2, 3)).elements])

print("hairy even basis at (v=3, e=2, h=2): dim",
      len(enumerate_basis(fHGC(0), GradedSlice(3, 2, 2))))
