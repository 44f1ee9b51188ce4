#!/usr/bin/env python3
"""The hairy complexes under the combined differential.

In each sector of fixed f = e + h - v, the connected at-least-trivalent
hairy complex has exactly one cohomology class in the even parity (the
one-vertex graph with three hairs, at f=2 in degree 1) and none at all in
the odd parity.
"""

from gcohom import HGC, cohomology_fd, op

combined = op("delta") + op("Delta")

print("even parity (classes of H(HGC_{-1,0}, delta + Delta)):")
for f in (1, 2, 3):
    for d in (1, 2, 3, 4):
        rep = cohomology_fd(HGC(0), combined, f, d)
        mark = "  <- the 3-star class" if rep.dim_h else ""
        print("  f=%d d=%d: dim %2d  H %d%s" % (f, d, rep.dim_space, rep.dim_h, mark))

print()
print("odd parity (acyclicity of H(HGC_{-1,1}, delta + Delta)):")
total = 0
for f in range(0, 6):
    for d in range(1, 7 - f):
        rep = cohomology_fd(HGC(1), combined, f, d)
        total += rep.dim_h
print("  total cohomology over all sectors with e <= 5:", total)
