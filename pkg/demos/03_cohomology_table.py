#!/usr/bin/env python3
"""The even graph cohomology table.

Reproduces the dimension grid of H(fGC_0, delta) for e <= 8 and loop
grading -1 <= b <= 6: the only classes in range sit at (e=5, b=0) and
(e=6, b=2).  Expect a couple of minutes on first run; set GCOHOM_CACHE_DIR
to reuse the bases across runs.
"""

import time

from gcohom import GradedSlice, cohomology_at_slice, fGC, op

EMAX = 8

start = time.time()
delta = op("delta")
spec = fGC(0)

print("rows: b = e - v, columns: e")
print("b\\e " + " ".join("%3d" % e for e in range(EMAX + 1)))
for b in range(-1, 7):
    row = []
    for e in range(EMAX + 1):
        v = e - b
        if v < 1:
            row.append("  .")
            continue
        rep = cohomology_at_slice(spec, delta, GradedSlice(v, e))
        row.append("%3d" % rep.dim_h)
    print("%3d " % b + " ".join(row))
print("elapsed: %.1fs" % (time.time() - start))
