#!/usr/bin/env python3
"""Distinguished graph vectors and their closed-form properties.

Stars, dumbbells, the rho combinations, the star exponential alpha, the
star soups Sigma_j, and the padding maps pi_f.
"""

from gcohom import GraphVector, LabeledGraph
from gcohom import alpha, apply_expr, big_sigma, op, pi_f, rho

d_plus_D = op("delta") + op("Delta")

# Sigma_3 is a three-term combination of unions of odd stars whose
# coefficients divide out the symmetries; it is closed for the combined
# differential.
s3 = big_sigma(3)
print("Sigma_3 terms:")
for cg, coeff in sorted(s3.terms.items(), key=lambda kv: kv[0].sort_key()):
    print("   %-8s x (v=%d, hairs per vertex %s)" % (coeff, cg.v, cg.hair_counts))
print("(delta + Delta) Sigma_3 == 0:", apply_expr(d_plus_D, s3).is_zero())

# rho_a is killed by the hair-to-edge operator for even a.
for a in (2, 3, 4):
    res = apply_expr(op("Delta"), rho(a))
    print("Delta(rho_%d) == 0:" % a, res.is_zero())

# The star exponential is closed in every grading its truncation covers:
# the boundary of the k-fold truncation lives above v = k.
for parity in (0, 1):
    res = apply_expr(d_plus_D, alpha(4, parity))
    print("parity %d: boundary of alpha_4 lives at v >= 5:" % parity,
          all(cg.slice.v >= 5 for cg in res.terms))

# pi_f pads a hairless even vector with star soups into the f-sector, and
# intertwines the conjugated differential with delta + Delta.
lam = GraphVector.from_labeled(LabeledGraph(2, ((0, 1),)), 0)
padded = pi_f(3, lam)
print("pi_3(single edge): %d terms across slices %s"
      % (len(padded), [tuple(s) for s in padded.slices()]))
lhs = apply_expr(d_plus_D, padded)
rhs = pi_f(3, apply_expr(op("delta_tilde"), lam))
print("chain map property:", lhs == rhs)
