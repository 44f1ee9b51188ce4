"""The operator identity suite, at reduced desk bounds.

The acceptance module reruns the same registry at the full bounds
(e <= 6 plain, e <= 4 hairy); here every identity runs at e <= 4 so the
whole file stays fast during development.
"""

import pytest

from gcohom.cli import identity_registry
from gcohom.complexes import enumerate_basis, fGC, fHGC
from gcohom.graphs import GradedSlice, LabeledGraph
from gcohom.homology import verify_identity
from gcohom.operators import (
    GraphVector,
    OperatorExpr,
    apply_expr,
    compose,
    op,
    scale,
)

REGISTRY = identity_registry(emax_plain=4, emax_hairy=3)


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_identity(name):
    _suite, lhs, rhs, spec, slices, method = REGISTRY[name]
    report = verify_identity(name, lhs, rhs, spec, slices, method=method)
    assert report.verified, report.as_dict()


def test_combined_differential_squares_zero():
    zero = OperatorExpr(())
    d = op("delta") + op("Delta")
    for n in (0, 1):
        spec = fHGC(n)
        slices = [GradedSlice(v, e, h)
                  for e in range(0, 3) for h in range(0, 4)
                  for v in range(1, 2 * e + h + 2)]
        rep = verify_identity("(d+Delta)^2", d @ d, zero, spec, slices,
                              method="matrices")
        assert rep.verified


def test_disconnected_prop_D2_counterexample():
    # the flower identity fails on (5-path) u sigma_2, as documented
    lhs = compose("D1", "Delta")
    rhs = scale(2, compose("nabla", "delta", "D2") + compose("nabla", "D2", "delta"))
    path5 = LabeledGraph(5, ((0, 1), (1, 2), (2, 3), (3, 4)), ())
    witness = LabeledGraph(6, path5.edges, (5, 5))
    gv = GraphVector.from_labeled(witness, 0)
    assert not gv.is_zero()
    assert apply_expr(lhs, gv) != apply_expr(rhs, gv)
    # and the registry-driven check on the disconnected complex finds it
    spec = fHGC(0, connectivity="disconnected_only")
    slices = [GradedSlice(6, 4, 2)]
    rep = verify_identity("prop-D2-disc", lhs, rhs, spec, slices)
    assert not rep.verified
    assert rep.witness is not None


def test_grading_signatures_respected_by_matrices():
    # every assembled matrix connects only slices related by the signature
    from gcohom.operators import SIGNATURES, assemble_matrix

    spec = fGC(0)
    for name, sigs in SIGNATURES.items():
        if name not in ("delta", "nabla", "D", "identity"):
            continue
        (sig,) = sigs
        src = GradedSlice(3, 2)
        tgt = GradedSlice(3 + sig[0], 2 + sig[1], sig[2])
        if tgt.v < 1 or tgt.e < 0 or tgt.h != 0:
            continue
        m = assemble_matrix(op(name), spec, src, spec, tgt)
        assert m.cols == len(enumerate_basis(spec, src))
        assert m.rows == len(enumerate_basis(spec, tgt))
