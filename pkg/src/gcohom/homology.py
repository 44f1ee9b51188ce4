"""Cohomology dimensions, operator-identity verification, Euler checks.

Gradings: single-signature differentials act along chains of slices (the
successor slice is the slice plus the signature); the two-term differential
(vertex splitting plus hair-to-edge) preserves f = e + h - v and is handled
degree by degree inside one f-sector, with the finite set of contributing
slices determined by the complex's constraints.  The finiteness guard
rejects complexes where that slice set is provably infinite (one-hair star
components can be padded indefinitely).
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import ComplexSpec, degree, enumerate_basis
from .graphs import GradedSlice
from .linalg import SparseMatrix, image_basis, rank
from .operators import (
    GraphVector,
    OperatorExpr,
    apply_expr,
    assemble_matrix,
    expr_signatures,
    op,
)

__all__ = [
    "CohomologyReport",
    "cohomology_dim",
    "IdentityReport",
    "cohomology_at_slice",
    "cohomology_fd",
    "slices_for_fd",
    "verify_identity",
    "euler_check_chain",
    "euler_check_fd",
    "hl_basis",
    "hflat_delta_cohomology",
    "InfiniteSliceSet",
]


class InfiniteSliceSet(ValueError):
    """The requested grading has infinitely many contributing slices."""


@dataclass
class CohomologyReport:
    spec: ComplexSpec
    grading: tuple
    differential: str
    dim_space: int
    rank_in: int
    rank_out: int
    degree: int = None

    @property
    def dim_h(self):
        return self.dim_space - self.rank_in - self.rank_out

    def __post_init__(self):
        if self.dim_h < 0:
            raise AssertionError("negative cohomology dimension: %r" % (self,))

    def as_dict(self):
        return {
            "complex": self.spec.cache_key(),
            "grading": list(self.grading),
            "degree": self.degree,
            "differential": self.differential,
            "dim": self.dim_space,
            "rank_in": self.rank_in,
            "rank_out": self.rank_out,
            "H": self.dim_h,
        }


@dataclass
class IdentityReport:
    name: str
    lhs: OperatorExpr
    rhs: OperatorExpr
    spec: ComplexSpec
    slices: tuple
    verified: bool
    witness: tuple = None  # (slice, column index, encoding) on failure

    def as_dict(self):
        out = {
            "identity": self.name,
            "complex": self.spec.cache_key(),
            "slices": [list(s) for s in self.slices],
            "status": "verified" if self.verified else "failed",
        }
        if self.witness is not None:
            s, j, enc = self.witness
            out["witness"] = {"slice": list(s), "column": j, "encoding": enc.hex()}
        return out


def _shift(s: GradedSlice, sig):
    return GradedSlice(s.v + sig[0], s.e + sig[1], s.h + sig[2])


def _matrix_between(expr, spec, sources, targets):
    """Block matrix of expr between two lists of slices of one complex."""
    src_bases = [enumerate_basis(spec, s) for s in sources]
    tgt_bases = [enumerate_basis(spec, s) for s in targets]
    col_off = {}
    off = 0
    for s, b in zip(sources, src_bases):
        col_off[s] = off
        off += len(b)
    ncols = off
    row_off = {}
    off = 0
    tgt_index = {}
    for s, b in zip(targets, tgt_bases):
        row_off[s] = off
        tgt_index[s] = b
        off += len(b)
    nrows = off
    entries = {}
    for s, b in zip(sources, src_bases):
        c0 = col_off[s]
        for j, cg in enumerate(b.elements):
            image = apply_expr(expr, GraphVector.single(cg)).filtered(spec)
            for tg, coeff in image.terms.items():
                ts = tg.slice
                if ts not in row_off:
                    continue
                i = tgt_index[ts].index.get(tg)
                if i is None:
                    raise AssertionError("image outside enumerated basis")
                entries[(row_off[ts] + i, c0 + j)] = coeff
    return SparseMatrix(nrows, ncols, entries)


def cohomology_at_slice(spec: ComplexSpec, expr: OperatorExpr, s: GradedSlice,
                        name=None, seed=None) -> CohomologyReport:
    """dim ker(out) - rank(in) at one slice of a single-signature chain."""
    sigs = expr_signatures(expr)
    if len(sigs) != 1:
        raise ValueError("slice chains need a single-signature operator")
    (sig,) = sigs
    here = enumerate_basis(spec, s)
    prev = _shift(s, tuple(-x for x in sig))
    rank_in = 0
    if prev.v >= 1 and prev.e >= 0 and prev.h >= 0:
        if len(enumerate_basis(spec, prev)):
            rank_in = rank(_matrix_between(expr, spec, [prev], [s]), seed=seed)
    nxt = _shift(s, sig)
    rank_out = 0
    if nxt.v >= 1 and nxt.e >= 0 and nxt.h >= 0 and len(here):
        if len(enumerate_basis(spec, nxt)):
            rank_out = rank(_matrix_between(expr, spec, [s], [nxt]), seed=seed)
    return CohomologyReport(spec, ("slice",) + tuple(s), name or str(expr),
                            len(here), rank_in, rank_out,
                            degree=degree(spec, s))


# ---------------------------------------------------------------------------
# the f = e + h - v grading for the combined differential
# ---------------------------------------------------------------------------

def _v_bound(spec: ComplexSpec, e, f):
    """Upper bound for the vertex count of nonempty slices at fixed (e, f),
    or None when unbounded.

    At fixed f the hair count is h = v + f - e, so bounding v bounds
    everything.  Connectivity bounds v by e + 1; minimal valence >= 2 gives
    2e + h >= 2v; forbidding one-hair stars and one-hair dumbbells bounds
    the number of edge-free components.
    """
    if spec.connectivity == "connected":
        return max(e + 1, 1)
    if spec.min_valence >= 2:
        return max(e + f, 0)
    if spec.all_components_forbidden:
        # components are sigma_1 (v=1,e=0) or lambda_2 (v=2,e=1)
        return max(f + 2 * e, 0) + 2
    if "sigma1" in spec.forbidden_tags() and spec.min_valence >= 1:
        # every edge-free component is a star with >= 2 hairs and adds at
        # least 1 to f - e; components with edges satisfy v_c <= e_c + 1
        return max(f + e, 0) + 2 * e
    return None


def slices_for_fd(spec: ComplexSpec, f, d):
    """Contributing slices of the f-sector at cohomological degree d."""
    if spec.kind != "hairy":
        raise ValueError("the f grading lives on hairy complexes")
    n = spec.n
    e = d - 1 + n * f
    if e < 0:
        return []
    bound = _v_bound(spec, e, f)
    if bound is None:
        raise InfiniteSliceSet(
            "unbounded slice family for %s at f=%d" % (spec.cache_key(), f))
    out = []
    for v in range(1, bound + 1):
        h = v + f - e
        if h < 0 or h < spec.min_hairs:
            continue
        s = GradedSlice(v, e, h)
        if degree(spec, s) != d:
            raise AssertionError("degree bookkeeping is off")
        if len(enumerate_basis(spec, s)):
            out.append(s)
    return out


def cohomology_fd(spec: ComplexSpec, expr: OperatorExpr, f, d,
                  name=None, seed=None) -> CohomologyReport:
    """Cohomology dimension of one f-sector at degree d.

    The differential must preserve f and raise the degree by one, which is
    checked against its signatures.
    """
    for (dv, de, dh) in expr_signatures(expr):
        if de + dh - dv != 0:
            raise ValueError("operator does not preserve f = e + h - v")
    here = slices_for_fd(spec, f, d)
    below = slices_for_fd(spec, f, d - 1)
    above = slices_for_fd(spec, f, d + 1)
    dim = sum(len(enumerate_basis(spec, s)) for s in here)
    rank_in = rank_out = 0
    if below and here:
        rank_in = rank(_matrix_between(expr, spec, below, here), seed=seed)
    if here and above:
        rank_out = rank(_matrix_between(expr, spec, here, above), seed=seed)
    return CohomologyReport(spec, ("f", f, "degree", d), name or str(expr),
                            dim, rank_in, rank_out, degree=d)


def cohomology_dim(spec: ComplexSpec, expr: OperatorExpr, grading,
                   name=None, seed=None) -> CohomologyReport:
    """Dispatcher: a GradedSlice runs the slice-chain computation, a pair
    (f, degree) runs the sector computation."""
    if isinstance(grading, GradedSlice):
        return cohomology_at_slice(spec, expr, grading, name=name, seed=seed)
    if isinstance(grading, tuple) and len(grading) == 2:
        f, d = grading
        return cohomology_fd(spec, expr, f, d, name=name, seed=seed)
    raise ValueError("grading must be a GradedSlice or an (f, degree) pair")


# ---------------------------------------------------------------------------
# identity verification
# ---------------------------------------------------------------------------

def verify_identity(name, lhs: OperatorExpr, rhs: OperatorExpr,
                    spec: ComplexSpec, slices, method="vectors") -> IdentityReport:
    """Exact equality of two operators on every generator of the slices.

    ``method="vectors"`` applies both sides per generator without target
    projection (always faithful, but composites blow up on big slices);
    ``method="matrices"`` composes per-slice matrices through the complex's
    own bases, which is fast and equivalent whenever the complex is closed
    under every factor.  The first disagreement is reported with a witness.
    """
    slices = tuple(slices)
    if method == "matrices":
        return _verify_identity_matrices(name, lhs, rhs, spec, slices)
    for s in slices:
        basis = enumerate_basis(spec, s)
        for j, cg in enumerate(basis.elements):
            gv = GraphVector.single(cg)
            if apply_expr(lhs, gv) != apply_expr(rhs, gv):
                return IdentityReport(name, lhs, rhs, spec, slices, False,
                                      witness=(s, j, cg.encoding))
    return IdentityReport(name, lhs, rhs, spec, slices, True)


def _part_matrices(expr: OperatorExpr, spec, s: GradedSlice):
    """Per-target-slice matrices of an expression, factor-composed."""
    from .operators import composed_matrix

    out = {}
    for coeff, names in expr.parts:
        m, tgt = composed_matrix(names, spec, s)
        if m.rows == 0:
            continue
        m = m.scaled(coeff)
        if tgt in out:
            out[tgt] = out[tgt] + m
        else:
            out[tgt] = m
    return out


def _verify_identity_matrices(name, lhs, rhs, spec, slices):
    for s in slices:
        basis = enumerate_basis(spec, s)
        if not len(basis):
            continue
        left = _part_matrices(lhs, spec, s)
        right = _part_matrices(rhs, spec, s)
        for tgt in set(left) | set(right):
            ml = left.get(tgt)
            mr = right.get(tgt)
            if ml is None:
                ml = SparseMatrix(mr.rows, mr.cols)
            if mr is None:
                mr = SparseMatrix(ml.rows, ml.cols)
            diff = ml - mr
            if not diff.is_zero():
                j = min(c for (_r, c) in diff.entries)
                return IdentityReport(name, lhs, rhs, spec, slices, False,
                                      witness=(s, j, basis.elements[j].encoding))
    return IdentityReport(name, lhs, rhs, spec, slices, True)


# ---------------------------------------------------------------------------
# Euler characteristic
# ---------------------------------------------------------------------------

def euler_check_chain(spec, expr, chain_slices, seed=None):
    """Alternating dimension sum vs alternating cohomology sum.

    The chain is a consecutive list of slices; the boundary ranks into the
    first and out of the last slice are included, making the identity
    exact for any finite window:
      sum (-1)^i h_i = sum (-1)^i dim_i - r_in(0) - (-1)^N r_out(N).
    """
    reports = [cohomology_at_slice(spec, expr, s, seed=seed) for s in chain_slices]
    n = len(reports) - 1
    lhs = sum((-1) ** i * r.dim_h for i, r in enumerate(reports))
    rhs = sum((-1) ** i * r.dim_space for i, r in enumerate(reports))
    rhs -= reports[0].rank_in
    rhs -= (-1) ** n * reports[n].rank_out
    return lhs == rhs, reports


def euler_check_fd(spec, expr, f, degrees, seed=None):
    reports = [cohomology_fd(spec, expr, f, d, seed=seed) for d in degrees]
    n = len(reports) - 1
    lhs = sum((-1) ** i * r.dim_h for i, r in enumerate(reports))
    rhs = sum((-1) ** i * r.dim_space for i, r in enumerate(reports))
    rhs -= reports[0].rank_in
    rhs -= (-1) ** n * reports[n].rank_out
    return lhs == rhs, reports


# ---------------------------------------------------------------------------
# image subspaces (the hairless replacement blocks)
# ---------------------------------------------------------------------------

def hl_basis(n, s: GradedSlice, dagger=False):
    """Basis of the image of the hair-to-edge map inside the hairless part.

    For the even complex this is Delta(H^1 ...) at the slice with one more
    hair and one less edge; the vectors are returned as GraphVectors on the
    hairless slice s.
    """
    from .complexes import fHGC

    spec = fHGC(n, constraint="dagger" if dagger else "none")
    src = GradedSlice(s.v, s.e - 1, 1)
    if src.e < 0:
        return []
    m = _matrix_between(op("Delta"), spec, [src], [s])
    tgt = enumerate_basis(spec, s)
    vecs = []
    for col in image_basis(m):
        gv = GraphVector(n)
        for r, val in col.items():
            gv = gv + GraphVector.single(tgt.elements[r]).scaled(val)
        vecs.append(gv)
    return vecs


def hflat_delta_cohomology(n, a, v, seed=None):
    """Hair-to-edge cohomology of the complex whose hairless part is
    replaced by the image block, at fixed total a = e + h and v vertices.

    Returns {h: dim} over the hair degrees of the chain.
    """
    from .complexes import fHGC

    spec = fHGC(n)
    slices = []
    for h in range(a, 0, -1):
        e = a - h
        if e < 0:
            continue
        slices.append(GradedSlice(v, e, h))
    hl = hl_basis(n, GradedSlice(v, a, 0))
    bases = [enumerate_basis(spec, s) for s in slices]
    mats = []
    for i in range(len(slices) - 1):
        mats.append(_matrix_between(op("Delta"), spec, [slices[i]], [slices[i + 1]]))
    # final block maps H^1 onto the image subspace, so its rank in HL
    # coordinates is the rank of the plain H^1 -> H^0 matrix
    last = _matrix_between(op("Delta"), spec, [slices[-1]], [GradedSlice(v, a, 0)]) \
        if slices else None
    ranks = [rank(m, seed=seed) for m in mats]
    rank_last = rank(last, seed=seed) if last is not None else 0
    out = {}
    for i, s in enumerate(slices):
        r_out = ranks[i] if i < len(mats) else rank_last
        r_in = ranks[i - 1] if i > 0 else 0
        out[s.h] = len(bases[i]) - r_in - r_out
    # the replaced hairless spot is exact by construction
    out[0] = len(hl) - rank_last
    return out
