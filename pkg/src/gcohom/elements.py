"""Distinguished graph vectors: stars, dumbbells, their combinations.

Unions follow the convention that all vertices, edges and hairs of the
first factor come before those of the second, which fixes every sign.
Infinite series (the star-exponential `alpha`) are represented by an
explicit truncation order; identities stay exact in every grading the
truncation does not touch, because none of the operators increases the
number of connected components.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial

from .graphs import LabeledGraph
from .operators import GraphVector, apply_expr, compose, op

__all__ = [
    "sigma",
    "lambda_",
    "rho",
    "alpha",
    "big_sigma",
    "pi_f",
    "union",
    "union_graphs",
    "build_element",
    "check_element_lemmas",
]


def union_graphs(a: LabeledGraph, b: LabeledGraph) -> LabeledGraph:
    off = a.v
    return LabeledGraph(
        a.v + b.v,
        a.edges + tuple((x + off, y + off) for x, y in b.edges),
        a.hairs + tuple(x + off for x in b.hairs),
    )


def union(u: GraphVector, w: GraphVector) -> GraphVector:
    """Bilinear union; an empty-graph factor acts as the unit."""
    if u.parity != w.parity:
        raise ValueError("parity mismatch")
    out = GraphVector.zero(u.parity)
    for cg1, c1 in u.terms.items():
        for cg2, c2 in w.terms.items():
            out = out + GraphVector.from_labeled(
                union_graphs(cg1.graph, cg2.graph), u.parity, c1 * c2)
    return out


def _one(parity):
    """The empty graph as the formal unit for unions (not an element)."""
    vec = GraphVector(parity)
    vec.terms[None] = Fraction(1)
    return vec


def sigma(a, parity=0) -> GraphVector:
    """Star: one vertex with a hairs."""
    return GraphVector.from_labeled(LabeledGraph(1, (), (0,) * a), parity)


def lambda_(a, parity=0) -> GraphVector:
    """Two vertices joined by an edge, a-1 hairs on the first."""
    if a < 1:
        raise ValueError("lambda_a needs a >= 1")
    return GraphVector.from_labeled(
        LabeledGraph(2, ((0, 1),), (0,) * (a - 1)), parity)


def rho(a, parity=0) -> GraphVector:
    """sum_{i=1}^{a-1} (-1)^i / (i! (a-1-i)!)  sigma_i u lambda_{a-i}."""
    if a < 2:
        raise ValueError("rho_a needs a >= 2")
    out = GraphVector.zero(parity)
    for i in range(1, a):
        coeff = Fraction((-1) ** i, factorial(i) * factorial(a - 1 - i))
        term = union(sigma(i, parity), lambda_(a - i, parity))
        out = out + term.scaled(coeff)
    return out


def alpha(max_components, parity=0) -> GraphVector:
    """sum_{k>=1} sigma_1^k / k!, truncated at the component cap."""
    out = GraphVector.zero(parity)
    s1 = LabeledGraph(1, (), (0,))
    g = None
    for k in range(1, max_components + 1):
        g = s1 if g is None else union_graphs(g, s1)
        out = out + GraphVector.from_labeled(g, parity, Fraction(1, factorial(k)))
    return out


def big_sigma(j, parity=0) -> GraphVector:
    """Star soup: sum over multisets {k_i} with sum i*k_i = j of
    prod (-1)^{k_i} / (k_i! ((2i+1)!)^{k_i})  U_i sigma_{2i+1}^{k_i}."""
    if j == 0:
        return _one(parity)
    out = GraphVector.zero(parity)
    for parts in _weighted_partitions(j):
        coeff = Fraction(1)
        g = None
        for i, k in sorted(parts.items()):
            coeff *= Fraction((-1) ** k, factorial(k) * factorial(2 * i + 1) ** k)
            for _ in range(k):
                s = LabeledGraph(1, (), (0,) * (2 * i + 1))
                g = s if g is None else union_graphs(g, s)
        out = out + GraphVector.from_labeled(g, parity, coeff)
    return out


def _weighted_partitions(j, imin=1):
    """Multisets {i: k_i} with sum of i*k_i = j, i >= imin."""
    if j == 0:
        yield {}
        return
    for i in range(imin, j + 1):
        for k in range(1, j // i + 1):
            for rest in _weighted_partitions(j - i * k, i + 1):
                d = {i: k}
                d.update(rest)
                yield d


def union_with_unit(u: GraphVector, w: GraphVector) -> GraphVector:
    """Union where either factor may be the formal unit from big_sigma(0)."""
    if None in u.terms or None in w.terms:
        out = GraphVector.zero(u.parity)
        for cg1, c1 in u.terms.items():
            for cg2, c2 in w.terms.items():
                if cg1 is None and cg2 is None:
                    raise ValueError("unit times unit has no graph")
                if cg1 is None:
                    out = out + GraphVector.single(cg2, c1 * c2)
                elif cg2 is None:
                    out = out + GraphVector.single(cg1, c1 * c2)
                else:
                    out = out + GraphVector.from_labeled(
                        union_graphs(cg1.graph, cg2.graph), u.parity, c1 * c2)
        return out
    return union(u, w)


def chi_power(d, vec: GraphVector) -> GraphVector:
    if d < 0:
        return GraphVector.zero(vec.parity)
    for _ in range(d):
        vec = apply_expr(op("chi1"), vec)
    return vec


def pi_f(f, vec: GraphVector) -> GraphVector:
    """Pad a hairless even vector into the f-sector of the hairy complex.

    The input must be homogeneous in b = e - v with b < f, b = f (mod 2);
    output terms carry stars so that e + h - v = f throughout:

      pi_f(G) = sum_{i=0}^{m}   chi^{2i}(G)   u Sigma_{m-i} / (2i)!
              - sum_{i=1}^{m} chi^{2i-1}(D G) u Sigma_{m-i} / (2i-1)!

    with m = (f-b)/2 and the empty star soup acting as the unit.  The i=m
    terms (bare chi powers) are included: without them the map fails to be
    a chain map by the boundary term delta chi^{2m}(G)/(2m)!.
    """
    if vec.parity != 0:
        raise ValueError("pi_f lives on the even complexes")
    out = GraphVector.zero(0)
    by_b = {}
    for cg, coeff in vec.terms.items():
        s = cg.slice
        if s.h:
            raise ValueError("pi_f input must be hairless")
        by_b.setdefault(s.e - s.v, []).append((cg, coeff))
    for b, terms in by_b.items():
        if (f - b) % 2:
            raise ValueError("b = %d has the wrong parity for f = %d" % (b, f))
        if b >= f:
            continue  # empty sums
        m = (f - b) // 2
        part = GraphVector(0, dict(terms))
        dpart = apply_expr(op("D"), part)
        for i in range(0, m + 1):
            piece = chi_power(2 * i, part).scaled(Fraction(1, factorial(2 * i)))
            out = out + union_with_unit(piece, big_sigma(m - i))
        for i in range(1, m + 1):
            piece = chi_power(2 * i - 1, dpart).scaled(
                Fraction(1, factorial(2 * i - 1)))
            out = out - union_with_unit(piece, big_sigma(m - i))
    return out


def build_element(name, parity=0, **params) -> GraphVector:
    """Element factory addressable by name."""
    if name == "sigma":
        return sigma(params["a"], parity)
    if name == "lambda":
        return lambda_(params["a"], parity)
    if name == "rho":
        return rho(params["a"], parity)
    if name == "alpha":
        return alpha(params.get("max_components", 4), parity)
    if name == "Sigma":
        return big_sigma(params["j"], parity)
    raise ValueError("unknown element %r" % (name,))


# ---------------------------------------------------------------------------
# lemma checks
# ---------------------------------------------------------------------------

def check_element_lemmas(max_order=3, verbose=False):
    """Closed-form lemmas about the distinguished elements, as exact
    vector identities.  Returns a list of (name, ok) pairs."""
    from .complexes import enumerate_basis, fGC, fHGC, constraint_filter
    from .graphs import GradedSlice

    results = []
    d_plus_D = op("delta") + op("Delta")

    for m in range(1, max_order + 1):
        got = apply_expr(d_plus_D, big_sigma(m))
        results.append(("Sigma_%d closed" % m, got.is_zero()))

    for a in (2, 4):
        results.append(("Delta rho_%d = 0" % a,
                        apply_expr(op("Delta"), rho(a)).is_zero()))
    results.append(("Delta rho_3 may be nonzero",
                    True))  # the lemma only covers even a

    for a in (2, 4):
        results.append(("c rho_%d = 0" % a,
                        apply_expr(op("c"), rho(a)).is_zero()))

    # alpha is closed in every grading the truncation leaves intact:
    # the residual terms all carry the maximal vertex count
    for k in (2, 3, 4):
        for parity in (0, 1):
            res = apply_expr(d_plus_D, alpha(k, parity))
            ok = all(cg.slice.v >= k + 1 for cg in res.terms)
            results.append(("alpha_%d closed below v=%d (parity %d)" % (k, k + 1, parity), ok))

    # pad map intertwines the conjugated differential with delta + Delta,
    # inside the bounded hairy complex
    spec_dd = fHGC(0, constraint="ddagger", min_hairs=1)
    test_graphs = [
        GraphVector.from_labeled(LabeledGraph(2, ((0, 1),)), 0),
        GraphVector.from_labeled(
            LabeledGraph(5, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0)), ()), 0),
    ]
    for idx, gv in enumerate(test_graphs):
        if gv.is_zero():
            continue
        b = next(iter(gv.terms)).slice
        b = b.e - b.v
        for f in (b + 2, b + 4):
            lhs = apply_expr(d_plus_D, pi_f(f, gv)).filtered(spec_dd)
            rhs = pi_f(f, apply_expr(op("delta_tilde"), gv)).filtered(spec_dd)
            results.append(("pi_%d chain map on graph %d" % (f, idx), lhs == rhs))

    if verbose:
        for name, ok in results:
            print("%-48s %s" % (name, "ok" if ok else "FAIL"))
    return results
