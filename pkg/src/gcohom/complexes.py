"""Graph complexes: which graphs span them, gradings, and basis enumeration.

A `ComplexSpec` pins down one complex: plain or hairy, the parity, the
minimal valence, an optional extra constraint, a connectivity mode and a
quotient mode.  `enumerate_basis` lists the canonical generators of one
graded piece (fixed vertex/edge/hair counts), one per nonzero isomorphism
class, in a deterministic order.

Bases of disconnected slices are assembled as multisets of connected
classes; a repeated component is dropped when swapping two copies reverses
the orientation (odd edge count in parity 0; odd vertex+hair count in
parity 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .graphs import (
    CanonicalGraph,
    GradedSlice,
    LabeledGraph,
    canonical_form,
    canonicalize,
    graph_components,
)

__all__ = [
    "ComplexSpec",
    "Basis",
    "degree",
    "component_split",
    "component_tag",
    "constraint_filter",
    "enumerate_basis",
    "connected_classes",
    "fGC",
    "fGCc",
    "fHGC",
    "fHGCc",
    "HGC",
    "UR",
]

CONSTRAINTS = ("none", "dagger", "ddagger", "dagger_ddagger", "star")
CONNECTIVITY = ("all", "connected", "disconnected_only")
QUOTIENTS = ("none", "must_contain_forbidden")

# forbidden small components, keyed by (v, e, h) of the component
TAG_BY_SHAPE = {
    (1, 0, 0): "sigma0",
    (1, 0, 1): "sigma1",
    (2, 1, 0): "lambda1",
    (2, 1, 1): "lambda2",
}


@dataclass(frozen=True)
class ComplexSpec:
    """Identifies one graph complex.

    ``min_hairs`` restricts to graphs with at least that many hairs (the
    hair-free part is cut off for the geometrically relevant complexes);
    ``all_components_forbidden`` carves out the remainder complex whose
    components are all one-hair stars or one-hair dumbbells.
    """

    kind: str  # "plain" | "hairy"
    n: int  # parity, 0 or 1
    min_valence: int = 0
    constraint: str = "none"
    connectivity: str = "all"
    quotient: str = "none"
    all_components_forbidden: bool = False
    min_hairs: int = 0

    def __post_init__(self):
        if self.kind not in ("plain", "hairy"):
            raise ValueError("kind must be plain or hairy")
        if self.n not in (0, 1):
            raise ValueError("parity must be 0 or 1")
        if self.min_valence not in (0, 1, 2, 3):
            raise ValueError("min_valence must be 0..3")
        if self.constraint not in CONSTRAINTS:
            raise ValueError("unknown constraint %r" % (self.constraint,))
        if self.connectivity not in CONNECTIVITY:
            raise ValueError("unknown connectivity %r" % (self.connectivity,))
        if self.quotient not in QUOTIENTS:
            raise ValueError("unknown quotient mode %r" % (self.quotient,))
        if self.constraint == "star" and self.min_valence < 2:
            raise ValueError("star constraint requires min_valence >= 2")
        if self.kind == "plain" and (self.constraint not in ("none",) or self.min_hairs):
            raise ValueError("hair constraints only make sense for hairy complexes")

    @property
    def parity(self):
        return self.n

    def forbidden_tags(self):
        if self.constraint == "dagger":
            return ("lambda1",)
        if self.constraint == "ddagger":
            return ("sigma1", "lambda2")
        if self.constraint == "dagger_ddagger":
            return ("lambda1", "sigma1", "lambda2")
        return ()

    def cache_key(self):
        return "%s_n%d_val%d_%s_%s_%s%s%s" % (
            self.kind,
            self.n,
            self.min_valence,
            self.constraint,
            self.connectivity,
            self.quotient,
            "_allforb" if self.all_components_forbidden else "",
            ("_h%d" % self.min_hairs) if self.min_hairs else "",
        )


def fGC(n, min_valence=0, connectivity="all"):
    """Full plain graph complex (default valence >= 0)."""
    return ComplexSpec("plain", n, min_valence, connectivity=connectivity)


def fGCc(n, min_valence=0):
    return fGC(n, min_valence, connectivity="connected")


def fHGC(n, min_valence=1, constraint="none", connectivity="all", min_hairs=0):
    """Full hairy graph complex (default valence >= 1)."""
    return ComplexSpec(
        "hairy", n, min_valence, constraint=constraint, connectivity=connectivity,
        min_hairs=min_hairs,
    )


def fHGCc(n, min_valence=1, constraint="none", min_hairs=0):
    return fHGC(n, min_valence, constraint, "connected", min_hairs)


def HGC(n):
    """Connected, at-least-trivalent hairy complex without the hairless part."""
    return fHGC(n, min_valence=3, connectivity="connected", min_hairs=1)


def UR(n):
    """Remainder complex: every component a one-hair star or dumbbell."""
    return ComplexSpec(
        "hairy", n, min_valence=1, constraint="none", connectivity="all",
        quotient="must_contain_forbidden", all_components_forbidden=True,
        min_hairs=1,
    )


def degree(spec: ComplexSpec, s: GradedSlice) -> int:
    """Cohomological degree of the graded piece."""
    if spec.kind == "plain":
        return s.e if spec.n == 0 else s.v - 1
    return s.e + 1 if spec.n == 0 else s.v + 1 - s.h


def component_tag(v, e, h):
    return TAG_BY_SHAPE.get((v, e, h), "other")


def component_split(g: LabeledGraph):
    """Components with their tags.

    Returns (list of (component graph, tag), c, p) where c is the number of
    components and p the number of components carrying at least one hair.
    """
    comps = graph_components(g)
    out = []
    p = 0
    for sub, _local in comps:
        tag = component_tag(sub.v, len(sub.edges), len(sub.hairs))
        if sub.hairs:
            p += 1
        out.append((sub, tag))
    return out, len(out), p


def constraint_filter(g: LabeledGraph, spec: ComplexSpec) -> bool:
    """True when g spans the complex: valence, constraint flag,
    connectivity and quotient mode all satisfied."""
    if spec.kind == "plain" and g.hairs:
        return False
    if len(g.hairs) < spec.min_hairs:
        return False
    counts = [0] * g.v
    for a, b in g.edges:
        counts[a] += 1
        counts[b] += 1
    hair_counts = [0] * g.v
    for a in g.hairs:
        hair_counts[a] += 1
    for x in range(g.v):
        if counts[x] + hair_counts[x] < spec.min_valence:
            return False
    if spec.constraint == "star":
        for x in range(g.v):
            if hair_counts[x] and counts[x] + hair_counts[x] < 3:
                return False
    comps, c, _p = component_split(g)
    if spec.connectivity == "connected" and c != 1:
        return False
    if spec.connectivity == "disconnected_only" and c < 2:
        return False
    tags = [tag for _sub, tag in comps]
    for t in spec.forbidden_tags():
        if t in tags:
            return False
    marked = ("sigma1", "lambda2")
    if spec.quotient == "must_contain_forbidden":
        if not any(t in marked for t in tags):
            return False
    if spec.all_components_forbidden:
        if not all(t in marked for t in tags):
            return False
    return True


# ---------------------------------------------------------------------------
# enumeration of connected isomorphism classes
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _connected_structures(v, e, multi):
    """Connected multigraph structures (no hairs) up to isomorphism.

    Every connected graph on v >= 2 vertices arises from a connected graph
    on v-1 vertices by re-attaching a non-cut vertex, so attaching a new
    vertex in all ways to all smaller structures is exhaustive.  Returns
    canonical structure keys (v, edges, hair_counts).
    """
    if v <= 0 or e < 0:
        return ()
    if v == 1:
        return ((1, (), (0,)),) if e == 0 else ()
    if e < v - 1:
        return ()
    out = set()
    for k in range(1, e - (v - 2) + 1):
        for parent in _connected_structures(v - 1, e - k, multi):
            pv, pedges, _ = parent
            _, _, auts = canonical_form(LabeledGraph(pv, pedges))
            if multi:
                attachments = itertools.combinations_with_replacement(range(pv), k)
            else:
                attachments = itertools.combinations(range(pv), k)
            seen = set()
            for att in attachments:
                if att in seen:
                    continue
                # orbit of the attachment multiset under parent automorphisms
                if len(auts) > 1:
                    frontier = {att}
                    orbit = {att}
                    while frontier:
                        nxt = set()
                        for cur in frontier:
                            for alpha in auts:
                                img = tuple(sorted(alpha[a] for a in cur))
                                if img not in orbit:
                                    orbit.add(img)
                                    nxt.add(img)
                        frontier = nxt
                    seen.update(orbit)
                edges = pedges + tuple((a, pv) for a in att)
                key, _, _ = canonical_form(LabeledGraph(pv + 1, edges))
                out.add(key)
    return tuple(sorted(out))


def _hair_distributions(v, h, max_per_vertex):
    if h == 0:
        yield ()
        return
    for counts in itertools.combinations_with_replacement(range(v), h):
        if max_per_vertex is not None:
            ok = all(
                sum(1 for c in counts if c == x) <= max_per_vertex for x in set(counts)
            )
            if not ok:
                continue
        yield counts


@lru_cache(maxsize=None)
def connected_classes(v, e, h, parity):
    """Nonzero connected classes with the given counts, as CanonicalGraphs."""
    multi = parity == 1
    out = {}
    max_per_vertex = 1 if (parity == 1 and h) else None
    for key in _connected_structures(v, e, multi):
        base = LabeledGraph(key[0], key[1])
        for hairs in _hair_distributions(v, h, max_per_vertex):
            res = canonicalize(LabeledGraph(base.v, base.edges, hairs), parity)
            if res is not None:
                out[res[0]] = None
    return tuple(sorted(out, key=lambda c: c.sort_key()))


def _component_ok(cg: CanonicalGraph, spec: ComplexSpec):
    """Component-local part of the constraint filter, used for pruning."""
    g = cg.graph
    tag = component_tag(g.v, len(g.edges), len(g.hairs))
    if tag in spec.forbidden_tags():
        return False
    if spec.all_components_forbidden and tag not in ("sigma1", "lambda2"):
        return False
    counts = [0] * g.v
    for a, b in g.edges:
        counts[a] += 1
        counts[b] += 1
    for x in range(g.v):
        if counts[x] + cg.hair_counts[x] < spec.min_valence:
            return False
    if spec.constraint == "star":
        for x in range(g.v):
            if cg.hair_counts[x] and counts[x] + cg.hair_counts[x] < 3:
                return False
    return True


def _swap_is_odd(cg: CanonicalGraph, parity):
    if parity == 0:
        return len(cg.edges) % 2 == 1
    return (cg.v + sum(cg.hair_counts)) % 2 == 1


def _assemble_disconnected(spec, s: GradedSlice):
    """All multisets of connected classes with the required totals."""
    parity = spec.parity
    pool = []
    for cv in range(1, s.v + 1):
        for ce in range(0, s.e + 1):
            if cv > ce + 1:
                continue
            for ch in range(0, s.h + 1):
                for cg in connected_classes(cv, ce, ch, parity):
                    if _component_ok(cg, spec):
                        pool.append(cg)
    sizes = [cg.slice for cg in pool]
    results = []

    def grow(min_idx, rv, re, rh, chosen):
        if rv == 0:
            if re == 0 and rh == 0 and chosen:
                results.append(tuple(chosen))
            return
        for j in range(min_idx, len(pool)):
            cv, ce, ch = sizes[j]
            if cv <= rv and ce <= re and ch <= rh:
                cg = pool[j]
                chosen.append(cg)
                # a repeated component with orientation-reversing swap is zero
                nxt = j + 1 if _swap_is_odd(cg, parity) else j
                grow(nxt, rv - cv, re - ce, rh - ch, chosen)
                chosen.pop()

    grow(0, s.v, s.e, s.h, [])
    out = []
    for comps in results:
        comps = sorted(comps, key=lambda c: c.sort_key())
        edges = []
        counts = []
        off = 0
        for cg in comps:
            for a, b in cg.edges:
                edges.append((a + off, b + off))
            counts.extend(cg.hair_counts)
            off += cg.v
        out.append(CanonicalGraph(s.v, tuple(sorted(edges)), tuple(counts), parity))
    return out


@dataclass
class Basis:
    """Ordered basis of one graded piece of a complex."""

    spec: ComplexSpec
    slice: GradedSlice
    elements: tuple
    index: dict = field(repr=False, default=None)

    def __post_init__(self):
        if self.index is None:
            self.index = {cg: i for i, cg in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)


_BASIS_CACHE = {}

#: optional DiskCache consulted by enumerate_basis (set by the CLI)
DISK_CACHE = None


def set_disk_cache(cache):
    global DISK_CACHE
    DISK_CACHE = cache


def enumerate_basis(spec: ComplexSpec, s: GradedSlice) -> Basis:
    """One canonical graph per nonzero isomorphism class in the slice."""
    if s.v < 0 or s.e < 0 or s.h < 0:
        raise ValueError("negative slice parameters: %r" % (s,))
    if spec.kind == "plain" and s.h != 0:
        raise ValueError("plain complexes have no hairs")
    key = (spec, s)
    hit = _BASIS_CACHE.get(key)
    if hit is not None:
        return hit
    if s.v == 0:
        basis = Basis(spec, s, ())
        _BASIS_CACHE[key] = basis
        return basis
    if DISK_CACHE is not None:
        cached = DISK_CACHE.load_basis(spec, s)
        if cached is not None:
            _BASIS_CACHE[key] = cached
            return cached
    if spec.connectivity == "connected":
        cands = [
            cg for cg in connected_classes(s.v, s.e, s.h, spec.parity)
            if _component_ok(cg, spec)
        ]
        cands = [cg for cg in cands if constraint_filter(cg.graph, spec)]
    else:
        cands = [
            cg for cg in _assemble_disconnected(spec, s)
            if constraint_filter(cg.graph, spec)
        ]
    cands.sort(key=lambda c: c.sort_key())
    basis = Basis(spec, s, tuple(cands))
    _BASIS_CACHE[key] = basis
    if DISK_CACHE is not None:
        DISK_CACHE.store_basis(basis)
    return basis


def clear_basis_cache():
    _BASIS_CACHE.clear()
