"""Multigraphs with hairs, canonical labeling, and orientation signs.

A generator of a graph complex is an isomorphism class of a finite directed
multigraph (no tadpoles) with unordered "hairs" (external legs) attached to
vertices, modulo an orientation.  The orientation data depends on the parity:

  parity 0 (even):  an ordering of the edges; permuting edges is
      antisymmetric, vertex labels and edge directions do not matter.
  parity 1 (odd):   an ordering of the vertices and of the hairs, plus a
      direction for every edge; vertex and hair permutations are
      antisymmetric and reversing an edge flips the sign.  Edge labels do
      not matter.

A class is *zero* when some automorphism of the underlying structure acts on
the orientation with sign -1 (e.g. parallel edges in parity 0, or two hairs
on one vertex in parity 1).

`LabeledGraph` is a concrete representative; `canonicalize` maps it to the
canonical representative of its class together with the relative sign.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

__all__ = [
    "LabeledGraph",
    "CanonicalGraph",
    "GradedSlice",
    "canonicalize",
    "canonical_form",
    "relabel_sign",
    "graph_components",
    "validate_graph",
    "ENCODING_VERSION",
]

ENCODING_VERSION = 1


class GradedSlice(NamedTuple):
    """A graded piece: vertex, edge and hair counts."""

    v: int
    e: int
    h: int = 0


class LabeledGraph(NamedTuple):
    """A directed multigraph with ordered edges and ordered hairs.

    ``edges[i] = (tail, head)`` with ``tail != head``; ``hairs[i]`` is the
    vertex the i-th hair is attached to.
    """

    v: int
    edges: tuple
    hairs: tuple = ()

    @property
    def slice(self):
        return GradedSlice(self.v, len(self.edges), len(self.hairs))

    def valence(self, x):
        """Edge endpoints at x plus hairs at x."""
        val = 0
        for a, b in self.edges:
            if a == x:
                val += 1
            if b == x:
                val += 1
        for a in self.hairs:
            if a == x:
                val += 1
        return val

    def hair_count(self, x):
        return sum(1 for a in self.hairs if a == x)

    def degree_of(self, x):
        """Edge endpoints at x (hairs not counted)."""
        return sum((a == x) + (b == x) for a, b in self.edges)


def validate_graph(g: LabeledGraph):
    """Raise ValueError on tadpoles or out-of-range indices."""
    for a, b in g.edges:
        if a == b:
            raise ValueError("tadpole edge (%d,%d)" % (a, b))
        if not (0 <= a < g.v and 0 <= b < g.v):
            raise ValueError("edge (%d,%d) out of range" % (a, b))
    for a in g.hairs:
        if not (0 <= a < g.v):
            raise ValueError("hair at %d out of range" % a)
    return g


class CanonicalGraph(NamedTuple):
    """Canonical representative of an isomorphism class, per parity.

    ``edges`` is the sorted tuple of undirected pairs (a, b), a < b, with
    multiplicity; ``hair_counts[x]`` is the number of hairs on vertex x in
    the canonical labeling.  Only nonzero classes are ever constructed.
    """

    v: int
    edges: tuple
    hair_counts: tuple
    parity: int

    @property
    def slice(self):
        return GradedSlice(self.v, len(self.edges), sum(self.hair_counts))

    @property
    def graph(self) -> LabeledGraph:
        """Reference representative: sorted edges directed low->high,
        hairs sorted by attachment vertex."""
        hairs = []
        for x, c in enumerate(self.hair_counts):
            hairs.extend([x] * c)
        return LabeledGraph(self.v, self.edges, tuple(hairs))

    @property
    def encoding(self) -> bytes:
        """Stable byte encoding, the cache key and wire format.

        Layout (version 1, little-endian):
          magic 'G', version byte, v, h, e as one byte each,
          then v hair counts (1 byte each),
          then e edge pairs (2 bytes each, low vertex first).
        """
        e = len(self.edges)
        h = sum(self.hair_counts)
        if self.v > 255 or e > 255 or h > 255:
            raise ValueError("graph too large for encoding v1")
        out = bytearray([71, ENCODING_VERSION, self.v, h, e])
        out.extend(self.hair_counts)
        for a, b in self.edges:
            out.append(a)
            out.append(b)
        return bytes(out)

    def sort_key(self):
        return self.encoding

    @classmethod
    def from_encoding(cls, data: bytes, parity: int) -> "CanonicalGraph":
        if len(data) < 5 or data[0] != 71 or data[1] != ENCODING_VERSION:
            raise ValueError("bad canonical graph encoding")
        v, h, e = data[2], data[3], data[4]
        counts = tuple(data[5:5 + v])
        edges = []
        pos = 5 + v
        for _ in range(e):
            edges.append((data[pos], data[pos + 1]))
            pos += 2
        if sum(counts) != h or pos != len(data):
            raise ValueError("corrupt canonical graph encoding")
        return cls(v, tuple(edges), counts, parity)


def _graph_key(g: LabeledGraph):
    """Unoriented structure key: (v, sorted undirected edges, hair counts)."""
    und = sorted((a, b) if a < b else (b, a) for a, b in g.edges)
    counts = [0] * g.v
    for a in g.hairs:
        counts[a] += 1
    return (g.v, tuple(und), tuple(counts))


# ---------------------------------------------------------------------------
# canonical labeling: color refinement + individualization search
# ---------------------------------------------------------------------------

def _refine(v, nbrs, colors):
    """1-WL color refinement on a multigraph; returns stable dense colors.

    ``nbrs[x]`` is a tuple of (neighbor, multiplicity) pairs.
    """
    order = sorted(range(v), key=colors.__getitem__)
    dense = [0] * v
    c = 0
    prev = colors[order[0]]
    for x in order:
        if colors[x] != prev:
            c += 1
            prev = colors[x]
        dense[x] = c
    colors = dense
    ncolors = c + 1
    while ncolors < v:
        sigs = []
        for x in range(v):
            cx = colors[x]
            nb = sorted([(colors[y], m) for y, m in nbrs[x]])
            sigs.append((cx, nb))
        order = sorted(range(v), key=sigs.__getitem__)
        new = [0] * v
        c = 0
        prev = sigs[order[0]]
        for x in order:
            if sigs[x] != prev:
                c += 1
                prev = sigs[x]
            new[x] = c
        if c + 1 == ncolors:
            return new
        ncolors = c + 1
        colors = new
    return colors


def _search_canonical(v, edges_und, hair_counts):
    """Return (best_key, achieving_perms) for a connected structure.

    A perm maps old vertex index -> canonical index.  All perms achieving
    the minimal key are returned, so automorphisms can be recovered as
    differences of achievers.
    """
    adj = [dict() for _ in range(v)]
    for a, b in edges_und:
        adj[a][b] = adj[a].get(b, 0) + 1
        adj[b][a] = adj[b].get(a, 0) + 1
    nbrs = tuple(tuple(sorted(d.items())) for d in adj)

    def key_of(perm):
        und = sorted(
            (perm[a], perm[b]) if perm[a] < perm[b] else (perm[b], perm[a])
            for a, b in edges_und
        )
        counts = [0] * v
        for x in range(v):
            counts[perm[x]] = hair_counts[x]
        return (tuple(und), tuple(counts))

    sig0 = [(hair_counts[x], len(adj[x]), sum(adj[x].values())) for x in range(v)]
    order = sorted(range(v), key=sig0.__getitem__)
    init = [0] * v
    c = 0
    prev = sig0[order[0]]
    for x in order:
        if sig0[x] != prev:
            c += 1
            prev = sig0[x]
        init[x] = c

    init = _refine(v, nbrs, init)
    if len(set(init)) == v:
        # discrete refinement: trivial automorphism group
        perm = tuple(init)
        return key_of(perm), [perm]

    best = [None, []]

    def descend(colors):
        cells = {}
        for x in range(v):
            cells.setdefault(colors[x], []).append(x)
        target = None
        for cc in sorted(cells, key=lambda cc: (len(cells[cc]), cc)):
            if len(cells[cc]) > 1:
                target = cells[cc]
                break
        if target is None:
            perm = tuple(colors)
            k = key_of(perm)
            if best[0] is None or k < best[0]:
                best[0] = k
                best[1] = [perm]
            elif k == best[0]:
                best[1].append(perm)
            return
        for u in target:
            # individualized vertex sorts before the rest of its cell
            child = [2 * colors[x] + (0 if x == u else 1) for x in range(v)]
            descend(_refine(v, nbrs, child))

    descend(init)
    return best[0], best[1]


def graph_components(g: LabeledGraph):
    """Partition into connected components (hairs follow their vertex).

    Returns a list of (component LabeledGraph, vertex index map old->local),
    in order of the smallest original vertex index.
    """
    parent = list(range(g.v))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in g.edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups = {}
    for x in range(g.v):
        groups.setdefault(find(x), []).append(x)
    comps = []
    for verts in sorted(groups.values()):
        local = {x: i for i, x in enumerate(verts)}
        edges = tuple((local[a], local[b]) for a, b in g.edges if find(a) == find(verts[0]))
        hairs = tuple(local[a] for a in g.hairs if find(a) == find(verts[0]))
        comps.append((LabeledGraph(len(verts), edges, hairs), local))
    return comps


_CANON_CACHE = {}


def canonical_form(g: LabeledGraph):
    """Canonical structure of g's isomorphism class.

    Returns (key, perm, auts):
      key   -- (v, sorted undirected edge tuple, hair count tuple) in the
               canonical labeling;
      perm  -- one relabeling old index -> canonical index achieving it;
      auts  -- vertex permutations (tuples, acting on canonical labels)
               generating the automorphism group of the structure.
    """
    gk = _graph_key(g)
    hit = _CANON_CACHE.get(gk)
    if hit is not None:
        key, perm0, auts = hit
        # cached perm is for the key's reference labeling; compose with the
        # relabeling that takes g to that reference labeling (identity here,
        # since gk already fixes vertex labels)
        return key, perm0, auts

    comps = graph_components(g)
    canon_comps = []
    for sub, local in comps:
        sk = _graph_key(sub)
        sub_hit = _CANON_CACHE.get(sk)
        if sub_hit is None:
            key, perms = _search_canonical(sub.v, sk[1], sk[2])
            ckey = (sub.v, key[0], key[1])
            p0 = perms[0]
            auts = []
            inv0 = [0] * sub.v
            for x, y in enumerate(p0):
                inv0[y] = x
            seen = set()
            for p in perms:
                alpha = tuple(p[inv0[y]] for y in range(sub.v))
                if alpha not in seen:
                    seen.add(alpha)
                    auts.append(alpha)
            sub_hit = (ckey, p0, tuple(auts))
            _CANON_CACHE[sk] = sub_hit
        canon_comps.append((sub_hit, local))

    if len(canon_comps) == 1:
        (ckey, p0, auts), local = canon_comps[0]
        perm = [0] * g.v
        for x, i in local.items():
            perm[x] = p0[i]
        result = (ckey, tuple(perm), auts)
        _CANON_CACHE[gk] = result
        return result

    # disconnected: sort components by encoding, concatenate with offsets
    def comp_sort_key(item):
        (ckey, _p0, _auts), _local = item
        return _comp_bytes(ckey)

    canon_comps.sort(key=comp_sort_key)
    offsets = []
    off = 0
    for (ckey, _, _), _ in canon_comps:
        offsets.append(off)
        off += ckey[0]
    edges = []
    counts = []
    perm = [0] * g.v
    for idx, ((ckey, p0, _auts), local) in enumerate(canon_comps):
        off = offsets[idx]
        for a, b in ckey[1]:
            edges.append((a + off, b + off))
        counts.extend(ckey[2])
        for x, i in local.items():
            perm[x] = p0[i] + off
    key = (g.v, tuple(sorted(edges)), tuple(counts))

    auts = []
    for idx, ((ckey, _p0, comp_auts), _) in enumerate(canon_comps):
        off = offsets[idx]
        for alpha in comp_auts:
            if all(alpha[i] == i for i in range(len(alpha))):
                continue
            lifted = list(range(g.v))
            for i, j in enumerate(alpha):
                lifted[i + off] = j + off
            auts.append(tuple(lifted))
    for idx in range(len(canon_comps) - 1):
        (ck1, _, _), _ = canon_comps[idx]
        (ck2, _, _), _ = canon_comps[idx + 1]
        if ck1 == ck2:
            o1, o2 = offsets[idx], offsets[idx + 1]
            n = ck1[0]
            swap = list(range(g.v))
            for i in range(n):
                swap[o1 + i] = o2 + i
                swap[o2 + i] = o1 + i
            auts.append(tuple(swap))
    if not auts:
        auts = [tuple(range(g.v))]
    result = (key, tuple(perm), tuple(auts))
    _CANON_CACHE[gk] = result
    return result


def _comp_bytes(ckey):
    v, edges, counts = ckey
    out = bytearray([v, sum(counts), len(edges)])
    out.extend(counts)
    for a, b in edges:
        out.append(a)
        out.append(b)
    return bytes(out)


# ---------------------------------------------------------------------------
# orientation signs
# ---------------------------------------------------------------------------

def _perm_sign(perm):
    """Sign of a permutation given as a sequence of images."""
    n = len(perm)
    seen = [False] * n
    sign = 1
    for i in range(n):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _sort_perm_sign(items):
    """Sign of the permutation sorting `items`; None if there are ties."""
    order = sorted(range(len(items)), key=lambda i: items[i])
    for i in range(len(order) - 1):
        if items[order[i]] == items[order[i + 1]]:
            return None
    return _perm_sign(order)


def relabel_sign(g: LabeledGraph, perm, parity: int) -> Optional[int]:
    """Sign relating g's orientation to the reference orientation of its
    relabeled form (sorted edges directed low->high, hairs sorted).

    Returns None when an internal symmetry kills the class: a repeated
    edge in parity 0, or two hairs on one vertex in parity 1.
    """
    rel = [(perm[a], perm[b]) for a, b in g.edges]
    if parity == 0:
        und = [(a, b) if a < b else (b, a) for a, b in rel]
        return _sort_perm_sign(und)
    sign = _perm_sign(perm) if g.v > 1 else 1
    for a, b in rel:
        if a > b:
            sign = -sign
    if g.hairs:
        hs = [perm[a] for a in g.hairs]
        s = _sort_perm_sign(hs)
        if s is None:
            return None
        sign *= s
    return sign


_ZERO_CACHE = {}


def _class_is_zero(key, auts, parity):
    """True when some automorphism acts with sign -1 on the orientation."""
    zk = (key, parity)
    hit = _ZERO_CACHE.get(zk)
    if hit is not None:
        return hit
    v, edges, counts = key
    zero = False
    if parity == 0:
        for i in range(1, len(edges)):
            if edges[i] == edges[i - 1]:
                zero = True
                break
    else:
        if any(c >= 2 for c in counts):
            zero = True
    if not zero:
        ref = LabeledGraph(v, edges, tuple(x for x, c in enumerate(counts) for _ in range(c)))
        for alpha in auts:
            s = relabel_sign(ref, alpha, parity)
            if s != 1:
                zero = True
                break
    _ZERO_CACHE[zk] = zero
    return zero


def canonicalize(g: LabeledGraph, parity: int):
    """Canonical representative and sign of g in the given parity.

    Returns (CanonicalGraph, sign) or None when the class is zero.
    """
    if g.v == 0:
        return None
    key, perm, auts = canonical_form(g)
    if _class_is_zero(key, auts, parity):
        return None
    sign = relabel_sign(g, perm, parity)
    if sign is None:
        return None
    return CanonicalGraph(key[0], key[1], key[2], parity), sign


def clear_caches():
    _CANON_CACHE.clear()
    _ZERO_CACHE.clear()
