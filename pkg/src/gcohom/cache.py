"""On-disk cache for bases and matrices.

One file per basis (keyed by complex spec and slice) and one per matrix
(keyed additionally by the operator name); file names are hashes of the
canonical key, writes go through a temp file and an atomic rename.  The
directory comes from the job configuration or the GCOHOM_CACHE_DIR
environment variable; without either, caching is off.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

from .complexes import Basis, ComplexSpec
from .graphs import CanonicalGraph, GradedSlice
from .linalg import SparseMatrix, read_matrix, write_matrix

__all__ = ["DiskCache", "cache_from_env", "ENV_VAR"]

ENV_VAR = "GCOHOM_CACHE_DIR"


def cache_from_env(explicit=None):
    path = explicit or os.environ.get(ENV_VAR)
    return DiskCache(path) if path else None


def _digest(key: str) -> str:
    return hashlib.sha256(key.encode()).hexdigest()[:24]


class DiskCache:
    def __init__(self, root):
        self.root = root
        os.makedirs(root, exist_ok=True)

    # -- paths ------------------------------------------------------------
    def _basis_path(self, spec: ComplexSpec, s: GradedSlice):
        key = "basis|%s|%d,%d,%d" % (spec.cache_key(), s.v, s.e, s.h)
        return os.path.join(self.root, "b_" + _digest(key) + ".json"), key

    def _matrix_path(self, opname, spec, s_src, s_tgt):
        key = "matrix|%s|%s|%d,%d,%d|%d,%d,%d" % (
            opname, spec.cache_key(),
            s_src.v, s_src.e, s_src.h, s_tgt.v, s_tgt.e, s_tgt.h)
        return os.path.join(self.root, "m_" + _digest(key) + ".gcmx"), key

    def _atomic_write(self, path, writer):
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        os.close(fd)
        try:
            writer(tmp)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    # -- bases ------------------------------------------------------------
    def load_basis(self, spec: ComplexSpec, s: GradedSlice):
        path, key = self._basis_path(spec, s)
        if not os.path.exists(path):
            return None
        with open(path) as fh:
            data = json.load(fh)
        if data.get("key") != key:
            return None
        elements = tuple(
            CanonicalGraph.from_encoding(bytes.fromhex(enc), spec.parity)
            for enc in data["elements"])
        return Basis(spec, s, elements)

    def store_basis(self, basis: Basis):
        path, key = self._basis_path(basis.spec, basis.slice)
        payload = {
            "key": key,
            "elements": [cg.encoding.hex() for cg in basis.elements],
        }

        def write(tmp):
            with open(tmp, "w") as fh:
                json.dump(payload, fh)

        self._atomic_write(path, write)

    # -- matrices ----------------------------------------------------------
    def load_matrix(self, opname, spec, s_src, s_tgt):
        path, key = self._matrix_path(opname, spec, s_src, s_tgt)
        if not os.path.exists(path):
            return None
        m, meta = read_matrix(path)
        if meta.get("key") != key:
            return None
        return m

    def store_matrix(self, opname, spec, s_src, s_tgt, m: SparseMatrix):
        path, key = self._matrix_path(opname, spec, s_src, s_tgt)
        self._atomic_write(path, lambda tmp: write_matrix(tmp, m, {"key": key}))

    # -- maintenance --------------------------------------------------------
    def stats(self):
        files = [f for f in os.listdir(self.root)
                 if f.endswith((".json", ".gcmx"))]
        total = sum(os.path.getsize(os.path.join(self.root, f)) for f in files)
        return {
            "dir": self.root,
            "bases": sum(1 for f in files if f.startswith("b_")),
            "matrices": sum(1 for f in files if f.startswith("m_")),
            "bytes": total,
        }

    def clear(self):
        n = 0
        for f in os.listdir(self.root):
            if f.startswith(("b_", "m_")) and f.endswith((".json", ".gcmx")):
                os.unlink(os.path.join(self.root, f))
                n += 1
        return n
