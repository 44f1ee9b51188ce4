"""Batch front-end: bases, matrices, cohomology tables, identity suites.

Verbs: basis | matrix | cohomology | verify | special | cache.
Exit codes: 0 all checks pass, 1 mathematical discrepancy, 2 usage or
resource error.  Output is deterministic for a fixed configuration
(including the prime seed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import linalg
from .cache import DiskCache, cache_from_env
from .complexes import (
    ComplexSpec,
    HGC,
    UR,
    enumerate_basis,
    fGC,
    fGCc,
    fHGC,
    fHGCc,
    set_disk_cache,
)
from .elements import big_sigma, build_element, check_element_lemmas, pi_f
from .graphs import GradedSlice
from .homology import (
    InfiniteSliceSet,
    cohomology_at_slice,
    cohomology_fd,
    verify_identity,
)
from .operators import (
    GraphVector,
    OperatorExpr,
    apply_expr,
    assemble_matrix,
    compose,
    op,
    scale,
)

__all__ = ["main"]


class UsageError(Exception):
    pass


class ResourceLimit(Exception):
    pass


DIFFERENTIALS = {
    "delta": lambda: op("delta"),
    "nabla": lambda: op("nabla"),
    "Delta": lambda: op("Delta"),
    "delta+Delta": lambda: op("delta") + op("Delta"),
    "delta-tilde": lambda: op("delta_tilde"),
    "D": lambda: op("D"),
}


def _resolve_spec(args):
    name = getattr(args, "complex", None)
    kind = getattr(args, "kind", None)
    minval = getattr(args, "minval", None)
    constraint = getattr(args, "constraint", "none").replace("-", "_")
    conn = "all"
    if getattr(args, "connected", False):
        conn = "connected"
    if getattr(args, "disconnected", False):
        conn = "disconnected_only"
    if getattr(args, "m", None) not in (None, -1):
        raise UsageError("only m = -1 hairy complexes are implemented")
    if name:
        if name in ("fGC", "fGCc"):
            spec = fGC(args.n, minval if minval is not None else 0,
                       connectivity="connected" if name.endswith("c") else conn)
        elif name in ("fHGC", "fHGCc", "HGC"):
            if name == "HGC":
                return HGC(args.n)
            spec = fHGC(args.n, minval if minval is not None else 1,
                        constraint=constraint,
                        connectivity="connected" if name.endswith("c") else conn)
        elif name == "UR":
            return UR(args.n)
        else:
            raise UsageError("unknown complex %r" % name)
        return spec
    if kind is None:
        raise UsageError("need --kind or --complex")
    default_val = 0 if kind == "plain" else 1
    return ComplexSpec(
        kind, args.n, minval if minval is not None else default_val,
        constraint=constraint, connectivity=conn,
        quotient=getattr(args, "quotient", "none").replace("-", "_"),
    )


def _guard_basis(basis, args):
    limit = getattr(args, "max_basis", None) or 200000
    if len(basis) > limit:
        raise ResourceLimit(
            "basis of slice %s has %d elements (limit %d); raise --max-basis"
            % (tuple(basis.slice), len(basis), limit))
    return basis


def _emit(args, payload, text_lines):
    fmt = getattr(args, "format", "text")
    if fmt == "json":
        out = json.dumps(payload, indent=2, sort_keys=True)
    elif fmt == "csv":
        buf = io.StringIO()
        rows = payload if isinstance(payload, list) else payload.get("rows", [])
        if rows:
            writer = csv.DictWriter(buf, fieldnames=sorted(rows[0]))
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
        out = buf.getvalue().rstrip("\n")
    else:
        out = "\n".join(text_lines)
    dest = getattr(args, "out", None)
    if dest:
        with open(dest, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------

def cmd_basis(args):
    spec = _resolve_spec(args)
    s = GradedSlice(args.v, args.e, args.h or 0)
    basis = _guard_basis(enumerate_basis(spec, s), args)
    payload = {
        "complex": spec.cache_key(),
        "slice": list(s),
        "dim": len(basis),
    }
    lines = ["%s slice v=%d e=%d h=%d: dim %d"
             % (spec.cache_key(), s.v, s.e, s.h, len(basis))]
    if args.encodings:
        payload["encodings"] = [cg.encoding.hex() for cg in basis.elements]
        lines.extend(cg.encoding.hex() for cg in basis.elements)
    _emit(args, payload, lines)
    return 0


def cmd_matrix(args):
    spec = _resolve_spec(args)
    if args.diff not in DIFFERENTIALS:
        raise UsageError("unknown differential %r" % args.diff)
    expr = DIFFERENTIALS[args.diff]()
    src = GradedSlice(args.v, args.e, args.h or 0)
    from .operators import expr_signatures
    sigs = sorted(expr_signatures(expr))
    if len(sigs) != 1:
        raise UsageError("matrix verb needs a single-signature differential")
    tgt = GradedSlice(src.v + sigs[0][0], src.e + sigs[0][1], src.h + sigs[0][2])
    _guard_basis(enumerate_basis(spec, src), args)
    _guard_basis(enumerate_basis(spec, tgt), args)
    m = assemble_matrix(expr, spec, src, spec, tgt)
    limit = args.max_nnz or 5_000_000
    if m.nnz() > limit:
        raise ResourceLimit("matrix has %d nonzeros (limit %d)" % (m.nnz(), limit))
    header = {
        "complex": spec.cache_key(),
        "op": args.diff,
        "source": list(src),
        "target": list(tgt),
    }
    if args.out and args.out.endswith(".json"):
        with open(args.out, "w") as fh:
            json.dump(linalg.matrix_to_json(m, header), fh, indent=1)
    elif args.out:
        linalg.write_matrix(args.out, m, header)
    print("%s %s: %dx%d, %d nonzeros%s"
          % (args.diff, tuple(src), m.rows, m.cols, m.nnz(),
             (" -> " + args.out) if args.out else ""))
    return 0


def cmd_cohomology(args):
    spec = _resolve_spec(args)
    if args.diff not in DIFFERENTIALS:
        raise UsageError("unknown differential %r" % args.diff)
    expr = DIFFERENTIALS[args.diff]()
    rows = []
    lines = []
    seed = args.prime_seed

    if args.diff == "delta" and spec.kind == "plain":
        emax = args.emax if args.emax is not None else 6
        bmin, bmax = args.bmin, args.bmax
        grid = {}
        cells = []
        for b in range(bmin, bmax + 1):
            for e in range(0, emax + 1):
                v = e - b
                if v >= 1:
                    cells.append((b, e, GradedSlice(v, e)))
        results = _map_cells(args, spec, args.diff, cells, seed)
        for (b, e, _s), rep in zip(cells, results):
            grid[(b, e)] = rep
            rows.append(rep)
        header = "b\\e " + " ".join("%3d" % e for e in range(0, emax + 1))
        lines.append(header)
        for b in range(bmin, bmax + 1):
            cells_txt = []
            for e in range(0, emax + 1):
                rep = grid.get((b, e))
                cells_txt.append("%3s" % (rep["H"] if rep else "."))
            lines.append("%3d " % b + " ".join(cells_txt))
    elif args.diff == "nabla":
        vmax = args.vmax if args.vmax is not None else 5
        total = 0
        for v in range(1, vmax + 1):
            emax_v = v * (v - 1) // 2
            emin_v = (v + 1) // 2 if spec.min_valence >= 1 else 0
            for e in range(emin_v, emax_v + 1):
                s = GradedSlice(v, e)
                _guard_basis(enumerate_basis(spec, s), args)
                rep = cohomology_at_slice(spec, expr, s, name="nabla", seed=seed)
                d = rep.as_dict()
                rows.append(d)
                total += d["H"]
                if d["H"]:
                    lines.append("v=%d e=%d: H = %d" % (v, e, d["H"]))
        lines.append("total dim over v <= %d: %d" % (vmax, total))
    elif args.diff in ("delta+Delta",):
        if spec.kind != "hairy":
            raise UsageError("delta+Delta needs a hairy complex")
        fs = [args.f] if args.f is not None else list(range(args.fmin, args.fmax + 1))
        dmax = args.dmax if args.dmax is not None else 4
        for f in fs:
            for d in range(args.dmin, dmax + 1):
                try:
                    rep = cohomology_fd(spec, expr, f, d, name=args.diff, seed=seed)
                except InfiniteSliceSet as exc:
                    raise ResourceLimit(str(exc))
                row = rep.as_dict()
                rows.append(row)
                lines.append("f=%d d=%d: dim %d rank_in %d rank_out %d H %d"
                             % (f, d, rep.dim_space, rep.rank_in, rep.rank_out,
                                rep.dim_h))
    else:
        # generic slice chain for a single-signature differential
        if args.v is None or args.e is None:
            raise UsageError("this differential needs an explicit --v/--e slice")
        s = GradedSlice(args.v, args.e, args.h or 0)
        rep = cohomology_at_slice(spec, expr, s, name=args.diff, seed=seed)
        rows.append(rep.as_dict())
        lines.append("%s at %s: H = %d" % (args.diff, tuple(s), rep.dim_h))

    _emit(args, {"rows": rows}, lines)
    return 0


def _cell_worker(job):
    specargs, diff, s, seed = job
    spec = ComplexSpec(**specargs)
    expr = DIFFERENTIALS[diff]()
    rep = cohomology_at_slice(spec, expr, GradedSlice(*s), name=diff, seed=seed)
    return rep.as_dict()


def _map_cells(args, spec, diff, cells, seed):
    jobs = [(_spec_kwargs(spec), diff, tuple(s), seed) for (_b, _e, s) in cells]
    threads = getattr(args, "threads", 1) or 1
    if threads > 1:
        import multiprocessing

        with multiprocessing.Pool(threads) as pool:
            return pool.map(_cell_worker, jobs)
    return [_cell_worker(j) for j in jobs]


def _spec_kwargs(spec: ComplexSpec):
    return {
        "kind": spec.kind, "n": spec.n, "min_valence": spec.min_valence,
        "constraint": spec.constraint, "connectivity": spec.connectivity,
        "quotient": spec.quotient,
        "all_components_forbidden": spec.all_components_forbidden,
        "min_hairs": spec.min_hairs,
    }


# -- identity registry --------------------------------------------------------

def _plain_slices(emax, vslack=3):
    out = []
    for e in range(0, emax + 1):
        for v in range(1, e + vslack + 1):
            out.append(GradedSlice(v, e))
    return out


def _hairy_slices(emax, hmin, hmax, vcap=None):
    out = []
    for e in range(0, emax + 1):
        for h in range(hmin, hmax + 1):
            for v in range(1, (vcap or 2 * e + h + 2)):
                out.append(GradedSlice(v, e, h))
    return out


def identity_registry(emax_plain=5, emax_hairy=4):
    zero = OperatorExpr(())
    d, D, nab, Dh = op("delta"), op("D"), op("nabla"), op("Delta")
    reg = {}

    def add(name, suite, lhs, rhs, spec, slices, method="matrices"):
        # matrix mode is valid when the complex is closed under every
        # factor; the star and connected domains are not, so those
        # identities are checked per generator instead
        reg[name] = (suite, lhs, rhs, spec, slices, method)

    add("delta-squared", "core", compose("delta", "delta"), zero,
        fGC(0), _plain_slices(emax_plain))
    add("delta-squared-odd", "core", compose("delta", "delta"), zero,
        fGC(1), _plain_slices(emax_plain))
    add("even-D2", "even-D", compose("D", "D"), zero,
        fGC(0, 2), _plain_slices(emax_plain))
    add("even-D4", "even-D", compose("D", "D", "D", "D"), zero,
        fGC(0, 1), _plain_slices(emax_plain))
    add("even-Dd", "even-D", compose("delta", "D") - compose("D", "delta"),
        nab, fGC(0), _plain_slices(emax_plain))
    add("even-Dnabla", "even-D", compose("D", "nabla") + compose("nabla", "D"),
        zero, fGC(0, 1), _plain_slices(emax_plain))
    add("even-nablaD2", "even-D", compose("nabla", "D", "D"), zero,
        fGC(0, 1), _plain_slices(emax_plain))
    add("odd-D2", "odd-D", compose("D", "D"), zero,
        fGC(1, 1), _plain_slices(emax_plain))
    add("odd-Dd", "odd-D", compose("delta", "D") + compose("D", "delta"),
        zero, fGC(1), _plain_slices(emax_plain))
    add("dtilde-squared", "even-D", op("delta_tilde") @ op("delta_tilde"),
        zero, fGC(0, 1), _plain_slices(emax_plain - 1))
    for n in (0, 1):
        add("prop-D1-n%d" % n, "hairy-D",
            compose("delta", "D1") - compose("D1", "delta"), Dh,
            fHGC(n), _hairy_slices(emax_hairy - 1, 1, 1))
        add("lem-D1p-n%d" % n, "hairy-D", op("D1"), compose("Delta", "Dp"),
            fHGC(n, 2), _hairy_slices(emax_hairy, 1, 1))
    add("lem-D1pp", "hairy-D", compose("D1", "Dp"), zero,
        fHGC(0, 2, constraint="star"), _hairy_slices(emax_hairy, 1, 1),
        method="vectors")
    add("prop-D2", "hairy-D", compose("D1", "Delta"),
        scale(2, compose("nabla", "delta", "D2") + compose("nabla", "D2", "delta")),
        fHGCc(0), _hairy_slices(emax_hairy, 2, 2), method="vectors")
    add("prop-D2-odd", "hairy-D", compose("D1", "Delta"), zero,
        fHGC(1), _hairy_slices(emax_hairy, 2, 2))
    add("prop-D3", "hairy-D", compose("nabla", "D2", "Delta"), zero,
        fHGCc(0), _hairy_slices(emax_hairy, 3, 3), method="vectors")
    return reg


def cmd_verify(args):
    emax = args.emax if args.emax is not None else 4
    reg = identity_registry(emax_plain=emax, emax_hairy=min(emax, 4))
    chosen = []
    if args.identity:
        if args.identity not in reg:
            raise UsageError("unknown identity %r (known: %s)"
                             % (args.identity, ", ".join(sorted(reg))))
        chosen = [args.identity]
    else:
        suite = args.suite or "all"
        chosen = [n for n, (s, *_rest) in reg.items() if suite in ("all", s)]
        if not chosen:
            raise UsageError("unknown suite %r" % suite)
    rc = 0
    rows = []
    lines = []
    for name in chosen:
        _suite, lhs, rhs, spec, slices, method = reg[name]
        if name == "prop-D2" and args.disconnected:
            spec = fHGC(0, connectivity="disconnected_only")
            method = "vectors"
        report = verify_identity(name, lhs, rhs, spec, slices, method=method)
        expected_failure = bool(args.disconnected and name == "prop-D2")
        ok = report.verified != expected_failure
        rows.append(dict(report.as_dict(), expected_failure=expected_failure))
        status = "verified" if report.verified else "FAILED"
        if expected_failure:
            status += " (failure expected: %s)" % ("found" if not report.verified else "missing!")
        lines.append("%-18s %s" % (name, status))
        if not ok:
            rc = 1
    _emit(args, {"rows": rows}, lines)
    return rc


def cmd_special(args):
    rows = []
    lines = []
    rc = 0
    if args.element:
        vec = build_element(args.element, parity=args.n,
                            **({"a": args.param} if args.element in ("sigma", "lambda", "rho")
                               else {"j": args.param} if args.element == "Sigma"
                               else {"max_components": args.param}))
        lines.append("%s(%s), parity %d: %d terms"
                     % (args.element, args.param, args.n, len(vec)))
        for cg in sorted(vec.terms, key=lambda c: c.sort_key()):
            lines.append("  %s * (v=%d, edges=%s, hairs=%s)"
                         % (vec.terms[cg], cg.v, list(cg.edges), list(cg.hair_counts)))
        rows.append({"element": args.element, "param": args.param,
                     "terms": len(vec)})
        _emit(args, {"rows": rows}, lines)
        return 0
    results = check_element_lemmas(max_order=args.mmax)
    wanted = None if not args.lemma else args.lemma.lower()
    for name, ok in results:
        key = name.lower().replace(" ", "-")
        if wanted and wanted not in key:
            continue
        rows.append({"lemma": name, "status": "ok" if ok else "failed"})
        lines.append("%-48s %s" % (name, "ok" if ok else "FAILED"))
        if not ok:
            rc = 1
    if not rows:
        raise UsageError("no lemma matches %r" % args.lemma)
    _emit(args, {"rows": rows}, lines)
    return rc


def cmd_cache(args):
    cache = cache_from_env(args.cache_dir)
    if cache is None:
        raise UsageError("no cache directory (use --cache-dir or %s)"
                         % "GCOHOM_CACHE_DIR")
    if args.action == "stats":
        st = cache.stats()
        print(json.dumps(st, indent=2, sort_keys=True))
    elif args.action == "clear":
        n = cache.clear()
        print("removed %d files" % n)
    return 0


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out")
    p.add_argument("--cache-dir")
    p.add_argument("--prime-seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--max-basis", type=int, default=None)
    p.add_argument("--max-nnz", type=int, default=None)
    p.add_argument("--config")


def _add_spec_flags(p, with_complex=False):
    if with_complex:
        p.add_argument("--complex", help="fGC|fGCc|fHGC|fHGCc|HGC|UR")
        p.add_argument("--m", type=int, default=None)
    p.add_argument("--kind", choices=("plain", "hairy"))
    p.add_argument("--n", type=int, required=True, choices=(0, 1))
    p.add_argument("--minval", type=int, default=None)
    p.add_argument("--constraint", default="none",
                   choices=("none", "dagger", "ddagger", "dagger-ddagger", "star"))
    p.add_argument("--connected", action="store_true")
    p.add_argument("--disconnected", action="store_true")
    p.add_argument("--quotient", default="none",
                   choices=("none", "must-contain-forbidden"))


def build_parser():
    ap = argparse.ArgumentParser(
        prog="gcohom",
        description="graph complex bases, differentials and cohomology")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("basis", help="dimension of one graded piece")
    _add_spec_flags(p)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--h", type=int, default=0)
    p.add_argument("--encodings", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("matrix", help="assemble and serialize one matrix")
    _add_spec_flags(p)
    p.add_argument("--diff", required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--h", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("cohomology", help="cohomology dimension reports")
    _add_spec_flags(p, with_complex=True)
    p.add_argument("--diff", required=True)
    p.add_argument("--emax", type=int, default=None)
    p.add_argument("--vmax", type=int, default=None)
    p.add_argument("--bmin", type=int, default=-1)
    p.add_argument("--bmax", type=int, default=6)
    p.add_argument("--f", type=int, default=None)
    p.add_argument("--fmin", type=int, default=1)
    p.add_argument("--fmax", type=int, default=3)
    p.add_argument("--dmin", type=int, default=1)
    p.add_argument("--dmax", type=int, default=None)
    p.add_argument("--v", type=int, default=None)
    p.add_argument("--e", type=int, default=None)
    p.add_argument("--h", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("verify", help="operator identity suites")
    p.add_argument("--suite", choices=("core", "even-D", "odd-D", "hairy-D", "all"))
    p.add_argument("--identity")
    p.add_argument("--connected", action="store_true")
    p.add_argument("--disconnected", action="store_true")
    p.add_argument("--emax", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("special", help="distinguished elements and lemmas")
    p.add_argument("--lemma")
    p.add_argument("--element", choices=("sigma", "lambda", "rho", "alpha", "Sigma"))
    p.add_argument("--param", type=int, default=3)
    p.add_argument("--n", type=int, default=0, choices=(0, 1))
    p.add_argument("--mmax", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_special)

    p = sub.add_parser("cache", help="cache statistics and maintenance")
    p.add_argument("action", choices=("stats", "clear"))
    _add_common(p)
    p.set_defaults(func=cmd_cache)

    return ap


def _apply_config(args, argv):
    """Plain key = value lines; command-line flags win."""
    if not getattr(args, "config", None):
        return args
    explicit = {a.split("=")[0].lstrip("-").replace("-", "_")
                for a in argv if a.startswith("--")}
    with open(args.config) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError("bad config line: %r" % raw.rstrip())
            key, val = (part.strip() for part in line.split("=", 1))
            attr = key.replace("-", "_")
            if not hasattr(args, attr):
                raise UsageError("unknown config key %r" % key)
            if attr in explicit:
                continue
            cur = getattr(args, attr)
            if isinstance(cur, bool):
                setattr(args, attr, val.lower() in ("1", "true", "yes"))
            elif isinstance(cur, int) or val.lstrip("+-").isdigit():
                setattr(args, attr, int(val))
            else:
                setattr(args, attr, val)
    return args


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        args = _apply_config(args, argv)
        if args.prime_seed is not None:
            linalg.set_prime_seed(args.prime_seed)
        cache = cache_from_env(getattr(args, "cache_dir", None))
        if cache is not None and args.verb != "cache":
            set_disk_cache(cache)
        try:
            return args.func(args)
        finally:
            set_disk_cache(None)
    except (UsageError, ResourceLimit) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except InfiniteSliceSet as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
