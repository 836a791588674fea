"""Command-line front end.

Exit status: 0 when the computation completed (a ``false`` verdict is still
0), 2 for unreadable input, 3 when the input violates a structural
precondition, 4 when a size cap or budget is exceeded.
"""
import argparse
import json
import sys

from . import clifford, fraisse, homogeneity, inverse, morphisms, tables
from .errors import AlgebraError, FormatError
from .semilattice import validate_semilattice


def _emit(report, out=None):
    (out or sys.stdout).write(json.dumps(report, sort_keys=True) + "\n")


def _read_text(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}")


def _table(path):
    return tables.parse_table(_read_text(path))


def _inverse(path):
    return inverse.try_inverse(_table(path))


def _system(path):
    return clifford.loads_system(_read_text(path))


def _write_table(S, path):
    if path:
        tables.write_table(S, path)
        assert tables.read_table(path) == S


def _rows(S):
    return [list(r) for r in S.op]


def cmd_analyze(args):
    return inverse.analyze_report(_inverse(args.table))


def cmd_homog(args):
    S = _inverse(args.table)
    limit = None if args.all_defects else homogeneity.DEFAULT_DEFECT_LIMIT
    return homogeneity.is_homogeneous(S, args.mode, cap=args.cap, defect_limit=limit).to_dict()


def cmd_aut(args):
    auts = morphisms.automorphism_group(_table(args.table), cap=args.cap)
    return {"count": len(auts), "automorphisms": [list(a.map) for a in auts]}


def cmd_iso(args):
    A, B = _table(args.left), _table(args.right)
    found = morphisms.find_isomorphisms(A, B, limit=args.limit)
    return {"isomorphic": bool(found), "count": len(found), "maps": [list(m.map) for m in found]}


def cmd_flatten(args):
    S = clifford.flatten(_system(args.system))
    _write_table(S.table, args.out)
    return {"size": S.size, "table": _rows(S.table), "is_clifford": inverse.classify(S).is_clifford}


def cmd_decompose(args):
    return clifford.system_to_dict(clifford.decompose(_inverse(args.table)))


def cmd_kernels(args):
    rep = clifford.kernel_image_analysis(_system(args.system))

    def pairs(d):
        return [{"from": a, "to": b, "set": sorted(v)} for (a, b), v in sorted(d.items())]

    def per(d):
        return [{"alpha": a, "set": sorted(v)} for a, v in sorted(d.items())]

    return {
        "image": pairs(rep.image),
        "kernel": pairs(rep.kernel),
        "absolute_image": per(rep.abs_image),
        "absolute_kernel": per(rep.abs_kernel),
        "union_of_kernels": per(rep.union_kernels),
        "covering_images": [
            {"alpha": a, "from": d, "set": sorted(v)}
            for a, covers in sorted(rep.covering_images.items())
            for d, v in sorted(covers.items())
        ],
        "absolute_image_is_subgroup": [
            {"alpha": a, "value": v} for a, v in sorted(rep.abs_image_is_subgroup.items())
        ],
        "is_surjective_system": rep.is_surjective_system,
        "is_image_trivial": rep.is_image_trivial,
    }


def cmd_spined(args):
    return clifford.system_to_dict(clifford.spined_product(_system(args.left), _system(args.right)))


def cmd_trivial_system(args):
    y = validate_semilattice(_table(args.semilattice))
    return clifford.system_to_dict(clifford.trivial_system(y, _table(args.group)))


def cmd_product_system(args):
    y = validate_semilattice(_table(args.semilattice))
    return clifford.system_to_dict(clifford.product_system(y, _table(args.group)))


def _shared_pairs(text):
    try:
        pairs = [item.split(":") for item in text.split(",") if item]
        return [int(a) for a, _ in pairs], [int(b) for _, b in pairs]
    except ValueError:
        raise FormatError(f"--shared expects u:u',... pairs, got {text!r}")


def cmd_amalgamate(args):
    left, right = _shared_pairs(args.shared)
    res = fraisse.imaoka_amalgam(_inverse(args.left), _inverse(args.right), left, right)
    _write_table(res.result.table, args.out)
    return {
        "size": res.result.size,
        "w_size": res.w_size,
        "table": _rows(res.result.table),
        "embed_left": list(res.embed_left.map),
        "embed_right": list(res.embed_right.map),
        "shared_image": sorted(res.shared_image),
    }


def _spec(path, max_size=None):
    spec = fraisse.ClassSpec.from_json(_read_text(path))
    if max_size is not None:
        spec = fraisse.ClassSpec(
            spec.require_commutative, spec.require_inverse, spec.allowed_orders,
            max_size, spec.require_clifford,
        )
    return spec


def cmd_fraisse_check(args):
    spec = _spec(args.spec, args.max_size)
    gen = fraisse.members_up_to(spec)
    report = fraisse.check_class_properties(gen, spec, ap_size=args.ap_size)
    return {"spec": spec.to_dict(), **report.to_dict()}


def cmd_chain(args):
    spec = _spec(args.spec)
    res = fraisse.amalgamation_chain(_table(args.seed), spec, args.steps, args.budget)
    return {
        "sizes": [T.size for T in res.chain],
        "chain": [_rows(T) for T in res.chain],
        "embeddings": [list(e) for e in res.embeddings],
        "extensions": res.extensions,
        "budget_exceeded": res.budget_exceeded,
    }


def build_parser():
    p = argparse.ArgumentParser(prog="invsemi", description=__doc__.splitlines()[0])
    p.add_argument("--cap", type=int, default=24, help="size cap for automorphism-based checks")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, fn, *positional):
        sp = sub.add_parser(name)
        for arg in positional:
            sp.add_argument(arg)
        sp.set_defaults(fn=fn)
        return sp

    verb("analyze", cmd_analyze, "table")
    sp = verb("homog", cmd_homog, "table")
    sp.add_argument("--mode", choices=("inverse", "plain"), default="inverse")
    sp.add_argument("--all-defects", action="store_true")
    verb("aut", cmd_aut, "table")
    sp = verb("iso", cmd_iso, "left", "right")
    sp.add_argument("--limit", type=int, default=None)
    sp = verb("clifford-flatten", cmd_flatten, "system")
    sp.add_argument("--out", default=None, help="also write the table in Cayley text format")
    verb("clifford-decompose", cmd_decompose, "table")
    verb("kernels", cmd_kernels, "system")
    verb("spined", cmd_spined, "left", "right")
    verb("trivial-system", cmd_trivial_system, "semilattice", "group")
    verb("product-system", cmd_product_system, "semilattice", "group")
    sp = verb("amalgamate", cmd_amalgamate, "left", "right")
    sp.add_argument("--shared", required=True, help="matched pairs u:u',... of the common subalgebra")
    sp.add_argument("--out", default=None)
    sp = verb("fraisse-check", cmd_fraisse_check, "spec")
    sp.add_argument("--max-size", type=int, default=None)
    sp.add_argument("--ap-size", type=int, default=None,
                    help="bound on |T|+|T'| for amalgamation instances (default: max size)")
    sp = verb("chain", cmd_chain, "seed", "spec")
    sp.add_argument("--steps", type=int, default=2)
    sp.add_argument("--budget", type=int, default=64)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        report = args.fn(args)
    except AlgebraError as exc:
        sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
        return exc.exit_code
    _emit(report)
    return 0


if __name__ == "__main__":
    sys.exit(main())
