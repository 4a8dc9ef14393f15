"""Command-line surface.

Exit codes: 0 = computed and (where applicable) the hypothesis/property
holds; 1 = computed but the hypothesis fails (a valid mathematical outcome,
e.g. a certificate with a failure reason or a non-split epi); 2 = input or
budget error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import serialize as ser
from .groebner import (
    BudgetExceededError, DEFAULT_SPAIR_BUDGET, buchberger, lt_dimension,
    normal_form, spair_budget, submodule_intersect, syzygies,
)
from .homology import (
    TorsionError, annihilator, auslander_dual, codimension, ext,
    free_embedding, free_resolution, grade, torsion_submodule,
    torsionfree_factor,
)
from .modules import free_module, identity_images, morphism, present, submodule
from .rings import RingDescriptor
from .snf import oracle_homology
from .subdirect import (
    BUDGET_EXCEEDED, ExtPreconditionError, appendix_equivalence_check,
    certify, complement_above, interconnection_module, split_surjection,
)


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ser.InputError(f"{path}: no such file")
    except json.JSONDecodeError as e:
        raise ser.InputError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}")


def _ring(args) -> RingDescriptor:
    if not getattr(args, "ring", None):
        raise ser.InputError("--ring is required for this subcommand")
    return ser.ring_from_json(_load_json(args.ring), args.ring)


def _module(args, ring: RingDescriptor | None = None):
    data = _load_json(args.module)
    if ring is None and getattr(args, "ring", None):
        ring = _ring(args)
    return ser.module_from_json(data, args.module, ring)


def _submodule(args, attr: str, ring: RingDescriptor):
    path = getattr(args, attr)
    return ser.submodule_from_json(_load_json(path), ring, path)


def _instance(args):
    if getattr(args, "instance", None):
        return ser.instance_from_json(_load_json(args.instance), args.instance)
    ring = _ring(args)
    from .subdirect import make_instance
    A = _submodule(args, "A", ring)
    B = _submodule(args, "B", ring)
    if A.rank != args.q or B.rank != args.q:
        raise ser.InputError(f"submodule ranks do not match --q {args.q}")
    return make_instance(ring, args.q, A.gens, B.gens)


def _emit(args, payload: dict) -> None:
    text = ser.dumps(payload)
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommand handlers (each returns an exit code)

def _cmd_gb(args) -> int:
    ring = _ring(args)
    sub = _submodule(args, "sub", ring)
    _emit(args, {"ring": ser.ring_to_json(ring),
                 "rank": sub.rank, "reduced": True,
                 "generators": [ser.vec_to_json(g, ring) for g in sub.gens]})
    return 0


def _cmd_nf(args) -> int:
    ring = _ring(args)
    sub = _submodule(args, "sub", ring)
    vec_data = _load_json(args.vector)
    v = ser.vec_from_json(vec_data["entries"], ring, args.vector)
    if len(v) != sub.rank:
        raise ser.InputError(f"{args.vector}: vector length != rank {sub.rank}")
    nf = sub.basis.normal_form(v)
    _emit(args, {"normal_form": ser.vec_to_json(nf, ring),
                 "member": all(ring.to_str(e) == "0" for e in nf)})
    return 0


def _cmd_syz(args) -> int:
    ring = _ring(args)
    nrows, cols = ser.matrix_from_json(_load_json(args.matrix), ring, args.matrix)
    from .modules import engine
    syz = engine(ring).syzygies(cols, ring, nrows)
    _emit(args, {"matrix": ser.matrix_to_json(list(syz), len(cols), ring)})
    return 0


def _cmd_intersect(args) -> int:
    ring = _ring(args)
    A = _submodule(args, "A", ring)
    B = _submodule(args, "B", ring)
    if A.rank != B.rank:
        raise ser.InputError("submodules live in different ambient ranks")
    _emit(args, {"intersection": ser.submodule_to_json(A.intersect(B))})
    return 0


def _cmd_resolve(args) -> int:
    M = _module(args)
    res = free_resolution(M, args.length)
    ring = M.ring
    diffs = []
    for i in range(1, len(res.ranks)):
        diffs.append(ser.matrix_to_json(list(res.diff(i)), res.rank(i - 1), ring))
    _emit(args, {"ranks": list(res.ranks), "differentials": diffs})
    return 0


def _cmd_ext(args) -> int:
    M = _module(args)
    N = None
    if args.against:
        N = ser.module_from_json(_load_json(args.against), args.against, M.ring)
    E = ext(args.i, M, N)
    _emit(args, {"ext": ser.module_to_json(E), "index": args.i,
                 "is_zero": E.is_zero})
    return 0


def _cmd_grade(args) -> int:
    M = _module(args)
    g = ser.grade_to_json(grade(M))
    _emit(args, {"grade": g, "autonomy_degree": g})
    return 0


def _cmd_codim(args) -> int:
    M = _module(args)
    if not M.ring.is_poly:
        raise ser.InputError(
            "codimension is reported only for the polynomial backend")
    _emit(args, {"codimension": ser.grade_to_json(codimension(M))})
    return 0


def _cmd_annihilator(args) -> int:
    M = _module(args)
    _emit(args, {"annihilator": ser.submodule_to_json(annihilator(M))})
    return 0


def _cmd_auslander(args) -> int:
    M = _module(args)
    _emit(args, {"auslander_dual": ser.module_to_json(auslander_dual(M))})
    return 0


def _cmd_torsion(args) -> int:
    M = _module(args)
    tor = torsion_submodule(M)
    _emit(args, {
        "torsion_generators": [ser.vec_to_json(v, M.ring)
                               for v in tor.inclusion.images],
        "module": ser.module_to_json(tor.module),
        "preimage": ser.submodule_to_json(tor.preimage),
    })
    return 0


def _cmd_tf_factor(args) -> int:
    M = _module(args)
    epi = torsionfree_factor(M)
    mod_json = ser.module_to_json(epi.target)
    _emit(args, {"module": mod_json,
                 "largest_controllable_subbehavior": mod_json})
    return 0


def _cmd_embed(args) -> int:
    M = _module(args)
    try:
        j = free_embedding(M)
    except TorsionError as e:
        _emit(args, {"error": "not_torsion_free",
                     "torsion_generators": [ser.vec_to_json(v, M.ring)
                                            for v in e.witness.inclusion.images]})
        return 1
    _emit(args, {"target_rank": j.target.ngens, "images": ser.images_to_json(j)})
    return 0


def _cmd_split(args) -> int:
    ring = _ring(args)
    A = _submodule(args, "A", ring)
    if A.rank != args.q:
        raise ser.InputError(f"submodule rank does not match --q {args.q}")
    M = present(ring, args.q, A.gens)
    pi = morphism(free_module(ring, args.q), M, identity_images(ring, args.q))
    sigma = split_surjection(pi)
    _emit(args, {"section": None if sigma is None else ser.images_to_json(sigma)})
    return 0 if sigma is not None else 1


def _cmd_complement(args) -> int:
    inst = _instance(args)
    res = complement_above(inst)
    _emit(args, ser.complement_to_json(res))
    return 0 if res.present else 1


def _cmd_certify(args) -> int:
    if args.batch:
        return _certify_batch(args)
    inst = _instance(args)
    cert = certify(inst)
    _emit(args, ser.certificate_to_json(cert))
    if cert.failure_reason == BUDGET_EXCEEDED:
        return 2
    return 0 if cert.hypothesis_met else 1


def _certify_one_file(path: str) -> tuple:
    inst = ser.instance_from_json(_load_json(path), path)
    cert = certify(inst)
    code = 2 if cert.failure_reason == BUDGET_EXCEEDED else \
        (0 if cert.hypothesis_met else 1)
    return path, code, ser.certificate_to_json(cert)


def _certify_batch(args) -> int:
    paths = list(args.batch)
    results = []
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_certify_one_file, paths))
    else:
        results = [_certify_one_file(p) for p in paths]
    _emit(args, {"results": [{"file": p, "exit_code": c, "certificate": cert}
                             for p, c, cert in results]})
    return max((c for _, c, _ in results), default=0)


def _cmd_appendix(args) -> int:
    inst = _instance(args)
    try:
        rep = appendix_equivalence_check(inst)
    except ExtPreconditionError as e:
        _emit(args, {"error": "ext1_T_P_nonzero",
                     "ext_witness": ser.module_to_json(e.witness)})
        return 2
    _emit(args, ser.appendix_to_json(rep))
    return 0


def _cmd_oracle(args) -> int:
    M = _module(args)
    if M.ring.is_poly:
        raise ser.InputError("the oracle runs over the integer backend only")
    o = oracle_homology(M)
    _emit(args, {
        "free_rank": o.free_rank,
        "invariant_factors": list(o.torsion_factors),
        "torsion": list(o.torsion_factors),
        "dual_rank": o.dual_rank,
        "ext1": list(o.ext1_factors),
        "grade": ser.grade_to_json(o.grade),
    })
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="homcert",
        description="Exact homological certification for finitely presented "
                    "modules over QQ[x1..xn] and ZZ.")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, ring=False, module=False, out=True):
        if ring:
            p.add_argument("--ring", help="ring descriptor JSON file")
        if module:
            p.add_argument("--module", required=True, help="module JSON file")
            p.add_argument("--ring", help="optional ring override")
        if out:
            p.add_argument("--out", default="-", help="output path (default stdout)")
        p.add_argument("--budget", type=int, default=DEFAULT_SPAIR_BUDGET,
                       help="S-pair budget for basis computations")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized batch modes")

    p = sub.add_parser("gb", help="reduced basis of a submodule")
    common(p, ring=True)
    p.add_argument("--sub", required=True)
    p.set_defaults(fn=_cmd_gb)

    p = sub.add_parser("nf", help="normal form of a vector")
    common(p, ring=True)
    p.add_argument("--sub", required=True)
    p.add_argument("--vector", required=True)
    p.set_defaults(fn=_cmd_nf)

    p = sub.add_parser("syz", help="syzygies of matrix columns")
    common(p, ring=True)
    p.add_argument("--matrix", required=True)
    p.set_defaults(fn=_cmd_syz)

    p = sub.add_parser("intersect", help="intersection of two submodules")
    common(p, ring=True)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.set_defaults(fn=_cmd_intersect)

    p = sub.add_parser("resolve", help="free resolution")
    common(p, module=True)
    p.add_argument("--length", type=int, default=2)
    p.set_defaults(fn=_cmd_resolve)

    p = sub.add_parser("ext", help="Ext^i(M, N); N defaults to R")
    common(p, module=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--against", help="module JSON file for N")
    p.set_defaults(fn=_cmd_ext)

    p = sub.add_parser("grade", help="grade (degree of autonomy)")
    common(p, module=True)
    p.set_defaults(fn=_cmd_grade)

    p = sub.add_parser("codim", help="codimension via the annihilator")
    common(p, module=True)
    p.set_defaults(fn=_cmd_codim)

    p = sub.add_parser("annihilator", help="annihilator ideal")
    common(p, module=True)
    p.set_defaults(fn=_cmd_annihilator)

    p = sub.add_parser("auslander", help="Auslander dual")
    common(p, module=True)
    p.set_defaults(fn=_cmd_auslander)

    p = sub.add_parser("torsion", help="torsion submodule")
    common(p, module=True)
    p.set_defaults(fn=_cmd_torsion)

    p = sub.add_parser("tf-factor", help="torsion-free factor "
                                         "(largest controllable subbehavior)")
    common(p, module=True)
    p.set_defaults(fn=_cmd_tf_factor)

    p = sub.add_parser("embed", help="embedding into a finite-rank free module")
    common(p, module=True)
    p.set_defaults(fn=_cmd_embed)

    p = sub.add_parser("split", help="section of R^q ->> R^q/A")
    common(p, ring=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--A", required=True)
    p.set_defaults(fn=_cmd_split)

    p = sub.add_parser("complement", help="complement of A above B (key lemma)")
    common(p, ring=True)
    p.add_argument("--q", type=int)
    p.add_argument("--A")
    p.add_argument("--B")
    p.add_argument("--instance")
    p.set_defaults(fn=_cmd_complement)

    p = sub.add_parser("certify", help="full projectivity certificate")
    common(p, ring=True)
    p.add_argument("--q", type=int)
    p.add_argument("--A")
    p.add_argument("--B")
    p.add_argument("--instance")
    p.add_argument("--batch", nargs="*", help="instance files for batch mode")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=_cmd_certify)

    p = sub.add_parser("appendix-check", help="split <=> Ext^1(T,A)=0 under "
                                              "Ext^1(T,P)=0")
    common(p, ring=True)
    p.add_argument("--q", type=int)
    p.add_argument("--A")
    p.add_argument("--B")
    p.add_argument("--instance")
    p.set_defaults(fn=_cmd_appendix)

    p = sub.add_parser("oracle", help="SNF closed forms over ZZ")
    common(p, module=True)
    p.set_defaults(fn=_cmd_oracle)

    return top


def run(argv) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        with spair_budget(args.budget):
            return args.fn(args)
    except ser.InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BudgetExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
