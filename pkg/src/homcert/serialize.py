"""JSON schemas for rings, matrices, submodules, modules, morphisms, and
reports.  Emitted reports re-parse to equal values; dumps are deterministic
(sorted keys, fixed separators)."""
from __future__ import annotations

import json

from .homology import GradeValue
from .modules import FPModule, Morphism, Submodule, present, submodule
from .rings import ParseError, RingDescriptor, Vec
from .subdirect import (
    AppendixReport, Certificate, ComplementResult, SubdirectInstance,
    make_instance,
)


class InputError(ValueError):
    """Malformed input naming file, position, and token where known."""


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def ring_to_json(ring: RingDescriptor) -> dict:
    if ring.is_poly:
        return {"coeffs": "QQ", "vars": list(ring.variables), "order": ring.order}
    return {"coeffs": "ZZ"}


def ring_from_json(data: dict, where: str = "ring") -> RingDescriptor:
    try:
        coeffs = data["coeffs"]
    except (KeyError, TypeError):
        raise InputError(f"{where}: missing 'coeffs'")
    if coeffs == "ZZ":
        return RingDescriptor("ZZ")
    if coeffs == "QQ":
        try:
            return RingDescriptor("QQ", tuple(data.get("vars", ())),
                                  data.get("order", "degrevlex"))
        except ValueError as e:
            raise InputError(f"{where}: {e}")
    raise InputError(f"{where}: unknown coefficient ring {coeffs!r}")


def vec_to_json(v: Vec, ring: RingDescriptor) -> list:
    return [ring.to_str(e) for e in v]


def vec_from_json(entries, ring: RingDescriptor, where: str) -> Vec:
    out = []
    for j, text in enumerate(entries):
        try:
            out.append(ring.parse(str(text)))
        except ParseError as e:
            raise InputError(f"{where}: entry {j}: {e}")
    return tuple(out)


def matrix_to_json(columns, nrows: int, ring: RingDescriptor) -> dict:
    """Columns are vectors of length nrows (the spec's column convention)."""
    return {
        "rows": nrows,
        "cols": len(columns),
        "entries": [[ring.to_str(col[i]) for col in columns]
                    for i in range(nrows)],
    }


def matrix_from_json(data: dict, ring: RingDescriptor, where: str):
    """Returns (nrows, columns)."""
    try:
        nrows, ncols = int(data["rows"]), int(data["cols"])
        entries = data["entries"]
    except (KeyError, TypeError, ValueError):
        raise InputError(f"{where}: matrix needs 'rows', 'cols', 'entries'")
    if len(entries) != nrows or any(len(row) != ncols for row in entries):
        raise InputError(f"{where}: entries do not match rows x cols")
    cols = []
    for k in range(ncols):
        cols.append(vec_from_json([entries[i][k] for i in range(nrows)],
                                  ring, f"{where}: column {k}"))
    return nrows, cols


def images_to_json(f: Morphism) -> dict:
    """Morphism matrix, one row per source generator."""
    ring = f.ring
    return {
        "rows": f.source.ngens,
        "cols": f.target.ngens,
        "entries": [vec_to_json(v, ring) for v in f.images],
    }


def submodule_to_json(sub: Submodule) -> dict:
    return {
        "rank": sub.rank,
        "generators": [vec_to_json(g, sub.ring) for g in sub.gens],
    }


def submodule_from_json(data: dict, ring: RingDescriptor, where: str) -> Submodule:
    try:
        rank = int(data["rank"])
        gens = data["generators"]
    except (KeyError, TypeError, ValueError):
        raise InputError(f"{where}: submodule needs 'rank' and 'generators'")
    vecs = []
    for i, g in enumerate(gens):
        if len(g) != rank:
            raise InputError(f"{where}: generator {i} has length {len(g)}, not {rank}")
        vecs.append(vec_from_json(g, ring, f"{where}: generator {i}"))
    return submodule(ring, rank, vecs)


def module_to_json(M: FPModule) -> dict:
    return {
        "ring": ring_to_json(M.ring),
        "generators": M.ngens,
        "relations": [vec_to_json(r, M.ring) for r in M.relations],
    }


def module_from_json(data: dict, where: str,
                     ring: RingDescriptor | None = None) -> FPModule:
    if ring is None:
        if "ring" not in data:
            raise InputError(f"{where}: module file carries no ring and none was given")
        ring = ring_from_json(data["ring"], f"{where}: ring")
    try:
        g = int(data["generators"])
        rels = data["relations"]
    except (KeyError, TypeError, ValueError):
        raise InputError(f"{where}: module needs 'generators' and 'relations'")
    vecs = []
    for i, r in enumerate(rels):
        if len(r) != g:
            raise InputError(f"{where}: relation {i} has length {len(r)}, not {g}")
        vecs.append(vec_from_json(r, ring, f"{where}: relation {i}"))
    return present(ring, g, vecs)


def instance_from_json(data: dict, where: str,
                       ring: RingDescriptor | None = None) -> SubdirectInstance:
    if ring is None:
        if "ring" not in data:
            raise InputError(f"{where}: instance file carries no ring")
        ring = ring_from_json(data["ring"], f"{where}: ring")
    try:
        q = int(data["q"])
    except (KeyError, TypeError, ValueError):
        raise InputError(f"{where}: instance needs 'q'")
    A = submodule_from_json(data["A"], ring, f"{where}: A")
    B = submodule_from_json(data["B"], ring, f"{where}: B")
    if A.rank != q or B.rank != q:
        raise InputError(f"{where}: submodule ranks do not match q={q}")
    return make_instance(ring, q, A.gens, B.gens)


def instance_to_json(inst: SubdirectInstance) -> dict:
    return {
        "ring": ring_to_json(inst.ring),
        "q": inst.q,
        "A": submodule_to_json(inst.A),
        "B": submodule_to_json(inst.B),
    }


def grade_to_json(g: GradeValue):
    return g.to_json()


def certificate_to_json(cert: Certificate) -> dict:
    grade_json = None if cert.grade_T is None else grade_to_json(cert.grade_T)
    out = {
        "regular": cert.regular,
        "regular_interconnection": cert.regular,
        "grade_T": grade_json,
        "autonomy_degree": grade_json,
        "hypothesis_met": cert.hypothesis_met,
        "interconnection": None if cert.interconnection is None
        else module_to_json(cert.interconnection),
        "torsion_preimage": None if cert.torsion_preimage is None
        else submodule_to_json(cert.torsion_preimage),
        "tf_factor": None if cert.tf_factor is None
        else module_to_json(cert.tf_factor),
        "largest_controllable_subbehavior": None if cert.tf_factor is None
        else module_to_json(cert.tf_factor),
        "projective": cert.projective,
        "rank": cert.rank,
        "section": None if cert.section is None else images_to_json(cert.section),
        "stably_free_note": cert.stably_free_note,
        "note": "projective implies stably free over an FFR backend; "
                "freeness itself is not certified (no Quillen-Suslin step)",
        "failure_reason": cert.failure_reason,
    }
    return out


def complement_to_json(res: ComplementResult) -> dict:
    return {
        "complement": None if res.complement is None
        else submodule_to_json(res.complement),
        "contains_B": res.complement is not None,
        "ext_witness": None if res.ext_witness is None
        else module_to_json(res.ext_witness),
        "iso_to_quotient": None if res.iso_to_quotient is None
        else images_to_json(res.iso_to_quotient),
    }


def appendix_to_json(rep: AppendixReport) -> dict:
    return {
        "splits": rep.splits,
        "ext1_T_A_vanishes": rep.ext_vanishes,
        "equivalent": rep.equivalent,
        "retraction": None if rep.retraction is None
        else images_to_json(rep.retraction),
        "section": None if rep.section is None else images_to_json(rep.section),
        "ext_witness": None if rep.ext_witness is None
        else module_to_json(rep.ext_witness),
    }
