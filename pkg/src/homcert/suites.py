"""Randomized acceptance suites, seedable and runnable from pytest or the
scripts.  Each suite returns a SuiteResult with one pass/fail verdict."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import groebner
from .rings import Polynomial, const, poly_ring, int_ring, unit_vector, vis_zero, vzero
from .modules import (
    compose, direct_sum, engine, evaluation_map, free_module, identity,
    kernel, morphism, present, submodule,
)
from .homology import (
    GradeValue, annihilator, auslander_dual, codimension, element_is_torsion,
    ext, free_embedding, grade, invariants_agree, module_rank,
    torsion_submodule,
)
from .snf import oracle_homology_raw
from .subdirect import (
    appendix_equivalence_check, base_family, certify, complement_above,
    check_regular, interconnection_module, is_projective, make_instance,
    random_shear, structured_instances,
)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    seconds: float
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        msg = f"[{status}] {self.name}: {self.checked} checks in {self.seconds:.1f}s"
        if self.failures:
            msg += f" | first failure: {self.failures[0]}"
        return msg


def _finish(name, t0, checked, failures) -> SuiteResult:
    return SuiteResult(name, not failures, checked, time.time() - t0,
                       failures[:5])


# ---------------------------------------------------------------------------
# random generators

def random_poly(rng: random.Random, ring, max_degree=2, max_terms=2,
                allow_zero=True):
    while True:
        p = ring.zero()
        for _ in range(rng.randint(0 if allow_zero else 1, max_terms)):
            c = rng.choice([-2, -1, 1, 2, 3])
            mono = const(ring, c)
            for _ in range(rng.randint(0, max_degree)):
                mono = mono * ring.variable(rng.choice(ring.variables))
            p = p + mono
        if allow_zero or not p.is_zero:
            return p


def random_vector(rng, ring, rank, max_degree=2):
    return tuple(random_poly(rng, ring, max_degree) for _ in range(rank))


def random_module(rng, ring, max_g=3, max_rel=4, max_degree=2):
    g = rng.randint(1, max_g)
    rels = [random_vector(rng, ring, g, max_degree)
            for _ in range(rng.randint(0, max_rel))]
    return present(ring, g, [r for r in rels if not vis_zero(r)])


# ---------------------------------------------------------------------------
# 1. Groebner soundness

def groebner_soundness(seed=0, count=100) -> SuiteResult:
    t0 = time.time()
    rng = random.Random(seed)
    rings = [poly_ring("x", "y"), poly_ring("x", "y", "z")]
    failures, checked = [], 0
    for n in range(count):
        ring = rings[n % 2]
        q = rng.randint(1, 3)
        gens = [random_vector(rng, ring, q) for _ in range(rng.randint(1, 4))]
        gens = [g for g in gens if not vis_zero(g)] or [random_vector(rng, ring, q, 1)]
        gb = groebner.buchberger(gens, ring, q)
        if not groebner.check_buchberger_criterion(gb):
            failures.append(f"#{n}: Buchberger criterion fails")
        v = random_vector(rng, ring, q)
        nf = gb.normal_form(v)
        if gb.normal_form(nf) != nf:
            failures.append(f"#{n}: normal form not idempotent")
        # member: random combination of the generators
        coeffs = [random_poly(rng, ring, 1) for _ in gens]
        w = list(vzero(ring, q))
        for c, g in zip(coeffs, gens):
            for j in range(q):
                w[j] = w[j] + c * g[j]
        w = tuple(w)
        lifted = gb.lift_original(w)
        if lifted is None or not gb.member(w):
            failures.append(f"#{n}: membership broken for a known member")
        else:
            back = list(vzero(ring, q))
            for c, g in zip(lifted, gens):
                for j in range(q):
                    back[j] = back[j] + c * g[j]
            if tuple(back) != w:
                failures.append(f"#{n}: lift does not reproduce the target")
        if not vis_zero(nf) and gb.lift_original(v) is not None:
            failures.append(f"#{n}: lift found for a non-member")
        syz = groebner.syzygies(gens, ring, q)
        for s in syz:
            prod = list(vzero(ring, q))
            for c, g in zip(s, gens):
                for j in range(q):
                    prod[j] = prod[j] + c * g[j]
            if not vis_zero(tuple(prod)):
                failures.append(f"#{n}: syzygy product nonzero")
                break
        checked += 1
    return _finish("groebner soundness", t0, checked, failures)


# ---------------------------------------------------------------------------
# 2. SNF cross-validation

def snf_cross_validation(seed=0, count=200) -> SuiteResult:
    t0 = time.time()
    rng = random.Random(seed)
    ZZ = int_ring()
    failures, checked = [], 0
    for n in range(count):
        g = rng.randint(1, 5)
        r = rng.randint(0, 6)
        cols = [tuple(rng.randint(-20, 20) for _ in range(g)) for _ in range(r)]
        oracle = oracle_homology_raw(g, cols)
        M = present(ZZ, g, cols)
        tor = torsion_submodule(M)
        t_shape = oracle_homology_raw(tor.module.ngens, list(tor.module.relations))
        if (t_shape.free_rank, t_shape.torsion_factors) != (0, oracle.torsion_factors):
            failures.append(f"#{n}: torsion mismatch")
        from .modules import dual
        d = dual(M)
        d_shape = oracle_homology_raw(d.module.ngens, list(d.module.relations))
        if (d_shape.free_rank, d_shape.torsion_factors) != (oracle.dual_rank, ()):
            failures.append(f"#{n}: dual mismatch")
        e1 = ext(1, M)
        e_shape = oracle_homology_raw(e1.ngens, list(e1.relations))
        if (e_shape.free_rank, e_shape.torsion_factors) != (0, oracle.ext1_factors):
            failures.append(f"#{n}: ext1 mismatch")
        if grade(M) != oracle.grade:
            failures.append(f"#{n}: grade mismatch")
        checked += 1
    return _finish("snf cross-validation", t0, checked, failures)


# ---------------------------------------------------------------------------
# 3. sequence (epsilon)

def epsilon_sequence(seed=0, count=50) -> SuiteResult:
    t0 = time.time()
    rng = random.Random(seed)
    ring = poly_ring("x", "y")
    failures, checked = [], 0
    for n in range(count):
        M = random_module(rng, ring)
        eps = evaluation_map(M)
        tor = kernel(eps)
        for v in tor.images:
            if not element_is_torsion(M, v):
                failures.append(f"#{n}: evaluation-kernel generator not torsion")
                break
        tf = present(ring, M.ngens, list(M.relations) + list(tor.images))
        eps2 = kernel(evaluation_map(tf))
        if not eps2.source.is_zero:
            failures.append(f"#{n}: quotient by the evaluation kernel not torsionless")
        aus = auslander_dual(M)
        e1 = ext(1, aus)
        if e1.is_zero != tor.source.is_zero:
            failures.append(f"#{n}: Ext^1(A(M),R)=0 iff ker eps=0 fails")
        checked += 1
    return _finish("sequence (epsilon)", t0, checked, failures)


# ---------------------------------------------------------------------------
# 4. grade = codimension

def grade_codim_agreement(seed=0, count=40) -> SuiteResult:
    t0 = time.time()
    rng = random.Random(seed)
    rings = [poly_ring("x", "y"), poly_ring("x", "y", "z")]
    failures, checked = [], 0
    for n in range(count):
        ring = rings[n % 2]
        M = random_module(rng, ring)
        if grade(M) != codimension(M):
            failures.append(f"#{n}: grade != codim")
        checked += 1
    R2 = poly_ring("x", "y")
    x, y = R2.variable("x"), R2.variable("y")
    fixed = [
        (present(R2, 1, [(x,), (y,)]), GradeValue(2)),
        (present(R2, 1, [(x,)]), GradeValue(1)),
        (present(R2, 0, []), GradeValue(None)),
    ]
    for M, expect in fixed:
        if grade(M) != expect:
            failures.append(f"fixed point grade {expect} wrong")
        checked += 1
    return _finish("grade = codimension", t0, checked, failures)


# ---------------------------------------------------------------------------
# 5. main theorem suite

def _main_theorem_instances(seed=0, count=20):
    rng = random.Random(seed)
    base = structured_instances(poly_ring("x", "y")) \
        + structured_instances(poly_ring("x", "y", "z"), b_values=(1,))
    out = []
    i = 0
    while len(out) < count:
        inst = base[i % len(base)]
        out.append(random_shear(inst, rng, 6))
        i += 1
    return out


def main_theorem(seed=0, count=20) -> SuiteResult:
    t0 = time.time()
    failures, checked = [], 0
    certificates = []
    for n, inst in enumerate(_main_theorem_instances(seed, count)):
        cert = certify(inst)
        certificates.append((inst, cert))
        if not cert.hypothesis_met:
            failures.append(f"#{n}: structured instance rejected "
                            f"({cert.failure_reason})")
            checked += 1
            continue
        if not cert.projective:
            failures.append(f"#{n}: torsion-free factor not certified projective")
        pi = morphism(free_module(inst.ring, inst.q), cert.tf_factor,
                      [unit_vector(inst.ring, inst.q, i) for i in range(inst.q)])
        if cert.section is None or not compose(pi, cert.section).equals(
                identity(cert.tf_factor)):
            failures.append(f"#{n}: section does not split the projection")
        checked += 1
    # canonical instance
    R2 = poly_ring("x", "y")
    x, y = R2.variable("x"), R2.variable("y")
    z, one = R2.zero(), R2.one()
    canon = make_instance(R2, 2, [(x, z), (y, z)], [(z, one)])
    cert = certify(canon)
    if not (cert.hypothesis_met and cert.projective and cert.rank == 1):
        failures.append("canonical instance must certify with rank 1")
    checked += 1
    return _finish("main theorem certification", t0, checked, failures)


# ---------------------------------------------------------------------------
# 6. non-vacuity negatives

def non_vacuity(seed=0) -> SuiteResult:
    t0 = time.time()
    failures, checked = [], 0
    R2 = poly_ring("x", "y")
    x, y = R2.variable("x"), R2.variable("y")
    neg = make_instance(R2, 2, [(x, y)], [(y, x)])
    cert = certify(neg)
    if not (cert.regular and cert.failure_reason == "grade_too_small"):
        failures.append("grade-1 instance must fail with grade_too_small")
    if cert.grade_T != GradeValue(1):
        failures.append("grade of the interconnection must be exactly 1")
    proj, rank = is_projective(present(R2, 2, [(x, y)]))
    if proj or rank != 1:
        failures.append("M = R^2/<(x,y)> must be non-projective of rank 1")
    if cert.projective:
        failures.append("certificate must report the non-projective factor")
    checked += 4
    rng = random.Random(seed)
    for n in range(5):
        a = (random_poly(rng, R2, 2, 2, allow_zero=False),)
        b = (random_poly(rng, R2, 2, 2, allow_zero=False),)
        inst = make_instance(R2, 1, [a], [b])
        cert = certify(inst)
        if cert.regular or cert.failure_reason != "not_regular":
            failures.append(f"q=1 #{n}: nonzero ideals must be rejected as not_regular")
        checked += 1
    return _finish("non-vacuity negatives", t0, checked, failures)


# ---------------------------------------------------------------------------
# 7. lemma key / splitting theorem

def _certified_instances(seed=0, count=20):
    return [(inst, certify(inst)) for inst in _main_theorem_instances(seed, count)]


def lemma_key(seed=0, count=20) -> SuiteResult:
    t0 = time.time()
    failures, checked = [], 0
    for n, (inst, cert) in enumerate(_certified_instances(seed, count)):
        if not cert.hypothesis_met:
            continue
        ring, q = inst.ring, inst.q
        quotient_inst = make_instance(ring, q, cert.torsion_preimage.gens,
                                      inst.B.gens)
        res = complement_above(quotient_inst)
        if not res.present:
            failures.append(f"#{n}: complement absent after torsion quotient")
            checked += 1
            continue
        Bp = res.complement
        Ap = quotient_inst.A
        if not Bp.contains(inst.B):
            failures.append(f"#{n}: B not contained in B'")
        if not Ap.intersect(Bp).is_zero:
            failures.append(f"#{n}: A' meets B'")
        total = Ap.sum(Bp)
        if not all(total.member(unit_vector(ring, q, i)) for i in range(q)):
            failures.append(f"#{n}: A' + B' != R^q")
        # the proof's intersection step: A' cap (A + B) = A
        eng = engine(ring)
        s = inst.A.sum(inst.B)
        lhs = Ap.intersect(s)
        if not eng.submodule_equal(list(lhs.gens), list(inst.A.gens), ring, q):
            failures.append(f"#{n}: A' cap (A+B) != A")
        checked += 1
    # canonical pre-quotient instance: absent with Ext^1(T, A) = R/(x,y)
    R2 = poly_ring("x", "y")
    x, y = R2.variable("x"), R2.variable("y")
    z, one = R2.zero(), R2.one()
    canon = make_instance(R2, 2, [(x, z), (y, z)], [(z, one)])
    res = complement_above(canon)
    T0 = present(R2, 1, [(x,), (y,)])
    if res.present:
        failures.append("canonical instance must have no complement")
    elif not invariants_agree(res.ext_witness, T0):
        failures.append("Ext witness must agree with R/(x,y)")
    checked += 1
    return _finish("lemma key / splitting", t0, checked, failures)


# ---------------------------------------------------------------------------
# 8. appendix equivalence

def _appendix_instances(seed=0, count=20):
    rng = random.Random(seed)
    rings = [poly_ring("x", "y"), poly_ring("x", "y", "z")]
    out = []
    i = 0
    while len(out) < count:
        ring = rings[i % 2]
        kind = i % 4
        base = structured_instances(ring, b_values=(1,))
        inst = base[(i // 2) % len(base)]
        if kind in (0, 1):
            out.append(random_shear(inst, rng, 3))
        elif kind == 2:
            # post-quotient shape: free pivot rows, T = 0
            cert = certify(inst)
            out.append(random_shear(
                make_instance(ring, inst.q, cert.torsion_preimage.gens,
                              inst.B.gens), rng, 3))
        else:
            # free pivot with a maximal-ideal complement: splits nontrivially
            z, one = ring.zero(), ring.one()
            vs = [ring.variable(v) for v in ring.variables]
            a_gens = [(one, z)]
            b_gens = [(z, v) for v in vs]
            out.append(random_shear(make_instance(ring, 2, a_gens, b_gens),
                                    rng, 3))
        i += 1
    return out


def appendix_equivalence(seed=0, count=20) -> SuiteResult:
    t0 = time.time()
    failures, checked = [], 0
    for n, inst in enumerate(_appendix_instances(seed, count)):
        T = interconnection_module(inst)
        if not grade(T).at_least(2):
            failures.append(f"#{n}: generated instance without grade >= 2")
            checked += 1
            continue
        rep = appendix_equivalence_check(inst)
        if not rep.equivalent:
            failures.append(f"#{n}: equivalence fails")
        if rep.splits and rep.retraction is None:
            failures.append(f"#{n}: split without a retraction witness")
        checked += 1
    R2 = poly_ring("x", "y")
    x, y = R2.variable("x"), R2.variable("y")
    z, one = R2.zero(), R2.one()
    canon = make_instance(R2, 2, [(x, z), (y, z)], [(z, one)])
    rep = appendix_equivalence_check(canon)
    if rep.splits or rep.ext_vanishes:
        failures.append("canonical witness must report both sides false")
    checked += 1
    return _finish("appendix equivalence", t0, checked, failures)


# ---------------------------------------------------------------------------
# 9. free embedding

def free_embedding_suite(seed=0, count=20) -> SuiteResult:
    t0 = time.time()
    failures, checked = [], 0
    mods = [cert.tf_factor
            for _, cert in _certified_instances(seed, count)
            if cert.hypothesis_met]
    R2 = poly_ring("x", "y")
    x, y = R2.variable("x"), R2.variable("y")
    mods.append(present(R2, 2, [(x, y)]))
    mods = mods[:count]
    for n, M in enumerate(mods):
        try:
            j = free_embedding(M)
        except Exception as e:
            failures.append(f"#{n}: embedding failed: {e}")
            checked += 1
            continue
        if not kernel(j).source.is_zero:
            failures.append(f"#{n}: embedding kernel nonzero")
        checked += 1
    return _finish("free embedding", t0, checked, failures)


# ---------------------------------------------------------------------------
# 10. grade inheritance

def grade_inheritance(seed=0, count=30) -> SuiteResult:
    t0 = time.time()
    rng = random.Random(seed)
    rings = [poly_ring("x", "y"), poly_ring("x", "y", "z")]
    failures, checked = [], 0
    n = 0
    while checked < count:
        ring = rings[n % 2]
        fam = base_family(ring)
        a, ugens = fam[rng.randrange(len(fam))]
        T = present(ring, a, ugens)
        if not grade(T).at_least(2):
            failures.append(f"#{n}: family module without grade >= 2")
            break
        extra = [random_vector(rng, ring, a, 2)
                 for _ in range(rng.randint(1, 2))]
        T2 = present(ring, a, list(T.relations) + extra)
        if not grade(T2).at_least(2):
            failures.append(f"#{n}: factor lost grade >= 2")
        checked += 1
        n += 1
    return _finish("grade inheritance", t0, checked, failures)


ALL_SUITES = [
    groebner_soundness,
    snf_cross_validation,
    epsilon_sequence,
    grade_codim_agreement,
    main_theorem,
    non_vacuity,
    lemma_key,
    appendix_equivalence,
    free_embedding_suite,
    grade_inheritance,
]


def run_all(seed=0):
    results = []
    for fn in ALL_SUITES:
        results.append(fn(seed=seed))
    return results
