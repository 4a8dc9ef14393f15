"""The theorem engine: regularity of interconnections, the grade >= 2
hypothesis, projectivity certification of the torsion-free factor with an
explicit verified section, complements above a kernel, and the appendix
equivalence between extension splitting and Ext vanishing.

Instances always take a free cover P = R^q; the general projective P of the
underlying statements is reached through the free case.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .groebner import BudgetExceededError
from .homology import (
    GradeValue, INFINITE_GRADE, ext, fitting_ideal, grade, module_rank,
    presentation_rank, torsion_submodule,
)
from .modules import (
    FPModule, Morphism, Submodule, identity, identity_images, morphism,
    present, free_module, solve_extension, solve_lift, submodule,
    short_exact_sequence,
)
from .rings import RingDescriptor, unit_vector

NOT_REGULAR = "not_regular"
GRADE_TOO_SMALL = "grade_too_small"
BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class SubdirectInstance:
    """Equation submodules A, B <= R^q presenting M = R^q/A and N = R^q/B."""

    ring: RingDescriptor
    q: int
    A: Submodule
    B: Submodule


def make_instance(ring: RingDescriptor, q: int, a_gens, b_gens) -> SubdirectInstance:
    return SubdirectInstance(ring, q, submodule(ring, q, a_gens),
                             submodule(ring, q, b_gens))


def check_regular(inst: SubdirectInstance) -> bool:
    """A and B intersect trivially (regular interconnection)."""
    return inst.A.intersect(inst.B).is_zero


def interconnection_module(inst: SubdirectInstance) -> FPModule:
    """T = R^q/(A+B)."""
    return present(inst.ring, inst.q, list(inst.A.gens) + list(inst.B.gens))


def quotient_module(inst: SubdirectInstance, side: str = "A") -> FPModule:
    sub = inst.A if side == "A" else inst.B
    return present(inst.ring, inst.q, sub.gens)


def is_projective(M: FPModule):
    """(projective?, rank) by the constant-rank Fitting criterion."""
    r = module_rank(M)
    fitt_r = fitting_ideal(M, r)
    fitt_below = fitting_ideal(M, r - 1)
    if not fitt_below.is_zero:
        raise AssertionError("Fitting ideal below the rank must vanish")
    projective = fitt_r.member((M.ring.one(),))
    return projective, r


def split_surjection(pi: Morphism) -> Optional[Morphism]:
    """A section sigma with pi o sigma = id, or None when the epi is not split."""
    if not pi.is_epi:
        raise ValueError("split_surjection requires an epimorphism")
    return solve_lift(identity(pi.target), pi)


@dataclass(frozen=True)
class ComplementResult:
    """Outcome of the key-lemma construction for A inside P = R^q."""

    complement: Optional[Submodule]          # B' with A + B' = R^q, A cap B' = 0
    ext_witness: Optional[FPModule]          # nonzero Ext^1(T, A) when absent
    iso_to_quotient: Optional[Morphism]      # B' -> R^q/A, the projection iso

    @property
    def present(self) -> bool:
        return self.complement is not None


def complement_above(inst: SubdirectInstance) -> ComplementResult:
    """If Ext^1(T, A) = 0, build B' >= B complementing A by splitting
    0 -> S/B -> N -> T -> 0; otherwise report the nonzero Ext witness."""
    if not check_regular(inst):
        raise ValueError("complement_above requires a regular instance")
    ring, q = inst.ring, inst.q
    Amod, _ = inst.A.as_module()
    T = interconnection_module(inst)
    E = ext(1, T, Amod)
    if not E.is_zero:
        return ComplementResult(None, E, None)
    N = present(ring, q, inst.B.gens)
    pi_T = morphism(N, T, identity_images(ring, q))
    sigma = solve_lift(identity(T), pi_T)
    if sigma is None:
        raise AssertionError("vanishing Ext^1(T, S/B) must split the sequence")
    bp_gens = list(sigma.images) + list(inst.B.gens)
    Bp = submodule(ring, q, bp_gens)
    if not Bp.contains(inst.B):
        raise AssertionError("complement must contain B")
    if not inst.A.intersect(Bp).is_zero:
        raise AssertionError("complement must meet A trivially")
    total = inst.A.sum(Bp)
    if not all(total.member(unit_vector(ring, q, i)) for i in range(q)):
        raise AssertionError("complement must span R^q together with A")
    Bmod, _ = Bp.as_module()
    M = quotient_module(inst, "A")
    proj = morphism(Bmod, M, Bp.gens)
    if not (proj.is_mono and proj.is_epi):
        raise AssertionError("projection B' -> M must be an isomorphism")
    return ComplementResult(Bp, None, proj)


@dataclass(frozen=True)
class Certificate:
    """Machine-checkable outcome of `certify`."""

    instance: SubdirectInstance
    regular: Optional[bool]
    grade_T: Optional[GradeValue]
    hypothesis_met: bool
    interconnection: Optional[FPModule]
    torsion_preimage: Optional[Submodule]    # A'
    tf_factor: Optional[FPModule]            # R^q/A' = M/tor(M)
    projective: Optional[bool]
    rank: Optional[int]
    section: Optional[Morphism]
    stably_free_note: bool
    failure_reason: Optional[str]


def certify(inst: SubdirectInstance) -> Certificate:
    """Full pipeline: regularity, grade of T, torsion quotient, Fitting
    projectivity, and an explicit verified section.  All failure modes are
    certificate outcomes; proof-chain violations raise (never silently wrong).
    """
    ring, q = inst.ring, inst.q
    try:
        regular = check_regular(inst)
        T = interconnection_module(inst)
        grade_T = grade(T)
        hypothesis = regular and grade_T.at_least(2)
        M = quotient_module(inst, "A")
        tor = torsion_submodule(M)
        a_prime = tor.preimage
        tf = present(ring, q, a_prime.gens)
        projective, rank = is_projective(tf)
        section = None
        if hypothesis:
            if not a_prime.intersect(inst.B).is_zero:
                raise AssertionError("torsion preimage must still meet B trivially")
            T2 = present(ring, q, list(a_prime.gens) + list(inst.B.gens))
            if not grade(T2).at_least(2):
                raise AssertionError("grade must be inherited by the factor of T")
            if not projective:
                raise AssertionError(
                    "hypothesis met but the torsion-free factor is not projective")
            pi = morphism(free_module(ring, q), tf, identity_images(ring, q))
            section = split_surjection(pi)
            if section is None:
                raise AssertionError("projective torsion-free factor must split")
            failure = None
        else:
            failure = NOT_REGULAR if not regular else GRADE_TOO_SMALL
        return Certificate(
            instance=inst, regular=regular, grade_T=grade_T,
            hypothesis_met=hypothesis, interconnection=T,
            torsion_preimage=a_prime, tf_factor=tf,
            projective=projective, rank=rank, section=section,
            stably_free_note=bool(projective), failure_reason=failure)
    except BudgetExceededError:
        return Certificate(
            instance=inst, regular=None, grade_T=None, hypothesis_met=False,
            interconnection=None, torsion_preimage=None, tf_factor=None,
            projective=None, rank=None, section=None, stably_free_note=False,
            failure_reason=BUDGET_EXCEEDED)


class ExtPreconditionError(ValueError):
    """Ext^1(T, P) != 0: the appendix proposition does not apply."""

    def __init__(self, witness: FPModule):
        self.witness = witness
        super().__init__("Ext^1(T, P) != 0; the equivalence is not asserted")


@dataclass(frozen=True)
class AppendixReport:
    """Both sides of the appendix equivalence, with witnesses."""

    splits: bool
    ext_vanishes: bool
    retraction: Optional[Morphism]
    section: Optional[Morphism]
    ext_witness: Optional[FPModule]

    @property
    def equivalent(self) -> bool:
        return self.splits == self.ext_vanishes


def appendix_equivalence_check(inst: SubdirectInstance) -> AppendixReport:
    """Under Ext^1(T, P) = 0: the sequence 0 -> A -> N -> T -> 0 splits iff
    Ext^1(T, A) = 0; both directions are decided and must agree."""
    if not check_regular(inst):
        raise ValueError("the fiber-product setup requires a regular instance")
    ring, q = inst.ring, inst.q
    T = interconnection_module(inst)
    ext_tp = ext(1, T)
    if not ext_tp.is_zero:
        raise ExtPreconditionError(ext_tp)
    Amod, _ = inst.A.as_module()
    N = present(ring, q, inst.B.gens)
    iota = morphism(Amod, N, inst.A.gens)
    pi_T = morphism(N, T, identity_images(ring, q))
    short_exact_sequence(iota, pi_T, check=True)
    retraction = solve_extension(identity(Amod), iota)
    section = solve_lift(identity(T), pi_T)
    if (retraction is None) != (section is None):
        raise AssertionError("retraction and section searches must agree")
    E = ext(1, T, Amod)
    splits = retraction is not None
    vanishes = E.is_zero
    if splits != vanishes:
        raise AssertionError("appendix equivalence violated")
    return AppendixReport(splits=splits, ext_vanishes=vanishes,
                          retraction=retraction, section=section,
                          ext_witness=None if vanishes else E)


# ---------------------------------------------------------------------------
# structured instance family and shears

def base_family(ring: RingDescriptor):
    """Submodules U <= R^a with grade(R^a/U) >= 2, per ambient rank a."""
    vs = [ring.variable(v) for v in ring.variables]
    z = ring.zero()
    out = []
    # maximal-ideal powers in rank 1
    m1 = [(v,) for v in vs]
    out.append((1, m1))
    sq = []
    for i in range(len(vs)):
        for j in range(i, len(vs)):
            sq.append((vs[i] * vs[j],))
    out.append((1, sq))
    if len(vs) == 2:
        x, y = vs
        out.append((1, [(x * x * x,), (x * x * y,), (x * y * y,), (y * y * y,)]))
        out.append((2, [(v, z) for v in vs] + [(z, v) for v in vs]))
        out.append((2, [(p[0], z) for p in sq] + [(z, v) for v in vs]))
    else:
        out.append((2, [(v, z) for v in vs] + [(z, v) for v in vs]))
    return out


def structured_instances(ring: RingDescriptor, b_values=(1, 2)):
    """A = U + 0 <= R^a + R^b with grade(R^a/U) >= 2 and B = 0 + R^b."""
    z = ring.zero()
    out = []
    for a, ugens in base_family(ring):
        for b in b_values:
            q = a + b
            a_gens = [tuple(u) + (z,) * b for u in ugens]
            b_gens = [unit_vector(ring, q, a + i) for i in range(b)]
            out.append(make_instance(ring, q, a_gens, b_gens))
    return out


def random_shear(inst: SubdirectInstance, rng, n_ops: int = 6,
                 max_degree: int = 1) -> SubdirectInstance:
    """Apply a random invertible change of coordinates (product of elementary
    row operations with small polynomial multipliers) to both A and B."""
    ring, q = inst.ring, inst.q
    ops = []
    for _ in range(n_ops):
        i = rng.randrange(q)
        j = rng.randrange(q)
        if i == j:
            continue
        ops.append((i, j, _random_poly(ring, rng, max_degree)))

    def transform(v):
        v = list(v)
        for i, j, f in ops:
            v[i] = v[i] + f * v[j]
        return tuple(v)

    return make_instance(ring, q, [transform(g) for g in inst.A.gens],
                         [transform(g) for g in inst.B.gens])


def _random_poly(ring: RingDescriptor, rng, max_degree: int):
    from .rings import const
    if not ring.is_poly:
        return ring.from_int(rng.randint(-3, 3))
    terms = rng.randint(1, 2)
    p = ring.zero()
    for _ in range(terms):
        c = rng.randint(-2, 2)
        if c == 0:
            continue
        mono = ring.one()
        for _ in range(rng.randint(0, max_degree)):
            mono = mono * ring.variable(rng.choice(ring.variables))
        p = p + const(ring, c) * mono
    return p
