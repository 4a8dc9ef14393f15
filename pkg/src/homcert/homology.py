"""Free resolutions, Ext, grade, codimension, annihilators, the Auslander
dual, torsion/torsion-free decomposition, free embeddings, and Fitting-ideal
invariants.

Resolutions over the polynomial backend iterate Schreyer syzygies with
per-step basis minimalization and phase-variable sorting, which keeps the
length within the Hilbert bound (number of variables).  Over the integers a
staircase relation basis is already independent, so resolutions stop at
length one.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import groebner
from .rings import (
    Mono, Polynomial, RingDescriptor, Vec, elem_is_zero,
    mono_div, mono_divides, mono_lcm, unit_vector, vis_zero, vzero,
)
from .modules import (
    FPModule, Morphism, Submodule, cached_property, direct_sum, dual,
    eliminate_units, engine, free_module, kernel, morphism, identity_images,
    present, prune, submodule,
)


@dataclass(frozen=True)
class GradeValue:
    """Least nonvanishing Ext index; None encodes infinite (zero module)."""

    finite: int | None

    @property
    def is_infinite(self) -> bool:
        return self.finite is None

    def at_least(self, c: int) -> bool:
        return self.finite is None or self.finite >= c

    def __str__(self):
        return "infinite" if self.finite is None else str(self.finite)

    def to_json(self):
        return "infinite" if self.finite is None else self.finite


INFINITE_GRADE = GradeValue(None)


# ---------------------------------------------------------------------------
# free resolutions

@dataclass(frozen=True)
class ResolutionComplex:
    """F_l -> ... -> F_1 -> F_0 ->> module; differentials[i] holds the images
    of d_{i+1}: F_{i+1} -> F_i (one vector of length rank_i per basis
    vector of F_{i+1})."""

    module: FPModule
    ranks: tuple
    differentials: tuple

    def rank(self, i: int) -> int:
        return self.ranks[i] if i < len(self.ranks) else 0

    def diff(self, i: int):
        """Images of d_i: F_i -> F_{i-1} (empty beyond the stored length)."""
        if i < 1:
            raise ValueError("differentials are indexed from 1")
        return self.differentials[i - 1] if i - 1 < len(self.differentials) else ()

    @property
    def length(self) -> int:
        return len(self.ranks) - 1


def free_resolution(M: FPModule, length: int) -> ResolutionComplex:
    if length < 1:
        raise ValueError("resolution length must be >= 1")
    ring = M.ring
    if not ring.is_poly:
        ranks = [M.ngens, len(M.relations)]
        diffs = [tuple(M.relations)]
        if length > 1 and M.relations:
            ranks.append(0)
            diffs.append(())
        return ResolutionComplex(M, tuple(ranks), tuple(diffs))
    return _schreyer_resolution(M, length)


def _schreyer_resolution(M: FPModule, length: int) -> ResolutionComplex:
    ring = M.ring
    n = ring.nvars
    order = groebner.default_order(ring, M.ngens)
    vectors = list(M.relations)
    leads = [groebner.leading_term(v, order) for v in vectors]
    ranks = [M.ngens]
    diffs = []
    for step in range(1, length + 1):
        if not vectors:
            ranks.append(0)
            diffs.append(())
            break
        phase = min(step, n) - 1  # variable whose degree drops this step
        perm = sorted(range(len(vectors)),
                      key=lambda t: (leads[t][0], -leads[t][1][phase] if n else 0,
                                     leads[t][1]))
        vectors = [vectors[t] for t in perm]
        leads = [leads[t] for t in perm]
        ranks.append(len(vectors))
        diffs.append(tuple(vectors))
        if step == length:
            break
        induced = order.induced(leads)
        vectors, leads = _schreyer_step(vectors, leads, order, ring)
        if step >= n and vectors:
            raise AssertionError("resolution exceeded the Hilbert bound")
        order = induced
    return ResolutionComplex(M, tuple(ranks), tuple(diffs))


def _schreyer_step(vectors, leads, order, ring):
    """Syzygies of a monic minimal Groebner basis, with their known leading
    terms under the induced order; minimalized."""
    s = len(vectors)
    out_vec, out_lead = [], []
    for i in range(s):
        for j in range(i + 1, s):
            if leads[i][0] != leads[j][0]:
                continue
            lcm = mono_lcm(leads[i][1], leads[j][1])
            qi = Polynomial(ring, ((mono_div(lcm, leads[i][1]), Fraction(1)),))
            qj = Polynomial(ring, ((mono_div(lcm, leads[j][1]), Fraction(1)),))
            sv = tuple(qi * a - qj * b for a, b in zip(vectors[i], vectors[j]))
            nf, quots = groebner._reduce(sv, vectors, leads, order, ring, True)
            if not vis_zero(nf):
                raise AssertionError("S-vector of a Groebner basis must reduce to zero")
            sigma = [ring.zero()] * s
            sigma[i] = qi
            sigma[j] = sigma[j] - qj
            for t, q in enumerate(quots):
                if not q.is_zero:
                    sigma[t] = sigma[t] - q
            out_vec.append(tuple(sigma))
            out_lead.append((i, mono_div(lcm, leads[i][1]), Fraction(1)))
    keep = []
    for t in range(len(out_vec)):
        ct, mt, _ = out_lead[t]
        redundant = False
        for u in range(len(out_vec)):
            if u == t or out_lead[u][0] != ct:
                continue
            if mono_divides(out_lead[u][1], mt) and (out_lead[u][1] != mt or u < t):
                redundant = True
                break
        if not redundant:
            keep.append(t)
    return [out_vec[t] for t in keep], [out_lead[t] for t in keep]


# ---------------------------------------------------------------------------
# Ext

def _direct_power(N: FPModule, m: int) -> FPModule:
    if m == 0:
        return present(N.ring, 0, [])
    return direct_sum(*([N] * m)).module


def _hom_map(diff, r_from: int, r_to: int, N: FPModule) -> Morphism:
    """Hom(-, N) applied to d: F_from -> F_to gives N^{r_to} -> N^{r_from}."""
    ring = N.ring
    gN = N.ngens
    src = _direct_power(N, r_to)
    dst = _direct_power(N, r_from)
    images = []
    for s in range(r_to):
        for a in range(gN):
            vec = list(vzero(ring, r_from * gN))
            for k in range(r_from):
                c = diff[k][s]
                if not elem_is_zero(c):
                    vec[k * gN + a] = c
            images.append(tuple(vec))
    return morphism(src, dst, images)


def factor_through_mono(f: Morphism, mono: Morphism) -> Morphism:
    """The unique h with mono o h = f, for a monomorphism whose image
    contains the image of f."""
    if f.target != mono.target:
        raise ValueError("factor_through_mono requires a common target")
    eng = engine(f.ring)
    cols = list(mono.images) + list(f.target.relations)
    basis = eng.compute_basis(cols, f.ring, f.target.ngens)
    images = []
    for v in f.images:
        coeffs = basis.lift_original(v)
        if coeffs is None:
            raise ValueError("image does not factor through the mono")
        images.append(tuple(coeffs[:mono.source.ngens]))
    return morphism(f.source, mono.source, images)


def ext(i: int, M: FPModule, N: FPModule | None = None) -> FPModule:
    """Ext^i(M, N) presented as the homology of Hom(free resolution, N)."""
    if i < 0:
        raise ValueError("ext index must be >= 0")
    if N is None:
        N = free_module(M.ring, 1)
    if M.ring != N.ring:
        raise ValueError("modules over different rings")
    if M.is_zero or N.is_zero:
        return present(M.ring, 0, [])
    res = free_resolution(M, i + 1)
    return _ext_from_res(res, i, N)


def _ext_from_res(res: ResolutionComplex, i: int, N: FPModule) -> FPModule:
    d_next = _hom_map(res.diff(i + 1), res.rank(i + 1), res.rank(i), N)
    incl = kernel(d_next)
    if i == 0:
        return incl.source
    d_prev = _hom_map(res.diff(i), res.rank(i), res.rank(i - 1), N)
    # quotient relations straight from syzygies of original-scale data:
    # {c : sum c_t k_t lies in im(d_prev) + ambient relations}
    eng = engine(N.ring)
    amb = incl.target
    s = len(incl.images)
    combined = list(incl.images) + list(d_prev.images) + list(amb.relations)
    syz = eng.syzygies(combined, N.ring, amb.ngens, canonical=False)
    rels = [tuple(t[:s]) for t in syz]
    g2, rels2 = eliminate_units(s, [r for r in rels if not vis_zero(r)], N.ring)
    return present(N.ring, g2, rels2)


# ---------------------------------------------------------------------------
# grade, annihilator, codimension

def grade(T: FPModule) -> GradeValue:
    """Least i with Ext^i(T, R) != 0; infinite exactly for the zero module."""
    if T.is_zero:
        return INFINITE_GRADE
    ring = T.ring
    cap = ring.nvars if ring.is_poly else 1
    Tp = prune(T).module
    res = free_resolution(Tp, cap + 1)
    R1 = free_module(ring, 1)
    for i in range(cap + 1):
        if not _ext_from_res(res, i, R1).is_zero:
            return GradeValue(i)
    raise AssertionError("nonzero module with Ext vanishing beyond the ring bound")


def _element_annihilator_raw(M: FPModule, v: Vec):
    eng = engine(M.ring)
    syz = eng.syzygies([tuple(v)] + list(M.relations), M.ring, M.ngens,
                       canonical=False)
    return [(s[0],) for s in syz if not elem_is_zero(s[0])]


def element_annihilator(M: FPModule, v: Vec) -> Submodule:
    """The ideal of ring elements killing the class of v in M."""
    return submodule(M.ring, 1, _element_annihilator_raw(M, v))


def element_is_torsion(M: FPModule, v: Vec) -> bool:
    """Some nonzero ring element kills the class of v (no basis needed:
    the raw syzygy first coordinates already generate the annihilator)."""
    return bool(_element_annihilator_raw(M, v))


def annihilator(T: FPModule) -> Submodule:
    """Ann(T) as an ideal, intersected generator-wise."""
    ring = T.ring
    if T.ngens == 0:
        return submodule(ring, 1, [(ring.one(),)])
    out = None
    for i in range(T.ngens):
        ann = element_annihilator(T, unit_vector(ring, T.ngens, i))
        out = ann if out is None else out.intersect(ann)
        if out.is_zero:
            break
    return out


def codimension(T: FPModule) -> GradeValue:
    """nvars minus the Krull dimension of R/LT(Ann T); polynomial backend only."""
    if not T.ring.is_poly:
        raise ValueError("codimension is reported only for the polynomial backend")
    if T.is_zero:
        return INFINITE_GRADE
    ann = annihilator(T)
    gb = groebner.buchberger(list(ann.gens), T.ring, 1)
    return GradeValue(T.ring.nvars - groebner.lt_dimension(gb))


# ---------------------------------------------------------------------------
# Auslander dual and torsion

def auslander_dual(M: FPModule) -> FPModule:
    """Cokernel of the dualized presentation map (defined up to projective
    equivalence; only Ext^{i>0}( . , R) of it are contract-bearing)."""
    r = len(M.relations)
    rows = [tuple(M.relations[k][i] for k in range(r)) for i in range(M.ngens)]
    return present(M.ring, r, rows)


@dataclass(frozen=True)
class TorsionSubmodule:
    inclusion: Morphism      # tor(M) -> M
    preimage: Submodule      # preimage of tor(M) in the free cover R^ngens

    @property
    def module(self) -> FPModule:
        return self.inclusion.source

    @property
    def is_zero(self) -> bool:
        return self.inclusion.source.is_zero


def torsion_submodule(M: FPModule) -> TorsionSubmodule:
    """tor(M) = ker of the evaluation map; every generator is certified
    torsion (nonzero annihilator) before the result is returned."""
    from .modules import evaluation_map
    eps = evaluation_map(M)
    incl = kernel(eps)
    for v in incl.images:
        if not element_is_torsion(M, v):
            raise AssertionError(
                "evaluation kernel generator with zero annihilator over a domain")
    pre = submodule(M.ring, M.ngens, list(incl.images) + list(M.relations))
    return TorsionSubmodule(incl, pre)


def torsionfree_factor(M: FPModule) -> Morphism:
    """The epi M -> M/tor(M)."""
    tor = torsion_submodule(M)
    tf = present(M.ring, M.ngens, list(M.relations) + list(tor.inclusion.images))
    return morphism(M, tf, identity_images(M.ring, M.ngens))


class TorsionError(ValueError):
    """free_embedding on a module with nonzero torsion; carries the witness."""

    def __init__(self, witness: TorsionSubmodule):
        self.witness = witness
        super().__init__("module is not torsion-free; torsion generators: "
                         f"{[list(map(str, v)) for v in witness.inclusion.images]}")


def free_embedding(M: FPModule) -> Morphism:
    """A verified mono M -> R^s obtained by resolving the dualized
    presentation one step and dualizing back."""
    tor = torsion_submodule(M)
    if not tor.is_zero:
        raise TorsionError(tor)
    eng = engine(M.ring)
    r = len(M.relations)
    rows = [tuple(M.relations[k][i] for k in range(r)) for i in range(M.ngens)]
    w = eng.syzygies(rows, M.ring, r) if M.ngens else ()
    s = len(w)
    images = [tuple(w[t][i] for t in range(s)) for i in range(M.ngens)]
    j = morphism(M, free_module(M.ring, s), images)
    if not kernel(j).source.is_zero:
        raise AssertionError("free embedding has a nonzero kernel")
    return j


# ---------------------------------------------------------------------------
# Fitting ideals and presentation-invariant comparisons

def _det(rows, ring: RingDescriptor):
    """Determinant of a square matrix given as tuple of row tuples."""
    k = len(rows)
    if k == 0:
        return ring.one()
    cache: dict = {}

    def rec(depth: int, cols: tuple):
        if depth == k:
            return ring.one()
        key = cols
        hit = cache.get(key)
        if hit is not None:
            return hit
        total = ring.zero()
        for pos, c in enumerate(cols):
            a = rows[depth][c]
            if elem_is_zero(a):
                continue
            sub = rec(depth + 1, cols[:pos] + cols[pos + 1:])
            term = a * sub
            total = total + term if pos % 2 == 0 else total - term
        cache[key] = total
        return total

    return rec(0, tuple(range(k)))


def _minor_ideal(M: FPModule, size: int):
    """All size x size minors of the presentation matrix (gens x relations)."""
    ring = M.ring
    g, r = M.ngens, len(M.relations)
    if size <= 0:
        return [(ring.one(),)]
    if size > g or size > r:
        return []
    matrix = [[M.relations[k][i] for k in range(r)] for i in range(g)]
    out = []
    for rowset in combinations(range(g), size):
        for colset in combinations(range(r), size):
            d = _det([tuple(matrix[i][k] for k in colset) for i in rowset], ring)
            if not elem_is_zero(d):
                out.append((d,))
    return out


def presentation_rank(M: FPModule) -> int:
    """Rank of the presentation matrix over the fraction field."""
    for size in range(min(M.ngens, len(M.relations)), 0, -1):
        if _minor_ideal(M, size):
            return size
    return 0


def module_rank(M: FPModule) -> int:
    """Generic (fraction-field) rank of the module."""
    return M.ngens - presentation_rank(M)


def fitting_ideal(M: FPModule, j: int) -> Submodule:
    """Fitt_j(M): ideal of (ngens - j)-minors of the presentation matrix."""
    return submodule(M.ring, 1, _minor_ideal(M, M.ngens - j))


def invariants_agree(A: FPModule, B: FPModule) -> bool:
    """Presentation-invariant agreement: rank, annihilator, Fitting ideals.

    This is the downgraded isomorphism check used where no explicit pair of
    mutually inverse morphisms is produced.
    """
    eng = engine(A.ring)
    if A.ring != B.ring:
        return False
    if module_rank(A) != module_rank(B):
        return False
    annA, annB = annihilator(A), annihilator(B)
    if not eng.submodule_equal(list(annA.gens), list(annB.gens), A.ring, 1):
        return False
    for j in range(max(A.ngens, B.ngens) + 1):
        fA, fB = fitting_ideal(A, j), fitting_ideal(B, j)
        if not eng.submodule_equal(list(fA.gens), list(fB.gens), A.ring, 1):
            return False
    return True
