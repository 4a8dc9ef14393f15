"""Finitely presented modules, morphisms with verified witnesses, and the
Abelian-category constructions: kernels, cokernels, direct sums, pullbacks,
duals, the evaluation map, and matrix lifting problems.

A module is a presentation: R^ngens modulo the span of `relations`.  Elements
are coefficient vectors over the generators.  Morphisms store the images of
the source generators plus a lift certificate showing every source relation
lands in the target's relation submodule.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import groebner, hermite
from .rings import (
    RingDescriptor, Vec, apply_images, identity_images, unit_vector,
    elem_is_zero, elem_is_unit, vis_zero, vzero,
)


def engine(ring: RingDescriptor):
    return groebner if ring.is_poly else hermite


class WitnessError(ValueError):
    """A morphism's matrix does not map relations into relations."""


@dataclass(frozen=True)
class Submodule:
    """Submodule of R^rank, stored as a canonical reduced basis."""

    ring: RingDescriptor
    rank: int
    gens: tuple

    @cached_property
    def basis(self):
        return engine(self.ring).compute_basis(self.gens, self.ring, self.rank)

    @property
    def is_zero(self) -> bool:
        return not self.gens

    def member(self, v: Vec) -> bool:
        return self.basis.member(v)

    def contains(self, other: "Submodule") -> bool:
        return all(self.member(g) for g in other.gens)

    def sum(self, other: "Submodule") -> "Submodule":
        return submodule(self.ring, self.rank, self.gens + other.gens)

    def intersect(self, other: "Submodule") -> "Submodule":
        gens = engine(self.ring).submodule_intersect(
            self.gens, other.gens, self.ring, self.rank)
        return Submodule(self.ring, self.rank, tuple(gens))

    def as_module(self) -> tuple["FPModule", "Morphism"]:
        """The submodule as an abstract module, with the inclusion into R^rank."""
        free = free_module(self.ring, self.rank)
        syz = engine(self.ring).syzygies(self.gens, self.ring, self.rank,
                                         canonical=False)
        mod = present(self.ring, len(self.gens), syz)
        incl = morphism(mod, free, self.gens)
        return mod, incl


def submodule(ring: RingDescriptor, rank: int, gens) -> Submodule:
    basis = engine(ring).compute_basis(list(gens), ring, rank)
    return Submodule(ring, rank, tuple(basis.vectors))


@dataclass(frozen=True)
class FPModule:
    """Cokernel of a map between free modules: R^ngens / <relations>."""

    ring: RingDescriptor
    ngens: int
    relations: tuple

    @cached_property
    def rel_basis(self):
        return engine(self.ring).compute_basis(self.relations, self.ring, self.ngens)

    @cached_property
    def is_zero(self) -> bool:
        return all(self.rel_basis.member(unit_vector(self.ring, self.ngens, i))
                   for i in range(self.ngens))

    @property
    def is_free_presentation(self) -> bool:
        return not self.relations

    def element_is_zero(self, v: Vec) -> bool:
        return self.rel_basis.member(v)

    def elements_equal(self, u: Vec, v: Vec) -> bool:
        from .rings import vsub
        return self.rel_basis.member(vsub(u, v))


def present(ring: RingDescriptor, ngens: int, relations) -> FPModule:
    """Standardized finitely presented module (reduced relation basis)."""
    relations = [tuple(r) for r in relations]
    for r in relations:
        if len(r) != ngens:
            raise ValueError(
                f"relation of length {len(r)} for {ngens} generators")
    basis = engine(ring).compute_basis(relations, ring, ngens)
    return FPModule(ring, ngens, tuple(basis.vectors))


def free_module(ring: RingDescriptor, rank: int) -> FPModule:
    return FPModule(ring, rank, ())


@dataclass(frozen=True)
class Morphism:
    """Map between presentations: generator i of the source goes to images[i]."""

    source: FPModule
    target: FPModule
    images: tuple
    witness: tuple = field(compare=False, repr=False, default=())

    def __call__(self, coeffs) -> Vec:
        return apply_images(self.images, coeffs, self.target.ring,
                            self.target.ngens)

    @property
    def ring(self) -> RingDescriptor:
        return self.source.ring

    def equals(self, other: "Morphism") -> bool:
        """Equality as morphisms: matrices agree modulo target relations."""
        if self.source != other.source or self.target != other.target:
            return False
        from .rings import vsub
        return all(self.target.element_is_zero(vsub(a, b))
                   for a, b in zip(self.images, other.images))

    @cached_property
    def is_epi(self) -> bool:
        return cokernel(self).target.is_zero

    @cached_property
    def is_mono(self) -> bool:
        return kernel(self).source.is_zero

    @property
    def is_iso(self) -> bool:
        return self.is_mono and self.is_epi

    def is_zero_morphism(self) -> bool:
        return all(self.target.element_is_zero(v) for v in self.images)


def morphism(source: FPModule, target: FPModule, images, check: bool = True) -> Morphism:
    """Build a morphism, verifying the relation-compatibility witness."""
    if source.ring != target.ring:
        raise ValueError("source and target over different rings")
    images = tuple(tuple(v) for v in images)
    if len(images) != source.ngens:
        raise ValueError(f"{len(images)} images for {source.ngens} generators")
    for v in images:
        if len(v) != target.ngens:
            raise ValueError("image vector has wrong length")
    witness = ()
    if check:
        lifts = []
        for r in source.relations:
            w = apply_images(images, r, target.ring, target.ngens)
            coeffs = target.rel_basis.lift_original(w)
            if coeffs is None:
                raise WitnessError(
                    "matrix does not map source relations into target relations")
            lifts.append(coeffs)
        witness = tuple(lifts)
    return Morphism(source, target, images, witness)


def identity(M: FPModule) -> Morphism:
    return morphism(M, M, identity_images(M.ring, M.ngens))


def zero_morphism(M: FPModule, N: FPModule) -> Morphism:
    return morphism(M, N, tuple(vzero(M.ring, N.ngens) for _ in range(M.ngens)))


def compose(g: Morphism, f: Morphism) -> Morphism:
    """g after f."""
    if f.target != g.source:
        raise ValueError("morphisms not composable")
    images = tuple(g(v) for v in f.images)
    return morphism(f.source, g.target, images)


# ---------------------------------------------------------------------------
# kernels and cokernels

def kernel_preimage(f: Morphism):
    """Generators (in R^ngens_source) of the preimage of ker f, i.e. the
    vectors whose image lands in the target's relation submodule."""
    eng = engine(f.ring)
    gt = f.target.ngens
    combined = list(f.images) + list(f.target.relations)
    syz = eng.syzygies(combined, f.ring, gt, canonical=False)
    gs = f.source.ngens
    out = []
    for s in syz:
        v = tuple(s[:gs])
        if not vis_zero(v):
            out.append(v)
    # source relations always map into target relations
    out.extend(r for r in f.source.relations)
    return out


def kernel(f: Morphism) -> Morphism:
    """Kernel as a mono K -> source."""
    eng = engine(f.ring)
    gs = f.source.ngens
    pre = kernel_preimage(f)
    # drop generators that are already zero in the source
    gens = [v for v in pre if not f.source.rel_basis.member(v)]
    basis = eng.compute_basis(gens, f.ring, gs)
    gens = list(basis.vectors)
    rel = eng.syzygies(gens + list(f.source.relations), f.ring, gs,
                       canonical=False)
    krel = [tuple(s[:len(gens)]) for s in rel]
    K = present(f.ring, len(gens), [r for r in krel if not vis_zero(r)])
    return morphism(K, f.source, gens)


def cokernel(f: Morphism) -> Morphism:
    """Cokernel as an epi target -> C."""
    C = present(f.ring, f.target.ngens,
                list(f.target.relations) + list(f.images))
    return morphism(f.target, C, identity_images(f.ring, f.target.ngens))


def image_in_target(f: Morphism) -> Submodule:
    """Image of f as a submodule of the target's free cover (with relations)."""
    return submodule(f.ring, f.target.ngens,
                     list(f.images) + list(f.target.relations))


# ---------------------------------------------------------------------------
# direct sums and pullbacks

@dataclass(frozen=True)
class DirectSum:
    module: FPModule
    injections: tuple
    projections: tuple


def direct_sum(*parts: FPModule) -> DirectSum:
    ring = parts[0].ring
    if any(p.ring != ring for p in parts):
        raise ValueError("direct sum over mixed rings")
    offsets, total = [], 0
    for p in parts:
        offsets.append(total)
        total += p.ngens
    rels = []
    for off, p in zip(offsets, parts):
        for r in p.relations:
            rels.append(tuple(vzero(ring, off)) + tuple(r)
                        + tuple(vzero(ring, total - off - p.ngens)))
    D = present(ring, total, rels)
    injections, projections = [], []
    for off, p in zip(offsets, parts):
        inj = [unit_vector(ring, total, off + i) for i in range(p.ngens)]
        proj = [tuple(vzero(ring, p.ngens)) if (i < off or i >= off + p.ngens)
                else unit_vector(ring, p.ngens, i - off) for i in range(total)]
        injections.append(morphism(p, D, inj))
        projections.append(morphism(D, p, proj))
    return DirectSum(D, tuple(injections), tuple(projections))


@dataclass(frozen=True)
class Pullback:
    module: FPModule
    to_left: Morphism
    to_right: Morphism
    kernel_iso: Morphism  # ker(P -> left) -> ker(right -> T), an iso


def pullback(p: Morphism, q: Morphism, check: bool = True) -> Pullback:
    """Fiber product of two epimorphisms onto the same target."""
    if p.target != q.target:
        raise ValueError("pullback requires a common target")
    if check and not (p.is_epi and q.is_epi):
        raise ValueError("pullback requires epimorphisms")
    D = direct_sum(p.source, q.source)
    T = p.target
    images = [p.images[i] for i in range(p.source.ngens)]
    images += [tuple(-a for a in q.images[j]) for j in range(q.source.ngens)]
    phi = morphism(D.module, T, images)
    incl = kernel(phi)
    P = incl.source
    to_left = compose(D.projections[0], incl)
    to_right = compose(D.projections[1], incl)
    # induced map ker(P -> M) -> ker(N -> T)
    kl = kernel(to_left)
    kq = kernel(q)
    induced = solve_lift(compose(to_right, kl), kq)
    if induced is None:
        raise AssertionError("pullback kernel comparison map must exist")
    if check:
        if not compose(p, to_left).equals(compose(q, to_right)):
            raise AssertionError("pullback square does not commute")
        if not (induced.is_mono and induced.is_epi):
            raise AssertionError("ker(P->M) and ker(N->T) must be isomorphic")
    return Pullback(P, to_left, to_right, induced)


# ---------------------------------------------------------------------------
# duals and the evaluation map

@dataclass(frozen=True)
class DualModule:
    """M* = Hom(M, R): generator t is the functional with values
    `embedding[t]` on the generators of M."""

    module: FPModule
    embedding: tuple


def dual(M: FPModule) -> DualModule:
    eng = engine(M.ring)
    g, r = M.ngens, len(M.relations)
    # functionals = kernel of the dual of the presentation map
    rows = [tuple(M.relations[k][i] for k in range(r)) for i in range(g)]
    funcs = eng.syzygies(rows, M.ring, r) if g else ()
    rels = eng.syzygies(list(funcs), M.ring, g, canonical=False)
    Mstar = present(M.ring, len(funcs), rels)
    return DualModule(Mstar, tuple(funcs))


def dual_morphism(f: Morphism, df_source: DualModule, df_target: DualModule) -> Morphism:
    """f*: target* -> source*, lambda -> lambda o f."""
    eng = engine(f.ring)
    basis = eng.compute_basis(list(df_source.embedding), f.ring, f.source.ngens)
    images = []
    for u in df_target.embedding:
        vals = tuple(_dot(f.images[i], u, f.ring) for i in range(f.source.ngens))
        coeffs = basis.lift_original(vals)
        if coeffs is None:
            raise AssertionError("dual functional must lie in the dual module")
        images.append(coeffs)
    return morphism(df_target.module, df_source.module, images)


def _dot(v: Vec, w: Vec, ring: RingDescriptor):
    out = ring.zero()
    for a, b in zip(v, w):
        out = out + a * b
    return out


def evaluation_map(M: FPModule) -> Morphism:
    """The natural map M -> M**, generator -> (functional -> its value)."""
    eng = engine(M.ring)
    dM = dual(M)
    ddM = dual(dM.module)
    s = dM.module.ngens
    basis = eng.compute_basis(list(ddM.embedding), M.ring, s)
    images = []
    for i in range(M.ngens):
        v = tuple(dM.embedding[t][i] for t in range(s))
        coeffs = basis.lift_original(v)
        if coeffs is None:
            raise AssertionError("evaluation image must lie in the double dual")
        images.append(coeffs)
    return morphism(M, ddM.module, images)


# ---------------------------------------------------------------------------
# lifting problems

def solve_lift(f: Morphism, g: Morphism):
    """h with g o h = f (common target), or None if no lift exists.

    Decided exactly: unknown matrix entries plus relation multipliers form one
    R-linear system solved by a single lift in a stacked free module.
    """
    if f.target != g.target:
        raise ValueError("solve_lift requires a common target")
    ring = f.ring
    X, Y, Z = f.source, g.source, f.target
    gX, gY, gZ = X.ngens, Y.ngens, Z.ngens
    Zrel, Xrel, Yrel = list(Z.relations), list(X.relations), list(Y.relations)
    N = gX * gZ + len(Xrel) * gY
    cols = []

    def blank():
        return list(vzero(ring, N))

    for i in range(gX):
        for j in range(gY):
            col = blank()
            for c in range(gZ):
                col[i * gZ + c] = g.images[j][c]
            for k, r in enumerate(Xrel):
                col[gX * gZ + k * gY + j] = r[i]
            cols.append(tuple(col))
    for i in range(gX):
        for l, zr in enumerate(Zrel):
            col = blank()
            for c in range(gZ):
                col[i * gZ + c] = zr[c]
            cols.append(tuple(col))
    for k in range(len(Xrel)):
        for m, yr in enumerate(Yrel):
            col = blank()
            for c in range(gY):
                col[gX * gZ + k * gY + c] = -yr[c]
            cols.append(tuple(col))

    target = blank()
    for i in range(gX):
        for c in range(gZ):
            target[i * gZ + c] = f.images[i][c]
    coeffs = engine(ring).lift(tuple(target), cols, ring, N)
    if coeffs is None:
        return None
    images = [tuple(coeffs[i * gY + j] for j in range(gY)) for i in range(gX)]
    h = morphism(X, Y, images)
    if not compose(g, h).equals(f):
        raise AssertionError("solve_lift produced a non-solution")
    return h


def solve_extension(f: Morphism, incl: Morphism):
    """h with h o incl = f (common source domain X = incl.source), or None."""
    if f.source != incl.source:
        raise ValueError("solve_extension requires a common source")
    ring = f.ring
    X, Y, Z = incl.source, incl.target, f.target
    gX, gY, gZ = X.ngens, Y.ngens, Z.ngens
    Zrel, Yrel = list(Z.relations), list(Y.relations)
    N = gX * gZ + len(Yrel) * gZ
    cols = []

    def blank():
        return list(vzero(ring, N))

    for j in range(gY):
        for t in range(gZ):
            col = blank()
            for i in range(gX):
                col[i * gZ + t] = incl.images[i][j]
            for k, r in enumerate(Yrel):
                col[gX * gZ + k * gZ + t] = r[j]
            cols.append(tuple(col))
    for i in range(gX):
        for l, zr in enumerate(Zrel):
            col = blank()
            for c in range(gZ):
                col[i * gZ + c] = zr[c]
            cols.append(tuple(col))
    for k in range(len(Yrel)):
        for m, zr in enumerate(Zrel):
            col = blank()
            for c in range(gZ):
                col[gX * gZ + k * gZ + c] = zr[c]
            cols.append(tuple(col))

    target = blank()
    for i in range(gX):
        for c in range(gZ):
            target[i * gZ + c] = f.images[i][c]
    coeffs = engine(ring).lift(tuple(target), cols, ring, N)
    if coeffs is None:
        return None
    images = [tuple(coeffs[j * gZ + t] for t in range(gZ)) for j in range(gY)]
    h = morphism(Y, Z, images)
    if not compose(h, incl).equals(f):
        raise AssertionError("solve_extension produced a non-solution")
    return h


# ---------------------------------------------------------------------------
# short exact sequences and presentation pruning

@dataclass(frozen=True)
class ShortExactSequence:
    mono: Morphism
    epi: Morphism

    @property
    def sub(self) -> FPModule:
        return self.mono.source

    @property
    def middle(self) -> FPModule:
        return self.mono.target

    @property
    def quotient(self) -> FPModule:
        return self.epi.target


def short_exact_sequence(mono: Morphism, epi: Morphism,
                         check: bool = True) -> ShortExactSequence:
    if mono.target != epi.source:
        raise ValueError("sequence maps do not share the middle module")
    if check:
        eng = engine(mono.ring)
        mid = mono.target
        if not mono.is_mono:
            raise ValueError("first map is not a monomorphism")
        if not epi.is_epi:
            raise ValueError("second map is not an epimorphism")
        im = list(mono.images) + list(mid.relations)
        ker = kernel_preimage(epi) + list(mid.relations)
        if not eng.submodule_equal(im, ker, mono.ring, mid.ngens):
            raise ValueError("image of the mono is not the kernel of the epi")
    return ShortExactSequence(mono, epi)


def eliminate_units(ngens: int, relations, ring: RingDescriptor):
    """Quotient presentation with unit-pivot generators substituted away.

    Pure presentation shrink (no transition maps); the result presents an
    isomorphic module.  Used to precondition standardizations whose inputs
    carry unit entries."""
    rels = [list(r) for r in relations]
    g = ngens

    def find_unit():
        for ci, col in enumerate(rels):
            for i, entry in enumerate(col):
                if elem_is_unit(entry):
                    return ci, i
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        ci, i = hit
        col = rels.pop(ci)
        inv = _unit_inverse(ring, col[i])
        for d in rels:
            if not elem_is_zero(d[i]):
                factor = d[i] * inv
                for j in range(g):
                    d[j] = d[j] - factor * col[j]
        for v in rels:
            del v[i]
        g -= 1
        rels = [d for d in rels if not vis_zero(tuple(d))]
    return g, [tuple(r) for r in rels]


@dataclass(frozen=True)
class Pruned:
    module: FPModule
    to_pruned: Morphism
    from_pruned: Morphism


def prune(M: FPModule) -> Pruned:
    """Isomorphic presentation with unit-pivot generators eliminated."""
    ring = M.ring
    rels = [list(r) for r in M.relations]
    g = M.ngens
    back = [list(unit_vector(ring, g, i)) for i in range(M.ngens)]
    fwd = [list(unit_vector(ring, M.ngens, i)) for i in range(g)]

    def find_unit():
        for ci, col in enumerate(rels):
            for i, entry in enumerate(col):
                if elem_is_unit(entry):
                    return ci, i
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        ci, i = hit
        col = rels.pop(ci)
        c = col[i]
        inv = _unit_inverse(ring, c)
        for d in rels:
            if not elem_is_zero(d[i]):
                factor = d[i] * inv
                for j in range(g):
                    d[j] = d[j] - factor * col[j]
        for b in back:
            if not elem_is_zero(b[i]):
                factor = b[i] * inv
                for j in range(g):
                    b[j] = b[j] - factor * col[j]
        for lst in (rels, back):
            for v in lst:
                del v[i]
        del fwd[i]
        g -= 1
        rels = [d for d in rels if not vis_zero(tuple(d))]

    M2 = present(ring, g, [tuple(r) for r in rels])
    to_pruned = morphism(M, M2, [tuple(b) for b in back])
    from_pruned = morphism(M2, M, [tuple(v) for v in fwd])
    if not compose(to_pruned, from_pruned).equals(identity(M2)):
        raise AssertionError("pruning lost the isomorphism")
    if not compose(from_pruned, to_pruned).equals(identity(M)):
        raise AssertionError("pruning lost the isomorphism")
    return Pruned(M2, to_pruned, from_pruned)


def _unit_inverse(ring: RingDescriptor, c):
    if ring.is_poly:
        from .rings import const
        return const(ring, 1 / c.constant_value())
    return c  # over Z units are +-1, self-inverse
