"""Hermite-style staircase engine for submodules of Z^q.

Same facade as the Buchberger engine: canonical bases with representation
tracking, Euclidean normal forms with quotients, lifts, syzygies, submodule
intersection and equality.  A staircase basis has one pivot per leading
position, so its columns are linearly independent and its own syzygy module
is zero; syzygies of arbitrary generators come from the conversion matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .rings import RingDescriptor, Vec, unit_vector, vis_zero, vzero


def xgcd(a: int, b: int):
    """(g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def _lead_pos(v) -> int:
    for i, a in enumerate(v):
        if a:
            return i
    return -1


@dataclass(frozen=True)
class HermiteBasis:
    """Canonical staircase basis of a submodule of Z^rank."""

    ring: RingDescriptor
    rank: int
    vectors: tuple
    leads: tuple = field(default=(), compare=False, repr=False)  # (pos, pivot)
    reps: tuple = field(default=(), compare=False, repr=False)
    ngens_original: int = field(default=0, compare=False, repr=False)

    def reduce(self, v: Vec):
        work = list(v)
        quots = [0] * len(self.vectors)
        for t, (p, b) in enumerate(self.leads):
            q = work[p] // b
            if q:
                g = self.vectors[t]
                for j in range(p, self.rank):
                    work[j] -= q * g[j]
                quots[t] = q
        return tuple(work), quots

    def normal_form(self, v: Vec) -> Vec:
        return self.reduce(v)[0]

    def member(self, v: Vec) -> bool:
        return vis_zero(self.normal_form(v))

    def lift_original(self, v: Vec):
        nf, quots = self.reduce(v)
        if not vis_zero(nf):
            return None
        out = [0] * self.ngens_original
        for q, rep in zip(quots, self.reps):
            if q:
                for i, r in enumerate(rep):
                    out[i] += q * r
        return tuple(out)

    @property
    def is_zero_module(self) -> bool:
        return not self.vectors


def compute_basis(gens, ring: RingDescriptor, rank: int) -> HermiteBasis:
    gens = [tuple(int(a) for a in v) for v in gens]
    for v in gens:
        if len(v) != rank:
            raise ValueError(f"vector of length {len(v)} in ambient rank {rank}")
    k = len(gens)
    pivots: dict[int, int] = {}   # position -> index into rows
    rows: list[list] = []         # [vector, rep]

    def insert(v: list, rep: list):
        while True:
            p = _lead_pos(v)
            if p < 0:
                return
            if p not in pivots:
                if v[p] < 0:
                    v = [-a for a in v]
                    rep = [-a for a in rep]
                pivots[p] = len(rows)
                rows.append([v, rep])
                return
            u, urep = rows[pivots[p]]
            a, b = v[p], u[p]
            if a % b == 0:
                q = a // b
                v = [x - q * y for x, y in zip(v, u)]
                rep = [x - q * y for x, y in zip(rep, urep)]
            else:
                g, x, y = xgcd(b, a)
                bu, au = b // g, a // g
                new_u = [x * s + y * t for s, t in zip(u, v)]
                new_urep = [x * s + y * t for s, t in zip(urep, rep)]
                v = [-au * s + bu * t for s, t in zip(u, v)]
                rep = [-au * s + bu * t for s, t in zip(urep, rep)]
                rows[pivots[p]] = [new_u, new_urep]

    for i, g in enumerate(gens):
        insert(list(g), list(unit_vector(ring, k, i)))

    order = sorted(pivots)
    # full reduction: entries above later pivots reduced into [0, pivot)
    for p in order:
        w, wrep = rows[pivots[p]]
        for p2 in order:
            if p2 <= p:
                continue
            z, zrep = rows[pivots[p2]]
            q = w[p2] // z[p2]
            if q:
                for j in range(p2, rank):
                    w[j] -= q * z[j]
                for j in range(k):
                    wrep[j] -= q * zrep[j]

    vectors, leads, reps = [], [], []
    for p in order:
        w, wrep = rows[pivots[p]]
        vectors.append(tuple(w))
        leads.append((p, w[p]))
        reps.append(tuple(wrep))
    return HermiteBasis(ring=ring, rank=rank, vectors=tuple(vectors),
                        leads=tuple(leads), reps=tuple(reps), ngens_original=k)


def normal_form(v: Vec, basis: HermiteBasis) -> Vec:
    return basis.normal_form(v)


def lift(target: Vec, gens, ring: RingDescriptor, rank: int):
    return compute_basis(gens, ring, rank).lift_original(target)


def syzygies(gens, ring: RingDescriptor, rank: int, canonical: bool = True):
    """Syzygy generators: columns of I - A.B (staircase bases are independent)."""
    gens = list(gens)
    k = len(gens)
    if k == 0:
        return ()
    basis = compute_basis(gens, ring, rank)
    raw = []
    for i, g in enumerate(gens):
        coeffs = basis.lift_original(g)
        col = list(unit_vector(ring, k, i))
        for j in range(k):
            col[j] -= coeffs[j]
        if not vis_zero(tuple(col)):
            raw.append(tuple(col))
    if not raw:
        return ()
    if not canonical:
        return tuple(raw)
    return compute_basis(raw, ring, k).vectors


def submodule_intersect(U, V, ring: RingDescriptor, rank: int):
    U, V = list(U), list(V)
    if not U or not V:
        return ()
    syz = syzygies(U + V, ring, rank, canonical=False)
    gens = []
    for s in syz:
        w = list(vzero(ring, rank))
        for c, u in zip(s[:len(U)], U):
            if c:
                for j in range(rank):
                    w[j] += c * u[j]
        w = tuple(w)
        if not vis_zero(w):
            gens.append(w)
    if not gens:
        return ()
    return compute_basis(gens, ring, rank).vectors


def submodule_equal(U, V, ring: RingDescriptor, rank: int) -> bool:
    bU = compute_basis(list(U), ring, rank)
    bV = compute_basis(list(V), ring, rank)
    return (all(bU.member(v) for v in V) and all(bV.member(u) for u in U))
