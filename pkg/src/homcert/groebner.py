"""Buchberger engine for submodules of R^q over the polynomial backend.

Provides reduced Groebner bases with representation tracking (every basis
vector knows its expression in the original generators), normal forms with
quotients, lifts, complete syzygy modules via Schreyer's theorem, submodule
intersection/equality, and the combinatorial Krull dimension of leading-term
ideals.
"""
from __future__ import annotations

import heapq
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from fractions import Fraction

from .rings import (
    Mono, Polynomial, RingDescriptor, Vec,
    mono_div, mono_divides, mono_key, mono_lcm, mono_mul,
    unit_vector, vis_zero, vsub, vzero,
)

DEFAULT_SPAIR_BUDGET = 200_000
_budget_var: ContextVar[int] = ContextVar("spair_budget", default=DEFAULT_SPAIR_BUDGET)


class BudgetExceededError(RuntimeError):
    """Raised when a basis computation exceeds the S-pair budget."""


@contextmanager
def spair_budget(n: int):
    """Session-scoped override of the S-pair budget."""
    token = _budget_var.set(int(n))
    try:
        yield
    finally:
        _budget_var.reset(token)


POT = "pot"
TOP = "top"


def _primitive_pair(v, rep, lead_coeff: Fraction):
    """Scale (v, rep) so v has coprime integer coefficients and a positive
    leading coefficient; controls rational swell inside basis computations."""
    from math import gcd
    num_gcd, den_lcm = 0, 1
    for p in v:
        for _, c in p.terms:
            num_gcd = gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
    if num_gcd == 0:
        return v, rep, lead_coeff
    scale = Fraction(den_lcm, num_gcd)
    if lead_coeff < 0:
        scale = -scale
    if scale != 1:
        v = tuple(p.scale(scale) for p in v)
        rep = tuple(p.scale(scale) for p in rep)
        lead_coeff = lead_coeff * scale
    return v, rep, lead_coeff


@dataclass(frozen=True)
class ModuleOrder:
    """Term order on R^q: POT/TOP over a monomial order, or a Schreyer order
    induced by the leading terms of a basis in a parent module."""

    base: str
    rank: int
    position: str = POT
    schreyer_leads: tuple = None  # tuple of (component, monomial) in the parent
    parent: "ModuleOrder" = None

    def term_key(self, comp: int, mono: Mono):
        if self.schreyer_leads is None:
            if self.position == POT:
                return (-comp, mono_key(mono, self.base))
            return (mono_key(mono, self.base), -comp)
        pc, pm = self.schreyer_leads[comp]
        return (self.parent.term_key(pc, mono_mul(mono, pm)), -comp)

    def induced(self, leads) -> "ModuleOrder":
        """Schreyer order on R^len(leads) induced by basis leading terms."""
        return ModuleOrder(self.base, len(leads), self.position,
                           tuple((c, m) for c, m, _ in leads), self)


def default_order(ring: RingDescriptor, rank: int) -> ModuleOrder:
    return ModuleOrder(ring.order, rank, POT)


def leading_term(v: Vec, order: ModuleOrder):
    """(component, monomial, coefficient) of the largest term, or None."""
    best = None
    best_key = None
    for i, p in enumerate(v):
        if p.is_zero:
            continue
        m, c = p.leading_term()
        k = order.term_key(i, m)
        if best_key is None or k > best_key:
            best_key, best = k, (i, m, c)
    return best


def _reduce(v: Vec, vectors, leads, order: ModuleOrder, ring: RingDescriptor,
            with_quotients: bool):
    """Full division of v by the basis; returns (normal form, quotients)."""
    quots = [ring.zero()] * len(vectors) if with_quotients else None
    rem = list(vzero(ring, order.rank))
    work = list(v)
    while True:
        lt = leading_term(tuple(work), order)
        if lt is None:
            break
        comp, mono, coeff = lt
        hit = -1
        for t, (bc, bm, _) in enumerate(leads):
            if bc == comp and mono_divides(bm, mono):
                hit = t
                break
        if hit < 0:
            term = Polynomial(ring, ((mono, coeff),))
            rem[comp] = rem[comp] + term
            work[comp] = work[comp] - term
        else:
            q = Polynomial(ring, ((mono_div(mono, leads[hit][1]),
                                   coeff / leads[hit][2]),))
            g = vectors[hit]
            for j in range(order.rank):
                if not g[j].is_zero:
                    work[j] = work[j] - q * g[j]
            if with_quotients:
                quots[hit] = quots[hit] + q
    return tuple(rem), quots


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis of a submodule of R^rank."""

    ring: RingDescriptor
    rank: int
    order: ModuleOrder
    vectors: tuple
    reduced: bool = True
    # leading (component, monomial, coefficient) per vector
    leads: tuple = field(default=(), compare=False, repr=False)
    # each basis vector as a combination of the original generators
    reps: tuple = field(default=(), compare=False, repr=False)
    ngens_original: int = field(default=0, compare=False, repr=False)

    def reduce(self, v: Vec):
        """(normal form of v, quotients over the basis vectors)."""
        return _reduce(v, self.vectors, self.leads, self.order, self.ring, True)

    def normal_form(self, v: Vec) -> Vec:
        return _reduce(v, self.vectors, self.leads, self.order, self.ring, False)[0]

    def member(self, v: Vec) -> bool:
        return vis_zero(self.normal_form(v))

    def lift_original(self, v: Vec):
        """Coefficients over the *original* generators, or None if v is not
        in the submodule."""
        nf, quots = self.reduce(v)
        if not vis_zero(nf):
            return None
        out = list(vzero(self.ring, self.ngens_original))
        for q, rep in zip(quots, self.reps):
            if q.is_zero:
                continue
            for i, r in enumerate(rep):
                if not r.is_zero:
                    out[i] = out[i] + q * r
        return tuple(out)

    @property
    def is_zero_module(self) -> bool:
        return not self.vectors


def _check_vectors(gens, ring, rank):
    for v in gens:
        if len(v) != rank:
            raise ValueError(f"vector of length {len(v)} in ambient rank {rank}")


def buchberger(gens, ring: RingDescriptor, rank: int,
               order: ModuleOrder | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the submodule generated by `gens`.

    Deterministic for a fixed input order; normal S-pair selection with the
    chain criterion and (at rank 1 only, where it is sound) the coprime
    criterion.
    """
    if order is None:
        order = default_order(ring, rank)
    _check_vectors(gens, ring, rank)
    budget = _budget_var.get()
    spairs_done = 0

    vectors = []   # monic basis vectors
    leads = []     # (comp, mono, coeff=1)
    reps = []      # expression in the original generators
    k = len(gens)

    def add_element(v: Vec, rep: Vec):
        lt = leading_term(v, order)
        if lt is None:
            return
        comp, mono, coeff = lt
        v, rep, coeff = _primitive_pair(v, rep, coeff)
        t_new = len(vectors)
        vectors.append(v)
        leads.append((comp, mono, coeff))
        reps.append(rep)
        for t in range(t_new):
            c1, m1, _ = leads[t]
            if c1 != comp:
                continue
            lcm = mono_lcm(m1, mono)
            if rank == 1 and mono_mul(m1, mono) == lcm:
                continue  # coprime criterion, sound for ideals only
            heapq.heappush(pairs, (order.term_key(comp, lcm), t, t_new))

    pairs: list = []
    for i, g in enumerate(gens):
        nf, quots = (g, None) if not vectors else \
            _reduce(g, vectors, leads, order, ring, True)
        rep = unit_vector(ring, k, i)
        if quots is not None:
            rep = list(rep)
            for t, q in enumerate(quots):
                if not q.is_zero:
                    for j in range(k):
                        if not reps[t][j].is_zero:
                            rep[j] = rep[j] - q * reps[t][j]
            rep = tuple(rep)
        add_element(nf, rep)

    done = set()
    while pairs:
        key, i, j = heapq.heappop(pairs)
        spairs_done += 1
        if spairs_done > budget:
            raise BudgetExceededError(
                f"S-pair budget exceeded ({budget} pairs)")
        ci, mi, _ = leads[i]
        cj, mj, _ = leads[j]
        lcm = mono_lcm(mi, mj)
        # chain criterion: some h with lt | lcm and both pairs already done
        skip = False
        for t in range(len(vectors)):
            if t in (i, j) or leads[t][0] != ci:
                continue
            if mono_divides(leads[t][1], lcm):
                if (min(i, t), max(i, t)) in done and (min(j, t), max(j, t)) in done:
                    skip = True
                    break
        done.add((i, j))
        if skip:
            continue
        # cross-multiplied integer cofactors keep the S-vector fraction-free
        qi = Polynomial(ring, ((mono_div(lcm, mi), leads[j][2]),))
        qj = Polynomial(ring, ((mono_div(lcm, mj), leads[i][2]),))
        sv = tuple(qi * a - qj * b for a, b in zip(vectors[i], vectors[j]))
        nf, quots = _reduce(sv, vectors, leads, order, ring, True)
        if vis_zero(nf):
            continue
        rep = list(vzero(ring, k))
        for t in range(k):
            rep[t] = qi * reps[i][t] - qj * reps[j][t]
        for t, q in enumerate(quots):
            if not q.is_zero:
                for u in range(k):
                    if not reps[t][u].is_zero:
                        rep[u] = rep[u] - q * reps[t][u]
        add_element(nf, tuple(rep))

    # minimalize: drop vectors whose lead is divisible by another lead
    # (equal leads keep the smaller index)
    keep = []
    for t in range(len(vectors)):
        ct, mt, _ = leads[t]
        redundant = False
        for u in range(len(vectors)):
            if u == t or leads[u][0] != ct:
                continue
            if mono_divides(leads[u][1], mt) and (leads[u][1] != mt or u < t):
                redundant = True
                break
        if not redundant:
            keep.append(t)
    vectors = [vectors[t] for t in keep]
    leads = [leads[t] for t in keep]
    reps = [reps[t] for t in keep]

    # tail-reduce each vector against the others, then normalize monic
    for t in range(len(vectors)):
        others = [u for u in range(len(vectors)) if u != t]
        ov = [vectors[u] for u in others]
        ol = [leads[u] for u in others]
        nf, quots = _reduce(vectors[t], ov, ol, order, ring, True)
        rep = list(reps[t])
        for w, q in zip(others, quots):
            if not q.is_zero:
                for u in range(k):
                    if not reps[w][u].is_zero:
                        rep[u] = rep[u] - q * reps[w][u]
        v, rep, coeff = _primitive_pair(nf, tuple(rep), leads[t][2])
        vectors[t] = v
        leads[t] = (leads[t][0], leads[t][1], coeff)
        reps[t] = rep

    for t in range(len(vectors)):
        coeff = leads[t][2]
        if coeff != 1:
            inv = Fraction(1) / coeff
            vectors[t] = tuple(p.scale(inv) for p in vectors[t])
            reps[t] = tuple(p.scale(inv) for p in reps[t])
            leads[t] = (leads[t][0], leads[t][1], Fraction(1))

    idx = sorted(range(len(vectors)),
                 key=lambda t: order.term_key(leads[t][0], leads[t][1]),
                 reverse=True)
    return GroebnerBasis(
        ring=ring, rank=rank, order=order,
        vectors=tuple(vectors[t] for t in idx),
        reduced=True,
        leads=tuple(leads[t] for t in idx),
        reps=tuple(reps[t] for t in idx),
        ngens_original=k,
    )


def compute_basis(gens, ring: RingDescriptor, rank: int) -> GroebnerBasis:
    """Uniform facade shared with the integer backend."""
    return buchberger(gens, ring, rank)


def normal_form(v: Vec, gb: GroebnerBasis) -> Vec:
    if len(v) != gb.rank:
        raise ValueError("rank mismatch")
    return gb.normal_form(v)


def lift(target: Vec, gens, ring: RingDescriptor, rank: int):
    """Coefficients with gens . coeffs = target, or None if not in the span."""
    gb = buchberger(gens, ring, rank)
    return gb.lift_original(target)


def syzygies(gens, ring: RingDescriptor, rank: int, canonical: bool = True):
    """Generators of the full syzygy module of `gens` (Schreyer + conversion).

    Returns vectors of length len(gens); mat . s = 0 for each, and every
    relation among the generators is a combination of them.  With
    canonical=False the raw generating set is returned (callers that project
    the syzygies down skip the full-rank reduction).
    """
    gens = list(gens)
    k = len(gens)
    if k == 0:
        return ()
    gb = buchberger(gens, ring, rank)
    raw = list(_schreyer_syzygies(gb.vectors, gb.leads, gb.order, ring, gb.reps, k))
    # I - A.B columns: g_i minus its expression through the basis
    for i, g in enumerate(gens):
        coeffs = gb.lift_original(g)
        col = list(unit_vector(ring, k, i))
        for j in range(k):
            col[j] = col[j] - coeffs[j]
        raw.append(tuple(col))
    raw = [s for s in raw if not vis_zero(s)]
    if not raw:
        return ()
    if not canonical:
        return tuple(raw)
    return buchberger(raw, ring, k).vectors


def _schreyer_syzygies(vectors, leads, order, ring, reps, k):
    """Syzygies of the (monic) basis, converted to the original generators."""
    out = []
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            if leads[i][0] != leads[j][0]:
                continue
            lcm = mono_lcm(leads[i][1], leads[j][1])
            qi = Polynomial(ring, ((mono_div(lcm, leads[i][1]), Fraction(1)),))
            qj = Polynomial(ring, ((mono_div(lcm, leads[j][1]), Fraction(1)),))
            sv = tuple(qi * a - qj * b for a, b in zip(vectors[i], vectors[j]))
            nf, quots = _reduce(sv, vectors, leads, order, ring, True)
            if not vis_zero(nf):
                raise AssertionError("S-vector of a Groebner basis must reduce to zero")
            # sigma = qi e_i - qj e_j - sum quots, pushed through reps
            sigma = list(vzero(ring, k))
            for u in range(k):
                sigma[u] = qi * reps[i][u] - qj * reps[j][u]
            for t, q in enumerate(quots):
                if not q.is_zero:
                    for u in range(k):
                        if not reps[t][u].is_zero:
                            sigma[u] = sigma[u] - q * reps[t][u]
            out.append(tuple(sigma))
    return out


def check_buchberger_criterion(gb: GroebnerBasis) -> bool:
    """Post-hoc soundness: every pairwise S-vector reduces to zero."""
    for i in range(len(gb.vectors)):
        for j in range(i + 1, len(gb.vectors)):
            ci, mi, coef_i = gb.leads[i]
            cj, mj, coef_j = gb.leads[j]
            if ci != cj:
                continue
            lcm = mono_lcm(mi, mj)
            qi = Polynomial(gb.ring, ((mono_div(lcm, mi), Fraction(1) / coef_i),))
            qj = Polynomial(gb.ring, ((mono_div(lcm, mj), Fraction(1) / coef_j),))
            sv = tuple(qi * a - qj * b
                       for a, b in zip(gb.vectors[i], gb.vectors[j]))
            if not vis_zero(gb.normal_form(sv)):
                return False
    return True


def submodule_intersect(U, V, ring: RingDescriptor, rank: int):
    """Generators of U intersect V, via syzygies of the concatenation."""
    U, V = list(U), list(V)
    _check_vectors(U + V, ring, rank)
    if not U or not V:
        return ()
    syz = syzygies(U + V, ring, rank, canonical=False)
    gens = []
    for s in syz:
        w = list(vzero(ring, rank))
        for c, u in zip(s[:len(U)], U):
            if not c.is_zero:
                for j in range(rank):
                    w[j] = w[j] + c * u[j]
        w = tuple(w)
        if not vis_zero(w):
            gens.append(w)
    if not gens:
        return ()
    return buchberger(gens, ring, rank).vectors


def submodule_equal(U, V, ring: RingDescriptor, rank: int) -> bool:
    """Mutual membership of generators."""
    gbU = buchberger(list(U), ring, rank)
    gbV = buchberger(list(V), ring, rank)
    return (all(gbU.member(v) for v in V) and all(gbV.member(u) for u in U))


def lt_dimension(gb: GroebnerBasis) -> int:
    """Krull dimension of R/(leading-term ideal) for an ideal in R^1.

    Largest d such that some d-subset S of the variables avoids containing
    the support of any leading monomial; -1 for the unit ideal.
    """
    if gb.rank != 1:
        raise ValueError("lt_dimension requires ambient rank 1")
    n = gb.ring.nvars
    supports = [frozenset(i for i, e in enumerate(m) if e)
                for (_, m, _) in gb.leads]
    from itertools import combinations
    for size in range(n, -1, -1):
        for sub in combinations(range(n), size):
            s = set(sub)
            if not any(supp <= s for supp in supports):
                return size
    return -1
