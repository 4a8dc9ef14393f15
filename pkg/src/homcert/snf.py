"""Independent Smith-normal-form oracle over Z.

Closed forms for finitely generated abelian groups: invariant factors,
torsion part, dual, Ext^1(-, Z), grade, and extension-splitting decisions.
The oracle works directly on integer presentation matrices and never touches
the Groebner/Hermite engines; cross-validating the homological pipeline
against it is the point.
"""
from __future__ import annotations

from dataclasses import dataclass

from .homology import GradeValue, INFINITE_GRADE
from .modules import FPModule, ShortExactSequence


@dataclass(frozen=True)
class SmithDecomposition:
    """U . A . V = D with U, V unimodular and D diagonal, d1 | d2 | ... >= 0."""

    U: tuple
    D: tuple
    V: tuple

    @property
    def diagonal(self) -> tuple:
        return tuple(self.D[i][i] for i in range(min(len(self.D),
                                                     len(self.D[0]) if self.D else 0)))


def _identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(A) -> SmithDecomposition:
    """SNF with explicit unimodular transforms; smallest-|pivot| selection."""
    A = [list(map(int, row)) for row in A]
    g = len(A)
    r = len(A[0]) if g else 0
    U = _identity(g)
    V = _identity(r)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, q):  # row_i += q * row_j
        for c in range(r):
            A[i][c] += q * A[j][c]
        for c in range(g):
            U[i][c] += q * U[j][c]

    def add_col(i, j, q):  # col_i += q * col_j
        for row in A:
            row[i] += q * row[j]
        for row in V:
            row[i] += q * row[j]

    def negate_row(i):
        for c in range(r):
            A[i][c] = -A[i][c]
        for c in range(g):
            U[i][c] = -U[i][c]

    t = 0
    while t < min(g, r):
        # smallest-absolute-value nonzero pivot in the trailing block
        pivot = None
        for i in range(t, g):
            for j in range(t, r):
                if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, g):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, -q)
                    if A[i][t]:  # remainder smaller than pivot: promote it
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, r):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        dirty = True
        if A[t][t] < 0:
            negate_row(t)
        # divisibility fix: pivot must divide the whole trailing block
        fixed = True
        for i in range(t + 1, g):
            for j in range(t + 1, r):
                if A[i][j] % A[t][t]:
                    add_row(t, i, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            t += 1
    return SmithDecomposition(tuple(tuple(row) for row in U),
                              tuple(tuple(row) for row in A),
                              tuple(tuple(row) for row in V))


def det_int(M) -> int:
    """Exact integer determinant (fraction-free Gaussian elimination)."""
    M = [list(map(int, row)) for row in M]
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass(frozen=True)
class OracleHomology:
    """Closed forms for a f.g. abelian group from the structure theorem."""

    free_rank: int
    torsion_factors: tuple   # invariant factors > 1
    dual_rank: int
    ext1_factors: tuple
    grade: GradeValue

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion_factors


def oracle_homology_raw(ngens: int, relation_columns) -> OracleHomology:
    """Oracle on a raw presentation: ngens generators, columns of relations."""
    cols = [list(map(int, c)) for c in relation_columns]
    matrix = [[c[i] for c in cols] for i in range(ngens)]
    if not cols:
        diag = []
    else:
        diag = list(smith_normal_form(matrix).diagonal)
    nonzero = [d for d in diag if d]
    free_rank = ngens - len(nonzero)
    torsion = tuple(sorted(d for d in nonzero if d > 1))
    if free_rank > 0:
        g = GradeValue(0)
    elif torsion:
        g = GradeValue(1)
    else:
        g = INFINITE_GRADE
    return OracleHomology(free_rank=free_rank, torsion_factors=torsion,
                          dual_rank=free_rank, ext1_factors=torsion, grade=g)


def oracle_homology(M: FPModule) -> OracleHomology:
    if M.ring.is_poly:
        raise ValueError("the SNF oracle works over the integer backend only")
    return oracle_homology_raw(M.ngens, list(M.relations))


def _shape(M: FPModule):
    o = oracle_homology(M)
    return (o.free_rank, o.torsion_factors)


def oracle_splits(ses: ShortExactSequence) -> bool:
    """Extension triviality by invariant-factor comparison: the middle is
    isomorphic to sub + quotient."""
    A, N, T = ses.sub, ses.middle, ses.quotient
    fa, ta = _shape(A)
    fn, tn = _shape(N)
    ft, tt = _shape(T)
    block_ngens = A.ngens + T.ngens
    block_cols = [tuple(c) + (0,) * T.ngens for c in A.relations]
    block_cols += [(0,) * A.ngens + tuple(c) for c in T.relations]
    o = oracle_homology_raw(block_ngens, block_cols)
    return (fn, tn) == (o.free_rank, o.torsion_factors)
