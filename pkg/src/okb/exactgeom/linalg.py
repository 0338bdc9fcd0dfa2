"""Small exact linear algebra over Fractions.

Matrices are lists of rows. Nothing here is fast; everything is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = to_matrix(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def independent_rows(rows: Sequence[Sequence], limit: Optional[int] = None) -> List[int]:
    """Greedy indices of a maximal linearly independent subset of ``rows``."""
    chosen: List[int] = []
    basis: Matrix = []
    pivcols: List[int] = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for b, pc in zip(basis, pivcols):
            if v[pc] != 0:
                f = v[pc]
                v = [a - f * c for a, c in zip(v, b)]
        pc = next((j for j, x in enumerate(v) if x != 0), None)
        if pc is None:
            continue
        inv = 1 / v[pc]
        v = [x * inv for x in v]
        # keep earlier basis rows reduced against the new pivot
        for k, b in enumerate(basis):
            if b[pc] != 0:
                f = b[pc]
                basis[k] = [a - f * c for a, c in zip(b, v)]
        basis.append(v)
        pivcols.append(pc)
        chosen.append(idx)
        if limit is not None and len(chosen) == limit:
            break
    return chosen


def solve(a: Sequence[Sequence], b: Sequence) -> List[Fraction]:
    """Solve the square nonsingular system ``a x = b``."""
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(rhs)] for row, rhs in zip(a, b)]
    red, piv = rref(aug)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [red[i][n] for i in range(n)]


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def det(a: Sequence[Sequence]) -> Fraction:
    m = to_matrix(a)
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            result = -result
        result *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def kernel(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """A basis of ``{x : rows x = 0}``."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in enumerate(piv):
            v[pc] = -red[r][f]
        basis.append(v)
    return basis


def gram(rows: Sequence[Sequence]) -> Matrix:
    return [[sum((a * b for a, b in zip(u, v)), Fraction(0)) for v in rows] for u in rows]


def maximal_minor_gcd(rows: Sequence[Sequence[int]]) -> int:
    """gcd of all maximal minors of an integer matrix of full row rank.

    This is the index of the row lattice inside its saturation.
    """
    d = len(rows)
    n = len(rows[0]) if rows else 0
    g = 0
    for cols in combinations(range(n), d):
        minor = det([[row[c] for c in cols] for row in rows])
        g = math.gcd(g, int(minor))
    return g


def inertia(sym: Sequence[Sequence]) -> Tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric rational matrix.

    Symmetric elimination by congruence; Sylvester's law makes the signs of the
    resulting diagonal the signature.
    """
    m = to_matrix(sym)
    n = len(m)
    pos = neg = 0
    active = list(range(n))
    while active:
        k = next((i for i in active if m[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in active for j in active if i < j and m[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # x_i <- x_i + x_j turns the off-diagonal entry into a diagonal one
            for r in range(n):
                m[r][i] += m[r][j]
            for c in range(n):
                m[i][c] += m[j][c]
            k = i
        p = m[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(k)
        for i in active:
            if m[i][k] != 0:
                f = m[i][k] / p
                for c in range(n):
                    m[i][c] -= f * m[k][c]
        for i in active:
            m[k][i] = m[i][k] = Fraction(0)
    return pos, neg, n - pos - neg
