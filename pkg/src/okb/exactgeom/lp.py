"""Exact two-phase simplex over Fractions.

Problems are in equality form::

    maximize  c . x   subject to   A x = b,  x >= 0

Bland's rule is used throughout, so the method terminates; the problems in this
package have a handful of rows and columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from ..errors import UnboundedLPError


@dataclass(frozen=True)
class LPResult:
    feasible: bool
    x: Optional[List[Fraction]] = None
    value: Optional[Fraction] = None


def _pivot(tab: List[List[Fraction]], basis: List[int], row: int, col: int) -> None:
    p = tab[row][col]
    tab[row] = [v / p for v in tab[row]]
    for i, r in enumerate(tab):
        if i != row and r[col] != 0:
            f = r[col]
            tab[i] = [a - f * b for a, b in zip(r, tab[row])]
    basis[row] = col


def _run(tab, basis, cost_row: int, allowed: int) -> bool:
    """Iterate on the objective stored in ``tab[cost_row]`` (reduced costs,
    maximization: enter while some reduced cost is negative).

    Returns False when the objective is unbounded.
    """
    m = cost_row
    while True:
        col = next((j for j in range(allowed) if tab[m][j] < 0), None)
        if col is None:
            return True
        best = None
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(tab, basis, best[1], col)


def maximize(c: Sequence, a_eq: Sequence[Sequence], b_eq: Sequence) -> LPResult:
    """Maximize ``c.x`` over ``{x >= 0 : a_eq x = b_eq}``.

    Raises UnboundedLPError when feasible but unbounded.
    """
    m = len(a_eq)
    n = len(c)
    rows = []
    rhs = []
    for row, b in zip(a_eq, b_eq):
        row = [Fraction(v) for v in row]
        b = Fraction(b)
        if b < 0:
            row = [-v for v in row]
            b = -b
        rows.append(row)
        rhs.append(b)
    # phase one: artificial columns n .. n+m-1
    tab = []
    for i, row in enumerate(rows):
        art = [Fraction(int(i == k)) for k in range(m)]
        tab.append(row + art + [rhs[i]])
    basis = list(range(n, n + m))
    phase1 = [Fraction(0)] * (n + m + 1)
    for i in range(m):
        phase1 = [p - v for p, v in zip(phase1, tab[i])]
    for k in range(m):
        phase1[n + k] = Fraction(0)
    tab.append(phase1)
    _run(tab, basis, m, n + m)
    if tab[m][-1] != 0:
        return LPResult(False)
    # drive remaining artificials out of the basis
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, i, col)
    keep = [i for i in range(m) if basis[i] < n]
    tab = [tab[i][:n] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    cost = [-Fraction(v) for v in c] + [Fraction(0)]
    for i, bcol in enumerate(basis):
        if cost[bcol] != 0:
            f = cost[bcol]
            cost = [a - f * b for a, b in zip(cost, tab[i])]
    tab.append(cost)
    if not _run(tab, basis, len(basis), n):
        raise UnboundedLPError("objective is unbounded")
    x = [Fraction(0)] * n
    for i, bcol in enumerate(basis):
        x[bcol] = tab[i][-1]
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(True, x, value)


def feasible_point(a_eq: Sequence[Sequence], b_eq: Sequence, n: int) -> Optional[List[Fraction]]:
    """Some ``x >= 0`` with ``a_eq x = b_eq``, or None."""
    res = maximize([0] * n, a_eq, b_eq)
    return res.x if res.feasible else None


def in_cone(target: Sequence, generators: Sequence[Sequence]) -> Optional[List[Fraction]]:
    """Nonnegative coefficients expressing ``target`` in the generators, or None."""
    if not generators:
        return [] if all(Fraction(t) == 0 for t in target) else None
    dim = len(target)
    a_eq = [[Fraction(g[i]) for g in generators] for i in range(dim)]
    return feasible_point(a_eq, target, len(generators))


def feasible_free(a_ge: Sequence[Sequence], b_ge: Sequence, n: int) -> Optional[List[Fraction]]:
    """Some free ``y`` in R^n with ``a_ge y >= b_ge``, or None.

    Split ``y = p - q`` and add a slack per row.
    """
    rows = []
    m = len(a_ge)
    for i, row in enumerate(a_ge):
        row = [Fraction(v) for v in row]
        slack = [Fraction(-int(i == k)) for k in range(m)]
        rows.append(row + [-v for v in row] + slack)
    res = maximize([0] * (2 * n + m), rows, b_ge)
    if not res.feasible:
        return None
    return [res.x[i] - res.x[n + i] for i in range(n)]
